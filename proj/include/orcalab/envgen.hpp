#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orcalab/core_model.hpp"

namespace orcalab {

// ---------------------------------------------------------------------------
// Biclustered matrices

struct BiclusterSpec {
  std::size_t row_classes = 0;
  std::size_t column_classes = 0;
  std::vector<std::uint32_t> row_class;     // user -> class
  std::vector<std::uint32_t> column_class;  // item -> class
  std::vector<std::vector<std::uint8_t>> blocks;  // row_classes x column_classes
};

struct BiclusteredMatrix {
  PreferenceMatrix matrix;
  BiclusterSpec spec;
};

/// M x N matrix with exactly C distinct rows and D distinct columns. Every
/// class is non-empty; block values are drawn at the given density and then
/// repaired cell by cell until block rows and columns are pairwise distinct.
/// Throws ParameterError when (C, D) cannot be realized.
BiclusteredMatrix gen_biclustered(std::size_t users, std::size_t items, std::size_t row_classes,
                                  std::size_t column_classes, double density, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Perturbation

/// Flips exactly `flips` distinct cells chosen uniformly.
PreferenceMatrix perturb_exact(const PreferenceMatrix& truth, std::size_t flips, std::uint64_t seed);
/// Flips each cell independently with probability p.
PreferenceMatrix perturb_bernoulli(const PreferenceMatrix& truth, double p, std::uint64_t seed);

struct PerturbationReport {
  std::uint32_t psi = 0;
  std::vector<std::size_t> user_perturbation;  // flipped cells per row
  std::vector<std::size_t> item_perturbation;  // flipped cells per column
  std::vector<UserId> bad_users;
  std::vector<ItemId> bad_items;
  std::vector<UserId> sequence;

  std::size_t bad_user_count() const { return bad_users.size(); }  // m
  std::size_t bad_item_count() const { return bad_items.size(); }  // n(psi)
};

/// A user is bad iff its row has flips and it is queried more than
/// (likes - 2 * flips) times; an item is bad iff its column has more than psi flips.
PerturbationReport perturbation_report(const PreferenceMatrix& observed, const PreferenceMatrix& truth,
                                       std::span<const UserId> sequence, std::uint32_t psi);

// ---------------------------------------------------------------------------
// User sequences

enum class SequenceKind { Uniform, RoundRobin, Blocks };

std::string_view to_string(SequenceKind k);
SequenceKind parse_sequence_kind(std::string_view s);

/// Generates up to `rounds` users. A user is only emitted while it has been
/// queried fewer times than |I_t|; the sequence ends early if no user is
/// available. Blocks emits user i on `block_length` consecutive trials
/// (default ceil(rounds / users)).
std::vector<UserId> user_sequence(SequenceKind kind, std::size_t users, std::size_t rounds,
                                  const InventorySchedule& inventory, std::uint64_t seed,
                                  std::size_t block_length = 0);

// ---------------------------------------------------------------------------
// Adaptive lower-bound adversary

/// Items are split into E equal blocks. Each user's row is the indicator of
/// one block, chosen adaptively: a query is answered with a like only when
/// every other block is already ruled out for that user. Any learner then
/// errs at least E - 1 times on each user queried E times.
class AdversaryEnv {
 public:
  // Throws ParameterError unless 1 <= blocks <= items and blocks divides items.
  AdversaryEnv(std::size_t users, std::size_t items, std::size_t blocks);

  std::size_t users() const { return users_; }
  std::size_t items() const { return items_; }
  std::size_t blocks() const { return blocks_; }
  std::size_t block_size() const { return items_ / blocks_; }
  std::size_t block_of(ItemId item) const { return item / block_size(); }

  // Throws ScheduleError after E queries for the user or on a repeated item.
  bool answer(UserId user, ItemId item);

  std::size_t queries(UserId user) const { return queries_.at(user); }
  const DynamicBitset& consistent_blocks(UserId user) const { return consistent_.at(user); }
  // Block assigned to the user's row: the lowest consistent block.
  std::size_t assignment(UserId user) const;

  PreferenceMatrix realized_matrix() const;

 private:
  std::size_t users_;
  std::size_t items_;
  std::size_t blocks_;
  std::vector<DynamicBitset> consistent_;
  std::vector<DynamicBitset> answered_;
  std::vector<std::size_t> queries_;
};

// ---------------------------------------------------------------------------
// Matrix text format: "M N" then M lines of N characters in {0,1}.

void write_matrix(std::ostream& out, const PreferenceMatrix& m);
PreferenceMatrix read_matrix(std::istream& in);
// Gzip-compressed files are detected and decompressed transparently.
PreferenceMatrix read_matrix_file(const std::string& path);
// Writes gzip when the path ends in ".gz".
void write_matrix_file(const std::string& path, const PreferenceMatrix& m);

}  // namespace orcalab
