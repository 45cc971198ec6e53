#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "orcalab/bitset.hpp"
#include "orcalab/errors.hpp"

namespace orcalab {

// Users and items are dense 0-based indices. External ids (MovieLens) are
// mapped through dictionaries at ingestion time.
using UserId = std::uint32_t;
using ItemId = std::uint32_t;
inline constexpr ItemId kNoItem = std::numeric_limits<ItemId>::max();

// ---------------------------------------------------------------------------
// PreferenceMatrix

/// M x N binary matrix stored as bit-packed rows.
class PreferenceMatrix {
 public:
  PreferenceMatrix(std::size_t users, std::size_t items);

  static PreferenceMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);
  static PreferenceMatrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t users() const { return rows_.size(); }
  std::size_t items() const { return items_; }

  // Checked access; throws IndexError.
  bool entry(std::size_t user, std::size_t item) const;
  void set(std::size_t user, std::size_t item, bool value);

  // Unchecked access for hot loops.
  bool at(std::size_t user, std::size_t item) const { return rows_[user].test(item); }
  const DynamicBitset& row(std::size_t user) const { return rows_[user]; }

  std::size_t likes_count(std::size_t user) const;
  // |{j in items : L[user][j] = 1}|
  std::size_t likes_count(std::size_t user, const DynamicBitset& items) const;
  std::size_t total_likes() const;
  std::size_t total_likes(const DynamicBitset& items) const;

  DynamicBitset column(std::size_t item) const;

  friend bool operator==(const PreferenceMatrix& a, const PreferenceMatrix& b);

 private:
  void check_index(std::size_t user, std::size_t item) const;

  std::size_t items_;
  std::vector<DynamicBitset> rows_;
};

struct ClassCounts {
  std::size_t row_classes = 0;     // C
  std::size_t column_classes = 0;  // D
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// Number of distinct rows and distinct columns: the smallest (C, D) for
/// which the matrix is (C, D)-biclustered.
ClassCounts equivalence_classes(const PreferenceMatrix& m);

// ---------------------------------------------------------------------------
// InventorySchedule

enum class InventoryMode { Static, Dynamic };

struct Arrival {
  std::size_t trial = 0;  // first trial (0-based) on which the items are available
  std::vector<ItemId> items;
};

/// Item availability over time. Static: I_t = [N]. Dynamic: I_t grows
/// monotonically as arrivals are applied.
class InventorySchedule {
 public:
  static InventorySchedule all_items(std::size_t items);
  // Throws ParameterError on duplicate items or ids >= universe.
  static InventorySchedule dynamic(std::size_t universe, std::vector<Arrival> arrivals);
  // Text format: one arrival per line, "trial item item ...". '#' starts a comment.
  static InventorySchedule parse_dynamic(std::istream& in, std::size_t universe);

  InventoryMode mode() const { return mode_; }
  std::size_t universe() const { return universe_; }
  const std::vector<Arrival>& arrivals() const { return arrivals_; }

  DynamicBitset items_at(std::size_t trial) const;
  // Trial on which the item first becomes available, or npos if never.
  std::size_t arrival_of(ItemId item) const;

  /// Incrementally maintains I_t for t = 0, 1, ... in increasing order.
  class Cursor {
   public:
    explicit Cursor(const InventorySchedule& schedule);
    const DynamicBitset& advance_to(std::size_t trial);
    const DynamicBitset& current() const { return current_; }
    std::size_t size() const { return count_; }

   private:
    const InventorySchedule* schedule_;
    std::size_t next_arrival_ = 0;
    std::size_t count_ = 0;
    DynamicBitset current_;
  };

 private:
  InventorySchedule(InventoryMode mode, std::size_t universe, std::vector<Arrival> arrivals);

  InventoryMode mode_;
  std::size_t universe_;
  std::vector<Arrival> arrivals_;  // sorted by trial; empty in Static mode
};

// ---------------------------------------------------------------------------
// InteractionLog

/// Which pseudocode branch produced a recommendation. ORCA uses Line3..Line5,
/// ORCA* uses Line3..Line7; baselines report Baseline.
enum class Branch : std::uint8_t { Line3, Line4, Line5, Line6, Line7, Baseline };

std::string_view to_string(Branch b);

struct TrialRecord {
  std::size_t trial = 0;
  UserId user = 0;
  ItemId item = 0;
  bool liked = false;
  Branch branch = Branch::Baseline;
  std::uint32_t level = 0;     // level k for pool branches, 0 otherwise
  std::uint32_t instance = 0;  // sub-learner index for fused / doubling learners
};

class InteractionLog {
 public:
  void append(const TrialRecord& r) { records_.push_back(r); }
  void reserve(std::size_t n) { records_.reserve(n); }

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const TrialRecord& operator[](std::size_t t) const { return records_[t]; }
  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }
  std::span<const TrialRecord> records() const { return records_; }

  std::vector<UserId> user_sequence() const;

  // Throws NoRepetitionViolation naming the first repeated pair.
  void check_no_repetition() const;
  // Throws ScheduleError if some item was not in I_t.
  void check_inventory(const InventorySchedule& schedule) const;

 private:
  std::vector<TrialRecord> records_;
};

// ---------------------------------------------------------------------------
// RngStream

/// Counter-based generator: draw k is a pure function of (seed, stream, k),
/// so repetitions seeded independently reproduce regardless of scheduling.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  // Uniform on [0, bound). bound must be > 0.
  std::uint64_t uniform_index(std::uint64_t bound);
  double uniform01();
  bool bernoulli(double p);

  // Independent stream derived from this generator's key.
  RngStream split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

// ---------------------------------------------------------------------------
// Tie breaking

enum class TieBreakPolicy { LowestIndex, MostPopular };

std::string_view to_string(TieBreakPolicy p);
TieBreakPolicy parse_tie_break(std::string_view s);

/// Per-item like tallies observed so far.
class Popularity {
 public:
  void record_like(ItemId item);
  std::uint32_t operator[](ItemId item) const {
    return item < counts_.size() ? counts_[item] : 0;
  }

 private:
  std::vector<std::uint32_t> counts_;
};

/// Resolves "select any item from a set". MostPopular picks the candidate with
/// the highest like tally, ties to the lowest index. Returns kNoItem if empty.
ItemId choose(TieBreakPolicy policy, const DynamicBitset& candidates, const Popularity& popularity);

// ---------------------------------------------------------------------------
// Shared recommendation history

/// The only state fused or doubling instances share: what each user has been
/// recommended so far, plus the observed-like popularity tally.
class RecommendationHistory {
 public:
  explicit RecommendationHistory(std::size_t items) : items_(items) {}

  std::size_t items() const { return items_; }

  const DynamicBitset& recommended(UserId user);
  bool was_recommended(UserId user, ItemId item) const;
  std::size_t recommended_count(UserId user) const;
  // Throws NoRepetitionViolation if the pair was already recorded.
  void record(UserId user, ItemId item, bool liked);

  const Popularity& popularity() const { return popularity_; }

 private:
  void ensure_user(UserId user);

  std::size_t items_;
  std::vector<DynamicBitset> recommended_;
  Popularity popularity_;
};

}  // namespace orcalab
