#pragma once

// Brute-force reference implementations and invariant suites. These recompute
// everything from the raw matrix with plain loops and share no code paths
// with the library beyond the data types.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "orcalab/core_model.hpp"
#include "orcalab/envgen.hpp"
#include "orcalab/orca.hpp"

namespace orcalab::checks {

// ---------------------------------------------------------------------------
// Reference computations

/// Distinct rows / columns by pairwise comparison.
ClassCounts brute_classes(const PreferenceMatrix& m);

/// Greedy omniscient oracle played trial by trial: serve any unrecommended
/// liked item in I_t, otherwise err. Returns per-trial mistake flags.
std::vector<std::uint8_t> greedy_oracle(const PreferenceMatrix& m, std::span<const UserId> sequence,
                                        std::span<const std::size_t> arrival_trial);

/// Arrival trial per item (0 for a static inventory, SIZE_MAX for never).
std::vector<std::size_t> arrival_trials(const InventorySchedule& inventory);

struct DefinitionOne {
  std::vector<UserId> bad_users;
  std::vector<ItemId> bad_items;
};

DefinitionOne recount_definition_one(const PreferenceMatrix& observed, const PreferenceMatrix& truth,
                                     std::span<const UserId> sequence, std::uint32_t psi);

/// Midpoint rule on the piecewise-linear discovery interpolant through
/// (0, 0), (1/T, y_1), ..., (1, y_T), times 100.
double auc_midpoint(std::span<const double> discovery, std::size_t subdivisions = 8);

// ---------------------------------------------------------------------------
// Level structure of a finished ORCA run

/// U_l for every level l = 1..l*. UC: users agreeing with the creator on
/// r_1..r_l. IC: users liking r_l.
std::vector<std::vector<bool>> level_user_sets(const Orca& orca, const PreferenceMatrix& m);

/// Violations of: for l < l', U_l' is disjoint from or a strict subset of U_l.
std::vector<std::string> tree_property_violations(const std::vector<std::vector<bool>>& sets);

/// Violations of: for l'' < l' with c_l' in U_l'', some user of U_l''
/// dislikes r_l'.
std::vector<std::string> separation_violations(const Orca& orca, const PreferenceMatrix& m,
                                               const std::vector<std::vector<bool>>& sets);

// ---------------------------------------------------------------------------
// Suites

struct SuiteResult {
  explicit SuiteResult(std::string suite = {}) : name(std::move(suite)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::vector<std::string> samples;  // first few violation messages
  double seconds = 0.0;

  bool passed() const { return cases > 0 && violations == 0; }
  void fail(std::string message);
};

/// Randomized runs over all learners, static and dynamic inventories,
/// 2 <= M, N <= max_dim. Counts repeats and items outside I_t.
SuiteResult no_repetition_suite(std::size_t runs, std::size_t max_dim, std::uint64_t seed);

/// Final l* <= D (IC) and <= 2C (UC) on biclustered instances, for the
/// standalone variants and both halves of the fused learner.
SuiteResult level_bound_suite(std::size_t runs, std::size_t max_dim, std::size_t max_classes, std::uint64_t seed);

/// Tree and separation properties after UC runs (separation also for IC).
SuiteResult separation_suite(std::size_t runs, std::size_t max_dim, std::uint64_t seed);

/// Oracle formulas against the greedy simulation: exhaustive static
/// enumeration up to (max_users, max_items, max_len), exhaustive dynamic
/// enumeration on a smaller box, then `random_cases` random 8x8 instances.
SuiteResult oracle_equivalence_suite(std::size_t max_users, std::size_t max_items, std::size_t max_len,
                                     std::size_t random_cases, std::uint64_t seed);

/// perturbation_report against the independent recount.
SuiteResult definition_one_suite(std::size_t cases, std::uint64_t seed);

/// Every learner must err at least (E-1)M times against the adversary while
/// the oracle errs 0 times, with answers consistent with the realized matrix.
SuiteResult adversary_suite(std::span<const std::size_t> blocks, std::span<const std::size_t> users,
                            std::span<const std::string> learners, std::uint64_t seed);

}  // namespace orcalab::checks
