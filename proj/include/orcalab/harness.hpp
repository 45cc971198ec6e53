#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "orcalab/core_model.hpp"
#include "orcalab/envgen.hpp"
#include "orcalab/ingestion.hpp"
#include "orcalab/learner.hpp"
#include "orcalab/oracle.hpp"

namespace orcalab {

// ---------------------------------------------------------------------------
// Learners by name

struct LearnerParams {
  std::uint32_t psi = 2;
  TieBreakPolicy tie_break = TieBreakPolicy::LowestIndex;
  InventoryMode inventory = InventoryMode::Static;
  bool share_feedback = false;
  std::uint64_t seed = 0;
  std::size_t users = 0;  // sizes the doubling grid; 0 grows it lazily
};

/// orca-uc, orca-ic, orca, orca-star-uie, orca-star-ue, orca-star,
/// orca-star-doubling, orca-pop-star, random, pop.
const std::vector<std::string>& learner_names();
/// Throws ParameterError on an unknown name.
std::unique_ptr<Learner> make_learner(std::string_view name, const LearnerParams& params,
                                      std::shared_ptr<RecommendationHistory> history);

// ---------------------------------------------------------------------------
// Single interaction loop

using FeedbackFn = std::function<bool(UserId, ItemId)>;

/// Plays the sequence against the learner. Throws NoRepetitionViolation if
/// an item is served twice to a user or lies outside I_t.
InteractionLog play(Learner& learner, std::span<const UserId> sequence, const InventorySchedule& inventory,
                    const FeedbackFn& feedback);

// ---------------------------------------------------------------------------
// Experiments

enum class EnvironmentKind { Synthetic, Matrix, MovieLens, Adversary };

std::string_view to_string(EnvironmentKind k);

struct SyntheticParams {
  std::size_t users = 100;
  std::size_t items = 100;
  std::size_t row_classes = 4;
  std::size_t column_classes = 4;
  double density = 0.5;
  std::size_t flips = 0;  // cells of the ground truth flipped to form L
};

struct ExperimentConfig {
  std::string algorithm = "orca";
  EnvironmentKind environment = EnvironmentKind::Synthetic;
  SyntheticParams synthetic;
  std::optional<PreferenceMatrix> matrix;             // Matrix
  std::shared_ptr<const RatingsFile> ratings;         // MovieLens
  std::size_t movielens_items = 50;
  std::size_t adversary_users = 50;                   // Adversary: M
  std::size_t adversary_blocks = 2;                   // Adversary: E
  std::size_t adversary_items = 0;                    // Adversary: N, 0 means E^2
  std::optional<std::vector<Arrival>> arrivals;       // dynamic inventory; unset = static

  SequenceKind sequence = SequenceKind::Uniform;
  std::size_t block_length = 0;
  std::size_t rounds = 0;             // 0: round(round_fraction * M * N)
  double round_fraction = 1.0;

  std::uint32_t psi = 2;
  TieBreakPolicy tie_break = TieBreakPolicy::LowestIndex;
  bool share_feedback = false;

  std::uint64_t seed = 1;
  std::size_t repetitions = 1;
  std::size_t threads = 0;            // 0: hardware concurrency, capped by ORCA_LAB_THREADS
  bool keep_logs = false;

  // Throws ParameterError on inconsistent settings.
  void validate() const;
  nlohmann::json to_json() const;
};

struct RepetitionResult {
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t users = 0;
  std::size_t items = 0;
  RegretReport report;
  double ms_per_round = 0.0;
  std::optional<InteractionLog> log;
  std::optional<PreferenceMatrix> matrix;  // kept with the log
};

struct Aggregate {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(n); 0 when n < 2
  std::size_t n = 0;
};

Aggregate aggregate(std::span<const double> values);

struct RunResult {
  std::vector<RepetitionResult> repetitions;
  Aggregate auc;
  Aggregate regret;
  Aggregate learner_mistakes;
  Aggregate oracle_mistakes;
  Aggregate ms_per_round;
  Aggregate users;
  Aggregate total_likes;

  nlohmann::json to_json() const;
};

/// Seed of repetition r; every random choice of the repetition derives from it.
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t repetition);

/// Worker count for `jobs` tasks: requested (0 = hardware), capped by
/// ORCA_LAB_THREADS and by `jobs`.
std::size_t worker_count(std::size_t requested, std::size_t jobs);

RepetitionResult run_repetition(const ExperimentConfig& config, std::size_t repetition);
RunResult run(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  nlohmann::json params;
  RunResult result;
};

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid);
// Columns: algorithm,environment,sequence,psi,tiebreak,rounds,reps,auc_mean,
// auc_stderr,regret_mean,regret_stderr,ms_per_round.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
nlohmann::json sweep_summary(const std::vector<SweepRow>& rows);

}  // namespace orcalab
