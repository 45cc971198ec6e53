#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

#include "orcalab/core_model.hpp"

namespace orcalab {

struct RegretReport {
  std::size_t rounds = 0;
  std::size_t learner_mistakes = 0;
  std::size_t oracle_mistakes = 0;
  std::int64_t regret = 0;  // learner_mistakes - oracle_mistakes
  std::size_t total_likes = 0;  // discovery-curve denominator
  // Per-round cumulative values, index t covers trials 0..t.
  std::vector<std::uint32_t> cumulative_mistakes;
  std::vector<std::int64_t> cumulative_regret;
  std::vector<double> discovery;
  double auc = 0.0;  // 100 x area under the discovery curve

  nlohmann::json to_json(bool include_curves = false) const;
  // Header "t,cum_mistakes,cum_regret,discovery", one row per round, t 1-based.
  void write_csv(std::ostream& out) const;
};

/// Mistakes of the omniscient oracle on a static inventory:
/// sum over users of max(queries - likes, 0). Throws ScheduleError if a user
/// is queried more than N times.
std::size_t static_oracle_mistakes(const PreferenceMatrix& m, std::span<const UserId> sequence);

/// Per-trial oracle mistakes for a (possibly dynamic) inventory. Trial t errs
/// iff the user's earlier successful trials already cover every liked item in
/// I_t. Throws ScheduleError if a user is queried more often than |I_t|.
std::vector<std::uint8_t> oracle_mistake_flags(const PreferenceMatrix& m, std::span<const UserId> sequence,
                                               const InventorySchedule& inventory);

std::size_t dynamic_oracle_mistakes(const PreferenceMatrix& m, std::span<const UserId> sequence,
                                    const InventorySchedule& inventory);

/// Trapezoidal area under y over x = t/T with the curve anchored at (0, 0),
/// scaled by 100.
double discovery_auc(std::span<const double> discovery);

/// Throws EmptyReportError on an empty log.
RegretReport compute_report(const PreferenceMatrix& m, const InteractionLog& log, const InventorySchedule& inventory);

}  // namespace orcalab
