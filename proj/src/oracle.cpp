#include "orcalab/oracle.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace orcalab {

nlohmann::json RegretReport::to_json(bool include_curves) const {
  nlohmann::json j{{"rounds", rounds},
                   {"learner_mistakes", learner_mistakes},
                   {"oracle_mistakes", oracle_mistakes},
                   {"regret", regret},
                   {"total_likes", total_likes},
                   {"auc", auc}};
  if (include_curves) {
    j["cumulative_mistakes"] = cumulative_mistakes;
    j["cumulative_regret"] = cumulative_regret;
    j["discovery"] = discovery;
  }
  return j;
}

void RegretReport::write_csv(std::ostream& out) const {
  out << "t,cum_mistakes,cum_regret,discovery\n";
  for (std::size_t t = 0; t < rounds; ++t) {
    out << (t + 1) << ',' << cumulative_mistakes[t] << ',' << cumulative_regret[t] << ',' << discovery[t] << '\n';
  }
}

std::size_t static_oracle_mistakes(const PreferenceMatrix& m, std::span<const UserId> sequence) {
  std::vector<std::size_t> queries(m.users(), 0);
  for (UserId u : sequence) {
    if (u >= m.users()) throw IndexError("user " + std::to_string(u) + " outside matrix");
    if (++queries[u] > m.items()) {
      throw ScheduleError("user " + std::to_string(u) + " queried more than N=" + std::to_string(m.items()) + " times");
    }
  }
  std::size_t mistakes = 0;
  for (std::size_t i = 0; i < m.users(); ++i) {
    const std::size_t likes = m.likes_count(i);
    if (queries[i] > likes) mistakes += queries[i] - likes;
  }
  return mistakes;
}

std::vector<std::uint8_t> oracle_mistake_flags(const PreferenceMatrix& m, std::span<const UserId> sequence,
                                               const InventorySchedule& inventory) {
  if (inventory.universe() != m.items()) throw ParameterError("inventory universe does not match matrix");
  std::vector<std::uint8_t> flags(sequence.size(), 0);
  std::vector<std::size_t> successes(m.users(), 0);
  std::vector<std::size_t> queries(m.users(), 0);
  std::vector<std::size_t> static_likes;
  if (inventory.mode() == InventoryMode::Static) {
    static_likes.resize(m.users());
    for (std::size_t i = 0; i < m.users(); ++i) static_likes[i] = m.likes_count(i);
  }

  InventorySchedule::Cursor cursor(inventory);
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const UserId u = sequence[t];
    if (u >= m.users()) throw IndexError("user " + std::to_string(u) + " outside matrix");
    const DynamicBitset& items = cursor.advance_to(t);
    if (++queries[u] > cursor.size()) {
      throw ScheduleError("user " + std::to_string(u) + " queried more often than the inventory allows at trial " +
                          std::to_string(t));
    }
    const std::size_t liked_available = static_likes.empty() ? m.likes_count(u, items) : static_likes[u];
    // beta_t = 1 + successes; mistake iff beta_t > liked_available.
    if (successes[u] + 1 > liked_available) {
      flags[t] = 1;
    } else {
      ++successes[u];
    }
  }
  return flags;
}

std::size_t dynamic_oracle_mistakes(const PreferenceMatrix& m, std::span<const UserId> sequence,
                                    const InventorySchedule& inventory) {
  const auto flags = oracle_mistake_flags(m, sequence, inventory);
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

double discovery_auc(std::span<const double> discovery) {
  if (discovery.empty()) return 0.0;
  double area = 0.0;
  double prev = 0.0;
  for (double y : discovery) {
    area += 0.5 * (prev + y);
    prev = y;
  }
  return 100.0 * area / static_cast<double>(discovery.size());
}

RegretReport compute_report(const PreferenceMatrix& m, const InteractionLog& log, const InventorySchedule& inventory) {
  if (log.empty()) throw EmptyReportError("cannot build a report from an empty interaction log");

  std::vector<UserId> sequence;
  sequence.reserve(log.size());
  for (std::size_t t = 0; t < log.size(); ++t) {
    if (log[t].trial != t) throw ParameterError("interaction log trials must be 0..T-1 in order");
    sequence.push_back(log[t].user);
  }
  const auto oracle_flags = oracle_mistake_flags(m, sequence, inventory);

  RegretReport r;
  r.rounds = log.size();
  r.total_likes = m.total_likes(inventory.items_at(log.size() - 1));
  r.cumulative_mistakes.resize(r.rounds);
  r.cumulative_regret.resize(r.rounds);
  r.discovery.resize(r.rounds);

  std::size_t likes_found = 0;
  for (std::size_t t = 0; t < r.rounds; ++t) {
    if (log[t].liked) {
      ++likes_found;
    } else {
      ++r.learner_mistakes;
    }
    r.oracle_mistakes += oracle_flags[t];
    r.cumulative_mistakes[t] = static_cast<std::uint32_t>(r.learner_mistakes);
    r.cumulative_regret[t] =
        static_cast<std::int64_t>(r.learner_mistakes) - static_cast<std::int64_t>(r.oracle_mistakes);
    r.discovery[t] =
        r.total_likes == 0 ? 0.0 : static_cast<double>(likes_found) / static_cast<double>(r.total_likes);
  }
  r.regret = static_cast<std::int64_t>(r.learner_mistakes) - static_cast<std::int64_t>(r.oracle_mistakes);
  r.auc = discovery_auc(r.discovery);
  return r;
}

}  // namespace orcalab
