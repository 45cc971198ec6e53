// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero iff some criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "orcalab/harness.hpp"
#include "orcalab/ingestion.hpp"

using namespace orcalab;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome = Outcome::Fail;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Verdict from_suite(const checks::SuiteResult& s, double time_limit = 0.0) {
  std::string detail = fmt("%zu cases, %zu violations, %.2f s", s.cases, s.violations, s.seconds);
  for (const auto& m : s.samples) detail += "\n      " + m;
  bool ok = s.passed();
  if (time_limit > 0.0 && s.seconds >= time_limit) {
    ok = false;
    detail += fmt("\n      exceeded the %.0f s budget", time_limit);
  }
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

// Horizon for the regret experiments. With T = M*N every user is shown every
// item, learner and oracle mistakes coincide and regret is identically zero,
// so these runs stop after a quarter of the cells.
constexpr double kRegretHorizon = 0.25;
constexpr std::size_t kReps = 30;

ExperimentConfig synthetic(std::string algo, std::size_t users, std::size_t items, std::size_t c, std::size_t d,
                           std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.algorithm = std::move(algo);
  cfg.environment = EnvironmentKind::Synthetic;
  cfg.synthetic = {users, items, c, d, 0.5, 0};
  cfg.round_fraction = kRegretHorizon;
  cfg.repetitions = kReps;
  cfg.seed = seed;
  return cfg;
}

Verdict criterion1() { return from_suite(checks::no_repetition_suite(1000, 64, 101), 10.0); }

Verdict criterion2() { return from_suite(checks::level_bound_suite(500, 200, 8, 202)); }

Verdict criterion3() { return from_suite(checks::separation_suite(400, 32, 303)); }

Verdict criterion4() {
  const std::size_t sums[] = {100, 200, 400, 800};
  std::vector<double> ratios;
  std::string detail;
  for (std::size_t s : sums) {
    const auto r = run(synthetic("orca", s / 2, s / 2, 4, 4, 404));
    const double ratio = r.regret.mean / (4.0 * static_cast<double>(s));
    ratios.push_back(ratio);
    detail += fmt("M+N=%zu regret %.1f+-%.1f ratio %.3f; ", s, r.regret.mean, r.regret.stderr_, ratio);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  const bool ok = *lo > 0.0 && *hi / *lo < 2.0;
  detail += fmt("c_hat=%.3f, spread %.2fx (limit 2x)", *hi, *lo > 0.0 ? *hi / *lo : INFINITY);
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Verdict criterion5() {
  const std::size_t blocks[] = {2, 4, 8};
  const std::size_t users[] = {50, 200};
  const std::string learners[] = {"orca-ic", "orca-uc", "random"};
  return from_suite(checks::adversary_suite(blocks, users, learners, 505));
}

Verdict criterion6() { return from_suite(checks::oracle_equivalence_suite(3, 4, 6, 200, 606)); }

Verdict criterion7() { return from_suite(checks::definition_one_suite(200, 707)); }

Verdict criterion8() {
  const std::size_t flips[] = {0, 50, 200, 800};
  constexpr std::uint32_t kPsi = 4;
  std::vector<RunResult> runs;
  std::string detail;
  for (std::size_t f : flips) {
    auto cfg = synthetic("orca-star", 200, 200, 16, 4, 808);
    cfg.synthetic.flips = f;
    cfg.psi = kPsi;
    runs.push_back(run(cfg));
    detail += fmt("flips=%zu regret %.1f+-%.1f; ", f, runs.back().regret.mean, runs.back().regret.stderr_);
  }
  bool ok = true;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].regret.mean < runs[k - 1].regret.mean) {
      ok = false;
      detail += fmt("decrease between %zu and %zu flips; ", flips[k - 1], flips[k]);
    }
  }
  const auto base = run(synthetic("orca", 200, 200, 16, 4, 808));
  const double cap = static_cast<double>(kPsi) * base.regret.mean;
  detail += fmt("fused ORCA regret %.1f, cap %.1f", base.regret.mean, cap);
  if (runs[0].regret.mean > cap) ok = false;
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Verdict criterion9() {
  const char* path = std::getenv("ORCA_MOVIELENS_PATH");
  if (path == nullptr || *path == '\0') {
    return {Outcome::Skip, "set ORCA_MOVIELENS_PATH to a MovieLens-1M ratings.dat to run this check"};
  }
  const auto start = std::chrono::steady_clock::now();
  auto ratings = std::make_shared<const RatingsFile>(parse_movielens(path));
  struct Target {
    const char* algo;
    double mean;
    double tolerance;
  };
  const Target targets[] = {
      {"orca-pop-star", 79.3, 3.0}, {"orca-ic", 77.0, 3.0}, {"pop", 60.1, 4.0}, {"random", 50.1, 1.0}};
  std::vector<double> auc;
  std::string detail;
  bool ok = true;
  for (const Target& t : targets) {
    ExperimentConfig cfg;
    cfg.algorithm = t.algo;
    cfg.environment = EnvironmentKind::MovieLens;
    cfg.ratings = ratings;
    cfg.movielens_items = 50;
    cfg.repetitions = kReps;
    cfg.seed = 909;
    const auto r = run(cfg);
    auc.push_back(r.auc.mean);
    const bool in_band = std::abs(r.auc.mean - t.mean) <= t.tolerance;
    ok = ok && in_band;
    detail += fmt("%s %.2f+-%.2f (target %.1f+-%.1f)%s; ", t.algo, r.auc.mean, r.auc.stderr_, t.mean, t.tolerance,
                  in_band ? "" : " OUT");
  }
  const bool ordered = auc[0] > auc[1] && auc[1] > auc[2] && auc[2] > auc[3];
  const double minutes =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
  detail += fmt("ordering %s, %.1f min", ordered ? "ok" : "WRONG", minutes);
  ok = ok && ordered && minutes <= 30.0;
  return {ok ? Outcome::Pass : Outcome::Fail, detail};
}

Verdict criterion10() {
  // MovieLens-like shape: M = 5290 users, N = 200 items, sparse likes.
  ExperimentConfig cfg;
  cfg.algorithm = "orca-star";
  cfg.environment = EnvironmentKind::Synthetic;
  cfg.synthetic = {5290, 200, 16, 16, 0.05, 0};
  cfg.repetitions = 1;
  cfg.threads = 1;
  cfg.seed = 1010;
  const auto r = run(cfg);
  const double ms = r.ms_per_round.mean;
  return {ms <= 0.1 ? Outcome::Pass : Outcome::Fail,
          fmt("%.5f ms/round over %zu rounds (limit 0.1)", ms, r.repetitions[0].report.rounds)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"no-repetition and feasibility", criterion1},
      {"level bounds", criterion2},
      {"separation and tree properties", criterion3},
      {"regret scaling", criterion4},
      {"adversarial lower bound", criterion5},
      {"oracle equivalence", criterion6},
      {"perturbation accounting", criterion7},
      {"ORCA* robustness trend", criterion8},
      {"MovieLens reproduction", criterion9},
      {"throughput", criterion10},
  };
  // Optional arguments select criteria by number.
  std::vector<bool> selected(criteria.size(), argc <= 1);
  for (int a = 1; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) selected[k - 1] = true;
  }

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!selected[k]) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Skip ? "SKIP" : "FAIL";
    failures += v.outcome == Outcome::Fail ? 1 : 0;
    std::printf("%s criterion %zu (%s): %s\n", tag, k + 1, criteria[k].first, v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
