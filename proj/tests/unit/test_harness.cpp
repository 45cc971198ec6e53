#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orcalab/harness.hpp"

using namespace orcalab;

namespace {

ExperimentConfig matrix_config(const std::string& algo, PreferenceMatrix m) {
  ExperimentConfig c;
  c.algorithm = algo;
  c.environment = EnvironmentKind::Matrix;
  c.matrix = std::move(m);
  return c;
}

PreferenceMatrix filled(std::size_t m, std::size_t n, bool v) {
  PreferenceMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, v);
  }
  return out;
}

}  // namespace

TEST_CASE("all-ones matrix: no mistakes for any learner") {
  for (const auto& name : learner_names()) {
    auto c = matrix_config(name, filled(3, 3, true));
    c.sequence = SequenceKind::RoundRobin;
    const auto r = run(c);
    CAPTURE(name);
    CHECK(r.repetitions.at(0).report.rounds == 9);
    CHECK(r.learner_mistakes.mean == 0.0);
    CHECK(r.regret.mean == 0.0);
  }
}

TEST_CASE("all-zeros matrix: regret is zero") {
  for (const auto& name : learner_names()) {
    const auto r = run(matrix_config(name, filled(4, 5, false)));
    CAPTURE(name);
    CHECK(r.learner_mistakes.mean == 20.0);
    CHECK(r.oracle_mistakes.mean == 20.0);
    CHECK(r.regret.mean == 0.0);
  }
}

TEST_CASE("adversary forces (E-1)M mistakes") {
  ExperimentConfig c;
  c.algorithm = "orca-ic";
  c.environment = EnvironmentKind::Adversary;
  c.adversary_users = 100;
  c.adversary_blocks = 4;
  const auto r = run(c);
  const auto& rep = r.repetitions.at(0).report;
  CHECK(r.repetitions[0].items == 16);
  CHECK(rep.rounds == 400);
  CHECK(rep.learner_mistakes >= 300);
  CHECK(rep.oracle_mistakes == 0);
}

TEST_CASE("aggregate matches an independent recomputation") {
  const std::vector<double> v{1.0, 2.0, 4.0, 7.0};
  const auto a = aggregate(v);
  const double mean = 3.5;
  const double var = ((1 - mean) * (1 - mean) + (2 - mean) * (2 - mean) + (4 - mean) * (4 - mean) +
                      (7 - mean) * (7 - mean)) / 3.0;
  CHECK(a.n == 4);
  CHECK(a.mean == doctest::Approx(mean));
  CHECK(a.stderr_ == doctest::Approx(std::sqrt(var / 4.0)));
  CHECK(aggregate(std::vector<double>{5.0}).stderr_ == 0.0);
}

TEST_CASE("runs are deterministic regardless of thread count") {
  ExperimentConfig c;
  c.algorithm = "orca-star";
  c.synthetic = {30, 20, 3, 3, 0.5, 10};
  c.repetitions = 4;
  c.seed = 99;
  c.threads = 1;
  const auto one = run(c);
  c.threads = 3;
  const auto three = run(c);
  REQUIRE(one.repetitions.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(one.repetitions[r].seed == three.repetitions[r].seed);
    CHECK(one.repetitions[r].report.regret == three.repetitions[r].report.regret);
    CHECK(one.repetitions[r].report.auc == three.repetitions[r].report.auc);
  }
  CHECK(one.auc.mean == three.auc.mean);
  CHECK(repetition_seed(99, 0) != repetition_seed(99, 1));
}

TEST_CASE("a one-cell sweep equals run") {
  ExperimentConfig c;
  c.algorithm = "orca";
  c.synthetic = {20, 20, 2, 2, 0.5, 0};
  c.repetitions = 2;
  const auto rows = sweep({c});
  const auto direct = run(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].result.regret.mean == direct.regret.mean);
  CHECK(rows[0].result.auc.mean == direct.auc.mean);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  CHECK(csv.str().rfind("algorithm,environment,sequence,psi,tiebreak,rounds,reps,auc_mean", 0) == 0);
  CHECK(sweep_summary(rows).size() == 1);
}

TEST_CASE("keep_logs retains a consistent log") {
  ExperimentConfig c;
  c.algorithm = "orca-star-doubling";
  c.synthetic = {10, 10, 2, 2, 0.5, 5};
  c.keep_logs = true;
  const auto r = run(c);
  const auto& rep = r.repetitions.at(0);
  REQUIRE(rep.log.has_value());
  REQUIRE(rep.matrix.has_value());
  CHECK(rep.log->size() == rep.report.rounds);
  CHECK_NOTHROW(rep.log->check_no_repetition());
  for (const auto& t : *rep.log) CHECK(t.liked == rep.matrix->entry(t.user, t.item));
}

TEST_CASE("dynamic inventory runs stay inside I_t") {
  ExperimentConfig c;
  c.algorithm = "orca";
  c.synthetic = {12, 8, 2, 2, 0.5, 0};
  c.arrivals = std::vector<Arrival>{{0, {0, 1, 2, 3}}, {20, {4, 5}}, {40, {6, 7}}};
  c.keep_logs = true;
  const auto r = run(c);
  const auto& rep = r.repetitions.at(0);
  const auto inv = InventorySchedule::dynamic(8, *c.arrivals);
  CHECK_NOTHROW(rep.log->check_inventory(inv));
  CHECK(rep.report.rounds == 96);
}

TEST_CASE("time per round grows at most linearly in N") {
  // Median of several runs keeps scheduling noise out of the ratio.
  auto ms = [](std::size_t n) {
    std::vector<double> samples;
    for (int k = 0; k < 5; ++k) {
      ExperimentConfig c;
      c.algorithm = "orca-star";
      c.synthetic = {200, n, 8, 8, 0.5, 0};
      c.round_fraction = 0.5;
      c.seed = static_cast<std::uint64_t>(k + 1);
      c.threads = 1;
      samples.push_back(run(c).ms_per_round.mean);
    }
    std::sort(samples.begin(), samples.end());
    return samples[2];
  };
  const double t50 = ms(50), t100 = ms(100), t200 = ms(200);
  CHECK(t100 / t50 <= 3.0);
  CHECK(t200 / t100 <= 3.0);
}

TEST_CASE("validation errors") {
  ExperimentConfig c;
  c.repetitions = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ExperimentConfig{};
  c.algorithm = "nope";
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ExperimentConfig{};
  c.environment = EnvironmentKind::Adversary;
  c.arrivals = std::vector<Arrival>{{0, {0}}};
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ExperimentConfig{};
  c.environment = EnvironmentKind::Matrix;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ExperimentConfig{};
  c.environment = EnvironmentKind::MovieLens;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = ExperimentConfig{};
  c.psi = 1;
  c.algorithm = "orca-star";
  CHECK_THROWS_AS(c.validate(), ParameterError);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  CHECK(ExperimentConfig{}.to_json()["algorithm"] == "orca");
}

TEST_CASE("learner factory") {
  CHECK(learner_names().size() == 10);
  auto h = std::make_shared<RecommendationHistory>(4);
  for (const auto& name : learner_names()) CHECK(make_learner(name, {}, h) != nullptr);
  CHECK_THROWS_AS(make_learner("orca-plus", {}, h), ParameterError);
}

TEST_CASE("play fails when a user has nothing left in I_t") {
  auto h = std::make_shared<RecommendationHistory>(2);
  auto learner = make_learner("random", {}, h);
  const auto inv = InventorySchedule::dynamic(2, {{0, {0}}});
  const std::vector<UserId> seq{0, 0};
  CHECK_THROWS(play(*learner, seq, inv, [](UserId, ItemId) { return true; }));
}

TEST_CASE("worker count honours the environment cap") {
  CHECK(worker_count(4, 2) == 2);
  CHECK(worker_count(4, 10) <= 4);
  CHECK(worker_count(0, 1) == 1);
}
