#include "orcalab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include "orcalab/fused.hpp"
#include "orcalab/orca.hpp"
#include "orcalab/orca_star.hpp"

namespace orcalab {

const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"orca-uc",       "orca-ic",           "orca",
                                              "orca-star-uie", "orca-star-ue",      "orca-star",
                                              "orca-star-doubling", "orca-pop-star", "random",
                                              "pop"};
  return names;
}

namespace {

std::unique_ptr<Learner> make_orca(ClusterMode mode, const LearnerParams& p, std::uint64_t seed,
                                   std::shared_ptr<RecommendationHistory> history) {
  return std::make_unique<Orca>(OrcaOptions{mode, p.inventory, p.tie_break, seed}, std::move(history));
}

std::unique_ptr<Learner> make_star(ExclusionVariant variant, TieBreakPolicy tie_break, const LearnerParams& p,
                                   std::uint64_t seed, std::shared_ptr<RecommendationHistory> history) {
  return std::make_unique<OrcaStar>(OrcaStarOptions{variant, p.psi, tie_break, seed}, std::move(history));
}

}  // namespace

std::unique_ptr<Learner> make_learner(std::string_view name, const LearnerParams& p,
                                      std::shared_ptr<RecommendationHistory> history) {
  const std::uint64_t s0 = mix64(p.seed ^ 0x5eedULL);
  const std::uint64_t s1 = mix64(p.seed ^ 0xf00dULL);
  if (name == "orca-uc") return make_orca(ClusterMode::UserClusters, p, s0, history);
  if (name == "orca-ic") return make_orca(ClusterMode::ItemClusters, p, s0, history);
  if (name == "orca") {
    return std::make_unique<FusedLearner>("orca", make_orca(ClusterMode::UserClusters, p, s0, history),
                                          make_orca(ClusterMode::ItemClusters, p, s1, history), p.share_feedback);
  }
  if (name == "orca-star-uie") return make_star(ExclusionVariant::UserItem, p.tie_break, p, s0, history);
  if (name == "orca-star-ue") return make_star(ExclusionVariant::User, p.tie_break, p, s0, history);
  if (name == "orca-star" || name == "orca-pop-star") {
    const TieBreakPolicy tb = name == "orca-pop-star" ? TieBreakPolicy::MostPopular : p.tie_break;
    return std::make_unique<FusedLearner>(std::string(name), make_star(ExclusionVariant::UserItem, tb, p, s0, history),
                                          make_star(ExclusionVariant::User, tb, p, s1, history), p.share_feedback);
  }
  if (name == "orca-star-doubling") {
    return std::make_unique<FusedLearner>(
        "orca-star-doubling",
        std::make_unique<OrcaStarDoubling>(ExclusionVariant::UserItem, p.tie_break, s0, history, p.users),
        std::make_unique<OrcaStarDoubling>(ExclusionVariant::User, p.tie_break, s1, history, p.users),
        p.share_feedback);
  }
  if (name == "random") return std::make_unique<RandomLearner>(s0, std::move(history));
  if (name == "pop") return std::make_unique<PopularityLearner>(std::move(history));
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

InteractionLog play(Learner& learner, std::span<const UserId> sequence, const InventorySchedule& inventory,
                    const FeedbackFn& feedback) {
  InteractionLog log;
  log.reserve(sequence.size());
  std::vector<DynamicBitset> served;
  InventorySchedule::Cursor cursor(inventory);
  for (std::size_t t = 0; t < sequence.size(); ++t) {
    const UserId user = sequence[t];
    const DynamicBitset& items = cursor.advance_to(t);
    const Recommendation rec = learner.recommend(user, items);
    if (user >= served.size()) served.resize(user + 1, DynamicBitset(inventory.universe()));
    if (rec.item >= inventory.universe() || !items.test(rec.item)) {
      throw NoRepetitionViolation(learner.name() + " recommended item " + std::to_string(rec.item) +
                                  " outside the inventory at trial " + std::to_string(t));
    }
    if (served[user].test(rec.item)) {
      throw NoRepetitionViolation(learner.name() + " repeated item " + std::to_string(rec.item) + " for user " +
                                  std::to_string(user) + " at trial " + std::to_string(t));
    }
    served[user].set(rec.item);
    const bool liked = feedback(user, rec.item);
    learner.observe(user, rec.item, liked);
    log.append({t, user, rec.item, liked, rec.branch, rec.level, rec.instance});
  }
  return log;
}

// ---------------------------------------------------------------------------

std::string_view to_string(EnvironmentKind k) {
  switch (k) {
    case EnvironmentKind::Synthetic: return "synthetic";
    case EnvironmentKind::Matrix: return "matrix";
    case EnvironmentKind::MovieLens: return "movielens";
    case EnvironmentKind::Adversary: return "adversary";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (repetitions == 0) throw ParameterError("repetitions must be at least 1");
  if (psi < 2) throw ParameterError("psi must be at least 2");
  if (!(round_fraction > 0.0)) throw ParameterError("round fraction must be positive");
  bool known = false;
  for (const auto& n : learner_names()) known = known || n == algorithm;
  if (!known) throw ParameterError("unknown algorithm '" + algorithm + "'");
  switch (environment) {
    case EnvironmentKind::Synthetic: break;
    case EnvironmentKind::Matrix:
      if (!matrix) throw ParameterError("matrix environment needs a matrix");
      break;
    case EnvironmentKind::MovieLens:
      if (!ratings) throw ParameterError("movielens environment needs parsed ratings");
      if (arrivals) throw ParameterError("movielens environment uses a static inventory");
      break;
    case EnvironmentKind::Adversary: {
      if (arrivals) throw ParameterError("the adversary requires a static inventory");
      const std::size_t n = adversary_items != 0 ? adversary_items : adversary_blocks * adversary_blocks;
      if (adversary_blocks == 0 || n % adversary_blocks != 0) {
        throw ParameterError("adversary block count must divide the item count");
      }
      break;
    }
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j{{"algorithm", algorithm},
                   {"environment", to_string(environment)},
                   {"sequence", to_string(sequence)},
                   {"rounds", rounds},
                   {"round_fraction", round_fraction},
                   {"psi", psi},
                   {"tiebreak", to_string(tie_break)},
                   {"share_feedback", share_feedback},
                   {"seed", seed},
                   {"repetitions", repetitions},
                   {"dynamic", arrivals.has_value()}};
  switch (environment) {
    case EnvironmentKind::Synthetic:
      j["synthetic"] = {{"users", synthetic.users},
                        {"items", synthetic.items},
                        {"row_classes", synthetic.row_classes},
                        {"column_classes", synthetic.column_classes},
                        {"density", synthetic.density},
                        {"flips", synthetic.flips}};
      break;
    case EnvironmentKind::Matrix:
      if (matrix) j["matrix"] = {{"users", matrix->users()}, {"items", matrix->items()}};
      break;
    case EnvironmentKind::MovieLens:
      j["movielens"] = {{"path", ratings ? ratings->path : ""}, {"items", movielens_items}};
      break;
    case EnvironmentKind::Adversary:
      j["adversary"] = {{"users", adversary_users}, {"blocks", adversary_blocks}, {"items", adversary_items}};
      break;
  }
  return j;
}

Aggregate aggregate(std::span<const double> values) {
  Aggregate a;
  a.n = values.size();
  if (a.n == 0) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(a.n);
  if (a.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stderr_ = std::sqrt(ss / static_cast<double>(a.n - 1)) / std::sqrt(static_cast<double>(a.n));
  }
  return a;
}

namespace {

nlohmann::json to_json(const Aggregate& a) { return {{"mean", a.mean}, {"stderr", a.stderr_}, {"n", a.n}}; }

struct Environment {
  std::optional<PreferenceMatrix> matrix;
  std::optional<AdversaryEnv> adversary;
  std::size_t users = 0;
  std::size_t items = 0;
};

Environment build_environment(const ExperimentConfig& c, RngStream& rng) {
  Environment env;
  switch (c.environment) {
    case EnvironmentKind::Synthetic: {
      const auto& s = c.synthetic;
      auto truth = gen_biclustered(s.users, s.items, s.row_classes, s.column_classes, s.density, rng());
      env.matrix = s.flips == 0 ? std::move(truth.matrix) : perturb_exact(truth.matrix, s.flips, rng());
      break;
    }
    case EnvironmentKind::Matrix:
      env.matrix = *c.matrix;
      break;
    case EnvironmentKind::MovieLens: {
      auto ingested = binarize_and_subsample(*c.ratings, c.movielens_items, rng());
      if (ingested.empty()) throw EmptyReportError("sampled movies contain no likes");
      env.matrix = std::move(ingested.matrix);
      break;
    }
    case EnvironmentKind::Adversary: {
      const std::size_t n = c.adversary_items != 0 ? c.adversary_items : c.adversary_blocks * c.adversary_blocks;
      env.adversary.emplace(c.adversary_users, n, c.adversary_blocks);
      env.users = c.adversary_users;
      env.items = n;
      return env;
    }
  }
  env.users = env.matrix->users();
  env.items = env.matrix->items();
  return env;
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t repetition) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (repetition + 1));
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested != 0 ? requested : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("ORCA_LAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(cap, &end, 10);
    if (end != cap && v > 0) n = std::min<std::size_t>(n, v);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

RepetitionResult run_repetition(const ExperimentConfig& c, std::size_t repetition) {
  RepetitionResult r;
  r.repetition = repetition;
  r.seed = repetition_seed(c.seed, repetition);
  RngStream env_rng(r.seed, 1);
  Environment env = build_environment(c, env_rng);
  r.users = env.users;
  r.items = env.items;

  const InventorySchedule inventory =
      c.arrivals ? InventorySchedule::dynamic(env.items, *c.arrivals) : InventorySchedule::all_items(env.items);
  std::size_t rounds = c.rounds;
  if (rounds == 0) {
    rounds = static_cast<std::size_t>(std::llround(c.round_fraction * static_cast<double>(env.users * env.items)));
  }
  const std::size_t block = c.environment == EnvironmentKind::Adversary && c.block_length == 0
                                ? c.adversary_blocks
                                : c.block_length;
  const SequenceKind kind = c.environment == EnvironmentKind::Adversary ? SequenceKind::Blocks : c.sequence;
  if (c.environment == EnvironmentKind::Adversary && c.rounds == 0) rounds = env.users * block;
  const auto sequence = user_sequence(kind, env.users, rounds, inventory, RngStream(r.seed, 2)(), block);

  auto history = std::make_shared<RecommendationHistory>(env.items);
  LearnerParams params{c.psi, c.tie_break, inventory.mode(), c.share_feedback, RngStream(r.seed, 3)(), env.users};
  auto learner = make_learner(c.algorithm, params, history);

  FeedbackFn feedback;
  if (env.adversary) {
    feedback = [&](UserId u, ItemId j) { return env.adversary->answer(u, j); };
  } else {
    feedback = [&](UserId u, ItemId j) { return env.matrix->at(u, j); };
  }
  const auto start = std::chrono::steady_clock::now();
  InteractionLog log = play(*learner, sequence, inventory, feedback);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (env.adversary) env.matrix = env.adversary->realized_matrix();

  r.report = compute_report(*env.matrix, log, inventory);
  r.ms_per_round = log.empty() ? 0.0 : elapsed / static_cast<double>(log.size());
  if (c.keep_logs) {
    r.log = std::move(log);
    r.matrix = std::move(env.matrix);
  }
  return r;
}

RunResult run(const ExperimentConfig& c) {
  c.validate();
  RunResult out;
  out.repetitions.resize(c.repetitions);
  std::vector<std::exception_ptr> errors(c.repetitions);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t rep = next++; rep < c.repetitions; rep = next++) {
      try {
        out.repetitions[rep] = run_repetition(c, rep);
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };
  const std::size_t workers = worker_count(c.threads, c.repetitions);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto collect = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : out.repetitions) v.push_back(field(r));
    return aggregate(v);
  };
  out.auc = collect([](const RepetitionResult& r) { return r.report.auc; });
  out.regret = collect([](const RepetitionResult& r) { return static_cast<double>(r.report.regret); });
  out.learner_mistakes = collect([](const RepetitionResult& r) { return static_cast<double>(r.report.learner_mistakes); });
  out.oracle_mistakes = collect([](const RepetitionResult& r) { return static_cast<double>(r.report.oracle_mistakes); });
  out.ms_per_round = collect([](const RepetitionResult& r) { return r.ms_per_round; });
  out.users = collect([](const RepetitionResult& r) { return static_cast<double>(r.users); });
  out.total_likes = collect([](const RepetitionResult& r) { return static_cast<double>(r.report.total_likes); });
  return out;
}

nlohmann::json RunResult::to_json() const {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& r : repetitions) {
    nlohmann::json j = r.report.to_json();
    j["repetition"] = r.repetition;
    j["seed"] = r.seed;
    j["users"] = r.users;
    j["items"] = r.items;
    j["ms_per_round"] = r.ms_per_round;
    reps.push_back(std::move(j));
  }
  return {{"auc", orcalab::to_json(auc)},
          {"regret", orcalab::to_json(regret)},
          {"learner_mistakes", orcalab::to_json(learner_mistakes)},
          {"oracle_mistakes", orcalab::to_json(oracle_mistakes)},
          {"ms_per_round", orcalab::to_json(ms_per_round)},
          {"users", orcalab::to_json(users)},
          {"total_likes", orcalab::to_json(total_likes)},
          {"repetitions", std::move(reps)}};
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (const auto& cell : grid) rows.push_back({cell.to_json(), run(cell)});
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "algorithm,environment,sequence,psi,tiebreak,rounds,reps,auc_mean,auc_stderr,regret_mean,regret_stderr,"
         "ms_per_round\n";
  for (const auto& row : rows) {
    const auto& p = row.params;
    const auto& r = row.result;
    out << p["algorithm"].get<std::string>() << ',' << p["environment"].get<std::string>() << ','
        << p["sequence"].get<std::string>() << ',' << p["psi"].get<std::uint32_t>() << ','
        << p["tiebreak"].get<std::string>() << ',' << p["rounds"].get<std::size_t>() << ','
        << p["repetitions"].get<std::size_t>() << ',' << r.auc.mean << ',' << r.auc.stderr_ << ',' << r.regret.mean
        << ',' << r.regret.stderr_ << ',' << r.ms_per_round.mean << '\n';
  }
}

nlohmann::json sweep_summary(const std::vector<SweepRow>& rows) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = row.result.to_json();
    r.erase("repetitions");
    cells.push_back({{"params", row.params}, {"result", std::move(r)}});
  }
  return {{"cells", std::move(cells)}};
}

}  // namespace orcalab
