// orca_lab: generate matrices, ingest MovieLens, run and sweep experiments,
// and run the invariant suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "checks.hpp"
#include "orcalab/harness.hpp"

using namespace orcalab;

namespace {

struct EnvOptions {
  std::string matrix;
  std::string movielens;
  std::size_t movielens_items = 50;
  std::size_t adversary_blocks = 0;
  std::size_t adversary_items = 0;
  SyntheticParams synthetic;
  std::string arrivals;
};

struct RunOptions {
  std::vector<std::string> algos{"orca"};
  std::vector<std::string> seqs{"uniform"};
  std::vector<std::uint32_t> psis{2};
  std::vector<std::string> tiebreaks{"lowest"};
  std::size_t rounds = 0;
  double round_fraction = 1.0;
  std::uint64_t seed = 1;
  std::size_t reps = 1;
  std::size_t threads = 0;
  bool share_feedback = false;
  std::string out;
};

void add_env_options(CLI::App* app, EnvOptions& e) {
  app->add_option("--matrix", e.matrix, "Preference matrix file (text, optionally gzip)");
  app->add_option("--movielens", e.movielens, "MovieLens ratings file");
  app->add_option("--items", e.movielens_items, "Items sampled from MovieLens / synthetic item count");
  app->add_option("--adversary", e.adversary_blocks, "Adversarial environment with E blocks");
  app->add_option("--adversary-items", e.adversary_items, "Adversary item count (default E^2)");
  app->add_option("--users", e.synthetic.users, "Synthetic / adversary user count");
  app->add_option("--row-classes", e.synthetic.row_classes, "Synthetic distinct rows C");
  app->add_option("--col-classes", e.synthetic.column_classes, "Synthetic distinct columns D");
  app->add_option("--density", e.synthetic.density, "Synthetic block density");
  app->add_option("--flips", e.synthetic.flips, "Cells flipped after generation");
  app->add_option("--dynamic-arrivals", e.arrivals, "Arrival schedule: lines of 'trial item item ...'");
}

void add_run_options(CLI::App* app, RunOptions& r, bool multi) {
  auto* algo = app->add_option("--algo", r.algos, "Algorithm");
  auto* seq = app->add_option("--seq", r.seqs, "User sequence: uniform|roundrobin|blocks");
  auto* psi = app->add_option("--psi", r.psis, "ORCA* perturbation tolerance (>= 2)");
  auto* tb = app->add_option("--tiebreak", r.tiebreaks, "Tie-break: lowest|popular");
  if (!multi) {
    for (auto* o : {algo, seq, psi, tb}) o->expected(1);
  }
  app->add_option("--rounds", r.rounds, "Rounds T (default M*N)");
  app->add_option("--round-fraction", r.round_fraction, "T as a fraction of M*N when --rounds is unset");
  app->add_option("--seed", r.seed, "Base seed");
  app->add_option("--reps", r.reps, "Repetitions");
  app->add_option("--threads", r.threads, "Worker threads (ORCA_LAB_THREADS caps this)");
  app->add_flag("--share-feedback", r.share_feedback, "Fused instances log each other's feedback");
  app->add_option("--out", r.out, "Output path");
}

ExperimentConfig base_config(const EnvOptions& e, const RunOptions& r) {
  ExperimentConfig c;
  if (!e.matrix.empty()) {
    c.environment = EnvironmentKind::Matrix;
    c.matrix = read_matrix_file(e.matrix);
  } else if (!e.movielens.empty()) {
    c.environment = EnvironmentKind::MovieLens;
    c.ratings = std::make_shared<const RatingsFile>(parse_movielens(e.movielens));
    c.movielens_items = e.movielens_items;
  } else if (e.adversary_blocks != 0) {
    c.environment = EnvironmentKind::Adversary;
    c.adversary_blocks = e.adversary_blocks;
    c.adversary_users = e.synthetic.users;
    c.adversary_items = e.adversary_items;
  } else {
    c.environment = EnvironmentKind::Synthetic;
    c.synthetic = e.synthetic;
    c.synthetic.items = e.movielens_items;
  }
  if (!e.arrivals.empty()) {
    std::size_t universe = 0;
    switch (c.environment) {
      case EnvironmentKind::Matrix: universe = c.matrix->items(); break;
      case EnvironmentKind::Synthetic: universe = c.synthetic.items; break;
      default: throw ParameterError("--dynamic-arrivals needs a matrix or synthetic environment");
    }
    std::ifstream in(e.arrivals);
    if (!in) throw IoError("cannot open " + e.arrivals);
    c.arrivals = InventorySchedule::parse_dynamic(in, universe).arrivals();
  }
  c.rounds = r.rounds;
  c.round_fraction = r.round_fraction;
  c.seed = r.seed;
  c.repetitions = r.reps;
  c.threads = r.threads;
  c.share_feedback = r.share_feedback;
  return c;
}

std::vector<ExperimentConfig> grid(const ExperimentConfig& base, const RunOptions& r) {
  std::vector<ExperimentConfig> cells;
  for (const auto& algo : r.algos) {
    for (const auto& seq : r.seqs) {
      for (std::uint32_t psi : r.psis) {
        for (const auto& tb : r.tiebreaks) {
          ExperimentConfig c = base;
          c.algorithm = algo;
          c.sequence = parse_sequence_kind(seq);
          c.psi = psi;
          c.tie_break = parse_tie_break(tb);
          c.validate();
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
}

int cmd_generate(const EnvOptions& e, std::uint64_t seed, const std::string& out, const std::string& truth_out) {
  const auto& s = e.synthetic;
  RngStream rng(seed);
  auto gen = gen_biclustered(s.users, e.movielens_items, s.row_classes, s.column_classes, s.density, rng());
  const PreferenceMatrix observed = s.flips == 0 ? gen.matrix : perturb_exact(gen.matrix, s.flips, rng());
  write_matrix_file(out, observed);
  if (!truth_out.empty()) write_matrix_file(truth_out, gen.matrix);
  const auto cc = equivalence_classes(observed);
  std::cout << nlohmann::json{{"users", observed.users()},
                              {"items", observed.items()},
                              {"likes", observed.total_likes()},
                              {"row_classes", cc.row_classes},
                              {"column_classes", cc.column_classes}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_ingest(const EnvOptions& e, std::uint64_t seed, const std::string& out) {
  if (e.movielens.empty()) throw ParameterError("ingest needs --movielens");
  const auto rf = parse_movielens(e.movielens);
  const auto ingested = binarize_and_subsample(rf, e.movielens_items, seed);
  nlohmann::json summary{{"records", rf.records.size()},
                         {"malformed", rf.malformed},
                         {"users", ingested.user_ids.size()},
                         {"items", ingested.movie_ids.size()},
                         {"likes", ingested.like_records},
                         {"movie_ids", ingested.movie_ids}};
  if (ingested.empty()) {
    std::cerr << "no likes among the sampled movies; no matrix written\n";
  } else if (!out.empty()) {
    write_matrix_file(out, *ingested.matrix);
  }
  std::cout << summary.dump() << '\n';
  return 0;
}

int cmd_simulate(const EnvOptions& e, const RunOptions& r) {
  ExperimentConfig c = grid(base_config(e, r), r).front();
  c.keep_logs = !r.out.empty();
  RunResult result = run(c);
  if (!r.out.empty()) {
    for (const auto& rep : result.repetitions) {
      const std::string path = c.repetitions == 1 ? r.out : r.out + ".rep" + std::to_string(rep.repetition);
      std::ofstream out(path);
      if (!out) throw IoError("cannot open " + path + " for writing");
      rep.report.write_csv(out);
    }
  }
  nlohmann::json j = result.to_json();
  j["config"] = c.to_json();
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_sweep(const EnvOptions& e, const RunOptions& r) {
  const auto rows = sweep(grid(base_config(e, r), r));
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  if (r.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(r.out, csv.str());
    write_file(r.out + ".json", sweep_summary(rows).dump(2) + "\n");
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, bool quick) {
  using namespace orcalab::checks;
  const std::size_t scale = quick ? 10 : 1;
  const std::size_t blocks[] = {2, 4, 8};
  const std::size_t users[] = {50, 200};
  const std::string learners[] = {"orca-ic", "orca-uc", "orca", "random"};
  std::map<std::string, std::function<SuiteResult()>> suites{
      {"norepeat", [&] { return no_repetition_suite(1000 / scale, 64, seed); }},
      {"levels", [&] { return level_bound_suite(500 / scale, quick ? 64 : 200, 8, seed); }},
      {"separation", [&] { return separation_suite(400 / scale, 32, seed); }},
      {"oracle", [&] { return oracle_equivalence_suite(quick ? 2 : 3, quick ? 3 : 4, quick ? 4 : 6, 200, seed); }},
      {"definition", [&] { return definition_one_suite(200, seed); }},
      {"adversary", [&] { return adversary_suite(blocks, users, learners, seed); }},
  };
  if (suite != "all" && !suites.contains(suite)) throw ParameterError("unknown suite '" + suite + "'");
  int failures = 0;
  for (const auto& [name, fn] : suites) {
    if (suite != "all" && suite != name) continue;
    const SuiteResult s = fn();
    std::printf("%s %s: %zu cases, %zu violations, %.2f s\n", s.passed() ? "PASS" : "FAIL", name.c_str(), s.cases,
                s.violations, s.seconds);
    for (const auto& m : s.samples) std::printf("  %s\n", m.c_str());
    failures += s.passed() ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online collaborative filtering experiments"};
  app.require_subcommand(1);

  EnvOptions env;
  RunOptions runopts;
  std::uint64_t seed = 1;
  std::string out;
  std::string truth_out;

  auto* generate = app.add_subcommand("generate", "Write a synthetic biclustered matrix");
  add_env_options(generate, env);
  generate->add_option("--seed", seed, "Seed");
  generate->add_option("--out", out, "Output matrix path (.gz compresses)")->required();
  generate->add_option("--truth-out", truth_out, "Also write the unperturbed matrix");

  auto* ingest = app.add_subcommand("ingest", "Binarize and subsample MovieLens ratings");
  add_env_options(ingest, env);
  ingest->add_option("--seed", seed, "Seed");
  ingest->add_option("--out", out, "Output matrix path");

  auto* simulate = app.add_subcommand("simulate", "Run one configuration");
  add_env_options(simulate, env);
  add_run_options(simulate, runopts, false);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the cartesian product of the given values");
  add_env_options(sweep_cmd, env);
  add_run_options(sweep_cmd, runopts, true);

  std::string suite = "all";
  bool quick = false;
  auto* verify = app.add_subcommand("verify", "Run invariant suites against brute-force references");
  verify->add_option("--suite", suite, "norepeat|levels|separation|oracle|definition|adversary|all");
  verify->add_option("--seed", seed, "Seed");
  verify->add_flag("--quick", quick, "Smaller instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(env, seed, out, truth_out);
    if (ingest->parsed()) return cmd_ingest(env, seed, out);
    if (simulate->parsed()) return cmd_simulate(env, runopts);
    if (sweep_cmd->parsed()) return cmd_sweep(env, runopts);
    if (verify->parsed()) return cmd_verify(suite, seed, quick);
  } catch (const NoRepetitionViolation& e) {
    std::cerr << "no-repetition violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
