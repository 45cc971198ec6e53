#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "checks.hpp"
#include "orcalab/core_model.hpp"

using namespace orcalab;

namespace {

// Users 1,2,3 and items a,b,c of the worked example, as 0-based indices.
PreferenceMatrix example_matrix() { return PreferenceMatrix::from_rows({{0, 1, 1}, {0, 1, 1}, {1, 0, 0}}); }

PreferenceMatrix random_matrix(std::size_t m, std::size_t n, RngStream& rng, double p = 0.5) {
  PreferenceMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.set(i, j, rng.bernoulli(p));
  }
  return out;
}

}  // namespace

TEST_CASE("entry") {
  CHECK(PreferenceMatrix::from_rows({{1}}).entry(0, 0));
  const auto l = example_matrix();
  CHECK(l.entry(0, 1));        // user 1 likes b
  CHECK_FALSE(l.entry(0, 0));  // user 1 dislikes a
  CHECK_THROWS_AS(l.entry(3, 0), IndexError);
  CHECK_THROWS_AS(l.entry(0, 3), IndexError);
  CHECK_THROWS_AS(PreferenceMatrix(0, 3), ParameterError);
}

TEST_CASE("bit-packed storage round-trips") {
  RngStream rng(5);
  for (std::size_t n : {1, 63, 64, 65, 200}) {
    std::vector<std::vector<int>> rows(7, std::vector<int>(n));
    for (auto& r : rows) {
      for (auto& v : r) v = rng.bernoulli(0.5) ? 1 : 0;
    }
    const auto m = PreferenceMatrix::from_rows(rows);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) CHECK(m.entry(i, j) == (rows[i][j] == 1));
    }
  }
}

TEST_CASE("equivalence_classes") {
  CHECK(equivalence_classes(PreferenceMatrix::from_rows({{1, 0}, {1, 0}, {0, 1}})) == ClassCounts{2, 2});
  CHECK(equivalence_classes(PreferenceMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == ClassCounts{3, 3});

  RngStream rng(11);
  for (int k = 0; k < 20; ++k) {
    // Few distinct values so that duplicates actually occur.
    const auto m = random_matrix(20, 20, rng, k % 2 == 0 ? 0.5 : 0.05);
    CHECK(equivalence_classes(m) == checks::brute_classes(m));
  }
}

TEST_CASE("equivalence_classes is invariant under row and column permutations") {
  RngStream rng(12);
  for (int k = 0; k < 10; ++k) {
    const auto m = random_matrix(15, 12, rng, 0.1);
    std::vector<std::size_t> rp(15), cp(12);
    for (std::size_t i = 0; i < rp.size(); ++i) rp[i] = i;
    for (std::size_t j = 0; j < cp.size(); ++j) cp[j] = j;
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    PreferenceMatrix p(15, 12);
    for (std::size_t i = 0; i < 15; ++i) {
      for (std::size_t j = 0; j < 12; ++j) p.set(i, j, m.entry(rp[i], cp[j]));
    }
    CHECK(equivalence_classes(p) == equivalence_classes(m));
  }
}

TEST_CASE("likes_count") {
  PreferenceMatrix ones(2, 3);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) ones.set(i, j, true);
  }
  CHECK(ones.likes_count(0, DynamicBitset(3, true)) == 3);
  CHECK(PreferenceMatrix(4, 4).likes_count(2, DynamicBitset(4, true)) == 0);

  RngStream rng(13);
  const auto m = random_matrix(10, 10, rng);
  DynamicBitset subset(10);
  for (std::size_t j = 0; j < 10; j += 3) subset.set(j);
  for (std::size_t i = 0; i < 10; ++i) {
    std::size_t all = 0;
    std::size_t some = 0;
    for (std::size_t j = 0; j < 10; ++j) {
      all += m.entry(i, j) ? 1 : 0;
      some += m.entry(i, j) && j % 3 == 0 ? 1 : 0;
    }
    CHECK(m.likes_count(i) == all);
    CHECK(m.likes_count(i, subset) == some);
  }
}

TEST_CASE("inventory schedules") {
  const auto st = InventorySchedule::all_items(5);
  CHECK(st.items_at(1000).count() == 5);

  std::istringstream in("# arrivals\n0 0 1\n3 4   # late\n\n2 2\n");
  const auto dyn = InventorySchedule::parse_dynamic(in, 5);
  CHECK(dyn.items_at(0).to_indices() == std::vector<std::size_t>{0, 1});
  CHECK(dyn.items_at(2).to_indices() == std::vector<std::size_t>{0, 1, 2});
  CHECK(dyn.items_at(9).to_indices() == std::vector<std::size_t>{0, 1, 2, 4});
  CHECK(dyn.arrival_of(4) == 3);
  CHECK(dyn.arrival_of(3) == DynamicBitset::npos);

  InventorySchedule::Cursor cursor(dyn);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(cursor.advance_to(t) == dyn.items_at(t));
    CHECK(cursor.size() == dyn.items_at(t).count());
  }

  CHECK_THROWS_AS(InventorySchedule::dynamic(3, {{0, {0}}, {1, {0}}}), ParameterError);
  CHECK_THROWS_AS(InventorySchedule::dynamic(3, {{0, {3}}}), ParameterError);
  std::istringstream bad("x 1\n");
  CHECK_THROWS_AS(InventorySchedule::parse_dynamic(bad, 3), FormatError);
}

TEST_CASE("interaction log checks") {
  InteractionLog log;
  log.append({0, 0, 1, true, Branch::Line5, 0, 0});
  log.append({1, 1, 1, false, Branch::Line4, 0, 0});
  CHECK_NOTHROW(log.check_no_repetition());
  CHECK(log.user_sequence() == std::vector<UserId>{0, 1});
  const auto dyn = InventorySchedule::dynamic(3, {{0, {0}}, {1, {1}}});
  CHECK_THROWS_AS(log.check_inventory(dyn), ScheduleError);
  CHECK_NOTHROW(log.check_inventory(InventorySchedule::all_items(3)));
  log.append({2, 0, 1, true, Branch::Line3, 1, 0});
  CHECK_THROWS_AS(log.check_no_repetition(), NoRepetitionViolation);
}

TEST_CASE("RngStream reproduces the first million draws") {
  RngStream a(2024), b(2024), c(2025);
  bool same = true;
  bool differs = false;
  for (int k = 0; k < 1'000'000; ++k) {
    const auto x = a();
    same = same && x == b();
    differs = differs || x != c();
  }
  CHECK(same);
  CHECK(differs);
  CHECK(RngStream(7, 1)() != RngStream(7, 2)());
}

TEST_CASE("uniform_index is uniform") {
  // Chi-square over k = 7 cells with 70000 draws; 6 degrees of freedom,
  // the 0.999 quantile is 22.46.
  RngStream rng(77);
  constexpr std::size_t k = 7;
  constexpr std::size_t n = 70000;
  std::vector<std::size_t> hits(k, 0);
  for (std::size_t d = 0; d < n; ++d) ++hits[rng.uniform_index(k)];
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / k;
  for (std::size_t h : hits) chi2 += (static_cast<double>(h) - expected) * (static_cast<double>(h) - expected) / expected;
  CHECK(chi2 < 22.46);
  CHECK_THROWS_AS(rng.uniform_index(0), ParameterError);

  double sum = 0.0;
  for (int d = 0; d < 100000; ++d) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
}

TEST_CASE("tie-break policies") {
  Popularity pop;
  pop.record_like(4);
  pop.record_like(4);
  pop.record_like(2);
  DynamicBitset cand(6);
  cand.set(1);
  cand.set(2);
  cand.set(4);
  CHECK(choose(TieBreakPolicy::LowestIndex, cand, pop) == 1);
  CHECK(choose(TieBreakPolicy::MostPopular, cand, pop) == 4);
  cand.reset(4);
  CHECK(choose(TieBreakPolicy::MostPopular, cand, pop) == 2);
  pop.record_like(1);
  CHECK(choose(TieBreakPolicy::MostPopular, cand, pop) == 1);  // tie goes to the lower index
  CHECK(choose(TieBreakPolicy::MostPopular, DynamicBitset(6), pop) == kNoItem);
  CHECK(parse_tie_break("popular") == TieBreakPolicy::MostPopular);
  CHECK(to_string(TieBreakPolicy::LowestIndex) == "lowest");
  CHECK_THROWS_AS(parse_tie_break("best"), ParameterError);
}

TEST_CASE("recommendation history rejects repeats") {
  RecommendationHistory h(4);
  h.record(2, 1, true);
  CHECK(h.was_recommended(2, 1));
  CHECK_FALSE(h.was_recommended(0, 1));
  CHECK(h.recommended_count(2) == 1);
  CHECK(h.popularity()[1] == 1);
  CHECK_THROWS_AS(h.record(2, 1, false), NoRepetitionViolation);
}
