#include "orcalab/core_model.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <sstream>
#include <string>

namespace orcalab {

// ---------------------------------------------------------------------------
// PreferenceMatrix

PreferenceMatrix::PreferenceMatrix(std::size_t users, std::size_t items) : items_(items) {
  if (users == 0 || items == 0) {
    throw ParameterError("preference matrix needs at least one user and one item");
  }
  rows_.assign(users, DynamicBitset(items));
}

PreferenceMatrix PreferenceMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<int>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

PreferenceMatrix PreferenceMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw ParameterError("preference matrix needs at least one user and one item");
  }
  PreferenceMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.items_) throw ParameterError("ragged matrix rows");
    for (std::size_t j = 0; j < m.items_; ++j) {
      if (rows[i][j] != 0 && rows[i][j] != 1) throw ParameterError("matrix entries must be 0 or 1");
      if (rows[i][j] == 1) m.rows_[i].set(j);
    }
  }
  return m;
}

void PreferenceMatrix::check_index(std::size_t user, std::size_t item) const {
  if (user >= rows_.size() || item >= items_) {
    throw IndexError("matrix index (" + std::to_string(user) + ", " + std::to_string(item) +
                     ") out of range for " + std::to_string(rows_.size()) + "x" +
                     std::to_string(items_));
  }
}

bool PreferenceMatrix::entry(std::size_t user, std::size_t item) const {
  check_index(user, item);
  return rows_[user].test(item);
}

void PreferenceMatrix::set(std::size_t user, std::size_t item, bool value) {
  check_index(user, item);
  if (value) {
    rows_[user].set(item);
  } else {
    rows_[user].reset(item);
  }
}

std::size_t PreferenceMatrix::likes_count(std::size_t user) const {
  check_index(user, 0);
  return rows_[user].count();
}

std::size_t PreferenceMatrix::likes_count(std::size_t user, const DynamicBitset& items) const {
  check_index(user, 0);
  const auto r = rows_[user].words();
  const auto s = items.words();
  const std::size_t n = std::min(r.size(), s.size());
  std::size_t total = 0;
  for (std::size_t w = 0; w < n; ++w) total += static_cast<std::size_t>(std::popcount(r[w] & s[w]));
  return total;
}

std::size_t PreferenceMatrix::total_likes() const {
  std::size_t total = 0;
  for (const auto& r : rows_) total += r.count();
  return total;
}

std::size_t PreferenceMatrix::total_likes(const DynamicBitset& items) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < rows_.size(); ++i) total += likes_count(i, items);
  return total;
}

DynamicBitset PreferenceMatrix::column(std::size_t item) const {
  check_index(0, item);
  DynamicBitset col(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].test(item)) col.set(i);
  }
  return col;
}

bool operator==(const PreferenceMatrix& a, const PreferenceMatrix& b) {
  return a.items_ == b.items_ && a.rows_ == b.rows_;
}

namespace {

std::size_t distinct_count(std::vector<std::vector<DynamicBitset::Word>> keys) {
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

ClassCounts equivalence_classes(const PreferenceMatrix& m) {
  std::vector<std::vector<DynamicBitset::Word>> row_keys;
  row_keys.reserve(m.users());
  for (std::size_t i = 0; i < m.users(); ++i) {
    const auto w = m.row(i).words();
    row_keys.emplace_back(w.begin(), w.end());
  }

  const std::size_t col_words = (m.users() + DynamicBitset::kWordBits - 1) / DynamicBitset::kWordBits;
  std::vector<std::vector<DynamicBitset::Word>> col_keys(m.items(),
                                                         std::vector<DynamicBitset::Word>(col_words, 0));
  for (std::size_t i = 0; i < m.users(); ++i) {
    const auto bit = DynamicBitset::Word{1} << (i % DynamicBitset::kWordBits);
    m.row(i).for_each_set([&](std::size_t j) { col_keys[j][i / DynamicBitset::kWordBits] |= bit; });
  }
  return {distinct_count(std::move(row_keys)), distinct_count(std::move(col_keys))};
}

// ---------------------------------------------------------------------------
// InventorySchedule

InventorySchedule::InventorySchedule(InventoryMode mode, std::size_t universe, std::vector<Arrival> arrivals)
    : mode_(mode), universe_(universe), arrivals_(std::move(arrivals)) {}

InventorySchedule InventorySchedule::all_items(std::size_t items) {
  if (items == 0) throw ParameterError("inventory needs at least one item");
  return InventorySchedule(InventoryMode::Static, items, {});
}

InventorySchedule InventorySchedule::dynamic(std::size_t universe, std::vector<Arrival> arrivals) {
  if (universe == 0) throw ParameterError("inventory needs at least one item");
  std::stable_sort(arrivals.begin(), arrivals.end(),
                   [](const Arrival& a, const Arrival& b) { return a.trial < b.trial; });
  DynamicBitset seen(universe);
  for (const auto& a : arrivals) {
    for (ItemId j : a.items) {
      if (j >= universe) {
        throw ParameterError("arriving item " + std::to_string(j) + " outside universe of " +
                             std::to_string(universe));
      }
      if (seen.test(j)) throw ParameterError("item " + std::to_string(j) + " added twice");
      seen.set(j);
    }
  }
  return InventorySchedule(InventoryMode::Dynamic, universe, std::move(arrivals));
}

InventorySchedule InventorySchedule::parse_dynamic(std::istream& in, std::size_t universe) {
  std::vector<Arrival> arrivals;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long trial = 0;
    if (!(ss >> trial)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw FormatError("arrivals line " + std::to_string(line_no) + ": expected trial index");
    }
    if (trial < 0) throw FormatError("arrivals line " + std::to_string(line_no) + ": negative trial");
    Arrival a;
    a.trial = static_cast<std::size_t>(trial);
    long long item = 0;
    while (ss >> item) {
      if (item < 0) throw FormatError("arrivals line " + std::to_string(line_no) + ": negative item");
      a.items.push_back(static_cast<ItemId>(item));
    }
    if (!ss.eof()) throw FormatError("arrivals line " + std::to_string(line_no) + ": bad item id");
    arrivals.push_back(std::move(a));
  }
  return dynamic(universe, std::move(arrivals));
}

DynamicBitset InventorySchedule::items_at(std::size_t trial) const {
  if (mode_ == InventoryMode::Static) return DynamicBitset(universe_, true);
  DynamicBitset out(universe_);
  for (const auto& a : arrivals_) {
    if (a.trial > trial) break;
    for (ItemId j : a.items) out.set(j);
  }
  return out;
}

std::size_t InventorySchedule::arrival_of(ItemId item) const {
  if (item >= universe_) return DynamicBitset::npos;
  if (mode_ == InventoryMode::Static) return 0;
  for (const auto& a : arrivals_) {
    if (std::find(a.items.begin(), a.items.end(), item) != a.items.end()) return a.trial;
  }
  return DynamicBitset::npos;
}

InventorySchedule::Cursor::Cursor(const InventorySchedule& schedule)
    : schedule_(&schedule), current_(schedule.universe()) {
  if (schedule.mode() == InventoryMode::Static) {
    current_ = DynamicBitset(schedule.universe(), true);
    count_ = schedule.universe();
  }
}

const DynamicBitset& InventorySchedule::Cursor::advance_to(std::size_t trial) {
  const auto& arrivals = schedule_->arrivals_;
  while (next_arrival_ < arrivals.size() && arrivals[next_arrival_].trial <= trial) {
    for (ItemId j : arrivals[next_arrival_].items) {
      current_.set(j);
      ++count_;
    }
    ++next_arrival_;
  }
  return current_;
}

// ---------------------------------------------------------------------------
// InteractionLog

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::Line3: return "line3";
    case Branch::Line4: return "line4";
    case Branch::Line5: return "line5";
    case Branch::Line6: return "line6";
    case Branch::Line7: return "line7";
    case Branch::Baseline: return "baseline";
  }
  return "?";
}

std::vector<UserId> InteractionLog::user_sequence() const {
  std::vector<UserId> seq;
  seq.reserve(records_.size());
  for (const auto& r : records_) seq.push_back(r.user);
  return seq;
}

void InteractionLog::check_no_repetition() const {
  std::vector<DynamicBitset> seen;
  for (const auto& r : records_) {
    if (r.user >= seen.size()) seen.resize(r.user + 1);
    if (seen[r.user].test(r.item)) {
      throw NoRepetitionViolation("item " + std::to_string(r.item) + " recommended twice to user " +
                                  std::to_string(r.user) + " (trial " + std::to_string(r.trial) + ")");
    }
    seen[r.user].set(r.item);
  }
}

void InteractionLog::check_inventory(const InventorySchedule& schedule) const {
  InventorySchedule::Cursor cursor(schedule);
  for (const auto& r : records_) {
    if (!cursor.advance_to(r.trial).test(r.item)) {
      throw ScheduleError("item " + std::to_string(r.item) + " not in inventory at trial " +
                          std::to_string(r.trial));
    }
  }
}

// ---------------------------------------------------------------------------
// RngStream

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), key_(mix64(seed + kGolden) ^ mix64(stream * 0xd1b54a32d192ed03ULL + 1)) {}

RngStream::result_type RngStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

__extension__ using Wide = unsigned __int128;

std::uint64_t RngStream::uniform_index(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("uniform_index bound must be positive");
  // Lemire's nearly-divisionless bounded draw.
  Wide m = static_cast<Wide>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<Wide>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

RngStream RngStream::split(std::uint64_t stream) const {
  RngStream child(seed_, 0);
  child.key_ = mix64(key_ ^ mix64(stream + kGolden));
  return child;
}

// ---------------------------------------------------------------------------
// Tie breaking

std::string_view to_string(TieBreakPolicy p) {
  return p == TieBreakPolicy::LowestIndex ? "lowest" : "popular";
}

TieBreakPolicy parse_tie_break(std::string_view s) {
  if (s == "lowest") return TieBreakPolicy::LowestIndex;
  if (s == "popular") return TieBreakPolicy::MostPopular;
  throw ParameterError("unknown tie-break policy '" + std::string(s) + "'");
}

void Popularity::record_like(ItemId item) {
  if (item >= counts_.size()) counts_.resize(static_cast<std::size_t>(item) + 1, 0);
  ++counts_[item];
}

ItemId choose(TieBreakPolicy policy, const DynamicBitset& candidates, const Popularity& popularity) {
  if (policy == TieBreakPolicy::LowestIndex) {
    const auto first = candidates.find_first();
    return first == DynamicBitset::npos ? kNoItem : static_cast<ItemId>(first);
  }
  ItemId best = kNoItem;
  std::uint32_t best_count = 0;
  candidates.for_each_set([&](std::size_t j) {
    const auto c = popularity[static_cast<ItemId>(j)];
    if (best == kNoItem || c > best_count) {
      best = static_cast<ItemId>(j);
      best_count = c;
    }
  });
  return best;
}

// ---------------------------------------------------------------------------
// RecommendationHistory

void RecommendationHistory::ensure_user(UserId user) {
  if (user >= recommended_.size()) recommended_.resize(static_cast<std::size_t>(user) + 1, DynamicBitset(items_));
}

const DynamicBitset& RecommendationHistory::recommended(UserId user) {
  ensure_user(user);
  return recommended_[user];
}

bool RecommendationHistory::was_recommended(UserId user, ItemId item) const {
  return user < recommended_.size() && recommended_[user].test(item);
}

std::size_t RecommendationHistory::recommended_count(UserId user) const {
  return user < recommended_.size() ? recommended_[user].count() : 0;
}

void RecommendationHistory::record(UserId user, ItemId item, bool liked) {
  ensure_user(user);
  if (recommended_[user].test(item)) {
    throw NoRepetitionViolation("item " + std::to_string(item) + " recommended twice to user " +
                                std::to_string(user));
  }
  recommended_[user].set(item);
  if (liked) popularity_.record_like(item);
}

}  // namespace orcalab
