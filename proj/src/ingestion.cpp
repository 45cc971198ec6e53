#include "orcalab/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <string_view>
#include <unordered_map>

namespace orcalab {

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + sep.size();
  }
}

bool parse_record(std::string_view line, std::string_view sep, Rating& r) {
  const auto fields = split(line, sep);
  if (fields.size() != 4) return false;
  if (!parse_number(fields[0], r.user) || !parse_number(fields[1], r.movie) || !parse_number(fields[2], r.rating) ||
      !parse_number(fields[3], r.timestamp)) {
    return false;
  }
  return r.rating >= 0.5F && r.rating <= 5.0F;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

RatingsFile parse_movielens_stream(std::istream& in, const std::string& name) {
  RatingsFile rf;
  rf.path = name;
  std::string line;
  std::string_view sep;
  bool first = true;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    if (first) {
      first = false;
      sep = line.find("::") != std::string::npos ? "::" : ",";
      Rating probe;
      // The CSV variant starts with a header row.
      if (sep == "," && !parse_record(line, sep, probe)) continue;
    }
    ++rf.lines;
    Rating r;
    if (parse_record(line, sep, r)) {
      rf.records.push_back(r);
    } else {
      ++rf.malformed;
    }
  }
  if (in.bad()) throw IoError("read error in " + name);
  if (rf.malformed * 100 > rf.lines) {
    throw FormatError(name + ": " + std::to_string(rf.malformed) + " of " + std::to_string(rf.lines) +
                      " lines are malformed");
  }
  return rf;
}

RatingsFile parse_movielens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_movielens_stream(in, path);
}

IngestedMatrix binarize_and_subsample(const RatingsFile& rf, std::size_t items, std::uint64_t seed) {
  std::vector<std::uint64_t> movies;
  movies.reserve(rf.records.size());
  for (const Rating& r : rf.records) movies.push_back(r.movie);
  std::sort(movies.begin(), movies.end());
  movies.erase(std::unique(movies.begin(), movies.end()), movies.end());
  if (items == 0 || items > movies.size()) {
    throw ParameterError("cannot sample " + std::to_string(items) + " items from " + std::to_string(movies.size()) +
                         " distinct movies");
  }

  // Partial Fisher-Yates over the sorted movie list.
  RngStream rng(seed);
  for (std::size_t k = 0; k < items; ++k) {
    std::swap(movies[k], movies[k + rng.uniform_index(movies.size() - k)]);
  }
  movies.resize(items);
  std::sort(movies.begin(), movies.end());
  std::unordered_map<std::uint64_t, std::uint32_t> column;
  for (std::size_t j = 0; j < movies.size(); ++j) column.emplace(movies[j], static_cast<std::uint32_t>(j));

  // Latest rating per (user, movie); ties keep the later line.
  std::map<std::pair<std::uint64_t, std::uint32_t>, const Rating*> latest;
  for (const Rating& r : rf.records) {
    const auto it = column.find(r.movie);
    if (it == column.end()) continue;
    auto [slot, inserted] = latest.try_emplace({r.user, it->second}, &r);
    if (!inserted && r.timestamp >= slot->second->timestamp) slot->second = &r;
  }

  IngestedMatrix out;
  out.movie_ids = movies;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> likes;
  for (const auto& [key, r] : latest) {
    if (r->rating > kLikeThreshold) likes.push_back(key);
  }
  if (likes.empty()) return out;

  // `latest` is ordered by user id, so rows follow ascending external ids.
  for (const auto& [user, j] : likes) {
    if (out.user_ids.empty() || out.user_ids.back() != user) out.user_ids.push_back(user);
  }
  PreferenceMatrix m(out.user_ids.size(), items);
  std::size_t row = 0;
  for (const auto& [user, j] : likes) {
    while (out.user_ids[row] != user) ++row;
    m.set(row, j, true);
  }
  out.like_records = likes.size();
  out.matrix = std::move(m);
  return out;
}

}  // namespace orcalab
