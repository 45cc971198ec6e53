#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orcalab/core_model.hpp"

namespace orcalab {

struct Rating {
  std::uint64_t user = 0;
  std::uint64_t movie = 0;
  float rating = 0;  // 0.5..5
  std::int64_t timestamp = 0;
};

struct RatingsFile {
  std::string path;
  std::vector<Rating> records;
  std::size_t malformed = 0;
  std::size_t lines = 0;  // non-empty data lines, header excluded
};

/// Parses "UserID::MovieID::Rating::Timestamp" lines, or the comma-separated
/// variant with a header row. Malformed lines are counted and skipped.
/// Throws IoError if unreadable and FormatError if more than 1% of lines are malformed.
RatingsFile parse_movielens(const std::string& path);
RatingsFile parse_movielens_stream(std::istream& in, const std::string& name = "<stream>");

struct IngestedMatrix {
  std::vector<std::uint64_t> user_ids;   // row -> external user id
  std::vector<std::uint64_t> movie_ids;  // column -> external movie id
  std::size_t like_records = 0;
  // Unset when no sampled movie received a like.
  std::optional<PreferenceMatrix> matrix;

  bool empty() const { return !matrix.has_value(); }
};

inline constexpr float kLikeThreshold = 3.0F;  // ratings above this are likes

/// Samples `items` distinct movies uniformly, keeps likes on them (the most
/// recent rating wins for duplicate pairs) and drops users without likes.
/// Throws ParameterError if `items` exceeds the number of distinct movies or is 0.
IngestedMatrix binarize_and_subsample(const RatingsFile& rf, std::size_t items, std::uint64_t seed);

}  // namespace orcalab
