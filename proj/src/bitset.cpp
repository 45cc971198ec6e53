#include "orcalab/bitset.hpp"

#include <algorithm>

namespace orcalab {

namespace {

inline std::size_t words_for(std::size_t bits) {
  return (bits + DynamicBitset::kWordBits - 1) / DynamicBitset::kWordBits;
}

inline DynamicBitset::Word word_or_zero(const DynamicBitset* b, std::size_t w) {
  if (b == nullptr) return 0;
  const auto words = b->words();
  return w < words.size() ? words[w] : 0;
}

}  // namespace

DynamicBitset::DynamicBitset(std::size_t bits, bool value)
    : size_(bits), words_(words_for(bits), value ? ~Word{0} : Word{0}) {
  trim_tail();
}

void DynamicBitset::resize(std::size_t bits, bool value) {
  const std::size_t old_size = size_;
  words_.resize(words_for(bits), value ? ~Word{0} : Word{0});
  size_ = bits;
  if (value && bits > old_size) {
    for (std::size_t i = old_size; i < bits && i % kWordBits != 0; ++i) {
      words_[i / kWordBits] |= Word{1} << (i % kWordBits);
    }
  }
  trim_tail();
}

void DynamicBitset::set(std::size_t i, bool value) {
  if (!value) {
    reset(i);
    return;
  }
  if (i >= size_) resize(i + 1);
  words_[i / kWordBits] |= Word{1} << (i % kWordBits);
}

void DynamicBitset::clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

std::size_t DynamicBitset::count() const {
  std::size_t total = 0;
  for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool DynamicBitset::any() const {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

std::size_t DynamicBitset::find_next_from(std::size_t i) const {
  if (i >= size_) return npos;
  std::size_t w = i / kWordBits;
  Word bits = words_[w] & (~Word{0} << (i % kWordBits));
  while (true) {
    if (bits != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return npos;
    bits = words_[w];
  }
}

std::size_t DynamicBitset::nth_set(std::size_t k) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const auto c = static_cast<std::size_t>(std::popcount(words_[w]));
    if (k >= c) {
      k -= c;
      continue;
    }
    Word bits = words_[w];
    for (std::size_t skip = 0; skip < k; ++skip) bits &= bits - 1;
    return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
  }
  return npos;
}

std::vector<std::size_t> DynamicBitset::to_indices() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each_set([&](std::size_t i) { out.push_back(i); });
  return out;
}

DynamicBitset& DynamicBitset::operator|=(const DynamicBitset& other) {
  if (other.size_ > size_) resize(other.size_);
  for (std::size_t w = 0; w < other.words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

DynamicBitset& DynamicBitset::operator&=(const DynamicBitset& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= word_or_zero(&other, w);
  return *this;
}

DynamicBitset& DynamicBitset::subtract(const DynamicBitset& other) {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < n; ++w) words_[w] &= ~other.words_[w];
  return *this;
}

bool operator==(const DynamicBitset& a, const DynamicBitset& b) {
  const std::size_t n = std::max(a.words_.size(), b.words_.size());
  for (std::size_t w = 0; w < n; ++w) {
    if (word_or_zero(&a, w) != word_or_zero(&b, w)) return false;
  }
  return true;
}

void DynamicBitset::trim_tail() {
  const std::size_t rem = size_ % kWordBits;
  if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
}

bool difference_into(const DynamicBitset& base, const DynamicBitset& minus_a,
                     const DynamicBitset* minus_b, DynamicBitset& out) {
  if (out.size() != base.size()) out.resize(base.size());
  auto dst = out.words();
  const auto src = base.words();
  DynamicBitset::Word acc = 0;
  for (std::size_t w = 0; w < src.size(); ++w) {
    dst[w] = src[w] & ~word_or_zero(&minus_a, w) & ~word_or_zero(minus_b, w);
    acc |= dst[w];
  }
  return acc != 0;
}

bool difference_any(const DynamicBitset& base, const DynamicBitset& minus_a,
                    const DynamicBitset* minus_b) {
  const auto src = base.words();
  for (std::size_t w = 0; w < src.size(); ++w) {
    if ((src[w] & ~word_or_zero(&minus_a, w) & ~word_or_zero(minus_b, w)) != 0) return true;
  }
  return false;
}

bool intersection_any(const DynamicBitset& a, const DynamicBitset& b, const DynamicBitset* minus) {
  const auto wa = a.words();
  for (std::size_t w = 0; w < wa.size(); ++w) {
    if ((wa[w] & word_or_zero(&b, w) & ~word_or_zero(minus, w)) != 0) return true;
  }
  return false;
}

}  // namespace orcalab
