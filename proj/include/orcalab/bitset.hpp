#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace orcalab {

/// Growable bitset with word-level access.
///
/// Bits beyond size() read as zero. All binary operations treat the shorter
/// operand as zero-extended, which lets pools stored as removed-sets absorb
/// items that arrive after the pool was created.
class DynamicBitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  DynamicBitset() = default;
  explicit DynamicBitset(std::size_t bits, bool value = false);

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  void resize(std::size_t bits, bool value = false);

  bool test(std::size_t i) const {
    return i < size_ && ((words_[i / kWordBits] >> (i % kWordBits)) & 1U);
  }
  // set() grows the bitset when i is out of range.
  void set(std::size_t i, bool value = true);
  void reset(std::size_t i) {
    if (i < size_) words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits));
  }
  void clear();

  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }

  std::size_t find_first() const { return find_next_from(0); }
  // First set bit at position >= i.
  std::size_t find_next_from(std::size_t i) const;
  // Position of the k-th set bit (0-based), npos if count() <= k.
  std::size_t nth_set(std::size_t k) const;

  std::vector<std::size_t> to_indices() const;

  DynamicBitset& operator|=(const DynamicBitset& other);
  DynamicBitset& operator&=(const DynamicBitset& other);
  // this &= ~other
  DynamicBitset& subtract(const DynamicBitset& other);

  friend bool operator==(const DynamicBitset& a, const DynamicBitset& b);

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const std::size_t bit = static_cast<std::size_t>(std::countr_zero(bits));
        fn(w * kWordBits + bit);
        bits &= bits - 1;
      }
    }
  }

 private:
  void trim_tail();

  std::size_t size_ = 0;
  std::vector<Word> words_;
};

/// out = base & ~minus_a & ~minus_b, sized like base. Returns true if any bit
/// is set. Used for R = I_t \ recommended and R ∩ P = R \ removed.
bool difference_into(const DynamicBitset& base, const DynamicBitset& minus_a,
                     const DynamicBitset* minus_b, DynamicBitset& out);

/// True iff (base & ~minus_a & ~minus_b) is non-empty, without materializing.
bool difference_any(const DynamicBitset& base, const DynamicBitset& minus_a,
                    const DynamicBitset* minus_b);

/// True iff a & b & ~minus is non-empty.
bool intersection_any(const DynamicBitset& a, const DynamicBitset& b,
                      const DynamicBitset* minus = nullptr);

}  // namespace orcalab
