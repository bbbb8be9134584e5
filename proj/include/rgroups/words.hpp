#pragma once

// Letters, words and cyclic words over the generators a_1..a_m and their
// inverses. Text form: generator i is the i-th lowercase letter, its inverse
// the matching uppercase letter ("abAB" = a b a^-1 b^-1). m <= 26.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rgroups/rng.hpp"

namespace rgroups {

inline constexpr int kMaxGenerators = 26;

// A generator or its inverse, packed as 2 * index + inverse_flag. The numeric
// order a < A < b < B < ... is the letter order used by shortlex.
class Letter {
 public:
  constexpr Letter() = default;
  static constexpr Letter from_code(std::uint8_t code) { return Letter(code); }
  // `index` is 0-based.
  static constexpr Letter generator(int index, bool inverse = false) {
    return Letter(static_cast<std::uint8_t>(2 * index + (inverse ? 1 : 0)));
  }
  static Letter from_char(char c);

  constexpr std::uint8_t code() const { return code_; }
  constexpr int index() const { return code_ >> 1; }
  constexpr bool is_inverse() const { return (code_ & 1) != 0; }
  constexpr Letter inverse() const { return Letter(code_ ^ 1); }
  char to_char() const;

  constexpr auto operator<=>(const Letter&) const = default;

 private:
  constexpr explicit Letter(std::uint8_t code) : code_(code) {}
  std::uint8_t code_ = 0;
};

constexpr bool cancels(Letter x, Letter y) { return x.inverse() == y; }

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  Word(std::span<const Letter> letters)
      : letters_(letters.begin(), letters.end()) {}

  // Parses the ASCII form; rejects characters outside the first m generators.
  static Word parse(std::string_view text, int m = kMaxGenerators);

  std::string str() const;

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  std::span<const Letter> letters() const { return letters_; }

  void push_back(Letter x) { letters_.push_back(x); }
  void pop_back() { letters_.pop_back(); }
  void reserve(std::size_t n) { letters_.reserve(n); }
  void append(std::span<const Letter> tail) {
    letters_.insert(letters_.end(), tail.begin(), tail.end());
  }

  Word inverse() const;
  Word subword(std::size_t pos, std::size_t len) const;

  // No adjacent pair x x^-1.
  bool is_reduced() const;
  // Reduced, and first and last letters do not cancel.
  bool is_cyclically_reduced() const;
  // Highest generator index used + 1 (0 for the empty word).
  int generators_used() const;

  friend bool operator==(const Word&, const Word&) = default;
  // Lexicographic (not shortlex); see shortlex_compare.
  friend auto operator<=>(const Word& a, const Word& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

// Shortlex order: shorter first, then lexicographic in letter order.
std::strong_ordering shortlex_compare(std::span<const Letter> a,
                                      std::span<const Letter> b);

// Unique reduced word freely equal to w.
Word free_reduce(const Word& w);
Word free_reduce(std::span<const Letter> w);

// Reduced form of a * b, cancelling only at the junction when both are reduced.
Word multiply(const Word& a, const Word& b);

// A cyclically reduced word considered up to rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  // Throws Error unless w is cyclically reduced.
  explicit CyclicWord(Word w);

  const Word& representative() const { return rep_; }
  std::size_t size() const { return rep_.size(); }
  bool empty() const { return rep_.empty(); }

  // Rotation starting at offset k.
  Word rotation(std::size_t k) const;
  // Lexicographically least rotation; a canonical representative of the class.
  Word canonical() const;
  CyclicWord inverse() const;

  std::string str() const { return rep_.str(); }

  // Equality of rotation classes.
  friend bool operator==(const CyclicWord& a, const CyclicWord& b);

 private:
  Word rep_;
};

// Free reduction followed by stripping cancelling ends (conjugation).
CyclicWord cyclic_reduce(const Word& w);

// Uniform over the 2m (2m-1)^(len-1) reduced words of length exactly len.
// len == 0 gives the empty word.
Word random_reduced_word(int m, std::size_t len, Rng& rng);

// Number of reduced words of length exactly len over m generators.
std::uint64_t sphere_size_free(int m, std::size_t len);

}  // namespace rgroups
