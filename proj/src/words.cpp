#include "rgroups/words.hpp"

#include <algorithm>

#include "rgroups/error.hpp"

namespace rgroups {

Letter Letter::from_char(char c) {
  if (c >= 'a' && c <= 'z') {
    return Letter::generator(c - 'a', false);
  }
  if (c >= 'A' && c <= 'Z') {
    return Letter::generator(c - 'A', true);
  }
  throw Error(std::string("invalid letter '") + c + "'");
}

char Letter::to_char() const {
  return static_cast<char>((is_inverse() ? 'A' : 'a') + index());
}

Word Word::parse(std::string_view text, int m) {
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    Letter x = Letter::from_char(c);
    if (x.index() >= m) {
      throw Error(std::string("letter '") + c + "' outside the " +
                  std::to_string(m) + " generators");
    }
    letters.push_back(x);
  }
  return Word(std::move(letters));
}

std::string Word::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter x : letters_) {
    s.push_back(x.to_char());
  }
  return s;
}

Word Word::inverse() const {
  std::vector<Letter> inv(letters_.size());
  std::transform(letters_.rbegin(), letters_.rend(), inv.begin(),
                 [](Letter x) { return x.inverse(); });
  return Word(std::move(inv));
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  return Word(std::span<const Letter>(letters_).subspan(pos, len));
}

bool Word::is_reduced() const {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (cancels(letters_[i - 1], letters_[i])) {
      return false;
    }
  }
  return true;
}

bool Word::is_cyclically_reduced() const {
  return is_reduced() &&
         (letters_.size() < 2 || !cancels(letters_.back(), letters_.front()));
}

int Word::generators_used() const {
  int top = 0;
  for (Letter x : letters_) {
    top = std::max(top, x.index() + 1);
  }
  return top;
}

std::strong_ordering shortlex_compare(std::span<const Letter> a,
                                      std::span<const Letter> b) {
  if (a.size() != b.size()) {
    return a.size() <=> b.size();
  }
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(),
                                                b.end());
}

Word free_reduce(std::span<const Letter> w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter x : w) {
    if (!stack.empty() && cancels(stack.back(), x)) {
      stack.pop_back();
    } else {
      stack.push_back(x);
    }
  }
  return Word(std::move(stack));
}

Word free_reduce(const Word& w) { return free_reduce(w.letters()); }

Word multiply(const Word& a, const Word& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() &&
         cancels(a[a.size() - 1 - k], b[k])) {
    ++k;
  }
  std::vector<Letter> out;
  out.reserve(a.size() + b.size() - 2 * k);
  out.insert(out.end(), a.begin(), a.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
  Word w(std::move(out));
  return w.is_reduced() ? w : free_reduce(w);
}

CyclicWord::CyclicWord(Word w) : rep_(std::move(w)) {
  if (!rep_.is_cyclically_reduced()) {
    throw Error("word '" + rep_.str() + "' is not cyclically reduced");
  }
}

Word CyclicWord::rotation(std::size_t k) const {
  const std::size_t n = rep_.size();
  std::vector<Letter> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = rep_[(k + i) % n];
  }
  return Word(std::move(out));
}

Word CyclicWord::canonical() const {
  const std::size_t n = rep_.size();
  if (n == 0) {
    return rep_;
  }
  // Booth's least-rotation algorithm over the doubled string.
  std::vector<Letter> s(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    s[i] = rep_[i % n];
  }
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    Letter sj = s[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[k + static_cast<std::size_t>(i) + 1]) {
      if (sj < s[k + static_cast<std::size_t>(i) + 1]) {
        k = j - static_cast<std::size_t>(i) - 1;
      }
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && sj != s[k]) {
      if (sj < s[k]) {
        k = j;
      }
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return rotation(k);
}

CyclicWord CyclicWord::inverse() const { return CyclicWord(rep_.inverse()); }

bool operator==(const CyclicWord& a, const CyclicWord& b) {
  return a.size() == b.size() && a.canonical() == b.canonical();
}

CyclicWord cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && cancels(r[lo], r[hi - 1])) {
    ++lo;
    --hi;
  }
  return CyclicWord(r.subword(lo, hi - lo));
}

Word random_reduced_word(int m, std::size_t len, Rng& rng) {
  if (m < 1 || m > kMaxGenerators) {
    throw Error("generator count out of range");
  }
  std::vector<Letter> out;
  out.reserve(len);
  const auto alphabet = static_cast<std::uint64_t>(2 * m);
  for (std::size_t i = 0; i < len; ++i) {
    if (out.empty()) {
      out.push_back(Letter::from_code(static_cast<std::uint8_t>(rng.below(alphabet))));
    } else {
      // Pick among the 2m - 1 letters that do not cancel the previous one.
      const std::uint8_t forbidden = out.back().inverse().code();
      auto c = static_cast<std::uint8_t>(rng.below(alphabet - 1));
      if (c >= forbidden) {
        ++c;
      }
      out.push_back(Letter::from_code(c));
    }
  }
  return Word(std::move(out));
}

std::uint64_t sphere_size_free(int m, std::size_t len) {
  if (len == 0) {
    return 1;
  }
  std::uint64_t n = 2 * static_cast<std::uint64_t>(m);
  for (std::size_t i = 1; i < len; ++i) {
    n *= static_cast<std::uint64_t>(2 * m - 1);
  }
  return n;
}

}  // namespace rgroups
