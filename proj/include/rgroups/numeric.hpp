#pragma once

// Exact arithmetic helpers: arbitrary precision integers and rationals,
// half-integers, and certified comparisons of the form q <=> base^e.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace rgroups {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Parses "3", "-2", "1/24", "0.75", "1e-3" into an exact rational.
Rational parse_rational(std::string_view text);

// Exact value of a binary double.
Rational rational_from_double(double x);

std::string to_string(const Rational& q);
std::string to_string(const BigInt& n);
double to_double(const Rational& q);

// floor(q) and ceil(q) as integers.
BigInt floor(const Rational& q);
BigInt ceil(const Rational& q);

// Integer or half-integer, stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_twice(long long twice) { return HalfInt(twice); }
  static constexpr HalfInt from_int(long long v) { return HalfInt(2 * v); }
  // Accepts "2", "1.5", "3/2".
  static HalfInt parse(std::string_view text);

  constexpr long long twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  double value() const { return static_cast<double>(twice_) / 2.0; }
  Rational rational() const { return Rational(twice_, 2); }
  std::string str() const;

  constexpr auto operator<=>(const HalfInt&) const = default;

 private:
  constexpr explicit HalfInt(long long twice) : twice_(twice) {}
  long long twice_ = 0;
};

// Outcome of a certified comparison. `undecided` only when neither interval
// arithmetic up to the precision ceiling nor exact integer arithmetic could
// separate the two sides.
enum class Comparison { less, equal, greater, undecided };

// Compares value (> = 0) with base^exponent. Decisions come from MPFR interval
// bounds with directed rounding, escalating precision, and finally exact
// integer powers when the exponent's denominator is small enough.
Comparison compare_with_power(const Rational& value, unsigned base,
                              const Rational& exponent);

// log_base(n) to about 1e-15 relative precision (n > 0).
double log_base(const BigInt& n, unsigned base);

// Nearest integer to base^exponent (ties away from zero), exact where needed.
// Throws Error when the result does not fit in 63 bits.
std::uint64_t round_power(unsigned base, const Rational& exponent,
                          long double* approx = nullptr);

}  // namespace rgroups
