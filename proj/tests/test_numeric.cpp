#include <doctest.h>

#include <cmath>

#include "rgroups/error.hpp"
#include "rgroups/numeric.hpp"

using namespace rgroups;

TEST_CASE("parse_rational accepts fractions, decimals and exponents") {
  CHECK(parse_rational("1/24") == Rational(1, 24));
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5E2") == Rational(250));
  CHECK(parse_rational("010") == Rational(10));
  CHECK(parse_rational("0.0625") == Rational(1, 16));
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("floor and ceil of rationals") {
  CHECK(rgroups::floor(Rational(7, 2)) == 3);
  CHECK(rgroups::ceil(Rational(7, 2)) == 4);
  CHECK(rgroups::floor(Rational(-7, 2)) == -4);
  CHECK(rgroups::ceil(Rational(-7, 2)) == -3);
  CHECK(rgroups::ceil(Rational(3500)) == 3500);
}

TEST_CASE("half-integers") {
  CHECK(HalfInt::parse("1.5").twice() == 3);
  CHECK(HalfInt::parse("3/2").twice() == 3);
  CHECK(HalfInt::parse("2").str() == "2");
  CHECK(HalfInt::from_twice(5).str() == "2.5");
  CHECK(HalfInt::from_twice(-1).str() == "-0.5");
  CHECK_THROWS_AS(HalfInt::parse("1/3"), Error);
  CHECK(HalfInt::from_int(1) < HalfInt::from_twice(3));
}

TEST_CASE("compare_with_power decides exact powers and near misses") {
  CHECK(compare_with_power(Rational(243), 3, Rational(5)) == Comparison::equal);
  CHECK(compare_with_power(Rational(242), 3, Rational(5)) == Comparison::less);
  CHECK(compare_with_power(Rational(244), 3, Rational(5)) == Comparison::greater);
  // 3^(1/2) = 1.7320508...; 1732050807/10^9 is just below.
  CHECK(compare_with_power(Rational(1732050807, 1000000000), 3, Rational(1, 2)) ==
        Comparison::less);
  CHECK(compare_with_power(Rational(1732050808, 1000000000), 3, Rational(1, 2)) ==
        Comparison::greater);
  // 4373 < 3^7.7 ~ 4716 and 161 > 3^4.4 ~ 125.7.
  CHECK(compare_with_power(Rational(4373), 3, Rational(77, 10)) == Comparison::less);
  CHECK(compare_with_power(Rational(161), 3, Rational(22, 5)) == Comparison::greater);
  CHECK(compare_with_power(Rational(1), 3, Rational(0)) == Comparison::equal);
  CHECK(compare_with_power(Rational(0), 3, Rational(2)) == Comparison::less);
}

TEST_CASE("compare_with_power agrees with floating point away from ties") {
  for (int num = 1; num <= 60; ++num) {
    for (long long v : {1LL, 2LL, 7LL, 100LL, 12345LL, 999983LL}) {
      const Rational e(num, 7);
      const double lhs = std::log(static_cast<double>(v));
      const double rhs = static_cast<double>(num) / 7.0 * std::log(3.0);
      if (std::abs(lhs - rhs) < 1e-9) continue;
      const Comparison want = lhs < rhs ? Comparison::less : Comparison::greater;
      CHECK(compare_with_power(Rational(v), 3, e) == want);
    }
  }
}

TEST_CASE("log_base matches closed forms") {
  CHECK(log_base(BigInt(243), 3) == doctest::Approx(5.0).epsilon(1e-15));
  const BigInt big = boost::multiprecision::pow(BigInt(3), 3500);
  CHECK(log_base(big, 3) == doctest::Approx(3500.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_base(BigInt(0), 3), Error);
}

TEST_CASE("round_power rounds to nearest and rejects overflow") {
  CHECK(round_power(3, Rational(5)) == 243);
  CHECK(round_power(3, Rational(0)) == 1);
  CHECK(round_power(3, Rational(1)) == 3);
  // 3^(1/2) = 1.73 -> 2; 3^(5/12 * 1) = 1.58 -> 2; 3^(1/4) = 1.316 -> 1.
  CHECK(round_power(3, Rational(1, 2)) == 2);
  CHECK(round_power(3, Rational(1, 4)) == 1);
  long double approx = 0;
  CHECK(round_power(3, Rational(10, 3), &approx) == 39);  // 3^(10/3) = 38.94
  CHECK(static_cast<double>(approx) == doctest::Approx(38.9407).epsilon(1e-4));
  CHECK(round_power(3, Rational(20)) == 3486784401ULL);
  CHECK_THROWS_AS(round_power(3, Rational(40)), Error);
}
