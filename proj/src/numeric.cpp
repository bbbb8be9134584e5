#include "rgroups/numeric.hpp"

#include <mpfr.h>

#include <cctype>
#include <cmath>
#include <string>

#include "rgroups/error.hpp"

namespace rgroups {

namespace {

// RAII wrapper over mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~Mpfr() { mpfr_clear(x_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return x_; }
  mpfr_srcptr get() const { return x_; }

 private:
  mpfr_t x_;
};

BigInt parse_digits(std::string_view digits) {
  if (digits.empty()) {
    throw Error("empty number");
  }
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("invalid digit in number: " + std::string(digits));
    }
  }
  // Leading zeros would select octal in the GMP string constructor.
  const auto nz = digits.find_first_not_of('0');
  return nz == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(nz)));
}

BigInt pow10(long long k) {
  BigInt r = 1;
  for (long long i = 0; i < k; ++i) {
    r *= 10;
  }
  return r;
}

std::size_t bit_length(const BigInt& n) {
  return n == 0 ? 0 : mpz_sizeinbase(n.backend().data(), 2);
}

// Exact comparison value <=> base^(p/q) by raising both sides to the q-th
// power. Returns undecided when the integers would be unreasonably large.
Comparison compare_exact(const Rational& value, unsigned base,
                         const Rational& exponent) {
  const BigInt p = boost::multiprecision::numerator(exponent);
  const BigInt q = boost::multiprecision::denominator(exponent);
  const BigInt a = boost::multiprecision::numerator(value);
  const BigInt b = boost::multiprecision::denominator(value);
  if (q > 4096) {
    return Comparison::undecided;
  }
  const unsigned long qq = q.convert_to<unsigned long>();
  const BigInt abs_p = p < 0 ? BigInt(-p) : p;
  const double base_bits = std::log2(static_cast<double>(base));
  const double total_bits =
      static_cast<double>(bit_length(a) + bit_length(b)) * qq +
      abs_p.convert_to<double>() * base_bits;
  if (total_bits > static_cast<double>(1 << 26)) {
    return Comparison::undecided;
  }
  const unsigned long pp = abs_p.convert_to<unsigned long>();
  BigInt lhs = boost::multiprecision::pow(a, static_cast<unsigned>(qq));
  BigInt rhs = boost::multiprecision::pow(b, static_cast<unsigned>(qq));
  BigInt power = boost::multiprecision::pow(BigInt(base),
                                            static_cast<unsigned>(pp));
  if (p >= 0) {
    rhs *= power;
  } else {
    lhs *= power;
  }
  if (lhs < rhs) return Comparison::less;
  if (lhs > rhs) return Comparison::greater;
  return Comparison::equal;
}

Comparison compare_interval(const Rational& value, unsigned base,
                            const Rational& exponent, mpfr_prec_t prec) {
  const BigInt a = boost::multiprecision::numerator(value);
  const BigInt b = boost::multiprecision::denominator(value);

  Mpfr t(prec), lhs_lo(prec), lhs_hi(prec);
  Mpfr la_lo(prec), la_hi(prec), lb_lo(prec), lb_hi(prec);
  mpfr_set_z(t.get(), a.backend().data(), MPFR_RNDD);
  mpfr_log(la_lo.get(), t.get(), MPFR_RNDD);
  mpfr_set_z(t.get(), a.backend().data(), MPFR_RNDU);
  mpfr_log(la_hi.get(), t.get(), MPFR_RNDU);
  mpfr_set_z(t.get(), b.backend().data(), MPFR_RNDD);
  mpfr_log(lb_lo.get(), t.get(), MPFR_RNDD);
  mpfr_set_z(t.get(), b.backend().data(), MPFR_RNDU);
  mpfr_log(lb_hi.get(), t.get(), MPFR_RNDU);
  mpfr_sub(lhs_lo.get(), la_lo.get(), lb_hi.get(), MPFR_RNDD);
  mpfr_sub(lhs_hi.get(), la_hi.get(), lb_lo.get(), MPFR_RNDU);

  Mpfr e_lo(prec), e_hi(prec), lnb_lo(prec), lnb_hi(prec);
  Mpfr rhs_lo(prec), rhs_hi(prec);
  mpfr_set_q(e_lo.get(), exponent.backend().data(), MPFR_RNDD);
  mpfr_set_q(e_hi.get(), exponent.backend().data(), MPFR_RNDU);
  mpfr_set_ui(t.get(), base, MPFR_RNDN);
  mpfr_log(lnb_lo.get(), t.get(), MPFR_RNDD);
  mpfr_log(lnb_hi.get(), t.get(), MPFR_RNDU);
  if (exponent > 0) {
    mpfr_mul(rhs_lo.get(), e_lo.get(), lnb_lo.get(), MPFR_RNDD);
    mpfr_mul(rhs_hi.get(), e_hi.get(), lnb_hi.get(), MPFR_RNDU);
  } else {
    mpfr_mul(rhs_lo.get(), e_lo.get(), lnb_hi.get(), MPFR_RNDD);
    mpfr_mul(rhs_hi.get(), e_hi.get(), lnb_lo.get(), MPFR_RNDU);
  }
  if (mpfr_less_p(lhs_hi.get(), rhs_lo.get())) {
    return Comparison::less;
  }
  if (mpfr_greater_p(lhs_lo.get(), rhs_hi.get())) {
    return Comparison::greater;
  }
  return Comparison::undecided;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) {
    throw Error("empty rational");
  }
  bool negative = false;
  std::string_view v(s);
  if (v.front() == '+' || v.front() == '-') {
    negative = v.front() == '-';
    v.remove_prefix(1);
  }
  Rational result;
  if (auto slash = v.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_digits(v.substr(0, slash));
    BigInt den = parse_digits(v.substr(slash + 1));
    if (den == 0) {
      throw Error("zero denominator in " + s);
    }
    result = Rational(num, den);
  } else {
    long long exp10 = 0;
    if (auto e = v.find_first_of("eE"); e != std::string_view::npos) {
      std::string exp_text(v.substr(e + 1));
      try {
        exp10 = std::stoll(exp_text);
      } catch (const std::exception&) {
        throw Error("invalid exponent in " + s);
      }
      v = v.substr(0, e);
    }
    std::string digits;
    long long frac_digits = 0;
    if (auto dot = v.find('.'); dot != std::string_view::npos) {
      digits = std::string(v.substr(0, dot)) + std::string(v.substr(dot + 1));
      frac_digits = static_cast<long long>(v.size() - dot - 1);
    } else {
      digits = std::string(v);
    }
    BigInt mantissa = parse_digits(digits);
    const long long scale = exp10 - frac_digits;
    if (scale > 4096 || scale < -4096) {
      throw Error("exponent out of range in " + s);
    }
    if (scale >= 0) {
      result = Rational(mantissa * pow10(scale));
    } else {
      result = Rational(mantissa, pow10(-scale));
    }
  }
  return negative ? Rational(-result) : result;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw Error("non-finite value");
  }
  Rational q;
  mpq_set_d(q.backend().data(), x);
  return q;
}

std::string to_string(const Rational& q) { return q.str(); }
std::string to_string(const BigInt& n) { return n.str(); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt floor(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt r;
  mpz_fdiv_q(r.backend().data(), num.backend().data(), den.backend().data());
  return r;
}

BigInt ceil(const Rational& q) {
  BigInt num = boost::multiprecision::numerator(q);
  BigInt den = boost::multiprecision::denominator(q);
  BigInt r;
  mpz_cdiv_q(r.backend().data(), num.backend().data(), den.backend().data());
  return r;
}

HalfInt HalfInt::parse(std::string_view text) {
  const Rational twice = parse_rational(text) * 2;
  if (boost::multiprecision::denominator(twice) != 1) {
    throw Error("not a half-integer: " + std::string(text));
  }
  return HalfInt::from_twice(
      boost::multiprecision::numerator(twice).convert_to<long long>());
}

std::string HalfInt::str() const {
  if (is_integer()) {
    return std::to_string(twice_ / 2);
  }
  const long long whole = twice_ / 2;
  std::string s = (twice_ < 0 && whole == 0) ? "-0" : std::to_string(whole);
  return s + ".5";
}

Comparison compare_with_power(const Rational& value, unsigned base,
                              const Rational& exponent) {
  if (base < 2) {
    throw Error("compare_with_power: base must be >= 2");
  }
  if (value < 0) {
    throw Error("compare_with_power: negative value");
  }
  if (value == 0) {
    return Comparison::less;
  }
  if (exponent == 0) {
    if (value < 1) return Comparison::less;
    if (value > 1) return Comparison::greater;
    return Comparison::equal;
  }
  for (mpfr_prec_t prec : {256, 1024, 4096}) {
    Comparison c = compare_interval(value, base, exponent, prec);
    if (c != Comparison::undecided) {
      return c;
    }
  }
  return compare_exact(value, base, exponent);
}

double log_base(const BigInt& n, unsigned base) {
  if (n <= 0) {
    throw Error("log_base: argument must be positive");
  }
  Mpfr x(160), lb(160);
  mpfr_set_z(x.get(), n.backend().data(), MPFR_RNDN);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  mpfr_set_ui(lb.get(), base, MPFR_RNDN);
  mpfr_log(lb.get(), lb.get(), MPFR_RNDN);
  mpfr_div(x.get(), x.get(), lb.get(), MPFR_RNDN);
  return mpfr_get_d(x.get(), MPFR_RNDN);
}

std::uint64_t round_power(unsigned base, const Rational& exponent,
                          long double* approx) {
  if (exponent < 0) {
    throw Error("round_power: negative exponent");
  }
  const double bits = to_double(exponent) * std::log2(static_cast<double>(base));
  if (bits > 62.0) {
    throw Error("count (" + std::to_string(base) + ")^" + to_string(exponent) +
                " exceeds the representable range");
  }
  Mpfr v(256), lb(256), e(256);
  mpfr_set_ui(lb.get(), base, MPFR_RNDN);
  mpfr_log(lb.get(), lb.get(), MPFR_RNDN);
  mpfr_set_q(e.get(), exponent.backend().data(), MPFR_RNDN);
  mpfr_mul(v.get(), lb.get(), e.get(), MPFR_RNDN);
  mpfr_exp(v.get(), v.get(), MPFR_RNDN);
  if (approx != nullptr) {
    *approx = mpfr_get_ld(v.get(), MPFR_RNDN);
  }
  mpfr_round(v.get(), v.get());
  long long n = static_cast<long long>(mpfr_get_sj(v.get(), MPFR_RNDN));
  // Certify n - 1/2 < base^e < n + 1/2. base^e is never a half-integer.
  for (int guard = 0; guard < 4; ++guard) {
    if (compare_with_power(Rational(2 * n + 1, 2), base, exponent) !=
        Comparison::greater) {
      ++n;
    } else if (n > 0 && compare_with_power(Rational(2 * n - 1, 2), base,
                                           exponent) != Comparison::less) {
      --n;
    } else {
      break;
    }
  }
  return static_cast<std::uint64_t>(n);
}

}  // namespace rgroups
