#include "rgroups/growth.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace rgroups {

CountOracle CountOracle::from_table(const BallTable& table) {
  auto counts = table.ball_counts();
  CountOracle o;
  o.m_ = table.generators();
  o.name_ = "table(radius=" + std::to_string(table.radius()) + ")";
  o.reach_ = table.radius();
  o.counts_ = [counts = std::move(counts)](long long L) { return counts[L]; };
  return o;
}

CountOracle CountOracle::closed_form_free(int m) {
  if (m < 2) throw Error("closed-form free counts need m >= 2");
  CountOracle o;
  o.m_ = m;
  o.name_ = "closed-form-free:m=" + std::to_string(m);
  o.counts_ = [m](long long L) {
    const BigInt p = boost::multiprecision::pow(BigInt(2 * m - 1), static_cast<unsigned>(L));
    return BigInt((m * p - 1) / (m - 1));
  };
  return o;
}

CountOracle CountOracle::custom(int m, std::function<BigInt(long long)> counts,
                                std::string name, std::optional<long long> reach) {
  CountOracle o;
  o.m_ = m;
  o.name_ = std::move(name);
  o.reach_ = reach;
  o.counts_ = std::move(counts);
  return o;
}

CountOracle CountOracle::parse(std::string_view spec) {
  constexpr std::string_view prefix = "closed-form-free:m=";
  if (spec.substr(0, prefix.size()) == prefix) {
    int m = 0;
    const auto rest = spec.substr(prefix.size());
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), m);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && m >= 2 &&
        m <= kMaxGenerators) {
      return closed_form_free(m);
    }
  }
  throw Error("unknown count oracle '" + std::string(spec) +
              "' (expected closed-form-free:m=K)");
}

BigInt CountOracle::ball(long long L) const {
  if (L < 0) return 0;
  if (reach_ && L > *reach_) {
    throw OutsideBall("|B_" + std::to_string(L) + "| is beyond the oracle reach " +
                          std::to_string(*reach_),
                      static_cast<int>(*reach_));
  }
  return counts_(L);
}

GrowthEstimate growth_estimate(const CountOracle& o, long long l) {
  if (l < 1) throw Error("growth estimate needs l >= 1");
  return {l, log_base(o.ball(l), o.base()) / static_cast<double>(l)};
}

std::vector<GrowthEstimate> growth_sequence(const CountOracle& o, long long max_l) {
  std::vector<GrowthEstimate> out;
  for (long long l = 1; l <= max_l; ++l) out.push_back(growth_estimate(o, l));
  return out;
}

SupermultiplicativeCheck check_supermultiplicative(const CountOracle& o, long long l,
                                                   long long a, HalfInt delta) {
  if (l < 0 || a < 0 || delta.twice() < 0) {
    throw Error("supermultiplicativity check needs l, a, delta >= 0");
  }
  SupermultiplicativeCheck c;
  c.l = l;
  c.a = a;
  c.delta = delta;
  c.lhs = o.ball(2 * l);
  // |B_k|, or |B_reach| <= |B_k| when k is out of reach.
  auto at_least = [&](long long k) {
    if (o.reach() && k > *o.reach()) {
      c.bracketed = true;
      return o.ball(*o.reach());
    }
    return o.ball(k);
  };
  const BigInt bl = o.ball(l);
  const BigInt near = at_least(l - a + delta.twice());
  const BigInt denom = at_least(6 * a + delta.twice());
  const BigInt diff = bl - 2 * near;
  if (diff <= 0) {
    c.degenerate = true;
    c.rhs = 0;
    c.holds = true;
    return c;
  }
  c.rhs = Rational(diff * diff, denom);
  c.holds = Rational(c.lhs) >= c.rhs;
  return c;
}

bool check_submultiplicative(const CountOracle& o, long long L, long long M) {
  return o.ball(L + M) <= o.ball(L) * o.ball(M);
}

namespace {

std::string abbreviate(const BigInt& n) {
  std::string s = to_string(n);
  if (s.size() <= 40) return s;
  return s.substr(0, 12) + "...(" + std::to_string(s.size()) + " digits)";
}

// value <= base^e (pass) as decided by certified comparison.
Hypothesis power_hypothesis(std::string name, const BigInt& value, unsigned base,
                            const Rational& e, bool at_most) {
  Hypothesis h{std::move(name), false, ""};
  const Comparison c = compare_with_power(Rational(value), base, e);
  if (c == Comparison::undecided) {
    h.detail = "undecided at the precision ceiling";
    return h;
  }
  h.pass = at_most ? c != Comparison::greater : c != Comparison::less;
  h.detail = abbreviate(value) + (c == Comparison::less ? " < " : c == Comparison::equal ? " = " : " > ") +
             std::to_string(base) + "^(" + to_string(e) + ")";
  return h;
}

Hypothesis beyond_reach(std::string name, const OutsideBall& e) {
  return {std::move(name), false, e.what()};
}

}  // namespace

CrownResult find_crown_length(const CountOracle& o, const Rational& g, long long l0,
                              long long l1, long long a) {
  CrownResult r;
  const unsigned b = o.base();
  r.hypotheses.push_back({"1 <= a <= l0", a >= 1 && a <= l0,
                          "a = " + std::to_string(a) + ", l0 = " + std::to_string(l0)});
  r.hypotheses.push_back({"l1 >= 100 l0", l1 >= 100 * l0,
                          "l1 = " + std::to_string(l1)});
  r.hypotheses.push_back({"g > 0", g > 0, "g = " + to_string(g)});
  try {
    r.hypotheses.push_back(power_hypothesis("|B_l0| <= b^(1.2 g l0)", o.ball(l0), b,
                                            Rational(6, 5) * g * l0, true));
  } catch (const OutsideBall& e) {
    r.hypotheses.push_back(beyond_reach("|B_l0| <= b^(1.2 g l0)", e));
  }
  try {
    r.hypotheses.push_back(
        power_hypothesis("|B_l1| >= b^(g l1)", o.ball(l1), b, g * l1, false));
  } catch (const OutsideBall& e) {
    r.hypotheses.push_back(beyond_reach("|B_l1| >= b^(g l1)", e));
  }
  for (const auto& h : r.hypotheses) {
    if (!h.pass) return r;
  }
  const Rational step_exponent = g * a / 2;
  for (long long l = l1; 20 * l >= 13 * l1; l -= a) {
    const BigInt bl = o.ball(l);
    const Comparison big = compare_with_power(Rational(bl), b, g * l);
    if (big == Comparison::less || big == Comparison::undecided) continue;
    const Comparison ratio =
        compare_with_power(Rational(bl, o.ball(l - a)), b, step_exponent);
    if (ratio == Comparison::less || ratio == Comparison::undecided) continue;
    r.length = l;
    break;
  }
  return r;
}

nlohmann::ordered_json GrowthCertificate::to_json() const {
  nlohmann::ordered_json j;
  j["oracle"] = oracle;
  j["g"] = to_string(g);
  j["l0"] = l0;
  j["l1"] = l1;
  j["A"] = to_string(A);
  j["delta"] = delta.str();
  j["delta_source"] = delta_source;
  auto hs = nlohmann::ordered_json::array();
  for (const auto& h : hypotheses) {
    hs.push_back({{"name", h.name}, {"pass", h.pass}, {"detail", h.detail}});
  }
  j["hypotheses"] = hs;
  j["valid"] = valid();
  if (bound) {
    j["bound"] = to_double(*bound);
    j["bound_exact"] = to_string(*bound);
  } else {
    j["bound"] = nullptr;
  }
  return j;
}

GrowthCertificate certify_growth_lower_bound(const CountOracle& o, long long l0,
                                             const CertifyOptions& opt) {
  GrowthCertificate c;
  c.oracle = o.name();
  c.l0 = l0;
  c.A = opt.A;
  c.delta = opt.delta;
  c.delta_source = opt.delta_source;
  c.l1 = opt.l1 ? *opt.l1 : static_cast<long long>(ceil(opt.A * l0));
  const unsigned b = o.base();

  if (opt.g) {
    c.g = *opt.g;
  } else {
    try {
      const double observed = growth_estimate(o, std::max<long long>(c.l1, 1)).g;
      c.g = Rational(static_cast<long long>(std::floor(observed * 1e6)), 1'000'000);
    } catch (const OutsideBall& e) {
      c.hypotheses.push_back(beyond_reach("observed g_l1 available", e));
      return c;
    }
  }

  if (c.g > 0) {
    const Rational need = c.delta.rational() * 2 + Rational(4) / c.g;
    c.hypotheses.push_back({"l0 >= 2 delta + 4/g", Rational(l0) >= need,
                            "2 delta + 4/g = " + to_string(need)});
  } else {
    c.hypotheses.push_back({"l0 >= 2 delta + 4/g", false, "g must be positive"});
  }
  c.hypotheses.push_back({"l1 >= A l0", Rational(c.l1) >= c.A * l0,
                          "A l0 = " + to_string(c.A * l0)});
  c.hypotheses.push_back({"A >= 500", c.A >= 500, "A = " + to_string(c.A)});
  try {
    c.hypotheses.push_back(power_hypothesis("|B_l0| <= b^(1.1 g l0)", o.ball(l0), b,
                                            Rational(11, 10) * c.g * l0, true));
  } catch (const OutsideBall& e) {
    c.hypotheses.push_back(beyond_reach("|B_l0| <= b^(1.1 g l0)", e));
  }
  try {
    c.hypotheses.push_back(
        power_hypothesis("|B_l1| >= b^(g l1)", o.ball(c.l1), b, c.g * c.l1, false));
  } catch (const OutsideBall& e) {
    c.hypotheses.push_back(beyond_reach("|B_l1| >= b^(g l1)", e));
  }
  bool ok = true;
  for (const auto& h : c.hypotheses) ok = ok && h.pass;
  if (ok) c.bound = c.g * (1 - Rational(40) / c.A);
  return c;
}

nlohmann::ordered_json BootstrapResult::to_json() const {
  nlohmann::ordered_json j;
  j["A"] = A;
  j["product"] = product;
  j["terms"] = terms;
  j["target"] = target;
  j["exceeds_target"] = exceeds_target;
  j["consistency"] = consistency;
  j["consistent"] = consistent;
  return j;
}

BootstrapResult bootstrap_product_bound(const Rational& A) {
  if (A <= 9) throw Error("bootstrap product needs A > 9");
  BootstrapResult r;
  const long double a = static_cast<long double>(to_double(A));
  r.A = static_cast<double>(a);
  long double product = 1.0L;
  long double ratio = 1.0L;  // 1.3^-k
  for (;;) {
    const long double t = 9.0L / a * ratio;
    product *= 1.0L - t;
    ++r.terms;
    ratio /= 1.3L;
    // Remaining terms t_k <= 1/2 give |log tail| <= 2 sum t_k.
    const long double next = 9.0L / a * ratio;
    const long double tail = 2.0L * next / (1.0L - 1.0L / 1.3L);
    if (next <= 0.5L && tail * product < 1e-13L) break;
  }
  r.product = static_cast<double>(product);
  const Rational target = 1 - Rational(40) / A;
  r.target = to_double(target);
  r.exceeds_target = product > static_cast<long double>(r.target);
  if (target > 0) {
    r.consistency = to_double(Rational(11, 10) / target);
    r.consistent = Rational(11, 10) <= Rational(6, 5) * target;
  } else {
    r.consistency = std::numeric_limits<double>::infinity();
    r.consistent = false;
  }
  return r;
}

}  // namespace rgroups
