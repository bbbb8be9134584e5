#pragma once

// Growth exponents g_l = log_{2m-1}|B_l| / l and the machinery that turns
// ball counts at two scales into a certified lower bound on the growth
// exponent. Every hypothesis is decided with exact or interval arithmetic.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rgroups/cayley.hpp"
#include "rgroups/numeric.hpp"

namespace rgroups {

// Source of ball cardinalities |B_L|.
class CountOracle {
 public:
  static CountOracle from_table(const BallTable& table);
  // |B_L| = (m (2m-1)^L - 1) / (m - 1).
  static CountOracle closed_form_free(int m);
  static CountOracle custom(int m, std::function<BigInt(long long)> counts,
                            std::string name,
                            std::optional<long long> reach = std::nullopt);
  // "closed-form-free:m=K".
  static CountOracle parse(std::string_view spec);

  int generators() const { return m_; }
  unsigned base() const { return static_cast<unsigned>(2 * m_ - 1); }
  // Largest L available, or nullopt for unbounded sources.
  std::optional<long long> reach() const { return reach_; }
  const std::string& name() const { return name_; }

  // |B_L|; 0 for L < 0. Throws OutsideBall beyond reach.
  BigInt ball(long long L) const;

 private:
  int m_ = 2;
  std::string name_;
  std::optional<long long> reach_;
  std::function<BigInt(long long)> counts_;
};

struct GrowthEstimate {
  long long length = 0;
  double g = 0;
};

// g_l = log_{2m-1}|B_l| / l; l >= 1.
GrowthEstimate growth_estimate(const CountOracle& o, long long l);
std::vector<GrowthEstimate> growth_sequence(const CountOracle& o, long long max_l);

struct SupermultiplicativeCheck {
  long long l = 0, a = 0;
  HalfInt delta;
  BigInt lhs;      // |B_{2l}|
  Rational rhs;    // max(0, |B_l| - 2|B_{l-a+2delta}|)^2 / |B_{6a+2delta}|
  bool holds = false;
  bool degenerate = false;  // |B_l| <= 2|B_{l-a+2delta}|
  // Some count on the right lay beyond the oracle reach and was replaced by
  // the lower bound |B_reach|; rhs is then an upper bound for the true value.
  bool bracketed = false;
};

// |B_{2l}| >= (|B_l| - 2|B_{l-a+2delta}|)^2 / |B_{6a+2delta}|. Needs 2l
// within reach; right-hand counts beyond reach are bracketed, and `holds`
// is then true only when the bracket settles the inequality.
SupermultiplicativeCheck check_supermultiplicative(const CountOracle& o, long long l,
                                                   long long a, HalfInt delta);

// |B_{L+M}| <= |B_L| |B_M|.
bool check_submultiplicative(const CountOracle& o, long long L, long long M);

struct Hypothesis {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CrownResult {
  std::vector<Hypothesis> hypotheses;
  std::optional<long long> length;
};

// Largest l <= l1 with l1 - l a multiple of a and 0.65 l1 <= l such that
// |B_l| >= b^(g l) and |B_l| >= b^(g a / 2) |B_{l-a}|, after checking
// a <= l0, l1 >= 100 l0, |B_l0| <= b^(1.2 g l0), |B_l1| >= b^(g l1).
CrownResult find_crown_length(const CountOracle& o, const Rational& g, long long l0,
                              long long l1, long long a);

struct GrowthCertificate {
  std::string oracle;
  Rational g;
  long long l0 = 0;
  long long l1 = 0;
  Rational A;
  HalfInt delta;
  std::string delta_source;
  std::vector<Hypothesis> hypotheses;
  std::optional<Rational> bound;  // g (1 - 40/A) when every hypothesis holds

  bool valid() const { return bound.has_value(); }
  nlohmann::ordered_json to_json() const;
};

struct CertifyOptions {
  // Default: the observed g_{l1} rounded down to a multiple of 1e-6.
  std::optional<Rational> g;
  // Default: ceil(A l0).
  std::optional<long long> l1;
  Rational A = 500;
  HalfInt delta;
  std::string delta_source = "user";
};

// Checks l0 >= 2 delta + 4/g, l1 >= A l0, A >= 500, |B_l0| <= b^(1.1 g l0)
// and |B_l1| >= b^(g l1); the bound g (1 - 40/A) is issued only if all hold.
GrowthCertificate certify_growth_lower_bound(const CountOracle& o, long long l0,
                                             const CertifyOptions& options);

struct BootstrapResult {
  double A = 0;
  double product = 0;          // prod_{k>=0} (1 - 9 / (A 1.3^k))
  std::size_t terms = 0;
  double target = 0;           // 1 - 40/A
  bool exceeds_target = false;  // product > 1 - 40/A
  double consistency = 0;      // 1.1 / (1 - 40/A)
  bool consistent = false;     // consistency <= 1.2 (exact)

  nlohmann::ordered_json to_json() const;
};

// Throws Error for A <= 9.
BootstrapResult bootstrap_product_bound(const Rational& A);

}  // namespace rgroups
