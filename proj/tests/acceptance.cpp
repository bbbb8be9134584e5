// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <omp.h>

#include "rgroups/cayley.hpp"
#include "rgroups/growth.hpp"
#include "rgroups/harness.hpp"
#include "rgroups/hyperbolicity.hpp"
#include "rgroups/presentation.hpp"
#include "rgroups/smallcancel.hpp"
#include "rgroups/wordproblem.hpp"

using namespace rgroups;
namespace fs = std::filesystem;

namespace {

// Genus-2 table radius for the counting checks; couples need 2l <= radius.
constexpr int kGenus2Radius = 8;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1fs", seconds_since(t0));
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << n << ". " << title << "  [" << o.detail
            << "; " << secs << "]" << std::endl;
}

std::shared_ptr<const Presentation> genus2() {
  static auto p = std::make_shared<const Presentation>(surface_presentation(2));
  return p;
}

const BallTable& free2_table10() {
  static const BallTable t = enumerate_ball(Backend::free(2), 10);
  return t;
}

const BallTable& genus2_table() {
  static const BallTable t = enumerate_ball(Backend::dehn(genus2()), kGenus2Radius);
  return t;
}

// Ball-local delta of the genus-2 group, measured on triangles of radius 3.
// B_6 holds every side of those triangles, so nothing is excluded.
HalfInt genus2_delta() {
  static const HalfInt d = [] {
    const auto est = observed_delta(enumerate_ball(Backend::dehn(genus2()), 6), 3);
    if (est.triangles_excluded != 0) throw Error("genus-2 delta table too small");
    return est.delta_observed;
  }();
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

}  // namespace

int main() {
  std::cout << "threads " << omp_get_max_threads() << std::endl;

  criterion(1, "free-group exactness, F_2 radius 12", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto t = enumerate_ball(Backend::free(2), 12);
    const double secs = seconds_since(t0);
    int bad = 0;
    for (int L = 0; L <= 12; ++L) {
      const BigInt want = 2 * boost::multiprecision::pow(BigInt(3), static_cast<unsigned>(L)) - 1;
      bad += t.ball_count(L) != want;
    }
    return Outcome{bad == 0 && secs < 60,
                   std::to_string(bad) + " mismatches, enumeration " + fmt(secs, 1) + "s (< 60s)"};
  });

  criterion(2, "growth estimate g_12(F_2) = 1.0526 +- 1e-3", [] {
    const double g = growth_estimate(CountOracle::closed_form_free(2), 12).g;
    const double ref = std::log(2.0 * std::pow(3.0, 12) - 1) / std::log(3.0) / 12.0;
    return Outcome{std::abs(g - 1.0526) <= 1e-3 && std::abs(g - ref) <= 1e-12,
                   "g_12 = " + fmt(g, 6) + ", closed-form log " + fmt(ref, 6)};
  });

  criterion(3, "genus-2 surface group window", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sc = check_metric_condition(genus2()->relators(), Rational(1, 6));
    const auto dehn = enumerate_ball(Backend::dehn(genus2()), 4);
    Budget budget;
    budget.max_word_length = 0;
    budget.max_states = 100000;
    const auto brute = enumerate_ball(Backend::budgeted(genus2(), budget), 4);
    const auto free4 = enumerate_ball(Backend::free(4), 3);
    bool counts = true;
    for (int L = 0; L <= 3; ++L) {
      counts = counts && dehn.ball_count(L) == free4.ball_count(L) &&
               brute.ball_count(L) == dehn.ball_count(L);
    }
    const bool s4 = dehn.sphere_count(4) == 2736 && brute.sphere_count(4) == 2736;
    const double secs = seconds_since(t0);
    std::ostringstream d;
    d << "max piece " << sc.max_piece_length << ", C'(1/6) " << sc.satisfies(Rational(1, 6))
      << ", B_0..B_3 match F_4 " << counts << ", |S_4| dehn " << to_string(dehn.sphere_count(4))
      << " brute " << to_string(brute.sphere_count(4)) << ", " << fmt(secs, 1) << "s (< 600s)";
    return Outcome{sc.max_piece_length == 1 && sc.satisfies(Rational(1, 6)) && counts && s4 &&
                       secs < 600,
                   d.str()};
  });

  criterion(4, "supermultiplicative ball inequality", [] {
    std::size_t cases = 0, violations = 0, bracketed = 0;
    const auto free2 = CountOracle::closed_form_free(2);
    for (long long l = 1; l <= 6; ++l) {
      for (long long a = 0; a <= l; ++a) {
        ++cases;
        violations += !check_supermultiplicative(free2, l, a, HalfInt::from_int(0)).holds;
      }
    }
    const auto table = CountOracle::from_table(genus2_table());
    const HalfInt delta = genus2_delta();
    for (long long l = 1; 2 * l <= kGenus2Radius; ++l) {
      for (long long a = 0; a <= l; ++a) {
        ++cases;
        const auto c = check_supermultiplicative(table, l, a, delta);
        violations += !c.holds;
        bracketed += c.bracketed;
      }
    }
    return Outcome{violations == 0,
                   std::to_string(cases) + " cases, " + std::to_string(violations) +
                       " violations (" + std::to_string(bracketed) +
                       " genus-2 cases bracketed), genus-2 radius " +
                       std::to_string(kGenus2Radius) + ", delta " + delta.str()};
  });

  criterion(5, "product and couples counting bounds", [] {
    const auto& f = free2_table10();
    const HalfInt zero = HalfInt::from_int(0);
    const auto fp = check_product_bound(f, 5, zero);
    const auto fc = check_couples_bound(f, 5, zero);
    const HalfInt delta = genus2_delta();
    const auto gp = check_product_bound(genus2_table(), 4, delta);
    const auto gc = check_couples_bound(genus2_table(), 4, delta);
    std::ostringstream d;
    bool ok = true;
    for (const auto* r : {&fp, &fc, &gp, &gc}) {
      d << r->name << "(delta " << r->delta.str() << "): " << r->cases << " cases, "
        << r->violations << " violations, " << r->undecided << " undecided; ";
      ok = ok && r->passed();
    }
    d << "free table radius 10, genus-2 table radius " << kGenus2Radius;
    return Outcome{ok, d.str()};
  });

  criterion(6, "growth certificate on F_2 closed forms", [] {
    const auto o = CountOracle::closed_form_free(2);
    CertifyOptions opt;
    opt.g = Rational(1);
    opt.A = 500;
    opt.l1 = 3500;
    const auto good = certify_growth_lower_bound(o, 7, opt);
    bool all = good.hypotheses.size() == 5;
    for (const auto& h : good.hypotheses) all = all && h.pass;
    const bool exact = good.bound && *good.bound == Rational(23, 25);

    CertifyOptions small = opt;
    small.l1.reset();
    const auto l04 = certify_growth_lower_bound(o, 4, small);
    bool l04_right = !l04.valid();
    for (const auto& h : l04.hypotheses) {
      if (h.name.find("1.1") != std::string::npos) l04_right = l04_right && !h.pass;
    }
    CertifyOptions a400 = opt;
    a400.A = 400;
    a400.l1.reset();
    const auto low = certify_growth_lower_bound(o, 7, a400);
    bool gate = !low.valid();
    for (const auto& h : low.hypotheses) {
      if (h.name.find("500") != std::string::npos) gate = gate && !h.pass;
    }
    std::ostringstream d;
    d << "bound " << (good.bound ? to_string(*good.bound) : "none") << ", "
      << good.hypotheses.size() << " hypotheses all pass " << all << "; l0=4 refused "
      << l04_right << "; A=400 refused " << gate;
    return Outcome{all && exact && l04_right && gate, d.str()};
  });

  criterion(7, "bootstrap product numerics", [] {
    bool ok = true;
    std::ostringstream d;
    for (double A : {500.0, 750.0, 1000.0, 1e4, 1e6}) {
      const auto b = bootstrap_product_bound(Rational(static_cast<long long>(A)));
      ok = ok && b.product - b.target > -1e-9;
      d << "A=" << A << ": " << fmt(b.product, 6) << " > " << fmt(b.target, 6) << "; ";
    }
    const auto b = bootstrap_product_bound(Rational(500));
    ok = ok && b.consistency <= 1.2 + 1e-9 && b.consistent;
    d << "1.1/(1-40/500) = " << fmt(b.consistency, 6);
    return Outcome{ok, d.str()};
  });

  criterion(8, "small-cancellation trend at m=2", [] {
    std::ostringstream d;
    // Pass rate of C'(1/6) at d = 1/24.
    std::vector<double> rates;
    for (int l : {60, 90, 120}) {
      int pass = 0;
      for (int seed = 0; seed < 50; ++seed) {
        DensityParams p;
        p.m = 2;
        p.d = Rational(1, 24);
        p.length = l;
        const auto pres = sample_density_presentation(p, static_cast<std::uint64_t>(seed));
        pass += check_metric_condition(pres.relators(), Rational(1, 6)).satisfies(Rational(1, 6));
      }
      rates.push_back(pass / 50.0);
      d << "pass rate l=" << l << " " << fmt(rates.back(), 2) << "; ";
    }
    const bool trend = rates[0] <= rates[1] && rates[1] <= rates[2] && rates[2] >= 0.8;
    // Max piece against 2 d l + 8 log_3 l at l = 120.
    int runs = 0, within = 0, unavailable = 0;
    std::string reason;
    for (const Rational& dens : {Rational(1, 24), Rational(1, 12), Rational(1, 6)}) {
      const double slack = 2 * to_double(dens) * 120 + 8 * std::log(120.0) / std::log(3.0);
      for (int seed = 0; seed < 50; ++seed) {
        ++runs;
        DensityParams p;
        p.m = 2;
        p.d = dens;
        p.length = 120;
        try {
          const auto pres = sample_density_presentation(p, static_cast<std::uint64_t>(seed));
          within += static_cast<double>(max_piece_length(pres.relators())) <= slack;
        } catch (const BudgetExceeded& e) {
          ++unavailable;
          reason = e.what();
        }
      }
    }
    d << "max piece within 2dl + 8 log_3 l in " << within << "/" << runs << " runs";
    if (unavailable) d << " (" << unavailable << " runs not sampled: " << reason << ")";
    return Outcome{trend && within >= 0.95 * runs, d.str()};
  });

  criterion(9, "collapse phase transition at m=2, l=8", [] {
    int collapsed = 0, open = 0;
    for (int seed = 0; seed < 20; ++seed) {
      DensityParams hi;
      hi.m = 2;
      hi.d = Rational(3, 4);
      hi.length = 8;
      const auto v = detect_collapse(sample_density_presentation(hi, seed)).verdict;
      collapsed += v == CollapseVerdict::trivial || v == CollapseVerdict::order_two;
      DensityParams lo = hi;
      lo.d = Rational(1, 10);
      open += detect_collapse(sample_density_presentation(lo, seed)).verdict ==
              CollapseVerdict::infinite_or_unknown;
    }
    return Outcome{collapsed >= 16 && open >= 18,
                   "d=0.75 collapsed " + std::to_string(collapsed) + "/20 (>= 16), d=0.1 open " +
                       std::to_string(open) + "/20 (>= 18)"};
  });

  criterion(10, "hyperbolicity contrast", [] {
    std::ostringstream d;
    bool ok = true;
    d << "free delta r=0..5:";
    for (int r = 0; r <= 5; ++r) {
      const auto e = observed_delta(free2_table10(), r);
      ok = ok && e.delta_observed == HalfInt::from_int(0);
      d << ' ' << e.delta_observed.str();
    }
    const auto z2 = std::make_shared<const Presentation>(z2_presentation());
    const auto t = enumerate_ball(Backend::automatic(z2), 24);
    HalfInt prev = HalfInt::from_int(-1000);
    d << "; Z^2 delta r=4..6:";
    for (int r = 4; r <= 6; ++r) {
      const auto e = observed_delta(t, r);
      ok = ok && prev <= e.delta_observed && e.triangles_excluded == 0;
      prev = e.delta_observed;
      d << ' ' << e.delta_observed.str();
    }
    ok = ok && HalfInt::from_int(1) <= prev;
    d << " (table radius 24)";
    return Outcome{ok, d.str()};
  });

  criterion(11, "determinism of sweeps and enumeration", [] {
    ExperimentSpec spec;
    spec.name = "acceptance";
    spec.master_seed = 2024;
    spec.m = {2, 3};
    spec.d = {Rational(1, 24), Rational(1, 12)};
    spec.lengths = {24, 36};
    spec.seeds = 3;
    spec.small_cancellation = true;
    spec.collapse = true;
    spec.budgets.max_cosets = 20000;
    spec.growth_radius = 3;
    const auto base = fs::temp_directory_path() / "rgroups_acceptance";
    fs::remove_all(base);
    const auto a = emit_report(run_sweep(spec, {.threads = 1}), (base / "a").string());
    emit_report(run_sweep(spec), (base / "b").string());
    std::size_t compared = 0, differ = 0;
    for (const auto& path : a) {
      if (fs::path(path).extension() != ".csv") continue;
      ++compared;
      differ += slurp(path) != slurp(base / "b" / fs::relative(path, base / "a"));
    }
    fs::remove_all(base);

    const auto serial = enumerate_ball(Backend::dehn(genus2()), 5, {.exec = Exec::serial});
    omp_set_num_threads(4);
    const auto parallel = enumerate_ball(Backend::dehn(genus2()), 5, {.exec = Exec::parallel});
    const bool tables = serial == parallel;
    return Outcome{differ == 0 && compared > 0 && tables,
                   std::to_string(compared) + " CSVs compared, " + std::to_string(differ) +
                       " differ; serial vs 4-worker genus-2 B_5 tables identical " +
                       (tables ? "yes" : "no")};
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
