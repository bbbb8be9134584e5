// Serial vs parallel wall time of the heavy kernels. Each kernel runs once
// per mode; results of the two modes are compared for equality.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "rgroups/cayley.hpp"
#include "rgroups/hyperbolicity.hpp"
#include "rgroups/presentation.hpp"
#include "rgroups/smallcancel.hpp"

using namespace rgroups;

namespace {

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool same) {
  std::printf("%-34s %10.3f %10.3f %8.2fx  %s\n", name.c_str(), serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int radius = argc > 1 ? std::stoi(argv[1]) : 6;
  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "parallel s", "speedup");

  auto genus2 = std::make_shared<const Presentation>(surface_presentation(2));
  const Backend dehn = Backend::dehn(genus2);
  BallTable a, b;
  const double es = timed([&] { a = enumerate_ball(dehn, radius, {.exec = Exec::serial}); });
  const double ep = timed([&] { b = enumerate_ball(dehn, radius, {.exec = Exec::parallel}); });
  row("genus-2 ball, radius " + std::to_string(radius), es, ep, a == b);

  DensityParams p;
  p.m = 2;
  p.d = Rational(1, 12);
  p.length = 120;
  const auto pres = sample_density_presentation(p, 1);
  std::size_t ms = 0, mp = 0;
  const double ps = timed([&] { ms = max_piece_length(pres.relators(), Exec::serial); });
  const double pp = timed([&] { mp = max_piece_length(pres.relators(), Exec::parallel); });
  row("max piece, d=1/12, l=120", ps, pp, ms == mp);

  const BallTable t = enumerate_ball(dehn, 4);
  DeltaEstimate ds, dp;
  const double hs = timed([&] { ds = observed_delta(t, 3, DeltaMode::exhaustive(), Exec::serial); });
  const double hp = timed([&] { dp = observed_delta(t, 3, DeltaMode::exhaustive(), Exec::parallel); });
  row("genus-2 delta, radius 3", hs, hp,
      ds.delta_observed == dp.delta_observed && ds.triangles_tested == dp.triangles_tested);

  const HalfInt two = HalfInt::from_int(2);
  CountingReport cs, cp;
  const double cse = timed([&] { cs = check_couples_bound(a, 3, two, Exec::serial); });
  const double cpa = timed([&] { cp = check_couples_bound(a, 3, two, Exec::parallel); });
  row("couples bound, genus-2, l <= 3", cse, cpa,
      cs.cases == cp.cases && cs.violations == cp.violations && cs.verified == cp.verified);
  return 0;
}
