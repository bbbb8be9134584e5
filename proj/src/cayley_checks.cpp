#include <algorithm>
#include <unordered_map>

#include "rgroups/cayley.hpp"

namespace rgroups {

std::string to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::verified: return "verified";
    case CheckOutcome::violation: return "violation";
    case CheckOutcome::undecided: return "undecided";
  }
  return "?";
}

namespace {

constexpr std::int16_t kOutside = -1;
constexpr std::size_t kMaxRecorded = 50;

// What is known about |B_k|: exact inside the table, >= |B_radius| beyond.
struct BallBound {
  BigInt low;
  std::optional<BigInt> exact;
};

BallBound ball_bound(const BallTable& t, long long k) {
  if (k < 0) return {BigInt(0), BigInt(0)};
  if (k <= t.radius()) return {t.ball_count(static_cast<int>(k)), t.ball_count(static_cast<int>(k))};
  return {t.ball_count(t.radius()), std::nullopt};
}

// Norms of g^-1 g' (or g g') for all g, g' in B_n, kOutside beyond the table.
std::vector<std::int16_t> pair_norms(const BallTable& t, int n, bool inverse_first,
                                     Exec exec, std::vector<ElementId>* ids) {
  const std::size_t size = t.level_end(n);
  std::vector<std::int16_t> out(size * size, kOutside);
  if (ids != nullptr) ids->assign(size * size, kNoElement);
  auto row = [&](std::size_t i) {
    const Word left = inverse_first ? Word(t.word(static_cast<ElementId>(i))).inverse()
                                    : Word(t.word(static_cast<ElementId>(i)));
    for (std::size_t j = 0; j < size; ++j) {
      auto e = locate(t, multiply(left, Word(t.word(static_cast<ElementId>(j)))));
      if (e) {
        out[i * size + j] = static_cast<std::int16_t>(t.norm(*e));
        if (ids != nullptr) (*ids)[i * size + j] = *e;
      }
    }
  };
  const auto rows = static_cast<std::ptrdiff_t>(size);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < rows; ++i) row(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < rows; ++i) row(static_cast<std::size_t>(i));
  }
  return out;
}

void record(CountingReport& report, CountingCase c) {
  ++report.cases;
  switch (c.outcome) {
    case CheckOutcome::verified: ++report.verified; return;
    case CheckOutcome::violation: ++report.violations; break;
    case CheckOutcome::undecided: ++report.undecided; break;
  }
  if (report.failures.size() < kMaxRecorded) report.failures.push_back(std::move(c));
}

// count in [low, high] claimed to be at most |B_k|.
CheckOutcome at_most(const BigInt& low, const BigInt& high, const BallBound& b) {
  if (high <= b.low) return CheckOutcome::verified;
  if (b.exact && low > *b.exact) return CheckOutcome::violation;
  return CheckOutcome::undecided;
}

void check_max_l(const BallTable& t, int max_l) {
  if (max_l < 0 || max_l > t.radius()) {
    throw OutsideBall("check radius " + std::to_string(max_l) +
                          " beyond table radius " + std::to_string(t.radius()),
                      t.radius());
  }
}

}  // namespace

CountingReport check_product_bound(const BallTable& t, int max_l, HalfInt delta,
                                   Exec exec) {
  check_max_l(t, max_l);
  CountingReport report;
  report.name = "product_bound";
  report.delta = delta;
  const std::size_t size = t.level_end(max_l);
  const auto dist = pair_norms(t, max_l, true, exec, nullptr);
  const int R = t.radius();
  for (int l = 0; l <= max_l; ++l) {
    const ElementId ball_end = t.level_end(l);
    for (ElementId g = 0; g < ball_end; ++g) {
      for (int a = 0; a <= l; ++a) {
        // low/high for g' in S_l and in B_l.
        std::size_t s_low = 0, s_high = 0, b_low = 0, b_high = 0;
        for (ElementId h = 0; h < ball_end; ++h) {
          const int d = dist[g * size + h];
          const int sum = t.norm(g) + t.norm(h);
          bool sure = false, maybe = false;
          if (d != kOutside) {
            sure = sum - d >= 2 * a;
          } else {
            maybe = sum - (R + 1) >= 2 * a;
          }
          const bool on_sphere = t.norm(h) == l;
          if (sure) {
            ++b_low;
            ++b_high;
            if (on_sphere) {
              ++s_low;
              ++s_high;
            }
          } else if (maybe) {
            ++b_high;
            if (on_sphere) ++s_high;
          }
        }
        const BallBound bound = ball_bound(t, static_cast<long long>(l) - a + delta.twice());
        for (int pass = 0; pass < 2; ++pass) {
          CountingCase c;
          c.l = l;
          c.a = a;
          c.g = g;
          c.observed_low = pass == 0 ? s_low : b_low;
          c.observed_high = pass == 0 ? s_high : b_high;
          c.bound = bound.exact;
          c.outcome = at_most(c.observed_low, c.observed_high, bound);
          record(report, std::move(c));
        }
      }
    }
  }
  return report;
}

CountingReport check_long_products(const BallTable& t, int max_l, HalfInt delta,
                                   Exec exec) {
  check_max_l(t, max_l);
  CountingReport report;
  report.name = "long_products";
  report.delta = delta;
  const std::size_t size = t.level_end(max_l);
  const auto prod = pair_norms(t, max_l, false, exec, nullptr);
  const int R = t.radius();
  for (int l = 0; l <= max_l; ++l) {
    for (int a = 0; a <= l; ++a) {
      const ElementId lo = t.level_begin(l - a + 1);
      const ElementId hi = t.level_end(l);
      const BigInt annulus = hi > lo ? BigInt(hi - lo) : BigInt(0);
      const BallBound bound = ball_bound(t, static_cast<long long>(l) - a + delta.twice());
      const int target = 2 * l - 4 * a;
      for (ElementId g = lo; g < hi; ++g) {
        std::size_t c_low = 0, c_high = 0;
        for (ElementId h = lo; h < hi; ++h) {
          const int n = prod[g * size + h];
          if (n != kOutside) {
            if (n >= target) {
              ++c_low;
              ++c_high;
            }
          } else {
            // Outside the ball: the norm exceeds the radius.
            if (R + 1 >= target) ++c_low;
            ++c_high;
          }
        }
        CountingCase c;
        c.l = l;
        c.a = a;
        c.g = g;
        c.observed_low = c_low;
        c.observed_high = c_high;
        c.bound = bound.exact;
        // count >= |S_{l,a}| - |B_k|
        const BigInt need_high = annulus - bound.low;
        if (BigInt(c_low) >= need_high) {
          c.outcome = CheckOutcome::verified;
        } else if (bound.exact && BigInt(c_high) < annulus - *bound.exact) {
          c.outcome = CheckOutcome::violation;
        } else {
          c.outcome = CheckOutcome::undecided;
        }
        record(report, std::move(c));
      }
    }
  }
  return report;
}

CountingReport check_couples_bound(const BallTable& t, int max_l, HalfInt delta,
                                   Exec exec) {
  check_max_l(t, max_l);
  CountingReport report;
  report.name = "couples_bound";
  report.delta = delta;
  const std::size_t size = t.level_end(max_l);
  std::vector<ElementId> ids;
  pair_norms(t, max_l, false, exec, &ids);
  for (int l = 0; l <= max_l; ++l) {
    for (int a = 0; a <= l; ++a) {
      const ElementId lo = t.level_begin(l - a + 1);
      const ElementId hi = t.level_end(l);
      const BallBound bound = ball_bound(t, 6LL * a + delta.twice());
      std::unordered_map<ElementId, std::size_t> hits;
      std::size_t outside = 0;
      for (ElementId g = lo; g < hi; ++g) {
        for (ElementId h = lo; h < hi; ++h) {
          const ElementId x = ids[g * size + h];
          if (x == kNoElement) {
            ++outside;
          } else {
            ++hits[x];
          }
        }
      }
      const int outer = 2 * l, inner = 2 * l - 4 * a;  // S_{2l,4a}: inner < |x| <= outer
      std::vector<std::pair<ElementId, std::size_t>> seen(hits.begin(), hits.end());
      std::sort(seen.begin(), seen.end());
      for (const auto& [x, count] : seen) {
        if (t.norm(x) > outer || t.norm(x) <= inner) continue;
        CountingCase c;
        c.l = l;
        c.a = a;
        c.g = x;
        c.observed_low = count;
        c.observed_high = count;
        c.bound = bound.exact;
        c.outcome = at_most(c.observed_low, c.observed_high, bound);
        record(report, std::move(c));
      }
      if (outside > 0 && outer > t.radius()) {
        // Targets beyond the table: each g fixes g', so any single target has
        // at most min(|S_{l,a}|, #pairs leaving the ball) couples.
        CountingCase c;
        c.l = l;
        c.a = a;
        c.g = kNoElement;
        c.observed_low = 0;
        c.observed_high = std::min<std::size_t>(hi - lo, outside);
        c.bound = bound.exact;
        c.outcome = at_most(c.observed_low, c.observed_high, bound);
        record(report, std::move(c));
      }
    }
  }
  return report;
}

}  // namespace rgroups
