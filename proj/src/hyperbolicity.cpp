#include "rgroups/hyperbolicity.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "rgroups/rng.hpp"

namespace rgroups {

nlohmann::ordered_json DeltaEstimate::to_json() const {
  nlohmann::ordered_json j;
  j["radius"] = radius;
  j["delta_observed"] = delta_observed.str();
  if (mode.kind == DeltaMode::Kind::exhaustive) {
    j["mode"] = "exhaustive";
  } else {
    j["mode"] = "sampled";
    j["samples"] = mode.samples;
    j["seed"] = mode.seed;
  }
  j["triangles_tested"] = triangles_tested;
  j["triangles_excluded"] = triangles_excluded;
  return j;
}

namespace {

constexpr std::uint16_t kFar = std::numeric_limits<std::uint16_t>::max();
constexpr std::size_t kMatrixLimit = 8000;

// In-table graph distances: a full matrix for small tables, bounded
// breadth-first search otherwise.
class Distances {
 public:
  Distances(const BallTable& t, Exec exec) : t_(t), n_(t.size()) {
    if (n_ > kMatrixLimit) return;
    matrix_.assign(n_ * n_, kFar);
    const auto rows = static_cast<std::ptrdiff_t>(n_);
    auto fill = [&](std::ptrdiff_t s) {
      std::uint16_t* row = matrix_.data() + static_cast<std::size_t>(s) * n_;
      std::vector<ElementId> frontier{static_cast<ElementId>(s)}, next;
      row[s] = 0;
      for (std::uint16_t d = 1; !frontier.empty(); ++d) {
        next.clear();
        for (ElementId u : frontier) {
          for (int x = 0; x < 2 * t_.generators(); ++x) {
            const ElementId v = t_.neighbor(u, Letter::from_code(static_cast<std::uint8_t>(x)));
            if (v != kNoElement && row[v] == kFar) {
              row[v] = d;
              next.push_back(v);
            }
          }
        }
        frontier.swap(next);
      }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (std::ptrdiff_t s = 0; s < rows; ++s) fill(s);
    } else {
      for (std::ptrdiff_t s = 0; s < rows; ++s) fill(s);
    }
  }

  // Distance from p to the nearest element flagged in `target` (listed in
  // `members`), or limit + 1 when it exceeds limit.
  int to_set(ElementId p, const std::vector<ElementId>& members,
             const std::vector<std::uint8_t>& target, int limit,
             std::vector<std::uint8_t>& seen) const {
    if (!matrix_.empty()) {
      int best = std::numeric_limits<int>::max();
      const std::uint16_t* row = matrix_.data() + static_cast<std::size_t>(p) * n_;
      for (ElementId q : members) best = std::min<int>(best, row[q]);
      return best > limit ? limit + 1 : best;
    }
    if (target[p]) return 0;
    std::vector<ElementId> frontier{p}, next, touched{p};
    seen.resize(n_, 0);
    seen[p] = 1;
    int found = limit + 1;
    for (int d = 1; d <= limit && !frontier.empty() && found > limit; ++d) {
      next.clear();
      for (ElementId u : frontier) {
        for (int x = 0; x < 2 * t_.generators(); ++x) {
          const ElementId v = t_.neighbor(u, Letter::from_code(static_cast<std::uint8_t>(x)));
          if (v == kNoElement || seen[v]) continue;
          if (target[v]) {
            found = d;
            break;
          }
          seen[v] = 1;
          touched.push_back(v);
          next.push_back(v);
        }
        if (found <= limit) break;
      }
      frontier.swap(next);
    }
    for (ElementId u : touched) seen[u] = 0;
    return found;
  }

 private:
  const BallTable& t_;
  std::size_t n_;
  std::vector<std::uint16_t> matrix_;
};

struct TriangleResult {
  bool excluded = false;
  int defect = 0;
};

class TriangleScanner {
 public:
  TriangleScanner(const BallTable& t, const Distances& dist)
      : t_(t), dist_(dist), target_(t.size(), 0) {}

  TriangleResult scan(ElementId y, ElementId z) {
    TriangleResult res;
    ancestors(y, side_[0]);
    ancestors(z, side_[1]);
    side_[2].clear();
    auto d = locate(t_, difference_word(t_, y, z));
    if (!d) {
      res.excluded = true;
      return res;
    }
    ElementId cur = y;
    side_[2].push_back(cur);
    for (Letter x : t_.word(*d)) {
      cur = t_.neighbor(cur, x);
      if (cur == kNoElement) {
        res.excluded = true;
        return res;
      }
      side_[2].push_back(cur);
    }
    for (int s = 0; s < 3; ++s) {
      others_.clear();
      for (int o = 0; o < 3; ++o) {
        if (o == s) continue;
        for (ElementId q : side_[o]) {
          if (!target_[q]) {
            target_[q] = 1;
            others_.push_back(q);
          }
        }
      }
      for (ElementId p : side_[s]) {
        const int limit = t_.radius() + 1 - t_.norm(p);
        const int dp = dist_.to_set(p, others_, target_, limit, seen_);
        if (dp > limit) {
          res.excluded = true;
          break;
        }
        res.defect = std::max(res.defect, dp);
      }
      for (ElementId q : others_) target_[q] = 0;
      if (res.excluded) return res;
    }
    return res;
  }

 private:
  void ancestors(ElementId e, std::vector<ElementId>& out) const {
    out.clear();
    for (ElementId u = e; u != kNoElement; u = t_.parent(u)) out.push_back(u);
    std::reverse(out.begin(), out.end());
  }

  const BallTable& t_;
  const Distances& dist_;
  std::vector<std::uint8_t> target_;
  std::vector<std::uint8_t> seen_;
  std::vector<ElementId> side_[3];
  std::vector<ElementId> others_;
};

struct Tally {
  int defect = 0;
  std::size_t tested = 0;
  std::size_t excluded = 0;

  void add(const TriangleResult& r) {
    if (r.excluded) {
      ++excluded;
    } else {
      ++tested;
      defect = std::max(defect, r.defect);
    }
  }
  void merge(const Tally& o) {
    defect = std::max(defect, o.defect);
    tested += o.tested;
    excluded += o.excluded;
  }
};

}  // namespace

DeltaEstimate observed_delta(const BallTable& table, int radius,
                             const DeltaMode& mode, Exec exec) {
  if (radius < 0 || radius > table.radius()) {
    throw OutsideBall("delta radius " + std::to_string(radius) +
                          " beyond table radius " + std::to_string(table.radius()),
                      table.radius());
  }
  if (mode.kind == DeltaMode::Kind::sampled && mode.samples == 0) {
    throw Error("sampled delta estimation needs at least one sample");
  }
  const Distances dist(table, exec);
  const ElementId n = table.level_end(radius);

  std::vector<std::pair<ElementId, ElementId>> pairs;
  if (mode.kind == DeltaMode::Kind::sampled) {
    Rng rng(mode.seed);
    pairs.reserve(mode.samples);
    for (std::size_t i = 0; i < mode.samples; ++i) {
      const auto y = static_cast<ElementId>(rng.below(n));
      const auto z = static_cast<ElementId>(rng.below(n));
      pairs.emplace_back(y, z);
    }
  }

  Tally total;
  const bool exhaustive = mode.kind == DeltaMode::Kind::exhaustive;
  const auto rows = static_cast<std::ptrdiff_t>(exhaustive ? n : pairs.size());
  auto run = [&](std::ptrdiff_t i, TriangleScanner& scanner, Tally& tally) {
    if (exhaustive) {
      // Ordered pairs: the side y -> z is not the reverse of z -> y.
      const auto y = static_cast<ElementId>(i);
      for (ElementId z = 0; z < n; ++z) {
        if (z != y) tally.add(scanner.scan(y, z));
      }
    } else {
      tally.add(scanner.scan(pairs[i].first, pairs[i].second));
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      TriangleScanner scanner(table, dist);
      Tally local;
#pragma omp for schedule(dynamic, 4) nowait
      for (std::ptrdiff_t i = 0; i < rows; ++i) run(i, scanner, local);
#pragma omp critical
      total.merge(local);
    }
  } else {
    TriangleScanner scanner(table, dist);
    for (std::ptrdiff_t i = 0; i < rows; ++i) run(i, scanner, total);
  }

  DeltaEstimate est;
  est.radius = radius;
  est.delta_observed = HalfInt::from_int(total.defect);
  est.mode = mode;
  est.triangles_tested = total.tested;
  est.triangles_excluded = total.excluded;
  return est;
}

Rational delta_upper_from_isoperimetry(const IsoperimetryConstants& c) {
  if (c.C <= 0 || c.C > 1) throw Error("isoperimetric constant C must lie in (0, 1]");
  if (c.lambda < 1) throw Error("relator length bound must be >= 1");
  return Rational(12 * c.lambda) / (c.C * c.C);
}

Rational random_group_delta_bound(const Rational& d, long long length) {
  if (d < 0) throw Error("density must be >= 0");
  if (d >= Rational(1, 2)) {
    throw Error("density >= 1/2: random groups are trivial or Z/2, no hyperbolicity bound");
  }
  if (length < 1) throw Error("relator length must be >= 1");
  const Rational c = Rational(1, 2) - d;
  return Rational(12 * length) / (c * c);
}

}  // namespace rgroups
