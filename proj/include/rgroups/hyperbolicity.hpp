#pragma once

// Thin-triangle constants measured on an enumerated ball, and the
// isoperimetry-to-delta bounds.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "rgroups/cayley.hpp"
#include "rgroups/numeric.hpp"

namespace rgroups {

struct DeltaMode {
  enum class Kind { exhaustive, sampled };
  Kind kind = Kind::exhaustive;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  static DeltaMode exhaustive() { return {}; }
  static DeltaMode sampled(std::size_t n, std::uint64_t seed = 0) {
    return {Kind::sampled, n, seed};
  }
};

struct DeltaEstimate {
  int radius = 0;
  HalfInt delta_observed;
  DeltaMode mode;
  std::size_t triangles_tested = 0;
  std::size_t triangles_excluded = 0;

  nlohmann::ordered_json to_json() const;
};

// Triangles (e, y, z) for ordered pairs y != z in B_radius; by left
// translation this covers every triangle with a vertex in the ball. Sides are
// canonical geodesics:
// the canonical words of y and z read from e, and the canonical word of
// y^-1 z read from y. The defect of a triangle is the largest distance from a
// point on one side to the union of the other two, where distances are
// measured inside the table. A triangle is left out when y^-1 z or a side
// point falls outside the table, or when some point p has
// |p| + D_p - 1 > table radius (the in-table distance D_p could then exceed
// the true one).
DeltaEstimate observed_delta(const BallTable& table, int radius,
                             const DeltaMode& mode = DeltaMode::exhaustive(),
                             Exec exec = Exec::parallel);

struct IsoperimetryConstants {
  Rational C = 1;        // |boundary| >= C * area, 0 < C <= 1
  long long lambda = 1;  // longest relator
};

// 12 lambda / C^2.
Rational delta_upper_from_isoperimetry(const IsoperimetryConstants& c);

// 12 l / (1/2 - d)^2, the bound at density d < 1/2 with C = 1/2 - d.
Rational random_group_delta_bound(const Rational& d, long long length);

}  // namespace rgroups
