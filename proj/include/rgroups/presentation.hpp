#pragma once

// Finite presentations <a_1..a_m | R> and the density-model sampler.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rgroups/numeric.hpp"
#include "rgroups/rng.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

class BallTable;
class Presentation;

enum class SupportKind { sphere, ball, annulus };

// Where relators are drawn from: S_l, B_l, or the annulus of norms
// l..l+width.
struct Support {
  SupportKind kind = SupportKind::sphere;
  int width = 0;

  // "sphere", "ball", "annulus:C".
  static Support parse(std::string_view text);
  std::string str() const;
};

struct DensityParams {
  int m = 2;
  Rational d = 0;
  int length = 1;
  Support support;
  // Set for the geodesic variant: relators are uniform elements of the base
  // group's ball, found by enumeration. Unset: word variant over F_m.
  std::shared_ptr<const Presentation> base;
  bool dedupe = false;
  // Guards for the base-ball enumeration and the sampled relator storage.
  std::size_t max_base_elements = 5'000'000;
  std::uint64_t max_total_letters = std::uint64_t{1} << 31;

  void validate() const;
};

struct Origin {
  bool sampled = false;
  // The fields below are meaningful only when sampled.
  Rational d = 0;
  int length = 0;
  Support support;
  std::string model;  // "word" or "geodesic"
  std::uint64_t seed = 0;
  long double relator_count_exact = 0;
  std::uint64_t relator_count = 0;
  std::size_t base_relators = 0;
  bool dedupe = false;
};

class Presentation {
 public:
  Presentation() = default;
  // Throws unless m in [2, 26], every relator is nonempty and uses only the
  // first m generators.
  Presentation(int m, std::vector<CyclicWord> relators, Origin origin = {});

  int generators() const { return m_; }
  const std::vector<CyclicWord>& relators() const { return relators_; }
  const Origin& origin() const { return origin_; }
  bool is_free() const { return relators_.empty(); }

  std::size_t max_relator_length() const;
  std::size_t min_relator_length() const;

  nlohmann::ordered_json to_json() const;
  // Canonical serialization; equal presentations give equal bytes.
  std::string dump() const;
  // FNV-1a of dump().
  std::uint64_t digest() const;

  // Validates letters and cyclic reducedness.
  static Presentation from_json(const nlohmann::json& j);
  static Presentation load(const std::string& path);
  void save(const std::string& path) const;

 private:
  int m_ = 2;
  std::vector<CyclicWord> relators_;
  Origin origin_;
};

Presentation free_presentation(int m);
// [a1,b1][a2,b2]...[ag,bg] on 2g generators.
Presentation surface_presentation(int genus);
// <a, b | [a, b]>.
Presentation z2_presentation();

// Built-in shorthands "free:m=K", "surface:genus=G", "z2", or a JSON file.
Presentation resolve_presentation(std::string_view spec);

// round((2m-1)^(d l)), certified. Throws Error on overflow.
std::uint64_t relator_count(const DensityParams& p);
// (2m-1)^(d l) before rounding.
long double relator_count_exact(const DensityParams& p);

// Uniform sampler over the support: word variant uses closed-form free counts,
// geodesic variant enumerates the base ball once.
class SupportSampler {
 public:
  explicit SupportSampler(const DensityParams& p);
  ~SupportSampler();
  SupportSampler(SupportSampler&&) noexcept;

  // One uniform element of the support as its geodesic word.
  Word draw(Rng& rng) const;

 private:
  DensityParams params_;
  std::vector<BigInt> cumulative_;  // word variant: cumulative sphere sizes
  std::unique_ptr<BallTable> table_;  // geodesic variant
  std::uint32_t first_ = 0, last_ = 0;  // table id range of the support
};

// Uniform integer in [0, bound).
BigInt uniform_below(const BigInt& bound, Rng& rng);

Presentation sample_density_presentation(const DensityParams& p,
                                         std::uint64_t seed);

}  // namespace rgroups
