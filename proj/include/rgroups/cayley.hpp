#pragma once

// Balls in the Cayley graph of a presented group.
//
// Elements are enumerated level by level (level = norm). Each element is
// stored as its canonical representative, the shortlex-least geodesic word
// under the letter order a < A < b < B < ..., together with the
// generator-labelled edges to its neighbours inside the ball.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rgroups/error.hpp"
#include "rgroups/numeric.hpp"
#include "rgroups/smallcancel.hpp"
#include "rgroups/wordproblem.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

namespace detail {
class AbelianLattice;
}

using ElementId = std::uint32_t;
inline constexpr ElementId kNoElement = 0xffffffffu;

class BallTable {
 public:
  BallTable() = default;

  int generators() const { return m_; }
  int radius() const { return radius_; }
  std::size_t size() const { return parent_.size(); }
  BackendKind backend_kind() const { return kind_; }
  const Presentation& presentation() const { return *presentation_; }
  // Whether the edges between elements of the outermost level are known.
  bool rim_complete() const { return rim_complete_; }

  // |B_L| for 0 <= L <= radius.
  const BigInt& ball_count(int L) const;
  // |S_L| = |B_L| - |B_{L-1}|.
  BigInt sphere_count(int L) const;
  std::vector<BigInt> ball_counts() const;

  // Ids with norm L are exactly [level_begin(L), level_end(L)), in shortlex
  // order of their canonical words.
  ElementId level_begin(int L) const { return level_start_[L]; }
  ElementId level_end(int L) const { return level_start_[L + 1]; }

  int norm(ElementId e) const { return norm_[e]; }
  ElementId parent(ElementId e) const { return parent_[e]; }
  Letter last_letter(ElementId e) const { return last_[e]; }
  std::span<const Letter> word(ElementId e) const {
    return {letters_.data() + offset_[e], static_cast<std::size_t>(norm_[e])};
  }
  Word canonical_word(ElementId e) const { return Word(word(e)); }
  // e * x, or kNoElement when outside the ball.
  ElementId neighbor(ElementId e, Letter x) const {
    return adj_[static_cast<std::size_t>(e) * width_ + x.code()];
  }

  // Exact comparison of contents (counts, words, edges).
  friend bool operator==(const BallTable& a, const BallTable& b);

  // Binary element store. load() re-attaches the presentation, which must
  // have the digest recorded in the file.
  void save(const std::string& path) const;
  static BallTable load(const std::string& path,
                        std::shared_ptr<const Presentation> presentation);

 private:
  friend class BallBuilder;
  friend std::optional<ElementId> locate(const BallTable&, const Word&);

  std::shared_ptr<const Presentation> presentation_;
  BackendKind kind_ = BackendKind::free;
  int m_ = 0;
  int width_ = 0;  // 2m
  int radius_ = -1;
  bool rim_complete_ = false;

  std::vector<ElementId> level_start_;  // radius + 2 entries
  std::vector<BigInt> cumulative_;      // |B_0|..|B_radius|
  std::vector<ElementId> parent_;
  std::vector<Letter> last_;
  std::vector<std::uint16_t> norm_;
  std::vector<std::uint64_t> offset_;
  std::vector<Letter> letters_;
  std::vector<ElementId> adj_;  // size() * width_

  // Abelianization key of each element (exponent sums reduced modulo the
  // relator lattice), size() * m_. Empty for the free backend.
  std::vector<std::int64_t> keys_;
  std::unordered_map<std::uint64_t, std::vector<ElementId>> key_index_;
  bool abelian_exact_ = false;  // the key determines the element
  std::shared_ptr<const detail::AbelianLattice> lattice_;
  std::shared_ptr<const Backend> backend_;
};

// Enumeration aborted (unknown verdict from the backend, or budget). The
// levels completed so far are available as partial().
class EnumerationError : public Error {
 public:
  EnumerationError(const std::string& what, std::shared_ptr<const BallTable> partial)
      : Error(what), partial_(std::move(partial)) {}
  const std::shared_ptr<const BallTable>& partial() const { return partial_; }

 private:
  std::shared_ptr<const BallTable> partial_;
};

struct EnumerateOptions {
  Exec exec = Exec::parallel;
  // 0: derived from an 8 GiB memory budget.
  std::size_t max_elements = 0;
  // Called after each completed level (for checkpointing). The table passed
  // has rim_complete() == false except after the final level.
  std::function<void(const BallTable&)> on_level;
  // Continue from a table of smaller radius built for the same presentation.
  const BallTable* resume = nullptr;
};

// Breadth-first enumeration of B_radius. The backend must decide every
// equality it is asked (free or dehn always do; budgeted may abort).
BallTable enumerate_ball(const Backend& backend, int radius,
                         const EnumerateOptions& options = {});

// Element represented by w, if it lies in the ball.
std::optional<ElementId> locate(const BallTable& table, const Word& w);

// Thrown when an element is outside the enumerated ball.
class OutsideBall : public Error {
 public:
  OutsideBall(const std::string& what, int radius) : Error(what), radius_(radius) {}
  int radius() const { return radius_; }

 private:
  int radius_;
};

// Group norm; throws OutsideBall beyond the table radius.
int norm(const BallTable& table, const Word& w);

// (x, y) = (|x| + |y| - |x^-1 y|) / 2 from the identity.
HalfInt gromov_product(const BallTable& table, const Word& x, const Word& y);
HalfInt gromov_product(const BallTable& table, ElementId x, ElementId y);

// |B_L| - |B_{L-a}| with |B_{-1}| = 0.
BigInt annulus_count(const BallTable& table, int L, int a);

// Canonical word of e1^-1 e2 reduced by the backend, for locating it.
Word difference_word(const BallTable& table, ElementId from, ElementId to);

// --- Checks of the annulus counting statements on an enumerated ball. ---
//
// Each case compares an exactly counted (or bracketed) quantity against a
// ball cardinality |B_k|. When k exceeds the table radius only |B_k| >=
// |B_radius| is known; when a product leaves the ball only its norm > radius
// is known. A case is `verified` when the bracket settles it, `violation`
// when it contradicts it, `undecided` otherwise.

enum class CheckOutcome { verified, violation, undecided };
std::string to_string(CheckOutcome o);

struct CountingCase {
  int l = 0;
  int a = 0;
  ElementId g = kNoElement;  // or the target element for the couples check
  BigInt observed_low;
  BigInt observed_high;
  std::optional<BigInt> bound;  // exact |B_k| when k <= radius
  CheckOutcome outcome = CheckOutcome::undecided;
};

struct CountingReport {
  std::string name;
  HalfInt delta;
  std::size_t cases = 0;
  std::size_t verified = 0;
  std::size_t violations = 0;
  std::size_t undecided = 0;
  std::vector<CountingCase> failures;  // violations and undecided, capped
  bool passed() const { return violations == 0 && undecided == 0; }
};

// For g in B_l and 0 <= a <= l: #{g' in S_l : (g,g') >= a} and
// #{g' in B_l : (g,g') >= a} are at most |B_{l-a+2 delta}|.
CountingReport check_product_bound(const BallTable& table, int max_l,
                                   HalfInt delta, Exec exec = Exec::parallel);

// For g in S_{l,a}: #{g' in S_{l,a} : |g g'| >= 2l - 4a} is at least
// |S_{l,a}| - |B_{l-a+2 delta}|.
CountingReport check_long_products(const BallTable& table, int max_l,
                                   HalfInt delta, Exec exec = Exec::parallel);

// For x in S_{2l,4a}: #{(g,g') in S_{l,a}^2 : g g' = x} is at most
// |B_{6a+2 delta}|.
CountingReport check_couples_bound(const BallTable& table, int max_l,
                                   HalfInt delta, Exec exec = Exec::parallel);

}  // namespace rgroups
