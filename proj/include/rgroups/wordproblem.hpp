#pragma once

// Triviality and equality of words in a presented group.
//
//   free      - free reduction; exact for F_m.
//   dehn      - Dehn's algorithm; exact for C'(1/6) presentations only, and
//               refuses to be built for anything else.
//   budgeted  - breadth-first search over relator insertions with a word
//               length cap and a state cap.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rgroups/error.hpp"
#include "rgroups/presentation.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

enum class BackendKind { free, dehn, budgeted };
enum class Verdict { yes, no, unknown };

std::string to_string(BackendKind k);
std::string to_string(Verdict v);

// Search limits for the budgeted backend. max_word_length == 0 means "the
// length of the word being tested", i.e. a non-length-increasing search.
struct Budget {
  std::size_t max_word_length = 0;
  std::size_t max_states = 1'000'000;

  // (4 * longest relator, 10^6).
  static Budget defaults(const Presentation& p);
};

// Thrown when the dehn backend is requested for a presentation that is not
// C'(1/6).
class NotSmallCancellation : public Error {
 public:
  using Error::Error;
};

// Lookup structure over all rotations of r and r^-1, keyed by their first
// `key_length` letters, where key_length is one more than half the shortest
// relator (every Dehn-applicable subword is at least that long).
class RelatorIndex {
 public:
  explicit RelatorIndex(const Presentation& p);

  struct Match {
    std::size_t length = 0;     // letters of w matched; 0 if none
    std::size_t rotation = 0;   // index into rotations()
  };

  // Longest prefix u of w[pos..] that is a prefix of some rotation rho with
  // 2|u| > |rho|. Ties: shorter rho, then lower rotation index.
  Match longest_match(std::span<const Letter> w, std::size_t pos) const;

  const std::vector<Word>& rotations() const { return rotations_; }
  std::size_t key_length() const { return key_length_; }
  std::size_t max_length() const { return max_length_; }

 private:
  std::uint64_t key_hash(std::span<const Letter> s) const;

  std::vector<Word> rotations_;
  std::size_t key_length_ = 0;
  std::size_t max_length_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;
};

// Applies Dehn replacements until none applies: leftmost position first,
// longest match at that position. Output is freely reduced.
Word dehn_reduce(const Word& w, const RelatorIndex& index);
Word dehn_reduce(const Word& w, const Presentation& p);

class Backend {
 public:
  static Backend free(int m);
  // Throws NotSmallCancellation unless p satisfies C'(1/6).
  static Backend dehn(std::shared_ptr<const Presentation> p);
  static Backend budgeted(std::shared_ptr<const Presentation> p, Budget budget);
  // free for relator-free presentations, dehn when C'(1/6) holds, else
  // budgeted with the given budget.
  static Backend automatic(std::shared_ptr<const Presentation> p,
                           std::optional<Budget> budget = std::nullopt);

  BackendKind kind() const { return kind_; }
  const Presentation& presentation() const { return *presentation_; }
  std::shared_ptr<const Presentation> presentation_ptr() const {
    return presentation_;
  }
  int generators() const { return presentation_->generators(); }
  const Budget& budget() const { return budget_; }
  const RelatorIndex* index() const { return index_.get(); }

  // Free reduction, plus Dehn reduction for the dehn backend. Never changes
  // the element.
  Word reduce(const Word& w) const;

  Verdict is_trivial(const Word& w) const;
  Verdict are_equal(const Word& x, const Word& y) const;

 private:
  Backend() = default;
  Verdict budgeted_search(const Word& w) const;

  std::shared_ptr<const Presentation> presentation_;
  BackendKind kind_ = BackendKind::free;
  Budget budget_;
  std::shared_ptr<const RelatorIndex> index_;
  std::vector<Word> rotations_;  // all rotations of r and r^-1 (budgeted)
};

Verdict is_trivial(const Word& w, const Backend& b);
Verdict are_equal(const Word& x, const Word& y, const Backend& b);

enum class CollapseVerdict { trivial, order_two, infinite_or_unknown };
std::string to_string(CollapseVerdict v);

struct CollapseBudget {
  std::size_t max_cosets = std::size_t{1} << 20;
};

struct CollapseResult {
  CollapseVerdict verdict = CollapseVerdict::infinite_or_unknown;
  // Group order when coset enumeration completed.
  std::optional<std::size_t> order;
  std::size_t cosets_defined = 0;
};

// Coset enumeration over the trivial subgroup (HLT with coincidence
// processing) capped at max_cosets. trivial / order_two when it completes
// with index 1 / 2; infinite_or_unknown otherwise (including larger finite
// groups, whose order is still reported).
CollapseResult detect_collapse(const Presentation& p,
                               const CollapseBudget& budget = {});

}  // namespace rgroups
