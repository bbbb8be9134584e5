#pragma once

// Pieces and the metric small cancellation condition C'(alpha).
//
// An occurrence is (relator, rotation offset, orientation). A piece is a word
// read at two distinct occurrences among the cyclic words r and r^-1. All
// three statistics come from one sorted table of occurrences: each occurrence
// is the cyclic word read from its offset, truncated to the relator length;
// the longest common prefix of two occurrences is then maximised by some pair
// adjacent in sorted order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rgroups/numeric.hpp"
#include "rgroups/words.hpp"

namespace rgroups {

enum class Exec { serial, parallel };

struct SmallCancellationReport {
  std::size_t max_piece_length = 0;
  std::size_t min_relator_length = 0;
  // Max over relators r of (longest piece read in r) / |r|.
  std::uint64_t ratio_num = 0;
  std::uint64_t ratio_den = 1;
  // alpha -> (max_piece_ratio < alpha)
  std::vector<std::pair<Rational, bool>> verdicts;
  bool degenerate = false;

  Rational max_piece_ratio() const { return Rational(ratio_num, ratio_den); }
  bool satisfies(const Rational& alpha) const;
  nlohmann::ordered_json to_json() const;
};

// Sorted occurrence table shared by the statistics below.
class OccurrenceTable {
 public:
  OccurrenceTable(std::span<const CyclicWord> relators, Exec exec);

  std::size_t size() const { return order_.size(); }
  // Longest common prefix of the occurrences at sorted positions i and i+1.
  std::size_t adjacent_lcp(std::size_t i) const { return lcp_[i]; }
  std::uint32_t relator_of(std::size_t i) const;
  std::size_t relator_length(std::uint32_t r) const { return lengths_[r]; }
  std::size_t relator_count() const { return lengths_.size(); }
  std::size_t lcp(std::size_t i, std::size_t j) const;  // sorted positions

 private:
  struct Occ {
    std::uint64_t key;  // first letters packed, for fast ordering
    std::uint32_t pos;  // offset into text_
    std::uint32_t owner;  // 2 * relator + orientation
  };

  int compare(const Occ& a, const Occ& b) const;
  std::size_t common_prefix(const Occ& a, const Occ& b) const;

  std::vector<std::uint8_t> text_;  // doubled cyclic words, 1-based codes
  std::vector<std::uint32_t> base_;  // text offset per owner
  std::vector<std::size_t> lengths_;
  std::vector<Occ> order_;
  std::vector<std::uint32_t> lcp_;
};

std::size_t max_piece_length(std::span<const CyclicWord> relators,
                             Exec exec = Exec::parallel);

SmallCancellationReport check_metric_condition(
    std::span<const CyclicWord> relators, std::span<const Rational> alphas,
    Exec exec = Exec::parallel);
SmallCancellationReport check_metric_condition(
    std::span<const CyclicWord> relators, const Rational& alpha,
    Exec exec = Exec::parallel);

// Longest word common to two distinct relators (either orientation).
// Throws Error for fewer than two relators.
std::size_t shared_subword_stat(std::span<const CyclicWord> relators,
                                Exec exec = Exec::parallel);

}  // namespace rgroups
