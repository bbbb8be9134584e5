#include "rgroups/smallcancel.hpp"

#include <parallel/algorithm>

#include <algorithm>
#include <bit>

#include "rgroups/error.hpp"

namespace rgroups {

bool SmallCancellationReport::satisfies(const Rational& alpha) const {
  return max_piece_ratio() < alpha;
}

nlohmann::ordered_json SmallCancellationReport::to_json() const {
  nlohmann::ordered_json j;
  j["max_piece_length"] = max_piece_length;
  j["min_relator_length"] = min_relator_length;
  j["max_piece_ratio"] = to_string(max_piece_ratio());
  j["degenerate"] = degenerate;
  auto v = nlohmann::ordered_json::object();
  for (const auto& [alpha, ok] : verdicts) {
    v["C'(" + to_string(alpha) + ")"] = ok;
  }
  j["verdicts"] = v;
  return j;
}

OccurrenceTable::OccurrenceTable(std::span<const CyclicWord> relators,
                                 Exec exec) {
  int m = 1;
  std::size_t total = 0;
  for (const auto& r : relators) {
    m = std::max(m, r.representative().generators_used());
    lengths_.push_back(r.size());
    total += r.size();
  }
  if (4 * total + 2 * relators.size() > std::size_t{0xffffffff}) {
    throw Error("relator set too large for the occurrence table");
  }
  const unsigned bits = std::bit_width(static_cast<unsigned>(2 * m));
  const std::size_t key_letters = 64 / bits;

  text_.reserve(4 * total + 2 * relators.size());
  base_.reserve(2 * relators.size());
  for (const auto& r : relators) {
    for (int orient = 0; orient < 2; ++orient) {
      const Word w = orient == 0 ? r.representative() : r.representative().inverse();
      base_.push_back(static_cast<std::uint32_t>(text_.size()));
      for (int rep = 0; rep < 2; ++rep) {
        for (Letter x : w) {
          text_.push_back(static_cast<std::uint8_t>(x.code() + 1));
        }
      }
      text_.push_back(0);
    }
  }

  order_.reserve(2 * total);
  for (std::uint32_t owner = 0; owner < base_.size(); ++owner) {
    const std::size_t n = lengths_[owner / 2];
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t pos = base_[owner] + static_cast<std::uint32_t>(k);
      std::uint64_t key = 0;
      const std::size_t take = std::min(n, key_letters);
      for (std::size_t i = 0; i < take; ++i) {
        key |= static_cast<std::uint64_t>(text_[pos + i]) << (64 - bits * (i + 1));
      }
      order_.push_back(Occ{key, pos, owner});
    }
  }

  auto less = [this](const Occ& a, const Occ& b) { return compare(a, b) < 0; };
  if (exec == Exec::parallel) {
    __gnu_parallel::sort(order_.begin(), order_.end(), less);
  } else {
    std::sort(order_.begin(), order_.end(), less);
  }

  lcp_.assign(order_.empty() ? 0 : order_.size() - 1, 0);
  const auto n_pairs = static_cast<std::ptrdiff_t>(lcp_.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n_pairs; ++i) {
      lcp_[i] = static_cast<std::uint32_t>(common_prefix(order_[i], order_[i + 1]));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n_pairs; ++i) {
      lcp_[i] = static_cast<std::uint32_t>(common_prefix(order_[i], order_[i + 1]));
    }
  }
}

std::uint32_t OccurrenceTable::relator_of(std::size_t i) const {
  return order_[i].owner / 2;
}

std::size_t OccurrenceTable::lcp(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  if (i == j) return lengths_[relator_of(i)];
  std::uint32_t best = lcp_[i];
  for (std::size_t k = i + 1; k < j; ++k) best = std::min(best, lcp_[k]);
  return best;
}

std::size_t OccurrenceTable::common_prefix(const Occ& a, const Occ& b) const {
  const std::size_t na = lengths_[a.owner / 2];
  const std::size_t nb = lengths_[b.owner / 2];
  const std::size_t n = std::min(na, nb);
  const std::uint8_t* pa = text_.data() + a.pos;
  const std::uint8_t* pb = text_.data() + b.pos;
  std::size_t i = 0;
  while (i < n && pa[i] == pb[i]) ++i;
  return i;
}

int OccurrenceTable::compare(const Occ& a, const Occ& b) const {
  if (a.key != b.key) {
    return a.key < b.key ? -1 : 1;
  }
  const std::size_t na = lengths_[a.owner / 2];
  const std::size_t nb = lengths_[b.owner / 2];
  const std::size_t common = common_prefix(a, b);
  if (common < na && common < nb) {
    return text_[a.pos + common] < text_[b.pos + common] ? -1 : 1;
  }
  if (na != nb) {
    return na < nb ? -1 : 1;
  }
  if (a.owner != b.owner) {
    return a.owner < b.owner ? -1 : 1;
  }
  return a.pos < b.pos ? -1 : (a.pos > b.pos ? 1 : 0);
}

std::size_t max_piece_length(std::span<const CyclicWord> relators, Exec exec) {
  OccurrenceTable table(relators, exec);
  std::size_t best = 0;
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    best = std::max(best, table.adjacent_lcp(i));
  }
  return best;
}

SmallCancellationReport check_metric_condition(
    std::span<const CyclicWord> relators, std::span<const Rational> alphas,
    Exec exec) {
  for (const auto& alpha : alphas) {
    if (alpha <= 0 || alpha > 1) {
      throw Error("alpha must lie in (0, 1]");
    }
  }
  SmallCancellationReport report;
  if (relators.empty()) {
    report.degenerate = true;
    for (const auto& alpha : alphas) report.verdicts.emplace_back(alpha, true);
    return report;
  }
  OccurrenceTable table(relators, exec);
  report.min_relator_length = table.relator_length(0);
  for (std::size_t r = 0; r < table.relator_count(); ++r) {
    report.min_relator_length =
        std::min(report.min_relator_length, table.relator_length(r));
  }
  // Longest piece read in each relator.
  std::vector<std::size_t> longest(table.relator_count(), 0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::size_t here = 0;
    if (i > 0) here = std::max(here, table.adjacent_lcp(i - 1));
    if (i + 1 < table.size()) here = std::max(here, table.adjacent_lcp(i));
    auto& slot = longest[table.relator_of(i)];
    slot = std::max(slot, here);
    report.max_piece_length = std::max(report.max_piece_length, here);
  }
  for (std::size_t r = 0; r < longest.size(); ++r) {
    const std::uint64_t num = longest[r];
    const std::uint64_t den = table.relator_length(r);
    if (num * report.ratio_den > report.ratio_num * den) {
      report.ratio_num = num;
      report.ratio_den = den;
    }
  }
  report.degenerate = report.max_piece_length >= report.min_relator_length;
  for (const auto& alpha : alphas) {
    report.verdicts.emplace_back(alpha, report.satisfies(alpha));
  }
  return report;
}

SmallCancellationReport check_metric_condition(
    std::span<const CyclicWord> relators, const Rational& alpha, Exec exec) {
  return check_metric_condition(relators, std::span<const Rational>(&alpha, 1),
                                exec);
}

std::size_t shared_subword_stat(std::span<const CyclicWord> relators,
                                Exec exec) {
  if (relators.size() < 2) {
    throw Error("shared_subword_stat needs at least two relators");
  }
  OccurrenceTable table(relators, exec);
  // For each position, the nearest earlier occurrence from a different
  // relator has the longest common prefix among such occurrences.
  std::size_t best = 0;
  bool have_other = false;
  std::size_t other_min = 0;  // LCP(last other-relator position, current)
  for (std::size_t i = 1; i < table.size(); ++i) {
    const std::size_t step = table.adjacent_lcp(i - 1);
    const bool differs = table.relator_of(i) != table.relator_of(i - 1);
    if (differs) {
      best = std::max(best, step);
      have_other = true;
      other_min = step;
    } else if (have_other) {
      other_min = std::min(other_min, step);
      best = std::max(best, other_min);
    }
  }
  return best;
}

}  // namespace rgroups
