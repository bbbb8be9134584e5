#include <cstdint>
#include <vector>

#include "rgroups/wordproblem.hpp"

namespace rgroups {

std::string to_string(CollapseVerdict v) {
  switch (v) {
    case CollapseVerdict::trivial: return "trivial";
    case CollapseVerdict::order_two: return "order_two";
    case CollapseVerdict::infinite_or_unknown: return "infinite_or_unknown";
  }
  return "?";
}

namespace {

constexpr std::int32_t kUndefined = -1;

struct CosetOverflow {};

class CosetTable {
 public:
  CosetTable(int m, std::size_t max_cosets)
      : width_(2 * m), max_cosets_(max_cosets) {
    add_coset();
  }

  std::size_t defined() const { return parent_.size(); }
  bool live(std::int32_t c) const { return parent_[c] == c; }
  std::int32_t& at(std::int32_t c, int x) {
    return table_[static_cast<std::size_t>(c) * width_ + x];
  }

  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < parent_.size(); ++c) {
      if (parent_[c] == static_cast<std::int32_t>(c)) ++n;
    }
    return n;
  }

  void define(std::int32_t c, int x) {
    const std::int32_t d = add_coset();
    at(c, x) = d;
    at(d, x ^ 1) = c;
  }

  void scan_and_fill(std::int32_t c, const std::vector<int>& r) {
    std::int32_t f = c, b = c;
    std::ptrdiff_t i = 0, j = static_cast<std::ptrdiff_t>(r.size()) - 1;
    for (;;) {
      while (i <= j && at(f, r[i]) != kUndefined) {
        f = at(f, r[i]);
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, r[j] ^ 1) != kUndefined) {
        b = at(b, r[j] ^ 1);
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        at(f, r[i]) = b;
        at(b, r[i] ^ 1) = f;
        return;
      }
      define(f, r[i]);
    }
  }

 private:
  std::int32_t add_coset() {
    if (parent_.size() >= max_cosets_) throw CosetOverflow{};
    const auto c = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(c);
    table_.resize(table_.size() + width_, kUndefined);
    return c;
  }

  std::int32_t rep(std::int32_t k) {
    std::int32_t root = k;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[k] != root) {
      const std::int32_t next = parent_[k];
      parent_[k] = root;
      k = next;
    }
    return root;
  }

  void merge(std::int32_t k, std::int32_t l) {
    const std::int32_t a = rep(k), b = rep(l);
    if (a == b) return;
    const std::int32_t lo = std::min(a, b), hi = std::max(a, b);
    parent_[hi] = lo;
    queue_.push_back(hi);
  }

  void coincidence(std::int32_t a, std::int32_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const std::int32_t g = queue_[q];
      for (int x = 0; x < width_; ++x) {
        const std::int32_t d = at(g, x);
        if (d == kUndefined) continue;
        at(d, x ^ 1) = kUndefined;
        const std::int32_t mu = rep(g), nu = rep(d);
        if (at(mu, x) != kUndefined) {
          merge(nu, at(mu, x));
        } else if (at(nu, x ^ 1) != kUndefined) {
          merge(mu, at(nu, x ^ 1));
        } else {
          at(mu, x) = nu;
          at(nu, x ^ 1) = mu;
        }
      }
    }
  }

  int width_;
  std::size_t max_cosets_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> queue_;
};

}  // namespace

CollapseResult detect_collapse(const Presentation& p,
                               const CollapseBudget& budget) {
  CollapseResult result;
  std::vector<std::vector<int>> relators;
  for (const auto& r : p.relators()) {
    std::vector<int> codes;
    for (Letter x : r.representative()) codes.push_back(x.code());
    relators.push_back(std::move(codes));
  }
  const int width = 2 * p.generators();
  CosetTable table(p.generators(), std::max<std::size_t>(budget.max_cosets, 1));
  try {
    for (std::int32_t c = 0; static_cast<std::size_t>(c) < table.defined(); ++c) {
      for (const auto& r : relators) {
        if (!table.live(c)) break;
        table.scan_and_fill(c, r);
      }
      if (!table.live(c)) continue;
      for (int x = 0; x < width; ++x) {
        if (table.at(c, x) == kUndefined) table.define(c, x);
      }
    }
  } catch (const CosetOverflow&) {
    result.cosets_defined = table.defined();
    return result;
  }
  result.cosets_defined = table.defined();
  const std::size_t order = table.live_count();
  result.order = order;
  if (order == 1) {
    result.verdict = CollapseVerdict::trivial;
  } else if (order == 2) {
    result.verdict = CollapseVerdict::order_two;
  }
  return result;
}

}  // namespace rgroups
