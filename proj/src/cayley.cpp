#include "rgroups/cayley.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>

#include "rgroups/rng.hpp"

namespace rgroups {

namespace detail {

namespace {

// A sublattice of Z^n with a unique representative per coset (reduction
// against an echelon basis).
class EchelonLattice {
 public:
  EchelonLattice(int n, std::vector<std::vector<std::int64_t>> rows, long double coord_bound)
      : n_(n) {
    valid_ = echelon(rows);
    if (valid_) {
      // Bound the growth of reduced coordinates so that int64 never overflows.
      long double bound = coord_bound;
      for (const auto& row : basis_) {
        std::int64_t h = 0;
        for (auto c : row) h = std::max<std::int64_t>(h, c < 0 ? -c : c);
        bound *= static_cast<long double>(h + 1);
        if (bound > 4.0e18L) {
          valid_ = false;
          break;
        }
      }
    }
    if (!valid_) basis_.clear();
  }

  bool valid() const { return valid_; }

  void reduce(std::int64_t* out) const {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const auto& h = basis_[i];
      const int p = pivot_[i];
      std::int64_t q = out[p] / h[p];
      if (out[p] % h[p] != 0 && out[p] < 0) --q;
      if (q == 0) continue;
      for (int j = p; j < n_; ++j) out[j] -= q * h[j];
    }
  }

 private:
  bool echelon(std::vector<std::vector<std::int64_t>>& rows) {
    constexpr std::int64_t kLimit = std::int64_t{1} << 40;
    std::size_t top = 0;
    for (int col = 0; col < n_ && top < rows.size(); ++col) {
      for (;;) {
        std::size_t best = rows.size();
        for (std::size_t i = top; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          if (best == rows.size() ||
              std::llabs(rows[i][col]) < std::llabs(rows[best][col])) {
            best = i;
          }
        }
        if (best == rows.size()) break;
        std::swap(rows[top], rows[best]);
        bool others = false;
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
          if (rows[i][col] == 0) continue;
          const std::int64_t q = rows[i][col] / rows[top][col];
          for (int j = col; j < n_; ++j) {
            std::int64_t t;
            if (__builtin_mul_overflow(q, rows[top][j], &t) ||
                __builtin_sub_overflow(rows[i][j], t, &rows[i][j]) ||
                std::llabs(rows[i][j]) > kLimit) {
              return false;
            }
          }
          if (rows[i][col] != 0) others = true;
        }
        if (!others) {
          if (rows[top][col] < 0) {
            for (auto& c : rows[top]) c = -c;
          }
          basis_.push_back(rows[top]);
          pivot_.push_back(col);
          ++top;
          break;
        }
      }
    }
    return true;
  }

  int n_;
  bool valid_ = true;
  std::vector<std::vector<std::int64_t>> basis_;
  std::vector<int> pivot_;
};

}  // namespace

// An invariant of group elements used to bucket candidates before exact
// equality tests: the image in Z^m modulo the relator exponent sums, and, when
// every relator has exponent sum zero, also the image in the free class-2
// nilpotent group modulo the (central) relator images. That group is
// Z^m x Z^{m(m-1)/2} with (v, A)(w, B) = (v + w, A + B + beta(v, w)),
// beta(v, w)_{ij} = v_i w_j for i < j.
class AbelianLattice {
 public:
  explicit AbelianLattice(const Presentation& p) : m_(p.generators()) {
    const int pairs = m_ * (m_ - 1) / 2;
    std::vector<std::vector<std::int64_t>> rows, areas;
    bool balanced = true;
    std::vector<std::int64_t> v(m_), a(pairs);
    for (const auto& r : p.relators()) {
      std::fill(v.begin(), v.end(), 0);
      std::fill(a.begin(), a.end(), 0);
      for (Letter x : r.representative()) step(x, v.data(), a.data());
      if (std::any_of(v.begin(), v.end(), [](auto c) { return c != 0; })) {
        rows.push_back(v);
        balanced = false;
      } else if (std::any_of(a.begin(), a.end(), [](auto c) { return c != 0; })) {
        areas.push_back(a);
      }
    }
    abelian_ = std::make_unique<EchelonLattice>(m_, std::move(rows), 65537.0L);
    // Area coordinates of words shorter than 2^16 stay below 2^30.
    if (abelian_->valid() && balanced && pairs > 0) {
      area_ = std::make_unique<EchelonLattice>(pairs, std::move(areas), 1.1e9L);
      if (!area_->valid()) area_.reset();
    }
    width_ = m_ + (area_ ? pairs : 0);
  }

  bool valid() const { return abelian_->valid(); }
  int dimension() const { return m_; }
  // Number of int64 coordinates written by key().
  int width() const { return width_; }

  void key(std::span<const Letter> w, Letter extra, bool with_extra,
           std::int64_t* out) const {
    std::fill(out, out + width_, 0);
    if (!valid()) return;
    if (area_) {
      for (Letter x : w) step(x, out, out + m_);
      if (with_extra) step(extra, out, out + m_);
      area_->reduce(out + m_);
      return;
    }
    for (Letter x : w) out[x.index()] += x.is_inverse() ? -1 : 1;
    if (with_extra) out[extra.index()] += extra.is_inverse() ? -1 : 1;
    abelian_->reduce(out);
  }

 private:
  // Right multiplication by a generator or its inverse.
  void step(Letter x, std::int64_t* v, std::int64_t* a) const {
    const int k = x.index();
    const std::int64_t s = x.is_inverse() ? -1 : 1;
    for (int i = 0; i < k; ++i) a[pair_index(i, k)] += s * v[i];
    v[k] += s;
  }

  int pair_index(int i, int j) const { return i * (2 * m_ - i - 1) / 2 + (j - i - 1); }

  int m_;
  int width_ = 0;
  std::unique_ptr<EchelonLattice> abelian_, area_;
};

}  // namespace detail

namespace {

using detail::AbelianLattice;

constexpr ElementId kPending = kNoElement - 1;
constexpr ElementId kUndecided = kNoElement - 2;

std::uint64_t hash_key(const std::int64_t* k, int m) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (int i = 0; i < m; ++i) {
    std::uint64_t state = h ^ static_cast<std::uint64_t>(k[i]);
    h = splitmix64(state);
  }
  return h;
}

std::size_t default_max_elements(int m, int radius) {
  const std::size_t per = 16 + 12 * static_cast<std::size_t>(m) +
                          static_cast<std::size_t>(std::max(radius, 1)) + 48;
  return (std::size_t{8} << 30) / per;
}

std::optional<ElementId> walk(const BallTable& t, std::span<const Letter> w) {
  ElementId e = 0;
  for (Letter x : w) {
    e = t.neighbor(e, x);
    if (e == kNoElement) return std::nullopt;
  }
  return e;
}

}  // namespace

const BigInt& BallTable::ball_count(int L) const {
  if (L < 0 || L > radius_) {
    throw OutsideBall("radius " + std::to_string(L) + " beyond table radius " +
                          std::to_string(radius_),
                      radius_);
  }
  return cumulative_[L];
}

BigInt BallTable::sphere_count(int L) const {
  return L == 0 ? ball_count(0) : BigInt(ball_count(L) - ball_count(L - 1));
}

std::vector<BigInt> BallTable::ball_counts() const { return cumulative_; }

bool operator==(const BallTable& a, const BallTable& b) {
  return a.m_ == b.m_ && a.radius_ == b.radius_ &&
         a.rim_complete_ == b.rim_complete_ && a.level_start_ == b.level_start_ &&
         a.cumulative_ == b.cumulative_ && a.parent_ == b.parent_ &&
         a.last_ == b.last_ && a.letters_ == b.letters_ && a.adj_ == b.adj_;
}

// Grows a BallTable one level at a time.
class BallBuilder {
 public:
  BallBuilder(const Backend& backend, const EnumerateOptions& options, int radius)
      : backend_(std::make_shared<const Backend>(backend)),
        options_(options),
        lattice_(std::make_shared<const AbelianLattice>(backend.presentation())),
        m_(backend.generators()),
        width_(2 * m_),
        kw_(lattice_->width()) {
    max_elements_ = options.max_elements != 0
                        ? options.max_elements
                        : default_max_elements(m_, radius);
    use_keys_ = backend.kind() != BackendKind::free;
    if (backend.kind() == BackendKind::budgeted) {
      abelian_exact_ = lattice_->valid() && is_abelian(backend);
    }
    if (options.resume != nullptr) {
      start_from(*options.resume);
    } else {
      start_fresh();
    }
  }

  BallTable& table() { return t_; }

  // Expands the outermost level. With create == false only the edges among
  // existing elements are resolved (rim completion).
  void expand(bool create) {
    const int L = t_.radius_;
    const ElementId begin = t_.level_begin(L), end = t_.level_end(L);
    const std::size_t n_cand = static_cast<std::size_t>(end - begin) * width_;
    std::vector<ElementId> result(n_cand, kNoElement);
    std::vector<std::int64_t> cand_keys(use_keys_ ? n_cand * kw_ : 0);
    std::atomic<bool> undecided{false};

    auto match_parent = [&](ElementId p) {
      Word w;
      w.reserve(static_cast<std::size_t>(L) + 1);
      for (int x = 0; x < width_; ++x) {
        const std::size_t c = static_cast<std::size_t>(p - begin) * width_ + x;
        const ElementId known = t_.adj_[static_cast<std::size_t>(p) * width_ + x];
        if (known != kNoElement) {
          result[c] = known;
          continue;
        }
        const Letter letter = Letter::from_code(static_cast<std::uint8_t>(x));
        w = Word(t_.word(p));
        w.push_back(letter);
        if (backend_->kind() == BackendKind::free) {
          result[c] = kPending;
          continue;
        }
        if (backend_->kind() == BackendKind::dehn) {
          const Word r = dehn_reduce(w, *backend_->index());
          if (r.size() < w.size()) {
            auto e = walk(t_, r.letters());
            result[c] = e ? *e : kUndecided;
            if (!e) undecided = true;
            continue;
          }
        }
        std::int64_t* key = cand_keys.data() + c * kw_;
        lattice_->key(t_.word(p), letter, true, key);
        result[c] = kPending;
        auto it = level_index_.find(hash_key(key, kw_));
        if (it == level_index_.end()) continue;
        for (ElementId e : it->second) {
          if (!std::equal(key, key + kw_, t_.keys_.data() + static_cast<std::size_t>(e) * kw_)) {
            continue;
          }
          const Verdict v = same_element(w, Word(t_.word(e)));
          if (v == Verdict::yes) {
            result[c] = e;
            break;
          }
          if (v == Verdict::unknown) {
            result[c] = kUndecided;
            undecided = true;
            break;
          }
        }
      }
    };

    const auto n_parents = static_cast<std::ptrdiff_t>(end - begin);
    if (options_.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::ptrdiff_t i = 0; i < n_parents; ++i) {
        match_parent(begin + static_cast<ElementId>(i));
      }
    } else {
      for (std::ptrdiff_t i = 0; i < n_parents; ++i) {
        match_parent(begin + static_cast<ElementId>(i));
      }
    }
    if (undecided) {
      fail("the word problem backend could not decide an equality at level " +
           std::to_string(L + 1));
    }

    if (!create) {
      commit_edges(begin, result);
      t_.rim_complete_ = true;
      return;
    }

    // Pending candidates equal to each other collapse onto the first one in
    // candidate (= shortlex) order.
    std::vector<ElementId> rep(n_cand, kNoElement);
    std::vector<std::vector<std::size_t>> groups;
    if (use_keys_) {
      std::unordered_map<std::uint64_t, std::size_t> group_of;
      for (std::size_t c = 0; c < n_cand; ++c) {
        if (result[c] != kPending) continue;
        const auto h = hash_key(cand_keys.data() + c * kw_, kw_);
        auto [it, inserted] = group_of.try_emplace(h, groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(c);
      }
    }
    auto candidate_word = [&](std::size_t c) {
      Word w(t_.word(begin + static_cast<ElementId>(c / width_)));
      w.push_back(Letter::from_code(static_cast<std::uint8_t>(c % width_)));
      return w;
    };
    auto dedupe_group = [&](const std::vector<std::size_t>& g) {
      std::vector<std::size_t> reps;
      for (std::size_t c : g) {
        const std::int64_t* kc = cand_keys.data() + c * kw_;
        const Word wc = candidate_word(c);
        std::size_t found = n_cand;
        for (std::size_t r : reps) {
          if (!std::equal(kc, kc + kw_, cand_keys.data() + r * kw_)) continue;
          const Verdict v = same_element(wc, candidate_word(r));
          if (v == Verdict::yes) {
            found = r;
            break;
          }
          if (v == Verdict::unknown) {
            undecided = true;
            return;
          }
        }
        if (found == n_cand) {
          reps.push_back(c);
          rep[c] = static_cast<ElementId>(c);
        } else {
          rep[c] = static_cast<ElementId>(found);
        }
      }
    };
    const auto n_groups = static_cast<std::ptrdiff_t>(groups.size());
    if (options_.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (std::ptrdiff_t i = 0; i < n_groups; ++i) dedupe_group(groups[i]);
    } else {
      for (std::ptrdiff_t i = 0; i < n_groups; ++i) dedupe_group(groups[i]);
    }
    if (undecided) {
      fail("the word problem backend could not decide an equality at level " +
           std::to_string(L + 1));
    }

    // New ids in candidate order.
    std::size_t fresh = 0;
    for (std::size_t c = 0; c < n_cand; ++c) {
      if (result[c] == kPending && (!use_keys_ || rep[c] == c)) ++fresh;
    }
    if (t_.size() + fresh > max_elements_) {
      fail("element budget of " + std::to_string(max_elements_) +
           " exceeded at level " + std::to_string(L + 1));
    }
    if (t_.size() + fresh >= kUndecided) {
      fail("element ids exhausted at level " + std::to_string(L + 1));
    }
    if (L + 1 > std::numeric_limits<std::uint16_t>::max()) {
      fail("radius too large");
    }
    const ElementId first_new = static_cast<ElementId>(t_.size());
    for (std::size_t c = 0; c < n_cand; ++c) {
      if (result[c] != kPending) continue;
      if (use_keys_ && rep[c] != c) continue;
      const ElementId id = static_cast<ElementId>(t_.size());
      const ElementId p = begin + static_cast<ElementId>(c / width_);
      const Letter x = Letter::from_code(static_cast<std::uint8_t>(c % width_));
      t_.parent_.push_back(p);
      t_.last_.push_back(x);
      t_.norm_.push_back(static_cast<std::uint16_t>(L + 1));
      t_.offset_.push_back(t_.letters_.size());
      const Word pw(t_.word(p));
      t_.letters_.insert(t_.letters_.end(), pw.begin(), pw.end());
      t_.letters_.push_back(x);
      t_.adj_.resize(t_.adj_.size() + width_, kNoElement);
      if (use_keys_) {
        t_.keys_.insert(t_.keys_.end(), cand_keys.data() + c * kw_,
                        cand_keys.data() + (c + 1) * kw_);
      }
      result[c] = id;
    }
    for (std::size_t c = 0; c < n_cand; ++c) {
      if (result[c] == kPending) result[c] = result[rep[c]];
    }
    commit_edges(begin, result);

    t_.radius_ = L + 1;
    t_.rim_complete_ = false;
    t_.level_start_.push_back(static_cast<ElementId>(t_.size()));
    t_.cumulative_.push_back(BigInt(t_.size()));
    level_index_.clear();
    for (ElementId e = first_new; e < t_.size(); ++e) {
      if (!use_keys_) break;
      const auto h = hash_key(t_.keys_.data() + static_cast<std::size_t>(e) * kw_, kw_);
      level_index_[h].push_back(e);
      t_.key_index_[h].push_back(e);
    }
  }

  [[noreturn]] void fail(const std::string& what) {
    throw EnumerationError(what, std::make_shared<const BallTable>(t_));
  }

 private:
  static bool is_abelian(const Backend& b) {
    const int m = b.generators();
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        Word c;
        c.push_back(Letter::generator(i));
        c.push_back(Letter::generator(j));
        c.push_back(Letter::generator(i, true));
        c.push_back(Letter::generator(j, true));
        if (b.is_trivial(c) != Verdict::yes) return false;
      }
    }
    return true;
  }

  Verdict same_element(const Word& u, const Word& v) const {
    if (abelian_exact_) return Verdict::yes;  // keys already agree
    return backend_->are_equal(u, v);
  }

  void commit_edges(ElementId begin, const std::vector<ElementId>& result) {
    for (std::size_t c = 0; c < result.size(); ++c) {
      const ElementId e = result[c];
      if (e == kPending || e == kNoElement) continue;
      const ElementId p = begin + static_cast<ElementId>(c / width_);
      const int x = static_cast<int>(c % width_);
      t_.adj_[static_cast<std::size_t>(p) * width_ + x] = e;
      auto& back = t_.adj_[static_cast<std::size_t>(e) * width_ + (x ^ 1)];
      if (back != kNoElement && back != p) {
        fail("inconsistent Cayley graph edge; the backend is not exact here");
      }
      back = p;
    }
  }

  void start_fresh() {
    t_.presentation_ = backend_->presentation_ptr();
    t_.backend_ = backend_;
    t_.lattice_ = lattice_;
    t_.kind_ = backend_->kind();
    t_.m_ = m_;
    t_.width_ = width_;
    t_.radius_ = 0;
    t_.abelian_exact_ = abelian_exact_;
    t_.level_start_ = {0, 1};
    t_.cumulative_ = {BigInt(1)};
    t_.parent_ = {kNoElement};
    t_.last_ = {Letter()};
    t_.norm_ = {0};
    t_.offset_ = {0};
    t_.adj_.assign(width_, kNoElement);
    if (use_keys_) {
      t_.keys_.assign(kw_, 0);
      const auto h = hash_key(t_.keys_.data(), kw_);
      t_.key_index_[h].push_back(0);
      level_index_[h].push_back(0);
    }
  }

  void start_from(const BallTable& from) {
    if (from.m_ != m_ ||
        from.presentation().digest() != backend_->presentation().digest()) {
      throw Error("resume table was built for a different presentation");
    }
    t_ = from;
    t_.presentation_ = backend_->presentation_ptr();
    t_.backend_ = backend_;
    t_.lattice_ = lattice_;
    t_.kind_ = backend_->kind();
    t_.abelian_exact_ = abelian_exact_;
    if (use_keys_ && t_.keys_.size() != t_.size() * kw_) {
      throw Error("resume table lacks element keys");
    }
    level_index_.clear();
    for (ElementId e = t_.level_begin(t_.radius_); e < t_.level_end(t_.radius_) && use_keys_; ++e) {
      level_index_[hash_key(t_.keys_.data() + static_cast<std::size_t>(e) * kw_, kw_)]
          .push_back(e);
    }
  }

  std::shared_ptr<const Backend> backend_;
  EnumerateOptions options_;
  std::shared_ptr<const AbelianLattice> lattice_;
  int m_;
  int width_;
  int kw_;
  std::size_t max_elements_ = 0;
  bool use_keys_ = false;
  bool abelian_exact_ = false;
  BallTable t_;
  std::unordered_map<std::uint64_t, std::vector<ElementId>> level_index_;
};

BallTable enumerate_ball(const Backend& backend, int radius,
                         const EnumerateOptions& options) {
  if (radius < 0) throw Error("radius must be >= 0");
  BallBuilder builder(backend, options, radius);
  if (builder.table().radius() > radius) {
    throw Error("resume table is larger than the requested radius");
  }
  while (builder.table().radius() < radius) {
    builder.expand(true);
    if (options.on_level && builder.table().radius() < radius) {
      options.on_level(builder.table());
    }
  }
  if (!builder.table().rim_complete()) builder.expand(false);
  if (options.on_level) options.on_level(builder.table());
  return std::move(builder.table());
}

std::optional<ElementId> locate(const BallTable& table, const Word& w) {
  const Backend& b = *table.backend_;
  const Word r = b.reduce(w);
  if (auto e = walk(table, r.letters())) return e;
  if (table.kind_ == BackendKind::free) return std::nullopt;

  std::vector<std::int64_t> key(table.lattice_->width());
  table.lattice_->key(r.letters(), Letter(), false, key.data());
  auto it = table.key_index_.find(hash_key(key.data(), table.lattice_->width()));
  if (it == table.key_index_.end()) return std::nullopt;
  for (ElementId e : it->second) {
    if (!std::equal(key.begin(), key.end(),
                    table.keys_.data() + static_cast<std::size_t>(e) * key.size())) {
      continue;
    }
    if (table.abelian_exact_) return e;
    const Verdict v = b.are_equal(r, Word(table.word(e)));
    if (v == Verdict::yes) return e;
    if (v == Verdict::unknown) {
      throw Error("the word problem backend could not locate " + w.str());
    }
  }
  return std::nullopt;
}

int norm(const BallTable& table, const Word& w) {
  auto e = locate(table, w);
  if (!e) {
    throw OutsideBall("element " + w.str() + " has norm greater than " +
                          std::to_string(table.radius()),
                      table.radius());
  }
  return table.norm(*e);
}

Word difference_word(const BallTable& table, ElementId from, ElementId to) {
  return multiply(Word(table.word(from)).inverse(), Word(table.word(to)));
}

HalfInt gromov_product(const BallTable& table, ElementId x, ElementId y) {
  auto d = locate(table, difference_word(table, x, y));
  if (!d) {
    throw OutsideBall("x^-1 y has norm greater than " + std::to_string(table.radius()),
                      table.radius());
  }
  return HalfInt::from_twice(table.norm(x) + table.norm(y) - table.norm(*d));
}

HalfInt gromov_product(const BallTable& table, const Word& x, const Word& y) {
  auto ex = locate(table, x);
  auto ey = locate(table, y);
  if (!ex || !ey) {
    throw OutsideBall("argument has norm greater than " + std::to_string(table.radius()),
                      table.radius());
  }
  return gromov_product(table, *ex, *ey);
}

BigInt annulus_count(const BallTable& table, int L, int a) {
  if (L < 0 || L > table.radius()) {
    throw OutsideBall("annulus radius " + std::to_string(L) + " outside [0, " +
                          std::to_string(table.radius()) + "]",
                      table.radius());
  }
  if (a < 0 || a > L) throw Error("annulus width must lie in [0, L]");
  return table.ball_count(L) - table.ball_count(L - a);
}

namespace {

constexpr char kMagic[8] = {'R', 'G', 'B', 'A', 'L', 'L', '0', '2'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
void put_vec(std::ofstream& out, const std::vector<T>& v) {
  put<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}
template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error("truncated ball table file");
  return v;
}
template <class T>
std::vector<T> get_vec(std::ifstream& in, std::uint64_t limit) {
  const auto n = get<std::uint64_t>(in);
  if (n > limit) throw Error("corrupt ball table file");
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw Error("truncated ball table file");
  return v;
}

}  // namespace

void BallTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(kMagic, sizeof kMagic);
  put<std::uint64_t>(out, presentation_->digest());
  put<std::int32_t>(out, m_);
  put<std::int32_t>(out, radius_);
  put<std::uint8_t>(out, rim_complete_ ? 1 : 0);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(kind_));
  put_vec(out, level_start_);
  put_vec(out, parent_);
  put_vec(out, last_);
  put_vec(out, adj_);
  put_vec(out, keys_);
  put<std::uint8_t>(out, abelian_exact_ ? 1 : 0);
  if (!out) throw Error("failed writing " + path);
}

BallTable BallTable::load(const std::string& path,
                          std::shared_ptr<const Presentation> presentation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(path + " is not a ball table file");
  }
  if (get<std::uint64_t>(in) != presentation->digest()) {
    throw Error(path + " was built for a different presentation");
  }
  BallTable t;
  t.m_ = get<std::int32_t>(in);
  t.width_ = 2 * t.m_;
  t.radius_ = get<std::int32_t>(in);
  t.rim_complete_ = get<std::uint8_t>(in) != 0;
  const auto kind = static_cast<BackendKind>(get<std::uint8_t>(in));
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 36;
  t.level_start_ = get_vec<ElementId>(in, kLimit);
  t.parent_ = get_vec<ElementId>(in, kLimit);
  t.last_ = get_vec<Letter>(in, kLimit);
  t.adj_ = get_vec<ElementId>(in, kLimit);
  t.keys_ = get_vec<std::int64_t>(in, kLimit);
  t.abelian_exact_ = get<std::uint8_t>(in) != 0;
  const std::size_t n = t.parent_.size();
  if (t.m_ != presentation->generators() || t.radius_ < 0 ||
      t.level_start_.size() != static_cast<std::size_t>(t.radius_) + 2 ||
      t.level_start_.back() != n || t.last_.size() != n ||
      t.adj_.size() != n * t.width_) {
    throw Error(path + " is inconsistent");
  }
  t.presentation_ = std::move(presentation);
  t.kind_ = kind;
  switch (kind) {
    case BackendKind::free:
      t.backend_ = std::make_shared<const Backend>(Backend::free(t.m_));
      break;
    case BackendKind::dehn:
      t.backend_ = std::make_shared<const Backend>(Backend::dehn(t.presentation_));
      break;
    case BackendKind::budgeted:
      t.backend_ = std::make_shared<const Backend>(
          Backend::budgeted(t.presentation_, Budget::defaults(*t.presentation_)));
      break;
  }
  t.lattice_ = std::make_shared<const AbelianLattice>(*t.presentation_);
  t.norm_.resize(n);
  t.offset_.resize(n);
  for (int L = 0; L <= t.radius_; ++L) {
    for (ElementId e = t.level_start_[L]; e < t.level_start_[L + 1]; ++e) {
      t.norm_[e] = static_cast<std::uint16_t>(L);
      t.offset_[e] = t.letters_.size();
      if (L > 0) {
        if (t.parent_[e] >= e) throw Error(path + " is inconsistent");
        const Word pw(t.word(t.parent_[e]));
        t.letters_.insert(t.letters_.end(), pw.begin(), pw.end());
        t.letters_.push_back(t.last_[e]);
      }
    }
    t.cumulative_.push_back(BigInt(t.level_start_[L + 1]));
  }
  if (!t.keys_.empty()) {
    const int kw = t.lattice_->width();
    if (t.keys_.size() != n * static_cast<std::size_t>(kw)) throw Error(path + " is inconsistent");
    for (ElementId e = 0; e < n; ++e) {
      t.key_index_[hash_key(t.keys_.data() + static_cast<std::size_t>(e) * kw, kw)]
          .push_back(e);
    }
  }
  return t;
}

}  // namespace rgroups
