#include "rgroups/wordproblem.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

#include "rgroups/smallcancel.hpp"

namespace rgroups {

std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::free: return "free";
    case BackendKind::dehn: return "dehn";
    case BackendKind::budgeted: return "budget";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

Budget Budget::defaults(const Presentation& p) {
  Budget b;
  b.max_word_length = 4 * std::max<std::size_t>(p.max_relator_length(), 1);
  b.max_states = 1'000'000;
  return b;
}

RelatorIndex::RelatorIndex(const Presentation& p) {
  if (p.relators().empty()) {
    return;
  }
  key_length_ = p.min_relator_length() / 2 + 1;
  for (const auto& r : p.relators()) {
    for (const CyclicWord& c : {r, r.inverse()}) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        rotations_.push_back(c.rotation(k));
      }
    }
    max_length_ = std::max(max_length_, r.size());
  }
  for (std::size_t i = 0; i < rotations_.size(); ++i) {
    const auto key = key_hash(rotations_[i].letters().first(key_length_));
    buckets_[key].push_back(static_cast<std::uint32_t>(i));
  }
}

std::uint64_t RelatorIndex::key_hash(std::span<const Letter> s) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Letter x : s) {
    h ^= x.code();
    h *= 0x100000001b3ULL;
  }
  return h;
}

RelatorIndex::Match RelatorIndex::longest_match(std::span<const Letter> w,
                                                std::size_t pos) const {
  Match best;
  if (key_length_ == 0 || pos + key_length_ > w.size()) {
    return best;
  }
  auto it = buckets_.find(key_hash(w.subspan(pos, key_length_)));
  if (it == buckets_.end()) {
    return best;
  }
  std::size_t best_n = 0;
  for (std::uint32_t id : it->second) {
    const Word& rho = rotations_[id];
    const std::size_t limit = std::min(rho.size(), w.size() - pos);
    std::size_t len = 0;
    while (len < limit && rho[len] == w[pos + len]) ++len;
    if (len < key_length_ || 2 * len <= rho.size()) {
      continue;
    }
    if (len > best.length || (len == best.length && rho.size() < best_n)) {
      best = Match{len, id};
      best_n = rho.size();
    }
  }
  return best;
}

Word dehn_reduce(const Word& input, const RelatorIndex& index) {
  const Word reduced = free_reduce(input);
  std::vector<Letter> w(reduced.letters().begin(), reduced.letters().end());
  if (index.rotations().empty()) {
    return Word(std::move(w));
  }
  const std::size_t window = index.max_length();
  std::size_t start = 0;
  for (;;) {
    RelatorIndex::Match match;
    std::size_t at = 0;
    for (std::size_t i = start; i < w.size(); ++i) {
      match = index.longest_match(w, i);
      if (match.length > 0) {
        at = i;
        break;
      }
    }
    if (match.length == 0) {
      break;
    }
    // u = rho[0..L) equals the inverse of the complement rho[L..n).
    const Word& rho = index.rotations()[match.rotation];
    std::vector<Letter> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(at));
    std::size_t lowest = next.size();
    auto push = [&](Letter x) {
      if (!next.empty() && cancels(next.back(), x)) {
        next.pop_back();
        lowest = std::min(lowest, next.size());
      } else {
        next.push_back(x);
      }
    };
    for (std::size_t k = rho.size(); k > match.length; --k) {
      push(rho[k - 1].inverse());
    }
    for (std::size_t k = at + match.length; k < w.size(); ++k) {
      push(w[k]);
    }
    w = std::move(next);
    start = lowest + 1 > window ? lowest + 1 - window : 0;
  }
  return Word(std::move(w));
}

Word dehn_reduce(const Word& w, const Presentation& p) {
  return dehn_reduce(w, RelatorIndex(p));
}

Backend Backend::free(int m) {
  Backend b;
  b.presentation_ = std::make_shared<const Presentation>(free_presentation(m));
  b.kind_ = BackendKind::free;
  return b;
}

Backend Backend::dehn(std::shared_ptr<const Presentation> p) {
  const Rational sixth(1, 6);
  auto report = check_metric_condition(p->relators(), sixth);
  if (!report.satisfies(sixth)) {
    throw NotSmallCancellation(
        "presentation is not C'(1/6) (max piece ratio " +
        to_string(report.max_piece_ratio()) + "); Dehn's algorithm is not a "
        "decision procedure here");
  }
  Backend b;
  b.presentation_ = std::move(p);
  b.kind_ = BackendKind::dehn;
  b.index_ = std::make_shared<const RelatorIndex>(*b.presentation_);
  return b;
}

Backend Backend::budgeted(std::shared_ptr<const Presentation> p, Budget budget) {
  Backend b;
  b.presentation_ = std::move(p);
  b.kind_ = BackendKind::budgeted;
  b.budget_ = budget;
  for (const auto& r : b.presentation_->relators()) {
    for (const CyclicWord& c : {r, r.inverse()}) {
      for (std::size_t k = 0; k < c.size(); ++k) {
        Word rot = c.rotation(k);
        if (std::find(b.rotations_.begin(), b.rotations_.end(), rot) ==
            b.rotations_.end()) {
          b.rotations_.push_back(std::move(rot));
        }
      }
    }
  }
  return b;
}

Backend Backend::automatic(std::shared_ptr<const Presentation> p,
                           std::optional<Budget> budget) {
  if (p->is_free()) {
    Backend b = Backend::free(p->generators());
    b.presentation_ = std::move(p);
    return b;
  }
  try {
    return Backend::dehn(p);
  } catch (const NotSmallCancellation&) {
    const Budget chosen = budget ? *budget : Budget::defaults(*p);
    return Backend::budgeted(std::move(p), chosen);
  }
}

Word Backend::reduce(const Word& w) const {
  if (kind_ == BackendKind::dehn) {
    return dehn_reduce(w, *index_);
  }
  return free_reduce(w);
}

Verdict Backend::is_trivial(const Word& w) const {
  switch (kind_) {
    case BackendKind::free:
      return free_reduce(w).empty() ? Verdict::yes : Verdict::no;
    case BackendKind::dehn:
      return dehn_reduce(w, *index_).empty() ? Verdict::yes : Verdict::no;
    case BackendKind::budgeted:
      return budgeted_search(w);
  }
  return Verdict::unknown;
}

Verdict Backend::are_equal(const Word& x, const Word& y) const {
  return is_trivial(multiply(x, y.inverse()));
}

namespace {

std::string as_key(const Word& w) {
  std::string s(w.size(), '\0');
  for (std::size_t i = 0; i < w.size(); ++i) {
    s[i] = static_cast<char>(w[i].code());
  }
  return s;
}

}  // namespace

Verdict Backend::budgeted_search(const Word& w) const {
  Word start = free_reduce(w);
  if (start.empty()) {
    return Verdict::yes;
  }
  const std::size_t cap = std::max(budget_.max_word_length, start.size());
  std::unordered_set<std::string> seen;
  std::deque<Word> queue;
  seen.insert(as_key(start));
  queue.push_back(std::move(start));
  while (!queue.empty()) {
    const Word u = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i <= u.size(); ++i) {
      const Word head = u.subword(0, i);
      const Word tail = u.subword(i, u.size() - i);
      for (const Word& s : rotations_) {
        Word v = multiply(multiply(head, s), tail);
        if (v.empty()) {
          return Verdict::yes;
        }
        if (v.size() > cap) {
          continue;
        }
        if (seen.insert(as_key(v)).second) {
          if (seen.size() > budget_.max_states) {
            return Verdict::unknown;
          }
          queue.push_back(std::move(v));
        }
      }
    }
  }
  return Verdict::no;
}

Verdict is_trivial(const Word& w, const Backend& b) { return b.is_trivial(w); }

Verdict are_equal(const Word& x, const Word& y, const Backend& b) {
  return b.are_equal(x, y);
}

}  // namespace rgroups
