#include "rgroups/presentation.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rgroups/cayley.hpp"
#include "rgroups/error.hpp"
#include "rgroups/wordproblem.hpp"

namespace rgroups {

Support Support::parse(std::string_view text) {
  if (text == "sphere") return {SupportKind::sphere, 0};
  if (text == "ball") return {SupportKind::ball, 0};
  constexpr std::string_view prefix = "annulus:";
  if (text.substr(0, prefix.size()) == prefix) {
    int w = 0;
    const auto rest = text.substr(prefix.size());
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), w);
    if (ec == std::errc() && ptr == rest.data() + rest.size() && w >= 1) {
      return {SupportKind::annulus, w};
    }
  }
  throw Error("unknown support '" + std::string(text) +
              "' (expected sphere, ball or annulus:C with C >= 1)");
}

std::string Support::str() const {
  switch (kind) {
    case SupportKind::sphere: return "sphere";
    case SupportKind::ball: return "ball";
    case SupportKind::annulus: return "annulus:" + std::to_string(width);
  }
  return "?";
}

void DensityParams::validate() const {
  if (m < 2 || m > kMaxGenerators) throw Error("m must lie in [2, 26]");
  if (d < 0 || d > 1) throw Error("density d must lie in [0, 1]");
  if (length < 1) throw Error("relator length must be >= 1");
  if (support.kind == SupportKind::annulus && support.width < 1) {
    throw Error("annulus width must be >= 1");
  }
  if (base && base->generators() != m) {
    throw Error("base presentation has a different generator count");
  }
}

Presentation::Presentation(int m, std::vector<CyclicWord> relators, Origin origin)
    : m_(m), relators_(std::move(relators)), origin_(std::move(origin)) {
  if (m < 2 || m > kMaxGenerators) throw Error("m must lie in [2, 26]");
  for (const auto& r : relators_) {
    if (r.empty()) throw Error("relators must be nonempty");
    if (r.representative().generators_used() > m) {
      throw Error("relator " + r.str() + " uses more than " + std::to_string(m) +
                  " generators");
    }
  }
}

std::size_t Presentation::max_relator_length() const {
  std::size_t n = 0;
  for (const auto& r : relators_) n = std::max(n, r.size());
  return n;
}

std::size_t Presentation::min_relator_length() const {
  if (relators_.empty()) return 0;
  std::size_t n = relators_.front().size();
  for (const auto& r : relators_) n = std::min(n, r.size());
  return n;
}

nlohmann::ordered_json Presentation::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = m_;
  auto rels = nlohmann::ordered_json::array();
  for (const auto& r : relators_) rels.push_back(r.str());
  j["relators"] = rels;
  nlohmann::ordered_json o;
  o["sampled"] = origin_.sampled;
  if (origin_.sampled) {
    o["d"] = to_string(origin_.d);
    o["length"] = origin_.length;
    o["support"] = origin_.support.str();
    o["model"] = origin_.model;
    o["seed"] = origin_.seed;
    o["relator_count_exact"] = static_cast<double>(origin_.relator_count_exact);
    o["relator_count"] = origin_.relator_count;
    o["rounding"] = "nearest";
    o["base_relators"] = origin_.base_relators;
    o["dedupe"] = origin_.dedupe;
  }
  j["origin"] = o;
  return j;
}

std::string Presentation::dump() const { return to_json().dump(); }

std::uint64_t Presentation::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Presentation Presentation::from_json(const nlohmann::json& j) {
  try {
    const int m = j.at("m").get<int>();
    if (m < 2 || m > kMaxGenerators) throw Error("m must lie in [2, 26]");
    std::vector<CyclicWord> rels;
    for (const auto& r : j.at("relators")) {
      const Word w = Word::parse(r.get<std::string>(), m);
      if (w.empty()) throw Error("relators must be nonempty");
      if (!w.is_cyclically_reduced()) {
        throw Error("relator " + w.str() + " is not cyclically reduced");
      }
      rels.emplace_back(w);
    }
    Origin origin;
    if (j.contains("origin") && j["origin"].value("sampled", false)) {
      const auto& o = j["origin"];
      origin.sampled = true;
      origin.d = parse_rational(o.at("d").get<std::string>());
      origin.length = o.at("length").get<int>();
      origin.support = Support::parse(o.at("support").get<std::string>());
      origin.model = o.at("model").get<std::string>();
      origin.seed = o.at("seed").get<std::uint64_t>();
      origin.relator_count_exact = o.at("relator_count_exact").get<double>();
      origin.relator_count = o.at("relator_count").get<std::uint64_t>();
      origin.base_relators = o.value("base_relators", std::size_t{0});
      origin.dedupe = o.value("dedupe", false);
    }
    return Presentation(m, std::move(rels), std::move(origin));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed presentation JSON: ") + e.what());
  }
}

Presentation Presentation::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read presentation file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed presentation JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

void Presentation::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << to_json().dump(2) << '\n';
  if (!out) throw Error("failed writing " + path);
}

Presentation free_presentation(int m) { return Presentation(m, {}); }

Presentation surface_presentation(int genus) {
  if (genus < 1 || 2 * genus > kMaxGenerators) {
    throw Error("surface genus must lie in [1, 13]");
  }
  Word r;
  for (int i = 0; i < genus; ++i) {
    r.push_back(Letter::generator(2 * i));
    r.push_back(Letter::generator(2 * i + 1));
    r.push_back(Letter::generator(2 * i, true));
    r.push_back(Letter::generator(2 * i + 1, true));
  }
  return Presentation(2 * genus, {CyclicWord(r)});
}

Presentation z2_presentation() { return surface_presentation(1); }

namespace {

int parse_int_after(std::string_view text, std::string_view prefix) {
  int v = 0;
  const auto rest = text.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) {
    throw Error("malformed presentation shorthand '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

Presentation resolve_presentation(std::string_view spec) {
  constexpr std::string_view free_prefix = "free:m=", surface_prefix = "surface:genus=";
  if (spec.substr(0, free_prefix.size()) == free_prefix) {
    return free_presentation(parse_int_after(spec, free_prefix));
  }
  if (spec.substr(0, surface_prefix.size()) == surface_prefix) {
    return surface_presentation(parse_int_after(spec, surface_prefix));
  }
  if (spec == "z2") return z2_presentation();
  return Presentation::load(std::string(spec));
}

namespace {

Rational count_exponent(const DensityParams& p) { return p.d * p.length; }

// Smallest and largest relator length in the support.
std::pair<int, int> support_lengths(const DensityParams& p) {
  switch (p.support.kind) {
    case SupportKind::sphere: return {p.length, p.length};
    case SupportKind::ball: return {0, p.length};
    case SupportKind::annulus: return {p.length, p.length + p.support.width};
  }
  return {p.length, p.length};
}

}  // namespace

std::uint64_t relator_count(const DensityParams& p) {
  p.validate();
  return round_power(static_cast<unsigned>(2 * p.m - 1), count_exponent(p));
}

long double relator_count_exact(const DensityParams& p) {
  p.validate();
  long double approx = 0;
  round_power(static_cast<unsigned>(2 * p.m - 1), count_exponent(p), &approx);
  return approx;
}

BigInt uniform_below(const BigInt& bound, Rng& rng) {
  if (bound <= 0) throw Error("uniform_below needs a positive bound");
  if (bound <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return BigInt(rng.below(static_cast<std::uint64_t>(bound)));
  }
  const std::size_t bits = msb(bound) + 1;
  for (;;) {
    BigInt x = 0;
    std::size_t have = 0;
    while (have < bits) {
      x <<= 64;
      x += rng.next();
      have += 64;
    }
    x >>= static_cast<unsigned>(have - bits);
    if (x < bound) return x;
  }
}

SupportSampler::SupportSampler(const DensityParams& p) : params_(p) {
  p.validate();
  const auto [lo, hi] = support_lengths(p);
  if (!p.base) {
    BigInt total = 0;
    for (int L = lo; L <= hi; ++L) {
      BigInt n = L == 0 ? BigInt(1)
                        : BigInt(2 * p.m) * boost::multiprecision::pow(BigInt(2 * p.m - 1),
                                                                    static_cast<unsigned>(L - 1));
      total += n;
      cumulative_.push_back(total);
    }
    return;
  }
  auto base = p.base;
  const Backend backend = Backend::automatic(base);
  EnumerateOptions opt;
  opt.max_elements = p.max_base_elements;
  try {
    table_ = std::make_unique<BallTable>(enumerate_ball(backend, hi, opt));
  } catch (const EnumerationError& e) {
    const int reached = e.partial() ? e.partial()->radius() : -1;
    throw BudgetExceeded(std::string("base ball enumeration failed: ") + e.what() +
                             " (reached radius " + std::to_string(reached) + ")",
                         reached);
  }
  first_ = table_->level_begin(lo);
  last_ = table_->level_end(hi);
}

SupportSampler::~SupportSampler() = default;
SupportSampler::SupportSampler(SupportSampler&&) noexcept = default;

Word SupportSampler::draw(Rng& rng) const {
  const auto [lo, hi] = support_lengths(params_);
  if (table_) {
    const auto id = static_cast<ElementId>(first_ + rng.below(last_ - first_));
    return table_->canonical_word(id);
  }
  int L = lo;
  if (hi > lo) {
    const BigInt x = uniform_below(cumulative_.back(), rng);
    while (x >= cumulative_[static_cast<std::size_t>(L - lo)]) ++L;
  }
  return random_reduced_word(params_.m, static_cast<std::size_t>(L), rng);
}

Presentation sample_density_presentation(const DensityParams& p, std::uint64_t seed) {
  p.validate();
  const std::uint64_t count = relator_count(p);
  const auto [lo, hi] = support_lengths(p);
  if (static_cast<long double>(count) * static_cast<long double>(std::max(hi, 1)) >
      static_cast<long double>(p.max_total_letters)) {
    throw BudgetExceeded("sampling " + std::to_string(count) + " relators of length up to " +
                             std::to_string(hi) + " exceeds the letter budget of " +
                             std::to_string(p.max_total_letters),
                         static_cast<long long>(count));
  }
  (void)lo;
  SupportSampler sampler(p);
  Rng rng(seed);
  std::vector<CyclicWord> rels;
  if (p.base) rels = p.base->relators();
  const std::size_t base_count = rels.size();
  std::vector<Word> seen_canonical;
  rels.reserve(base_count + count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Word w;
    do {
      w = sampler.draw(rng);
    } while (w.empty() || !w.is_cyclically_reduced());
    CyclicWord c(std::move(w));
    if (p.dedupe) {
      Word key = c.canonical();
      if (std::find(seen_canonical.begin(), seen_canonical.end(), key) !=
          seen_canonical.end()) {
        continue;
      }
      seen_canonical.push_back(std::move(key));
    }
    rels.push_back(std::move(c));
  }
  Origin origin;
  origin.sampled = true;
  origin.d = p.d;
  origin.length = p.length;
  origin.support = p.support;
  origin.model = p.base ? "geodesic" : "word";
  origin.seed = seed;
  origin.relator_count_exact = relator_count_exact(p);
  origin.relator_count = count;
  origin.base_relators = base_count;
  origin.dedupe = p.dedupe;
  return Presentation(p.m, std::move(rels), std::move(origin));
}

}  // namespace rgroups
