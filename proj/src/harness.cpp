#include "rgroups/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rgroups/cayley.hpp"
#include "rgroups/growth.hpp"
#include "rgroups/rng.hpp"
#include "rgroups/smallcancel.hpp"

namespace fs = std::filesystem;

namespace rgroups {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

template <class T>
void env_override(const char* name, T& field) {
  const char* v = std::getenv(name);
  if (!v || !*v) return;
  try {
    std::size_t used = 0;
    const unsigned long long x = std::stoull(v, &used);
    if (used != std::string_view(v).size() || x == 0) throw std::invalid_argument(v);
    field = static_cast<T>(x);
  } catch (const std::exception&) {
    throw Error(std::string(name) + " must be a positive integer, got '" + v + "'");
  }
}

}  // namespace

void SweepBudgets::apply_environment() {
  env_override("RGROUPS_MAX_ELEMENTS", max_elements);
  env_override("RGROUPS_MAX_COSETS", max_cosets);
  env_override("RGROUPS_MAX_STATES", max_states);
  env_override("RGROUPS_MAX_RELATOR_LETTERS", max_relator_letters);
}

void ExperimentSpec::validate() const {
  if (seeds < 1) throw Error("seeds must be >= 1");
  for (int v : m) {
    if (v < 2 || v > kMaxGenerators) throw Error("grid m values must lie in [2, 26]");
  }
  for (const auto& v : d) {
    if (v < 0 || v > 1) throw Error("grid d values must lie in [0, 1]");
  }
  for (int v : lengths) {
    if (v < 1) throw Error("grid lengths must be >= 1");
  }
  if (support.kind == SupportKind::annulus && support.width < 1) {
    throw Error("annulus width must be >= 1");
  }
  for (const auto& a : alphas) {
    if (a <= 0 || a > 1) throw Error("alphas must lie in (0, 1]");
  }
  if (growth_radius && *growth_radius < 0) throw Error("growth radius must be >= 0");
  if (budgets.max_elements == 0 || budgets.max_cosets == 0 || budgets.max_states == 0 ||
      budgets.max_relator_letters == 0) {
    throw Error("budgets must be positive");
  }
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"schema_version", "name",   "master_seed",
                                           "grid",           "seeds",  "support",
                                           "dedupe",         "base",   "analyses",
                                           "budgets"};
  ExperimentSpec s;
  try {
    if (!j.is_object()) throw Error("sweep spec must be a JSON object");
    for (const auto& [k, _] : j.items()) {
      if (!known.count(k)) throw Error("unknown sweep spec field '" + k + "'");
    }
    if (j.contains("schema_version") && j["schema_version"].get<int>() != kSweepSchemaVersion) {
      throw Error("unsupported sweep schema_version");
    }
    s.name = j.value("name", s.name);
    s.master_seed = j.value("master_seed", std::uint64_t{0});
    const auto& grid = j.at("grid");
    s.m = grid.at("m").get<std::vector<int>>();
    for (const auto& v : grid.at("d")) {
      s.d.push_back(v.is_string() ? parse_rational(v.get<std::string>())
                                  : rational_from_double(v.get<double>()));
    }
    s.lengths = grid.at("length").get<std::vector<int>>();
    s.seeds = j.value("seeds", 1);
    if (j.contains("support")) s.support = Support::parse(j["support"].get<std::string>());
    s.dedupe = j.value("dedupe", false);
    s.base = j.value("base", std::string{});
    if (j.contains("analyses")) {
      const auto& a = j["analyses"];
      if (a.contains("small_cancellation")) {
        s.small_cancellation = true;
        const auto& sc = a["small_cancellation"];
        if (sc.is_object() && sc.contains("alphas")) {
          s.alphas.clear();
          for (const auto& v : sc["alphas"]) s.alphas.push_back(parse_rational(v.get<std::string>()));
        }
      }
      if (a.contains("collapse")) s.collapse = true;
      if (a.contains("growth")) s.growth_radius = a["growth"].at("radius").get<int>();
      for (const auto& [k, _] : a.items()) {
        if (k != "small_cancellation" && k != "collapse" && k != "growth") {
          throw Error("unknown analysis '" + k + "'");
        }
      }
    }
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      s.budgets.max_elements = b.value("max_elements", s.budgets.max_elements);
      s.budgets.max_cosets = b.value("max_cosets", s.budgets.max_cosets);
      s.budgets.max_states = b.value("max_states", s.budgets.max_states);
      s.budgets.max_relator_letters =
          b.value("max_relator_letters", s.budgets.max_relator_letters);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed sweep spec: ") + e.what());
  }
  s.validate();
  return s;
}

ExperimentSpec ExperimentSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read sweep spec " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed sweep spec " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json ExperimentSpec::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSweepSchemaVersion;
  j["name"] = name;
  j["master_seed"] = master_seed;
  auto ds = nlohmann::ordered_json::array();
  for (const auto& v : d) ds.push_back(to_string(v));
  j["grid"] = {{"m", m}, {"d", ds}, {"length", lengths}};
  j["seeds"] = seeds;
  j["support"] = support.str();
  j["dedupe"] = dedupe;
  j["base"] = base;
  nlohmann::ordered_json a = nlohmann::ordered_json::object();
  if (small_cancellation) {
    auto as = nlohmann::ordered_json::array();
    for (const auto& v : alphas) as.push_back(to_string(v));
    a["small_cancellation"] = {{"alphas", as}};
  }
  if (collapse) a["collapse"] = nlohmann::ordered_json::object();
  if (growth_radius) a["growth"] = {{"radius", *growth_radius}};
  j["analyses"] = a;
  j["budgets"] = {{"max_elements", budgets.max_elements},
                  {"max_cosets", budgets.max_cosets},
                  {"max_states", budgets.max_states},
                  {"max_relator_letters", budgets.max_relator_letters}};
  return j;
}

std::string ExperimentSpec::digest() const { return hex(fnv1a(to_json().dump())); }

nlohmann::ordered_json ExperimentRecord::to_json() const {
  nlohmann::ordered_json j;
  j["index"] = index;
  j["spec_digest"] = spec_digest;
  j["m"] = m;
  j["d"] = to_string(d);
  j["length"] = length;
  j["replicate"] = replicate;
  j["seed"] = seed;
  j["presentation_digest"] = presentation_digest;
  j["relators"] = relators;
  j["error"] = error ? nlohmann::ordered_json(*error) : nlohmann::ordered_json(nullptr);
  if (small_cancellation) {
    nlohmann::ordered_json sc;
    sc["max_piece"] = small_cancellation->max_piece;
    sc["min_relator_length"] = small_cancellation->min_relator_length;
    sc["max_piece_ratio"] = small_cancellation->max_piece_ratio;
    auto vs = nlohmann::ordered_json::array();
    for (const auto& [a, ok] : small_cancellation->verdicts) {
      vs.push_back({{"alpha", to_string(a)}, {"pass", ok}});
    }
    sc["verdicts"] = vs;
    j["small_cancellation"] = sc;
  }
  if (collapse) {
    j["collapse"] = {{"verdict", to_string(collapse->verdict)},
                     {"order", collapse->order ? nlohmann::ordered_json(*collapse->order)
                                               : nlohmann::ordered_json(nullptr)},
                     {"cosets_defined", collapse->cosets_defined}};
  }
  if (growth) {
    auto cs = nlohmann::ordered_json::array();
    for (const auto& c : growth->counts) cs.push_back(to_string(c));
    j["growth"] = {{"status", growth->status},
                   {"backend", growth->backend},
                   {"radius", growth->radius},
                   {"counts", cs}};
  }
  j["wall_seconds"] = wall_seconds;
  return j;
}

ExperimentRecord ExperimentRecord::from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  try {
    r.index = j.at("index").get<std::size_t>();
    r.spec_digest = j.at("spec_digest").get<std::string>();
    r.m = j.at("m").get<int>();
    r.d = parse_rational(j.at("d").get<std::string>());
    r.length = j.at("length").get<int>();
    r.replicate = j.at("replicate").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.presentation_digest = j.at("presentation_digest").get<std::string>();
    r.relators = j.at("relators").get<std::size_t>();
    if (!j.at("error").is_null()) r.error = j["error"].get<std::string>();
    if (j.contains("small_cancellation")) {
      const auto& sc = j["small_cancellation"];
      SmallCancellationOutput o;
      o.max_piece = sc.at("max_piece").get<std::size_t>();
      o.min_relator_length = sc.at("min_relator_length").get<std::size_t>();
      o.max_piece_ratio = sc.at("max_piece_ratio").get<std::string>();
      for (const auto& v : sc.at("verdicts")) {
        o.verdicts.emplace_back(parse_rational(v.at("alpha").get<std::string>()),
                                v.at("pass").get<bool>());
      }
      r.small_cancellation = std::move(o);
    }
    if (j.contains("collapse")) {
      const auto& c = j["collapse"];
      CollapseOutput o;
      const auto v = c.at("verdict").get<std::string>();
      o.verdict = v == "trivial"     ? CollapseVerdict::trivial
                  : v == "order_two" ? CollapseVerdict::order_two
                                     : CollapseVerdict::infinite_or_unknown;
      if (!c.at("order").is_null()) o.order = c["order"].get<std::size_t>();
      o.cosets_defined = c.at("cosets_defined").get<std::size_t>();
      r.collapse = o;
    }
    if (j.contains("growth")) {
      const auto& g = j["growth"];
      GrowthOutput o;
      o.status = g.at("status").get<std::string>();
      o.backend = g.at("backend").get<std::string>();
      o.radius = g.at("radius").get<int>();
      for (const auto& c : g.at("counts")) o.counts.emplace_back(c.get<std::string>());
      r.growth = std::move(o);
    }
    r.wall_seconds = j.value("wall_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed experiment record: ") + e.what());
  }
  return r;
}

std::uint64_t cell_seed(std::uint64_t master, int m, const Rational& d, int length,
                        int replicate) {
  std::uint64_t s = mix_seed(master, static_cast<std::uint64_t>(m));
  s = mix_seed(s, fnv1a(to_string(d)));
  s = mix_seed(s, static_cast<std::uint64_t>(length));
  return mix_seed(s, static_cast<std::uint64_t>(replicate));
}

DensityParams cell_params(const ExperimentSpec& spec, int m, const Rational& d,
                          int length) {
  DensityParams p;
  p.m = m;
  p.d = d;
  p.length = length;
  p.support = spec.support;
  p.dedupe = spec.dedupe;
  p.max_base_elements = spec.budgets.max_elements;
  p.max_total_letters = spec.budgets.max_relator_letters;
  if (!spec.base.empty()) {
    p.base = std::make_shared<const Presentation>(resolve_presentation(spec.base));
  }
  return p;
}

namespace {

std::string record_path(const std::string& dir, std::size_t index) {
  return (fs::path(dir) / ("record-" + std::to_string(index) + ".json")).string();
}

std::string ball_path(const std::string& dir, std::size_t index) {
  return (fs::path(dir) / ("ball-" + std::to_string(index) + ".bin")).string();
}

GrowthOutput run_growth(const std::shared_ptr<const Presentation>& p, int radius,
                        const SweepBudgets& budgets, const std::string& checkpoint) {
  GrowthOutput out;
  std::optional<Backend> backend;
  if (p->is_free()) {
    backend = Backend::free(p->generators());
  } else {
    try {
      backend = Backend::dehn(p);
    } catch (const NotSmallCancellation&) {
      out.status = "gated";
      out.backend = "none";
      return out;
    }
  }
  out.backend = to_string(backend->kind());
  EnumerateOptions opt;
  opt.exec = Exec::serial;
  opt.max_elements = budgets.max_elements;
  std::optional<BallTable> resume;
  if (!checkpoint.empty()) {
    if (fs::exists(checkpoint)) {
      try {
        resume = BallTable::load(checkpoint, p);
        if (resume->radius() <= radius) opt.resume = &*resume;
      } catch (const Error&) {
        resume.reset();
      }
    }
    opt.on_level = [&checkpoint](const BallTable& t) {
      const std::string tmp = checkpoint + ".tmp";
      t.save(tmp);
      fs::rename(tmp, checkpoint);
    };
  }
  try {
    const BallTable t = enumerate_ball(*backend, radius, opt);
    out.status = "ok";
    out.radius = t.radius();
    out.counts = t.ball_counts();
  } catch (const EnumerationError& e) {
    out.status = "budget";
    if (e.partial()) {
      out.radius = e.partial()->radius();
      out.counts = e.partial()->ball_counts();
    }
  }
  return out;
}

}  // namespace

ExperimentRecord run_record(const ExperimentSpec& spec, std::size_t index,
                            const std::string& checkpoint_dir) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t seeds = static_cast<std::size_t>(spec.seeds);
  const std::size_t nl = spec.lengths.size(), nd = spec.d.size();
  ExperimentRecord r;
  r.index = index;
  r.spec_digest = spec.digest();
  r.replicate = static_cast<int>(index % seeds);
  std::size_t cell = index / seeds;
  r.length = spec.lengths[cell % nl];
  cell /= nl;
  r.d = spec.d[cell % nd];
  r.m = spec.m[cell / nd];
  r.seed = cell_seed(spec.master_seed, r.m, r.d, r.length, r.replicate);
  try {
    const DensityParams params = cell_params(spec, r.m, r.d, r.length);
    auto p = std::make_shared<const Presentation>(sample_density_presentation(params, r.seed));
    r.presentation_digest = hex(p->digest());
    r.relators = p->relators().size();
    if (spec.small_cancellation) {
      SmallCancellationOutput o;
      if (!p->is_free()) {
        const auto rep = check_metric_condition(p->relators(), spec.alphas, Exec::serial);
        o.max_piece = rep.max_piece_length;
        o.min_relator_length = rep.min_relator_length;
        o.max_piece_ratio = to_string(rep.max_piece_ratio());
        o.verdicts = rep.verdicts;
      } else {
        o.max_piece_ratio = "0";
        for (const auto& a : spec.alphas) o.verdicts.emplace_back(a, true);
      }
      r.small_cancellation = std::move(o);
    }
    if (spec.collapse) {
      const auto c = detect_collapse(*p, CollapseBudget{spec.budgets.max_cosets});
      r.collapse = CollapseOutput{c.verdict, c.order, c.cosets_defined};
    }
    if (spec.growth_radius) {
      r.growth = run_growth(p, *spec.growth_radius, spec.budgets,
                            checkpoint_dir.empty() ? std::string{}
                                                   : ball_path(checkpoint_dir, index));
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec,
                                        const SweepOptions& options) {
  spec.validate();
  const std::size_t total = spec.cell_count() * static_cast<std::size_t>(spec.seeds);
  std::vector<ExperimentRecord> records(total);
  std::vector<char> done(total, 0);
  const std::string digest = spec.digest();
  const std::string& dir = options.checkpoint_dir;
  if (!dir.empty()) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < total; ++i) {
      std::ifstream in(record_path(dir, i));
      if (!in) continue;
      try {
        nlohmann::json j;
        in >> j;
        auto r = ExperimentRecord::from_json(j);
        if (r.spec_digest == digest && r.index == i) {
          records[i] = std::move(r);
          done[i] = 1;
        }
      } catch (const std::exception&) {
        // Unreadable checkpoint: recompute.
      }
    }
  }
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(total);
  std::string failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (done[idx]) continue;
    records[idx] = run_record(spec, idx, dir);
    if (!dir.empty()) {
      try {
        const std::string path = record_path(dir, idx);
        {
          std::ofstream out(path + ".tmp", std::ios::trunc);
          out << records[idx].to_json().dump() << '\n';
          if (!out) throw Error("cannot write checkpoint " + path);
        }
        fs::rename(path + ".tmp", path);
      } catch (const std::exception& e) {
#pragma omp critical
        failure = e.what();
      }
    }
  }
  if (!failure.empty()) throw Error(failure);
  return records;
}

namespace {

std::ofstream open_out(const fs::path& path, std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  written.push_back(path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

std::string d_slug(const Rational& d) {
  std::string s = to_string(d);
  for (char& c : s) {
    if (c == '/') c = '_';
  }
  return s;
}

}  // namespace

std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& out_dir) {
  std::vector<std::string> written;
  for (const auto& r : records) {
    if (r.spec_digest != records.front().spec_digest) {
      throw Error("records come from different sweep specs (" + records.front().spec_digest +
                  " vs " + r.spec_digest + ")");
    }
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);

  {
    const auto path = dir / "records.jsonl";
    auto out = open_out(path, written);
    for (const auto& r : records) out << r.to_json().dump() << '\n';
    finish(out, path);
  }

  const bool any_sc = std::any_of(records.begin(), records.end(),
                                  [](const auto& r) { return r.small_cancellation.has_value(); });
  const bool any_collapse = std::any_of(records.begin(), records.end(),
                                        [](const auto& r) { return r.collapse.has_value(); });
  const bool any_growth = std::any_of(records.begin(), records.end(),
                                      [](const auto& r) { return r.growth.has_value(); });

  using CellKey = std::tuple<int, Rational, int>;
  auto key_less = [](const CellKey& a, const CellKey& b) { return a < b; };

  if (any_sc) {
    const auto path = dir / "pieces.csv";
    auto out = open_out(path, written);
    out << "m,d,l,replicate,max_piece,two_d_l\n";
    for (const auto& r : records) {
      if (!r.small_cancellation) continue;
      out << r.m << ',' << to_string(r.d) << ',' << r.length << ',' << r.replicate << ','
          << r.small_cancellation->max_piece << ',' << to_string(Rational(2 * r.length) * r.d)
          << '\n';
    }
    finish(out, path);

    struct Tally {
      std::size_t runs = 0;
      std::map<std::string, std::size_t> passes;
      std::vector<std::string> alphas;
    };
    std::map<CellKey, Tally, decltype(key_less)> cells(key_less);
    for (const auto& r : records) {
      auto& t = cells[{r.m, r.d, r.length}];
      ++t.runs;
      if (!r.small_cancellation) continue;
      for (const auto& [a, ok] : r.small_cancellation->verdicts) {
        const auto name = to_string(a);
        if (!t.passes.count(name)) t.alphas.push_back(name);
        t.passes[name] += ok ? 1 : 0;
      }
    }
    const auto rpath = dir / "small_cancellation.csv";
    auto rout = open_out(rpath, written);
    rout << "m,d,l,alpha,runs,passes,pass_rate\n";
    for (const auto& [k, t] : cells) {
      for (const auto& a : t.alphas) {
        const std::size_t p = t.passes.at(a);
        rout << std::get<0>(k) << ',' << to_string(std::get<1>(k)) << ',' << std::get<2>(k)
             << ',' << a << ',' << t.runs << ',' << p << ','
             << static_cast<double>(p) / static_cast<double>(t.runs) << '\n';
      }
    }
    finish(rout, rpath);
  }

  if (any_collapse) {
    struct Tally {
      std::size_t runs = 0, trivial = 0, order_two = 0, other = 0;
    };
    std::map<CellKey, Tally, decltype(key_less)> cells(key_less);
    for (const auto& r : records) {
      auto& t = cells[{r.m, r.d, r.length}];
      ++t.runs;
      if (!r.collapse) {
        ++t.other;
        continue;
      }
      switch (r.collapse->verdict) {
        case CollapseVerdict::trivial: ++t.trivial; break;
        case CollapseVerdict::order_two: ++t.order_two; break;
        default: ++t.other; break;
      }
    }
    const auto path = dir / "collapse.csv";
    auto out = open_out(path, written);
    out << "m,d,l,runs,trivial,order_two,infinite_or_unknown,collapse_rate\n";
    for (const auto& [k, t] : cells) {
      out << std::get<0>(k) << ',' << to_string(std::get<1>(k)) << ',' << std::get<2>(k)
          << ',' << t.runs << ',' << t.trivial << ',' << t.order_two << ',' << t.other << ','
          << static_cast<double>(t.trivial + t.order_two) / static_cast<double>(t.runs)
          << '\n';
    }
    finish(out, path);
  }

  if (any_growth) {
    const fs::path gdir = dir / "growth";
    fs::create_directories(gdir, ec);
    if (ec) throw Error("cannot create " + gdir.string() + ": " + ec.message());
    const auto spath = dir / "growth_summary.csv";
    auto summary = open_out(spath, written);
    summary << "m,d,l,replicate,status,backend,radius,g\n";
    for (const auto& r : records) {
      if (!r.growth) continue;
      const auto& g = *r.growth;
      const unsigned base = static_cast<unsigned>(2 * r.m - 1);
      auto g_at = [&](std::size_t L) {
        return L == 0 ? 0.0 : log_base(g.counts[L], base) / static_cast<double>(L);
      };
      summary << r.m << ',' << to_string(r.d) << ',' << r.length << ',' << r.replicate << ','
              << g.status << ',' << g.backend << ',' << g.radius << ',';
      if (!g.counts.empty()) summary << g_at(g.counts.size() - 1);
      summary << '\n';
      if (g.counts.empty()) continue;
      const auto path = gdir / ("m" + std::to_string(r.m) + "_d" + d_slug(r.d) + "_l" +
                                std::to_string(r.length) + "_r" +
                                std::to_string(r.replicate) + ".csv");
      auto out = open_out(path, written);
      out << "radius,count,g\n";
      for (std::size_t L = 0; L < g.counts.size(); ++L) {
        out << L << ',' << to_string(g.counts[L]) << ',' << g_at(L) << '\n';
      }
      finish(out, path);
    }
    finish(summary, spath);
  }
  return written;
}

}  // namespace rgroups
