#include "rgroups/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>

#include "rgroups/cayley.hpp"
#include "rgroups/growth.hpp"
#include "rgroups/harness.hpp"
#include "rgroups/hyperbolicity.hpp"
#include "rgroups/presentation.hpp"
#include "rgroups/smallcancel.hpp"
#include "rgroups/wordproblem.hpp"

namespace rgroups {

namespace {

// Bad input detected after parsing (unreadable files, malformed values).
class UsageError : public Error {
 public:
  using Error::Error;
};

template <class F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::shared_ptr<const Presentation> load_presentation(const std::string& spec) {
  return as_usage([&] { return std::make_shared<const Presentation>(resolve_presentation(spec)); });
}

Rational rational_arg(const std::string& text) {
  return as_usage([&] { return parse_rational(text); });
}

nlohmann::ordered_json envelope(const std::string& command) {
  nlohmann::ordered_json j;
  j["schema_version"] = kCliSchemaVersion;
  j["command"] = command;
  return j;
}

std::optional<Budget> budget_args(std::size_t max_states, std::size_t max_length) {
  if (max_states == 0 && max_length == 0) return std::nullopt;
  Budget b;
  if (max_states) b.max_states = max_states;
  b.max_word_length = max_length;
  return b;
}

Backend make_backend(const std::string& name, std::shared_ptr<const Presentation> p,
                     std::optional<Budget> budget) {
  if (name == "auto") return Backend::automatic(p, budget);
  if (name == "free") {
    if (!p->is_free()) throw UsageError("the free backend needs a presentation without relators");
    return Backend::free(p->generators());
  }
  if (name == "dehn") {
    try {
      return Backend::dehn(p);
    } catch (const NotSmallCancellation& e) {
      throw UsageError(e.what());
    }
  }
  return Backend::budgeted(p, budget ? *budget : Budget::defaults(*p));
}

struct Common {
  bool json = false;
};

void add_json(CLI::App* sub, Common& c) {
  sub->add_flag("--json", c.json, "Machine-readable JSON output");
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random group presentations in the density model", "rgroups"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
  Common common;

  // sample
  auto* sample = app.add_subcommand("sample", "Sample a density-model presentation");
  int s_m = 2, s_length = 1;
  std::string s_d = "0", s_support = "sphere", s_base, s_out;
  std::uint64_t s_seed = 0;
  bool s_dedupe = false;
  std::uint64_t s_letters = std::uint64_t{1} << 31;
  sample->add_option("--m", s_m, "Generator count")->check(CLI::Range(2, kMaxGenerators));
  sample->add_option("--d", s_d, "Density (e.g. 1/12 or 0.75)")->required();
  sample->add_option("--length,-l", s_length, "Relator length")->required()->check(CLI::PositiveNumber);
  sample->add_option("--support", s_support, "sphere, ball or annulus:C");
  sample->add_option("--base", s_base, "Base presentation for the geodesic variant");
  sample->add_option("--seed", s_seed, "Seed");
  sample->add_flag("--dedupe", s_dedupe, "Drop relators equal up to rotation");
  sample->add_option("--max-letters", s_letters, "Letter budget for the relator set");
  sample->add_option("--out,-o", s_out, "Write the presentation JSON to this file");
  add_json(sample, common);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Small cancellation and collapse analysis");
  std::string a_pres;
  std::vector<std::string> a_alphas{"1/6"};
  bool a_collapse = false;
  std::size_t a_cosets = CollapseBudget{}.max_cosets;
  analyze->add_option("--presentation,-p", a_pres, "Presentation file or shorthand")->required();
  analyze->add_option("--alpha", a_alphas, "Metric condition thresholds");
  analyze->add_flag("--collapse", a_collapse, "Also run coset enumeration");
  analyze->add_option("--max-cosets", a_cosets, "Coset budget")->check(CLI::PositiveNumber);
  add_json(analyze, common);

  // wp
  auto* wp = app.add_subcommand("wp", "Decide whether a word is trivial");
  std::string w_word, w_pres, w_backend = "auto", w_equal;
  std::size_t w_states = 0, w_len = 0;
  wp->add_option("--word,-w", w_word, "Word over a..z, capitals for inverses")->required();
  wp->add_option("--equal", w_equal, "Compare with this word instead of the identity");
  wp->add_option("--presentation,-p", w_pres, "Presentation file or shorthand")->required();
  wp->add_option("--backend", w_backend, "auto, free, dehn or budget")
      ->check(CLI::IsMember({"auto", "free", "dehn", "budget"}));
  wp->add_option("--max-states", w_states, "Budgeted search state cap");
  wp->add_option("--max-length", w_len, "Budgeted search word length cap");
  add_json(wp, common);

  // ball
  auto* ball = app.add_subcommand("ball", "Enumerate a Cayley graph ball");
  std::string b_pres, b_csv, b_store, b_backend = "auto";
  int b_radius = 0;
  std::size_t b_max = 0, b_states = 0, b_len = 0;
  ball->add_option("--presentation,-p", b_pres, "Presentation file or shorthand")->required();
  ball->add_option("--radius,-r", b_radius, "Radius")->required()->check(CLI::NonNegativeNumber);
  ball->add_option("--backend", b_backend, "auto, free, dehn or budget")
      ->check(CLI::IsMember({"auto", "free", "dehn", "budget"}));
  ball->add_option("--max-elements", b_max, "Element budget (default from 8 GiB)");
  ball->add_option("--max-states", b_states, "Budgeted search state cap");
  ball->add_option("--max-length", b_len, "Budgeted search word length cap");
  ball->add_option("--csv", b_csv, "Write radius,count CSV to this file");
  ball->add_option("--store", b_store, "Write the binary element store to this file");
  add_json(ball, common);

  // delta
  auto* delta = app.add_subcommand("delta", "Observed thin-triangle constant on a ball");
  std::string d_pres, d_backend = "auto";
  int d_radius = 0, d_table = -1;
  std::size_t d_sample = 0, d_states = 0, d_len = 0;
  std::uint64_t d_seed = 0;
  delta->add_option("--presentation,-p", d_pres, "Presentation file or shorthand")->required();
  delta->add_option("--radius,-r", d_radius, "Triangle vertex radius")->required()->check(CLI::NonNegativeNumber);
  delta->add_option("--table-radius", d_table, "Enumerated radius (default: radius)");
  delta->add_option("--sample", d_sample, "Sample this many triangles instead of all");
  delta->add_option("--seed", d_seed, "Seed for sampling");
  delta->add_option("--backend", d_backend, "auto, free, dehn or budget")
      ->check(CLI::IsMember({"auto", "free", "dehn", "budget"}));
  delta->add_option("--max-states", d_states, "Budgeted search state cap");
  delta->add_option("--max-length", d_len, "Budgeted search word length cap");
  add_json(delta, common);

  // growth
  auto* growth = app.add_subcommand("growth", "Growth exponents g_L as CSV");
  std::string g_pres, g_oracle;
  int g_radius = 0;
  growth->add_option("--presentation,-p", g_pres, "Presentation file or shorthand");
  growth->add_option("--oracle", g_oracle, "closed-form-free:m=K");
  growth->add_option("--radius,-r", g_radius, "Largest L")->required()->check(CLI::PositiveNumber);
  add_json(growth, common);

  // certify
  auto* certify = app.add_subcommand("certify", "Certified growth exponent lower bound");
  std::string c_oracle, c_pres, c_g, c_A = "500", c_delta = "0", c_source = "user";
  long long c_l0 = 0, c_l1 = 0;
  int c_radius = 0;
  bool c_require = false;
  certify->add_option("--oracle", c_oracle, "closed-form-free:m=K");
  certify->add_option("--presentation,-p", c_pres, "Count from an enumerated ball instead");
  certify->add_option("--radius,-r", c_radius, "Ball radius for --presentation");
  certify->add_option("--g", c_g, "Growth exponent (default: observed g_l1, floored to 1e-6)");
  certify->add_option("--l0", c_l0, "Small scale")->required()->check(CLI::PositiveNumber);
  certify->add_option("--l1", c_l1, "Large scale (default: ceil(A l0))");
  certify->add_option("--A", c_A, "Scale ratio");
  certify->add_option("--delta", c_delta, "Hyperbolicity constant (integer or half-integer)");
  certify->add_option("--delta-source", c_source, "Where delta came from");
  certify->add_flag("--require-bound", c_require, "Exit 1 unless a bound is issued");
  add_json(certify, common);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string sw_spec, sw_out, sw_ckpt;
  sweep->add_option("--spec", sw_spec, "Sweep spec JSON")->required();
  sweep->add_option("--out,-o", sw_out, "Output directory")->required();
  sweep->add_option("--checkpoint", sw_ckpt, "Checkpoint directory for resumable runs");
  add_json(sweep, common);

  if (argc <= 1) {
    out << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (threads > 0) omp_set_num_threads(threads);
  const bool json = common.json;

  try {
    if (*sample) {
      DensityParams p;
      p.m = s_m;
      p.d = rational_arg(s_d);
      p.length = s_length;
      p.support = as_usage([&] { return Support::parse(s_support); });
      p.dedupe = s_dedupe;
      p.max_total_letters = s_letters;
      if (!s_base.empty()) {
        p.base = load_presentation(s_base);
        p.m = p.base->generators();
      }
      as_usage([&] {
        p.validate();
        return 0;
      });
      const Presentation pres = sample_density_presentation(p, s_seed);
      if (!s_out.empty()) pres.save(s_out);
      if (json) {
        auto j = envelope("sample");
        j["presentation"] = pres.to_json();
        j["digest"] = pres.digest();
        out << j.dump(2) << '\n';
      } else {
        out << pres.to_json().dump(2) << '\n';
      }
      return 0;
    }

    if (*analyze) {
      auto p = load_presentation(a_pres);
      std::vector<Rational> alphas;
      for (const auto& a : a_alphas) alphas.push_back(rational_arg(a));
      auto j = envelope("analyze");
      j["generators"] = p->generators();
      j["relators"] = p->relators().size();
      std::optional<SmallCancellationReport> rep;
      std::optional<std::size_t> shared;
      if (!p->is_free()) {
        rep = check_metric_condition(p->relators(), alphas);
        j["small_cancellation"] = rep->to_json();
        if (p->relators().size() >= 2) {
          shared = shared_subword_stat(p->relators());
          j["shared_subword"] = *shared;
        }
      }
      std::optional<CollapseResult> col;
      if (a_collapse) {
        col = detect_collapse(*p, CollapseBudget{a_cosets});
        j["collapse"] = {{"verdict", to_string(col->verdict)},
                         {"order", col->order ? nlohmann::ordered_json(*col->order)
                                              : nlohmann::ordered_json(nullptr)},
                         {"cosets_defined", col->cosets_defined}};
      }
      if (json) {
        out << j.dump(2) << '\n';
        return 0;
      }
      out << "generators " << p->generators() << ", relators " << p->relators().size() << '\n';
      if (rep) {
        out << "max piece " << rep->max_piece_length << ", shortest relator "
            << rep->min_relator_length << ", max piece ratio " << to_string(rep->max_piece_ratio())
            << (rep->degenerate ? " (degenerate)" : "") << '\n';
        for (const auto& [a, ok] : rep->verdicts) {
          out << "  C'(" << to_string(a) << ")  " << (ok ? "pass" : "fail") << '\n';
        }
        if (shared) out << "shared subword " << *shared << '\n';
      } else {
        out << "free presentation: no pieces\n";
      }
      if (col) {
        out << "collapse " << to_string(col->verdict);
        if (col->order) out << " (order " << *col->order << ")";
        out << '\n';
      }
      return 0;
    }

    if (*wp) {
      auto p = load_presentation(w_pres);
      const Word w = as_usage([&] { return Word::parse(w_word, p->generators()); });
      const Backend b = make_backend(w_backend, p, budget_args(w_states, w_len));
      Verdict v;
      if (!w_equal.empty()) {
        const Word u = as_usage([&] { return Word::parse(w_equal, p->generators()); });
        v = b.are_equal(w, u);
      } else {
        v = b.is_trivial(w);
      }
      if (json) {
        auto j = envelope("wp");
        j["word"] = w.str();
        if (!w_equal.empty()) j["equal"] = w_equal;
        j["backend"] = to_string(b.kind());
        j["verdict"] = to_string(v);
        j["reduced"] = b.reduce(w).str();
        out << j.dump(2) << '\n';
      } else {
        out << to_string(v) << " (" << to_string(b.kind()) << ")\n";
      }
      return 0;
    }

    if (*ball) {
      auto p = load_presentation(b_pres);
      const Backend b = make_backend(b_backend, p, budget_args(b_states, b_len));
      EnumerateOptions opt;
      opt.max_elements = b_max;
      const BallTable t = enumerate_ball(b, b_radius, opt);
      if (!b_store.empty()) t.save(b_store);
      if (!b_csv.empty()) {
        std::ofstream f(b_csv, std::ios::trunc);
        if (!f) throw Error("cannot write " + b_csv);
        f << "radius,count\n";
        for (int L = 0; L <= t.radius(); ++L) f << L << ',' << to_string(t.ball_count(L)) << '\n';
        if (!f) throw Error("failed writing " + b_csv);
      }
      if (json) {
        auto j = envelope("ball");
        j["backend"] = to_string(b.kind());
        j["radius"] = t.radius();
        auto balls = nlohmann::ordered_json::array(), spheres = nlohmann::ordered_json::array();
        for (int L = 0; L <= t.radius(); ++L) {
          balls.push_back(to_string(t.ball_count(L)));
          spheres.push_back(to_string(t.sphere_count(L)));
        }
        j["ball_counts"] = balls;
        j["sphere_counts"] = spheres;
        out << j.dump(2) << '\n';
      } else {
        out << "radius,count\n";
        for (int L = 0; L <= t.radius(); ++L) out << L << ',' << to_string(t.ball_count(L)) << '\n';
      }
      return 0;
    }

    if (*delta) {
      auto p = load_presentation(d_pres);
      const int table_radius = d_table < 0 ? d_radius : d_table;
      if (table_radius < d_radius) throw UsageError("--table-radius must be >= --radius");
      const Backend b = make_backend(d_backend, p, budget_args(d_states, d_len));
      const BallTable t = enumerate_ball(b, table_radius);
      const DeltaMode mode =
          d_sample ? DeltaMode::sampled(d_sample, d_seed) : DeltaMode::exhaustive();
      const DeltaEstimate est = observed_delta(t, d_radius, mode);
      if (json) {
        auto j = envelope("delta");
        j["table_radius"] = table_radius;
        j["estimate"] = est.to_json();
        out << j.dump(2) << '\n';
      } else {
        out << "delta_observed " << est.delta_observed.str() << " (radius " << est.radius
            << ", " << est.triangles_tested << " triangles, " << est.triangles_excluded
            << " excluded)\n";
      }
      return 0;
    }

    if (*growth) {
      if (g_pres.empty() == g_oracle.empty()) {
        throw UsageError("growth needs exactly one of --presentation and --oracle");
      }
      std::optional<BallTable> table;
      std::optional<CountOracle> oracle;
      if (!g_pres.empty()) {
        auto p = load_presentation(g_pres);
        table = enumerate_ball(Backend::automatic(p), g_radius);
        oracle = CountOracle::from_table(*table);
      } else {
        oracle = as_usage([&] { return CountOracle::parse(g_oracle); });
      }
      const auto seq = growth_sequence(*oracle, g_radius);
      if (json) {
        auto j = envelope("growth");
        j["oracle"] = oracle->name();
        auto rows = nlohmann::ordered_json::array();
        for (const auto& e : seq) {
          rows.push_back({{"radius", e.length}, {"count", to_string(oracle->ball(e.length))}, {"g", e.g}});
        }
        j["sequence"] = rows;
        out << j.dump(2) << '\n';
      } else {
        out << "radius,count,g\n" << std::setprecision(12);
        for (const auto& e : seq) {
          out << e.length << ',' << to_string(oracle->ball(e.length)) << ',' << e.g << '\n';
        }
      }
      return 0;
    }

    if (*certify) {
      if (c_pres.empty() == c_oracle.empty()) {
        throw UsageError("certify needs exactly one of --oracle and --presentation");
      }
      std::optional<BallTable> table;
      std::optional<CountOracle> oracle;
      if (!c_pres.empty()) {
        if (c_radius <= 0) throw UsageError("--presentation needs --radius");
        auto p = load_presentation(c_pres);
        table = enumerate_ball(Backend::automatic(p), c_radius);
        oracle = CountOracle::from_table(*table);
      } else {
        oracle = as_usage([&] { return CountOracle::parse(c_oracle); });
      }
      CertifyOptions opt;
      if (!c_g.empty()) opt.g = rational_arg(c_g);
      if (c_l1 > 0) opt.l1 = c_l1;
      opt.A = rational_arg(c_A);
      opt.delta = as_usage([&] { return HalfInt::parse(c_delta); });
      opt.delta_source = c_source;
      const GrowthCertificate cert = certify_growth_lower_bound(*oracle, c_l0, opt);
      if (json) {
        auto j = envelope("certify");
        j["certificate"] = cert.to_json();
        out << j.dump(2) << '\n';
      } else {
        for (const auto& h : cert.hypotheses) {
          out << (h.pass ? "  pass  " : "  FAIL  ") << h.name << "  [" << h.detail << "]\n";
        }
        if (cert.bound) {
          out << "bound " << to_double(*cert.bound) << " (" << to_string(*cert.bound) << ")\n";
        } else {
          out << "no bound issued\n";
        }
      }
      return (c_require && !cert.valid()) ? 1 : 0;
    }

    if (*sweep) {
      ExperimentSpec spec = as_usage([&] { return ExperimentSpec::load(sw_spec); });
      as_usage([&] {
        spec.budgets.apply_environment();
        return 0;
      });
      SweepOptions opt;
      opt.threads = threads;
      opt.checkpoint_dir = sw_ckpt;
      const auto records = run_sweep(spec, opt);
      const auto files = emit_report(records, sw_out);
      std::size_t errors = 0;
      for (const auto& r : records) errors += r.error ? 1 : 0;
      if (json) {
        auto j = envelope("sweep");
        j["spec_digest"] = spec.digest();
        j["records"] = records.size();
        j["record_errors"] = errors;
        j["files"] = files;
        out << j.dump(2) << '\n';
      } else {
        out << records.size() << " records (" << errors << " with errors)\n";
        for (const auto& f : files) out << f << '\n';
      }
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  out << app.help();
  return 2;
}

}  // namespace rgroups
