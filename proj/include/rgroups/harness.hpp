#pragma once

// Experiment sweeps over a grid of density-model parameters. Each
// (cell, replicate) gets its own seed derived from the master seed, so grids
// can be extended without disturbing existing runs. Records are emitted in
// canonical order whatever the scheduling.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgroups/numeric.hpp"
#include "rgroups/presentation.hpp"
#include "rgroups/wordproblem.hpp"

namespace rgroups {

inline constexpr int kSweepSchemaVersion = 1;

struct SweepBudgets {
  std::size_t max_elements = 2'000'000;   // ball enumeration
  std::size_t max_cosets = std::size_t{1} << 20;
  std::size_t max_states = 1'000'000;     // budgeted word problem
  std::uint64_t max_relator_letters = std::uint64_t{1} << 31;

  // RGROUPS_MAX_ELEMENTS, RGROUPS_MAX_COSETS, RGROUPS_MAX_STATES,
  // RGROUPS_MAX_RELATOR_LETTERS override the corresponding fields.
  void apply_environment();
};

struct ExperimentSpec {
  std::string name = "sweep";
  std::uint64_t master_seed = 0;
  std::vector<int> m;
  std::vector<Rational> d;
  std::vector<int> lengths;
  int seeds = 1;
  Support support;
  bool dedupe = false;
  // Shorthand or file for the geodesic variant; empty for the word variant.
  std::string base;

  bool small_cancellation = false;
  std::vector<Rational> alphas{Rational(1, 6)};
  bool collapse = false;
  // Ball enumeration and growth up to this radius. Runs only where the
  // sampled presentation is free or C'(1/6); other records say so.
  std::optional<int> growth_radius;

  SweepBudgets budgets;

  // Throws Error with the offending field.
  void validate() const;
  static ExperimentSpec from_json(const nlohmann::json& j);
  static ExperimentSpec load(const std::string& path);
  nlohmann::ordered_json to_json() const;
  // Hex FNV-1a of the canonical JSON, budgets included.
  std::string digest() const;
  std::size_t cell_count() const { return m.size() * d.size() * lengths.size(); }
};

struct SmallCancellationOutput {
  std::size_t max_piece = 0;
  std::size_t min_relator_length = 0;
  std::string max_piece_ratio;
  std::vector<std::pair<Rational, bool>> verdicts;
};

struct CollapseOutput {
  CollapseVerdict verdict = CollapseVerdict::infinite_or_unknown;
  std::optional<std::size_t> order;
  std::size_t cosets_defined = 0;
};

struct GrowthOutput {
  std::string status;  // "ok", "gated", "budget"
  std::string backend;
  int radius = 0;      // radius actually enumerated
  std::vector<BigInt> counts;
};

struct ExperimentRecord {
  std::size_t index = 0;  // canonical position in the sweep
  std::string spec_digest;
  int m = 0;
  Rational d;
  int length = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string presentation_digest;
  std::size_t relators = 0;
  std::optional<std::string> error;
  std::optional<SmallCancellationOutput> small_cancellation;
  std::optional<CollapseOutput> collapse;
  std::optional<GrowthOutput> growth;
  double wall_seconds = 0;

  nlohmann::ordered_json to_json() const;
  static ExperimentRecord from_json(const nlohmann::json& j);
};

// hash(master, m, d, l, replicate).
std::uint64_t cell_seed(std::uint64_t master, int m, const Rational& d, int length,
                        int replicate);

DensityParams cell_params(const ExperimentSpec& spec, int m, const Rational& d,
                          int length);

struct SweepOptions {
  // Worker threads over records; 0 keeps the OpenMP default.
  int threads = 0;
  // When set, finished records and per-level ball checkpoints are kept under
  // this directory and reused by a later run of the same spec.
  std::string checkpoint_dir;
};

// Runs every (cell, replicate). Per-record failures are captured in the
// record, never dropped.
std::vector<ExperimentRecord> run_sweep(const ExperimentSpec& spec,
                                        const SweepOptions& options = {});

// Runs one record (index in canonical order).
ExperimentRecord run_record(const ExperimentSpec& spec, std::size_t index,
                            const std::string& checkpoint_dir = {});

// Writes records.jsonl plus, depending on the analyses present,
// pieces.csv, small_cancellation.csv, collapse.csv and growth/*.csv.
// Throws Error when records come from different specs or on I/O failure.
// Returns the paths written.
std::vector<std::string> emit_report(const std::vector<ExperimentRecord>& records,
                                     const std::string& out_dir);

}  // namespace rgroups
