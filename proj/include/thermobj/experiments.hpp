// Seeded Monte Carlo harness: deviation-bound sweeps over the spread
// sigma and macrofraction sweeps over N_E, with CSV and SVG emission.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermobj/bounds.hpp"

namespace thermobj {

enum class SweepKind { sigma_sweep, macrofraction_sweep };

std::string to_string(SweepKind kind);
SweepKind parse_sweep_kind(const std::string& name);

struct ExperimentConfig {
  SweepKind kind = SweepKind::sigma_sweep;
  double beta = 1.0;
  int d_S = 2;
  int d_E = 2;
  std::vector<double> grid;           // sigma values, or N_E values (integers)
  int trials = 1000;
  double sigma = 0.05;                // macrofraction sweeps only
  std::vector<double> base_energies = {0.0, 1.0};
  std::uint64_t seed = 0;
  std::vector<MacrofractionVariant> variants = {MacrofractionVariant::grouped_greedy};

  void validate() const;
  std::string echo() const;  // one-line key=value summary
};

/// One trial's output row: the grid point, the sampled deviations, and
/// the resulting bound (always nonnegative).
struct TrialRecord {
  double grid_value = 0;
  int trial_index = 0;
  std::vector<double> deviations;  // delta_i, concatenated over subenvironments
  double bound = 0;
};

struct SweepRow {
  double grid_value = 0;
  double mean = 0;
  double stderr_of_mean = 0;
  std::string variant;
  int trials = 0;
  double beta = 0;
  std::uint64_t seed = 0;
};

struct SweepTable {
  std::string grid_label;  // x-axis label
  std::vector<SweepRow> rows;
};

/// Per-trial deviations delta_i ~ Normal(0, sigma) feed deviation_bound;
/// rows hold the mean and standard error per grid sigma. Trials draw from
/// streams keyed by (seed, grid index, trial index), so any thread count
/// yields the identical table. When records is given it receives every
/// trial row, indexed by grid point and trial.
SweepTable run_sigma_sweep(const ExperimentConfig& cfg, int threads = 1,
                           std::vector<TrialRecord>* records = nullptr);

/// For each N_E in the grid, per-subenvironment deviations
/// delta_{i|k} ~ Normal(0, sigma) feed macrofraction_bound for every
/// requested variant. Records hold the first requested variant's bounds.
SweepTable run_macrofraction_sweep(const ExperimentConfig& cfg, int threads = 1,
                                   std::vector<TrialRecord>* records = nullptr);

/// Columns exactly grid_value,mean,stderr,variant,trials,beta,seed.
/// A nonempty config echo is prepended as one '#' comment line.
void emit_csv(const SweepTable& table, const std::string& path,
              const std::string& config_echo = "");

/// One polyline per variant with axis labels; byte-stable for identical
/// inputs.
void emit_svg_lineplot(const SweepTable& table, const std::string& path);

}  // namespace thermobj
