// Trace-distance upper bounds between thermal and objective state sets:
// the deviation bound, macrofraction variants, the greedy environment
// partition with its d_S/Z_E guarantee, and the assembled witness state.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "thermobj/gibbs.hpp"
#include "thermobj/sbs.hpp"

namespace thermobj {

/// Environment spectrum written as per-level offsets from the system
/// spectrum: h_i = E_i + c + delta_i.
struct DeviationModel {
  std::vector<double> base_energies;  // E_i
  double shift = 0;                   // c
  std::vector<double> deviations;     // delta_i
  double beta = 1;

  void validate() const;
  /// Environment Boltzmann weights exp(-beta h_i)/Z_E.
  std::vector<double> env_weights() const;
  /// System Boltzmann weights exp(-beta E_i)/Z_S.
  std::vector<double> sys_weights() const;
};

/// sum_i |e^{-(E_i+c+delta_i) beta}/Z_E - e^{-E_i beta}/Z_S|; the shift c
/// cancels exactly.
double deviation_bound(const DeviationModel& model);

enum class MacrofractionVariant {
  as_printed,     // per-environment terms combined additively, as typeset
  product_form,   // trace norm of the two diagonal tensor-product states
  grouped_greedy  // macrofraction as one environment, greedy partition total
};

MacrofractionVariant parse_macrofraction_variant(const std::string& name);
std::string to_string(MacrofractionVariant variant);

/// Distance bound for a macrofraction of N subenvironments sharing base
/// energies and beta.
double macrofraction_bound(const std::vector<DeviationModel>& models,
                           MacrofractionVariant variant);

struct GreedyResult {
  PartitionAssignment assignment;     // sets[k] answers probs[k]
  std::vector<double> per_bin_error;  // |p_k - W_k|
  double total = 0;
  double unassigned_weight = 0;  // zero by construction

  void validate() const;
};

/// Deterministic greedy assignment of environment eigenvector indices to
/// system indices: Boltzmann weights in descending order, each placed into
/// the bin with the largest running deficit p_k - W_k, with the trailing
/// indices reserved for still-empty bins. Every index is assigned, every
/// bin is nonempty, and the total never exceeds partition_function_bound.
GreedyResult greedy_partition(const std::vector<double>& probs,
                              const std::vector<double>& env_energies, double beta);

/// d_S / Z_E with the energies gauged so min h_j = 0. The greedy total
/// never exceeds it.
double partition_function_bound(int d_S, const std::vector<double>& env_energies, double beta);

/// The candidate objective state realizing a greedy assignment, with
/// conditional weights e^{-beta h_j} renormalized within each bin, and the
/// trace-norm distance it achieves from the environment thermal state.
std::pair<SBSState, double> assemble_greedy_state(const GreedyResult& result,
                                                  const HamiltonianSpec& sys,
                                                  const HamiltonianSpec& env, double beta);

}  // namespace thermobj
