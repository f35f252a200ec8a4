// Construction, certification, and enumeration of objective states
// (spectrum broadcast structure) and the thermal-objective families.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thermobj/gibbs.hpp"
#include "thermobj/operators.hpp"

namespace thermobj {

/// Structured objective state: system spectrum {p_i}, system basis
/// columns |i>, and per-subenvironment conditional states rho_{E_k|i}
/// with pairwise disjoint supports across i.
struct SBSState {
  std::vector<double> probs;                              // length n
  Matrix sys_basis;                                       // d_S x n, orthonormal columns
  std::vector<std::vector<DensityOperator>> cond_states;  // [subenv k][index i]

  SBSState(std::vector<double> probs_in, Matrix sys_basis_in,
           std::vector<std::vector<DensityOperator>> cond_states_in);

  int index_count() const { return static_cast<int>(probs.size()); }
  int subenv_count() const { return static_cast<int>(cond_states.size()); }
  int sys_dim() const { return static_cast<int>(sys_basis.rows()); }
  std::vector<int> env_dims() const;
  int total_dim() const;

  /// Full invariant check including support disjointness at `tol`.
  void validate(double tol = 1e-9) const;
};

/// Disjoint index sets C_k over environment eigenvector indices.
struct PartitionAssignment {
  std::vector<std::vector<int>> sets;

  void validate(int universe_size) const;
};

/// ||sqrt(a) b sqrt(a)||_1 — zero exactly when the supports are disjoint,
/// independent of any basis choice.
double support_overlap(const DensityOperator& a, const DensityOperator& b);

/// sum_i p_i |i><i| (x) (x)_k rho_{E_k|i}. Errors with "not objective"
/// when conditional supports overlap beyond 1e-9.
DensityOperator assemble(const SBSState& s);

struct CertifyResult {
  bool objective = false;
  std::optional<SBSState> state;  // recovered decomposition when objective
  std::string witness;            // violated condition otherwise
  double magnitude = 0;           // size of the violation
};

/// Decides whether rho admits spectrum broadcast structure over the given
/// factor dims (system first) within tol. Degenerate system-marginal
/// blocks are handled by simultaneous diagonalization of the conditional
/// blocks; the search is deterministic.
CertifyResult certify_sbs(const DensityOperator& rho, const std::vector<int>& dims,
                          double tol = 1e-8);

/// Objective state whose system marginal is the Gibbs state of hs at beta.
/// cond_states is indexed [subenv][system index].
DensityOperator thermal_system_objective(
    const HamiltonianSpec& hs, const InverseTemperature& beta,
    const std::vector<std::vector<DensityOperator>>& cond_states);

/// Upper bound on the trace distance from rho to the family of objective
/// states with thermal system (hs, beta). Minimizes over a documented
/// candidate family: conditional states diagonal in a grid of rotated
/// environment bases (one simultaneous-diagonalization basis plus
/// search_budget-1 seeded Haar bases), with environment eigenvectors
/// assigned to system indices exhaustively at small dimension and by
/// largest-block-weight otherwise. An upper bound only; the true set is
/// nonconvex.
double thermal_objective_distance_bound(const DensityOperator& rho, const HamiltonianSpec& hs,
                                        const InverseTemperature& beta, int search_budget);

struct CoexistenceShift {
  bool coexists = false;
  double shift = 0;
};

/// Equal-dimension test: locally thermal + objective states exist only
/// when the sorted spectra differ by one constant shift within tol.
/// The criterion itself does not depend on the (finite) temperature.
CoexistenceShift check_equal_dim_coexistence(const HamiltonianSpec& hs, const HamiltonianSpec& he,
                                             const InverseTemperature& beta, double tol);

/// One subenvironment of the exact thermal-objective family: energy shift
/// c_k and unitary rotation U_k of the system eigenbasis.
struct SubenvSpec {
  double shift = 0;
  Matrix rotation;
};

/// Environment Hamiltonian sum_i (E_i + c_k) |phi_{i|k}><phi_{i|k}| with
/// |phi_{i|k}> = U_k |i>.
HamiltonianSpec subenv_hamiltonian(const HamiltonianSpec& hs, const SubenvSpec& spec);

/// sum_i w_i |i><i| (x)_k |phi_{i|k}><phi_{i|k}| with Gibbs weights w of
/// hs at beta; every local marginal is thermal for its subenvironment
/// Hamiltonian.
DensityOperator exact_thermal_objective_state(const HamiltonianSpec& hs,
                                              const std::vector<SubenvSpec>& subenvs,
                                              const InverseTemperature& beta);

struct InfiniteTFamily {
  unsigned long long count = 0;  // exact states; 0 when d_S does not divide d_E
  double distance_bound = 0;     // d_S/d_E fallback bound when count is 0
};

/// Counts the exactly thermal-and-objective states at infinite temperature:
/// (M d_S)! / (M!)^{d_S} when d_E = M d_S, else 0 with the d_S/d_E bound.
InfiniteTFamily infinite_T_exact_states(int d_S, int d_E);

/// Enumerates all assignments of d_E environment eigenvectors into d_S
/// equal groups (d_E <= 12).
void enumerate_infinite_T_assignments(int d_S, int d_E,
                                      const std::function<void(const PartitionAssignment&)>& fn);

/// The infinite-temperature state for one assignment.
DensityOperator infinite_T_state(int d_S, int d_E, const PartitionAssignment& groups);

enum class GlobalHamiltonianKind {
  correlated_pure,     // one environment vector per system level
  correlated_weighted  // per-level energy weights over disjoint env blocks
};

struct GlobalHamiltonianParams {
  Eigen::VectorXd energies;  // E_i, length n
  Matrix sys_vectors;        // d_S x n orthonormal columns
  Matrix env_vectors;        // d_E x m orthonormal columns (m >= n)
  Eigen::MatrixXd q;         // n x m weights, disjoint row supports (weighted kind)
};

/// Total Hamiltonians with system-environment correlated eigenstructure
/// whose low-lying sector carries objective correlations.
HermitianOperator build_global_objective_hamiltonian(GlobalHamiltonianKind kind,
                                                     const GlobalHamiltonianParams& params);

}  // namespace thermobj
