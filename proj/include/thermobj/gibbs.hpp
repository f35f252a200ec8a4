// Partition functions, Gibbs states, and the inverse thermal fit.
#pragma once

#include <limits>
#include <vector>

#include "thermobj/operators.hpp"

namespace thermobj {

/// Eigen-decomposition form of a Hamiltonian: energies plus an
/// orthonormal eigenvector matrix (columns).
class HamiltonianSpec {
 public:
  HamiltonianSpec(Eigen::VectorXd energies, Matrix basis);

  /// Energies with the computational basis.
  static HamiltonianSpec diagonal(Eigen::VectorXd energies);
  /// Eigen-decomposition of a dense Hermitian operator.
  static HamiltonianSpec from_operator(const HermitianOperator& h);

  int dim() const { return static_cast<int>(energies_.size()); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Matrix& basis() const { return basis_; }

  HermitianOperator to_operator() const;
  HamiltonianSpec shifted(double c) const;

 private:
  Eigen::VectorXd energies_;
  Matrix basis_;
};

/// beta = 1/(k_B T) >= 0, with an explicit zero-temperature value.
class InverseTemperature {
 public:
  InverseTemperature(double beta);  // NOLINT: implicit by design
  static InverseTemperature infinite();

  bool is_infinite() const { return infinite_; }
  double value() const;

 private:
  InverseTemperature() : beta_(0), infinite_(true) {}
  double beta_;
  bool infinite_;
};

/// Z = sum_j exp(-beta h_j). Errors on infinite beta; use gibbs_state
/// for the zero-temperature limit.
double partition_function(const HamiltonianSpec& h, const InverseTemperature& beta);

/// exp(-beta H)/Z in the spectral basis. Infinite beta yields the
/// normalized projector onto the minimal-energy eigenspace.
DensityOperator gibbs_state(const HamiltonianSpec& h, const InverseTemperature& beta);

/// Boltzmann weights exp(-beta (h_i - h_min)) / Z, ordered like the energies.
Eigen::VectorXd gibbs_weights(const Eigen::VectorXd& energies, const InverseTemperature& beta);

struct ThermalFit {
  HamiltonianSpec hamiltonian;
  InverseTemperature beta;
};

/// Inverts the Boltzmann weights of a full-rank state. The scaling freedom
/// between beta and the energies is fixed by the gauge beta = 1, min E = 0.
ThermalFit fit_thermal(const DensityOperator& rho);

}  // namespace thermobj
