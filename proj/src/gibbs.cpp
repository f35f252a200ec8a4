#include "thermobj/gibbs.hpp"

#include <cmath>
#include <stdexcept>

namespace thermobj {

HamiltonianSpec::HamiltonianSpec(Eigen::VectorXd energies, Matrix basis)
    : energies_(std::move(energies)), basis_(std::move(basis)) {
  if (energies_.size() < 1) throw std::invalid_argument("HamiltonianSpec: empty energy list");
  for (Eigen::Index i = 0; i < energies_.size(); ++i)
    if (!std::isfinite(energies_[i]))
      throw std::invalid_argument("HamiltonianSpec: non-finite energy");
  if (basis_.rows() != energies_.size() || basis_.cols() != energies_.size())
    throw std::invalid_argument("HamiltonianSpec: basis shape mismatch");
  Matrix gram = basis_.adjoint() * basis_;
  double dev = (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
  if (dev > kHermTol) throw std::invalid_argument("HamiltonianSpec: basis not unitary");
}

HamiltonianSpec HamiltonianSpec::diagonal(Eigen::VectorXd energies) {
  Eigen::Index d = energies.size();
  return HamiltonianSpec(std::move(energies), Matrix::Identity(d, d));
}

HamiltonianSpec HamiltonianSpec::from_operator(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  return HamiltonianSpec(es.eigenvalues(), es.eigenvectors());
}

HermitianOperator HamiltonianSpec::to_operator() const {
  return HermitianOperator(basis_ * energies_.cast<Complex>().asDiagonal() * basis_.adjoint());
}

HamiltonianSpec HamiltonianSpec::shifted(double c) const {
  return HamiltonianSpec(energies_.array() + c, basis_);
}

InverseTemperature::InverseTemperature(double beta) : beta_(beta), infinite_(false) {
  if (!(beta >= 0)) throw std::invalid_argument("InverseTemperature: beta must be >= 0");
}

InverseTemperature InverseTemperature::infinite() { return InverseTemperature(); }

double InverseTemperature::value() const {
  if (infinite_) throw std::logic_error("InverseTemperature: value of infinite beta");
  return beta_;
}

double partition_function(const HamiltonianSpec& h, const InverseTemperature& beta) {
  if (beta.is_infinite())
    throw std::invalid_argument("partition_function: beta infinite; use gibbs_state");
  double z = 0;
  for (Eigen::Index i = 0; i < h.energies().size(); ++i)
    z += std::exp(-beta.value() * h.energies()[i]);
  return z;
}

Eigen::VectorXd gibbs_weights(const Eigen::VectorXd& energies, const InverseTemperature& beta) {
  Eigen::Index d = energies.size();
  Eigen::VectorXd w(d);
  double h_min = energies.minCoeff();
  if (beta.is_infinite()) {
    // Normalized indicator of the ground eigenspace.
    int count = 0;
    for (Eigen::Index i = 0; i < d; ++i)
      if (energies[i] - h_min <= 1e-12) ++count;
    for (Eigen::Index i = 0; i < d; ++i)
      w[i] = (energies[i] - h_min <= 1e-12) ? 1.0 / count : 0.0;
    return w;
  }
  // Shift by the minimum; the gauge factor cancels exactly, also in floats.
  for (Eigen::Index i = 0; i < d; ++i) w[i] = std::exp(-beta.value() * (energies[i] - h_min));
  w /= w.sum();
  return w;
}

DensityOperator gibbs_state(const HamiltonianSpec& h, const InverseTemperature& beta) {
  return DensityOperator::diagonal(gibbs_weights(h.energies(), beta), h.basis());
}

ThermalFit fit_thermal(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  const Eigen::VectorXd& p = es.eigenvalues();
  if (p.minCoeff() <= 1e-10) throw std::invalid_argument("fit_thermal: not full rank");
  Eigen::VectorXd energies(p.size());
  double p_max = p.maxCoeff();
  for (Eigen::Index i = 0; i < p.size(); ++i) energies[i] = std::log(p_max / p[i]);
  return ThermalFit{HamiltonianSpec(energies, es.eigenvectors()), InverseTemperature(1.0)};
}

}  // namespace thermobj
