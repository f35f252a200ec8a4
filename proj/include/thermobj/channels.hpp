// Quantum channels: point thermalization, CNOT broadcasting, generalized
// amplitude damping, and affine Bloch-sphere maps with fixed-point iteration.
#pragma once

#include <optional>
#include <vector>

#include "thermobj/operators.hpp"

namespace thermobj {

/// Kraus decomposition; construction checks sum_m K_m^dagger K_m = I
/// within 1e-10.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<Matrix> kraus_ops);

  int dim_in() const { return static_cast<int>(kraus_[0].cols()); }
  int dim_out() const { return static_cast<int>(kraus_[0].rows()); }
  const std::vector<Matrix>& kraus_ops() const { return kraus_; }

  DensityOperator apply(const DensityOperator& rho) const;

  /// max |sum K^dagger K - I|, for diagnostics.
  double completeness_defect() const;

 private:
  std::vector<Matrix> kraus_;
};

/// Replaces every input with a fixed target state.
class PointChannel {
 public:
  explicit PointChannel(DensityOperator target) : target_(std::move(target)) {}

  int dim() const { return target_.dim(); }
  const DensityOperator& target() const { return target_; }

  DensityOperator apply(const DensityOperator& rho) const;

 private:
  DensityOperator target_;
};

/// Conjugation of a two-qubit system-environment state by CNOT with the
/// system as control. Perfect broadcast needs the environment in |0><0|.
DensityOperator cnot_broadcast(const DensityOperator& rho_se);

/// Generalized-amplitude-damping parameters. p in [0,1] encodes the bath
/// temperature; eta in [0,1] the damping progress. When built from
/// (p, t, n_bar), eta = 1 - exp(-(1+2 n_bar) t).
struct GADParams {
  double p;
  double eta;
  std::optional<double> t;
  std::optional<double> n_bar;

  GADParams(double p_in, double eta_in);
  /// All four parameters; eta must match 1 - exp(-(1+2 n_bar) t) to 1e-12.
  GADParams(double p_in, double eta_in, double t_in, double n_bar_in);
  static GADParams from_time(double p_in, double t_in, double n_bar_in);
  /// Boson occupation 1/(exp(1/T) - 1).
  static double occupation(double temperature);
};

/// Four-operator Kraus channel with stationary state diag(p, 1-p).
KrausChannel gad_channel(const GADParams& params);

/// Affine Bloch map r -> A r + t. For a partial thermalization toward
/// t_S, the stored shift equals (I - A) t_S. Construction checks that the
/// spectral norm of A is at most 1 and that the image of the unit ball
/// stays inside it (sampled directions plus the singular directions).
class AffineBlochChannel {
 public:
  AffineBlochChannel(Eigen::Matrix3d a, Eigen::Vector3d t);
  static AffineBlochChannel toward(const Eigen::Matrix3d& a, const BlochVector& thermal_point);

  const Eigen::Matrix3d& a() const { return a_; }
  const Eigen::Vector3d& t() const { return t_; }
  double contraction_norm() const;  // largest singular value of A

  BlochVector apply(const BlochVector& r) const;

 private:
  Eigen::Matrix3d a_;
  Eigen::Vector3d t_;
};

/// Affine Bloch representation computed from the channel's action on the
/// Pauli basis. The GAD map comes out as x,y scaled by sqrt(eta) and
/// z -> eta z + (2p-1)(1-eta), consistent with its stationary state.
AffineBlochChannel bloch_of_channel(const KrausChannel& ch);

struct FixpointResult {
  BlochVector fixpoint;
  int iterations = 0;
};

/// Iterates a strict contraction to its fixed point (I-A)^{-1} t.
FixpointResult iterate_to_fixpoint(const AffineBlochChannel& ch, const BlochVector& r0,
                                   double tol = 1e-10, int max_iters = 100000);

}  // namespace thermobj
