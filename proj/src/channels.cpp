#include "thermobj/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace thermobj {

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops) : kraus_(std::move(kraus_ops)) {
  if (kraus_.empty()) throw std::invalid_argument("KrausChannel: no operators");
  for (const auto& k : kraus_)
    if (k.rows() != kraus_[0].rows() || k.cols() != kraus_[0].cols())
      throw std::invalid_argument("KrausChannel: inconsistent operator shapes");
  if (completeness_defect() > kHermTol)
    throw std::invalid_argument("KrausChannel: operators not trace preserving");
}

double KrausChannel::completeness_defect() const {
  Matrix sum = Matrix::Zero(dim_in(), dim_in());
  for (const auto& k : kraus_) sum += k.adjoint() * k;
  return (sum - Matrix::Identity(dim_in(), dim_in())).cwiseAbs().maxCoeff();
}

DensityOperator KrausChannel::apply(const DensityOperator& rho) const {
  if (rho.dim() != dim_in()) throw std::invalid_argument("KrausChannel: input dim mismatch");
  Matrix out = Matrix::Zero(dim_out(), dim_out());
  for (const auto& k : kraus_) out += k * rho.matrix() * k.adjoint();
  return DensityOperator(HermitianOperator(out));
}

DensityOperator PointChannel::apply(const DensityOperator& rho) const {
  if (rho.dim() != target_.dim()) throw std::invalid_argument("PointChannel: input dim mismatch");
  return target_;
}

DensityOperator cnot_broadcast(const DensityOperator& rho_se) {
  if (rho_se.dim() != 4) throw std::invalid_argument("cnot_broadcast: need a two-qubit state");
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(2, 3) = 1;
  u(3, 2) = 1;
  return DensityOperator(HermitianOperator(u * rho_se.matrix() * u.adjoint()));
}

GADParams::GADParams(double p_in, double eta_in) : p(p_in), eta(eta_in) {
  if (p < 0 || p > 1) throw std::invalid_argument("GADParams: p outside [0,1]");
  if (eta < 0 || eta > 1) throw std::invalid_argument("GADParams: eta outside [0,1]");
}

GADParams::GADParams(double p_in, double eta_in, double t_in, double n_bar_in)
    : GADParams(p_in, eta_in) {
  t = t_in;
  n_bar = n_bar_in;
  if (std::abs(eta_in - (1.0 - std::exp(-(1.0 + 2.0 * n_bar_in) * t_in))) > 1e-12)
    throw std::invalid_argument("GADParams: eta inconsistent with (t, n_bar)");
}

GADParams GADParams::from_time(double p_in, double t_in, double n_bar_in) {
  return GADParams(p_in, 1.0 - std::exp(-(1.0 + 2.0 * n_bar_in) * t_in), t_in, n_bar_in);
}

double GADParams::occupation(double temperature) {
  if (temperature <= 0) throw std::invalid_argument("GADParams: temperature must be positive");
  return 1.0 / std::expm1(1.0 / temperature);
}

KrausChannel gad_channel(const GADParams& params) {
  const double sp = std::sqrt(params.p);
  const double sq = std::sqrt(1.0 - params.p);
  const double se = std::sqrt(params.eta);
  const double sd = std::sqrt(1.0 - params.eta);
  Matrix e1(2, 2), e2(2, 2), e3(2, 2), e4(2, 2);
  e1 << sp, 0, 0, sp * se;
  e2 << 0, sp * sd, 0, 0;
  e3 << sq * se, 0, 0, sq;
  e4 << 0, 0, sq * sd, 0;
  return KrausChannel({e1, e2, e3, e4});
}

namespace {

// Deterministic near-uniform unit directions (golden-spiral lattice).
Eigen::Vector3d sphere_point(int k, int n) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  double z = 1.0 - 2.0 * (k + 0.5) / n;
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double phi = 2.0 * M_PI * k / golden;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

}  // namespace

AffineBlochChannel::AffineBlochChannel(Eigen::Matrix3d a, Eigen::Vector3d t)
    : a_(std::move(a)), t_(std::move(t)) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a_, Eigen::ComputeFullV);
  if (svd.singularValues()(0) > 1.0 + 1e-9)
    throw std::invalid_argument("AffineBlochChannel: A expands the Bloch ball");
  const int samples = 1000;
  for (int k = -6; k < samples; ++k) {
    Eigen::Vector3d r;
    if (k < 0) {
      // Singular directions, both orientations.
      r = svd.matrixV().col((-k - 1) % 3) * ((-k - 1) < 3 ? 1.0 : -1.0);
    } else {
      r = sphere_point(k, samples);
    }
    if ((a_ * r + t_).norm() > 1.0 + 1e-9)
      throw std::invalid_argument("AffineBlochChannel: image leaves the Bloch ball");
  }
}

AffineBlochChannel AffineBlochChannel::toward(const Eigen::Matrix3d& a,
                                              const BlochVector& thermal_point) {
  Eigen::Vector3d ts(thermal_point.x, thermal_point.y, thermal_point.z);
  return AffineBlochChannel(a, (Eigen::Matrix3d::Identity() - a) * ts);
}

double AffineBlochChannel::contraction_norm() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a_);
  return svd.singularValues()(0);
}

BlochVector AffineBlochChannel::apply(const BlochVector& r) const {
  Eigen::Vector3d v(r.x, r.y, r.z);
  Eigen::Vector3d out = a_ * v + t_;
  return {out(0), out(1), out(2)};
}

AffineBlochChannel bloch_of_channel(const KrausChannel& ch) {
  if (ch.dim_in() != 2 || ch.dim_out() != 2)
    throw std::invalid_argument("bloch_of_channel: not a qubit channel");
  BlochVector t_b = to_bloch(ch.apply(DensityOperator::maximally_mixed(2)));
  Eigen::Vector3d t(t_b.x, t_b.y, t_b.z);
  Eigen::Matrix3d a;
  for (int k = 0; k < 3; ++k) {
    BlochVector e;
    (k == 0 ? e.x : k == 1 ? e.y : e.z) = 1.0;
    BlochVector img = to_bloch(ch.apply(from_bloch(e)));
    a(0, k) = img.x - t(0);
    a(1, k) = img.y - t(1);
    a(2, k) = img.z - t(2);
  }
  return AffineBlochChannel(a, t);
}

FixpointResult iterate_to_fixpoint(const AffineBlochChannel& ch, const BlochVector& r0,
                                   double tol, int max_iters) {
  if (ch.contraction_norm() >= 1.0)
    throw std::invalid_argument("iterate_to_fixpoint: not a strict partial thermalization");
  BlochVector r = r0;
  for (int it = 1; it <= max_iters; ++it) {
    r = ch.apply(r);
    BlochVector probe = ch.apply(r);  // residual at the new point
    double residual =
        std::sqrt((probe.x - r.x) * (probe.x - r.x) + (probe.y - r.y) * (probe.y - r.y) +
                  (probe.z - r.z) * (probe.z - r.z));
    if (residual <= tol) return {r, it};
  }
  throw std::runtime_error("iterate_to_fixpoint: no convergence within max_iters");
}

}  // namespace thermobj
