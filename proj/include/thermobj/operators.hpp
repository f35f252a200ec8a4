// Dense complex-matrix foundation: Hermitian and density operators,
// tensor products, partial traces, trace norm, Bloch-vector conversion.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace thermobj {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 4096;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdFloor = -1e-10;

/// Complex square matrix stored symmetrized: entries are replaced by
/// (M + M^dagger)/2 at construction, so Hermiticity holds exactly.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

  double trace() const { return entries_.trace().real(); }

  /// Real eigenvalues, ascending.
  Eigen::VectorXd eigenvalues() const;

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

 private:
  Matrix entries_;
};

/// Unit-trace positive-semidefinite operator. Construction checks
/// trace within 1e-9 of 1 and eigenvalues above the -1e-10 floor;
/// eigensolver noise below zero is clamped away.
class DensityOperator {
 public:
  explicit DensityOperator(const HermitianOperator& op);
  explicit DensityOperator(const Matrix& m) : DensityOperator(HermitianOperator(m)) {}

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

  /// Rank-1 projector onto a (normalized) vector.
  static DensityOperator pure(const Vector& psi);
  static DensityOperator maximally_mixed(int dim);
  /// Diagonal state in the given orthonormal basis columns; weights must
  /// be a probability vector.
  static DensityOperator diagonal(const Eigen::VectorXd& weights, const Matrix& basis);

 private:
  HermitianOperator op_;
};

/// Pauli expectations (x, y, z) of a qubit state; |v| <= 1 + 1e-9.
struct BlochVector {
  double x = 0, y = 0, z = 0;

  double norm() const;
};

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out all factors not in `keep` (0-based positions into `dims`).
/// The kept factors stay in their original order.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& dims,
                              const std::vector<int>& keep);

/// Same contraction on a plain matrix; used for conditional blocks.
Matrix partial_trace_matrix(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianOperator& a);
/// Sum of singular values (general matrices, e.g. off-diagonal blocks).
double trace_norm(const Matrix& m);

double trace_distance(const DensityOperator& a, const DensityOperator& b);

/// Convention: sigma_z |0> = +|0>, so |0><0| maps to z = +1.
BlochVector to_bloch(const DensityOperator& rho);
DensityOperator from_bloch(const BlochVector& v);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

}  // namespace thermobj
