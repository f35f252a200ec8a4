#include "thermobj/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace thermobj {

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianOperator: matrix not square");
  if (m.rows() < 1) throw std::invalid_argument("HermitianOperator: dim must be >= 1");
  if (m.rows() > kMaxDim) throw std::invalid_argument("HermitianOperator: dimension cap exceeded");
  entries_ = 0.5 * (m + m.adjoint());
}

Eigen::VectorXd HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Matrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

DensityOperator::DensityOperator(const HermitianOperator& op) : op_(op) {
  if (std::abs(op_.trace() - 1.0) > kTraceTol)
    throw std::invalid_argument("DensityOperator: trace not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op_.matrix());
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() < kPsdFloor)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
  if (ev.minCoeff() < 0.0) {
    // Clamp eigensolver noise to zero and rebuild.
    Eigen::VectorXd clamped = ev.cwiseMax(0.0);
    op_ = HermitianOperator(es.eigenvectors() * clamped.asDiagonal() *
                            es.eigenvectors().adjoint());
  }
}

DensityOperator DensityOperator::pure(const Vector& psi) {
  double n = psi.norm();
  if (n <= 0) throw std::invalid_argument("pure: zero vector");
  Vector u = psi / n;
  return DensityOperator(HermitianOperator(u * u.adjoint()));
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(HermitianOperator(Matrix::Identity(dim, dim) / double(dim)));
}

DensityOperator DensityOperator::diagonal(const Eigen::VectorXd& weights, const Matrix& basis) {
  if (weights.size() != basis.cols())
    throw std::invalid_argument("diagonal: weights/basis size mismatch");
  Matrix m = basis * weights.cast<Complex>().asDiagonal() * basis.adjoint();
  return DensityOperator(HermitianOperator(m));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.matrix() - b.matrix());
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.matrix() + b.matrix());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return c;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(HermitianOperator(kron(a.matrix(), b.matrix())));
}

namespace {

// Row-major multi-index helpers over a dims list.
int flat_index(const std::vector<int>& dims, const std::vector<int>& idx) {
  int f = 0;
  for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
  return f;
}

bool next_multi_index(const std::vector<int>& dims, std::vector<int>& idx) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace

Matrix partial_trace_matrix(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  long prod = 1;
  for (int d : dims) {
    if (d < 1) throw std::invalid_argument("partial_trace: nonpositive factor dim");
    prod *= d;
  }
  if (prod != m.rows() || m.rows() != m.cols())
    throw std::invalid_argument("partial_trace: dimension mismatch");

  std::vector<bool> kept(dims.size(), false);
  for (int k : keep) {
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: keep index out of range");
    kept[k] = true;
  }

  std::vector<int> keep_dims, trace_dims;
  std::vector<int> keep_pos, trace_pos;
  for (size_t k = 0; k < dims.size(); ++k) {
    if (kept[k]) {
      keep_dims.push_back(dims[k]);
      keep_pos.push_back(static_cast<int>(k));
    } else {
      trace_dims.push_back(dims[k]);
      trace_pos.push_back(static_cast<int>(k));
    }
  }

  int out_dim = 1;
  for (int d : keep_dims) out_dim *= d;
  Matrix out = Matrix::Zero(out_dim, out_dim);

  std::vector<int> full_r(dims.size(), 0), full_c(dims.size(), 0);
  std::vector<int> ri(keep_dims.size(), 0);
  do {
    std::vector<int> ci(keep_dims.size(), 0);
    do {
      Complex acc(0, 0);
      std::vector<int> ti(trace_dims.size(), 0);
      do {
        for (size_t k = 0; k < keep_pos.size(); ++k) {
          full_r[keep_pos[k]] = ri[k];
          full_c[keep_pos[k]] = ci[k];
        }
        for (size_t k = 0; k < trace_pos.size(); ++k) {
          full_r[trace_pos[k]] = ti[k];
          full_c[trace_pos[k]] = ti[k];
        }
        acc += m(flat_index(dims, full_r), flat_index(dims, full_c));
      } while (!trace_dims.empty() && next_multi_index(trace_dims, ti));
      out(flat_index(keep_dims, ri), flat_index(keep_dims, ci)) = acc;
    } while (!keep_dims.empty() && next_multi_index(keep_dims, ci));
  } while (!keep_dims.empty() && next_multi_index(keep_dims, ri));

  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& dims,
                              const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");
  return DensityOperator(HermitianOperator(partial_trace_matrix(rho.matrix(), dims, keep)));
}

double trace_norm(const HermitianOperator& a) {
  return a.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_distance: dimension mismatch");
  return trace_norm(a.op() - b.op());
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

BlochVector to_bloch(const DensityOperator& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("to_bloch: not a qubit state");
  const Matrix& m = rho.matrix();
  BlochVector v;
  v.x = 2.0 * m(0, 1).real();
  v.y = -2.0 * m(0, 1).imag();
  v.z = (m(0, 0) - m(1, 1)).real();
  return v;
}

DensityOperator from_bloch(const BlochVector& v) {
  if (v.norm() > 1.0 + 1e-9) throw std::invalid_argument("from_bloch: vector outside Bloch ball");
  Matrix m(2, 2);
  m(0, 0) = Complex(0.5 * (1.0 + v.z), 0);
  m(1, 1) = Complex(0.5 * (1.0 - v.z), 0);
  m(0, 1) = Complex(0.5 * v.x, -0.5 * v.y);
  m(1, 0) = Complex(0.5 * v.x, 0.5 * v.y);
  return DensityOperator(HermitianOperator(m));
}

}  // namespace thermobj
