// Deterministic randomness: counter-keyed per-trial streams for the
// Monte Carlo harness, plus Haar/Ginibre helpers for state sampling.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "thermobj/operators.hpp"

namespace thermobj {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream keyed by (seed, grid index, trial index). The key,
/// not the execution order, determines every draw, so parallel and serial
/// sweeps agree.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t grid_index, std::uint64_t trial_index) {
    std::uint64_t s = seed;
    state_ = splitmix64(s) ^ (grid_index * 0xd6e8feb86659fd93ULL);
    splitmix64(state_);
    state_ ^= trial_index * 0xa5a5a5a5deadbeefULL;
    splitmix64(state_);
  }

  /// Uniform in (0, 1) with 53 significant bits, never exactly 0.
  double uniform01() {
    return (static_cast<double>(splitmix64(state_) >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform_sym() { return 2.0 * uniform01() - 1.0; }

  /// Marsaglia polar method; exact normal distribution.
  double normal(double sigma) {
    double u, v, s;
    do {
      u = uniform_sym();
      v = uniform_sym();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return sigma * u * std::sqrt(-2.0 * std::log(s) / s);
  }

 private:
  std::uint64_t state_;
};

/// Seeded source for test fixtures and search grids.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(gen_);
  }

  double normal(double mean, double sigma) {
    std::normal_distribution<double> d(mean, sigma);
    return d(gen_);
  }

  int uniform_int(int a, int b) {
    std::uniform_int_distribution<int> d(a, b);
    return d(gen_);
  }

  Complex complex_gaussian() { return Complex(normal(0, 1), normal(0, 1)); }

  Matrix ginibre(int rows, int cols) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) g(i, j) = complex_gaussian();
    return g;
  }

  /// Haar-distributed unitary via phase-fixed QR of a Ginibre matrix.
  Matrix haar_unitary(int dim) {
    Matrix g = ginibre(dim, dim);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
      Complex d = r(j, j);
      double a = std::abs(d);
      q.col(j) *= (a > 0 ? d / a : Complex(1, 0));
    }
    return q;
  }

  HermitianOperator random_hermitian(int dim) {
    return HermitianOperator(ginibre(dim, dim));  // symmetrized by the constructor
  }

  /// Full-rank state GG^dagger / tr.
  DensityOperator random_density(int dim) {
    Matrix g = ginibre(dim, dim);
    Matrix m = g * g.adjoint();
    m /= m.trace();
    return DensityOperator(HermitianOperator(m));
  }

  std::vector<double> random_probs(int n) {
    std::vector<double> p(n);
    double s = 0;
    for (auto& v : p) s += (v = -std::log(uniform(0.0, 1.0) + 1e-300));
    for (auto& v : p) v /= s;
    return p;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace thermobj
