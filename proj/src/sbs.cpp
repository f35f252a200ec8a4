#include "thermobj/sbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "thermobj/rng.hpp"

namespace thermobj {

namespace {

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

void check_orthonormal_columns(const Matrix& v, const char* what) {
  Matrix gram = v.adjoint() * v;
  double dev = (gram - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << what << ": columns not orthonormal (deviation " << dev << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

SBSState::SBSState(std::vector<double> probs_in, Matrix sys_basis_in,
                   std::vector<std::vector<DensityOperator>> cond_states_in)
    : probs(std::move(probs_in)),
      sys_basis(std::move(sys_basis_in)),
      cond_states(std::move(cond_states_in)) {
  const int n = static_cast<int>(probs.size());
  if (n < 1) throw std::invalid_argument("SBSState: empty spectrum");
  double sum = 0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("SBSState: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTraceTol) throw std::invalid_argument("SBSState: probs do not sum to 1");
  if (sys_basis.cols() != n || sys_basis.rows() < n)
    throw std::invalid_argument("SBSState: sys_basis shape mismatch");
  check_orthonormal_columns(sys_basis, "SBSState sys_basis");
  if (cond_states.empty()) throw std::invalid_argument("SBSState: no subenvironments");
  for (const auto& per_env : cond_states) {
    if (static_cast<int>(per_env.size()) != n)
      throw std::invalid_argument("SBSState: conditional list length mismatch");
    for (const auto& st : per_env)
      if (st.dim() != per_env.front().dim())
        throw std::invalid_argument("SBSState: conditional dims differ within a subenvironment");
  }
}

std::vector<int> SBSState::env_dims() const {
  std::vector<int> dims;
  dims.reserve(cond_states.size());
  for (const auto& per_env : cond_states) dims.push_back(per_env.front().dim());
  return dims;
}

int SBSState::total_dim() const {
  int d = sys_dim();
  for (int e : env_dims()) d *= e;
  return d;
}

void SBSState::validate(double tol) const {
  for (int k = 0; k < subenv_count(); ++k)
    for (int i = 0; i < index_count(); ++i)
      for (int j = i + 1; j < index_count(); ++j) {
        double overlap =
            trace_norm(Matrix(cond_states[k][i].matrix() * cond_states[k][j].matrix()));
        if (overlap > tol) {
          std::ostringstream msg;
          msg << "SBSState: conditional supports overlap (subenv " << k << ", indices " << i
              << "," << j << ", magnitude " << overlap << ")";
          throw std::invalid_argument(msg.str());
        }
      }
}

void PartitionAssignment::validate(int universe_size) const {
  std::vector<int> seen(universe_size, 0);
  for (const auto& set : sets)
    for (int j : set) {
      if (j < 0 || j >= universe_size)
        throw std::invalid_argument("PartitionAssignment: index out of range");
      if (seen[j]++) throw std::invalid_argument("PartitionAssignment: sets not disjoint");
    }
}

double support_overlap(const DensityOperator& a, const DensityOperator& b) {
  Matrix ra = psd_sqrt(a.matrix());
  return trace_norm(Matrix(ra * b.matrix() * ra));
}

DensityOperator assemble(const SBSState& s) {
  const int n = s.index_count();
  for (int k = 0; k < s.subenv_count(); ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double overlap =
            trace_norm(Matrix(s.cond_states[k][i].matrix() * s.cond_states[k][j].matrix()));
        if (overlap > 1e-9) {
          std::ostringstream msg;
          msg << "not objective: conditional supports overlap (subenv " << k << ", indices " << i
              << "," << j << ", magnitude " << overlap << ")";
          throw std::invalid_argument(msg.str());
        }
      }

  const int total = s.total_dim();
  Matrix acc = Matrix::Zero(total, total);
  for (int i = 0; i < n; ++i) {
    Vector col = s.sys_basis.col(i);
    Matrix term = col * col.adjoint();
    for (int k = 0; k < s.subenv_count(); ++k) term = kron(term, s.cond_states[k][i].matrix());
    acc += s.probs[i] * term;
  }
  return DensityOperator(HermitianOperator(acc));
}

namespace {

// Operator-valued block <x| rho |y> on the environment, for system
// vectors x, y. rho is indexed (s*d_E + m, s'*d_E + n).
Matrix env_block(const Matrix& rho, const Vector& x, const Vector& y, int d_E) {
  const int d_S = static_cast<int>(x.size());
  Matrix out = Matrix::Zero(d_E, d_E);
  for (int s = 0; s < d_S; ++s) {
    if (std::abs(x[s]) == 0.0) continue;
    for (int t = 0; t < d_S; ++t) {
      Complex coeff = std::conj(x[s]) * y[t];
      if (std::abs(coeff) == 0.0) continue;
      out += coeff * rho.block(s * d_E, t * d_E, d_E, d_E);
    }
  }
  return out;
}

// Conditional state from a diagonal block; small negative eigenvalues are
// clamped. Returns nullopt when the block is too far from positive.
std::optional<DensityOperator> block_to_state(const Matrix& block, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(block);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -std::sqrt(tol)) return std::nullopt;
  Eigen::VectorXd clamped = ev.cwiseMax(0.0);
  double tr = clamped.sum();
  if (tr <= 0) return std::nullopt;
  clamped /= tr;
  return DensityOperator(
      HermitianOperator(es.eigenvectors() * clamped.cast<Complex>().asDiagonal() *
                        es.eigenvectors().adjoint()));
}

}  // namespace

CertifyResult certify_sbs(const DensityOperator& rho, const std::vector<int>& dims, double tol) {
  if (dims.size() < 2) throw std::invalid_argument("certify_sbs: need system and environment dims");
  long prod = 1;
  for (int d : dims) prod *= d;
  if (prod != rho.dim()) throw std::invalid_argument("certify_sbs: dims inconsistent with state");

  const int d_S = dims[0];
  const int d_E = static_cast<int>(rho.dim() / d_S);
  const std::vector<int> env_dims(dims.begin() + 1, dims.end());
  const int n_env = static_cast<int>(env_dims.size());

  CertifyResult result;

  // System marginal fixes the candidate pointer basis up to rotations
  // inside degenerate eigenvalue clusters.
  Matrix rho_s = partial_trace_matrix(rho.matrix(), {d_S, d_E}, {0});
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_s);
  std::vector<int> order(d_S);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return es.eigenvalues()[a] > es.eigenvalues()[b]; });

  Matrix basis(d_S, d_S);
  Eigen::VectorXd p(d_S);
  for (int i = 0; i < d_S; ++i) {
    basis.col(i) = es.eigenvectors().col(order[i]);
    p[i] = es.eigenvalues()[order[i]];
  }

  const double cluster_tol = std::max(tol, 1e-12);
  RandomSource rng(0x5b5b5b5bULL);  // fixed: certification is deterministic

  int start = 0;
  while (start < d_S) {
    int end = start + 1;
    while (end < d_S && p[start] - p[end] <= cluster_tol) ++end;
    const int m = end - start;
    if (m >= 2 && p[start] > tol) {
      // Simultaneous diagonalization of the conditional blocks: diagonalize
      // tr[B_uv F] for a generic Hermitian F, retrying if F fails to
      // separate the conditionals.
      double best_offdiag = std::numeric_limits<double>::infinity();
      Matrix best_cols;
      for (int attempt = 0; attempt < 4; ++attempt) {
        Matrix cols = basis.middleCols(start, m);
        if (attempt > 0) {
          Matrix f = rng.random_hermitian(d_E).matrix();
          Matrix n_mat(m, m);
          for (int u = 0; u < m; ++u)
            for (int v = 0; v < m; ++v)
              n_mat(u, v) = env_block(rho.matrix(), cols.col(u), cols.col(v), d_E)
                                .cwiseProduct(f.transpose())
                                .sum();
          Eigen::SelfAdjointEigenSolver<Matrix> nes(n_mat);
          cols = cols * nes.eigenvectors();
        }
        double offdiag = 0;
        for (int u = 0; u < m; ++u)
          for (int v = u + 1; v < m; ++v)
            offdiag = std::max(
                offdiag, trace_norm(env_block(rho.matrix(), cols.col(u), cols.col(v), d_E)));
        if (offdiag < best_offdiag) {
          best_offdiag = offdiag;
          best_cols = cols;
        }
        if (offdiag <= tol) break;
      }
      basis.middleCols(start, m) = best_cols;
    }
    start = end;
  }

  // Off-diagonal system blocks must vanish in the candidate basis.
  for (int i = 0; i < d_S; ++i)
    for (int j = i + 1; j < d_S; ++j) {
      double norm = trace_norm(env_block(rho.matrix(), basis.col(i), basis.col(j), d_E));
      if (norm > tol) {
        result.witness = "system block not diagonal in any admissible basis (indices " +
                         std::to_string(i) + "," + std::to_string(j) + ")";
        result.magnitude = norm;
        return result;
      }
    }

  // Conditional environment states for the indices that carry weight.
  std::vector<int> kept;
  for (int i = 0; i < d_S; ++i)
    if (p[i] > tol) kept.push_back(i);
  if (kept.empty()) {
    result.witness = "system marginal has no spectrum above tolerance";
    result.magnitude = 0;
    return result;
  }

  std::vector<DensityOperator> cond_full;
  for (int i : kept) {
    Matrix block = env_block(rho.matrix(), basis.col(i), basis.col(i), d_E) / p[i];
    auto state = block_to_state(block, tol);
    if (!state) {
      result.witness = "conditional block for index " + std::to_string(i) + " not positive";
      result.magnitude = trace_norm(HermitianOperator(block)) - 1.0;
      return result;
    }
    cond_full.push_back(*state);
  }

  // The conditional state must factorize across the subenvironments.
  std::vector<std::vector<DensityOperator>> cond(n_env);
  for (size_t idx = 0; idx < kept.size(); ++idx) {
    std::vector<DensityOperator> factors;
    for (int k = 0; k < n_env; ++k)
      factors.push_back(partial_trace(cond_full[idx], env_dims, {k}));
    if (n_env > 1) {
      Matrix prod_m = factors[0].matrix();
      for (int k = 1; k < n_env; ++k) prod_m = kron(prod_m, factors[k].matrix());
      double gap = trace_norm(HermitianOperator(Matrix(cond_full[idx].matrix() - prod_m)));
      if (gap > tol) {
        result.witness = "conditional state for index " + std::to_string(kept[idx]) +
                         " is not a product across subenvironments";
        result.magnitude = gap;
        return result;
      }
    }
    for (int k = 0; k < n_env; ++k) cond[k].push_back(factors[k]);
  }

  // Pairwise disjoint supports within every subenvironment.
  for (int k = 0; k < n_env; ++k)
    for (size_t a = 0; a < kept.size(); ++a)
      for (size_t b = a + 1; b < kept.size(); ++b) {
        double overlap = support_overlap(cond[k][a], cond[k][b]);
        if (overlap > tol) {
          result.witness = "conditional supports overlap (subenv " + std::to_string(k) +
                           ", indices " + std::to_string(kept[a]) + "," +
                           std::to_string(kept[b]) + ")";
          result.magnitude = overlap;
          return result;
        }
      }

  std::vector<double> probs;
  double kept_sum = 0;
  for (int i : kept) kept_sum += p[i];
  for (int i : kept) probs.push_back(p[i] / kept_sum);
  Matrix kept_basis(d_S, kept.size());
  for (size_t idx = 0; idx < kept.size(); ++idx) kept_basis.col(idx) = basis.col(kept[idx]);

  result.objective = true;
  result.state.emplace(std::move(probs), std::move(kept_basis), std::move(cond));
  return result;
}

DensityOperator thermal_system_objective(
    const HamiltonianSpec& hs, const InverseTemperature& beta,
    const std::vector<std::vector<DensityOperator>>& cond_states) {
  Eigen::VectorXd w = gibbs_weights(hs.energies(), beta);
  std::vector<double> probs(w.data(), w.data() + w.size());
  return assemble(SBSState(std::move(probs), hs.basis(), cond_states));
}

namespace {

// Candidate objective state for a fixed environment basis and bin
// assignment, with block weights renormalized per bin.
DensityOperator partition_candidate(const Eigen::VectorXd& w, const Matrix& sys_basis,
                                    const Matrix& env_basis,
                                    const std::vector<std::vector<int>>& bins,
                                    const Eigen::MatrixXd& block_weights) {
  const int d_S = static_cast<int>(w.size());
  const int d_E = static_cast<int>(env_basis.rows());
  const int total = d_S * d_E;
  Matrix acc = Matrix::Zero(total, total);
  for (int i = 0; i < d_S; ++i) {
    if (w[i] <= 0 || bins[i].empty()) continue;
    double s = 0;
    for (int j : bins[i]) s += block_weights(i, j);
    Matrix cond = Matrix::Zero(d_E, d_E);
    for (int j : bins[i]) {
      double c = s > 0 ? block_weights(i, j) / s : 1.0 / bins[i].size();
      Vector u = env_basis.col(j);
      cond += c * (u * u.adjoint());
    }
    Vector b = sys_basis.col(i);
    acc += w[i] * kron(Matrix(b * b.adjoint()), cond);
  }
  return DensityOperator(HermitianOperator(acc));
}

}  // namespace

double thermal_objective_distance_bound(const DensityOperator& rho, const HamiltonianSpec& hs,
                                        const InverseTemperature& beta, int search_budget) {
  if (search_budget < 1) throw std::invalid_argument("distance bound: search budget must be >= 1");
  const int d_S = hs.dim();
  if (rho.dim() % d_S != 0)
    throw std::invalid_argument("distance bound: state dim not a multiple of system dim");
  const int d_E = static_cast<int>(rho.dim()) / d_S;

  Eigen::VectorXd w = gibbs_weights(hs.energies(), beta);

  // Diagonal environment blocks in the Hamiltonian eigenbasis.
  std::vector<Matrix> blocks(d_S);
  for (int i = 0; i < d_S; ++i)
    blocks[i] = env_block(rho.matrix(), hs.basis().col(i), hs.basis().col(i), d_E);

  // A generic combination of the blocks; when rho is objective the blocks
  // commute and this basis diagonalizes all of them at once.
  Matrix generic = Matrix::Zero(d_E, d_E);
  for (int i = 0; i < d_S; ++i) generic += (1.0 + 0.6180339887498949 * (i + 1)) * blocks[i];
  std::vector<Matrix> bases;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> ges(generic);
    bases.push_back(ges.eigenvectors());
  }
  RandomSource rng(0x7a11ce5eedULL);
  for (int g = 1; g < search_budget; ++g) bases.push_back(rng.haar_unitary(d_E));

  double best = std::numeric_limits<double>::infinity();
  const double enumeration_limit = 20000.0;
  const bool enumerate = std::pow(double(d_S), double(d_E)) <= enumeration_limit;

  for (const Matrix& u : bases) {
    Eigen::MatrixXd m(d_S, d_E);
    for (int i = 0; i < d_S; ++i)
      for (int j = 0; j < d_E; ++j)
        m(i, j) = std::max(0.0, (u.col(j).adjoint() * blocks[i] * u.col(j))(0, 0).real());

    std::vector<std::vector<std::vector<int>>> assignments;
    if (enumerate) {
      std::vector<int> code(d_E, 0);
      while (true) {
        std::vector<std::vector<int>> bins(d_S);
        for (int j = 0; j < d_E; ++j) bins[code[j]].push_back(j);
        bool ok = true;
        for (int i = 0; i < d_S; ++i)
          if (bins[i].empty() && w[i] > 1e-15) ok = false;
        if (ok) assignments.push_back(std::move(bins));
        int k = d_E - 1;
        while (k >= 0 && ++code[k] == d_S) code[k--] = 0;
        if (k < 0) break;
      }
    } else {
      // Largest-block-weight assignment with a repair pass for empty bins.
      std::vector<std::vector<int>> bins(d_S);
      std::vector<int> owner(d_E);
      for (int j = 0; j < d_E; ++j) {
        int arg = 0;
        for (int i = 1; i < d_S; ++i)
          if (m(i, j) > m(arg, j)) arg = i;
        owner[j] = arg;
        bins[arg].push_back(j);
      }
      for (int i = 0; i < d_S; ++i) {
        if (!bins[i].empty() || w[i] <= 1e-15) continue;
        int best_j = -1;
        double best_m = -1;
        for (int j = 0; j < d_E; ++j)
          if (bins[owner[j]].size() > 1 && m(i, j) > best_m) {
            best_m = m(i, j);
            best_j = j;
          }
        if (best_j >= 0) {
          auto& from = bins[owner[best_j]];
          from.erase(std::find(from.begin(), from.end(), best_j));
          owner[best_j] = i;
          bins[i].push_back(best_j);
        }
      }
      assignments.push_back(std::move(bins));
    }

    for (const auto& bins : assignments) {
      bool viable = true;
      for (int i = 0; i < d_S; ++i)
        if (bins[i].empty() && w[i] > 1e-15) viable = false;
      if (!viable) continue;
      DensityOperator candidate = partition_candidate(w, hs.basis(), u, bins, m);
      best = std::min(best, trace_distance(rho, candidate));
    }
  }
  return best;
}

CoexistenceShift check_equal_dim_coexistence(const HamiltonianSpec& hs, const HamiltonianSpec& he,
                                             const InverseTemperature& beta, double tol) {
  (void)beta;  // the shift criterion holds at any fixed finite temperature
  if (hs.dim() != he.dim())
    throw std::invalid_argument("check_equal_dim_coexistence: dimension mismatch");
  std::vector<double> es(hs.energies().data(), hs.energies().data() + hs.dim());
  std::vector<double> ee(he.energies().data(), he.energies().data() + he.dim());
  std::sort(es.begin(), es.end());
  std::sort(ee.begin(), ee.end());
  double c = 0;
  for (size_t i = 0; i < es.size(); ++i) c += (ee[i] - es[i]);
  c /= static_cast<double>(es.size());
  for (size_t i = 0; i < es.size(); ++i)
    if (std::abs(ee[i] - es[i] - c) > tol) return {false, 0};
  return {true, c};
}

HamiltonianSpec subenv_hamiltonian(const HamiltonianSpec& hs, const SubenvSpec& spec) {
  if (spec.rotation.rows() != hs.dim() || spec.rotation.cols() != hs.dim())
    throw std::invalid_argument("subenv_hamiltonian: rotation dim mismatch");
  return HamiltonianSpec(hs.energies().array() + spec.shift, spec.rotation * hs.basis());
}

DensityOperator exact_thermal_objective_state(const HamiltonianSpec& hs,
                                              const std::vector<SubenvSpec>& subenvs,
                                              const InverseTemperature& beta) {
  if (subenvs.empty()) throw std::invalid_argument("exact_thermal_objective_state: no subenvs");
  const int d = hs.dim();
  for (const auto& s : subenvs)
    if (s.rotation.rows() != d || s.rotation.cols() != d)
      throw std::invalid_argument("exact_thermal_objective_state: subenv dim mismatch");

  Eigen::VectorXd w = gibbs_weights(hs.energies(), beta);
  int total = d;
  for (size_t k = 0; k < subenvs.size(); ++k) total *= d;
  Matrix acc = Matrix::Zero(total, total);
  for (int i = 0; i < d; ++i) {
    if (w[i] == 0.0) continue;
    Vector b = hs.basis().col(i);
    Matrix term = b * b.adjoint();
    for (const auto& s : subenvs) {
      Vector phi = s.rotation * b;
      term = kron(term, Matrix(phi * phi.adjoint()));
    }
    acc += w[i] * term;
  }
  return DensityOperator(HermitianOperator(acc));
}

namespace {

unsigned long long checked_mul(unsigned long long a, unsigned long long b) {
  unsigned long long r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("infinite_T_exact_states: count overflows 64 bits");
  return r;
}

// C(n, k) with overflow checking.
unsigned long long binomial(int n, int k) {
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = checked_mul(r, n - k + i) / i;
  return r;
}

}  // namespace

InfiniteTFamily infinite_T_exact_states(int d_S, int d_E) {
  if (d_S < 1 || d_E < 1) throw std::invalid_argument("infinite_T_exact_states: dims must be >= 1");
  InfiniteTFamily out;
  if (d_E % d_S != 0) {
    out.count = 0;
    out.distance_bound = static_cast<double>(d_S) / d_E;
    return out;
  }
  const int m = d_E / d_S;
  // (M d_S)! / (M!)^{d_S} as a product of binomials.
  unsigned long long count = 1;
  for (int g = 1; g <= d_S; ++g) count = checked_mul(count, binomial(g * m, m));
  out.count = count;
  out.distance_bound = 0;
  return out;
}

namespace {

void enumerate_groups(int d_E, int m, std::vector<int>& remaining,
                      std::vector<std::vector<int>>& groups,
                      const std::function<void(const PartitionAssignment&)>& fn) {
  if (remaining.empty()) {
    fn(PartitionAssignment{groups});
    return;
  }
  // All m-subsets of the remaining indices become the next group.
  const int r = static_cast<int>(remaining.size());
  std::vector<int> pick(m);
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == m) {
      std::vector<int> next;
      std::vector<bool> used(r, false);
      for (int t : pick) used[t] = true;
      std::vector<int> group;
      for (int t = 0; t < r; ++t)
        (used[t] ? group : next).push_back(remaining[t]);
      groups.push_back(std::move(group));
      std::vector<int> saved = std::move(remaining);
      remaining = std::move(next);
      enumerate_groups(d_E, m, remaining, groups, fn);
      remaining = std::move(saved);
      groups.pop_back();
      return;
    }
    for (int t = start; t <= r - (m - depth); ++t) {
      pick[depth] = t;
      choose(t + 1, depth + 1);
    }
  };
  choose(0, 0);
}

}  // namespace

void enumerate_infinite_T_assignments(int d_S, int d_E,
                                      const std::function<void(const PartitionAssignment&)>& fn) {
  if (d_E > 12) throw std::invalid_argument("enumerate_infinite_T_assignments: d_E > 12");
  if (d_S < 1 || d_E < 1 || d_E % d_S != 0) return;
  const int m = d_E / d_S;
  std::vector<int> remaining(d_E);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<std::vector<int>> groups;
  enumerate_groups(d_E, m, remaining, groups, fn);
}

DensityOperator infinite_T_state(int d_S, int d_E, const PartitionAssignment& groups) {
  if (static_cast<int>(groups.sets.size()) != d_S)
    throw std::invalid_argument("infinite_T_state: wrong group count");
  groups.validate(d_E);
  const int m = d_E / d_S;
  Matrix acc = Matrix::Zero(d_S * d_E, d_S * d_E);
  for (int i = 0; i < d_S; ++i) {
    if (static_cast<int>(groups.sets[i].size()) != m)
      throw std::invalid_argument("infinite_T_state: groups must have equal size");
    Matrix cond = Matrix::Zero(d_E, d_E);
    for (int j : groups.sets[i]) cond(j, j) = 1.0 / m;
    Matrix proj = Matrix::Zero(d_S, d_S);
    proj(i, i) = 1.0;
    acc += (1.0 / d_S) * kron(proj, cond);
  }
  return DensityOperator(HermitianOperator(acc));
}

HermitianOperator build_global_objective_hamiltonian(GlobalHamiltonianKind kind,
                                                     const GlobalHamiltonianParams& params) {
  const int n = static_cast<int>(params.energies.size());
  if (n < 1) throw std::invalid_argument("global hamiltonian: empty energy list");
  if (params.sys_vectors.cols() != n)
    throw std::invalid_argument("global hamiltonian: system vector count mismatch");
  check_orthonormal_columns(params.sys_vectors, "global hamiltonian sys_vectors");
  check_orthonormal_columns(params.env_vectors, "global hamiltonian env_vectors");
  const int d_S = static_cast<int>(params.sys_vectors.rows());
  const int d_E = static_cast<int>(params.env_vectors.rows());
  const int m = static_cast<int>(params.env_vectors.cols());

  Matrix acc = Matrix::Zero(d_S * d_E, d_S * d_E);
  if (kind == GlobalHamiltonianKind::correlated_pure) {
    if (m < n) throw std::invalid_argument("global hamiltonian: need one env vector per level");
    for (int i = 0; i < n; ++i) {
      Vector s = params.sys_vectors.col(i);
      Vector e = params.env_vectors.col(i);
      acc += params.energies[i] * kron(Matrix(s * s.adjoint()), Matrix(e * e.adjoint()));
    }
  } else {
    if (params.q.rows() != n || params.q.cols() != m)
      throw std::invalid_argument("global hamiltonian: q shape mismatch");
    for (int a = 0; a < m; ++a) {
      int holders = 0;
      for (int i = 0; i < n; ++i)
        if (params.q(i, a) != 0.0) ++holders;
      if (holders > 1)
        throw std::invalid_argument("global hamiltonian: q supports overlap");
    }
    for (int i = 0; i < n; ++i) {
      Vector s = params.sys_vectors.col(i);
      Matrix env = Matrix::Zero(d_E, d_E);
      for (int a = 0; a < m; ++a) {
        if (params.q(i, a) == 0.0) continue;
        Vector e = params.env_vectors.col(a);
        env += params.q(i, a) * (e * e.adjoint());
      }
      acc += params.energies[i] * kron(Matrix(s * s.adjoint()), env);
    }
  }
  return HermitianOperator(acc);
}

}  // namespace thermobj
