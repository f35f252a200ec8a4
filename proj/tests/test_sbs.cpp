#include <doctest.h>

#include <cmath>

#include "thermobj/channels.hpp"
#include "thermobj/oracle.hpp"
#include "thermobj/rng.hpp"
#include "thermobj/sbs.hpp"

using namespace thermobj;

namespace {

DensityOperator basis_state(int dim, int k) {
  Vector v = Vector::Zero(dim);
  v[k] = 1;
  return DensityOperator::pure(v);
}

// Random SBS state: Haar system basis, and per subenvironment a random
// unitary whose columns are split into disjoint blocks, one mixed
// conditional state per block.
SBSState random_sbs(RandomSource& rng, int d_S, int n, const std::vector<int>& env_dims) {
  std::vector<double> probs = rng.random_probs(n);
  Matrix sys = rng.haar_unitary(d_S).leftCols(n);
  std::vector<std::vector<DensityOperator>> cond(env_dims.size());
  for (size_t k = 0; k < env_dims.size(); ++k) {
    int e = env_dims[k];
    REQUIRE(e >= n);
    Matrix v = rng.haar_unitary(e);
    // Block sizes: one column each, spares dealt out at random.
    std::vector<int> sizes(n, 1);
    for (int extra = 0; extra < e - n; ++extra) ++sizes[rng.uniform_int(0, n - 1)];
    int col = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<double> w = rng.random_probs(sizes[i]);
      Matrix m = Matrix::Zero(e, e);
      for (int c = 0; c < sizes[i]; ++c) {
        Vector u = v.col(col++);
        m += w[c] * (u * u.adjoint());
      }
      cond[k].emplace_back(HermitianOperator(m));
    }
  }
  return SBSState(std::move(probs), std::move(sys), std::move(cond));
}

}  // namespace

TEST_CASE("assemble with a single index gives a product state") {
  std::vector<std::vector<DensityOperator>> cond{{basis_state(3, 1)}};
  Matrix sys(2, 1);
  sys << 1, 0;
  SBSState s({1.0}, sys, cond);
  DensityOperator rho = assemble(s);
  CHECK(trace_distance(rho, tensor(basis_state(2, 0), basis_state(3, 1))) < 1e-14);
}

TEST_CASE("assemble matches a dephase-then-broadcast circuit") {
  // Dephased |+><+| in the system, fresh environment |0><0|, CNOT.
  Eigen::VectorXd half(2);
  half << 0.5, 0.5;
  DensityOperator dephased = DensityOperator::diagonal(half, Matrix::Identity(2, 2));
  DensityOperator broadcast = cnot_broadcast(tensor(dephased, basis_state(2, 0)));

  std::vector<std::vector<DensityOperator>> cond{{basis_state(2, 0), basis_state(2, 1)}};
  SBSState s({0.5, 0.5}, Matrix::Identity(2, 2), cond);
  CHECK(trace_distance(assemble(s), broadcast) < 1e-14);
}

TEST_CASE("assemble spectrum is p_i times the conditional spectra") {
  Eigen::VectorXd wa(2), wb(2);
  wa << 0.9, 0.1;
  wb << 0.6, 0.4;
  RandomSource rng(31);
  Matrix v = rng.haar_unitary(4);
  std::vector<std::vector<DensityOperator>> cond(1);
  Matrix m0 = wa[0] * (v.col(0) * v.col(0).adjoint()) + wa[1] * (v.col(1) * v.col(1).adjoint());
  Matrix m1 = wb[0] * (v.col(2) * v.col(2).adjoint()) + wb[1] * (v.col(3) * v.col(3).adjoint());
  cond[0].emplace_back(HermitianOperator(m0));
  cond[0].emplace_back(HermitianOperator(m1));
  SBSState s({2.0 / 3.0, 1.0 / 3.0}, Matrix::Identity(2, 2), cond);

  std::vector<double> expected = {2.0 / 3.0 * 0.9, 2.0 / 3.0 * 0.1, 1.0 / 3.0 * 0.6,
                                  1.0 / 3.0 * 0.4, 0, 0, 0, 0};
  std::sort(expected.begin(), expected.end());
  Eigen::VectorXd actual = assemble(s).op().eigenvalues();
  for (int i = 0; i < 8; ++i) CHECK(actual[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("assemble rejects overlapping conditional supports") {
  std::vector<std::vector<DensityOperator>> cond{{basis_state(2, 0), basis_state(2, 0)}};
  SBSState s({0.5, 0.5}, Matrix::Identity(2, 2), cond);
  CHECK_THROWS_WITH_AS(assemble(s),
                       doctest::Contains("not objective"), std::invalid_argument);
  CHECK_THROWS(s.validate());
}

TEST_CASE("certify round trip on random objective states") {
  RandomSource rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.uniform_int(1, 2) + 1;  // 2 or 3 indices
    int d_S = n + rng.uniform_int(0, 1);
    int n_env = rng.uniform_int(1, 3);
    std::vector<int> env_dims;
    for (int k = 0; k < n_env; ++k) env_dims.push_back(n + rng.uniform_int(0, std::max(0, 4 - n)));
    SBSState s = random_sbs(rng, d_S, n, env_dims);
    s.validate(1e-9);
    DensityOperator rho = assemble(s);

    std::vector<int> dims{d_S};
    for (int e : env_dims) dims.push_back(e);
    CertifyResult res = certify_sbs(rho, dims);
    REQUIRE_MESSAGE(res.objective, "trial ", trial, " witness: ", res.witness);

    // Recovered spectrum matches the input up to ordering.
    std::vector<double> got = res.state->probs;
    std::vector<double> want = s.probs;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-8));

    // And the recovered decomposition reassembles to the same state.
    CHECK(trace_distance(assemble(*res.state), rho) < 1e-8);
  }
}

TEST_CASE("certify recovers degenerate spectra through cluster rotation") {
  // Equal probabilities make the system marginal proportional to a
  // projector, so the eigensolver basis is arbitrary and the conditional
  // blocks must be diagonalized simultaneously.
  RandomSource rng(38);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 2;
    Matrix sys = rng.haar_unitary(n);
    Matrix v = rng.haar_unitary(n + 1);
    std::vector<std::vector<DensityOperator>> cond(1);
    for (int i = 0; i < n; ++i) {
      Vector u = v.col(i);
      cond[0].emplace_back(HermitianOperator(Matrix(u * u.adjoint())));
    }
    SBSState s(std::vector<double>(n, 1.0 / n), sys, cond);
    CertifyResult res = certify_sbs(assemble(s), {n, n + 1});
    REQUIRE_MESSAGE(res.objective, "trial ", trial, ": ", res.witness);
    CHECK(trace_distance(assemble(*res.state), assemble(s)) < 1e-8);
  }

  // Equal probabilities with the same conditional twice cannot be
  // objective: no rotation separates identical supports.
  Matrix sys = rng.haar_unitary(2);
  std::vector<std::vector<DensityOperator>> same(1);
  same[0] = {DensityOperator::maximally_mixed(3), DensityOperator::maximally_mixed(3)};
  Matrix acc = Matrix::Zero(6, 6);
  for (int i = 0; i < 2; ++i) {
    Vector b = sys.col(i);
    acc += 0.5 * kron(Matrix(b * b.adjoint()), same[0][i].matrix());
  }
  CertifyResult res = certify_sbs(DensityOperator(HermitianOperator(acc)), {2, 3});
  CHECK_FALSE(res.objective);
  CHECK(res.witness.find("overlap") != std::string::npos);
}

TEST_CASE("certify rejects the Bell state") {
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  CertifyResult res = certify_sbs(DensityOperator::pure(bell), {2, 2});
  CHECK_FALSE(res.objective);
  CHECK(res.magnitude > 1e-3);
}

TEST_CASE("certify rejects a perturbed objective state") {
  Eigen::VectorXd e(2);
  e << 0.0, std::log(2.0);
  HamiltonianSpec hs = HamiltonianSpec::diagonal(e);
  DensityOperator rho = thermal_system_objective(
      hs, 1.0, {{basis_state(2, 0), basis_state(2, 1)}});

  const double tol = 1e-8;
  const double eps = 100 * tol;
  Vector plus0 = Vector::Zero(4);
  plus0[0] = plus0[2] = 1.0 / std::sqrt(2.0);  // (|0>+|1>)/sqrt2 on the system
  Matrix mixed = (1 - eps) * rho.matrix() + eps * (plus0 * plus0.adjoint());
  CertifyResult res = certify_sbs(DensityOperator(HermitianOperator(mixed)), {2, 2}, tol);
  CHECK_FALSE(res.objective);
}

TEST_CASE("certify rejects entanglement across subenvironments") {
  // System index correlated with a Bell pair across two subenvironments:
  // blocks are diagonal but the conditional does not factorize.
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  Vector anti = Vector::Zero(4);
  anti[1] = anti[2] = 1.0 / std::sqrt(2.0);
  Matrix sys0 = Matrix::Zero(2, 2), sys1 = Matrix::Zero(2, 2);
  sys0(0, 0) = 1;
  sys1(1, 1) = 1;
  Matrix m = 0.5 * kron(sys0, Matrix(bell * bell.adjoint())) +
             0.5 * kron(sys1, Matrix(anti * anti.adjoint()));
  CertifyResult res = certify_sbs(DensityOperator(HermitianOperator(m)), {2, 2, 2});
  CHECK_FALSE(res.objective);
  CHECK(res.witness.find("product") != std::string::npos);
}

TEST_CASE("thermal_system_objective produces the stated states") {
  Eigen::VectorXd e(2);
  e << 0.0, std::log(2.0);
  HamiltonianSpec hs = HamiltonianSpec::diagonal(e);

  // Infinite temperature with orthogonal pure conditionals.
  DensityOperator flat = thermal_system_objective(
      HamiltonianSpec::diagonal(Eigen::VectorXd::Zero(2)), 0.0,
      {{basis_state(2, 0), basis_state(2, 1)}});
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 0.5;
  want(3, 3) = 0.5;
  CHECK((flat.matrix() - want).cwiseAbs().maxCoeff() < 1e-14);

  DensityOperator rho = thermal_system_objective(hs, 1.0, {{basis_state(3, 0), basis_state(3, 2)}});
  DensityOperator marginal = partial_trace(rho, {2, 3}, {0});
  CHECK(trace_distance(marginal, gibbs_state(hs, 1.0)) < 1e-10);

  CHECK(certify_sbs(rho, {2, 3}).objective);
}

TEST_CASE("distance bound vanishes on family members") {
  RandomSource rng(33);
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  HamiltonianSpec hs(e, rng.haar_unitary(2));
  Matrix v = rng.haar_unitary(3);
  Matrix c0 = v.col(0) * v.col(0).adjoint();
  Matrix c1 = 0.65 * (v.col(1) * v.col(1).adjoint()) + 0.35 * (v.col(2) * v.col(2).adjoint());
  DensityOperator rho = thermal_system_objective(
      hs, 1.0, {{DensityOperator(HermitianOperator(c0)), DensityOperator(HermitianOperator(c1))}});
  CHECK(thermal_objective_distance_bound(rho, hs, 1.0, 3) < 1e-9);
}

TEST_CASE("distance bound does not exceed the exhaustive candidate search") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  HamiltonianSpec hs = HamiltonianSpec::diagonal(e);
  const double beta = 1.0;
  DensityOperator rho = tensor(gibbs_state(hs, beta), DensityOperator::maximally_mixed(4));

  // Exhaustive mini-oracle over the fixed computational environment basis:
  // every assignment of 4 eigenvectors to 2 bins, block weights
  // renormalized per bin.
  Eigen::VectorXd w = gibbs_weights(e, beta);
  double best = 1e300;
  for (int code = 0; code < (1 << 4); ++code) {
    std::vector<std::vector<int>> bins(2);
    for (int j = 0; j < 4; ++j) bins[(code >> j) & 1].push_back(j);
    if (bins[0].empty() || bins[1].empty()) continue;
    Matrix acc = Matrix::Zero(8, 8);
    for (int i = 0; i < 2; ++i) {
      Matrix cond = Matrix::Zero(4, 4);
      for (int j : bins[i]) cond(j, j) = 1.0 / bins[i].size();
      Matrix proj = Matrix::Zero(2, 2);
      proj(i, i) = 1;
      acc += w[i] * kron(proj, cond);
    }
    best = std::min(best, trace_distance(rho, DensityOperator(HermitianOperator(acc))));
  }

  double bound = thermal_objective_distance_bound(rho, hs, beta, 4);
  CHECK(bound <= best + 1e-12);
}

TEST_CASE("distance bound separates the Bell state at infinite temperature") {
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  HamiltonianSpec hs = HamiltonianSpec::diagonal(Eigen::VectorXd::Zero(2));
  double bound = thermal_objective_distance_bound(DensityOperator::pure(bell), hs, 0.0, 64);
  CHECK(bound > 0.5);
}

TEST_CASE("equal-dimension coexistence requires a uniform shift") {
  Eigen::VectorXd e(2);
  e << 0.0, 1.0;
  HamiltonianSpec hs = HamiltonianSpec::diagonal(e);

  CoexistenceShift yes =
      check_equal_dim_coexistence(hs, hs.shifted(0.7), 1.0, 1e-9);
  CHECK(yes.coexists);
  CHECK(yes.shift == doctest::Approx(0.7).epsilon(1e-12));

  Eigen::VectorXd e2(2);
  e2 << 0.0, 1.3;
  CHECK_FALSE(
      check_equal_dim_coexistence(hs, HamiltonianSpec::diagonal(e2), 1.0, 1e-9).coexists);

  // Degenerate spectra pair up after sorting.
  HamiltonianSpec flat = HamiltonianSpec::diagonal(Eigen::VectorXd::Zero(2));
  CoexistenceShift deg = check_equal_dim_coexistence(
      flat, HamiltonianSpec::diagonal(Eigen::VectorXd::Constant(2, 0.4)), 1.0, 1e-9);
  CHECK(deg.coexists);
  CHECK(deg.shift == doctest::Approx(0.4).epsilon(1e-12));

  CHECK_THROWS(check_equal_dim_coexistence(
      hs, HamiltonianSpec::diagonal(Eigen::VectorXd::Zero(3)), 1.0, 1e-9));
}

TEST_CASE("exact thermal-objective state has thermal marginals everywhere") {
  RandomSource rng(34);
  Eigen::VectorXd e(2);
  e << 0.0, std::log(2.0);
  HamiltonianSpec hs(e, rng.haar_unitary(2));
  std::vector<SubenvSpec> subenvs{{0.7, rng.haar_unitary(2)}, {-0.3, rng.haar_unitary(2)}};
  const double beta = 1.0;

  DensityOperator rho = exact_thermal_objective_state(hs, subenvs, beta);
  CHECK(certify_sbs(rho, {2, 2, 2}).objective);

  CHECK(trace_distance(partial_trace(rho, {2, 2, 2}, {0}), gibbs_state(hs, beta)) < 1e-10);
  for (int k = 0; k < 2; ++k) {
    DensityOperator marginal = partial_trace(rho, {2, 2, 2}, {k + 1});
    DensityOperator want = gibbs_state(subenv_hamiltonian(hs, subenvs[k]), beta);
    CHECK(trace_distance(marginal, want) < 1e-10);
  }
}

TEST_CASE("exact thermal-objective state, classical case") {
  Eigen::VectorXd e(2);
  e << 0.0, std::log(2.0);
  HamiltonianSpec hs = HamiltonianSpec::diagonal(e);
  DensityOperator rho = exact_thermal_objective_state(hs, {{0.0, Matrix::Identity(2, 2)}}, 1.0);
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 2.0 / 3.0;
  want(3, 3) = 1.0 / 3.0;
  CHECK((rho.matrix() - want).cwiseAbs().maxCoeff() < 1e-14);

  // Infinite temperature, one subenvironment: equal-weight perfect correlation.
  DensityOperator flat = exact_thermal_objective_state(
      HamiltonianSpec::diagonal(Eigen::VectorXd::Zero(2)), {{0.0, Matrix::Identity(2, 2)}}, 0.0);
  Matrix want2 = Matrix::Zero(4, 4);
  want2(0, 0) = 0.5;
  want2(3, 3) = 0.5;
  CHECK((flat.matrix() - want2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("infinite temperature family counting") {
  CHECK(infinite_T_exact_states(2, 2).count == 2);
  CHECK(infinite_T_exact_states(2, 4).count == 6);
  InfiniteTFamily none = infinite_T_exact_states(2, 3);
  CHECK(none.count == 0);
  CHECK(none.distance_bound == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  for (int d_s = 1; d_s <= 3; ++d_s)
    for (int m = 1; m <= 2; ++m) {
      int d_e = m * d_s;
      unsigned long long enumerated = 0;
      enumerate_infinite_T_assignments(d_s, d_e, [&](const PartitionAssignment&) { ++enumerated; });
      CHECK(enumerated == infinite_T_exact_states(d_s, d_e).count);
    }
  CHECK_THROWS(enumerate_infinite_T_assignments(2, 14, [](const PartitionAssignment&) {}));
}

TEST_CASE("enumerated infinite-temperature states are objective and thermal") {
  int checked = 0;
  enumerate_infinite_T_assignments(2, 4, [&](const PartitionAssignment& groups) {
    DensityOperator rho = infinite_T_state(2, 4, groups);
    CHECK(certify_sbs(rho, {2, 4}).objective);
    CHECK(trace_distance(partial_trace(rho, {2, 4}, {0}), DensityOperator::maximally_mixed(2)) <
          1e-12);
    CHECK(trace_distance(partial_trace(rho, {2, 4}, {1}), DensityOperator::maximally_mixed(4)) <
          1e-12);
    ++checked;
  });
  CHECK(checked == 6);
}

TEST_CASE("global correlated Hamiltonians give objective Gibbs states when binding is strong") {
  RandomSource rng(35);
  GlobalHamiltonianParams params;
  params.energies = Eigen::VectorXd(2);
  params.energies << -45.0, -44.0;  // binding far below the uncoupled sector
  params.sys_vectors = rng.haar_unitary(2);
  params.env_vectors = rng.haar_unitary(2);

  HermitianOperator h =
      build_global_objective_hamiltonian(GlobalHamiltonianKind::correlated_pure, params);
  DensityOperator gamma = gibbs_state(HamiltonianSpec::from_operator(h), 1.0);
  CHECK(certify_sbs(gamma, {2, 2}).objective);

  // System marginal agrees with the Gibbs weights of the binding energies.
  Eigen::VectorXd w = gibbs_weights(params.energies, 1.0);
  DensityOperator want = DensityOperator::diagonal(w, params.sys_vectors);
  CHECK(trace_distance(partial_trace(gamma, {2, 2}, {0}), want) < 1e-10);
}

TEST_CASE("weighted global Hamiltonian matches its closed-form spectrum") {
  RandomSource rng(36);
  const double beta = 1.0;
  GlobalHamiltonianParams params;
  params.energies = Eigen::VectorXd(2);
  params.energies << -2.0, -1.0;
  params.sys_vectors = rng.haar_unitary(2);
  params.env_vectors = rng.haar_unitary(3);
  params.q = Eigen::MatrixXd::Zero(2, 3);
  params.q(0, 0) = 1.0;
  params.q(0, 1) = 0.8;
  params.q(1, 2) = 1.2;

  HermitianOperator h =
      build_global_objective_hamiltonian(GlobalHamiltonianKind::correlated_weighted, params);
  DensityOperator gamma = gibbs_state(HamiltonianSpec::from_operator(h), beta);

  // Closed forms: p_i = sum_b exp(-beta E_i q(i,b)) / Z over the full
  // product eigenbasis, and c_{a|i} the renormalized weights.
  Eigen::MatrixXd boltz(2, 3);
  double z = 0;
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 3; ++a) z += (boltz(i, a) = std::exp(-beta * params.energies[i] * params.q(i, a)));
  for (int i = 0; i < 2; ++i) {
    double p_i = boltz.row(i).sum() / z;
    Vector s = params.sys_vectors.col(i);
    Matrix rho_s = partial_trace_matrix(gamma.matrix(), {2, 3}, {0});
    double got = (s.adjoint() * rho_s * s)(0, 0).real();
    CHECK(got == doctest::Approx(p_i).epsilon(1e-10));

    // Conditional weights c_{a|i}: the i-block of the state renormalized.
    for (int a = 0; a < 3; ++a) {
      double c_ai = boltz(i, a) / boltz.row(i).sum();
      Matrix proj = kron(Matrix(s * s.adjoint()),
                         Matrix(params.env_vectors.col(a) * params.env_vectors.col(a).adjoint()));
      double weight = (gamma.matrix() * proj).trace().real() / (p_i);
      CHECK(weight == doctest::Approx(c_ai).epsilon(1e-10));
    }
  }

  // One vector per level reduces the weighted form to the pure form.
  GlobalHamiltonianParams one;
  one.energies = params.energies;
  one.sys_vectors = params.sys_vectors;
  one.env_vectors = rng.haar_unitary(3).leftCols(2);
  one.q = Eigen::MatrixXd::Zero(2, 2);
  one.q(0, 0) = 1.0;
  one.q(1, 1) = 1.0;
  HermitianOperator h_weighted =
      build_global_objective_hamiltonian(GlobalHamiltonianKind::correlated_weighted, one);
  GlobalHamiltonianParams pure = one;
  HermitianOperator h_pure =
      build_global_objective_hamiltonian(GlobalHamiltonianKind::correlated_pure, pure);
  CHECK((h_weighted.matrix() - h_pure.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  // Overlapping q supports are rejected.
  GlobalHamiltonianParams bad = params;
  bad.q(1, 0) = 0.5;
  CHECK_THROWS_WITH_AS(
      build_global_objective_hamiltonian(GlobalHamiltonianKind::correlated_weighted, bad),
      "global hamiltonian: q supports overlap", std::invalid_argument);
}

TEST_CASE("generic global Hamiltonians fail certification") {
  RandomSource rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    HermitianOperator h = rng.random_hermitian(4);
    DensityOperator gamma = gibbs_state(HamiltonianSpec::from_operator(h), 1.0);
    CHECK_FALSE(certify_sbs(gamma, {2, 2}).objective);
  }
}
