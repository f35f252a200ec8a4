#include "thermobj/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace thermobj {

namespace {

std::vector<double> boltzmann(const std::vector<double>& energies, double beta) {
  double h_min = *std::min_element(energies.begin(), energies.end());
  std::vector<double> w(energies.size());
  double z = 0;
  for (size_t i = 0; i < energies.size(); ++i) z += (w[i] = std::exp(-beta * (energies[i] - h_min)));
  for (auto& v : w) v /= z;
  return w;
}

}  // namespace

void DeviationModel::validate() const {
  if (base_energies.empty()) throw std::invalid_argument("DeviationModel: no energies");
  if (deviations.size() != base_energies.size())
    throw std::invalid_argument("DeviationModel: deviation list length mismatch");
  if (!(beta >= 0)) throw std::invalid_argument("DeviationModel: beta must be >= 0");
}

std::vector<double> DeviationModel::env_weights() const {
  validate();
  std::vector<double> h(base_energies.size());
  for (size_t i = 0; i < h.size(); ++i) h[i] = base_energies[i] + shift + deviations[i];
  return boltzmann(h, beta);
}

std::vector<double> DeviationModel::sys_weights() const {
  validate();
  return boltzmann(base_energies, beta);
}

double deviation_bound(const DeviationModel& model) {
  std::vector<double> we = model.env_weights();
  std::vector<double> ws = model.sys_weights();
  double sum = 0;
  for (size_t i = 0; i < we.size(); ++i) sum += std::abs(we[i] - ws[i]);
  return sum;
}

MacrofractionVariant parse_macrofraction_variant(const std::string& name) {
  if (name == "as_printed") return MacrofractionVariant::as_printed;
  if (name == "product_form") return MacrofractionVariant::product_form;
  if (name == "grouped_greedy") return MacrofractionVariant::grouped_greedy;
  throw std::invalid_argument("unknown macrofraction variant: " + name);
}

std::string to_string(MacrofractionVariant variant) {
  switch (variant) {
    case MacrofractionVariant::as_printed: return "as_printed";
    case MacrofractionVariant::product_form: return "product_form";
    case MacrofractionVariant::grouped_greedy: return "grouped_greedy";
  }
  return "unknown";
}

double macrofraction_bound(const std::vector<DeviationModel>& models,
                           MacrofractionVariant variant) {
  if (models.empty()) throw std::invalid_argument("macrofraction_bound: no models");
  const size_t n = models.size();
  const size_t d = models[0].base_energies.size();
  for (const auto& m : models) {
    m.validate();
    if (m.base_energies != models[0].base_energies || m.beta != models[0].beta)
      throw std::invalid_argument("macrofraction_bound: models must share energies and beta");
  }

  if (variant == MacrofractionVariant::grouped_greedy) {
    // The macrofraction acts as a single environment whose levels are all
    // index tuples, with energies summed across the factors. A partition of
    // a prefix group lifts to the full group with the same total (spread
    // each tuple over the appended factor), so the best prefix grouping is
    // always realizable: take the running minimum over prefixes.
    std::vector<double> probs = models[0].sys_weights();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> group_energies{0.0};
    for (size_t k = 0; k < n; ++k) {
      std::vector<double> extended;
      extended.reserve(group_energies.size() * d);
      for (double h : group_energies)
        for (size_t i = 0; i < d; ++i)
          extended.push_back(h + models[k].base_energies[i] + models[k].deviations[i]);
      group_energies = std::move(extended);
      best = std::min(best, greedy_partition(probs, group_energies, models[0].beta).total);
    }
    return best;
  }

  std::vector<std::vector<double>> we(n), ws(n);
  for (size_t k = 0; k < n; ++k) {
    we[k] = models[k].env_weights();
    ws[k] = models[k].sys_weights();
  }

  double sum = 0;
  std::vector<size_t> idx(n, 0);
  while (true) {
    double sys_prod = 1;
    for (size_t k = 0; k < n; ++k) sys_prod *= ws[k][idx[k]];
    double env_term;
    if (variant == MacrofractionVariant::product_form) {
      env_term = 1;
      for (size_t k = 0; k < n; ++k) env_term *= we[k][idx[k]];
    } else {  // as_printed: environment ratios added, as typeset
      env_term = 0;
      for (size_t k = 0; k < n; ++k) env_term += we[k][idx[k]];
    }
    sum += std::abs(env_term - sys_prod);
    size_t k = n;
    while (k > 0 && ++idx[k - 1] == d) idx[--k] = 0;
    if (k == 0) break;
  }
  return sum;
}

void GreedyResult::validate() const {
  double s = 0;
  for (double e : per_bin_error) s += e;
  if (std::abs(s - total) > 1e-12)
    throw std::logic_error("GreedyResult: total does not match per-bin errors");
}

GreedyResult greedy_partition(const std::vector<double>& probs,
                              const std::vector<double>& env_energies, double beta) {
  const int d_s = static_cast<int>(probs.size());
  const int d_e = static_cast<int>(env_energies.size());
  if (d_s < 1) throw std::invalid_argument("greedy_partition: empty probs");
  double psum = 0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("greedy_partition: negative probability");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    throw std::invalid_argument("greedy_partition: probs do not sum to 1");
  if (d_e < d_s)
    throw std::invalid_argument(
        "greedy_partition: d_E < d_S, cannot form d_S nonempty orthogonal conditionals");

  std::vector<double> w = boltzmann(env_energies, beta);

  // Candidate queue in descending weight. Each index lands in the bin with
  // the largest running deficit p_k - W_k, except that the trailing indices
  // are reserved for bins that are still empty, so every bin ends nonempty.
  std::vector<int> queue(d_e);
  std::iota(queue.begin(), queue.end(), 0);
  std::stable_sort(queue.begin(), queue.end(), [&](int a, int b) { return w[a] > w[b]; });

  std::vector<std::vector<int>> bins(d_s);
  std::vector<double> filled(d_s, 0.0);
  int empty_bins = d_s;
  for (size_t pos = 0; pos < queue.size(); ++pos) {
    const int j = queue[pos];
    const int remaining_after = static_cast<int>(queue.size() - pos) - 1;
    const bool must_fill_empty = remaining_after < empty_bins;
    int arg = -1;
    for (int k = 0; k < d_s; ++k) {
      if (must_fill_empty && !bins[k].empty()) continue;
      if (arg < 0 || probs[k] - filled[k] > probs[arg] - filled[arg]) arg = k;
    }
    if (bins[arg].empty()) --empty_bins;
    bins[arg].push_back(j);
    filled[arg] += w[j];
  }

  // Rebalance until every bin sits within one maximum step w_max of its
  // target, which caps the total at d_S * w_max. While any imbalance
  // exceeds w_max, some single-index move between that bin and an
  // opposite-signed bin strictly shrinks the total, so the pass
  // terminates; the iteration cap is a hard backstop.
  const double w_max = *std::max_element(w.begin(), w.end());
  auto abs_error = [&](int k) { return std::abs(probs[k] - filled[k]); };
  for (int pass = 0; pass < 8 * d_e * d_s; ++pass) {
    int worst = 0;
    for (int k = 1; k < d_s; ++k)
      if (abs_error(k) > abs_error(worst)) worst = k;
    if (abs_error(worst) <= w_max * (1.0 + 1e-12)) break;

    const bool starving = probs[worst] > filled[worst];
    int best_from = -1, best_to = -1;
    size_t best_pos = 0;
    double best_delta = -1e-15;
    for (int other = 0; other < d_s; ++other) {
      if (other == worst) continue;
      const int from = starving ? other : worst;
      const int to = starving ? worst : other;
      if (bins[from].size() <= 1) continue;  // bins stay nonempty
      for (size_t pos = 0; pos < bins[from].size(); ++pos) {
        const double wj = w[bins[from][pos]];
        const double delta = std::abs(probs[from] - (filled[from] - wj)) - abs_error(from) +
                             std::abs(probs[to] - (filled[to] + wj)) - abs_error(to);
        if (delta < best_delta) {
          best_delta = delta;
          best_from = from;
          best_to = to;
          best_pos = pos;
        }
      }
    }
    if (best_from < 0) break;
    const int moved = bins[best_from][best_pos];
    bins[best_from].erase(bins[best_from].begin() + best_pos);
    filled[best_from] -= w[moved];
    bins[best_to].push_back(moved);
    filled[best_to] += w[moved];
  }

  GreedyResult out;
  out.assignment.sets = std::move(bins);
  out.per_bin_error.resize(d_s);
  for (int k = 0; k < d_s; ++k) {
    out.per_bin_error[k] = std::abs(probs[k] - filled[k]);
    out.total += out.per_bin_error[k];
  }
  out.unassigned_weight = 0;
  return out;
}

double partition_function_bound(int d_S, const std::vector<double>& env_energies, double beta) {
  if (env_energies.empty()) throw std::invalid_argument("partition_function_bound: no energies");
  double h_min = *std::min_element(env_energies.begin(), env_energies.end());
  double z = 0;
  for (double h : env_energies) z += std::exp(-beta * (h - h_min));
  return static_cast<double>(d_S) / z;
}

std::pair<SBSState, double> assemble_greedy_state(const GreedyResult& result,
                                                  const HamiltonianSpec& sys,
                                                  const HamiltonianSpec& env, double beta) {
  const int d_s = sys.dim();
  const int d_e = env.dim();
  if (static_cast<int>(result.assignment.sets.size()) != d_s)
    throw std::invalid_argument("assemble_greedy_state: assignment does not match system dim");
  result.assignment.validate(d_e);
  for (const auto& set : result.assignment.sets)
    if (set.empty()) throw std::invalid_argument("assemble_greedy_state: empty bin");

  InverseTemperature ibeta(beta);
  Eigen::VectorXd p = gibbs_weights(sys.energies(), ibeta);
  Eigen::VectorXd w = gibbs_weights(env.energies(), ibeta);

  std::vector<std::vector<DensityOperator>> cond(1);
  for (int i = 0; i < d_s; ++i) {
    double s = 0;
    for (int j : result.assignment.sets[i]) s += w[j];
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(d_e);
    for (int j : result.assignment.sets[i]) weights[j] = w[j] / s;
    cond[0].push_back(DensityOperator::diagonal(weights, env.basis()));
  }

  std::vector<double> probs(p.data(), p.data() + d_s);
  SBSState state(probs, sys.basis(), cond);

  // Distance of the broadcast environment marginal from the thermal state.
  Matrix marginal = Matrix::Zero(d_e, d_e);
  for (int i = 0; i < d_s; ++i) marginal += p[i] * cond[0][i].matrix();
  DensityOperator gamma_e = gibbs_state(env, ibeta);
  double achieved = trace_norm(HermitianOperator(Matrix(marginal - gamma_e.matrix())));
  return {std::move(state), achieved};
}

}  // namespace thermobj
