// Command-line front end: state certification, channel application,
// distance bounds with their brute-force oracles, and Monte Carlo sweeps.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "thermobj/bounds.hpp"
#include "thermobj/channels.hpp"
#include "thermobj/experiments.hpp"
#include "thermobj/io.hpp"
#include "thermobj/oracle.hpp"
#include "thermobj/sbs.hpp"

namespace {

using namespace thermobj;

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

// Flat key=value instance/config files; '#' starts a comment line.
std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bad line in " + path + ": " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::string require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("missing key '" + key + "'");
  return it->second;
}

std::vector<DeviationModel> models_from_kv(const std::map<std::string, std::string>& kv) {
  std::vector<double> energies = parse_list(require(kv, "energies"));
  double beta = std::stod(require(kv, "beta"));
  double shift = kv.count("shift") ? std::stod(kv.at("shift")) : 0.0;
  std::vector<DeviationModel> models;
  if (kv.count("deviations")) {
    DeviationModel m{energies, shift, parse_list(kv.at("deviations")), beta};
    m.validate();
    models.push_back(std::move(m));
  }
  for (int k = 1; kv.count("deviations_" + std::to_string(k)); ++k) {
    double sk = kv.count("shift_" + std::to_string(k))
                    ? std::stod(kv.at("shift_" + std::to_string(k)))
                    : shift;
    DeviationModel m{energies, sk, parse_list(kv.at("deviations_" + std::to_string(k))), beta};
    m.validate();
    models.push_back(std::move(m));
  }
  if (models.empty()) throw std::runtime_error("instance has no deviations");
  return models;
}

DensityOperator diagonal_from_weights(const std::vector<double>& w) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  return DensityOperator::diagonal(v, Matrix::Identity(w.size(), w.size()));
}

int run_certify(const std::string& state_path, const std::string& dims_csv, double tol) {
  DensityOperator rho = read_density(state_path);
  CertifyResult res = certify_sbs(rho, parse_int_list(dims_csv), tol);
  if (res.objective) {
    std::cout << "yes\n";
    std::cout << "indices: " << res.state->index_count() << "\n";
    std::cout << "probs:";
    for (double p : res.state->probs) std::cout << " " << p;
    std::cout << "\n";
  } else {
    std::cout << "no\n";
    std::cout << "witness: " << res.witness << " (magnitude " << res.magnitude << ")\n";
  }
  return 0;
}

int run_bound(const std::string& kind, const std::string& variant, const std::string& instance,
              bool with_oracle) {
  auto kv = parse_kv_file(instance);
  if (kind == "deviation") {
    auto models = models_from_kv(kv);
    double tested = deviation_bound(models[0]);
    if (!with_oracle) {
      std::cout << "deviation_bound " << tested << "\n";
      return 0;
    }
    double oracle =
        direct_trace_distance(diagonal_from_weights(models[0].env_weights()),
                              diagonal_from_weights(models[0].sys_weights()));
    std::cout << OracleReport("deviation " + instance, oracle, tested).to_text();
  } else if (kind == "macrofraction") {
    auto models = models_from_kv(kv);
    MacrofractionVariant v = parse_macrofraction_variant(variant);
    double tested = macrofraction_bound(models, v);
    if (!with_oracle) {
      std::cout << "macrofraction_bound " << to_string(v) << " " << tested << "\n";
      return 0;
    }
    // The oracle evaluates the tensor-product trace distance directly.
    Matrix env = Matrix::Ones(1, 1), sys = Matrix::Ones(1, 1);
    for (const auto& m : models) {
      env = kron(env, diagonal_from_weights(m.env_weights()).matrix());
      sys = kron(sys, diagonal_from_weights(m.sys_weights()).matrix());
    }
    double oracle = direct_trace_distance(DensityOperator(HermitianOperator(env)),
                                          DensityOperator(HermitianOperator(sys)));
    std::cout << OracleReport("macrofraction(product) " + instance, oracle, tested).to_text();
  } else if (kind == "greedy") {
    std::vector<double> probs = parse_list(require(kv, "probs"));
    std::vector<double> h = parse_list(require(kv, "env_energies"));
    double beta = std::stod(require(kv, "beta"));
    GreedyResult res = greedy_partition(probs, h, beta);
    if (!with_oracle) {
      std::cout << "greedy_total " << res.total << "\n";
      for (size_t k = 0; k < res.assignment.sets.size(); ++k) {
        std::cout << "bin " << k << " (error " << res.per_bin_error[k] << "):";
        for (int j : res.assignment.sets[k]) std::cout << " " << j;
        std::cout << "\n";
      }
      return 0;
    }
    // Boltzmann weights for the oracle's exhaustive search.
    Eigen::VectorXd he = Eigen::Map<const Eigen::VectorXd>(h.data(), h.size());
    Eigen::VectorXd w = gibbs_weights(he, InverseTemperature(beta));
    auto [best, optimal] =
        brute_force_partition(probs, std::vector<double>(w.data(), w.data() + w.size()));
    std::cout << OracleReport("greedy " + instance, optimal, res.total).to_text();
  } else if (kind == "theorem1") {
    std::vector<double> h = parse_list(require(kv, "env_energies"));
    double beta = std::stod(require(kv, "beta"));
    int d_s = kv.count("d_s") ? std::stoi(kv.at("d_s"))
                              : static_cast<int>(parse_list(require(kv, "probs")).size());
    double tested = partition_function_bound(d_s, h, beta);
    if (!with_oracle) {
      std::cout << "theorem1_bound " << tested << "\n";
      return 0;
    }
    std::vector<double> probs = kv.count("probs")
                                    ? parse_list(kv.at("probs"))
                                    : std::vector<double>(d_s, 1.0 / d_s);
    double greedy = greedy_partition(probs, h, beta).total;
    std::cout << OracleReport("theorem1 " + instance, greedy, tested).to_text();
  } else {
    throw std::runtime_error("unknown bound kind: " + kind);
  }
  return 0;
}

int run_channel(const std::string& kind, const std::string& in_path, const std::string& out_path,
                const std::string& target_path, double p, double eta, int iters,
                const std::string& a_csv, const std::string& t_csv) {
  DensityOperator rho = read_density(in_path);
  DensityOperator out = rho;
  if (kind == "point") {
    PointChannel ch(read_density(target_path));
    out = ch.apply(rho);
  } else if (kind == "cnot") {
    out = cnot_broadcast(rho);
  } else if (kind == "gad") {
    KrausChannel ch = gad_channel(GADParams(p, eta));
    for (int i = 0; i < std::max(1, iters); ++i) out = ch.apply(out);
  } else if (kind == "affine") {
    std::vector<double> av = parse_list(a_csv), tv = parse_list(t_csv);
    if (av.size() != 9 || tv.size() != 3)
      throw std::runtime_error("affine: need --A with 9 entries and --t with 3");
    Eigen::Matrix3d a;
    a << av[0], av[1], av[2], av[3], av[4], av[5], av[6], av[7], av[8];
    AffineBlochChannel ch(a, Eigen::Vector3d(tv[0], tv[1], tv[2]));
    BlochVector r = to_bloch(rho);
    for (int i = 0; i < std::max(1, iters); ++i) r = ch.apply(r);
    out = from_bloch(r);
  } else {
    throw std::runtime_error("unknown channel kind: " + kind);
  }
  write_density(out_path, out);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_experiments(const std::string& config_path, const std::string& out_dir, int threads) {
  auto kv = parse_kv_file(config_path);
  ExperimentConfig cfg;
  cfg.kind = parse_sweep_kind(require(kv, "kind"));
  if (kv.count("beta")) cfg.beta = std::stod(kv.at("beta"));
  if (kv.count("d_s")) cfg.d_S = std::stoi(kv.at("d_s"));
  if (kv.count("d_e")) cfg.d_E = std::stoi(kv.at("d_e"));
  cfg.grid = parse_list(require(kv, "grid"));
  if (kv.count("trials")) cfg.trials = std::stoi(kv.at("trials"));
  if (kv.count("sigma")) cfg.sigma = std::stod(kv.at("sigma"));
  if (kv.count("energies")) cfg.base_energies = parse_list(kv.at("energies"));
  if (kv.count("seed")) cfg.seed = std::stoull(kv.at("seed"));
  if (kv.count("variants")) {
    cfg.variants.clear();
    std::stringstream ss(kv.at("variants"));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.variants.push_back(parse_macrofraction_variant(item));
  }
  cfg.validate();

  std::filesystem::create_directories(out_dir);
  SweepTable table = cfg.kind == SweepKind::sigma_sweep ? run_sigma_sweep(cfg, threads)
                                                        : run_macrofraction_sweep(cfg, threads);
  std::string base = out_dir + "/" + to_string(cfg.kind);
  emit_csv(table, base + ".csv", cfg.echo());
  emit_svg_lineplot(table, base + ".svg");
  std::cout << "wrote " << base << ".csv and " << base << ".svg\n";
  return 0;
}

int run_gibbs(const std::string& energies_csv, double beta, bool infinite,
              const std::string& out_path) {
  std::vector<double> e = parse_list(energies_csv);
  HamiltonianSpec h = HamiltonianSpec::diagonal(Eigen::Map<const Eigen::VectorXd>(e.data(), e.size()));
  DensityOperator rho = gibbs_state(h, infinite ? InverseTemperature::infinite()
                                                : InverseTemperature(beta));
  write_density(out_path, rho);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermobj: thermal and objective states of finite system-environment pairs"};
  app.require_subcommand(1);

  // certify
  auto* certify = app.add_subcommand("certify", "certify spectrum broadcast structure");
  std::string state_path, dims_csv;
  double tol = 1e-8;
  certify->add_option("--state", state_path, "state file (interchange format)")->required();
  certify->add_option("--dims", dims_csv, "factor dims, system first (e.g. 2,2)")->required();
  certify->add_option("--tol", tol, "certification tolerance");

  // channel apply
  auto* channel = app.add_subcommand("channel", "apply a channel to a state");
  auto* apply = channel->add_subcommand("apply", "apply a channel");
  std::string ch_kind, in_path, out_path, target_path, a_csv, t_csv;
  double p = 0.5, eta = 0.5;
  int iters = 1;
  apply->add_option("--kind", ch_kind, "point|cnot|gad|affine")->required();
  apply->add_option("--in", in_path, "input state file")->required();
  apply->add_option("--out", out_path, "output state file")->required();
  apply->add_option("--target", target_path, "target state (point channel)");
  apply->add_option("--p", p, "GAD temperature parameter");
  apply->add_option("--eta", eta, "GAD damping parameter");
  apply->add_option("--iters", iters, "number of applications");
  apply->add_option("--A", a_csv, "affine matrix, 9 entries row-major");
  apply->add_option("--t", t_csv, "affine shift, 3 entries");

  // bound / oracle
  std::string b_kind, b_variant = "product_form", b_instance;
  for (const char* name : {"bound", "oracle"}) {
    auto* cmd = app.add_subcommand(name, std::string(name) == "bound"
                                             ? "evaluate a distance bound"
                                             : "brute-force oracle report for a bound");
    cmd->add_option("--kind", b_kind, "deviation|macrofraction|greedy|theorem1")->required();
    cmd->add_option("--variant", b_variant, "macrofraction variant");
    cmd->add_option("--instance", b_instance, "key=value instance file")->required();
  }

  // experiments run
  auto* experiments = app.add_subcommand("experiments", "Monte Carlo sweeps");
  auto* run = experiments->add_subcommand("run", "run a sweep from a config file");
  std::string config_path, exp_out;
  int threads = 1;
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--out", exp_out, "output directory")->required();
  run->add_option("--threads", threads, "worker threads (result is thread-count independent)");

  // gibbs helper
  auto* gibbs_cmd = app.add_subcommand("gibbs", "write a Gibbs state for a diagonal Hamiltonian");
  std::string g_energies, g_out;
  double g_beta = 1.0;
  bool g_inf = false;
  gibbs_cmd->add_option("--energies", g_energies, "energy list (comma separated)")->required();
  gibbs_cmd->add_option("--beta", g_beta, "inverse temperature");
  gibbs_cmd->add_flag("--infinite", g_inf, "zero-temperature limit");
  gibbs_cmd->add_option("--out", g_out, "output state file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return run_certify(state_path, dims_csv, tol);
    if (channel->parsed() && apply->parsed())
      return run_channel(ch_kind, in_path, out_path, target_path, p, eta, iters, a_csv, t_csv);
    if (app.get_subcommand("bound")->parsed())
      return run_bound(b_kind, b_variant, b_instance, false);
    if (app.get_subcommand("oracle")->parsed())
      return run_bound(b_kind, b_variant, b_instance, true);
    if (experiments->parsed() && run->parsed())
      return run_experiments(config_path, exp_out, threads);
    if (gibbs_cmd->parsed()) return run_gibbs(g_energies, g_beta, g_inf, g_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
