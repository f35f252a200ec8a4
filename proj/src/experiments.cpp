#include "thermobj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "thermobj/rng.hpp"

namespace thermobj {

std::string to_string(SweepKind kind) {
  return kind == SweepKind::sigma_sweep ? "sigma_sweep" : "macrofraction_sweep";
}

SweepKind parse_sweep_kind(const std::string& name) {
  if (name == "sigma_sweep") return SweepKind::sigma_sweep;
  if (name == "macrofraction_sweep") return SweepKind::macrofraction_sweep;
  throw std::invalid_argument("unknown sweep kind: " + name);
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  if (grid.empty()) throw std::invalid_argument("ExperimentConfig: empty grid");
  for (size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("ExperimentConfig: grid must be strictly increasing");
  if (static_cast<int>(base_energies.size()) != d_S)
    throw std::invalid_argument("ExperimentConfig: base energies must have d_S entries");
  if (kind == SweepKind::macrofraction_sweep) {
    if (variants.empty()) throw std::invalid_argument("ExperimentConfig: no variants requested");
    for (double g : grid)
      if (g < 1 || g != std::floor(g))
        throw std::invalid_argument("ExperimentConfig: N_E grid must hold positive integers");
  }
  if (!(sigma >= 0)) throw std::invalid_argument("ExperimentConfig: sigma must be >= 0");
  if (!(beta >= 0)) throw std::invalid_argument("ExperimentConfig: beta must be >= 0");
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

// Deterministic reduction over trials: results land in preallocated
// slots, so the thread count never changes the outcome.
template <typename Fn>
void for_each_trial(int trials, int threads, Fn&& fn) {
  if (threads <= 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += threads) fn(t);
    });
  for (auto& th : pool) th.join();
}

struct MeanStderr {
  double mean = 0;
  double stderr_of_mean = 0;
};

MeanStderr reduce(const std::vector<double>& values) {
  MeanStderr out;
  const double n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_of_mean = std::sqrt(ss / (n - 1)) / std::sqrt(n);
  }
  return out;
}

}  // namespace

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind) << " beta=" << format_double(beta) << " d_S=" << d_S
     << " d_E=" << d_E << " trials=" << trials << " seed=" << seed << " E=" << join(base_energies);
  if (kind == SweepKind::macrofraction_sweep) {
    os << " sigma=" << format_double(sigma) << " variants=";
    for (size_t i = 0; i < variants.size(); ++i) os << (i ? "," : "") << to_string(variants[i]);
  }
  os << " grid=" << join(grid);
  return os.str();
}

SweepTable run_sigma_sweep(const ExperimentConfig& cfg, int threads,
                           std::vector<TrialRecord>* records) {
  if (cfg.kind != SweepKind::sigma_sweep)
    throw std::invalid_argument("run_sigma_sweep: config kind mismatch");
  cfg.validate();
  if (records) records->assign(cfg.grid.size() * cfg.trials, {});

  SweepTable table;
  table.grid_label = "sigma";
  for (size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const double sigma = cfg.grid[gi];
    std::vector<double> bounds(cfg.trials);
    for_each_trial(cfg.trials, threads, [&](int t) {
      TrialRng rng(cfg.seed, gi, t);
      DeviationModel model;
      model.base_energies = cfg.base_energies;
      model.beta = cfg.beta;
      model.shift = 0;
      model.deviations.resize(cfg.d_S);
      for (int i = 0; i < cfg.d_S; ++i) model.deviations[i] = rng.normal(sigma);
      bounds[t] = deviation_bound(model);
      if (records)
        (*records)[gi * cfg.trials + t] = {sigma, t, model.deviations, bounds[t]};
    });
    MeanStderr ms = reduce(bounds);
    table.rows.push_back(
        {sigma, ms.mean, ms.stderr_of_mean, "deviation", cfg.trials, cfg.beta, cfg.seed});
  }
  return table;
}

SweepTable run_macrofraction_sweep(const ExperimentConfig& cfg, int threads,
                                   std::vector<TrialRecord>* records) {
  if (cfg.kind != SweepKind::macrofraction_sweep)
    throw std::invalid_argument("run_macrofraction_sweep: config kind mismatch");
  cfg.validate();
  if (records) records->assign(cfg.grid.size() * cfg.trials, {});

  SweepTable table;
  table.grid_label = "N_E";
  for (size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const int n_env = static_cast<int>(cfg.grid[gi]);
    std::vector<std::vector<double>> bounds(cfg.variants.size(),
                                            std::vector<double>(cfg.trials));
    for_each_trial(cfg.trials, threads, [&](int t) {
      TrialRng rng(cfg.seed, gi, t);
      std::vector<DeviationModel> models(n_env);
      for (int k = 0; k < n_env; ++k) {
        models[k].base_energies = cfg.base_energies;
        models[k].beta = cfg.beta;
        models[k].shift = 0;
        models[k].deviations.resize(cfg.d_S);
        for (int i = 0; i < cfg.d_S; ++i) models[k].deviations[i] = rng.normal(cfg.sigma);
      }
      for (size_t v = 0; v < cfg.variants.size(); ++v)
        bounds[v][t] = macrofraction_bound(models, cfg.variants[v]);
      if (records) {
        TrialRecord& rec = (*records)[gi * cfg.trials + t];
        rec.grid_value = n_env;
        rec.trial_index = t;
        for (const auto& m : models)
          rec.deviations.insert(rec.deviations.end(), m.deviations.begin(), m.deviations.end());
        rec.bound = bounds[0][t];
      }
    });
    for (size_t v = 0; v < cfg.variants.size(); ++v) {
      MeanStderr ms = reduce(bounds[v]);
      table.rows.push_back({static_cast<double>(n_env), ms.mean, ms.stderr_of_mean,
                            to_string(cfg.variants[v]), cfg.trials, cfg.beta, cfg.seed});
    }
  }
  return table;
}

void emit_csv(const SweepTable& table, const std::string& path, const std::string& config_echo) {
  if (table.rows.empty()) throw std::invalid_argument("emit_csv: empty table");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_csv: cannot write " + path);
  if (!config_echo.empty()) os << "# " << config_echo << "\n";
  os << "grid_value,mean,stderr,variant,trials,beta,seed\n";
  for (const auto& r : table.rows)
    os << format_double(r.grid_value) << "," << format_double(r.mean) << ","
       << format_double(r.stderr_of_mean) << "," << r.variant << "," << r.trials << ","
       << format_double(r.beta) << "," << r.seed << "\n";
  if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_svg_lineplot(const SweepTable& table, const std::string& path) {
  if (table.rows.empty()) throw std::invalid_argument("emit_svg_lineplot: empty table");

  std::vector<std::string> variants;
  for (const auto& r : table.rows)
    if (std::find(variants.begin(), variants.end(), r.variant) == variants.end())
      variants.push_back(r.variant);

  double x_min = table.rows[0].grid_value, x_max = x_min;
  double y_min = 0.0, y_max = table.rows[0].mean;
  for (const auto& r : table.rows) {
    x_min = std::min(x_min, r.grid_value);
    x_max = std::max(x_max, r.grid_value);
    y_max = std::max(y_max, r.mean);
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;

  const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("emit_svg_lineplot: cannot write " + path);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  // Axes with five ticks each.
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = x_min + (x_max - x_min) * i / 4.0;
    double yv = y_min + (y_max - y_min) * i / 4.0;
    os << "<line x1=\"" << format_double(sx(xv)) << "\" y1=\"" << h - mb << "\" x2=\""
       << format_double(sx(xv)) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << format_double(sx(xv)) << "\" y=\"" << h - mb + 20
       << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double(xv) << "</text>\n";
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << format_double(sy(yv)) << "\" x2=\"" << ml
       << "\" y2=\"" << format_double(sy(yv)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << format_double(sy(yv) + 4)
       << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(yv) << "</text>\n";
  }
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
     << "\" font-size=\"14\" text-anchor=\"middle\">" << table.grid_label << "</text>\n";
  os << "<text x=\"15\" y=\"" << (mt + h - mb) / 2
     << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
     << (mt + h - mb) / 2 << ")\">mean bound</text>\n";

  for (size_t v = 0; v < variants.size(); ++v) {
    os << "<polyline fill=\"none\" stroke=\"" << palette[v % 5] << "\" stroke-width=\"1.5\""
       << " data-variant=\"" << variants[v] << "\" points=\"";
    bool first = true;
    for (const auto& r : table.rows) {
      if (r.variant != variants[v]) continue;
      if (!first) os << " ";
      os << format_double(sx(r.grid_value)) << "," << format_double(sy(r.mean));
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << w - mr - 5 << "\" y=\"" << mt + 15 + 16 * v
       << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << palette[v % 5] << "\">"
       << variants[v] << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw std::runtime_error("emit_svg_lineplot: write failed for " + path);
}

}  // namespace thermobj
