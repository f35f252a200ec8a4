#include "thermobj/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace thermobj {

std::string OracleReport::to_text() const {
  std::ostringstream os;
  os.precision(12);
  os << "oracle report\n"
     << "instance: " << instance << "\n"
     << "oracle:   " << oracle_value << "\n"
     << "tested:   " << tested_value << "\n"
     << "gap:      " << gap << "\n";
  return os.str();
}

std::pair<PartitionAssignment, double> brute_force_partition(const std::vector<double>& probs,
                                                             const std::vector<double>& weights) {
  const int d_s = static_cast<int>(probs.size());
  const int d_e = static_cast<int>(weights.size());
  if (d_e > 12) throw std::invalid_argument("brute_force_partition: oracle scale exceeded");
  if (d_s < 1 || d_e < d_s) throw std::invalid_argument("brute_force_partition: bad dimensions");

  std::vector<int> code(d_e, 0), best_code;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> filled(d_s, 0.0);
    std::vector<int> count(d_s, 0);
    for (int j = 0; j < d_e; ++j) {
      filled[code[j]] += weights[j];
      ++count[code[j]];
    }
    bool nonempty = true;
    for (int k = 0; k < d_s; ++k) nonempty &= count[k] > 0;
    if (nonempty) {
      double total = 0;
      for (int k = 0; k < d_s; ++k) total += std::abs(probs[k] - filled[k]);
      if (total < best) {
        best = total;
        best_code = code;
      }
    }
    int j = d_e - 1;
    while (j >= 0 && ++code[j] == d_s) code[j--] = 0;
    if (j < 0) break;
  }

  PartitionAssignment out;
  out.sets.assign(d_s, {});
  for (int j = 0; j < d_e; ++j) out.sets[best_code[j]].push_back(j);
  return {std::move(out), best};
}

double direct_trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("direct_trace_distance: dim mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(a.matrix() - b.matrix()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

unsigned long long enumerate_infinite_T_count(int d_S, int d_E) {
  if (d_E > 8) throw std::invalid_argument("enumerate_infinite_T_count: oracle scale exceeded");
  if (d_S < 1 || d_E < 1) throw std::invalid_argument("enumerate_infinite_T_count: bad dims");

  // Uniform weights 1/d_E; a valid family member gives every group total
  // weight 1/d_S exactly, i.e. equal group sizes.
  if (d_E % d_S != 0) return 0;
  const int m = d_E / d_S;
  unsigned long long count = 0;
  std::vector<int> code(d_E, 0);
  while (true) {
    std::vector<int> sizes(d_S, 0);
    for (int j = 0; j < d_E; ++j) ++sizes[code[j]];
    bool balanced = true;
    for (int k = 0; k < d_S; ++k) balanced &= sizes[k] == m;
    if (balanced) ++count;
    int j = d_E - 1;
    while (j >= 0 && ++code[j] == d_S) code[j--] = 0;
    if (j < 0) break;
  }
  return count;
}

}  // namespace thermobj
