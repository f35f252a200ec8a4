// Independent brute-force verifiers: exhaustive partition search, direct
// trace-distance evaluation, and exhaustive counting of the
// infinite-temperature family. No dependence on the bounds module.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "thermobj/operators.hpp"
#include "thermobj/sbs.hpp"

namespace thermobj {

struct OracleReport {
  std::string instance;
  double oracle_value = 0;
  double tested_value = 0;
  double gap = 0;

  OracleReport(std::string instance_in, double oracle_in, double tested_in)
      : instance(std::move(instance_in)),
        oracle_value(oracle_in),
        tested_value(tested_in),
        gap(std::abs(oracle_in - tested_in)) {}

  std::string to_text() const;
};

/// Exhaustive minimum of sum_k |p_k - W_k| over all full assignments of
/// weights to bins (bins nonempty). Limited to d_E <= 12.
std::pair<PartitionAssignment, double> brute_force_partition(const std::vector<double>& probs,
                                                             const std::vector<double>& weights);

/// Trace distance via full eigendecomposition; the oracle for every
/// closed-form bound evaluated on assembled operators.
double direct_trace_distance(const DensityOperator& a, const DensityOperator& b);

/// Counts assignments of d_E uniform-weight environment eigenvectors into
/// d_S groups of equal total weight by exhaustive search (d_E <= 8).
unsigned long long enumerate_infinite_T_count(int d_S, int d_E);

}  // namespace thermobj
