#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/space.hpp"

namespace bvlab {

struct PVariation {
  double var = 0.0;
  std::vector<std::size_t> partition;  // grid indices 0 = i_0 < ... < i_m = N
};

/// Grid-restricted Wiener p-variation of x_0..x_N: the maximum over all
/// sub-partitions of the grid of sum_j norm(x_{i_j} - x_{i_{j-1}})^p.
///
/// DP: V[0] = 0, V[j] = max_{i<j} V[i] + norm(x_j - x_i)^p, answer V[N].
/// O(N^2) distance evaluations. Ties resolve to the smallest predecessor.
inline PVariation wiener_p_variation_grid(std::span<const SpaceElement> grid, double p) {
  if (grid.empty()) throw StructuralError("p-variation of an empty grid");
  if (!(p >= 1.0)) throw ParameterError("p-variation exponent must be >= 1");
  const std::size_t n = grid.size();
  std::vector<double> best(n, 0.0);
  std::vector<std::size_t> from(n, 0);
  for (std::size_t j = 1; j < n; ++j) {
    double b = -1.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < j; ++i) {
      const double v = best[i] + power(distance(grid[j], grid[i]), p);
      if (v > b) {
        b = v;
        arg = i;
      }
    }
    best[j] = b;
    from[j] = arg;
  }
  PVariation out;
  out.var = best[n - 1];
  for (std::size_t j = n - 1;; j = from[j]) {
    out.partition.push_back(j);
    if (j == 0) break;
  }
  std::reverse(out.partition.begin(), out.partition.end());
  return out;
}

}  // namespace bvlab
