#pragma once

// Graded time meshes t_j = T (j/N)^r. r = 1 is uniform; r > 1 clusters nodes
// at t = 0, which restores accuracy against the (t - tau)^{alpha-1} kernel and
// the initial layer of mildly regular data.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tfpp {

struct TimeGrid {
  double horizon = 0.0;
  int segments = 0;      // N; nodes.size() == N + 1
  double grading = 1.0;  // r
  std::vector<double> nodes;
};

inline TimeGrid build_time_grid(double T, int N, double r) {
  if (!(T > 0.0)) throw std::invalid_argument("build_time_grid: horizon must be positive");
  if (N < 2) throw std::invalid_argument("build_time_grid: need at least 2 segments");
  if (!(r >= 1.0)) throw std::invalid_argument("build_time_grid: grading must be >= 1");
  TimeGrid grid;
  grid.horizon = T;
  grid.segments = N;
  grid.grading = r;
  grid.nodes.resize(N + 1);
  for (int j = 0; j <= N; ++j) grid.nodes[j] = T * std::pow(double(j) / N, r);
  grid.nodes[0] = 0.0;
  grid.nodes[N] = T;  // no rounding drift at the right endpoint
  return grid;
}

// Extension meshes concatenate a solved prefix with fresh nodes, so they are
// not of the (j/N)^r form; the grading field then records the suffix grading.
inline TimeGrid make_time_grid_from_nodes(std::vector<double> nodes, double r = 1.0) {
  if (nodes.size() < 2) throw std::invalid_argument("make_time_grid_from_nodes: need at least 2 nodes");
  if (nodes.front() != 0.0) throw std::invalid_argument("make_time_grid_from_nodes: first node must be 0");
  for (std::size_t j = 1; j < nodes.size(); ++j)
    if (!(nodes[j] > nodes[j - 1]))
      throw std::invalid_argument("make_time_grid_from_nodes: nodes must increase strictly");
  TimeGrid grid;
  grid.horizon = nodes.back();
  grid.segments = static_cast<int>(nodes.size()) - 1;
  grid.grading = r;
  grid.nodes = std::move(nodes);
  return grid;
}

}  // namespace tfpp
