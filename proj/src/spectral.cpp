#include "pcs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "pcs/errors.hpp"
#include "pcs/prf.hpp"

namespace pcs {

double cheeger_lower_bound(const Graph& h, std::span<const double> weights) {
  const int n = h.num_vertices();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("cheeger_lower_bound needs one weight per vertex");
  }
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  int m = 0;
  for (int v = 0; v < n; ++v) {
    if (weights[v] > 0.0) local[v] = m++;
  }
  if (m < 2) return std::numeric_limits<double>::infinity();

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
  for (const Edge& e : h.edges()) {
    if (e.is_loop()) continue;
    int a = local[e.u];
    int b = local[e.v];
    if (a < 0 || b < 0) continue;
    lap(a, a) += e.w;
    lap(b, b) += e.w;
    lap(a, b) -= e.w;
    lap(b, a) -= e.w;
  }
  Eigen::VectorXd inv_sqrt(m);
  for (int v = 0; v < n; ++v) {
    if (local[v] >= 0) inv_sqrt(local[v]) = 1.0 / std::sqrt(weights[v]);
  }
  Eigen::MatrixXd normalized = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericFailure("eigenvalue solver did not converge");
  return std::max(0.0, solver.eigenvalues()(1)) / 2.0;
}

EigenvectorEstimate second_eigenvector(const Graph& h, std::span<const double> weights,
                                       int max_iterations, double tolerance, std::uint64_t seed) {
  const int n = h.num_vertices();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("second_eigenvector needs one weight per vertex");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("second_eigenvector needs positive weights");
  }
  EigenvectorEstimate out;
  out.vector.assign(static_cast<std::size_t>(n), 0.0);
  if (n < 2) return out;

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  std::vector<double> lap_degree(static_cast<std::size_t>(n), 0.0);
  for (const Edge& e : h.edges()) {
    if (e.is_loop()) continue;
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
    lap_degree[e.u] += e.w;
    lap_degree[e.v] += e.w;
  }
  std::vector<double> sqrt_w(static_cast<std::size_t>(n));
  double shift = 0.0;
  double sqrt_norm = 0.0;
  for (int v = 0; v < n; ++v) {
    sqrt_w[v] = std::sqrt(weights[v]);
    sqrt_norm += weights[v];
    shift = std::max(shift, 2.0 * lap_degree[v] / weights[v]);
  }
  sqrt_norm = std::sqrt(sqrt_norm);
  // A margin above the Gershgorin bound keeps the shifted operator positive
  // definite, so an iterate can never be annihilated.
  shift *= 1.05;

  auto apply_operator = [&](const std::vector<double>& y, std::vector<double>& out_y) {
    for (int v = 0; v < n; ++v) {
      double z = y[v] / sqrt_w[v];
      double s = lap_degree[v] * z;
      for (const auto& [u, w] : adj[v]) s -= w * y[u] / sqrt_w[u];
      out_y[v] = s / sqrt_w[v];
    }
  };
  // Removes the trivial eigenvector sqrt(w) and rescales to unit length.
  auto deflate_normalize = [&](std::vector<double>& y) {
    double dot = 0.0;
    for (int v = 0; v < n; ++v) dot += y[v] * sqrt_w[v] / sqrt_norm;
    double norm = 0.0;
    for (int v = 0; v < n; ++v) {
      y[v] -= dot * sqrt_w[v] / sqrt_norm;
      norm += y[v] * y[v];
    }
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) return false;
    for (double& x : y) x /= norm;
    return true;
  };

  std::vector<double> y(static_cast<std::size_t>(n));
  std::vector<double> ny(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) y[v] = to_unit_interval(prf(seed, static_cast<std::uint64_t>(v))) - 0.5;
  if (!deflate_normalize(y)) throw NumericFailure("degenerate power-iteration start vector");

  if (shift == 0.0) {
    // No edges: every vector orthogonal to sqrt(w) is an eigenvector of 0.
    for (int v = 0; v < n; ++v) out.vector[v] = y[v] / sqrt_w[v];
    return out;
  }

  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iterations; ++it) {
    apply_operator(y, ny);
    for (int v = 0; v < n; ++v) y[v] = shift * y[v] - ny[v];
    if (!deflate_normalize(y)) throw NumericFailure("power iteration collapsed to zero");
    apply_operator(y, ny);
    double rayleigh = 0.0;
    for (int v = 0; v < n; ++v) rayleigh += y[v] * ny[v];
    out.iterations = it;
    out.rayleigh = rayleigh;
    if (std::fabs(rayleigh - previous) < tolerance) {
      for (int v = 0; v < n; ++v) out.vector[v] = y[v] / sqrt_w[v];
      return out;
    }
    previous = rayleigh;
  }
  throw NumericFailure("power iteration did not stagnate within " + std::to_string(max_iterations) +
                       " iterations");
}

}  // namespace pcs
