/* Copyright 2026 The gravitation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GRAVITATION_STATIONARY_HPP
#define GRAVITATION_STATIONARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "choice.hpp"
#include "core.hpp"
#include "format.hpp"
#include "kernel.hpp"

namespace gravitation {

enum class Provenance { Exact, MonteCarloEmpirical };

/// Probability vector over corn counts 0..N.
class StateDistribution {
public:
  StateDistribution(std::vector<double> probabilities, Provenance provenance)
      : p_(std::move(probabilities)), provenance_(provenance) {
    if (p_.size() < 2) throw ValidationError("state distribution needs at least 2 states");
    double sum = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("state probabilities must be finite and non-negative");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("state probabilities must sum to 1 (off by " +
                            format_double(sum - 1.0) + ")");
    }
  }

  std::span<const double> probabilities() const { return p_; }
  double operator[](std::size_t k) const { return p_[k]; }
  std::size_t size() const { return p_.size(); }
  std::int64_t n_producers() const { return static_cast<std::int64_t>(p_.size()) - 1; }
  Provenance provenance() const { return provenance_; }

private:
  std::vector<double> p_;
  Provenance provenance_;
};

/// Half the L1 distance.
inline double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("tv_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

inline double tv_distance(const StateDistribution& a, const StateDistribution& b) {
  return tv_distance(a.probabilities(), b.probabilities());
}

namespace detail {

inline std::vector<double> row_times_kernel(std::span<const double> pi, const TransitionKernel& kernel) {
  const std::size_t d = kernel.dim();
  std::vector<double> next(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    const double w = pi[i];
    if (w == 0.0) continue;
    const auto row = kernel.row(i);
    for (std::size_t j = 0; j < d; ++j) next[j] += w * row[j];
  }
  return next;
}

inline void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
}

}  // namespace detail

/// ||pi P - pi||_1.
inline double fixed_point_residual(const TransitionKernel& kernel, std::span<const double> pi) {
  if (pi.size() != kernel.dim()) throw ValidationError("distribution and kernel sizes differ");
  const auto next = detail::row_times_kernel(pi, kernel);
  double r = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) r += std::abs(next[i] - pi[i]);
  return r;
}

inline double fixed_point_residual(const TransitionKernel& kernel, const StateDistribution& pi) {
  return fixed_point_residual(kernel, pi.probabilities());
}

/// Power iteration on the row vector, starting from uniform. Stops when the
/// fixed-point residual (not the step size) drops to `tol`.
inline StateDistribution stationary_power(const TransitionKernel& kernel, double tol = 1e-13,
                                          std::int64_t max_iters = 100000) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const std::size_t d = kernel.dim();
  std::vector<double> pi(d, 1.0 / static_cast<double>(d));
  double residual = 0.0;
  for (std::int64_t it = 0; it < max_iters; ++it) {
    auto next = detail::row_times_kernel(pi, kernel);
    residual = 0.0;
    for (std::size_t i = 0; i < d; ++i) residual += std::abs(next[i] - pi[i]);
    if (residual <= tol) return StateDistribution(std::move(pi), Provenance::Exact);
    detail::normalize(next);
    pi = std::move(next);
  }
  throw NumericalError("power iteration did not converge in " + std::to_string(max_iters) +
                       " iterations (residual " + format_double(residual) + ")");
}

/// Direct solve of (P^T - I) x = 0 with the last equation replaced by sum(x) = 1.
inline StateDistribution stationary_eigen(const TransitionKernel& kernel) {
  const auto d = static_cast<Eigen::Index>(kernel.dim());
  Eigen::MatrixXd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      a(i, j) = kernel(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(d - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
  b(d - 1) = 1.0;

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > 1e-13 * pivots.maxCoeff())) {
    throw NumericalError("stationary system is singular (smallest pivot " + format_double(pivots.minCoeff()) +
                         "); is the kernel irreducible?");
  }
  const Eigen::VectorXd x = lu.solve(b);

  std::vector<double> pi(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    const double v = x(i);
    if (!std::isfinite(v) || v < -1e-12) {
      throw NumericalError("stationary solve produced entry " + format_double(v) + " at state " +
                           std::to_string(i));
    }
    pi[static_cast<std::size_t>(i)] = std::max(v, 0.0);
  }
  detail::normalize(pi);
  return StateDistribution(std::move(pi), Provenance::Exact);
}

namespace detail {

// Solves rho M = rho, sum(rho) = 1 for a small stochastic M by Gaussian
// elimination with partial pivoting.
inline std::vector<double> small_chain_stationary(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  a[n - 1][n] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (a[piv][col] == 0.0) throw NumericalError("block chain is singular");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::max(a[i][n] / a[i][i], 0.0);
  return rho;
}

}  // namespace detail

/// Closed-form stationary distribution from the kernel's block structure.
///
/// Every row is Binomial(N, q) for one of at most three choice probabilities
/// q (corn short, balanced, sugar short). Lumping states by row type gives a
/// chain on at most three blocks; its stationary weights rho give
/// pi = sum_r rho_r Binomial(N, q_r). Needs no dense matrix, so it scales to
/// large N.
inline StateDistribution stationary_analytic(const ModelParams& params,
                                             HalfRule half_rule = HalfRule::Half) {
  validate_params(params);
  const std::int64_t n = params.n_producers;

  std::vector<double> probs;            // distinct choice probabilities
  std::vector<std::size_t> block_of(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) {
    const double q = corn_choice_probability(params, MarketState(k, n), half_rule);
    auto it = std::find(probs.begin(), probs.end(), q);
    if (it == probs.end()) {
      probs.push_back(q);
      it = std::prev(probs.end());
    }
    block_of[static_cast<std::size_t>(k)] = static_cast<std::size_t>(it - probs.begin());
  }

  const std::size_t m = probs.size();
  std::vector<std::vector<double>> rows;
  rows.reserve(m);
  for (double q : probs) rows.push_back(binomial_row(n, q));

  if (m == 1) return StateDistribution(rows.front(), Provenance::Exact);

  std::vector<std::vector<double>> lumped(m, std::vector<double>(m, 0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < rows[r].size(); ++k) lumped[r][block_of[k]] += rows[r][k];
  }
  const auto rho = detail::small_chain_stationary(lumped);

  std::vector<double> pi(static_cast<std::size_t>(n + 1), 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < pi.size(); ++k) pi[k] += rho[r] * rows[r][k];
  }
  detail::normalize(pi);
  return StateDistribution(std::move(pi), Provenance::Exact);
}

/// Expected corn fraction sum_k (k/N) pi_k.
inline double stationary_mean(const StateDistribution& dist) {
  const auto n = static_cast<double>(dist.n_producers());
  double m = 0.0;
  for (std::size_t k = 0; k < dist.size(); ++k) m += (static_cast<double>(k) / n) * dist[k];
  return m;
}

/// Local maxima of the distribution, ignoring states whose probability is
/// below `relative_floor` times the largest one (numerical dust).
inline std::vector<std::size_t> find_modes(const StateDistribution& dist, double relative_floor = 1e-9) {
  const auto p = dist.probabilities();
  const double floor = relative_floor * *std::max_element(p.begin(), p.end());
  std::vector<std::size_t> modes;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] < floor) continue;
    const bool left = k == 0 || p[k] > p[k - 1];
    const bool right = k + 1 == p.size() || p[k] > p[k + 1];
    if (left && right) modes.push_back(k);
  }
  return modes;
}

/// CSV with columns `state,probability`.
inline void write_distribution_csv(std::ostream& os, const StateDistribution& dist) {
  os << "state,probability\n";
  for (std::size_t k = 0; k < dist.size(); ++k) os << k << ',' << format_double(dist[k]) << '\n';
}

enum class SolverMethod { Power, Eigen, Analytic };

inline std::string_view to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::Power: return "power";
    case SolverMethod::Eigen: return "eigen";
    case SolverMethod::Analytic: return "analytic";
  }
  return "?";
}

inline SolverMethod parse_solver_method(std::string_view s) {
  if (s == "power") return SolverMethod::Power;
  if (s == "eigen") return SolverMethod::Eigen;
  if (s == "analytic") return SolverMethod::Analytic;
  throw ValidationError("method must be one of power, eigen, analytic (got '" + std::string(s) + "')");
}

/// Dispatches to one of the three solvers.
inline StateDistribution solve_stationary(const ModelParams& params, SolverMethod method,
                                          HalfRule half_rule = HalfRule::Half, double tol = 1e-13,
                                          std::int64_t max_iters = 100000) {
  switch (method) {
    case SolverMethod::Analytic: return stationary_analytic(params, half_rule);
    case SolverMethod::Power: return stationary_power(build_kernel(params, half_rule), tol, max_iters);
    case SolverMethod::Eigen: return stationary_eigen(build_kernel(params, half_rule));
  }
  throw ValidationError("unknown solver method");
}

}  // namespace gravitation

#endif  // GRAVITATION_STATIONARY_HPP
