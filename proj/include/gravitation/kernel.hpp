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

#ifndef GRAVITATION_KERNEL_HPP
#define GRAVITATION_KERNEL_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "choice.hpp"
#include "core.hpp"
#include "format.hpp"

namespace gravitation {

namespace detail {

// Stirling-formula remainder: log(n!) - log(sqrt(2 pi n) (n/e)^n).
inline double stirlerr(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n -
           0.5 * std::log(2.0 * std::numbers::pi);
  }
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x/np) + np - x, evaluated without cancellation near x = np.
inline double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

inline double exact_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

}  // namespace detail

/// C(n,k) p^k (1-p)^(n-k).
///
/// Small n (<= 50) uses the exact coefficient; larger n uses Loader's
/// saddle-point expansion in log space, which keeps relative accuracy near
/// machine precision without overflow.
inline double binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  if (n < 0) throw ValidationError("binomial_pmf: n must be non-negative");
  if (k < 0 || k > n) throw ValidationError("binomial_pmf: k outside [0, n]");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial_pmf: p outside [0, 1]");
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 0.0) return k == n ? 1.0 : 0.0;
  if (n <= 50) {
    return detail::exact_binomial_coefficient(n, k) * std::pow(p, static_cast<double>(k)) *
           std::pow(q, static_cast<double>(n - k));
  }
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  if (k == 0) {
    return p < 0.1 ? std::exp(-detail::bd0(nd, nd * q) - nd * p) : std::exp(nd * std::log1p(-p));
  }
  if (k == n) {
    return q < 0.1 ? std::exp(-detail::bd0(nd, nd * p) - nd * q) : std::exp(nd * std::log(p));
  }
  const double lc = detail::stirlerr(nd) - detail::stirlerr(kd) - detail::stirlerr(nd - kd) -
                    detail::bd0(kd, nd * p) - detail::bd0(nd - kd, nd * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(kd) + std::log1p(-kd / nd);
  return std::exp(lc - 0.5 * lf);
}

/// Whole Binomial(n, p) PMF over 0..n.
inline std::vector<double> binomial_row(std::int64_t n, double p) {
  std::vector<double> row(static_cast<std::size_t>(n + 1));
  for (std::int64_t k = 0; k <= n; ++k) row[static_cast<std::size_t>(k)] = binomial_pmf(n, k, p);
  return row;
}

inline constexpr std::int64_t kMaxKernelProducers = 20000;

/// Dense (N+1) x (N+1) row-stochastic matrix; entry (i, j) is the
/// probability of moving from i corn producers to j.
class TransitionKernel {
public:
  TransitionKernel(ModelParams params, HalfRule half_rule, std::vector<double> row_major)
      : params_(params), half_rule_(half_rule), data_(std::move(row_major)) {
    const auto d = dim();
    if (data_.size() != d * d) throw ValidationError("kernel storage has the wrong size");
  }

  const ModelParams& params() const { return params_; }
  HalfRule half_rule() const { return half_rule_; }
  std::size_t dim() const { return static_cast<std::size_t>(params_.n_producers + 1); }

  double operator()(std::size_t from, std::size_t to) const { return data_[from * dim() + to]; }
  std::span<const double> row(std::size_t from) const {
    return std::span<const double>(data_).subspan(from * dim(), dim());
  }
  std::span<const double> data() const { return data_; }

  /// Largest |row sum - 1|.
  double max_row_sum_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      double s = 0.0;
      for (double v : row(i)) s += v;
      worst = std::max(worst, std::abs(s - 1.0));
    }
    return worst;
  }

private:
  ModelParams params_;
  HalfRule half_rule_;
  std::vector<double> data_;
};

/// Row i is Binomial(N, corn_choice_probability(i)). Rows sharing a choice
/// probability are computed once and copied, so the block structure is exact.
inline TransitionKernel build_kernel(const ModelParams& params, HalfRule half_rule = HalfRule::Half) {
  validate_params(params);
  if (params.n_producers > kMaxKernelProducers) {
    throw ValidationError("dense kernel limited to n_producers <= " +
                          std::to_string(kMaxKernelProducers));
  }
  const std::int64_t n = params.n_producers;
  const auto d = static_cast<std::size_t>(n + 1);
  std::vector<double> data(d * d);

  std::vector<std::pair<double, std::vector<double>>> cache;
  for (std::int64_t i = 0; i <= n; ++i) {
    const double p = corn_choice_probability(params, MarketState(i, n), half_rule);
    auto it = std::find_if(cache.begin(), cache.end(), [&](const auto& c) { return c.first == p; });
    if (it == cache.end()) {
      cache.emplace_back(p, binomial_row(n, p));
      it = std::prev(cache.end());
    }
    std::copy(it->second.begin(), it->second.end(),
              data.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * d));
  }
  return TransitionKernel(params, half_rule, std::move(data));
}

/// CSV: header `from\to,0,1,...,N`, then one row per state, 17 significant digits.
inline void write_kernel_csv(std::ostream& os, const TransitionKernel& kernel) {
  os << "from\\to";
  for (std::size_t j = 0; j < kernel.dim(); ++j) os << ',' << j;
  os << '\n';
  for (std::size_t i = 0; i < kernel.dim(); ++i) {
    os << i;
    for (double v : kernel.row(i)) os << ',' << format_double(v);
    os << '\n';
  }
}

}  // namespace gravitation

#endif  // GRAVITATION_KERNEL_HPP
