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

#ifndef GRAVITATION_CHOICE_HPP
#define GRAVITATION_CHOICE_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "payoff.hpp"

namespace gravitation {

/// Mixed strategy of the typical producer over K actions.
class ActionDistribution {
public:
  explicit ActionDistribution(std::vector<double> frequencies) : f_(std::move(frequencies)) {
    if (f_.empty()) throw ValidationError("action distribution needs at least one action");
    double sum = 0.0;
    for (double v : f_) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("action frequencies must be finite and non-negative");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("action frequencies must sum to 1 (sum = " + std::to_string(sum) + ")");
    }
  }

  std::span<const double> frequencies() const { return f_; }
  std::size_t size() const { return f_.size(); }
  double operator[](std::size_t k) const { return f_[k]; }

private:
  std::vector<double> f_;
};

/// -sum f log f, with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> f) {
  double h = 0.0;
  for (double v : f) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

/// Gibbs (softmax) distribution: f_k proportional to exp(u_k / T).
///
/// The maximum payoff is subtracted before exponentiating, so any finite
/// payoffs work at any positive temperature.
inline ActionDistribution gibbs(std::span<const double> payoffs, double temperature) {
  if (payoffs.empty()) throw ValidationError("gibbs: empty payoff vector");
  if (!std::isfinite(temperature) || !(temperature > 0.0)) {
    throw ValidationError("temperature must be positive and finite");
  }
  for (double u : payoffs) {
    if (!std::isfinite(u)) throw ValidationError("gibbs: payoffs must be finite");
  }
  const double top = *std::max_element(payoffs.begin(), payoffs.end());
  std::vector<double> w(payoffs.size());
  std::transform(payoffs.begin(), payoffs.end(), w.begin(),
                 [&](double u) { return std::exp((u - top) / temperature); });
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= z;
  return ActionDistribution(std::move(w));
}

inline ActionDistribution gibbs(std::initializer_list<double> payoffs, double temperature) {
  return gibbs(std::span<const double>(payoffs.begin(), payoffs.size()), temperature);
}

/// Probability of choosing action a over action b under the logit rule.
inline double logit_response(double payoff_a, double payoff_b, double temperature) {
  if (!std::isfinite(payoff_a) || !std::isfinite(payoff_b)) {
    throw ValidationError("logit_response: payoffs must be finite");
  }
  if (!std::isfinite(temperature) || !(temperature > 0.0)) {
    throw ValidationError("temperature must be positive and finite");
  }
  const double z = (payoff_b - payoff_a) / temperature;
  // Same operation order as gibbs() for two actions.
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

/// Two-action logit pair {f_a, f_b}. Each side is evaluated separately so the
/// minority frequency keeps full relative precision.
inline ActionDistribution logit_pair(double payoff_a, double payoff_b, double temperature) {
  return ActionDistribution(
      {logit_response(payoff_a, payoff_b, temperature), logit_response(payoff_b, payoff_a, temperature)});
}

/// log(f_b / f_a) for a two-action distribution.
inline double log_odds(const ActionDistribution& dist) {
  if (dist.size() != 2) throw ValidationError("log_odds needs exactly two actions");
  if (!(dist[0] > 0.0) || !(dist[1] > 0.0)) {
    throw ValidationError("log_odds undefined when a frequency is zero");
  }
  return std::log(dist[1] / dist[0]);
}

/// Probability that a producer chooses corn next period, given the current
/// state. Producers expect next period's payoffs to equal this period's.
inline double corn_choice_probability(const ModelParams& params, const MarketState& state,
                                      HalfRule half_rule = HalfRule::Half) {
  validate_params(params);
  if (state.balanced() && half_rule != HalfRule::Half) {
    const double gap = params.payoff_gap();
    return half_rule == HalfRule::Low ? logit_response(gap, 0.0, params.temperature)
                                      : logit_response(0.0, gap, params.temperature);
  }
  return logit_response(payoff_of_action(params, state, Action::Corn),
                        payoff_of_action(params, state, Action::Sugar), params.temperature);
}

}  // namespace gravitation

#endif  // GRAVITATION_CHOICE_HPP
