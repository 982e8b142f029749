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

#ifndef GRAVITATION_DYNAMICS_HPP
#define GRAVITATION_DYNAMICS_HPP

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "choice.hpp"
#include "core.hpp"
#include "kernel.hpp"
#include "rng.hpp"
#include "stationary.hpp"

namespace gravitation {

/// How one period of producer choices is drawn.
///   Aggregate: one Binomial(N, q) draw by CDF inversion.
///   Producers: N independent Bernoulli(q) choices (debug path).
enum class StepMode { Aggregate, Producers };

/// Precomputed per-state sampling tables for the synchronous-update chain.
///
/// All N producers re-choose every period with the state-dependent corn
/// probability, so only one CDF per distinct probability is stored.
class ChainSampler {
public:
  explicit ChainSampler(const ModelParams& params, HalfRule half_rule = HalfRule::Half)
      : params_(validate_params(params)) {
    const std::int64_t n = params_.n_producers;
    table_of_.resize(static_cast<std::size_t>(n + 1));
    for (std::int64_t k = 0; k <= n; ++k) {
      const double q = corn_choice_probability(params_, MarketState(k, n), half_rule);
      auto it = std::find(probs_.begin(), probs_.end(), q);
      if (it == probs_.end()) {
        probs_.push_back(q);
        cdfs_.push_back(cumulative(binomial_row(n, q)));
        it = std::prev(probs_.end());
      }
      table_of_[static_cast<std::size_t>(k)] = static_cast<std::size_t>(it - probs_.begin());
    }
  }

  const ModelParams& params() const { return params_; }

  double choice_probability(const MarketState& s) const {
    return probs_[table_of_[static_cast<std::size_t>(s.corn_count())]];
  }

  MarketState step(const MarketState& s, Xoshiro256& rng, StepMode mode = StepMode::Aggregate) const {
    check(s);
    const std::size_t t = table_of_[static_cast<std::size_t>(s.corn_count())];
    if (mode == StepMode::Producers) {
      const double q = probs_[t];
      std::int64_t corn = 0;
      for (std::int64_t i = 0; i < params_.n_producers; ++i) corn += rng.uniform() < q ? 1 : 0;
      return MarketState(corn, params_.n_producers);
    }
    const auto& cdf = cdfs_[t];
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = std::min<std::int64_t>(it - cdf.begin(), params_.n_producers);
    return MarketState(k, params_.n_producers);
  }

private:
  static std::vector<double> cumulative(std::vector<double> pmf) {
    double acc = 0.0;
    for (double& v : pmf) {
      acc += v;
      v = acc;
    }
    pmf.back() = 1.0;
    return pmf;
  }

  void check(const MarketState& s) const {
    if (s.n_producers() != params_.n_producers) {
      throw ValidationError("state has " + std::to_string(s.n_producers()) + " producers, model has " +
                            std::to_string(params_.n_producers));
    }
  }

  ModelParams params_;
  std::vector<double> probs_;
  std::vector<std::vector<double>> cdfs_;
  std::vector<std::size_t> table_of_;
};

/// One period. Rebuilds the sampling tables each call; use ChainSampler
/// directly for long runs.
inline MarketState step(const ModelParams& params, const MarketState& state, Xoshiro256& rng,
                        StepMode mode = StepMode::Aggregate, HalfRule half_rule = HalfRule::Half) {
  return ChainSampler(params, half_rule).step(state, rng, mode);
}

struct Trajectory {
  std::uint64_t seed = 0;
  ModelParams params;
  HalfRule half_rule = HalfRule::Half;
  std::int64_t burn_in = 0;
  /// Corn counts, one per period; states.front() is the initial state.
  std::vector<std::int64_t> states;
};

/// Simulates `periods` recorded states (periods - 1 transitions).
inline Trajectory run(const ModelParams& params, const MarketState& initial, std::int64_t periods,
                      std::int64_t burn_in, std::uint64_t seed, StepMode mode = StepMode::Aggregate,
                      HalfRule half_rule = HalfRule::Half) {
  if (periods < 1) throw ValidationError("periods must be at least 1");
  if (burn_in < 0) throw ValidationError("burn-in must be non-negative");
  if (burn_in >= periods) throw ValidationError("burn-in must be less than periods");
  const ChainSampler sampler(params, half_rule);
  if (initial.n_producers() != params.n_producers) {
    throw ValidationError("initial state does not match n_producers");
  }

  Trajectory traj;
  traj.seed = seed;
  traj.params = params;
  traj.half_rule = half_rule;
  traj.burn_in = burn_in;
  traj.states.reserve(static_cast<std::size_t>(periods));

  Xoshiro256 rng(seed);
  MarketState s = initial;
  traj.states.push_back(s.corn_count());
  for (std::int64_t t = 1; t < periods; ++t) {
    s = sampler.step(s, rng, mode);
    traj.states.push_back(s.corn_count());
  }
  return traj;
}

/// Normalized histogram of the post-burn-in states.
inline StateDistribution empirical_distribution(const Trajectory& traj) {
  const auto len = static_cast<std::int64_t>(traj.states.size());
  if (len <= traj.burn_in) throw ValidationError("trajectory is not longer than its burn-in");
  std::vector<double> counts(static_cast<std::size_t>(traj.params.n_producers + 1), 0.0);
  for (auto it = traj.states.begin() + traj.burn_in; it != traj.states.end(); ++it) {
    counts[static_cast<std::size_t>(*it)] += 1.0;
  }
  const auto total = static_cast<double>(len - traj.burn_in);
  for (double& c : counts) c /= total;
  return StateDistribution(std::move(counts), Provenance::MonteCarloEmpirical);
}

/// CSV with columns `period,corn_count`.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "period,corn_count\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) os << t << ',' << traj.states[t] << '\n';
}

inline nlohmann::json trajectory_metadata(const Trajectory& traj) {
  return nlohmann::json{{"params", traj.params},
                        {"seed", traj.seed},
                        {"burn_in", traj.burn_in},
                        {"periods", traj.states.size()},
                        {"initial", traj.states.empty() ? 0 : traj.states.front()},
                        {"half_rule", std::string(to_string(traj.half_rule))},
                        {"generator", "xoshiro256** seeded by splitmix64"}};
}

}  // namespace gravitation

#endif  // GRAVITATION_DYNAMICS_HPP
