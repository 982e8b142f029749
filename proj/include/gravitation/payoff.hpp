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

#ifndef GRAVITATION_PAYOFF_HPP
#define GRAVITATION_PAYOFF_HPP

#include <algorithm>
#include <cmath>

#include "core.hpp"

namespace gravitation {

/// Who ends up on the short side after a production period, and what
/// the typical producer earns.
struct MarketOutcome {
  Side short_side = Side::Balanced;
  double winner_payoff = 1.0;
  double loser_payoff = 0.0;
  /// Probability that a randomly drawn producer is on the short side.
  double winner_probability = 0.5;
  /// Unsold output of the long-side good, per producer.
  double excess_supply_per_producer = 0.0;
};

inline MarketOutcome market_outcome(const ModelParams& params, const MarketState& state) {
  validate_params(params);
  const double x = state.corn_fraction();
  MarketOutcome out;
  out.winner_payoff = params.payoff_short;
  out.loser_payoff = params.payoff_long;
  if (state.balanced()) {
    out.short_side = Side::Balanced;
    out.winner_probability = 0.5;
    out.excess_supply_per_producer = 0.0;
    return out;
  }
  out.short_side = state.corn_short() ? Side::Corn : Side::Sugar;
  out.winner_probability = std::min(x, 1.0 - x);
  out.excess_supply_per_producer = std::abs(1.0 - 2.0 * x);
  return out;
}

/// Payoff to a producer who took `action` in `state`. At the balanced
/// state both actions earn the midpoint of the two payoffs.
inline double payoff_of_action(const ModelParams& params, const MarketState& state, Action action) {
  validate_params(params);
  if (state.balanced()) return 0.5 * (params.payoff_short + params.payoff_long);
  const bool on_short = state.corn_short() ? action == Action::Corn : action == Action::Sugar;
  return on_short ? params.payoff_short : params.payoff_long;
}

}  // namespace gravitation

#endif  // GRAVITATION_PAYOFF_HPP
