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

#include <cmath>

#include <gtest/gtest.h>

#include <gravitation/payoff.hpp>

namespace gravitation {
namespace {

const ModelParams kDefaults{10, 1.0, 1.0, 0.0};

TEST(MarketOutcome, CornShortSide) {
  const auto o = market_outcome(kDefaults, MarketState(3, 10));
  EXPECT_EQ(o.short_side, Side::Corn);
  EXPECT_DOUBLE_EQ(o.winner_probability, 0.3);
  EXPECT_NEAR(o.excess_supply_per_producer, 0.4, 1e-15);
  EXPECT_EQ(o.winner_payoff, 1.0);
  EXPECT_EQ(o.loser_payoff, 0.0);
}

TEST(MarketOutcome, Balanced) {
  const auto o = market_outcome(kDefaults, MarketState(5, 10));
  EXPECT_EQ(o.short_side, Side::Balanced);
  EXPECT_EQ(o.winner_probability, 0.5);
  EXPECT_EQ(o.excess_supply_per_producer, 0.0);
}

TEST(MarketOutcome, SugarShortSide) {
  const auto o = market_outcome(kDefaults, MarketState(7, 10));
  EXPECT_EQ(o.short_side, Side::Sugar);
  EXPECT_NEAR(o.winner_probability, 0.3, 1e-15);
  EXPECT_NEAR(o.excess_supply_per_producer, 0.4, 1e-15);
}

TEST(MarketOutcome, InvariantsForAllStates) {
  for (std::int64_t n : {9, 10, 11, 100}) {
    const ModelParams p{n, 1.0};
    for (std::int64_t k = 0; k <= n; ++k) {
      const MarketState s(k, n);
      const auto o = market_outcome(p, s);
      const double x = s.corn_fraction();
      EXPECT_EQ(o.excess_supply_per_producer, std::abs(1.0 - 2.0 * x));
      EXPECT_EQ(o.winner_probability, s.balanced() ? 0.5 : std::min(x, 1.0 - x));
    }
  }
}

TEST(PayoffOfAction, ShortSideWins) {
  const MarketState s(3, 10);
  EXPECT_EQ(payoff_of_action(kDefaults, s, Action::Corn), 1.0);
  EXPECT_EQ(payoff_of_action(kDefaults, s, Action::Sugar), 0.0);
}

TEST(PayoffOfAction, BalancedSplitsEvenly) {
  EXPECT_EQ(payoff_of_action(kDefaults, MarketState(5, 10), Action::Corn), 0.5);
  EXPECT_EQ(payoff_of_action(kDefaults, MarketState(5, 10), Action::Sugar), 0.5);
  const ModelParams shifted{10, 1.0, 3.0, 1.0};
  EXPECT_EQ(payoff_of_action(shifted, MarketState(5, 10), Action::Sugar), 2.0);
}

TEST(PayoffOfAction, GoodsSymmetry) {
  for (std::int64_t n : {9, 10}) {
    const ModelParams p{n, 1.0, 2.5, -1.0};
    for (std::int64_t k = 0; k <= n; ++k) {
      EXPECT_EQ(payoff_of_action(p, MarketState(k, n), Action::Corn),
                payoff_of_action(p, MarketState(n - k, n), Action::Sugar));
    }
  }
}

TEST(PayoffOfAction, ShortSideWeaklyDominates) {
  for (std::int64_t k = 0; k <= 10; ++k) {
    const MarketState s(k, 10);
    const auto o = market_outcome(kDefaults, s);
    const Action short_action = o.short_side == Side::Sugar ? Action::Sugar : Action::Corn;
    const Action long_action = short_action == Action::Corn ? Action::Sugar : Action::Corn;
    const double hi = payoff_of_action(kDefaults, s, short_action);
    const double lo = payoff_of_action(kDefaults, s, long_action);
    EXPECT_GE(hi, lo);
    EXPECT_EQ(hi == lo, s.balanced());
  }
}

// Short-side producers each consume one unit of the long-side good; what is
// left over is the excess supply. Together they account for the long side's
// whole output.
TEST(MarketOutcome, LongSideOutputAccounting) {
  for (std::int64_t k = 0; k <= 10; ++k) {
    const MarketState s(k, 10);
    if (s.balanced()) continue;
    const auto o = market_outcome(kDefaults, s);
    const double x = s.corn_fraction();
    const double surviving_exchange = 1.0;
    EXPECT_NEAR(o.winner_probability * surviving_exchange + o.excess_supply_per_producer,
                std::max(x, 1.0 - x), 1e-15);
  }
}

}  // namespace
}  // namespace gravitation
