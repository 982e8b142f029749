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
#include <limits>

#include <gtest/gtest.h>

#include <gravitation/core.hpp>
#include <gravitation/rng.hpp>

namespace gravitation {
namespace {

TEST(ValidateParams, AcceptsDefaults) {
  const ModelParams p{100, 1.0, 1.0, 0.0};
  EXPECT_EQ(validate_params(p), p);
}

TEST(ValidateParams, RejectsZeroTemperature) {
  try {
    validate_params(ModelParams{100, 0.0, 1.0, 0.0});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("temperature must be positive"), std::string::npos);
  }
  EXPECT_THROW(validate_params(ModelParams{100, -1.0}), ValidationError);
  EXPECT_THROW(validate_params(ModelParams{100, std::numeric_limits<double>::infinity()}), ValidationError);
  EXPECT_THROW(validate_params(ModelParams{100, std::nan("")}), ValidationError);
}

TEST(ValidateParams, RejectsTooFewProducers) {
  try {
    validate_params(ModelParams{1, 1.0, 1.0, 0.0});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("need at least 2 producers"), std::string::npos);
  }
}

TEST(ValidateParams, RejectsInvertedPayoffs) {
  EXPECT_THROW(validate_params(ModelParams{10, 1.0, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(validate_params(ModelParams{10, 1.0, 0.0, 1.0}), ValidationError);
}

TEST(ModelParamsJson, RoundTripIsBitExact) {
  Xoshiro256 rng(2024);
  for (int i = 0; i < 500; ++i) {
    ModelParams p;
    p.n_producers = 2 + static_cast<std::int64_t>(rng() % 100000);
    p.temperature = std::ldexp(rng.uniform() + 1e-300, static_cast<int>(rng() % 40) - 20);
    p.payoff_long = (rng.uniform() - 0.5) * 1e3;
    p.payoff_short = p.payoff_long + rng.uniform() * 17.0 + 1e-9;
    const std::string text = nlohmann::json(p).dump();
    const ModelParams back = params_from_json_text(text);
    EXPECT_EQ(back.n_producers, p.n_producers);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.temperature), std::bit_cast<std::uint64_t>(p.temperature));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.payoff_short), std::bit_cast<std::uint64_t>(p.payoff_short));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.payoff_long), std::bit_cast<std::uint64_t>(p.payoff_long));
  }
}

TEST(ModelParamsJson, RejectsUnknownKeys) {
  EXPECT_THROW(params_from_json_text(R"({"n_producers": 10, "temperature": 1, "beta": 2})"), ValidationError);
}

TEST(ModelParamsJson, RejectsMalformedAndInvalid) {
  EXPECT_THROW(params_from_json_text("{"), ValidationError);
  EXPECT_THROW(params_from_json_text(R"({"n_producers": 10.5})"), ValidationError);
  EXPECT_THROW(params_from_json_text(R"({"temperature": "hot"})"), ValidationError);
  EXPECT_THROW(params_from_json_text(R"({"temperature": 0})"), ValidationError);
}

TEST(MarketState, FractionReconstructsCount) {
  for (std::int64_t n : {2, 3, 10, 99, 100, 1001}) {
    for (std::int64_t k = 0; k <= n; ++k) {
      const MarketState s(k, n);
      const double back = s.corn_fraction() * static_cast<double>(n);
      EXPECT_EQ(std::llround(back), k);
      EXPECT_NEAR(back, static_cast<double>(k), 1e-12 * static_cast<double>(n));
    }
  }
}

TEST(MarketState, RejectsOutOfRange) {
  EXPECT_THROW(MarketState(-1, 10), ValidationError);
  EXPECT_THROW(MarketState(11, 10), ValidationError);
}

TEST(MarketState, SideClassificationMatchesFraction) {
  for (std::int64_t n : {9, 10}) {
    for (std::int64_t k = 0; k <= n; ++k) {
      const MarketState s(k, n);
      EXPECT_EQ(s.corn_short(), s.corn_fraction() < 0.5);
      EXPECT_EQ(s.sugar_short(), s.corn_fraction() > 0.5);
      EXPECT_EQ(s.balanced(), s.corn_fraction() == 0.5);
    }
  }
}

TEST(HalfRule, ParsesNames) {
  EXPECT_EQ(parse_half_rule("half"), HalfRule::Half);
  EXPECT_EQ(parse_half_rule("low"), HalfRule::Low);
  EXPECT_EQ(parse_half_rule("high"), HalfRule::High);
  EXPECT_THROW(parse_half_rule("middle"), ValidationError);
}

TEST(Xoshiro, MatchesReferenceStream) {
  // splitmix64(0) first outputs, then xoshiro256** from that state.
  SplitMix64 sm(0);
  EXPECT_EQ(sm.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(sm.next(), 0x6e789e6aa1b965f4ULL);
  Xoshiro256 a(99), b(99), c(100);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    (void)c();
  }
  EXPECT_NE(Xoshiro256(99)(), Xoshiro256(100)());
  EXPECT_NE(derive_stream_seed(1, 0), derive_stream_seed(1, 1));
  EXPECT_EQ(derive_stream_seed(1, 7), derive_stream_seed(1, 7));
}

}  // namespace
}  // namespace gravitation
