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

#ifndef GRAVITATION_CORE_HPP
#define GRAVITATION_CORE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace gravitation {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters or inputs; the CLI maps this to exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Solver failure (non-convergence, singular system); exit code 3.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Filesystem failure; exit code 1.
class IoError : public Error {
public:
  using Error::Error;
};

/// Configuration of the two-good producer economy.
///
/// States are corn-producer counts 0..n_producers, so the chain has
/// n_producers + 1 states. Only payoff_short - payoff_long enters the
/// choice rule; the absolute levels matter for income accounting.
struct ModelParams {
  std::int64_t n_producers = 100;
  double temperature = 1.0;
  double payoff_short = 1.0;
  double payoff_long = 0.0;

  double payoff_gap() const { return payoff_short - payoff_long; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Returns params unchanged, or throws ValidationError naming the broken invariant.
inline const ModelParams& validate_params(const ModelParams& params) {
  if (params.n_producers < 2) {
    throw ValidationError("need at least 2 producers (n_producers = " +
                          std::to_string(params.n_producers) + ")");
  }
  if (!std::isfinite(params.temperature) || !(params.temperature > 0.0)) {
    throw ValidationError("temperature must be positive and finite");
  }
  if (!std::isfinite(params.payoff_short) || !std::isfinite(params.payoff_long)) {
    throw ValidationError("payoffs must be finite");
  }
  if (!(params.payoff_short > params.payoff_long)) {
    throw ValidationError("payoff_short must exceed payoff_long");
  }
  return params;
}

inline void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"n_producers", p.n_producers},
                     {"temperature", p.temperature},
                     {"payoff_short", p.payoff_short},
                     {"payoff_long", p.payoff_long}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline void from_json(const nlohmann::json& j, ModelParams& p) {
  if (!j.is_object()) throw ValidationError("model params must be a JSON object");
  ModelParams out;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n_producers") {
        if (!value.is_number_integer()) throw ValidationError("n_producers must be an integer");
        out.n_producers = value.get<std::int64_t>();
      } else if (key == "temperature") {
        out.temperature = value.get<double>();
      } else if (key == "payoff_short") {
        out.payoff_short = value.get<double>();
      } else if (key == "payoff_long") {
        out.payoff_long = value.get<double>();
      } else {
        throw ValidationError("unknown model parameter '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bad value for '" + key + "': " + e.what());
    }
  }
  p = out;
}

inline ModelParams params_from_json_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return validate_params(j.get<ModelParams>());
}

/// Number of corn producers in one period.
class MarketState {
public:
  MarketState(std::int64_t corn_count, std::int64_t n_producers)
      : corn_count_(corn_count), n_producers_(n_producers) {
    if (n_producers < 1 || corn_count < 0 || corn_count > n_producers) {
      throw ValidationError("corn_count " + std::to_string(corn_count) + " outside [0, " +
                            std::to_string(n_producers) + "]");
    }
  }
  MarketState(std::int64_t corn_count, const ModelParams& params)
      : MarketState(corn_count, params.n_producers) {}

  std::int64_t corn_count() const { return corn_count_; }
  std::int64_t n_producers() const { return n_producers_; }
  double corn_fraction() const {
    return static_cast<double>(corn_count_) / static_cast<double>(n_producers_);
  }

  // Integer comparisons; corn_fraction() < 0.5 would be exact too but this reads better.
  bool corn_short() const { return 2 * corn_count_ < n_producers_; }
  bool sugar_short() const { return 2 * corn_count_ > n_producers_; }
  bool balanced() const { return 2 * corn_count_ == n_producers_; }

  friend bool operator==(const MarketState&, const MarketState&) = default;

private:
  std::int64_t corn_count_;
  std::int64_t n_producers_;
};

enum class Side { Corn, Sugar, Balanced };
enum class Action { Corn, Sugar };

/// Treatment of the exact-half state (even N only) when building the chain.
///   Half: choose corn with probability 1/2.
///   Low:  behave as if corn were on the short side.
///   High: behave as if sugar were on the short side.
enum class HalfRule { Half, Low, High };

inline std::string_view to_string(Side s) {
  switch (s) {
    case Side::Corn: return "corn";
    case Side::Sugar: return "sugar";
    case Side::Balanced: return "balanced";
  }
  return "?";
}

inline std::string_view to_string(HalfRule r) {
  switch (r) {
    case HalfRule::Half: return "half";
    case HalfRule::Low: return "low";
    case HalfRule::High: return "high";
  }
  return "?";
}

inline HalfRule parse_half_rule(std::string_view s) {
  if (s == "half") return HalfRule::Half;
  if (s == "low") return HalfRule::Low;
  if (s == "high") return HalfRule::High;
  throw ValidationError("half rule must be one of half, low, high (got '" + std::string(s) + "')");
}

}  // namespace gravitation

#endif  // GRAVITATION_CORE_HPP
