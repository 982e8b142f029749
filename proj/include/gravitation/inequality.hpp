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

#ifndef GRAVITATION_INEQUALITY_HPP
#define GRAVITATION_INEQUALITY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "format.hpp"
#include "stationary.hpp"

namespace gravitation {

/// Two-point income law: payoff_short with probability p_win, else payoff_long.
struct IncomeLaw {
  double p_win = 0.0;
  double payoff_short = 1.0;
  double payoff_long = 0.0;
};

/// Share of producers on the short side in state k: min(k, N-k)/N, which is
/// 1/2 at the balanced state.
inline double short_side_share(std::int64_t k, std::int64_t n) {
  return static_cast<double>(std::min(k, n - k)) / static_cast<double>(n);
}

/// Single-period income law of a randomly drawn producer, averaged over `dist`.
inline IncomeLaw income_distribution(const ModelParams& params, const StateDistribution& dist) {
  validate_params(params);
  if (dist.n_producers() != params.n_producers) {
    throw ValidationError("distribution and params disagree on n_producers");
  }
  const std::int64_t n = params.n_producers;
  double p = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) p += dist[static_cast<std::size_t>(k)] * short_side_share(k, n);
  return IncomeLaw{std::clamp(p, 0.0, 1.0), params.payoff_short, params.payoff_long};
}

struct LorenzPoint {
  double cumulative_population;
  double cumulative_income;
};

struct LorenzGini {
  std::vector<LorenzPoint> lorenz_points;
  double gini;
};

/// Area under a piecewise-linear curve through `points`.
inline double lorenz_area(const std::vector<LorenzPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double dx = points[i].cumulative_population - points[i - 1].cumulative_population;
    area += 0.5 * dx * (points[i].cumulative_income + points[i - 1].cumulative_income);
  }
  return area;
}

/// Lorenz curve and Gini coefficient of a two-point income law. The curve
/// has one kink, at population share 1 - p_win. Returns nullopt when total
/// income is zero and the Gini coefficient is undefined.
inline std::optional<LorenzGini> lorenz_gini(double p_win, double payoff_short, double payoff_long) {
  if (!(p_win >= 0.0 && p_win <= 1.0)) throw ValidationError("p_win must lie in [0, 1]");
  if (!(payoff_short > payoff_long)) throw ValidationError("payoff_short must exceed payoff_long");
  if (!(payoff_long >= 0.0)) throw ValidationError("incomes must be non-negative");

  const double losers = 1.0 - p_win;
  const double total = p_win * payoff_short + losers * payoff_long;
  if (!(total > 0.0)) return std::nullopt;

  LorenzGini out;
  out.lorenz_points.push_back({0.0, 0.0});
  // Keyed on p_win: 1 - p_win rounds to 1 for tiny p_win, but the kink
  // still belongs at the right edge.
  if (p_win > 0.0 && p_win < 1.0) {
    out.lorenz_points.push_back({losers, losers * payoff_long / total});
  }
  out.lorenz_points.push_back({1.0, 1.0});
  out.gini = 1.0 - 2.0 * lorenz_area(out.lorenz_points);
  return out;
}

inline std::optional<LorenzGini> lorenz_gini(const IncomeLaw& law) {
  return lorenz_gini(law.p_win, law.payoff_short, law.payoff_long);
}

/// CSV with columns `cum_population,cum_income`.
inline void write_lorenz_csv(std::ostream& os, const LorenzGini& lg) {
  os << "cum_population,cum_income\n";
  for (const auto& p : lg.lorenz_points) {
    os << format_double(p.cumulative_population) << ',' << format_double(p.cumulative_income) << '\n';
  }
}

/// `{"p_win": ..., "gini": ...}`; gini is null when undefined.
inline nlohmann::json inequality_summary(double p_win, const std::optional<LorenzGini>& lg) {
  nlohmann::json j{{"p_win", p_win}};
  j["gini"] = lg ? nlohmann::json(lg->gini) : nlohmann::json(nullptr);
  return j;
}

}  // namespace gravitation

#endif  // GRAVITATION_INEQUALITY_HPP
