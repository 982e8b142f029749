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

// Minimal library tour: kernel, stationary law, a short simulation, Gini.

#include <cstdio>

#include <gravitation/gravitation.hpp>

int main() {
  using namespace gravitation;
  const ModelParams params{.n_producers = 100, .temperature = 1.0};

  const auto exact = stationary_analytic(params);
  std::printf("mean corn fraction      %.6f\n", stationary_mean(exact));
  const auto modes = find_modes(exact);
  std::printf("modes at                ");
  for (auto k : modes) std::printf("%zu ", k);
  std::printf("\n");

  const auto traj = run(params, MarketState(50, params), 200000, 1000, 7);
  std::printf("TV(empirical, exact)    %.4f\n", tv_distance(empirical_distribution(traj), exact));

  const auto law = income_distribution(params, exact);
  if (const auto lg = lorenz_gini(law)) std::printf("gini                    %.4f\n", lg->gini);
}
