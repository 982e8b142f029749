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

#ifndef GRAVITATION_GRAVITATION_HPP
#define GRAVITATION_GRAVITATION_HPP

#include "choice.hpp"
#include "core.hpp"
#include "dynamics.hpp"
#include "experiments.hpp"
#include "inequality.hpp"
#include "kernel.hpp"
#include "payoff.hpp"
#include "rng.hpp"
#include "stationary.hpp"

#endif  // GRAVITATION_GRAVITATION_HPP
