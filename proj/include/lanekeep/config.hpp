/*
 * Copyright 2026 The lanekeep Authors
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


#ifndef LANEKEEP_CONFIG_HPP_
#define LANEKEEP_CONFIG_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "lanekeep/estimator.hpp"
#include "lanekeep/harness.hpp"
#include "lanekeep/stability.hpp"
#include "lanekeep/track.hpp"

namespace lanekeep {

// JSON front end for the CLI. Every object mirrors the corresponding struct
// field by field, missing keys keep their defaults and unknown keys are
// rejected. All parse errors are reported as ConfigError.

ScenarioConfig parse_scenario(std::string_view json_text);
TrackSpec parse_track_spec(std::string_view json_text);
DatasetConfig parse_dataset(std::string_view json_text, TrackSpec& track);

// {"v": [...], "L_d": [...], "K_D": [...], "wheelbase": l, "tau": tau}.
// Each axis is a non-empty list or {"from": a, "to": b, "count": n}; a
// missing axis holds the single value from `fixed`.
SweepGrid parse_sweep_grid(std::string_view json_text,
                           StraightLoopParams& fixed);

// {"base": <scenario>, "variants": [{"name": "...", <scenario overrides>}]}.
// Overrides are merged onto the base as a JSON merge patch.
std::vector<Variant> parse_comparison(std::string_view json_text,
                                      ScenarioConfig& base);

std::string scenario_to_json(const ScenarioConfig& cfg);

std::string read_text_file(const std::string& path);

}  // namespace lanekeep

#endif  // LANEKEEP_CONFIG_HPP_
