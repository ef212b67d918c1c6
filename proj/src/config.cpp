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


#include "lanekeep/config.hpp"

#include <cstdint>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

using nlohmann::json;

// Reads the keys of one JSON object and complains about the rest.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string where)
      : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + " must be an object");
  }
  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() == 0) check_unknown();
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& child(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void number(const std::string& key, double& out) {
    if (!has(key)) return;
    const json& v = child(key);
    if (!v.is_number()) throw ConfigError(path(key) + " must be a number");
    out = v.get<double>();
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (!has(key)) return;
    const json& v = child(key);
    if (!v.is_number_integer()) {
      throw ConfigError(path(key) + " must be an integer");
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = v.get<Int>();
      } else if (v.get<std::int64_t>() >= 0) {
        out = static_cast<Int>(v.get<std::int64_t>());
      } else {
        throw ConfigError(path(key) + " must be non-negative");
      }
    } else {
      out = v.get<Int>();
    }
  }

  template <typename Enum>
  void choice(const std::string& key, Enum& out,
              std::initializer_list<std::pair<const char*, Enum>> options) {
    if (!has(key)) return;
    const json& v = child(key);
    if (v.is_string()) {
      for (const auto& [name, value] : options) {
        if (v.get<std::string>() == name) {
          out = value;
          return;
        }
      }
    }
    std::string names;
    for (const auto& [name, value] : options) {
      names += names.empty() ? name : std::string("|") + name;
    }
    throw ConfigError(path(key) + " must be one of " + names);
  }

  void check_unknown() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError("unknown key " + where_ + "." + item.key());
      }
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

void read_track_params(ObjectReader& r, TrackParams& p) {
  r.number("x_c", p.x_c);
  r.number("m", p.m);
  r.number("w", p.w);
  r.number("L", p.L);
  r.number("R_c", p.R_c);
  r.number("r_c", p.r_c);
}

void read_track(const json& j, const std::string& where, TrackSpec& t) {
  ObjectReader r(j, where);
  r.choice("shape", t.shape,
           {{"test_track", TrackShape::kTestTrack},
            {"straight", TrackShape::kStraight}});
  read_track_params(r, t.params);
  r.choice("lane", t.lane,
           {{"centerline", Lane::kCenterline},
            {"inner", Lane::kInnerLane},
            {"outer", Lane::kOuterLane}});
  r.number("straight_length", t.straight_length);
}

void read_pid(const json& j, const std::string& where, PidGains& g) {
  ObjectReader r(j, where);
  r.number("kp", g.kp);
  r.number("ki", g.ki);
  r.number("kd", g.kd);
  r.number("i_limit", g.i_limit);
  r.number("u_max", g.u_max);
}

void read_vehicle(const json& j, const std::string& where, VehicleParams& v) {
  ObjectReader r(j, where);
  r.number("wheelbase", v.wheelbase);
  r.number("axle_track", v.axle_track);
  r.number("delta_max", v.delta_max);
  r.number("tau", v.tau);
  r.number("tau_d", v.tau_d);
  if (r.has("v_loop_gains")) {
    read_pid(r.child("v_loop_gains"), r.path("v_loop_gains"), v.v_loop_gains);
  }
  r.number("v_actuator_lag", v.v_actuator_lag);
}

void read_controller(const json& j, const std::string& where, PPDConfig& c) {
  ObjectReader r(j, where);
  r.number("L_d", c.L_d);
  r.number("K_D", c.K_D);
  r.number("deriv_filter_tc", c.deriv_filter_tc);
  r.number("delta_cmd_limit", c.delta_cmd_limit);
  r.number("rate", c.rate);
}

void read_velocity(const json& j, const std::string& where,
                   VelocityConfig& v) {
  ObjectReader r(j, where);
  r.choice("mode", v.mode,
           {{"ppvr", VelocityMode::kPPVR}, {"fixed", VelocityMode::kFixed}});
  if (r.has("ppvr")) {
    ObjectReader p(r.child("ppvr"), r.path("ppvr"));
    p.number("v_max", v.ppvr.v_max);
    p.number("a_max", v.ppvr.a_max);
    p.number("smooth_rate", v.ppvr.smooth_rate);
  }
  r.number("fixed_speed", v.fixed_speed);
}

void read_sensor(const json& j, const std::string& where, SensorConfig& s) {
  ObjectReader r(j, where);
  r.choice("mode", s.mode,
           {{"ideal", SensorMode::kIdeal}, {"noisy", SensorMode::kNoisy}});
  r.number("rate", s.rate);
  r.number("latency", s.latency);
  r.number("noise_std", s.noise_std);
  r.number("bias", s.bias);
  r.number("quant_step", s.quant_step);
  r.number("L_d", s.L_d);
  r.integer("rng_seed", s.rng_seed);
}

ScenarioConfig read_scenario(const json& j) {
  ScenarioConfig cfg;
  ObjectReader r(j, "scenario");
  if (r.has("track")) read_track(r.child("track"), "track", cfg.track);
  if (r.has("vehicle")) read_vehicle(r.child("vehicle"), "vehicle", cfg.vehicle);
  if (r.has("controller")) {
    read_controller(r.child("controller"), "controller", cfg.controller);
  }
  if (r.has("velocity")) {
    read_velocity(r.child("velocity"), "velocity", cfg.velocity);
  }
  if (r.has("sensor")) read_sensor(r.child("sensor"), "sensor", cfg.sensor);
  r.number("dt", cfg.dt);
  if (r.has("duration")) {
    ObjectReader d(r.child("duration"), "duration");
    d.choice("unit", cfg.duration.unit,
             {{"laps", DurationUnit::kLaps},
              {"seconds", DurationUnit::kSeconds}});
    d.number("value", cfg.duration.value);
  }
  if (r.has("initial")) {
    ObjectReader i(r.child("initial"), "initial");
    if (i.has("s")) {
      const json& s = i.child("s");
      if (s.is_number()) {
        cfg.initial.s = s.get<double>();
      } else if (!s.is_null()) {
        throw ConfigError("initial.s must be a number or null");
      }
    }
    i.number("e_y", cfg.initial.e_y);
    i.number("e_psi", cfg.initial.e_psi);
  }
  r.choice("direction", cfg.direction,
           {{"clockwise", Direction::kClockwise},
            {"counterclockwise", Direction::kCounterclockwise}});
  r.integer("rng_seed", cfg.rng_seed);
  r.number("off_track_threshold", cfg.off_track_threshold);
  r.integer("trace_decimation", cfg.trace_decimation);
  r.number("max_time", cfg.max_time);
  return cfg;
}

std::vector<double> read_axis(const json& j, const std::string& where) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& x : j) {
      if (!x.is_number()) throw ConfigError(where + " must hold numbers");
      out.push_back(x.get<double>());
    }
    if (out.empty()) throw ConfigError(where + " must be non-empty");
    return out;
  }
  ObjectReader r(j, where);
  double from = 0.0;
  double to = 0.0;
  int count = 0;
  r.number("from", from);
  r.number("to", to);
  r.integer("count", count);
  if (count < 1) throw ConfigError(where + ".count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        count == 1 ? from : from + (to - from) * i / (count - 1);
  }
  return out;
}

template <typename Fn>
auto as_config_error(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  } catch (const ConstraintViolation& e) {
    throw ConfigError(e.what());
  }
}

const char* lane_name(Lane lane) {
  switch (lane) {
    case Lane::kInnerLane:
      return "inner";
    case Lane::kOuterLane:
      return "outer";
    default:
      return "centerline";
  }
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
  return as_config_error([&] {
    ScenarioConfig cfg = read_scenario(parse_json(json_text));
    cfg.validate();
    return cfg;
  });
}

TrackSpec parse_track_spec(std::string_view json_text) {
  return as_config_error([&] {
    TrackSpec t;
    read_track(parse_json(json_text), "track", t);
    if (t.shape == TrackShape::kTestTrack) t.params.validate();
    return t;
  });
}

DatasetConfig parse_dataset(std::string_view json_text, TrackSpec& track) {
  return as_config_error([&] {
    DatasetConfig cfg;
    const json j = parse_json(json_text);
    ObjectReader r(j, "dataset");
    if (r.has("track")) read_track(r.child("track"), "track", track);
    r.number("sigma_L", cfg.sigma_L);
    r.number("sigma_psi", cfg.sigma_psi);
    r.integer("N", cfg.N);
    if (r.has("L_d_list")) cfg.L_d_list = read_axis(r.child("L_d_list"), "L_d_list");
    r.integer("rng_seed", cfg.rng_seed);
    cfg.validate();
    return cfg;
  });
}

SweepGrid parse_sweep_grid(std::string_view json_text,
                           StraightLoopParams& fixed) {
  return as_config_error([&] {
    SweepGrid grid{{fixed.v}, {fixed.L_d}, {fixed.K_D}};
    const json j = parse_json(json_text);
    ObjectReader r(j, "grid");
    if (r.has("v")) grid.v = read_axis(r.child("v"), "v");
    if (r.has("L_d")) grid.L_d = read_axis(r.child("L_d"), "L_d");
    if (r.has("K_D")) grid.K_D = read_axis(r.child("K_D"), "K_D");
    r.number("wheelbase", fixed.wheelbase);
    r.number("tau", fixed.tau);
    return grid;
  });
}

std::vector<Variant> parse_comparison(std::string_view json_text,
                                      ScenarioConfig& base) {
  return as_config_error([&] {
    const json j = parse_json(json_text);
    ObjectReader r(j, "comparison");
    json base_json = r.has("base") ? r.child("base") : json::object();
    base = read_scenario(base_json);
    base.validate();
    if (!r.has("variants") || !r.child("variants").is_array() ||
        r.child("variants").empty()) {
      throw ConfigError("comparison.variants must be a non-empty list");
    }
    std::vector<Variant> out;
    for (const auto& v : r.child("variants")) {
      if (!v.is_object() || !v.contains("name") || !v["name"].is_string()) {
        throw ConfigError("every variant needs a string name");
      }
      json patch = v;
      patch.erase("name");
      json merged = base_json;
      merged.merge_patch(patch);
      ScenarioConfig cfg = read_scenario(merged);
      cfg.validate();
      out.push_back({v["name"].get<std::string>(), cfg});
    }
    return out;
  });
}

std::string scenario_to_json(const ScenarioConfig& c) {
  const auto& t = c.track;
  const auto& v = c.vehicle;
  const auto& g = v.v_loop_gains;
  json j = {
      {"track",
       {{"shape", t.shape == TrackShape::kStraight ? "straight" : "test_track"},
        {"x_c", t.params.x_c},
        {"m", t.params.m},
        {"w", t.params.w},
        {"L", t.params.L},
        {"R_c", t.params.R_c},
        {"r_c", t.params.r_c},
        {"lane", lane_name(t.lane)},
        {"straight_length", t.straight_length}}},
      {"vehicle",
       {{"wheelbase", v.wheelbase},
        {"axle_track", v.axle_track},
        {"delta_max", v.delta_max},
        {"tau", v.tau},
        {"tau_d", v.tau_d},
        {"v_loop_gains",
         {{"kp", g.kp},
          {"ki", g.ki},
          {"kd", g.kd},
          {"i_limit", g.i_limit},
          {"u_max", g.u_max}}},
        {"v_actuator_lag", v.v_actuator_lag}}},
      {"controller",
       {{"L_d", c.controller.L_d},
        {"K_D", c.controller.K_D},
        {"deriv_filter_tc", c.controller.deriv_filter_tc},
        {"delta_cmd_limit", c.controller.delta_cmd_limit},
        {"rate", c.controller.rate}}},
      {"velocity",
       {{"mode", c.velocity.mode == VelocityMode::kFixed ? "fixed" : "ppvr"},
        {"ppvr",
         {{"v_max", c.velocity.ppvr.v_max},
          {"a_max", c.velocity.ppvr.a_max},
          {"smooth_rate", c.velocity.ppvr.smooth_rate}}},
        {"fixed_speed", c.velocity.fixed_speed}}},
      {"sensor",
       {{"mode", c.sensor.mode == SensorMode::kIdeal ? "ideal" : "noisy"},
        {"rate", c.sensor.rate},
        {"latency", c.sensor.latency},
        {"noise_std", c.sensor.noise_std},
        {"bias", c.sensor.bias},
        {"quant_step", c.sensor.quant_step},
        {"L_d", c.sensor.L_d},
        {"rng_seed", c.sensor.rng_seed}}},
      {"dt", c.dt},
      {"duration",
       {{"unit", c.duration.unit == DurationUnit::kSeconds ? "seconds" : "laps"},
        {"value", c.duration.value}}},
      {"initial",
       {{"s", c.initial.s ? json(*c.initial.s) : json(nullptr)},
        {"e_y", c.initial.e_y},
        {"e_psi", c.initial.e_psi}}},
      {"direction", c.direction == Direction::kCounterclockwise
                        ? "counterclockwise"
                        : "clockwise"},
      {"rng_seed", c.rng_seed},
      {"off_track_threshold", c.off_track_threshold},
      {"trace_decimation", c.trace_decimation},
      {"max_time", c.max_time}};
  return j.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lanekeep
