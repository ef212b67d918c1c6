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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lanekeep/config.hpp"
#include "lanekeep/errors.hpp"
#include "lanekeep/estimator.hpp"
#include "lanekeep/harness.hpp"
#include "lanekeep/stability.hpp"
#include "lanekeep/track.hpp"

namespace py = pybind11;
using namespace lanekeep;

namespace {

py::array_t<double> column(const std::vector<TraceRow>& rows,
                           double TraceRow::*field) {
  py::array_t<double> out(static_cast<py::ssize_t>(rows.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    view(static_cast<py::ssize_t>(i)) = rows[i].*field;
  }
  return out;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["eps_y_max"] = m.eps_y_max;
  d["eps_psi_max"] = m.eps_psi_max;
  d["rms_e_y"] = m.rms_e_y;
  d["lap_time"] = m.lap_time;
  d["mean_speed"] = m.mean_speed;
  d["off_track"] = m.off_track;
  return d;
}

TrackPath make_track(const TrackParams& params, const std::string& lane,
                     bool counterclockwise) {
  Lane l = Lane::kCenterline;
  if (lane == "inner") {
    l = Lane::kInnerLane;
  } else if (lane == "outer") {
    l = Lane::kOuterLane;
  } else if (lane != "centerline") {
    throw ConfigError("lane must be centerline, inner or outer");
  }
  return build_test_track(params, l, counterclockwise
                                         ? Direction::kCounterclockwise
                                         : Direction::kClockwise);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lane-keeping simulation and delay-stability analysis";

  auto base = py::register_exception<Error>(m, "LanekeepError",
                                            PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation",
                                              base.ptr());
  py::register_exception<OffTrackError>(m, "OffTrackError", base.ptr());
  py::register_exception<NoLookaheadError>(m, "NoLookaheadError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<InfeasibleTuningError>(m, "InfeasibleTuningError",
                                                 base.ptr());

  py::class_<TrackParams>(m, "TrackParams")
      .def(py::init<>())
      .def_readwrite("x_c", &TrackParams::x_c)
      .def_readwrite("m", &TrackParams::m)
      .def_readwrite("w", &TrackParams::w)
      .def_readwrite("L", &TrackParams::L)
      .def_readwrite("R_c", &TrackParams::R_c)
      .def_readwrite("r_c", &TrackParams::r_c)
      .def("validate", &TrackParams::validate);

  py::class_<PoseG>(m, "Pose")
      .def(py::init<>())
      .def(py::init([](double x, double y, double psi) {
             return PoseG{x, y, psi};
           }),
           py::arg("x"), py::arg("y"), py::arg("psi"))
      .def_readwrite("x", &PoseG::x)
      .def_readwrite("y", &PoseG::y)
      .def_readwrite("psi", &PoseG::psi);

  py::class_<LocalError>(m, "LocalError")
      .def_readonly("s", &LocalError::s)
      .def_readonly("e_y", &LocalError::e_y)
      .def_readonly("e_psi", &LocalError::e_psi);

  py::class_<PathPoint>(m, "PathPoint")
      .def_readonly("s", &PathPoint::s)
      .def_readonly("x", &PathPoint::x)
      .def_readonly("y", &PathPoint::y)
      .def_readonly("psi", &PathPoint::psi)
      .def_readonly("kappa", &PathPoint::kappa);

  py::class_<TrackPath>(m, "TrackPath")
      .def_property_readonly("total_length", &TrackPath::total_length)
      .def_property_readonly("closed", &TrackPath::closed)
      .def("point_at", [](const TrackPath& t, double s) { return point_at(t, s); })
      .def("project", [](const TrackPath& t, const PoseG& p) {
        return project(t, p);
      })
      .def("lookahead_point", &lookahead_point, py::arg("pose"),
           py::arg("L_d"), py::arg("s_hint"))
      .def("lhe", [](const TrackPath& t, const PoseG& p, double L_d,
                     double s_hint) { return lhe_global(t, p, L_d, s_hint); },
           py::arg("pose"), py::arg("L_d"), py::arg("s_hint"))
      .def("polyline", [](const TrackPath& t, double spacing) {
        const auto pts = sample_polyline(t, spacing);
        py::array_t<double> out({static_cast<py::ssize_t>(pts.size()),
                                 static_cast<py::ssize_t>(2)});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          v(static_cast<py::ssize_t>(i), 0) = pts[i].x;
          v(static_cast<py::ssize_t>(i), 1) = pts[i].y;
        }
        return out;
      }, py::arg("spacing") = 0.01);

  m.def("build_test_track", &make_track, py::arg("params") = TrackParams{},
        py::arg("lane") = "centerline", py::arg("counterclockwise") = false);
  m.def("build_straight_track", &build_straight_track, py::arg("length"));
  m.def("lle_straight", &lle_straight, py::arg("e_y"), py::arg("e_psi"),
        py::arg("L_d"));

  m.def("critical_delay",
        [](double v, double L_d, double K_D, double wheelbase, double tau) {
          const auto r =
              straight_loop_critical_delay({v, L_d, K_D, wheelbase, tau});
          py::dict d;
          d["critical_delay"] = r.critical_delay;
          d["delay_free_stable"] = r.delay_free_stable;
          py::list crossings;
          for (const auto& c : r.crossings) {
            crossings.append(py::make_tuple(c.omega, c.tau, c.sign));
          }
          d["crossings"] = crossings;
          return d;
        },
        py::arg("v"), py::arg("L_d"), py::arg("K_D"),
        py::arg("wheelbase") = 0.26, py::arg("tau") = 0.17);
  m.def("delay_free_stable",
        [](double v, double L_d, double K_D, double wheelbase, double tau) {
          return delay_free_stable({v, L_d, K_D, wheelbase, tau}).stable;
        },
        py::arg("v"), py::arg("L_d"), py::arg("K_D"),
        py::arg("wheelbase") = 0.26, py::arg("tau") = 0.17);
  m.def("routh_mu", &routh_mu, py::arg("k_star"));
  m.def("tune_kd",
        [](double v, double L_d, double wheelbase, double tau, double lo,
           double hi, int points) {
          const auto r = tune_kd(v, L_d, wheelbase, tau, {lo, hi, points});
          return py::make_tuple(r.K_D, r.critical_delay);
        },
        py::arg("v"), py::arg("L_d"), py::arg("wheelbase") = 0.26,
        py::arg("tau") = 0.17, py::arg("kd_min") = 0.0,
        py::arg("kd_max") = 0.6, py::arg("points") = 61);

  m.def("run_scenario",
        [](const std::string& config_json) {
          const ScenarioConfig cfg = parse_scenario(config_json);
          SimTrace trace;
          {
            py::gil_scoped_release release;
            trace = run_scenario(cfg);
          }
          py::dict d;
          d["t"] = column(trace.rows, &TraceRow::t);
          d["x"] = column(trace.rows, &TraceRow::x);
          d["y"] = column(trace.rows, &TraceRow::y);
          d["psi"] = column(trace.rows, &TraceRow::psi);
          d["v"] = column(trace.rows, &TraceRow::v);
          d["s"] = column(trace.rows, &TraceRow::s);
          d["e_y"] = column(trace.rows, &TraceRow::e_y);
          d["e_psi"] = column(trace.rows, &TraceRow::e_psi);
          d["alpha_true"] = column(trace.rows, &TraceRow::alpha_true);
          d["alpha_meas"] = column(trace.rows, &TraceRow::alpha_meas);
          d["delta_r"] = column(trace.rows, &TraceRow::delta_r);
          d["delta"] = column(trace.rows, &TraceRow::delta);
          d["v_ref"] = column(trace.rows, &TraceRow::v_ref);
          d["off_track"] = trace.off_track;
          d["metrics"] = metrics_dict(compute_metrics(trace));
          return d;
        },
        py::arg("config_json") = "{}",
        "Runs a scenario given as JSON; returns trace columns and metrics.");

  m.def("default_scenario_json",
        []() { return scenario_to_json(ScenarioConfig{}); });

  m.def("generate_dataset",
        [](double sigma_L, double sigma_psi, std::int64_t n,
           std::vector<double> L_d_list, std::uint64_t seed) {
          DatasetConfig cfg;
          cfg.sigma_L = sigma_L;
          cfg.sigma_psi = sigma_psi;
          cfg.N = n;
          cfg.L_d_list = std::move(L_d_list);
          cfg.rng_seed = seed;
          const auto recs = generate_dataset(TrackParams{}, Lane::kCenterline,
                                             cfg);
          const auto rows = static_cast<py::ssize_t>(recs.size());
          const auto cols = static_cast<py::ssize_t>(cfg.L_d_list.size());
          py::array_t<double> poses({rows, static_cast<py::ssize_t>(4)});
          py::array_t<double> labels({rows, cols});
          auto p = poses.mutable_unchecked<2>();
          auto l = labels.mutable_unchecked<2>();
          for (py::ssize_t i = 0; i < rows; ++i) {
            const auto& r = recs[static_cast<std::size_t>(i)];
            p(i, 0) = r.s_ref;
            p(i, 1) = r.pose.x;
            p(i, 2) = r.pose.y;
            p(i, 3) = r.pose.psi;
            for (py::ssize_t k = 0; k < cols; ++k) {
              const auto& label = r.labels[static_cast<std::size_t>(k)];
              l(i, k) = label ? *label : std::nan("");
            }
          }
          return py::make_tuple(poses, labels);
        },
        py::arg("sigma_L") = 0.06, py::arg("sigma_psi") = deg_to_rad(12.0),
        py::arg("n") = 1000,
        py::arg("L_d_list") = std::vector<double>{0.5},
        py::arg("seed") = 0,
        "Returns (poses [s_ref, x, y, psi], labels) with NaN for undefined "
        "labels.");
}
