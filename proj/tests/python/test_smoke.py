# Copyright 2026 The lanekeep Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import lanekeep as lk


def test_track_geometry():
    track = lk.build_test_track()
    assert track.closed
    assert track.total_length == pytest.approx(
        math.pi * 1.04 + math.pi * 0.65 + 2 * 2.0 + 2 * (1.04 - 0.65), rel=1e-12)
    p = track.point_at(1.0)
    err = track.project(lk.Pose(p.x, p.y, p.psi))
    assert err.s == pytest.approx(1.0, abs=1e-9)
    assert err.e_y == pytest.approx(0.0, abs=1e-9)
    poly = track.polyline(0.05)
    assert poly.shape[1] == 2
    assert np.allclose(poly[0], poly[-1], atol=1e-9)


def test_lookahead_on_straight():
    road = lk.build_straight_track(10.0)
    alpha = road.lhe(lk.Pose(2.0, -0.25, 0.0), 0.5, 2.0)
    assert alpha == pytest.approx(math.pi / 6, abs=1e-12)
    assert math.asin(lk.lle_straight(0.25, 0.0, 0.5) / 0.5) == pytest.approx(alpha)
    with pytest.raises(lk.DomainError):
        lk.lle_straight(0.6, 0.0, 0.5)


def test_stability_analysis():
    report = lk.critical_delay(1.0, 0.5, 0.2)
    assert report["delay_free_stable"]
    assert report["critical_delay"] > 0.15
    assert lk.routh_mu(0.0) == 1.0
    assert lk.critical_delay(1.0, 0.15, 0.0)["critical_delay"] == 0.0
    k_d, delay = lk.tune_kd(1.0, 0.8)
    assert k_d == pytest.approx(0.18, abs=0.02)
    assert delay == pytest.approx(lk.critical_delay(1.0, 0.8, k_d)["critical_delay"])
    with pytest.raises(lk.InfeasibleTuningError):
        lk.tune_kd(2.0, 0.05, kd_min=0.0, kd_max=0.05, points=11)


def test_run_scenario():
    cfg = json.loads(lk.default_scenario_json())
    cfg["duration"] = {"unit": "laps", "value": 1}
    out = lk.run_scenario(json.dumps(cfg))
    assert not out["off_track"]
    t = out["t"]
    assert isinstance(t, np.ndarray) and t.ndim == 1
    assert np.all(np.diff(t) > 0)
    assert len(out["e_y"]) == len(t)
    assert out["metrics"]["eps_y_max"] == pytest.approx(np.max(np.abs(out["e_y"])))
    again = lk.run_scenario(json.dumps(cfg))
    assert np.array_equal(out["alpha_meas"], again["alpha_meas"])


def test_run_scenario_rejects_unknown_keys():
    with pytest.raises(lk.ConfigError):
        lk.run_scenario('{"controler": {"L_d": 0.5}}')


def test_dataset():
    poses, labels = lk.generate_dataset(n=2000, L_d_list=[0.3, 0.5], seed=4)
    assert poses.shape == (2000, 4)
    assert labels.shape == (2000, 2)
    track = lk.build_test_track()
    for row, label in zip(poses[:50], labels[:50]):
        if not math.isnan(label[1]):
            pose = lk.Pose(row[1], row[2], row[3])
            assert track.lhe(pose, 0.5, row[0]) == pytest.approx(label[1], abs=1e-12)
    poses2, labels2 = lk.generate_dataset(n=2000, L_d_list=[0.3, 0.5], seed=4)
    assert np.array_equal(poses, poses2)
    assert np.array_equal(labels, labels2, equal_nan=True)
