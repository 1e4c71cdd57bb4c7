import json

import pytest

from parset import InvalidArgumentError, Verdict
from parset.experiment import ExperimentConfig, load_experiment_config, run_verify_experiment
from parset.suite import (
    FULL,
    SUITES,
    SuiteConfig,
    profile_from_samples,
    run_suite,
)


def test_profile_full_and_smoke():
    assert profile_from_samples(None) is FULL
    smoke = profile_from_samples(100)
    assert smoke.mc_samples == 100
    assert smoke.raster_instances == 2
    assert smoke.halfspace_samples >= 1000
    assert profile_from_samples(10**6) is FULL


def test_suites_cover_all_checks():
    named = set()
    for name, checks in SUITES.items():
        if name != "all":
            named.update(checks)
    assert set(SUITES["all"]) == named


def test_run_suite_unknown_name():
    with pytest.raises(InvalidArgumentError):
        run_suite("bogus", SuiteConfig(seed=1))


def test_run_suite_writes_outputs(tmp_path):
    cfg = SuiteConfig(seed=7, samples=1500, out_dir=str(tmp_path), fmt="json")
    manifest = run_suite("brunn-minkowski", cfg)
    assert manifest.all_pass()
    rows = json.loads((tmp_path / "results.json").read_text())
    assert rows and rows[0]["suite"] == "brunn-minkowski"
    meta = json.loads((tmp_path / "manifest.json").read_text())
    assert meta["all_pass"] is True
    assert meta["wall_time_s"] > 0.0


def test_run_suite_deterministic_results(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        run_suite("epi", SuiteConfig(seed=3, samples=1500, out_dir=str(out)))
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()


def test_experiment_config_validation(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps({"name": "x", "module": "bounds", "seed": 1, "oops": 2}))
    with pytest.raises(InvalidArgumentError, match="oops"):
        load_experiment_config(path)
    path.write_text(json.dumps({"name": "x", "module": "nope", "seed": 1}))
    with pytest.raises(InvalidArgumentError, match="module"):
        load_experiment_config(path)
    path.write_text(json.dumps({"name": "x", "module": "bounds"}))
    with pytest.raises(InvalidArgumentError, match="seed"):
        load_experiment_config(path)


def test_verify_experiment_not_compared():
    # premise violated: points spread wider than the dilation radius
    cfg = ExperimentConfig(
        name="wide",
        module="bounds",
        parameters={
            "points": [[0.0, 0.0], [9.0, 0.0]],
            "norm": "l2",
            "radius": 1.0,
            "samples": 5000,
            "checks": ["union-in-ball", "volume-constrained"],
        },
        seed=2,
    )
    reports = run_verify_experiment(cfg)
    by_name = {r.bound_name: r for r in reports}
    assert by_name["union-in-ball"].verdict is Verdict.NOT_COMPARED
    assert by_name["volume-constrained"].verdict is Verdict.PASS
