"""Shared fixtures and the acceptance summary.

Every test in test_acceptance.py gets one PASS/FAIL line in the
terminal summary, so the acceptance status is readable at a glance
even in a long -v run.
"""

import pytest

from hexprint.run import run_scenario
from hexprint.scenario import default_scenario

_ACCEPTANCE_FILE = "test_acceptance.py"

_LABELS = {
    "test_attitude_commands_stay_clamped":
        "1/8 attitude commands stay inside the clamp band",
    "test_square_print_tracks_within_tolerance":
        "2/8 square print holds 1 cm accuracy in steady sliding",
    "test_corner_clumps_and_gating":
        "3/8 dwells clump material; gating the extruder removes the clumps",
    "test_bias_calibration_recovers_offsets":
        "4/8 hover calibration recovers injected attitude offsets",
    "test_thrust_compensation_flattens_friction":
        "5/8 voltage compensation keeps sliding friction near constant",
    "test_closed_form_formulas":
        "6/8 voltage and thrust formulas match their closed forms",
    "test_determinism_and_step_refinement":
        "7/8 seeded runs reproduce exactly; halving the physics step barely moves the bead",
    "test_bead_volume_conservation":
        "8/8 deposited volume equals flow rate times extruding time",
}

_results: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE_FILE not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name not in _LABELS:
        return
    if report.when == "call":
        _results[name] = report.outcome
    elif report.failed:  # setup/teardown error
        _results[name] = "error"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance checks")
    for name, label in _LABELS.items():
        if name not in _results:
            continue
        word = "PASS" if _results[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{label}: {word}")


@pytest.fixture(scope="session")
def line_run():
    """One completed run of the built-in line path, shared read-only."""
    scenario = default_scenario("line", seed=5)
    trace = run_scenario(scenario)
    assert trace.status == "complete"
    return scenario, trace
