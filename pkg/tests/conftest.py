import numpy as np
import pytest

import drivenpacket as dp

ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        ACCEPTANCE_RESULTS[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(ACCEPTANCE_RESULTS):
        name = nodeid.split("::")[-1]
        outcome = ACCEPTANCE_RESULTS[nodeid]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture(scope="session")
def natural_params():
    return dp.PhysicalParams(m=1.0, A=1.0, omega=1.0, hbar=1.0)


@pytest.fixture(scope="session")
def packet():
    return dp.GaussianPacketSpec(k0=0.0, sigma_k=1.0, x0=0.0)


@pytest.fixture(scope="session")
def default_report():
    """The default scenario, grid widened for the S3 stretch, built once."""
    config, _ = dp.ensure_grid_support(dp.default_config(), strict=False)
    return dp.build_scheme_report(config)


@pytest.fixture(scope="session")
def zero_drive_report():
    """Same scenario with the drive switched off (A = 0)."""
    base = dp.default_config()
    import dataclasses

    config = dataclasses.replace(base, params=dp.PhysicalParams(1.0, 0.0, 1.0, 1.0))
    config, _ = dp.ensure_grid_support(config, strict=False)
    return dp.build_scheme_report(config)


@pytest.fixture(scope="session")
def seeded_orbit(natural_params):
    """20 seeded initial conditions integrated over 10 drive periods."""
    rng = np.random.default_rng(20260809)
    signs_x = rng.choice([-1.0, 1.0], 20)
    signs_v = rng.choice([-1.0, 1.0], 20)
    x0 = signs_x * rng.uniform(0.5, 2.0, 20)
    v0 = signs_v * rng.uniform(0.5, 2.0, 20)
    t_end = 10.0 * 2.0 * np.pi / natural_params.omega
    times, xs, vs = dp.rk4_orbit(natural_params, x0, v0, t_end, dt=1e-3, sample_stride=50)
    return x0, v0, times, xs, vs
