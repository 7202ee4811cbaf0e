import numpy as np
import pytest

from qchaos import (
    ControllerConfig,
    PhaseState,
    derive_params,
    excited_state_field,
    integrate,
    simulate_sync,
)
from qchaos.reproduce import (
    CONTROLLED_T_FINAL,
    DT,
    STRIDE,
    TABLE51_MASTER,
    TABLE51_SLAVES,
    TABLE53_MASTER,
    TABLE53_SLAVE,
    UNCONTROLLED_T_FINAL,
)


@pytest.fixture(scope="session")
def paper_params():
    return derive_params(0.8, 0.4)


@pytest.fixture(scope="session")
def uncontrolled_runs(paper_params):
    """The three chaos-grading trajectories at the frozen scenario constants."""
    field = excited_state_field(paper_params)
    return {
        ic: integrate(field, PhaseState(*ic), UNCONTROLLED_T_FINAL, DT, STRIDE)
        for ic in TABLE51_SLAVES
    }


@pytest.fixture(scope="session")
def sync_runs(paper_params):
    """Three slaves controlled onto the shared master orbit."""
    cfg = ControllerConfig()
    return {
        ic: simulate_sync(paper_params, cfg, PhaseState(*TABLE51_MASTER),
                          PhaseState(*ic), CONTROLLED_T_FINAL, DT, STRIDE)
        for ic in TABLE51_SLAVES
    }


@pytest.fixture(scope="session")
def strong_sync_run(paper_params):
    """Strong-chaos pair: identical real starts, perturbed imaginary parts."""
    cfg = ControllerConfig()
    return simulate_sync(paper_params, cfg, PhaseState(*TABLE53_MASTER),
                         PhaseState(*TABLE53_SLAVE), CONTROLLED_T_FINAL, DT, STRIDE)


def criterion(number: int, name: str, ok: bool, detail: str) -> None:
    """One pass/fail line per acceptance check; assertion carries the detail."""
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'} {name}: {detail}"
    print(line)
    assert ok, line
