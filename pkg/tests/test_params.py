import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchaos import DegenerateAnisotropyError, derive_params

PAPER_POINT = dict(beta=0.8, gamma=0.4)
PAPER_COEFFS = {"a1": 0.9868, "a3": -0.5759, "a4": 0.1714, "a5": -0.2304, "b1": 0.2668}


def test_paper_coefficients_reproduced():
    p = derive_params(**PAPER_POINT)
    for name, ref in PAPER_COEFFS.items():
        assert abs(getattr(p, name) - ref) < 5e-4, name


def test_minus_branch_differs():
    plus = derive_params(0.8, 0.4, "plus")
    minus = derive_params(0.8, 0.4, "minus")
    assert plus.rho1 != minus.rho1
    assert plus.rho2 == -minus.rho2
    # the pinned default is the branch matching the printed values
    assert abs(minus.a4 - PAPER_COEFFS["a4"]) > 0.1


def test_zero_field_limit_exact():
    p = derive_params(0.0, 0.5)
    assert p.rho1 == 0.0 and p.rho2 == 0.0
    assert p.eta1 == 1.0
    assert p.eta2 == 0.5
    assert p.mu1 == pytest.approx(1.0, abs=1e-14)
    assert p.mu2 == pytest.approx(1.0, abs=1e-14)
    assert p.a4 == 0.0 and p.b1 == 0.0 and p.a2 == 0.0
    assert p.a3 == pytest.approx(-0.5, abs=1e-14)
    assert p.a5 == pytest.approx(-0.25, abs=1e-14)


def test_zero_field_limit_above_unity_gamma():
    p = derive_params(0.0, 1.5)
    assert p.eta1 == pytest.approx(1.0, abs=1e-12)
    assert p.eta2 == pytest.approx(1.5, abs=1e-12)


@given(beta=st.floats(1e-6, 2.0), gamma=st.floats(1e-3, 2.0))
@settings(max_examples=300, deadline=None)
def test_frequency_product_identity(beta, gamma):
    if abs(gamma - 1.0) < 1e-6:
        return
    p = derive_params(beta, gamma)
    assert abs(p.eta1 * p.eta2 - gamma) < 1e-12
    for name in ("eta1", "eta2", "mu1", "mu2"):
        assert getattr(p, name) > 0
    assert all(math.isfinite(getattr(p, n)) for n in
               ("rho1", "rho2", "a1", "a2", "a3", "a4", "a5", "b1", "b2",
                "cap_d", "cap_g"))


def test_identity_over_fixed_sample():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        beta = rng.uniform(1e-3, 2.0)
        gamma = rng.uniform(1e-3, 2.0)
        if abs(gamma - 1.0) < 1e-3:
            continue
        p = derive_params(beta, gamma)
        assert abs(p.eta1 * p.eta2 - gamma) < 1e-12


def test_paper_point_sign_invariants():
    p = derive_params(0.8, 0.4)
    assert p.a3 < 0 and p.a5 < 0


def test_degenerate_gamma_rejected():
    with pytest.raises(DegenerateAnisotropyError):
        derive_params(0.5, 1.0)


@pytest.mark.parametrize("beta,gamma", [(-0.1, 0.5), (0.5, 0.0), (0.5, -1.0)])
def test_domain_validation(beta, gamma):
    with pytest.raises(ValueError):
        derive_params(beta, gamma)


def test_unknown_branch_rejected():
    with pytest.raises(ValueError):
        derive_params(0.8, 0.4, branch="both")
