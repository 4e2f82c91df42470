from __future__ import annotations

import math

import pytest

from sifted_mobius.constants import ConvergenceError, gamma_mn_closed
from sifted_mobius.hankel import HankelContourSpec, hankel_integral, hankel_upper_half, truncation_decay_scan
from sifted_mobius.series_asym import hankel_H

X40 = HankelContourSpec(cutoff=40.0)
X60 = HankelContourSpec(cutoff=60.0)


@pytest.mark.parametrize("m", range(0, 5))
@pytest.mark.parametrize("N", range(0, 6))
def test_contour_converges_to_closed_form(m, N):
    # with a longer contour the arm truncation is far below 1e-6 for every entry
    assert abs(hankel_integral(m, N, X60) - gamma_mn_closed(m, N)) < 1e-9


def test_truncation_error_at_forty_is_bounded_by_arm_tail():
    """The X=40 gap is the discarded arm, which shrinks once the contour is extended."""
    gaps = {(m, N): abs(hankel_integral(m, N, X40) - gamma_mn_closed(m, N)) for m in range(5) for N in range(6)}
    worst = max(gaps, key=gaps.get)
    assert worst == (4, 5)
    assert gaps[worst] < 1e-5
    assert abs(hankel_integral(4, 5, X60) - gamma_mn_closed(4, 5)) < gaps[worst] * 1e-4


def test_decay_scan():
    rows = truncation_decay_scan(1, 1, [10, 20, 30])
    errs = [r[2] for r in rows]
    assert errs[0] > errs[1] > errs[2]
    assert math.log(errs[0] / errs[1]) >= 5


def test_decay_scan_validates_cutoffs():
    with pytest.raises(ValueError):
        truncation_decay_scan(1, 1, [10, 20])
    with pytest.raises(ValueError):
        truncation_decay_scan(1, 1, [10, 30, 20])


@pytest.mark.parametrize("m,N", [(1, 0), (2, 1), (3, 2)])
def test_upper_half_symmetry(m, N):
    assert hankel_upper_half(m, N, X40) == pytest.approx(hankel_integral(m, N, X40), abs=1e-10)


def test_modulus_branch_loses_monodromy():
    # with log|w| the two arms cancel and the m=1 value is no longer Gamma_{1,0}
    assert abs(hankel_integral(1, 0, X40, "modulus") - 1.0) > 0.1


@pytest.mark.parametrize("i", [1, 2, 3])
@pytest.mark.parametrize("j", [1, 2, 3])
def test_hankel_index_convention(i, j):
    assert hankel_H(i, j) == pytest.approx(hankel_integral(j, i - 1, X40), abs=1e-6)


def test_spec_validation():
    with pytest.raises(ValueError):
        HankelContourSpec(cutoff=0)
    with pytest.raises(ValueError):
        HankelContourSpec(cutoff=10, arm_height=2.0)
    with pytest.raises(ValueError):
        hankel_integral(-1, 0, X40)
    assert issubclass(ConvergenceError, ArithmeticError)
