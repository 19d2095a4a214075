from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pstchains import exact
from pstchains.orthopoly import (
    DiscreteMeasure,
    PoisonedEvaluationError,
    RecurrenceCoefficients,
    check_orthogonality,
    evaluate_polynomials,
    hyp_terminating,
    pochhammer,
)
from pstchains.parakrawtchouk import para_coefficients

POINTS = [F(0), F(1, 3), F(2), F(7, 3)]
WEIGHTS = [F(5, 24), F(7, 24), F(7, 24), F(5, 24)]


def test_row_zero_is_ones():
    rc = para_coefficients(5, F(3, 5))
    table = evaluate_polynomials(rc, np.linspace(-1, 6, 9))
    assert np.all(table.row(0) == 1.0)


def test_p1_exact_value():
    rc = para_coefficients(3, F(1, 3), exact=True)
    table = evaluate_polynomials(rc, [F(7, 3)])
    assert table.values[1, 0] == F(7, 6)


def test_top_row_vanishes_on_spectrum():
    rc = para_coefficients(3, F(1, 3))
    table = evaluate_polynomials(rc, [float(p) for p in POINTS])
    assert np.abs(table.row(4)).max() < 1e-12
    # root-product oracle at an off-grid point
    off = evaluate_polynomials(rc, [1.0]).row(4)[0]
    assert off == pytest.approx(float(exact.root_product(POINTS, 1)), rel=1e-13)


def test_rejects_nonpositive_u():
    with pytest.raises(ValueError):
        RecurrenceCoefficients([0.0, 0.0], [0.0])
    with pytest.raises(ValueError):
        RecurrenceCoefficients([0.0, 0.0, 0.0], [1.0])


def test_norms_empty_product():
    rc = para_coefficients(3, F(1, 3), exact=True)
    assert rc.norms()[0] == 1
    assert rc.norms()[2] == F(35, 36) * F(1, 9)


def test_orthogonality_exact_and_float():
    rc = para_coefficients(3, F(1, 3), exact=True)
    assert check_orthogonality(rc, DiscreteMeasure(POINTS, WEIGHTS)) == 0
    m = DiscreteMeasure([float(p) for p in POINTS], [float(w) for w in WEIGHTS])
    assert check_orthogonality(rc.to_float(), m) < 1e-13


def test_orthogonality_detects_perturbed_weight():
    rc = para_coefficients(3, F(1, 3))
    w = np.array([float(v) for v in WEIGHTS])
    w[1] += 1e-3
    m = DiscreteMeasure([float(p) for p in POINTS], w)
    assert check_orthogonality(rc, m) > 1e-4


def test_orthogonality_size_mismatch():
    rc = para_coefficients(3, F(1, 3))
    with pytest.raises(ValueError):
        check_orthogonality(rc, DiscreteMeasure([0.0, 1.0], [1.0, 1.0]))


def test_measure_normalizes_and_rejects_duplicates():
    m = DiscreteMeasure([0.0, 1.0, 2.0], [1.0, 2.0, 1.0])
    assert m.weights.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        DiscreteMeasure([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        DiscreteMeasure([0.0, 1.0], [1.0, -1.0])


@pytest.mark.parametrize("a, n, expected", [(2.5, 0, 1), (1, 5, 120), (-3, 5, 0), (F(1, 2), 3, F(15, 8))])
def test_pochhammer(a, n, expected):
    assert pochhammer(a, n) == expected


def test_chu_vandermonde():
    assert hyp_terminating([-2, 1], [3]) == F(1, 2)


@given(
    j=st.integers(0, 8),
    b=st.fractions(min_value=-5, max_value=5, max_denominator=7),
    c=st.fractions(min_value=F(1, 7), max_value=9, max_denominator=7),
)
@settings(max_examples=60, deadline=None)
def test_chu_vandermonde_property(j, b, c):
    assert hyp_terminating([-j, b], [c]) == pochhammer(c - b, j) / pochhammer(c, j)


def test_two_term_and_trivial_sums():
    assert hyp_terminating([-1, F(2)], [F(5)]) == 1 - F(2, 5)
    assert hyp_terminating([0, 3.3, 1.1], [0.4, 2.0]) == 1


def test_poisoned_denominator():
    with pytest.raises(PoisonedEvaluationError):
        hyp_terminating([-3, 1], [-1])
    # the pole sits beyond the terminating index, so the sum is fine
    assert hyp_terminating([-1, 1], [-2]) == 1 + F(-1 * 1, -2)


def test_gram_schmidt_oracle_matches_closed_form():
    b, u = exact.gram_schmidt_coefficients(POINTS, WEIGHTS)
    rc = para_coefficients(3, F(1, 3), exact=True)
    assert b == list(rc.b) and u == list(rc.u)
