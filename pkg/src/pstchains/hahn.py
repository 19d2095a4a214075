"""Grid realization of the quadratic Hahn algebra behind the para-Krawtchouk family."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bilattice import BiLatticeSpec, make_spectrum, parse_gamma
from .orthopoly import PolynomialTable, RecurrenceCoefficients, evaluate_polynomials
from .parakrawtchouk import difference_operator, grid_table, para_coefficients


def _norm(mat: np.ndarray) -> float:
    return float(np.abs(mat).sum(axis=1).max()) if mat.size else 0.0


def _anti(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


@dataclass(frozen=True)
class AlgebraRealization:
    """X = multiplication by x, Y = the bi-lattice difference operator, Z = [X, Y].

    The ``_alg`` suffix on the structure constants keeps them apart from
    the coprime integers M1/M2 of gamma.
    """

    n_top: int
    gamma: Fraction
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    c1: float
    c2: float
    g_const: float
    m1_alg: float
    m2_alg: float
    q_expected: float

    @property
    def scale(self) -> float:
        """Largest infinity norm among the products entering the relations."""
        X, Y, Z = self.X, self.Y, self.Z
        return max(_norm(m) for m in (X, Y, Z, Y @ Z, Z @ X, X @ Y, X @ X, Z @ Z, Y @ Y, X @ X @ Y))


def realize(n_top: int, gamma) -> AlgebraRealization:
    spec = BiLatticeSpec(n_top, parse_gamma(gamma))
    big_n, g = spec.n_top, spec.gamma
    X = np.diag(make_spectrum(spec))
    Y = difference_operator(big_n, g).grid_matrix
    Z = X @ Y - Y @ X
    c1 = 4 * (1 - big_n**2)
    c2 = -4
    g_const = 4 * (big_n + g - 1)
    m1_alg = 2 * (big_n + g - 1) * (big_n**2 - 1)
    m2_alg = 2 * (1 - big_n) * (big_n + g - 1)
    q = (big_n - 1) * (big_n + g - 1) * (big_n**2 - 2 * big_n + g * (big_n + 3) - 7)
    return AlgebraRealization(
        big_n, g, X, Y, Z,
        float(c1), float(c2), float(g_const), float(m1_alg), float(m2_alg), float(q),
    )


def commutator_residuals(a: AlgebraRealization) -> tuple[float, float]:
    """Infinity-norm defects of the two quadratic commutation relations."""
    X, Y, Z = a.X, a.Y, a.Z
    eye = np.eye(len(X))
    r1 = Y @ Z - Z @ Y + 4 * _anti(X, Y) - a.c1 * X - a.g_const * Y - a.m1_alg * eye
    r2 = Z @ X - X @ Z + 4 * X @ X - a.c2 * Y - a.g_const * X - a.m2_alg * eye
    return _norm(r1), _norm(r2)


class CasimirReport(NamedTuple):
    q_measured: float
    deviation: float
    q_expected: float
    commutator_x: float
    commutator_y: float
    commutator_z: float
    scale: float


def casimir_matrix(a: AlgebraRealization) -> np.ndarray:
    X, Y, Z = a.X, a.Y, a.Z
    X2 = X @ X
    return (
        Z @ Z
        - 4 * _anti(X2, Y)
        + (a.c1 + 16) * X2
        + a.c2 * Y @ Y
        + a.g_const * _anti(X, Y)
        + (2 * a.m1_alg - 4 * a.g_const) * X
        + 2 * a.m2_alg * Y
    )


def casimir_check(a: AlgebraRealization) -> CasimirReport:
    """Measure the Casimir value and how far Q is from a central scalar.

    ``q_measured`` is the mean diagonal entry of Q; the matrix value is what
    counts, ``q_expected`` is the closed form kept for comparison.
    """
    Q = casimir_matrix(a)
    q = float(np.trace(Q) / len(Q))
    dev = _norm(Q - q * np.eye(len(Q)))
    comm = [_norm(Q @ M - M @ Q) for M in (a.X, a.Y, a.Z)]
    scale = max(a.scale, _norm(Q))
    return CasimirReport(q, dev, a.q_expected, *comm, scale)


def y_spectrum(a: AlgebraRealization) -> np.ndarray:
    return difference_operator(a.n_top, a.gamma).spectrum()


def eigenbasis_check(
    a: AlgebraRealization,
    rc: RecurrenceCoefficients | None = None,
    table: PolynomialTable | None = None,
) -> float:
    """Check Y pi_n = 2n(n-N) pi_n and X pi_n = pi_{n+1} + b_n pi_n + U_n pi_{n-1}.

    ``pi_n`` is the grid vector of P_n.  Without an explicit ``table`` the
    vectors come from :func:`grid_table` when ``rc`` is omitted or exact,
    else from float evaluation of ``rc``.  Returns the largest residual
    divided by max|pi_n| of the row concerned.
    """
    size = a.n_top + 1
    if rc is not None and rc.size != size:
        raise ValueError(f"recurrence has {rc.size} polynomials, realization has {size} points")
    if table is None:
        if rc is None or rc.exact:
            table = grid_table(a.n_top, a.gamma)
        else:
            table = evaluate_polynomials(rc, np.diag(a.X))
    if rc is None:
        rc = para_coefficients(a.n_top, a.gamma)
    rc = rc.to_float() if rc.exact else rc
    pi = np.asarray(table.values, dtype=float)
    if pi.shape[1] != size:
        raise ValueError("table and realization sizes differ")
    worst = 0.0
    x = np.diag(a.X)
    for n in range(size):
        row_scale = max(np.abs(pi[n]).max(), np.finfo(float).tiny)
        lam = 2 * n * (n - a.n_top)
        ry = a.Y @ pi[n] - lam * pi[n]
        three = pi[n + 1] + rc.b[n] * pi[n]
        if n > 0:
            three = three + rc.u[n - 1] * pi[n - 1]
        rx = x * pi[n] - three
        worst = max(worst, np.abs(ry).max() / row_scale, np.abs(rx).max() / row_scale)
    return float(worst)


def verification_report(a: AlgebraRealization) -> dict:
    r1, r2 = commutator_residuals(a)
    cas = casimir_check(a)
    return {
        "n": a.n_top,
        "gamma": str(a.gamma),
        "constants": {
            "c1": a.c1,
            "c2": a.c2,
            "g": a.g_const,
            "m1_alg": a.m1_alg,
            "m2_alg": a.m2_alg,
        },
        "scale": cas.scale,
        "commutator_residuals": [r1, r2],
        "q_measured": cas.q_measured,
        "q_expected": cas.q_expected,
        "q_discrepancy": abs(cas.q_measured - cas.q_expected),
        "casimir_deviation": cas.deviation,
        "casimir_commutators": [cas.commutator_x, cas.commutator_y, cas.commutator_z],
        "eigenbasis_residual": eigenbasis_check(a),
    }
