"""Closed-form para-Krawtchouk objects and the complementary Bannai-Ito link."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass
from fractions import Fraction

import numpy as np

from .bilattice import BiLatticeSpec, closed_form_weights, make_spectrum, parse_gamma, pst_weights
from .inverse import christoffel_coefficient_map
from .orthopoly import (
    PolynomialTable,
    RecurrenceCoefficients,
    as_vector,
    evaluate_polynomials,
    hyp_terminating,
    pochhammer,
    recurrence_values,
)

ODD_CHAIN_RTOL = 1e-9


def _spec(n_top, gamma) -> BiLatticeSpec:
    return BiLatticeSpec(n_top, parse_gamma(gamma))


def _cast(values, exact: bool) -> list:
    return list(values) if exact else [float(v) for v in values]


def para_coefficients(n_top: int, gamma, exact: bool = False) -> RecurrenceCoefficients:
    """Recurrence coefficients of the para-Krawtchouk polynomials.

    B_n = (N - 1 + gamma) / 2 for every n and
    U_n = n (N+1-n) ((N+1-2n)^2 - gamma^2) / (4 (N-2n) (N-2n+2)).
    """
    spec = _spec(n_top, gamma)
    big_n, g = spec.n_top, spec.gamma
    b = [(big_n - 1 + g) / 2] * (big_n + 1)
    u = [
        Fraction(n * (big_n + 1 - n)) * ((big_n + 1 - 2 * n) ** 2 - g**2)
        / (4 * (big_n - 2 * n) * (big_n - 2 * n + 2))
        for n in range(1, big_n + 1)
    ]
    return RecurrenceCoefficients(
        np.array(_cast(b, exact), dtype=object if exact else float),
        np.array(_cast(u, exact), dtype=object if exact else float),
    )


def ac_factors(n_top: int, gamma, exact: bool = False):
    """Factors (A_n, C_n), n = 0..N, with U_n = A_{n-1} C_n and B_n = -A_n - C_n.

    These A_n are the negatives of the Christoffel ratios P_{n+1}(x_N)/P_n(x_N);
    transform code uses the ratios directly.
    """
    spec = _spec(n_top, gamma)
    big_n, g = spec.n_top, spec.gamma
    a = [Fraction((big_n - n)) * (big_n - 1 - 2 * n + g) / (2 * (2 * n - big_n)) for n in range(big_n + 1)]
    c = [Fraction(n) * (big_n + 1 - 2 * n - g) / (2 * (2 * n - big_n)) for n in range(big_n + 1)]
    return _cast(a, exact), _cast(c, exact)


def odd_chain_closed_form(n_top: int, gamma, exact: bool = False) -> RecurrenceCoefficients:
    """Closed-form recurrence data of the N-point chain left after removing x_N.

    U~_n = n (N-n) ((2n-N)^2 - (gamma-1)^2) / (4 (2n-N)^2) and
    B~_n = (N+gamma)/2 - 1 + (gamma-1) N / 4 * (1/(2n-N) - 1/(2n+2-N)).
    """
    spec = _spec(n_top, gamma)
    big_n, g = spec.n_top, spec.gamma
    b = [
        (big_n + g) / 2 - 1
        + (g - 1) * big_n / 4 * (Fraction(1, 2 * n - big_n) - Fraction(1, 2 * n + 2 - big_n))
        for n in range(big_n)
    ]
    u = [
        Fraction(n * (big_n - n)) * ((2 * n - big_n) ** 2 - (g - 1) ** 2)
        / (4 * (2 * n - big_n) ** 2)
        for n in range(1, big_n)
    ]
    return RecurrenceCoefficients(
        np.array(_cast(b, exact), dtype=object if exact else float),
        np.array(_cast(u, exact), dtype=object if exact else float),
    )


def odd_chain_coefficients(n_top: int, gamma, exact: bool = False) -> RecurrenceCoefficients:
    """Recurrence data of the odd-count chain on x_0..x_{N-1}.

    Produced by the generic Christoffel transform at x_N and cross-checked
    against :func:`odd_chain_closed_form`; a disagreement raises.
    """
    spec = _spec(n_top, gamma)
    rc = para_coefficients(spec.n_top, spec.gamma, exact=exact)
    measure = pst_weights(make_spectrum(spec, exact=exact))
    out = christoffel_coefficient_map(rc, measure)
    ref = odd_chain_closed_form(spec.n_top, spec.gamma, exact=exact)
    diff = max(
        [abs(p - q) for p, q in zip(out.b, ref.b)]
        + [abs(p - q) / abs(q) for p, q in zip(out.u, ref.u)]
    )
    if diff > (0 if exact else ODD_CHAIN_RTOL * max(1.0, float(spec.n_top))):
        raise ArithmeticError(
            f"Christoffel transform and closed form disagree by {float(diff):.3e}"
        )
    return out


def grid_table(n_top: int, gamma) -> PolynomialTable:
    """P_0..P_{N+1} on the bi-lattice, evaluated exactly and returned as floats.

    Forward float evaluation of high-degree P_n at the outer grid points,
    where the weights are tiny, loses up to ~1e-6 relative accuracy by
    N = 31.  Rational evaluation sidesteps that at negligible cost.
    """
    spec = _spec(n_top, gamma)
    rc = para_coefficients(spec.n_top, spec.gamma, exact=True)
    table = evaluate_polynomials(rc, make_spectrum(spec, exact=True))
    return PolynomialTable(table.points.astype(float), table.values.astype(float))


@dataclass(frozen=True)
class DifferenceOperator:
    """E(x) f(x+2) + F(x) f(x-2) - (E(x)+F(x)) f(x) on the bi-lattice."""

    n_top: int
    gamma: Fraction

    def __post_init__(self):
        spec = _spec(self.n_top, self.gamma)
        object.__setattr__(self, "gamma", spec.gamma)

    @property
    def points(self) -> np.ndarray:
        return make_spectrum(BiLatticeSpec(self.n_top, self.gamma))

    def e_coeff(self, x):
        g = float(self.gamma) if not isinstance(x, Fraction) else self.gamma
        return (x - self.n_top + 1) * (x - self.n_top + 1 - g) / 2

    def f_coeff(self, x):
        g = float(self.gamma) if not isinstance(x, Fraction) else self.gamma
        return x * (x - g) / 2

    @property
    def grid_matrix(self) -> np.ndarray:
        """Matrix of the operator acting on values at the N + 1 grid points.

        x_s + 2 = x_{s+2}, so row s couples s and s +- 2.  Shifts that would
        leave the grid carry a coefficient that vanishes exactly there.
        """
        exact_pts = make_spectrum(BiLatticeSpec(self.n_top, self.gamma), exact=True)
        size = self.n_top + 1
        mat = np.zeros((size, size))
        for s, xs in enumerate(exact_pts):
            e, f = self.e_coeff(xs), self.f_coeff(xs)
            if s + 2 < size:
                mat[s, s + 2] = float(e)
            elif e != 0:
                raise ArithmeticError(f"E(x_{s}) = {e} does not vanish at the top boundary")
            if s - 2 >= 0:
                mat[s, s - 2] = float(f)
            elif f != 0:
                raise ArithmeticError(f"F(x_{s}) = {f} does not vanish at the bottom boundary")
            mat[s, s] = -float(e + f)
        return mat

    def spectrum(self) -> np.ndarray:
        """Eigenvalues of :attr:`grid_matrix`, ascending.

        The operator is self-adjoint for the bi-lattice weights, so
        W^(1/2) Y W^(-1/2) is symmetric and ``eigvalsh`` applies.  A plain
        nonsymmetric solve loses ~1e-10 on the doubly degenerate values.
        """
        w = closed_form_weights(BiLatticeSpec(self.n_top, self.gamma)).weights
        root = np.sqrt(w)
        sym = root[:, None] * self.grid_matrix / root[None, :]
        return np.linalg.eigvalsh((sym + sym.T) / 2)


def difference_operator(n_top: int, gamma) -> DifferenceOperator:
    return DifferenceOperator(n_top, parse_gamma(gamma))


def difference_apply(op: DifferenceOperator, table: PolynomialTable) -> np.ndarray:
    """Residual of the eigen-equation Y P_n = 2n(n-N) P_n at every grid point.

    Returns a matrix indexed (n, s) for n = 0..N.
    """
    pts = np.asarray(table.points, dtype=float)
    grid = op.points
    if pts.shape != grid.shape or not np.allclose(pts, grid, rtol=1e-12, atol=1e-12):
        raise ValueError("table is not evaluated on the bi-lattice grid of the operator")
    size = op.n_top + 1
    vals = np.asarray(table.values[:size], dtype=float)
    lam = np.array([2 * n * (n - op.n_top) for n in range(size)], dtype=float)
    return vals @ op.grid_matrix.T - lam[:, None] * vals


def characteristic_factorization(n_top: int, gamma, x):
    """P_{N+1}(x) from the two-Pochhammer factorization, N = 2M + 1.

    const * ((gamma - x)/2)_{M+1} * ((x - 2M)/2)_{M+1} with
    const = (-4)^{M+1}, which makes the product monic.
    """
    spec = _spec(n_top, gamma)
    big_m = (spec.n_top - 1) // 2
    g = spec.gamma if isinstance(x, Fraction) else float(spec.gamma)
    const = (-4) ** (big_m + 1)
    return const * pochhammer((g - x) / 2, big_m + 1) * pochhammer((x - 2 * big_m) / 2, big_m + 1)


@dataclass(frozen=True)
class CBIParams:
    """Parameters (r1, r2, rho1, rho2) of the complementary Bannai-Ito recurrence."""

    r1: float
    r2: float
    rho1: float
    rho2: float

    @property
    def g(self):
        return self.rho1 + self.rho2 - self.r1 - self.r2

    @classmethod
    def para_krawtchouk(cls, n_top: int, gamma) -> "CBIParams":
        """r2 = rho2 = 0, r1 = (N+1+gamma)/4, rho1 = (gamma-N-3)/4 (exact)."""
        spec = _spec(n_top, gamma)
        big_n, g = spec.n_top, spec.gamma
        return cls(
            r1=(big_n + 1 + g) / 4,
            r2=Fraction(0),
            rho1=(g - big_n - 3) / 4,
            rho2=Fraction(0),
        )


def cbi_coefficients(p: CBIParams, count: int):
    """Diagonal (-1)^n rho2 and off-diagonal v_n for n = 0..count-1.

    ``v[0]`` is 0 by convention (it multiplies W_{-1} = 0).
    """
    half = Fraction(1, 2) if isinstance(p.g, Fraction) else 0.5
    g = p.g
    diag, v = [], []
    for n in range(count):
        diag.append((-1) ** n * p.rho2)
        if n == 0:
            v.append(0 * g)
            continue
        m, odd = divmod(n, 2)
        if odd:
            d1, d2 = 2 * m + 1 + g, 2 * m + g + 2
            if d1 == 0 or d2 == 0:
                raise ZeroDivisionError(f"v_{n}: denominator vanishes")
            v.append(
                -(m + g + 1) * (m + p.rho1 + p.rho2 + 1)
                * (m + p.rho2 - p.r1 + half) * (m + p.rho2 - p.r2 + half) / (d1 * d2)
            )
        else:
            d1, d2 = 2 * m + 1 + g, 2 * m + g
            if d1 == 0 or d2 == 0:
                raise ZeroDivisionError(f"v_{n}: denominator vanishes")
            v.append(
                -m * (m + p.rho1 - p.r1 + half) * (m + p.rho1 - p.r2 + half)
                * (m - p.r1 - p.r2) / (d1 * d2)
            )
    return diag, v


def cbi_values(p: CBIParams, degree: int, x) -> np.ndarray:
    """W_0..W_degree at the points ``x`` by the recurrence; shape (degree+1, len(x))."""
    diag, v = cbi_coefficients(p, degree)
    exact = isinstance(p.g, Fraction) and all(isinstance(t, Fraction) for t in as_vector(x))
    cast = (lambda seq: np.array(seq, dtype=object)) if exact else (
        lambda seq: np.array([float(t) for t in seq])
    )
    return recurrence_values(cast(diag), cast(v), x)[: degree + 1]


def cbi_correspondence_check(
    n_top: int, gamma, degree_max: int | None = None, exact: bool = True
) -> float:
    """Max relative gap between P_n(x) and 2^n W_n(x/2 - (N-1+gamma)/4) on the grid.

    Both sides are generated by their own recurrences.  In exact mode the
    comparison is carried out in rational arithmetic; in float mode it
    inherits the forward-evaluation error discussed in :func:`grid_table`.
    """
    spec = _spec(n_top, gamma)
    if degree_max is None:
        degree_max = spec.n_top
    if degree_max > spec.n_top:
        raise ValueError("degree_max must not exceed N")
    rc = para_coefficients(spec.n_top, spec.gamma, exact=exact)
    params = CBIParams.para_krawtchouk(spec.n_top, spec.gamma)
    x = make_spectrum(spec, exact=exact)
    shift = (spec.n_top - 1 + spec.gamma) / 4
    if not exact:
        params = CBIParams(*map(float, astuple(params)))
        shift = float(shift)
    lhs = evaluate_polynomials(rc, x).values[: degree_max + 1]
    rhs = cbi_values(params, degree_max, x / 2 - shift)
    worst = 0.0
    for n in range(degree_max + 1):
        scale = max(1, max(abs(v) for v in lhs[n]))
        gap = max(abs(p - 2**n * w) for p, w in zip(lhs[n], rhs[n]))
        worst = max(worst, float(gap / scale))
    return worst


def _hyp_leading(num_fixed, den):
    n = -num_fixed[0]
    lead = pochhammer(num_fixed[0], n) * pochhammer(num_fixed[1], n) * (-1) ** n
    if not isinstance(lead, float):
        lead = Fraction(lead)
    for c in den:
        lead = lead / pochhammer(c, n)
    return lead / math.factorial(n)


def cbi_hypergeometric(p: CBIParams, degree: int, x):
    """Monic W_degree(x) from its terminating 4F3 representation.

    Even degree 2n uses 4F3(-n, n+g+1, rho2+x, rho2-x; rho1+rho2+1,
    rho2-r1+1/2, rho2-r2+1/2; 1); odd degree 2n+1 is (x - rho2) times the
    same form with every parameter shifted by one.  Only the k = n term
    reaches the top power of x, which gives the monic normalization
    in closed form.
    """
    n, odd = divmod(degree, 2)
    shift = 1 if odd else 0
    half = Fraction(1, 2) if isinstance(p.g, Fraction) else 0.5
    fixed = [-n, n + p.g + 1 + shift]
    den = [
        p.rho1 + p.rho2 + 1 + shift,
        p.rho2 - p.r1 + half + shift,
        p.rho2 - p.r2 + half + shift,
    ]
    num = fixed + [p.rho2 + shift + x, p.rho2 + shift - x]
    value = hyp_terminating(num, den, 1) / _hyp_leading(fixed, den)
    return (x - p.rho2) * value if odd else value
