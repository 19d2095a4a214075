"""Inverse spectral reconstruction and Christoffel (spectral surgery) transforms."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .orthopoly import (
    DiscreteMeasure,
    RecurrenceCoefficients,
    as_vector,
    check_strictly_increasing,
    evaluate_polynomials,
)

EUCLID_RTOL = 1e-6


class ReconstructionError(ArithmeticError):
    """Raised when a reconstruction loses positivity or leaves a remainder."""


def reconstruct_stieltjes(m: DiscreteMeasure) -> RecurrenceCoefficients:
    """Recurrence coefficients of the measure ``m``.

    Discrete Stieltjes orthogonalization carried out on normalized vectors
    (the Lanczos form), with two passes of full reorthogonalization at each
    step.  Exact measures are processed in floating point.
    """
    x = m.points.astype(float)
    w = m.weights.astype(float)
    size = len(x)
    scale = max(1.0, float(np.max(np.abs(x))))
    basis = np.zeros((size, size))
    basis[0] = np.sqrt(w)
    b = np.zeros(size)
    beta = np.zeros(size)
    for n in range(size):
        q = basis[n]
        z = x * q
        b[n] = q @ z
        z -= b[n] * q
        if n > 0:
            z -= beta[n] * basis[n - 1]
        if n == size - 1:
            break
        for _ in range(2):
            z -= basis[: n + 1].T @ (basis[: n + 1] @ z)
        norm = np.linalg.norm(z)
        if not norm > 1e-13 * scale:
            raise ReconstructionError(
                f"positivity lost at U_{n + 1}: residual norm {norm:.3e}"
            )
        beta[n + 1] = norm
        basis[n + 1] = z / norm
    return RecurrenceCoefficients(b, beta[1:] ** 2)


def _poly_mul_linear(p: list, root) -> list:
    # (y - root) * p, coefficients low -> high
    out = [0 * root] * (len(p) + 1)
    for i, c in enumerate(p):
        out[i + 1] = out[i + 1] + c
        out[i] = out[i] - root * c
    return out


def _poly_div_linear(p: list, root) -> list:
    # p / (y - root) by synthetic division; remainder discarded (p(root) = 0)
    deg = len(p) - 1
    q = [0 * root] * deg
    carry = p[deg]
    for i in range(deg - 1, -1, -1):
        q[i] = carry
        carry = p[i] + root * carry
    return q


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Long division by a monic divisor; returns (quotient, remainder)."""
    num = list(num)
    dd = len(den) - 1
    quot = [0 * num[0]] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        quot[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] = num[i - dd + j] - c * den[j]
    return quot, num[:dd]


def reconstruct_euclidean(points) -> RecurrenceCoefficients:
    """Mirror-symmetric Jacobi data for a spectrum by Euclidean division.

    P_{N+1} is the root product and P_N interpolates A(-1)^s on the
    spectrum, with A chosen to make it monic.  Dividing P_{n+1} by P_n then
    peels off (x - b_n) as quotient and -U_n P_{n-1} as remainder.  Works
    in monomial coefficients on the spectrum mapped to [-1, 1], so it is
    exact for Fraction input and degrades in floating point beyond N ~ 15.
    """
    x = as_vector(points)
    check_strictly_increasing(x)
    exact = x.dtype == object
    size = len(x)
    if size == 1:
        return RecurrenceCoefficients([x[0]], [])
    one = Fraction(1) if exact else 1.0
    centre = (x[0] + x[-1]) / 2
    half_width = (x[-1] - x[0]) / 2
    y = [(v - centre) / half_width for v in x]
    top = [one]
    for r in y:
        top = _poly_mul_linear(top, r)
    deriv = []
    for s, ys in enumerate(y):
        d = one
        for t, yt in enumerate(y):
            if t != s:
                d = d * (ys - yt)
        deriv.append(d)
    n_top = size - 1
    amp = (-one) ** n_top / sum(one / abs(d) for d in deriv)
    below = [0 * one] * size
    for s, ys in enumerate(y):
        basis = _poly_div_linear(top, ys)
        coef = amp * (-one) ** s / deriv[s]
        below = [c + coef * bi for c, bi in zip(below, basis)]
    lead = below[-1]
    if abs(lead - 1) > (0 if exact else EUCLID_RTOL):
        raise ReconstructionError(f"interpolated P_N is not monic (lead {lead})")
    below[-1] = one
    b = [0 * one] * size
    u = [0 * one] * n_top
    upper, lower = top, below
    for n in range(n_top, -1, -1):
        quot, rem = _poly_divmod(upper, lower)
        b[n] = -quot[0]
        if n == 0:
            break
        u[n - 1] = -rem[-1]
        if not u[n - 1] > 0:
            raise ReconstructionError(f"U_{n} = {u[n - 1]} is not positive")
        upper, lower = lower, [-c / u[n - 1] for c in rem]
        lower[-1] = one
    b = [centre + half_width * v for v in b]
    u = [half_width**2 * v for v in u]
    return RecurrenceCoefficients(b, u)


def mirror_residual(rc: RecurrenceCoefficients) -> float:
    """Max-norm distance between the Jacobi matrix and its reflection RJR."""
    b, u = rc.b, rc.u
    res = max(abs(v) for v in (b - b[::-1]))
    if len(u):
        res = max(res, max(abs(v) for v in (u - u[::-1])))
    return float(res)


def alternating_sign_check(rc: RecurrenceCoefficients, m: DiscreteMeasure):
    """Fit P_N(x_s) = A (-1)^s on the spectrum.

    Returns ``(A, residual)``.  The deviation |P_N(x_s) - A(-1)^s| at each
    point is divided by sqrt(h_N * sum_n P_n(x_s)^2 / h_n), the size of the
    orthonormal column the recurrence builds at x_s.  Forward evaluation
    error scales with that column, which grows like 1/sqrt(w_s) where the
    weights are tiny.
    """
    if len(m) != rc.size:
        raise ValueError("measure and recurrence sizes differ")
    vals = evaluate_polynomials(rc, m.points).values[: rc.size]
    row = vals[rc.n_top]
    signs = np.array([(-1) ** s for s in range(rc.size)])
    amp = sum(signs * row) / rc.size
    dev = np.array([float(abs(v)) for v in (row - amp * signs)])
    h = rc.norms().astype(float)
    p = vals.astype(float) / np.sqrt(h)[:, None]
    column = np.sqrt(h[-1] * np.sum(p**2, axis=0))
    return float(amp), float(np.max(dev / column))


def christoffel_at(m: DiscreteMeasure, k: int) -> DiscreteMeasure:
    """Remove x_k: new weights proportional to |x_k - x_s| w_s on the rest."""
    if not 0 <= k < len(m):
        raise IndexError(f"index {k} outside 0..{len(m) - 1}")
    if len(m) < 2:
        raise ValueError("cannot remove the only point of a measure")
    keep = np.arange(len(m)) != k
    x = m.points[keep]
    w = np.abs(m.points[k] - x) * m.weights[keep]
    return DiscreteMeasure(x, w)


def _top_ratios(rc: RecurrenceCoefficients, x_top) -> list:
    """a_n = P_{n+1}(x_top) / P_n(x_top) for n = 0..N, with a_N = 0.

    Forward, a_n = (x - b_n) - U_n / a_{n-1} is accurate for small n;
    backward from a_N = 0, a_{n-1} = U_n / (x - b_n - a_n) is accurate
    for large n.  The two sweeps meet at the middle index, where they must
    agree if x_top is an eigenvalue of the chain.
    """
    n_top = rc.n_top
    mid = n_top // 2
    ratios = [0 * x_top] * (n_top + 1)
    ratios[0] = x_top - rc.b[0]
    for n in range(1, mid + 1):
        ratios[n] = (x_top - rc.b[n]) - rc.u[n - 1] / ratios[n - 1]
    forward_mid = ratios[mid]
    for n in range(n_top, mid, -1):
        ratios[n - 1] = rc.u[n - 1] / (x_top - rc.b[n] - ratios[n])
    # x_top lies above every zero of P_n (n <= N), so each ratio is positive
    for n, a in enumerate(ratios[:-1]):
        if not a > 0:
            raise ReconstructionError(f"P_{n + 1}(x_N) / P_{n}(x_N) = {a} is not positive")
    gap = abs(forward_mid - ratios[mid])
    if gap > 1e-8 * max(1.0, abs(float(ratios[mid]))):
        raise ValueError("x_N is not a zero of P_{N+1}; measure and recurrence disagree")
    return ratios


def christoffel_coefficient_map(
    rc: RecurrenceCoefficients, m: DiscreteMeasure, k: int | None = None
) -> RecurrenceCoefficients:
    """Recurrence data of the kernel polynomials at the top spectral point.

    With a_n = P_{n+1}(x_N) / P_n(x_N) the transformed chain has
    U~_n = U_n a_n / a_{n-1} and B~_n = B_{n+1} + a_{n+1} - a_n.  The
    ratios come from :func:`_top_ratios`.
    """
    n_top = rc.n_top
    if k is None:
        k = n_top
    if k != n_top:
        raise ValueError("only removal of the top point x_N is supported")
    if len(m) != rc.size:
        raise ValueError("measure and recurrence sizes differ")
    if n_top == 0:
        raise ValueError("cannot remove the only point of a 1x1 chain")
    x_top = m.points[-1]
    ratios = _top_ratios(rc, x_top)
    b_new = [rc.b[n + 1] + ratios[n + 1] - ratios[n] for n in range(n_top)]
    u_new = [rc.u[n - 1] * ratios[n] / ratios[n - 1] for n in range(1, n_top)]
    return RecurrenceCoefficients(b_new, u_new)
