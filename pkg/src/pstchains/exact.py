"""Exact rational reference routines for small chains (N <= 9 or so).

These are deliberately written on plain Python lists of Fractions and take
different routes from the main float code (moment determinants, expanded
polynomials, explicit Gram-Schmidt), so the tests can use them as
independent oracles.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _fracs(values) -> list[Fraction]:
    return [Fraction(v) for v in values]


def poly_from_roots(roots: Sequence) -> list[Fraction]:
    """Monic polynomial coefficients (low -> high) with the given roots."""
    coeffs = [Fraction(1)]
    for r in _fracs(roots):
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs: Sequence[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def derivative_weights(points: Sequence) -> list[Fraction]:
    """w_s = 1/|P'_{N+1}(x_s)| from the expanded characteristic polynomial, normalized."""
    x = _fracs(points)
    dp = poly_derivative(poly_from_roots(x))
    w = [1 / abs(poly_eval(dp, xs)) for xs in x]
    total = sum(w)
    return [v / total for v in w]


def root_product(points: Sequence, x) -> Fraction:
    out = Fraction(1)
    for xs in _fracs(points):
        out *= Fraction(x) - xs
    return out


def gram_schmidt_coefficients(points: Sequence, weights: Sequence):
    """(b, u) of the monic orthogonal polynomials by explicit Gram-Schmidt.

    Polynomials are carried as coefficient lists and orthogonalized against
    all previous ones in the discrete inner product; b_n and U_n are then
    read off from <x p_n, p_n> / <p_n, p_n> and <p_n, p_n> / <p_{n-1}, p_{n-1}>.
    """
    x, w = _fracs(points), _fracs(weights)
    total = sum(w)
    w = [v / total for v in w]

    def inner(p, q):
        return sum(poly_eval(p, xs) * poly_eval(q, xs) * ws for xs, ws in zip(x, w))

    basis: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for deg in range(len(x)):
        p = [Fraction(0)] * deg + [Fraction(1)]
        for q, nq in zip(basis, norms):
            c = inner(p, q) / nq
            p = [pi - c * (q[i] if i < len(q) else 0) for i, pi in enumerate(p)]
        basis.append(p)
        norms.append(inner(p, p))
    b = []
    for p, nq in zip(basis, norms):
        xp = [Fraction(0)] + p
        b.append(inner(xp, p) / nq)
    u = [norms[n] / norms[n - 1] for n in range(1, len(norms))]
    return b, u


def moments(points: Sequence, weights: Sequence, count: int) -> list[Fraction]:
    x, w = _fracs(points), _fracs(weights)
    total = sum(w)
    return [sum(ws * xs**k for xs, ws in zip(x, w)) / total for k in range(count)]


def determinant(mat: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-preserving Gaussian elimination."""
    a = [list(map(Fraction, row)) for row in mat]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def hankel_coefficients(points: Sequence, weights: Sequence, count: int):
    """First ``count`` (b_n, U_n) from Hankel determinants of the moments.

    With D_n = det[mu_{i+j}]_{i,j<n} and D'_n the same with the last column
    shifted by one, U_n = D_{n+1} D_{n-1} / D_n^2 and
    b_n = D'_{n+1}/D_{n+1} - D'_n/D_n.
    """
    mu = moments(points, weights, 2 * count + 2)

    def hankel(n, shifted=False):
        if n == 0:
            return Fraction(1), Fraction(0)
        base = [[mu[i + j] for j in range(n)] for i in range(n)]
        if not shifted:
            return determinant(base), None
        mod = [row[:-1] + [mu[i + n]] for i, row in enumerate(base)]
        return determinant(mod), None

    d = [hankel(n)[0] for n in range(count + 2)]
    ds = [Fraction(0)] + [hankel(n, True)[0] for n in range(1, count + 2)]
    b = [ds[n + 1] / d[n + 1] - (ds[n] / d[n] if n else 0) for n in range(count)]
    u = [d[n + 1] * d[n - 1] / d[n] ** 2 for n in range(1, count)]
    return b, u
