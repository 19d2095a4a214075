"""Monic orthogonal polynomials on finite discrete measures.

Everything here works on either float64 arrays or object arrays of
:class:`fractions.Fraction`.  Passing Fractions in gives exact results out,
which is what the test-suite oracles rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

SEPARATION_RTOL = 1e-12


class PoisonedEvaluationError(ArithmeticError):
    """A denominator Pochhammer symbol vanishes inside the summation range."""


def is_exact(values) -> bool:
    """True if ``values`` holds only exact rationals (ints or Fractions)."""
    arr = np.asarray(values, dtype=object).ravel()
    return arr.size > 0 and all(
        isinstance(v, Rational) and not isinstance(v, bool) for v in arr
    )


def as_vector(values) -> np.ndarray:
    """Coerce to a 1-d array, keeping exact rationals exact.

    Integers alone are promoted to float unless at least one Fraction is
    present, so ``[0, 1, 2]`` stays a plain float grid.
    """
    if isinstance(values, np.ndarray) and values.dtype != object:
        return np.asarray(values, dtype=float).ravel()
    seq = list(np.asarray(values, dtype=object).ravel())
    if seq and is_exact(seq) and any(isinstance(v, Fraction) for v in seq):
        return np.array([Fraction(v) for v in seq], dtype=object)
    return np.asarray([float(v) for v in seq], dtype=float)


def check_strictly_increasing(points: np.ndarray, what: str = "points") -> None:
    """Reject unsorted or (nearly) duplicated points."""
    if len(points) < 2:
        return
    gaps = np.diff(points)
    if points.dtype == object:
        bad = [i for i, d in enumerate(gaps) if d <= 0]
    else:
        scale = np.maximum(1.0, np.maximum(np.abs(points[:-1]), np.abs(points[1:])))
        bad = np.flatnonzero(gaps <= SEPARATION_RTOL * scale).tolist()
    if bad:
        i = bad[0]
        raise ValueError(
            f"{what} must be strictly increasing; x[{i}]={points[i]!r}, "
            f"x[{i + 1}]={points[i + 1]!r}"
        )


@dataclass(frozen=True)
class RecurrenceCoefficients:
    """Monic three-term recurrence data.

    ``b[n]`` is the diagonal entry for n = 0..N and ``u[n - 1]`` holds U_n
    for n = 1..N, so ``len(u) == len(b) - 1``.  U_n is the squared coupling
    of the corresponding Jacobi matrix.
    """

    b: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        b = as_vector(self.b)
        u = as_vector(self.u) if len(self.u) else np.zeros(0, dtype=b.dtype)
        if b.dtype == object and u.dtype != object and len(u):
            b = b.astype(float)
        elif u.dtype == object and b.dtype != object:
            u = u.astype(float)
        if len(b) < 1:
            raise ValueError("need at least one diagonal coefficient")
        if len(u) != len(b) - 1:
            raise ValueError(
                f"expected {len(b) - 1} off-diagonal entries, got {len(u)}"
            )
        for n, un in enumerate(u, start=1):
            if not un > 0:
                raise ValueError(f"U_{n} = {un!r} is not positive")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "u", u)

    @property
    def size(self) -> int:
        """Number of polynomials P_0..P_N, i.e. N + 1."""
        return len(self.b)

    @property
    def n_top(self) -> int:
        return len(self.b) - 1

    @property
    def exact(self) -> bool:
        return self.b.dtype == object

    def norms(self) -> np.ndarray:
        """h_n = U_1 ... U_n for n = 0..N (h_0 = 1)."""
        one = Fraction(1) if self.exact else 1.0
        out = [one]
        for un in self.u:
            out.append(out[-1] * un)
        return np.array(out, dtype=object if self.exact else float)

    def to_float(self) -> "RecurrenceCoefficients":
        return RecurrenceCoefficients(self.b.astype(float), self.u.astype(float))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Positive weights on strictly increasing points, normalized to sum 1."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        x = as_vector(self.points)
        w = as_vector(self.weights)
        if len(x) != len(w):
            raise ValueError(f"{len(x)} points but {len(w)} weights")
        if len(x) == 0:
            raise ValueError("empty measure")
        check_strictly_increasing(x)
        if x.dtype != w.dtype:
            x, w = x.astype(float), w.astype(float)
        for s, ws in enumerate(w):
            if not ws > 0:
                raise ValueError(f"weight w_{s} = {ws!r} is not positive")
        object.__setattr__(self, "points", x)
        object.__setattr__(self, "weights", w / w.sum())

    def __len__(self) -> int:
        return len(self.points)

    @property
    def exact(self) -> bool:
        return self.points.dtype == object

    def to_float(self) -> "DiscreteMeasure":
        return DiscreteMeasure(self.points.astype(float), self.weights.astype(float))


@dataclass(frozen=True)
class PolynomialTable:
    """values[n, s] = P_n(points[s]) for n = 0..N+1."""

    points: np.ndarray
    values: np.ndarray

    def row(self, n: int) -> np.ndarray:
        return self.values[n]


def recurrence_values(b, u, x) -> np.ndarray:
    """Run P_{n+1} = (x - b[n]) P_n - u[n] P_{n-1} without validating signs.

    ``u[n]`` here is indexed from 0 with ``u[0]`` unused, matching the raw
    layout used by recurrences whose off-diagonal data may be negative.
    Returns an array of shape (len(b) + 1, len(x)).
    """
    x = as_vector(x)
    exact = x.dtype == object or np.asarray(b).dtype == object
    dtype = object if exact else float
    if exact:
        x = np.array([Fraction(v) for v in x], dtype=object)
    out = np.empty((len(b) + 1, len(x)), dtype=dtype)
    out[0] = Fraction(1) if exact else 1.0
    prev = np.full(len(x), Fraction(0) if exact else 0.0, dtype=dtype)
    for n in range(len(b)):
        nxt = (x - b[n]) * out[n]
        if n > 0:
            nxt = nxt - u[n] * prev
        prev = out[n]
        out[n + 1] = nxt
    return out


def evaluate_polynomials(rc: RecurrenceCoefficients, points) -> PolynomialTable:
    """Tabulate P_0..P_{N+1} of ``rc`` at ``points`` by the recurrence."""
    x = as_vector(points)
    if x.dtype != object and not np.all(np.isfinite(x)):
        raise ValueError("evaluation points must be finite")
    if rc.exact and x.dtype == object:
        b = rc.b
        padded_u = np.array([Fraction(0), *rc.u], dtype=object)
    else:
        b = rc.b.astype(float)
        padded_u = np.concatenate([[0.0], rc.u.astype(float)])
        x = x.astype(float)
    return PolynomialTable(points=x, values=recurrence_values(b, padded_u, x))


def check_orthogonality(rc: RecurrenceCoefficients, m: DiscreteMeasure) -> float:
    """Largest deviation of the normalized Gram matrix from the identity.

    Computes G[n, k] = sum_s P_n(x_s) P_k(x_s) w_s and returns
    max |G[n, k] / sqrt(h_n h_k) - delta_nk|.  The scaling keeps the number
    meaningful when h_n spans many decades.
    """
    if len(m) != rc.size:
        raise ValueError(
            f"measure has {len(m)} points but recurrence has {rc.size} polynomials"
        )
    table = evaluate_polynomials(rc, m.points)
    p = table.values[: rc.size]
    gram = (p * m.weights) @ p.T
    h = rc.norms()
    if gram.dtype == object:
        # squared ratios stay rational; take the root only at the end
        worst = Fraction(0)
        for n in range(rc.size):
            for k in range(rc.size):
                if n == k:
                    worst = max(worst, (gram[n, n] / h[n] - 1) ** 2)
                else:
                    worst = max(worst, gram[n, k] ** 2 / (h[n] * h[k]))
        return float(worst) ** 0.5
    h = h.astype(float)
    scale = np.sqrt(np.outer(h, h))
    return float(np.max(np.abs(gram / scale - np.eye(rc.size))))


def pochhammer(a, n: int):
    """Rising factorial (a)_n = a (a + 1) ... (a + n - 1); (a)_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1
    for k in range(n):
        out = out * (a + k)
    return out


def _nonpositive_integer(a) -> int | None:
    """Return m if a == -m for an integer m >= 0, else None."""
    if isinstance(a, Fraction):
        return -int(a) if a.denominator == 1 and a <= 0 else None
    try:
        fa = float(a)
    except TypeError:
        return None
    if fa <= 0 and fa.is_integer():
        return -int(fa)
    return None


def hyp_terminating(num: Sequence, den: Sequence, arg=1):
    """Terminating generalized hypergeometric sum pFq(num; den; arg).

    The series stops at k = n where -n is the largest nonpositive integer
    among ``num``.  Exact when every input is rational.
    """
    orders = [m for m in map(_nonpositive_integer, num) if m is not None]
    if not orders:
        raise ValueError("no numerator parameter is a nonpositive integer")
    n = min(orders)
    for c in den:
        m = _nonpositive_integer(c)
        if m is not None and m <= n:
            raise PoisonedEvaluationError(
                f"denominator parameter {c!r} makes ({c})_k vanish for k <= {n}"
            )
    exact = all(isinstance(v, Rational) for v in (*num, *den, arg))
    if exact:
        num, den, arg = [Fraction(a) for a in num], [Fraction(c) for c in den], Fraction(arg)
    term = Fraction(1) if exact else 1.0
    total = term
    for k in range(n):
        ratio = arg / (k + 1)
        for a in num:
            ratio = ratio * (a + k)
        for c in den:
            ratio = ratio / (c + k)
        term = term * ratio
        total = total + term
    return total
