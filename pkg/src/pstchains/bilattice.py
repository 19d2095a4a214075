"""Bi-lattice spectra, PST admissibility and PST weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .orthopoly import (
    DiscreteMeasure,
    as_vector,
    check_strictly_increasing,
    pochhammer,
)


def parse_gamma(gamma) -> Fraction:
    """Accept ``Fraction``, int, ``"M1/M2"`` strings or exactly representable floats."""
    if isinstance(gamma, float):
        frac = Fraction(gamma).limit_denominator(10**6)
        if abs(float(frac) - gamma) > 1e-15 * max(1.0, abs(gamma)):
            raise ValueError(f"gamma={gamma!r} is not a recognisable rational")
        return frac
    try:
        return Fraction(gamma)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot read gamma={gamma!r} as a rational") from exc


@dataclass(frozen=True)
class BiLatticeSpec:
    """Parameters of the spectrum x_s = scale * (s + (gamma-1)(1-(-1)^s)/2) + shift.

    ``n_top`` is the largest index N (odd), so the spectrum has N + 1 points.
    ``gamma`` is kept as an exact :class:`~fractions.Fraction` in lowest terms.
    """

    n_top: int
    gamma: Fraction
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        gamma = parse_gamma(self.gamma)
        if not 0 < gamma < 2:
            raise ValueError(f"gamma must lie in (0, 2), got {gamma}")
        if int(self.n_top) != self.n_top or self.n_top < 1 or self.n_top % 2 == 0:
            raise ValueError(f"n_top must be an odd positive integer, got {self.n_top}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "n_top", int(self.n_top))

    @property
    def m1(self) -> int:
        return self.gamma.numerator

    @property
    def m2(self) -> int:
        return self.gamma.denominator

    @property
    def half_order(self) -> int:
        """J = (N - 1) / 2, the top index of each sublattice."""
        return (self.n_top - 1) // 2

    @property
    def unscaled(self) -> bool:
        return self.scale == 1 and self.shift == 0


@dataclass(frozen=True)
class PSTAdmissibility:
    admissible: bool
    minimal_time: float | None = None
    spacing_witness: tuple[int, ...] | None = None
    # T / pi as an exact rational, when the spacings were exact
    time_over_pi: Fraction | None = field(default=None, compare=False)


def make_spectrum(spec: BiLatticeSpec, exact: bool = False) -> np.ndarray:
    """Spectral points x_0 < ... < x_N of the bi-lattice.

    With ``exact=True`` the points come back as Fractions; scale and shift
    must then be rational.
    """
    s = np.arange(spec.n_top + 1)
    if exact:
        alpha, beta = Fraction(spec.scale), Fraction(spec.shift)
        half = (spec.gamma - 1) / 2
        pts = [alpha * (k + half * (1 - (-1) ** k)) + beta for k in s.tolist()]
        return np.array(pts, dtype=object)
    # unscaled points are rounded once from their exact values
    base = np.array([float(k + (spec.gamma - 1) * (k % 2)) for k in s.tolist()])
    return spec.scale * base + spec.shift


def spacing_admissibility(spacings: Sequence[Fraction]) -> PSTAdmissibility:
    """Decide whether positive rational gaps admit T with T*gap/pi all odd.

    Writing gap_s = n_s / D over a common denominator and g = gcd(n_s), the
    admissible times are T = pi * k * D / g with k odd, and they exist iff
    every n_s / g is odd.  The smallest such T is returned.
    """
    gaps = [Fraction(d) for d in spacings]
    if not gaps:
        return PSTAdmissibility(True, 0.0, (), Fraction(0))
    if any(d <= 0 for d in gaps):
        raise ValueError("spacings must be positive")
    denom = reduce(math.lcm, (d.denominator for d in gaps))
    nums = [int(d * denom) for d in gaps]
    g = reduce(math.gcd, nums)
    witness = tuple(n // g for n in nums)
    if any(m % 2 == 0 for m in witness):
        return PSTAdmissibility(False)
    t_over_pi = Fraction(denom, g)
    return PSTAdmissibility(True, math.pi * float(t_over_pi), witness, t_over_pi)


def pst_admissibility(spec: BiLatticeSpec) -> PSTAdmissibility:
    """PST time and odd-integer spacing witness of the unscaled bi-lattice."""
    if not spec.unscaled:
        raise ValueError("pst_admissibility expects scale=1, shift=0; rescale T by 1/scale")
    pts = make_spectrum(spec, exact=True)
    return spacing_admissibility(np.diff(pts).tolist())


def _pairwise_log_gaps(x: np.ndarray) -> np.ndarray:
    diff = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diff, 1.0)
    return np.log(diff).sum(axis=1)


def pst_weights(points) -> DiscreteMeasure:
    """Weights w_s proportional to 1 / prod_{t != s} |x_s - x_t|.

    Float input is handled in log space so large chains neither overflow nor
    underflow; Fraction input is computed exactly.
    """
    x = as_vector(points)
    check_strictly_increasing(x)
    if x.dtype == object:
        w = []
        for s, xs in enumerate(x):
            prod = Fraction(1)
            for t, xt in enumerate(x):
                if t != s:
                    prod *= abs(xs - xt)
            w.append(1 / prod)
        return DiscreteMeasure(x, np.array(w, dtype=object))
    logw = -_pairwise_log_gaps(x)
    w = np.exp(logw - logw.max())
    return DiscreteMeasure(x, w / w.sum())


def closed_form_weight_values(spec: BiLatticeSpec) -> list[Fraction]:
    """Raw even/odd sublattice weights from their Pochhammer closed forms.

    Exact rationals, not renormalized: their sum equals 1 by the
    Chu-Vandermonde identity, which the tests check on these raw values.
    """
    if not spec.unscaled:
        raise ValueError("closed-form weights are defined for the unscaled lattice")
    big_j, n_top, half = spec.half_order, spec.n_top, spec.gamma / 2
    pre = Fraction(1, 2**n_top) / pochhammer(Fraction(1, 2), big_j)
    pre_even = pre * pochhammer(1 - half, big_j)
    pre_odd = pre * pochhammer(1 + half, big_j)
    w = [Fraction(0)] * (n_top + 1)
    for s in range(big_j + 1):
        common = pochhammer(-big_j, s) / Fraction(math.factorial(s))
        w[2 * s] = pre_even * common * pochhammer(-half - big_j, s) / pochhammer(1 - half, s)
        w[2 * s + 1] = pre_odd * common * pochhammer(half - big_j, s) / pochhammer(1 + half, s)
    return w


def closed_form_weights(spec: BiLatticeSpec, exact: bool = False) -> DiscreteMeasure:
    """Closed-form PST weights as a measure on the bi-lattice.

    Evaluated in exact rational arithmetic and converted to float at the
    end unless ``exact`` is set.
    """
    pts = make_spectrum(spec, exact=True)
    weights = np.array(closed_form_weight_values(spec), dtype=object)
    if exact:
        return DiscreteMeasure(pts, weights)
    return DiscreteMeasure(pts.astype(float), weights.astype(float))
