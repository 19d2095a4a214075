"""One-excitation dynamics of XX chains: evolution, fidelity, PST certificates."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, TextIO

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.optimize import minimize_scalar

from .bilattice import PSTAdmissibility, spacing_admissibility
from .orthopoly import RecurrenceCoefficients

EIG_RTOL = 1e-11
PST_FIDELITY = 1 - 1e-9
# small enough that irrational ratios cannot be approximated within RATIONAL_TOL
RATIONAL_MAX_DENOMINATOR = 1000
RATIONAL_TOL = 1e-9


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix: magnetic strengths on the diagonal,
    positive couplings on the off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float).ravel()
        e = np.asarray(self.offdiag, dtype=float).ravel()
        if len(d) < 1 or len(e) != len(d) - 1:
            raise ValueError(f"need len(offdiag) == len(diag) - 1, got {len(e)} and {len(d)}")
        if np.any(e <= 0) or not np.all(np.isfinite(d)) or not np.all(np.isfinite(e)):
            raise ValueError("couplings must be finite and strictly positive")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @classmethod
    def from_coefficients(cls, rc: RecurrenceCoefficients) -> "JacobiMatrix":
        rc = rc.to_float() if rc.exact else rc
        return cls(rc.b, np.sqrt(rc.u))

    def to_coefficients(self) -> RecurrenceCoefficients:
        return RecurrenceCoefficients(self.diag, self.offdiag**2)

    def __len__(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def affine(self, scale: float, shift: float = 0.0) -> "JacobiMatrix":
        """scale * J + shift * I."""
        if not scale > 0:
            raise ValueError("scale must be positive")
        return JacobiMatrix(scale * self.diag + shift, scale * self.offdiag)

    def norm_inf(self) -> float:
        row = np.abs(self.diag).copy()
        row[:-1] += self.offdiag
        row[1:] += self.offdiag
        return float(row.max())


@dataclass(frozen=True)
class Eigendecomposition:
    values: np.ndarray
    vectors: np.ndarray  # columns are eigenvectors


def eigendecompose(J: JacobiMatrix) -> Eigendecomposition:
    """Eigenpairs of ``J`` in ascending order, with the residual contract checked."""
    if len(J) == 1:
        return Eigendecomposition(J.diag.copy(), np.ones((1, 1)))
    try:
        vals, vecs = eigh_tridiagonal(J.diag, J.offdiag)
    except LinAlgError as exc:
        raise EigenSolverError(f"tridiagonal eigensolver failed for n={len(J)}: {exc}") from exc
    norm = max(J.norm_inf(), np.finfo(float).tiny)
    residual = np.abs(J.dense() @ vecs - vecs * vals).max()
    ortho = np.abs(vecs.T @ vecs - np.eye(len(J))).max()
    if residual > EIG_RTOL * norm or ortho > EIG_RTOL:
        raise EigenSolverError(
            f"eigen-residual {residual:.2e} (bound {EIG_RTOL * norm:.2e}), "
            f"orthonormality defect {ortho:.2e}"
        )
    if np.any(np.diff(vals) <= 0):
        raise EigenSolverError("eigenvalues are not strictly increasing")
    return Eigendecomposition(vals, vecs)


def transfer_amplitude(
    J: JacobiMatrix,
    t,
    source: int = 0,
    target: int | None = None,
    decomposition: Eigendecomposition | None = None,
):
    """<e_target| exp(i t J) |e_source>, scalar or vectorized over ``t``."""
    if target is None:
        target = len(J) - 1
    for idx in (source, target):
        if not 0 <= idx < len(J):
            raise IndexError(f"site {idx} outside 0..{len(J) - 1}")
    dec = decomposition or eigendecompose(J)
    coeff = dec.vectors[target] * dec.vectors[source]
    times = np.asarray(t, dtype=float)
    amp = np.exp(1j * np.multiply.outer(times, dec.values)) @ coeff
    return complex(amp) if amp.ndim == 0 else amp


def evolve(J: JacobiMatrix, t: float, source: int = 0, decomposition=None) -> np.ndarray:
    """Full column exp(i t J) |e_source>, used for unitarity checks."""
    dec = decomposition or eigendecompose(J)
    phases = np.exp(1j * t * dec.values)
    return dec.vectors @ (phases * dec.vectors[source])


@dataclass(frozen=True)
class PSTCertificate:
    time: float | None
    fidelity: float | None
    phase: float | None
    spacing_check: PSTAdmissibility

    @property
    def admissible(self) -> bool:
        return self.spacing_check.admissible

    @property
    def perfect(self) -> bool:
        return self.fidelity is not None and self.fidelity > PST_FIDELITY


def rationalize_spacings(values: np.ndarray) -> list[Fraction] | None:
    """Gaps of ``values`` as rationals relative to the first gap.

    Returns None if some ratio has no continued-fraction approximant with
    denominator <= 1000 within 1e-9.  A larger cap would let
    continued fractions approximate any real number that closely.
    """
    gaps = np.diff(values)
    if len(gaps) == 0:
        return []
    base = gaps[0]
    out = []
    for g in gaps:
        ratio = g / base
        frac = Fraction(ratio).limit_denominator(RATIONAL_MAX_DENOMINATOR)
        if abs(float(frac) - ratio) > RATIONAL_TOL * max(1.0, abs(ratio)):
            return None
        out.append(frac)
    return out


def certify_pst(J: JacobiMatrix, t_hint: float | None = None) -> PSTCertificate:
    """Arithmetic and dynamic evidence for perfect transfer from site 0 to N.

    The eigenvalue gaps are rationalized relative to the first gap; if the
    resulting integers are all odd after removing their gcd, the smallest
    transfer time is T = pi * D / (g * gap_0).  The fidelity is then
    evaluated by unitary evolution at T, or at ``t_hint`` when given.
    """
    dec = eigendecompose(J)
    if len(J) == 1:
        check = PSTAdmissibility(True, 0.0, (), Fraction(0))
        return PSTCertificate(0.0, 1.0, 0.0, check)
    ratios = rationalize_spacings(dec.values)
    if ratios is None:
        check = PSTAdmissibility(False)
    else:
        rel = spacing_admissibility(ratios)
        if rel.admissible:
            gap0 = float(dec.values[1] - dec.values[0])
            t_min = math.pi * float(rel.time_over_pi) / gap0
            check = PSTAdmissibility(True, t_min, rel.spacing_witness, None)
        else:
            check = rel
    time = t_hint if t_hint is not None else check.minimal_time
    if time is None:
        return PSTCertificate(None, None, None, check)
    amp = transfer_amplitude(J, time, 0, len(J) - 1, decomposition=dec)
    return PSTCertificate(float(time), float(abs(amp)), float(np.angle(amp)), check)


def max_fidelity(
    J: JacobiMatrix, t_max: float, samples: int = 20001, refine: int = 8
) -> tuple[float, float]:
    """Largest |<e_N|exp(itJ)|e_0>| on [0, t_max]: dense scan, then local polish.

    Returns ``(t_best, fidelity)``.
    """
    dec = eigendecompose(J)
    times = np.linspace(0.0, t_max, samples)
    fid = np.abs(transfer_amplitude(J, times, decomposition=dec))
    step = times[1] - times[0]
    best_t, best_f = float(times[np.argmax(fid)]), float(fid.max())
    for idx in np.argsort(fid)[::-1][:refine]:
        lo, hi = max(0.0, times[idx] - step), min(t_max, times[idx] + step)
        res = minimize_scalar(
            lambda s: -abs(transfer_amplitude(J, s, decomposition=dec)),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -res.fun > best_f:
            best_t, best_f = float(res.x), float(-res.fun)
    return best_t, best_f


def fidelity_rows(J: JacobiMatrix, times: Iterable[float], source: int = 0, target=None):
    """Rows (t, |amp|, re, im) for each time."""
    times = np.asarray(list(times), dtype=float)
    amps = np.atleast_1d(transfer_amplitude(J, times, source, target))
    return [(float(t), float(abs(a)), float(a.real), float(a.imag)) for t, a in zip(times, amps)]


def write_fidelity_csv(rows, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "abs", "re", "im"])
    for row in rows:
        writer.writerow([format(v, ".17g") for v in row])
