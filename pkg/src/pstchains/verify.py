"""Invariant suites behind ``pstchains verify``.

Each suite walks odd N from 3 to ``n_max`` over a fixed list of gamma
values and returns :class:`Check` records.  A check passes when its
residual is at most its tolerance; tolerances follow a ladder of 1e-12
(exact-rational comparisons), 1e-10 (well-conditioned float) and 1e-8
(the Euclidean route), with the looser bounds noted where they apply.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from .bilattice import (
    BiLatticeSpec,
    closed_form_weights,
    make_spectrum,
    parse_gamma,
    pst_admissibility,
    pst_weights,
)
from .dynamics import JacobiMatrix, certify_pst, max_fidelity, transfer_amplitude
from .hahn import casimir_check, commutator_residuals, eigenbasis_check, realize, y_spectrum
from .inverse import (
    alternating_sign_check,
    christoffel_at,
    christoffel_coefficient_map,
    mirror_residual,
    reconstruct_euclidean,
    reconstruct_stieltjes,
)
from .orthopoly import DiscreteMeasure, RecurrenceCoefficients, check_orthogonality
from .parakrawtchouk import (
    CBIParams,
    cbi_coefficients,
    cbi_correspondence_check,
    cbi_hypergeometric,
    cbi_values,
    characteristic_factorization,
    difference_apply,
    difference_operator,
    grid_table,
    odd_chain_closed_form,
    para_coefficients,
)

GAMMAS = ("1/3", "3/5", "5/7", "1", "7/5", "5/3")
SUITES = ("ortho", "diffeq", "hahn", "cbi", "christoffel", "pst")
EUCLID_N_MAX = 15
SEED = 20240607


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float
    n: int | None = None
    gamma: str | None = None
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual <= self.tolerance

    def to_dict(self) -> dict:
        out = {"name": self.name}
        if self.n is not None:
            out["n"] = self.n
        if self.gamma is not None:
            out["gamma"] = self.gamma
        out.update(residual=float(self.residual), tolerance=self.tolerance, passed=self.passed)
        out.update(self.info)
        return out


def _cases(n_max: int) -> Iterator[tuple[int, Fraction]]:
    for n in range(3, n_max + 1, 2):
        for g in GAMMAS:
            yield n, parse_gamma(g)


def _coef_gap(a: RecurrenceCoefficients, b: RecurrenceCoefficients) -> float:
    """Largest coefficient difference, relative to max(1, |reference|)."""
    fa, fb = a.to_float(), b.to_float()
    gaps = [np.abs(fa.b - fb.b) / np.maximum(1.0, np.abs(fb.b))]
    if len(fb.u):
        gaps.append(np.abs(fa.u - fb.u) / np.maximum(1.0, np.abs(fb.u)))
    return float(max(g.max() for g in gaps))


def _parity_sums(m: DiscreteMeasure) -> float:
    w = m.weights.astype(float)
    return float(max(abs(w[::2].sum() - 0.5), abs(w[1::2].sum() - 0.5)))


def suite_ortho(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        spec = BiLatticeSpec(n, g)
        x = make_spectrum(spec)
        m_prod = pst_weights(x)
        m_closed = closed_form_weights(spec)
        rc = para_coefficients(n, g)
        weight_gap = float(np.abs(m_prod.weights - m_closed.weights).max())
        out.append(Check("ortho.weights_closed_form", weight_gap, 1e-12, n, gs))
        out.append(Check("ortho.parity_sums", _parity_sums(m_closed), 1e-12, n, gs))
        out.append(Check("ortho.orthogonality", check_orthogonality(rc, m_closed), 1e-10, n, gs))
        out.append(Check("ortho.stieltjes", _coef_gap(reconstruct_stieltjes(m_prod), rc), 1e-10, n, gs))
        _, alt = alternating_sign_check(rc, m_closed)
        out.append(Check("ortho.alternating_sign", alt, 1e-10 if n <= EUCLID_N_MAX else 1e-6, n, gs))
        if n <= EUCLID_N_MAX:
            out.append(Check("ortho.euclidean", _coef_gap(reconstruct_euclidean(x), rc), 1e-8, n, gs))
        if g == 1 and n <= EUCLID_N_MAX:
            exact = para_coefficients(n, g, exact=True)
            ok = all(v == Fraction(n, 2) for v in exact.b) and all(
                u == Fraction(k * (n + 1 - k), 4) for k, u in enumerate(exact.u, start=1)
            )
            out.append(Check("ortho.krawtchouk_limit", 0.0 if ok else 1.0, 0.0, n, gs))
    return out


def fixture_checks(fixture: dict) -> list[Check]:
    """Orthogonality of user-supplied (b, j) against a user-supplied measure."""
    points = fixture["points"]
    weights = fixture.get("weights")
    m = DiscreteMeasure(points, weights) if weights is not None else pst_weights(points)
    j = np.asarray(fixture["j"], dtype=float)
    rc = RecurrenceCoefficients(np.asarray(fixture["b"], dtype=float), j**2)
    return [
        Check("ortho.fixture_orthogonality", check_orthogonality(rc, m), 1e-10),
        Check("ortho.fixture_reconstruction", _coef_gap(reconstruct_stieltjes(m), rc), 1e-10),
    ]


def suite_diffeq(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        table = grid_table(n, g)
        op = difference_operator(n, g)
        res = difference_apply(op, table)
        scale = np.abs(table.values[: n + 1]).max(axis=1)
        out.append(Check("diffeq.residual", float((np.abs(res).max(axis=1) / scale).max()), 1e-10, n, gs))
        eig = op.spectrum()
        lam = np.sort([2.0 * k * (k - n) for k in range(n + 1)])
        out.append(Check("diffeq.spectrum", float(np.abs(eig - lam).max()), 1e-9, n, gs))
    return out


def suite_hahn(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        a = realize(n, g)
        cas = casimir_check(a)
        scale = cas.scale
        r1, r2 = commutator_residuals(a)
        out.append(Check("hahn.commutator_yz", r1 / scale, 1e-9, n, gs))
        out.append(Check("hahn.commutator_zx", r2 / scale, 1e-9, n, gs))
        q_info = {
            "q_measured": cas.q_measured,
            "q_expected": cas.q_expected,
            "q_discrepancy": abs(cas.q_measured - cas.q_expected),
        }
        out.append(Check("hahn.casimir_scalar", cas.deviation / scale, 1e-9, n, gs, q_info))
        central = max(cas.commutator_x, cas.commutator_y, cas.commutator_z) / scale
        out.append(Check("hahn.casimir_central", central, 1e-9, n, gs))
        lam = np.array([2.0 * k * (k - n) for k in range(n + 1)])
        out.append(Check("hahn.y_spectrum", float(np.abs(y_spectrum(a) - np.sort(lam)).max()), 1e-9, n, gs))
        out.append(Check("hahn.eigenbasis", eigenbasis_check(a), 1e-10, n, gs))
    return out


def _random_cbi_params(rng: random.Random) -> CBIParams:
    return CBIParams(*(rng.uniform(-0.9, 0.9) for _ in range(4)))


def suite_cbi(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        out.append(Check("cbi.correspondence", cbi_correspondence_check(n, g), 1e-10, n, gs))
    _, v = cbi_coefficients(CBIParams.para_krawtchouk(3, Fraction(1, 3)), 2)
    out.append(Check("cbi.v1_exact", 0.0 if v[1] == Fraction(35, 144) else 1.0, 0.0, 3, "1/3"))

    rng = random.Random(SEED)
    worst = 0.0
    for _ in range(20):
        p = _random_cbi_params(rng)
        xs = [rng.uniform(-2, 2) for _ in range(5)]
        table = cbi_values(p, 8, xs)
        for d in range(9):
            hyp = np.array([cbi_hypergeometric(p, d, xv) for xv in xs], dtype=float)
            ref = np.asarray(table[d], dtype=float)
            worst = max(worst, float(np.abs(hyp - ref).max() / max(1.0, np.abs(ref).max())))
    out.append(Check("cbi.hypergeometric", worst, 1e-10))

    nrng = np.random.default_rng(SEED)
    for n, g in _cases(n_max):
        spec = BiLatticeSpec(n, g)
        roots = make_spectrum(spec)
        span = roots[-1] - roots[0]
        pts = nrng.uniform(roots[0] - 0.1 * span, roots[-1] + 0.1 * span, 100)
        worst = 0.0
        for xv in pts:
            prod = float(np.prod(xv - roots))
            fac = float(characteristic_factorization(n, g, float(xv)))
            worst = max(worst, abs(fac - prod) / abs(prod))
        out.append(Check("cbi.factorization", worst, 1e-11, n, str(g)))
    return out


def suite_christoffel(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        spec = BiLatticeSpec(n, g)
        rc = para_coefficients(n, g)
        m = closed_form_weights(spec)
        mapped = christoffel_coefficient_map(rc, m)
        surgery = reconstruct_stieltjes(christoffel_at(m, n))
        out.append(Check("christoffel.routes", _coef_gap(mapped, surgery), 1e-10, n, gs))
        closed = odd_chain_closed_form(n, g)
        out.append(Check("christoffel.closed_form", _coef_gap(mapped, closed), 1e-10, n, gs))
        out.append(Check("christoffel.mirror", mirror_residual(mapped), 1e-10, n, gs))
        cert = certify_pst(JacobiMatrix.from_coefficients(mapped))
        fid = cert.fidelity if cert.admissible and cert.fidelity is not None else 0.0
        out.append(Check("christoffel.pst", 1.0 - fid, 1e-9, n, gs, {"time": cert.time}))
    exact = odd_chain_closed_form(3, Fraction(1, 3), exact=True)
    ok = list(exact.b) == [Fraction(1, 3), Fraction(5, 3), Fraction(1, 3)] and list(exact.u) == [
        Fraction(5, 18),
        Fraction(5, 18),
    ]
    out.append(Check("christoffel.exact_n3", 0.0 if ok else 1.0, 0.0, 3, "1/3"))
    return out


def suite_pst(n_max: int) -> list[Check]:
    out = []
    for n, g in _cases(n_max):
        gs = str(g)
        spec = BiLatticeSpec(n, g)
        adm = pst_admissibility(spec)
        J = JacobiMatrix.from_coefficients(para_coefficients(n, g))
        t = math.pi * spec.m2
        fid = abs(transfer_amplitude(J, t))
        out.append(Check("pst.fidelity", 1.0 - fid if adm.admissible else 1.0, 1e-9, n, gs, {"time": t}))
        cert = certify_pst(J)
        gap = abs(cert.time - adm.minimal_time) if cert.admissible else math.inf
        out.append(Check("pst.certificate_time", gap, 1e-9 * t, n, gs))
    for n in range(3, n_max + 1, 2):
        J = JacobiMatrix.from_coefficients(para_coefficients(n, Fraction(2, 3)))
        refused = not pst_admissibility(BiLatticeSpec(n, Fraction(2, 3))).admissible
        refused = refused and not certify_pst(J).admissible
        _, best = max_fidelity(J, 6 * math.pi)
        info = {"max_fidelity": best}
        out.append(Check("pst.negative_control", best if refused else 1.0, 1 - 1e-4, n, "2/3", info))
    return out


SUITE_FUNCS: dict[str, Callable[[int], list[Check]]] = {
    "ortho": suite_ortho,
    "diffeq": suite_diffeq,
    "hahn": suite_hahn,
    "cbi": suite_cbi,
    "christoffel": suite_christoffel,
    "pst": suite_pst,
}


def run(suite: str = "all", n_max: int = 31, fixture: dict | None = None) -> dict:
    """Run one suite or all of them; returns the report payload."""
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {name!r}")
    checks: list[Check] = []
    for name in names:
        if fixture is not None and name == "ortho":
            checks.extend(fixture_checks(fixture))
        else:
            checks.extend(SUITE_FUNCS[name](n_max))
    failed = [c.name for c in checks if not c.passed]
    return {
        "suite": suite,
        "n_max": n_max,
        "passed": not failed,
        "n_checks": len(checks),
        "failed": sorted(set(failed)),
        "checks": [c.to_dict() for c in checks],
    }
