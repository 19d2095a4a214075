"""scikit-learn style wrappers around the functional core.

``JacobiReconstructor`` learns recurrence data from a spectrum (the
"samples" are spectral points, ``sample_weight`` the measure) and then
maps points to polynomial features.  ``ParaKrawtchoukFeatures`` does the
same from the closed form, and ``PSTChain`` predicts transfer fidelity
as a function of time.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bilattice import BiLatticeSpec, parse_gamma, pst_weights
from .dynamics import JacobiMatrix, certify_pst, transfer_amplitude
from .inverse import mirror_residual, reconstruct_euclidean, reconstruct_stieltjes
from .orthopoly import DiscreteMeasure, RecurrenceCoefficients, recurrence_values
from .parakrawtchouk import odd_chain_coefficients, para_coefficients


def _column(X) -> np.ndarray:
    """Accept a 1-D array or a single-feature 2-D array; return 1-D floats."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    arr = check_array(arr, dtype=float)
    if arr.shape[1] != 1:
        raise ValueError(f"expected a single feature (spectral coordinate), got {arr.shape[1]}")
    return arr[:, 0]


class _PolynomialFeatureMixin(TransformerMixin):
    """transform(X) -> P_0..P_N at each sample, optionally orthonormalized."""

    def _set_coefficients(self, rc: RecurrenceCoefficients) -> None:
        rc = rc.to_float()
        self.coefficients_ = rc
        self.b_ = rc.b
        self.j_ = np.sqrt(rc.u)
        self.n_features_in_ = 1

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "coefficients_")
        x = _column(X)
        rc = self.coefficients_
        vals = recurrence_values(rc.b, np.concatenate([[0.0], rc.u]), x)[: rc.size]
        if self.normalize:
            vals = vals / np.sqrt(rc.norms())[:, None]
        return vals.T

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "coefficients_")
        return np.array([f"P{n}" for n in range(self.coefficients_.size)], dtype=object)


class JacobiReconstructor(_PolynomialFeatureMixin, BaseEstimator):
    """Reconstruct a Jacobi matrix from spectral points.

    Parameters
    ----------
    method : {"stieltjes", "euclidean"}
        Stieltjes uses ``sample_weight`` as the measure, or the PST weights
        when none is given; the Euclidean route always assumes PST weights.
    normalize : bool
        Return orthonormal rather than monic polynomial features.

    Attributes
    ----------
    b_, j_ : ndarray
        Diagonal and couplings of the reconstructed chain.
    measure_ : DiscreteMeasure
    mirror_residual_ : float
    """

    def __init__(self, method: str = "stieltjes", normalize: bool = True):
        self.method = method
        self.normalize = normalize

    def fit(self, X, y=None, sample_weight=None):
        x = _column(X)
        order = np.argsort(x)
        x = x[order]
        if self.method == "stieltjes":
            if sample_weight is None:
                m = pst_weights(x)
            else:
                m = DiscreteMeasure(x, np.asarray(sample_weight, dtype=float)[order])
            rc = reconstruct_stieltjes(m)
        elif self.method == "euclidean":
            if sample_weight is not None:
                raise ValueError("the euclidean method fixes the PST weights; sample_weight not allowed")
            m = pst_weights(x)
            rc = reconstruct_euclidean(x)
        else:
            raise ValueError(f"method must be 'stieltjes' or 'euclidean', got {self.method!r}")
        self.measure_ = m
        self._set_coefficients(rc)
        self.mirror_residual_ = mirror_residual(self.coefficients_)
        return self


class ParaKrawtchoukFeatures(_PolynomialFeatureMixin, BaseEstimator):
    """Para-Krawtchouk polynomial features from the closed-form recurrence."""

    def __init__(self, n_top: int = 3, gamma="1/3", normalize: bool = True):
        self.n_top = n_top
        self.gamma = gamma
        self.normalize = normalize

    def fit(self, X=None, y=None):
        if X is not None:
            _column(X)
        self._set_coefficients(para_coefficients(self.n_top, parse_gamma(self.gamma)))
        return self


class PSTChain(RegressorMixin, BaseEstimator):
    """An XX chain built from the para-Krawtchouk data; predicts fidelity.

    ``fit`` ignores its data and builds the chain from the parameters;
    ``predict(times)`` returns |<e_target| exp(itJ) |e_source>|.
    ``score`` is the usual R^2, handy when comparing against simulated data.
    """

    def __init__(
        self,
        n_top: int = 3,
        gamma="1/3",
        scale: float = 1.0,
        shift: float = 0.0,
        odd_chain: bool = False,
        source: int = 0,
        target: int | None = None,
    ):
        self.n_top = n_top
        self.gamma = gamma
        self.scale = scale
        self.shift = shift
        self.odd_chain = odd_chain
        self.source = source
        self.target = target

    def fit(self, X=None, y=None):
        spec = BiLatticeSpec(self.n_top, parse_gamma(self.gamma), self.scale, self.shift)
        build = odd_chain_coefficients if self.odd_chain else para_coefficients
        J = JacobiMatrix.from_coefficients(build(spec.n_top, spec.gamma))
        self.jacobi_ = J.affine(spec.scale, spec.shift)
        self.certificate_ = certify_pst(self.jacobi_)
        self.transfer_time_ = self.certificate_.time
        self.n_features_in_ = 1
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "jacobi_")
        t = _column(X)
        return np.abs(transfer_amplitude(self.jacobi_, t, self.source, self.target))
