"""scikit-learn compatible wrappers around the functional API.

The transformers are stateless: ``fit`` only validates hyperparameters, so
they compose with ``Pipeline``, ``clone`` and ``GridSearchCV`` like any
other preprocessing step. Inputs are sequences (one item per image).
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (check_fields, check_filtration, check_image,
                          check_vineyard_params)
from .field import build_pyramid, filtration_field
from .vineyard import (DEFAULT_TAU_M, DEFAULT_TAU_S, pyramid_diagrams,
                       stable_diagram, vines_from_diagrams)


class FiltrationTransformer(TransformerMixin, BaseEstimator):
    """Map 8-bit images to ``[0, 1]`` scalar fields.

    Parameters
    ----------
    filtration : {"intensity", "gradient"}
        Channel-mean intensity, or max-normalized absolute Laplacian.
    """

    def __init__(self, filtration="intensity"):
        self.filtration = filtration

    def fit(self, X=None, y=None):
        self.filtration_ = check_filtration(self.filtration)
        return self

    def transform(self, X):
        check_is_fitted(self)
        return [filtration_field(check_image(x), self.filtration_) for x in X]


class CubicalPersistence(TransformerMixin, BaseEstimator):
    """Per-scale persistence diagrams of each field's resolution pyramid.

    ``transform`` returns, for every input field, a list of ``n_levels``
    diagrams ordered finest first.
    """

    def __init__(self, n_levels=3, filtration_tag="intensity", keep_zero_persistence=False):
        self.n_levels = n_levels
        self.filtration_tag = filtration_tag
        self.keep_zero_persistence = keep_zero_persistence

    def fit(self, X=None, y=None):
        if not isinstance(self.n_levels, int) or self.n_levels < 1:
            raise ValueError(f"n_levels must be a positive integer, got {self.n_levels!r}")
        check_filtration(self.filtration_tag)
        self.fitted_ = True
        return self

    def transform(self, X):
        check_is_fitted(self)
        return [
            pyramid_diagrams(build_pyramid(f, self.n_levels, self.filtration_tag),
                             self.keep_zero_persistence)
            for f in check_fields(X)
        ]


class VineyardStabilizer(TransformerMixin, BaseEstimator):
    """Consolidate each field's multi-scale diagrams into one stable diagram.

    Parameters
    ----------
    n_levels : int, default=3
        Pyramid depth; at least 2.
    metric : str, default="relative_persistence"
        One of ``euclidean``, ``persistence_scaled``, ``relative_persistence``.
    tau_m : float, default=0.3
        Largest point distance accepted when linking adjacent scales.
    tau_s : float, default=0.7
        Smallest stability score a vine needs to be kept.
    filtration_tag : str, default="intensity"
        Tag recorded on the output diagrams.
    keep_zero_persistence : bool, default=False
        Track ``birth == death`` points too.

    Attributes
    ----------
    metric_ : DistanceMetric
        Parsed metric, set by ``fit``.
    """

    def __init__(self, n_levels=3, metric="relative_persistence", tau_m=DEFAULT_TAU_M,
                 tau_s=DEFAULT_TAU_S, filtration_tag="intensity", keep_zero_persistence=False):
        self.n_levels = n_levels
        self.metric = metric
        self.tau_m = tau_m
        self.tau_s = tau_s
        self.filtration_tag = filtration_tag
        self.keep_zero_persistence = keep_zero_persistence

    def fit(self, X=None, y=None):
        self.metric_ = check_vineyard_params(self.n_levels, self.metric, self.tau_m, self.tau_s)
        check_filtration(self.filtration_tag)
        return self

    def vines(self, X):
        """Per-field lists of vines (both degrees), before stability filtering."""
        check_is_fitted(self)
        out = []
        for f in check_fields(X):
            pds = pyramid_diagrams(build_pyramid(f, self.n_levels, self.filtration_tag),
                                   self.keep_zero_persistence)
            out.append(vines_from_diagrams(pds, self.metric_, self.tau_m))
        return out

    def transform(self, X):
        return [stable_diagram(v, self.tau_s, self.filtration_tag) for v in self.vines(X)]
