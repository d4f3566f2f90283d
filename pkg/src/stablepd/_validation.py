"""Input checks shared by the estimators and the CLI."""
from numbers import Integral, Real

import numpy as np
from sklearn.utils import check_array, check_scalar

from .field import FILTRATIONS, RasterImage, ScalarField
from .matching import DistanceMetric


def check_field(X) -> ScalarField:
    """Coerce a ScalarField or 2D array-like into a ScalarField."""
    if isinstance(X, ScalarField):
        return X
    arr = check_array(X, dtype=np.float64, ensure_2d=True, ensure_all_finite=True,
                      ensure_min_samples=1, ensure_min_features=1, input_name="field")
    return ScalarField.from_array(arr)


def check_image(X) -> RasterImage:
    if isinstance(X, RasterImage):
        return X
    arr = np.asarray(X)
    if arr.dtype.kind not in "ui":
        raise ValueError(f"images must be integer arrays of 8-bit samples, got dtype {arr.dtype}")
    return RasterImage(arr)


def check_fields(X):
    if isinstance(X, ScalarField) or (isinstance(X, np.ndarray) and X.ndim == 2):
        raise ValueError("expected a sequence of fields; wrap a single field in a list")
    return [check_field(x) for x in X]


def check_filtration(tag: str) -> str:
    if tag not in FILTRATIONS:
        raise ValueError(f"filtration must be one of {FILTRATIONS}, got {tag!r}")
    return tag


def check_vineyard_params(n_levels, metric, tau_m, tau_s):
    check_scalar(n_levels, "n_levels", Integral, min_val=2)
    check_scalar(tau_m, "tau_m", Real, min_val=0.0)
    check_scalar(tau_s, "tau_s", Real, min_val=0.0, max_val=1.0)
    return DistanceMetric.parse(metric)
