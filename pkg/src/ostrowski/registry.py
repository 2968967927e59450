"""Named eta-maps and test functions addressable by label."""
from __future__ import annotations

import math
from typing import Dict, Sequence, Union

import numpy as np
from numpy.polynomial import Polynomial

from .invex import DomainDescriptor, EtaMap, InvalidInput, ScalarFn

REAL_LINE = DomainDescriptor.real_line()
NONZERO_REALS = DomainDescriptor.real_line(excluded=(0.0,))


def _trivial(x, y):
    return x - y


def _sign_split(x, y):
    # x - y when x*y >= 0, y - x otherwise
    return np.where(x * y >= 0, x - y, y - x)


def _nonzero_reals(x, y):
    same_sign = ((x > 0) & (y > 0)) | ((x < 0) & (y < 0))
    return np.where(same_sign, x - y, -y)


def _doubled(x, y):
    return 2.0 * (x - y)


ETA_MAPS: Dict[str, EtaMap] = {
    "trivial": EtaMap(_trivial, REAL_LINE, "trivial", trivial=True),
    "sign_split": EtaMap(_sign_split, REAL_LINE, "sign_split"),
    "nonzero_reals": EtaMap(_nonzero_reals, NONZERO_REALS, "nonzero_reals"),
    "doubled": EtaMap(_doubled, REAL_LINE, "doubled"),
}


def _tent(x):
    return 10.0 * x - 0.5 * x * np.abs(x)


def _tent_prime(x):
    return 10.0 - np.abs(x)


FUNCTIONS: Dict[str, ScalarFn] = {
    "identity": ScalarFn(lambda x: x, lambda x: np.ones_like(x), "identity"),
    "square": ScalarFn(lambda x: x**2, lambda x: 2.0 * x, "square"),
    "cube": ScalarFn(lambda x: x**3, lambda x: 3.0 * x**2, "cube"),
    "quartic_plus": ScalarFn(lambda x: x**4 + x, lambda x: 4.0 * x**3 + 1.0, "quartic_plus"),
    "exp": ScalarFn(np.exp, np.exp, "exp"),
    "neg_abs": ScalarFn(lambda x: -np.abs(x), lambda x: -np.sign(x), "neg_abs"),
    "neg_square": ScalarFn(lambda x: -(x**2), lambda x: -2.0 * x, "neg_square"),
    "tent": ScalarFn(_tent, _tent_prime, "tent"),
    "constant": ScalarFn(lambda x: np.full_like(x, 1.5), lambda x: np.zeros_like(x), "constant"),
}


def polynomial(coeffs: Sequence[float]) -> ScalarFn:
    """Polynomial from ascending coefficients [c0, c1, ...]."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs or not all(math.isfinite(c) for c in coeffs):
        raise InvalidInput(f"polynomial needs finite coefficients, got {coeffs!r}")
    p = Polynomial(coeffs)
    dp = p.deriv()
    label = "poly[" + ",".join(repr(c) for c in coeffs) + "]"
    return ScalarFn(lambda x: p(np.asarray(x, dtype=float)), lambda x: dp(np.asarray(x, dtype=float)), label)


def get_eta(label: str) -> EtaMap:
    try:
        return ETA_MAPS[label]
    except KeyError:
        raise InvalidInput(f"unknown eta-map {label!r}; known: {', '.join(sorted(ETA_MAPS))}") from None


FunctionSpec = Union[str, Sequence[float]]


def get_function(spec: FunctionSpec) -> ScalarFn:
    if isinstance(spec, str):
        try:
            return FUNCTIONS[spec]
        except KeyError:
            raise InvalidInput(f"unknown function {spec!r}; known: {', '.join(sorted(FUNCTIONS))}") from None
    return polynomial(spec)
