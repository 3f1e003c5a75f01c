"""Rational, q-rational and trigonometric weight functions.

Each flavor is a symmetrization over all permutations of the integration
variables of a product in which variable t_{a + d_<j} is attached to point z_j.
Sym is the explicit r! sum, so r is capped at 3.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..special import log_sin
from .master import loop_of_variable

WEIGHT_FLAVORS = ("w", "what", "W")
MAX_R = 3


def _log_sink(u, kappa):
    """log sin(pi u / kappa), finite for large |Im u|."""
    return log_sin(np.pi * np.asarray(u, dtype=complex) / kappa)


def _attached_factor(flavor, j, ta, z, l, kappa):
    """Factor of one variable attached to point j."""
    if flavor == "w":
        return 1.0 / (ta - z[j])
    if flavor == "what":
        out = 1.0 / (ta - z[j] + l[j])
        for p in range(j):
            out = out * (ta - z[p]) / (ta - z[p] + l[p])
        return out
    out = 1j * np.pi * (z[j] - ta) / kappa - _log_sink(ta - z[j] + l[j], kappa)
    for p in range(j):
        out = out + _log_sink(ta - z[p], kappa) - _log_sink(ta - z[p] + l[p], kappa)
    return np.exp(out)


def _pair_ratio(flavor, ta, tb, kappa):
    """Factor (t_a - t_b - 1)/(t_a - t_b) (or its sine version) inside Sym."""
    if flavor == "what":
        return (ta - tb - 1) / (ta - tb)
    return np.exp(_log_sink(ta - tb - 1, kappa) - _log_sink(ta - tb, kappa))


def weight_value(flavor: str, d, t, z, l=None, kappa=None):
    """Weight function of the given flavor at t (array of shape (..., r)).

    ``flavor`` is "w" (rational), "what" (q-rational) or "W" (trigonometric);
    the latter two need the weights l and, for "W", kappa.
    """
    if flavor not in WEIGHT_FLAVORS:
        raise ValueError(f"unknown weight flavor {flavor!r}")
    d = tuple(int(x) for x in d)
    r = sum(d)
    if r > MAX_R:
        raise ValueError(f"weight functions are limited to r <= {MAX_R}, got r={r}")
    t = np.asarray(t, dtype=complex)
    if t.shape[-1] != r:
        raise ValueError(f"expected {r} integration variables, got {t.shape[-1]}")
    z = [complex(x) for x in z]
    if len(d) != len(z):
        raise ValueError("d needs one entry per point")
    if flavor != "w":
        if l is None:
            raise ValueError("this flavor needs the weights l")
        l = [complex(x) for x in l]
    if flavor == "W" and kappa is None:
        raise ValueError("the trigonometric flavor needs kappa")
    shape = t.shape[:-1]
    if r == 0:
        return np.ones(shape, dtype=complex)
    owner = loop_of_variable(d)
    total = np.zeros(shape, dtype=complex)
    with np.errstate(divide="raise", invalid="raise"):
        try:
            for perm in itertools.permutations(range(r)):
                ts = [t[..., p] for p in perm]
                term = np.ones(shape, dtype=complex)
                for a in range(r):
                    term = term * _attached_factor(flavor, owner[a], ts[a], z, l, kappa)
                if flavor != "w":
                    for a in range(r):
                        for b in range(a + 1, r):
                            term = term * _pair_ratio(flavor, ts[a], ts[b], kappa)
                total = total + term
            if flavor != "w":
                for a in range(r):
                    for b in range(a + 1, r):
                        total = total / _pair_ratio(flavor, t[..., a], t[..., b], kappa)
        except FloatingPointError as exc:
            raise ValueError("t lies on a pole of the weight function") from exc
    if not np.all(np.isfinite(total)):
        raise ValueError("t lies on a pole of the weight function")
    return total
