"""Verification reports, residual metric and counter-based sampling."""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .operators import Point


def residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """max |lhs - rhs| / (1 + max |lhs|)."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.size == 0:
        return 0.0
    return float(np.abs(lhs - rhs).max() / (1.0 + np.abs(lhs).max()))


def sample_rng(seed: int, identity: str, index: int) -> np.random.Generator:
    """Generator keyed by (seed, identity, index); independent of evaluation order."""
    key = zlib.crc32(identity.encode("utf-8"))
    seq = np.random.SeedSequence(int(seed), spawn_key=(key, int(index)))
    return np.random.Generator(np.random.Philox(seq))


def _spread(rng, count, radius=(0.5, 2.0), gate=1e-2, tries=1000):
    for _ in range(tries):
        r = rng.uniform(*radius, size=count)
        th = rng.uniform(-np.pi, np.pi, size=count)
        pts = r * np.exp(1j * th)
        if count < 2 or min(abs(pts[i] - pts[j]) for i in range(count) for j in range(i + 1, count)) > gate:
            return pts
    raise RuntimeError("could not draw separated points")


def sample_kappa(rng, policy: str | complex | float = "complex") -> complex:
    if isinstance(policy, (int, float, complex)) and not isinstance(policy, bool):
        return complex(policy)
    if policy == "complex":
        return complex(rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0.2, np.pi - 0.2)))
    if policy == "real":
        return complex(rng.uniform(1.5, 4.0))
    raise ValueError(f"unknown kappa policy {policy!r}")


def sample_point(seed: int, identity: str, index: int, n: int, k: int,
                 kappa_policy="complex", gate: float = 1e-2) -> Point:
    rng = sample_rng(seed, identity, index)
    z = _spread(rng, n, gate=gate)
    lam = _spread(rng, k, gate=gate)
    kappa = sample_kappa(rng, kappa_policy)
    return Point.of(z, lam, kappa)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, float):
        return float(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(_clean(obj), sort_keys=True, indent=1, separators=(",", ": "))


@dataclass
class VerificationReport:
    identity: str
    frame: dict
    samples: int
    seed: int
    tolerance: float
    residuals: list[float] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def mean_residual(self) -> float:
        return float(np.mean(self.residuals)) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        expect_fail = self.notes.get("negative_control", False)
        if not self.residuals:
            return not expect_fail
        if expect_fail:
            return min(self.residuals) >= self.tolerance
        return self.max_residual <= self.tolerance and not self.failures

    def add(self, value: float, point: Point | dict | None = None):
        value = float(value)
        self.residuals.append(value)
        bad = (value < self.tolerance) if self.notes.get("negative_control") else (value > self.tolerance or not np.isfinite(value))
        if bad and point is not None:
            self.failures.append({"point": point.to_json() if isinstance(point, Point) else point,
                                  "residual": value})

    def to_json(self) -> dict[str, Any]:
        return {
            "identity": self.identity,
            "frame": self.frame,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "passed": self.passed,
            "failures": self.failures,
            "notes": self.notes,
        }

    def summary(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.identity}: max residual {self.max_residual:.3e} (tol {self.tolerance:g}, {self.samples} samples)"
