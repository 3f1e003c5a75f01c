"""Sampling harness for the commutativity, difference and duality identities."""
from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable

import numpy as np

from .duality import PAIRS, build_frame, check_br, check_duality_pair
from .glk_rep import TensorWeightSpace, enumerate_basis, generator_matrix, is_nonneg_int
from .operators import (
    Point,
    SingularPointError,
    b_series,
    dd_coeff,
    kz_coeff,
    qdd_factor,
    qkz_factor,
    r_matrix_on,
)
from .report import VerificationReport, sample_point, sample_rng

FLATNESS_FAMILIES = ("ratKZ", "trigKZ", "ratDD", "trigDD", "mixed-ratKZ/ratDD")
DIFFERENCE_FAMILIES = ("qDD-braid", "qKZ-commute", "trigKZ-qDD", "qKZ-trigDD",
                       "B-weight", "B-inversion", "B-braid", "R-inversion", "R-YB")
CONTROLLED = {"flatness:ratKZ", "flatness:trigKZ", "flatness:ratDD", "flatness:trigDD",
              "flatness:mixed-ratKZ/ratDD", "difference:qDD-braid", "difference:qKZ-commute",
              "difference:trigKZ-qDD", "difference:qKZ-trigDD",
              "duality:nD", "duality:hD", "duality:ZQ", "duality:QZ", "duality:BR"}

# statement -> identities that exercise it; checked for completeness below
COVERAGE = {
    "rational KZ operators commute": ["flatness:ratKZ"],
    "trigonometric KZ operators commute": ["flatness:trigKZ"],
    "rational KZ and DD operators commute": ["flatness:ratDD", "flatness:mixed-ratKZ/ratDD"],
    "trigonometric DD operators commute": ["flatness:trigDD"],
    "B-series: zero weight, inversion, braid": ["difference:B-weight", "difference:B-inversion",
                                                "difference:B-braid"],
    "trigonometric KZ and qDD operators commute": ["difference:trigKZ-qDD", "difference:qDD-braid"],
    "R-matrix: inversion and Yang-Baxter": ["difference:R-inversion", "difference:R-YB"],
    "qKZ and trigonometric DD operators commute": ["difference:qKZ-commute", "difference:qKZ-trigDD"],
    "duality of differential operators": ["duality:nD", "duality:hD"],
    "duality of difference operators": ["duality:ZQ", "duality:QZ"],
    "B.C equals R under duality": ["duality:BR"],
}
ALL_IDENTITIES = ([f"flatness:{f}" for f in FLATNESS_FAMILIES]
                  + [f"difference:{f}" for f in DIFFERENCE_FAMILIES]
                  + [f"duality:{p}" for p in PAIRS] + ["duality:BR"])
assert set(itertools.chain.from_iterable(COVERAGE.values())) == set(ALL_IDENTITIES)

TOLERANCES = {"analytic": 1e-9, "fd": 1e-6, "control": 1e-2}


def _scaled(diff: np.ndarray, *scales: np.ndarray) -> float:
    if diff.size == 0:
        return 0.0
    scale = max(float(np.abs(s).max()) if np.size(s) else 0.0 for s in scales)
    return float(np.abs(diff).max() / (1.0 + scale))


# --------------------------------------------------------------------------
# flatness


def _family_ops(space, family, control):
    k, n = space.k, space.n
    bad = "plus" if control else "full"
    if family == "ratKZ":
        return [kz_coeff(space, i, "rational", bad) for i in range(n)]
    if family == "trigKZ":
        return [kz_coeff(space, i, "trig", bad) for i in range(n)]
    if family == "ratDD":
        return [dd_coeff(space, a, "rational", corrupt=control) for a in range(k)]
    if family == "trigDD":
        return [dd_coeff(space, a, "trig", corrupt=control) for a in range(k)]
    if family == "mixed-ratKZ/ratDD":
        return ([kz_coeff(space, i, "rational", bad) for i in range(n)]
                + [dd_coeff(space, a, "rational") for a in range(k)])
    raise ValueError(f"unknown flatness family {family!r}")


def flatness_residual(ops, p: Point, method: str = "analytic") -> float:
    """Largest zero-curvature residual kappa(c_u d_u A_v - c_v d_v A_u) - [A_u, A_v] over pairs."""
    worst = 0.0
    vals = [op(p) for op in ops]
    for (u, Au), (v, Av) in itertools.combinations(zip(ops, vals), 2):
        lhs = p.kappa * (u.c_factor(p) * v.partial(p, u.variable, method)
                         - v.c_factor(p) * u.partial(p, v.variable, method))
        prod = Au @ Av
        worst = max(worst, _scaled(lhs - (prod - Av @ Au), lhs, prod))
    return worst


def check_flatness(space: TensorWeightSpace, family: str, samples: int = 50, seed: int = 0,
                   kappa_policy="complex", tolerance: float | None = None,
                   method: str = "analytic", control: bool = False) -> VerificationReport:
    """Zero-curvature check for one operator family.

    ``control`` corrupts the family (Omega_+ instead of Omega for KZ, the
    quadratic term of the first DD operator doubled) and expects failure.
    """
    tag = f"flatness:{family}" + (":control" if control else "")
    if tolerance is None:
        tolerance = TOLERANCES["control"] if control else TOLERANCES["analytic" if method == "analytic" else "fd"]
    rep = VerificationReport(tag, space.to_json(), samples, seed, tolerance,
                             notes={"negative_control": control, "method": method,
                                    "kappa_policy": str(kappa_policy)})
    ops = _family_ops(space, family, control)
    t0 = time.perf_counter()
    for s in range(samples):
        p = sample_point(seed, tag, s, space.n, space.k, kappa_policy)
        try:
            rep.add(flatness_residual(ops, p, method), p)
        except SingularPointError as exc:
            rep.failures.append({"point": p.to_json(), "error": str(exc)})
    rep.wall_time = time.perf_counter() - t0
    return rep


# --------------------------------------------------------------------------
# difference identities


def _truncates(space, a, b) -> bool:
    return b != 0 or is_nonneg_int(space.m[0])


def _full_tensor(k: int, n: int, l) -> tuple[list, dict]:
    """All weight spaces of V_{l_1} x ... x V_{l_n} (integer l) stacked as one direct sum."""
    total = int(round(sum(complex(x).real for x in l)))
    blocks = []
    for low in itertools.product(range(total + 1), repeat=k - 1):
        if sum(low) > total:
            continue
        sp = enumerate_basis(k, n, l, (total - sum(low),) + low)
        if sp.dim:
            blocks.append(sp)
    offsets, pos = {}, 0
    for sp in blocks:
        offsets[sp.m] = pos
        pos += sp.dim
    return blocks, {"offsets": offsets, "dim": pos}


def b_series_direct(k: int, n: int, l, a: int, b: int, t: complex):
    """B_ab(t) on the whole tensor product, built from full generator matrices.

    Independent of the weight-block construction: the Cartan factor is applied
    as a matrix, not read off a weight label.  Returns (B, list of Cartan matrices).
    """
    blocks, meta = _full_tensor(k, n, l)
    dim, offsets = meta["dim"], meta["offsets"]

    def full(a_, b_):
        out = np.zeros((dim, dim), dtype=complex)
        for sp in blocks:
            mat, tgt = generator_matrix(sp, a_, b_, "total")
            if tgt is None or tgt.dim == 0 or tgt.m not in offsets:
                continue
            o_s, o_t = offsets[sp.m], offsets[tgt.m]
            out[o_t:o_t + tgt.dim, o_s:o_s + sp.dim] = mat
        return out

    cart = [full(c, c) for c in range(k)]
    up, down = full(a, b), full(b, a)
    shift = complex(t) * np.eye(dim) - cart[a] + cart[b]
    out = np.eye(dim, dtype=complex)
    factor = np.eye(dim, dtype=complex)
    up_pow = np.eye(dim, dtype=complex)
    down_pow = np.eye(dim, dtype=complex)
    s = 0
    while True:
        s += 1
        up_pow = up @ up_pow
        if not np.any(up_pow):
            break
        down_pow = down_pow @ down
        factor = factor @ np.linalg.inv(s * (shift - s * np.eye(dim)))
        out = out + down_pow @ up_pow @ factor
    return out, cart


def _difference_items(space: TensorWeightSpace, family: str, p: Point, rng, control: bool):
    """Yield (difference, scale...) tuples for one sample."""
    k, n = space.k, space.n
    kap = -p.kappa if control else p.kappa
    if family == "trigKZ-qDD":
        for a in range(k):
            X = qdd_factor(space, a)
            Xa = X(p)
            for i in range(n):
                A = kz_coeff(space, i, "trig")
                lhs = p.kappa * p.z[i] * X.partial(p, ("z", i))
                left = A(p) @ Xa
                yield lhs - left + Xa @ A(p.shift(("lam", a), kap)), lhs, left
    elif family == "qDD-braid":
        X = [qdd_factor(space, a) for a in range(k)]
        for a, b in itertools.combinations(range(k), 2):
            lhs = X[a](p) @ X[b](p.shift(("lam", a), kap))
            rhs = X[b](p) @ X[a](p.shift(("lam", b), p.kappa))
            yield lhs - rhs, lhs
    elif family == "qKZ-commute":
        K = [qkz_factor(space, i) for i in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            lhs = K[i](p) @ K[j](p.shift(("z", i), kap))
            rhs = K[j](p) @ K[i](p.shift(("z", j), p.kappa))
            yield lhs - rhs, lhs
    elif family == "qKZ-trigDD":
        for i in range(n):
            K = qkz_factor(space, i)
            Ki = K(p)
            for a in range(k):
                D = dd_coeff(space, a, "trig")
                lhs = p.kappa * p.lam[a] * K.partial(p, ("lam", a))
                left = D(p) @ Ki
                yield lhs - left + Ki @ D(p.shift(("z", i), kap)), lhs, left
    elif family == "B-weight":
        t = _sample_t(rng)
        for a, b in itertools.permutations(range(k), 2):
            B, cart = b_series_direct(k, n, space.l, a, b, t)
            for h in cart:
                yield B @ h - h @ B, B
    elif family == "B-inversion":
        t = _sample_t(rng)
        for a, b in itertools.permutations(range(k), 2):
            if not (_truncates(space, a, b) and _truncates(space, b, a)):
                continue
            lhs = b_series(space, a, b, t) @ b_series(space, b, a, -t)
            yield lhs - (1 - (space.m[a] - space.m[b]) / t) * np.eye(space.dim), lhs
    elif family == "B-braid":
        t, s = _sample_t(rng), _sample_t(rng)
        for a, b, c in itertools.permutations(range(k), 3):
            if not all(_truncates(space, x, y) for x, y in ((a, b), (a, c), (b, c))):
                continue
            Bab, Bac, Bbc = b_series(space, a, b, t - s), b_series(space, a, c, t), b_series(space, b, c, s)
            lhs = Bab @ Bac @ Bbc
            yield lhs - Bbc @ Bac @ Bab, lhs
    elif family == "R-inversion":
        t = _sample_t(rng)
        for i, j in itertools.permutations(range(n), 2):
            if not (is_nonneg_int(space.l[i]) and is_nonneg_int(space.l[j])):
                continue
            lhs = r_matrix_on(space, i, j, t) @ r_matrix_on(space, j, i, -t)
            yield lhs - np.eye(space.dim), lhs
    elif family == "R-YB":
        t, u = _sample_t(rng), _sample_t(rng)
        for i, j, c in itertools.combinations(range(n), 3):
            Rij, Ric, Rjc = r_matrix_on(space, i, j, t - u), r_matrix_on(space, i, c, t), r_matrix_on(space, j, c, u)
            lhs = Rij @ Ric @ Rjc
            yield lhs - Rjc @ Ric @ Rij, lhs
    else:
        raise ValueError(f"unknown difference family {family!r}")


def _sample_t(rng) -> complex:
    return complex(rng.uniform(0.5, 3.0) * np.exp(1j * rng.uniform(-np.pi, np.pi)))


def difference_applicable(space: TensorWeightSpace, family: str) -> bool:
    if family == "B-weight":
        return all(is_nonneg_int(x) for x in space.l)
    if family == "B-braid":
        return space.k >= 3
    if family == "R-YB":
        return space.n >= 3
    return True


def check_difference(space: TensorWeightSpace, family: str, samples: int = 50, seed: int = 0,
                     kappa_policy="complex", tolerance: float | None = None,
                     control: bool = False) -> VerificationReport:
    """Exact functional equations of the difference operators.

    ``control`` replaces kappa by -kappa in one side of the shift identities.
    """
    if control and family not in ("qDD-braid", "qKZ-commute", "trigKZ-qDD", "qKZ-trigDD"):
        raise ValueError(f"no negative control for {family!r}")
    tag = f"difference:{family}" + (":control" if control else "")
    if tolerance is None:
        tolerance = TOLERANCES["control" if control else "analytic"]
    rep = VerificationReport(tag, space.to_json(), samples, seed, tolerance,
                             notes={"negative_control": control, "kappa_policy": str(kappa_policy)})
    if not difference_applicable(space, family):
        rep.notes["skipped"] = "not applicable to this space"
        return rep
    t0 = time.perf_counter()
    for s in range(samples):
        p = sample_point(seed, tag, s, space.n, space.k, kappa_policy)
        rng = sample_rng(seed, tag + ":t", s)
        try:
            vals = [_scaled(diff, *scales) for diff, *scales in _difference_items(space, family, p, rng, control)]
        except SingularPointError as exc:
            rep.failures.append({"point": p.to_json(), "error": str(exc)})
            continue
        if vals:
            rep.add(max(vals), p)
    rep.wall_time = time.perf_counter() - t0
    return rep


# --------------------------------------------------------------------------
# suite


def parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, str):
        return complex(x.replace(" ", "").replace("i", "j"))
    return complex(x)


DEFAULT_FRAMES = [
    {"k": 2, "n": 2, "l": [1, 1], "m": [1, 1]},
    {"k": 2, "n": 3, "l": [1, 2, 1], "m": [2, 2]},
    {"k": 3, "n": 2, "l": [2, 2], "m": [2, 1, 1]},
    {"k": 3, "n": 3, "l": [1, 1, 1], "m": [1, 1, 1]},
    {"k": 2, "n": 2, "l": [[0.3, 0.4], 1], "m": [[0.3, 0.4], 1]},
]


def default_config() -> dict:
    return {"frames": DEFAULT_FRAMES, "kappa_policy": "complex", "samples": 10, "seed": 0,
            "identities": list(ALL_IDENTITIES), "controls": True, "tolerances": dict(TOLERANCES)}


def validate_config(config: dict) -> dict:
    if not isinstance(config, dict):
        raise ValueError("config must be a JSON object")
    known = {"frames", "k", "n", "l", "m", "kappa_policy", "samples", "seed", "identities",
             "controls", "tolerances"}
    extra = set(config) - known
    if extra:
        raise ValueError(f"unknown config keys: {sorted(extra)}")
    cfg = default_config()
    cfg.update({key: val for key, val in config.items() if key not in ("k", "n", "l", "m")})
    if "k" in config:
        cfg["frames"] = [{key: config[key] for key in ("k", "n", "l", "m")}]
    for fr in cfg["frames"]:
        if set(fr) != {"k", "n", "l", "m"}:
            raise ValueError("each frame needs exactly k, n, l, m")
    unknown = [i for i in cfg["identities"] if i not in ALL_IDENTITIES]
    if unknown:
        raise ValueError(f"unknown identities: {unknown}")
    if not isinstance(cfg["samples"], int) or cfg["samples"] < 0:
        raise ValueError("samples must be a nonnegative integer")
    tol = dict(TOLERANCES)
    tol.update(cfg.get("tolerances") or {})
    cfg["tolerances"] = tol
    return cfg


def _run_one(frame_spec, ident, control, cfg):
    fr = build_frame(frame_spec["k"], frame_spec["n"],
                     [parse_complex(x) for x in frame_spec["l"]],
                     [parse_complex(x) for x in frame_spec["m"]])
    group, family = ident.split(":", 1)
    kw = dict(samples=cfg["samples"], seed=cfg["seed"])
    tol = cfg["tolerances"]["control" if control else "analytic"]
    if group == "flatness":
        return check_flatness(fr.space_k, family, kappa_policy=cfg["kappa_policy"], tolerance=tol,
                              control=control, **kw)
    if group == "difference":
        return check_difference(fr.space_k, family, kappa_policy=cfg["kappa_policy"], tolerance=tol,
                                control=control, **kw)
    if family == "BR":
        return check_br(fr, tolerance=tol, control=control, **kw)
    return check_duality_pair(fr, family, kappa_policy=cfg["kappa_policy"], tolerance=tol,
                              control=control, **kw)


def run_suite(config: dict | None = None, threads: int | None = None) -> dict:
    """Run every requested identity on every frame; returns a JSON-ready result."""
    cfg = validate_config(config or {})
    if threads is None:
        threads = int(os.environ.get("KZLAB_THREADS", "1"))
    jobs = []
    for fi, frame_spec in enumerate(cfg["frames"]):
        for ident in cfg["identities"]:
            jobs.append((fi, frame_spec, ident, False))
            if cfg["controls"] and ident in CONTROLLED:
                jobs.append((fi, frame_spec, ident, True))
    run = lambda job: _run_one(job[1], job[2], job[3], cfg)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(run, jobs))
    else:
        reports = [run(job) for job in jobs]
    entries = []
    for (fi, _, ident, control), rep in zip(jobs, reports):
        entry = rep.to_json()
        entry["frame_index"] = fi
        entries.append(entry)
    requested = set(cfg["identities"])
    coverage = {stmt: [i for i in idents if i in requested] for stmt, idents in COVERAGE.items()}
    return {
        "config": cfg,
        "coverage": coverage,
        "reports": entries,
        "passed": all(e["passed"] for e in entries),
    }
