"""Command-line front end.

Every subcommand resolves a run configuration (built-in defaults, then the
``--config`` JSON, then explicit flags), runs the matching checks and writes a
single JSON document to stdout or ``--out``.  One summary line per report goes
to stderr.  Exit status: 0 if every report passed, 1 if an identity failed,
2 for bad flags or an invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import verifier
from .duality import PAIRS
from .hyperint import (
    check_identity,
    check_nu_scaling,
    check_selberg,
    integrate_solution,
    solution_residuals,
)
from .operators import yangian_r
from .report import VerificationReport, dumps
from .verifier import parse_complex, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITE_GROUPS = {
    "verify-flatness": [f"flatness:{f}" for f in verifier.FLATNESS_FAMILIES],
    "verify-difference": [f"difference:{f}" for f in verifier.DIFFERENCE_FAMILIES],
    "verify-duality": [f"duality:{p}" for p in PAIRS],
    "verify-br": ["duality:BR"],
}

IDENTITY_DEFAULTS = {
    "verify-dualhint": {"l": ["-0.6+0.3j", 1], "m": ["-0.6+0.3j", 1], "z": ["1-0.5j", "-1+0.4j"],
                        "lam": ["1.3-0.4j", "-0.7+0.6j"], "kappa": 2.7, "b": None},
    "verify-dualqhint": {"l": ["-0.7+0.2j", 1], "m": ["-0.7+0.2j", 1], "z": ["0.9+0.3j", "-0.6-0.2j"],
                         "lam": ["1.1+0.5j", "-0.4+0.9j"], "kappa": 2.3, "b": None},
}

DEFAULTS = {
    "verify-selberg": {"kind": "rational", "m": 1, "l": 2.3, "nu": 1.7, "kappa": 3.14159, "x": -0.4,
                       "nus": [1.7, 3.1], "tolerance": None},
    "verify-2f1": {"alpha": 0.7, "beta": 1.1, "gamma": 1.9, "x": -0.4, "tolerance": 1e-8},
    "integrate": {"kind": "U", "d": [1, 0], "z": ["0.3-0.5j", "-0.2+0.5j"], "lam": ["1+0.2j", "-0.5+0.1j"],
                  "l": [1, 1], "m": [1, 1], "kappa": 2.3, "residuals": False, "fd_step": 1e-3,
                  "tolerance": 1e-4},
    "rmatrix": {"k": 2, "l": 1, "m": 1, "t": "0.7+0.3j", "depth": None},
}


class UsageError(Exception):
    pass


def _complex_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    return [int(x) for x in _complex_list(text)]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file (or inline JSON object) overriding the defaults")
    p.add_argument("--seed", type=int, help="seed of the counter-based sampler")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def _frame_flags(p: argparse.ArgumentParser):
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=_complex_list, help="comma-separated weights, e.g. 1,1 or 0.3+0.4j,1")
    p.add_argument("--m", type=_complex_list)
    p.add_argument("--samples", type=int)
    p.add_argument("--kappa-policy", dest="kappa_policy", choices=["complex", "real"])
    p.add_argument("--family", action="append", help="restrict to one family (repeatable)")
    p.add_argument("--no-controls", dest="controls", action="store_const", const=False)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kzlab", description="Numerical checks of KZ/dynamical operator identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("verify-flatness", "verify-difference", "verify-duality", "verify-br"):
        p = sub.add_parser(name, help=f"sampled checks: {', '.join(SUITE_GROUPS[name])}")
        _common(p)
        _frame_flags(p)

    p = sub.add_parser("suite", help="run the configured identity suite")
    _common(p)
    _frame_flags(p)

    p = sub.add_parser("rmatrix", help="R-matrix on V_l x V_m at one spectral value, block by block")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--l")
    p.add_argument("--m")
    p.add_argument("--t")
    p.add_argument("--depth", type=int)

    p = sub.add_parser("integrate", help="evaluate an integral solution vector")
    _common(p)
    p.add_argument("--kind", choices=["U", "Ut", "Uh"])
    p.add_argument("--d", type=_int_list)
    p.add_argument("--z", type=_complex_list)
    p.add_argument("--lam", type=_complex_list)
    p.add_argument("--l", type=_complex_list)
    p.add_argument("--m", type=_complex_list)
    p.add_argument("--kappa")
    p.add_argument("--residuals", action="store_const", const=True,
                   help="also check the KZ and DD equations by finite differences (U only)")
    p.add_argument("--fd-step", dest="fd_step", type=float)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("verify-selberg", help="Selberg integral: quadrature against closed form")
    _common(p)
    p.add_argument("--kind", choices=["rational", "q", "nu-scaling"])
    p.add_argument("--m", type=int)
    p.add_argument("--l")
    p.add_argument("--nu")
    p.add_argument("--kappa")
    p.add_argument("--x")
    p.add_argument("--nus", type=_complex_list)
    p.add_argument("--tolerance", type=float)

    p = sub.add_parser("verify-2f1", help="Gauss 2F1 by Mellin-Barnes, Euler integral and series")
    _common(p)
    for name in ("alpha", "beta", "gamma", "x"):
        p.add_argument(f"--{name}")
    p.add_argument("--tolerance", type=float)

    for name in ("verify-dualhint", "verify-dualqhint"):
        p = sub.add_parser(name, help="duality of integral solutions for k = n = 2")
        _common(p)
        for flag in ("l", "m", "z", "lam"):
            p.add_argument(f"--{flag}", type=_complex_list)
        p.add_argument("--kappa")
        p.add_argument("--b", type=_int_list)
        p.add_argument("--tolerance", type=float)
    return parser


def _load_config(text: str | None) -> dict:
    if not text:
        return {}
    try:
        if text.lstrip().startswith("{"):
            cfg = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return cfg


def resolve_config(args: argparse.Namespace) -> dict:
    """Defaults, then the config file, then explicit flags."""
    skip = {"command", "config", "out"}
    flags = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    cfg = _load_config(args.config)
    cmd = args.command
    if cmd in SUITE_GROUPS or cmd == "suite":
        merged = dict(cfg)
        family = flags.pop("family", None)
        merged.update(flags)
        if family:
            merged["identities"] = [i if ":" in i else f"{cmd.split('-')[1]}:{i}" for i in family]
        elif cmd != "suite" and "identities" not in cfg:
            merged["identities"] = SUITE_GROUPS[cmd]
        frame_keys = [k for k in ("k", "n", "l", "m") if k in merged]
        if frame_keys and set(frame_keys) != {"k", "n", "l", "m"}:
            raise UsageError("give all of --k, --n, --l, --m (or none)")
        try:
            return verifier.validate_config(merged)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    base = dict(IDENTITY_DEFAULTS.get(cmd) or DEFAULTS[cmd])
    unknown = set(cfg) - set(base) - {"seed", "quadrature"}
    if unknown:
        raise UsageError(f"unknown config keys for {cmd}: {sorted(unknown)}")
    base.update(cfg)
    base.update(flags)
    base.setdefault("seed", 0)
    return base


def _c(x) -> complex:
    return parse_complex(x)


def _cs(xs) -> list[complex]:
    return [parse_complex(x) for x in xs]


def _run(cmd: str, cfg: dict) -> tuple[list[VerificationReport | dict], dict]:
    """Returns (reports, extra payload)."""
    if cmd in SUITE_GROUPS or cmd == "suite":
        result = run_suite(cfg)
        return result["reports"], {"coverage": result["coverage"]}
    quad = cfg.get("quadrature")
    if cmd == "rmatrix":
        table = yangian_r(_c(cfg["l"]), _c(cfg["m"]), int(cfg["k"]), _c(cfg["t"]), cfg["depth"])
        blocks = [{"weight": list(key), "basis": [list(b) for b in table.spaces[key].lower],
                   "matrix": table.blocks[key]} for key in sorted(table.blocks)]
        return [], {"rmatrix": {"k": table.k, "l": table.l, "m": table.m, "t": table.t, "blocks": blocks}}
    if cmd == "integrate":
        args = (cfg["kind"], cfg["d"], _cs(cfg["z"]), _cs(cfg["lam"]), _cs(cfg["l"]), _cs(cfg["m"]), _c(cfg["kappa"]))
        sol = integrate_solution(*args, quadrature=quad)
        reports = []
        if cfg["residuals"]:
            if sol.kind != "U":
                raise UsageError("finite-difference residuals are available for U only")
            res = solution_residuals(*args[1:], h=cfg["fd_step"], quadrature=quad)
            rep = VerificationReport("integrate:U:KZ-DD", {"d": cfg["d"]}, len(res), cfg["seed"],
                                     cfg["tolerance"], notes={"residuals": res})
            for name, val in res.items():
                rep.add(val, {"equation": name})
            reports.append(rep)
        return reports, {"solution": sol.to_json()}
    if cmd == "verify-selberg":
        kind, m = cfg["kind"], int(cfg["m"])
        tol = cfg["tolerance"] if cfg["tolerance"] is not None else (1e-5 if m == 2 and kind == "rational" else 1e-6)
        if kind == "nu-scaling":
            rep = check_nu_scaling(m, _c(cfg["l"]), _c(cfg["kappa"]), _cs(cfg["nus"]), tol, quad)
        elif kind == "rational":
            rep = check_selberg("rational", m, _c(cfg["l"]), _c(cfg["kappa"]), nu=_c(cfg["nu"]),
                                tolerance=tol, quadrature=quad)
        else:
            rep = check_selberg("q", m, _c(cfg["l"]), _c(cfg["kappa"]), x=_c(cfg["x"]),
                                tolerance=tol, quadrature=quad)
        return [rep], {}
    if cmd == "verify-2f1":
        params = {k: _c(cfg[k]) for k in ("alpha", "beta", "gamma", "x")}
        return [check_identity("gauss2F1", params, tolerance=cfg["tolerance"])], {}
    if cmd in IDENTITY_DEFAULTS:
        params = {k: _cs(cfg[k]) for k in ("l", "m", "z", "lam")}
        params.update(kappa=_c(cfg["kappa"]), b=cfg["b"])
        kind = cmd.split("-", 1)[1]
        return [check_identity(kind, params, quad, cfg.get("tolerance"))], {}
    raise UsageError(f"unknown command {cmd}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        reports, extra = _run(args.command, cfg)
    except (UsageError, ValueError, KeyError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"kzlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    entries = [r.to_json() if isinstance(r, VerificationReport) else r for r in reports]
    for e in entries:
        flag = "PASS" if e["passed"] else "FAIL"
        print(f"{flag} {e['identity']}: max residual {e['max_residual']:.3e} (tol {e['tolerance']:g})",
              file=sys.stderr)
    passed = all(e["passed"] for e in entries)
    doc = {"command": args.command, "config": cfg, "reports": entries, "passed": passed, **extra}
    text = dumps(doc) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{len(entries)} reports, {'all passed' if passed else 'FAILURES'}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
