"""Command-line front end: ``susy-ybe {catalog,verify,generate,classify,suite}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
configuration errors. A ``--config`` file holds flat ``key = value`` lines
using the long flag names; flags given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .baxterizer import SpectralDomainError
from .charge_catalog import FAMILIES, CatalogError, build, catalog_list, format_spec
from .slocc_lab import apply_r, classify, state_from_text, state_to_text
from .tensor_core import DEFAULT_TOL, DimensionError
from .verifier import (
    RELATIONS,
    VerificationReport,
    charge_r_matrix,
    periodicity_residual,
    relation_residual,
    unitarity_residual,
    verify_charge,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# relations whose template takes the charge Q itself rather than the R-matrix generator
_ON_CHARGE = {"nilpotent", "triple_zero", "ql"}
VERIFY_RELATIONS = ("gybe", "unitarity", "periodicity") + tuple(r for r in RELATIONS if r != "susy")


class UsageError(Exception):
    pass


def _positive_float(text: str) -> float:
    val = float(text)
    if not val > 0 or not math.isfinite(val):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text}")
    return val


def _positive_int(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=_positive_int, default=16)
    common.add_argument("--config", type=Path, help="flat key = value file; flags override it")
    common.add_argument("--output", "-o", type=Path, help="write the report here instead of stdout")

    # the shared flags live on each subcommand only: argparse lets subparser
    # defaults clobber values parsed at the top level
    parser = argparse.ArgumentParser(prog="susy-ybe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", parents=[common], help="list charge families and members")
    p.add_argument("--family")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int)
    p.add_argument("--kind")

    p = sub.add_parser("verify", parents=[common], help="check relations over catalog charges")
    p.add_argument("--family")
    p.add_argument("--charge", help='single charge spec, e.g. "uq1{a=1,b=2}@d2m2"')
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int, help="translation offset (default: the family's declared range)")
    p.add_argument("--relation", choices=VERIFY_RELATIONS, default="gybe")
    p.add_argument("--sector", choices=("nilpotent", "bosonic", "fermionic", "hamiltonian"))
    p.add_argument("--c", type=float, default=1.0)

    p = sub.add_parser("generate", parents=[common], help="apply a charge's R-matrix to a basis ket")
    p.add_argument("--charge", required=True)
    p.add_argument("--in", dest="ket", required=True, help="input basis label, e.g. 001")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--u", type=complex, help="spectral parameter")
    group.add_argument("--t", type=float, help="imaginary time: u = i t")
    p.add_argument("--position", type=int, default=1)
    p.add_argument("--sector", choices=("nilpotent", "bosonic", "fermionic", "hamiltonian"))
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--state-out", type=Path, help="state file path (a .json sidecar is written next to it)")

    p = sub.add_parser("classify", parents=[common], help="SLOCC class of a state file")
    p.add_argument("state_file", type=Path)
    p.add_argument("--d", type=int)
    p.add_argument("--rank-tol", type=_positive_float, default=1e-8)

    sub.add_parser("suite", parents=[common], help="run the full check battery")
    return parser


def _read_config(path: Path) -> dict[str, str]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        if not eq:
            raise UsageError(f"{path}:{num}: expected key = value")
        key = key.strip().replace("-", "_")
        out["ket" if key == "in" else key] = val.strip()
    return out


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    conf = _read_config(args.config)
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    dests = {a.dest for a in subparser._actions}
    unknown = sorted(set(conf) - dests - {"command", "config"})
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    conf.pop("config", None)
    conf.pop("command", None)
    # config values become defaults, so explicit flags still override them
    subparser.set_defaults(**conf)
    return parser.parse_args(argv)


def _flatten(row: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in row.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, name + "."))
        elif isinstance(val, (list, tuple)):
            out[name] = json.dumps(val)
        else:
            out[name] = "" if val is None else val
    return out


def render(rows: list[dict], fmt: str, summary: dict | None = None) -> str:
    if fmt == "json":
        doc = {"rows": rows}
        if summary is not None:
            doc["summary"] = summary
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    flat = [_flatten(r) for r in rows]
    fields = sorted({k for r in flat for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)
    return buf.getvalue()


def _summary(reports: list[VerificationReport]) -> dict:
    counts: dict[str, int] = {}
    for r in reports:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    return {"checks": len(reports), "verdicts": counts, "ok": all(r.ok for r in reports)}


def _emit(args, text: str):
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)


def run_catalog(args) -> int:
    rows = []
    for spec in catalog_list(args.family, args.m, args.d, args.kind):
        info = FAMILIES[spec.family]
        charge = build(spec)
        rows.append({
            "spec": format_spec(spec),
            "family": spec.family,
            "kind": info.kind,
            "d": spec.d,
            "m": spec.m,
            "l_min": info.l_min(spec.m),
            "sweep_l": info.sweep_ls(spec.m),
            "zero_modes": charge.zero_modes(),
            "summary": info.summary,
            "paper_ref": f"family:{spec.family}",
        })
    if not rows:
        raise UsageError("no catalog entries match the filters")
    _emit(args, render(rows, args.format))
    return EXIT_OK


def _verify_targets(args) -> list:
    if args.charge:
        return [build(args.charge)]
    if args.family is None:
        raise UsageError("verify needs --family or --charge")
    specs = catalog_list(args.family, args.m, args.d)
    if not specs:
        raise UsageError(f"no {args.family} entries at d={args.d}, m={args.m}")
    return [build(s) for s in specs]


def _check_charge(charge, args) -> list[VerificationReport]:
    info = charge.info
    m, name = charge.spec.m, format_spec(charge.spec)
    if args.l is not None and not info.l_ok(m, args.l):
        raise UsageError(f"{name} is declared for l >= {info.l_min(m)}, got --l {args.l}")
    ls = [args.l] if args.l is not None else info.sweep_ls(m)
    ls = [l for l in ls if charge.spec.d ** (m + l) <= 4096]
    rel = args.relation
    if rel == "gybe":
        return [verify_charge(charge, l, args.samples, args.seed, args.tol, args.c, args.sector) for l in ls]
    if rel in ("unitarity", "periodicity"):
        r = charge_r_matrix(charge, args.c, args.sector)
        if rel == "unitarity":
            return [unitarity_residual(r, args.samples, args.seed, args.tol, subject=name)]
        return [periodicity_residual(r, tol=args.tol, subject=name)]
    if rel in _ON_CHARGE:
        operand, k = charge.Q, 1.0
    else:
        operand, k = charge.generator(args.sector)
    ref = f"family:{charge.spec.family}"
    if rel in ("nilpotent", "idempotent"):
        rep = relation_residual(rel, operand, tol=args.tol, k=k, subject=name)
        return [replace(rep, ref=f"{rel};{ref}")]
    return [
        replace(relation_residual(rel, operand, l, args.tol, k, subject=name), ref=f"{rel};{ref}")
        for l in ls
    ]


def run_verify(args) -> int:
    reports = []
    for charge in _verify_targets(args):
        reports.extend(_check_charge(charge, args))
    if not reports:
        raise UsageError("nothing to verify within the dimension guard")
    _emit(args, render([r.to_dict() for r in reports], args.format, _summary(reports)))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def run_generate(args) -> int:
    charge = build(args.charge)
    r = charge_r_matrix(charge, args.c, args.sector)
    if args.t is not None:
        u = 1j * args.t
    elif args.u is not None:
        u = args.u
    else:
        raise UsageError("generate needs --u or --t")
    ket = args.ket
    if not ket.isdigit() or any(int(ch) >= charge.spec.d for ch in ket):
        raise UsageError(f"input {ket!r} is not a basis label for d={charge.spec.d}")
    provenance = f"{format_spec(charge.spec)} on |{ket}> at u={u}"
    gen = apply_r(r, u, ket, args.position, provenance=provenance)
    label = classify(gen.state, provenance=provenance)
    sidecar = {
        "charge": format_spec(charge.spec),
        "input": ket,
        "u": [u.real, u.imag] if isinstance(u, complex) else [float(u), 0.0],
        "position": args.position,
        "raw_norm": gen.raw.norm,
        **label.to_dict(),
    }
    state_text = state_to_text(gen.state, tol=1e-15)
    if args.state_out is not None:
        args.state_out.write_text(state_text)
        Path(str(args.state_out) + ".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    sidecar["state"] = {k: [v.real, v.imag] for k, v in gen.state.terms(1e-15).items()}
    _emit(args, render([sidecar], args.format))
    return EXIT_OK


def run_classify(args) -> int:
    try:
        text = args.state_file.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.state_file}: {exc}") from None
    provenance = ""
    for line in text.splitlines():
        if line.startswith("# provenance="):
            provenance = line.split("=", 1)[1].strip()
    state = state_from_text(text, args.d)
    if state.norm == 0:
        raise UsageError("state file holds the zero vector")
    label = classify(state.normalized(), args.rank_tol, provenance)
    _emit(args, render([label.to_dict()], args.format))
    return EXIT_OK


def run_suite(args) -> int:
    from .suite import run_battery

    reports = run_battery(args.samples, args.seed, args.tol)
    _emit(args, render([r.to_dict() for r in reports], args.format, _summary(reports)))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


COMMANDS = {
    "catalog": run_catalog,
    "verify": run_verify,
    "generate": run_generate,
    "classify": run_classify,
    "suite": run_suite,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (UsageError, CatalogError, DimensionError, SpectralDomainError, ValueError) as exc:
        print(f"susy-ybe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
