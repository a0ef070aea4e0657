"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O, 2 schema, 3 check failure.
Limits come from flags, then the JSON file named by ``GVKIT_CONFIG``, then
built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import cech, grr, gvgw, k3hilb
from .schemas import (
    SchemaError,
    chern_from_json,
    chern_to_json,
    cover_from_json,
    gv_input_from_json,
    gv_input_to_json,
    gw_table_from_json,
    gw_table_to_json,
    kkv_report_to_json,
    to_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_SCHEMA, EXIT_CHECK = 0, 1, 2, 3

DEFAULTS = {"kmax": 5, "gmax": 3, "dmax": 5, "hmax": None, "format": "csv"}
CONFIG_ENV = "GVKIT_CONFIG"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    kmax: int
    gmax: int
    dmax: int
    hmax: int
    input: str | None
    out: str | None
    format: str
    seed: int | None = None

    def __post_init__(self):
        for name in ("kmax", "gmax", "dmax", "hmax"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise UsageError(f"{name} must be an integer")
        if self.kmax < 1 or self.dmax < 1 or self.gmax < 0 or self.hmax < 0:
            raise UsageError("kmax and dmax must be positive, gmax and hmax nonnegative")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gvkit", description="Exact GV/GW, GRR parity and Cech obstruction computations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--out", default=None, help="output path (default: stdout)")

    sp = sub.add_parser("k3", help="GV table of the K3 fiber class and the KKV cross-check")
    sp.add_argument("--kmax", type=int, default=None)
    common(sp)

    sp = sub.add_parser("gw", help="GV table -> GW invariants")
    sp.add_argument("--gv", required=True)
    sp.add_argument("--gmax", type=int, default=None)
    sp.add_argument("--dmax", type=int, default=None)
    common(sp)

    sp = sub.add_parser("gv-invert", help="GW invariants -> GV table")
    sp.add_argument("--gw", required=True)
    sp.add_argument("--hmax", type=int, default=None)
    sp.add_argument("--dmax", type=int, default=None)
    common(sp)

    sp = sub.add_parser("parity", help="parity of c1(Ext_pi(E,E)) by GRR")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--chern", help="Chern data JSON, or @name for a bundled fixture")
    src.add_argument("--seed", type=int, help="generate random line-bundle-sum data")
    sp.add_argument("--reduce", action="store_true", help="replace E by E + det(E)^-1 first")
    sp.add_argument("--emit-input", default=None, help="write the Chern data used to this path")
    common(sp)

    sp = sub.add_parser("cech", help="Z/2 obstruction class of a cover")
    sp.add_argument("--cover", required=True, help="cover JSON, or @name for a bundled fixture")
    common(sp)
    return p


def _load_config() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {CONFIG_ENV}={path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{CONFIG_ENV}={path}", f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SchemaError(f"{CONFIG_ENV}={path}", "expected an object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise SchemaError(f"{CONFIG_ENV}={path}", f"unknown keys {sorted(unknown)}")
    return data


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = dict(DEFAULTS)
    cfg.update(_load_config())
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    if cfg["hmax"] is None:
        cfg["hmax"] = cfg["gmax"]
    inp = getattr(args, "gv", None) or getattr(args, "gw", None) or getattr(args, "chern", None) \
        or getattr(args, "cover", None)
    return RunConfig(
        command=args.command,
        kmax=cfg["kmax"],
        gmax=cfg["gmax"],
        dmax=cfg["dmax"],
        hmax=cfg["hmax"],
        input=inp,
        out=args.out,
        format=cfg["format"],
        seed=getattr(args, "seed", None),
    )


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("gvkit") / "fixtures" / f"{name}.json"))


def _read_json(spec: str):
    path = fixture_path(spec[1:]) if spec.startswith("@") else Path(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        Path(cfg.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {cfg.out}: {exc.strerror}") from None


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _frac_str(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands ------------------------------------------------------------------
def cmd_k3(cfg: RunConfig) -> int:
    report = k3hilb.verify_kkv(cfg.kmax)
    if cfg.format == "json":
        _emit(cfg, _dumps(kkv_report_to_json(report)))
    else:
        rows = [(k, h, n, report.r_table[h, k]) for h, k, n in report.n_table.entries()]
        _emit(cfg, to_csv(["k", "h", "n", "r"], rows))
    if not report.equal:
        h, k, n, r = report.first_mismatch
        _note(f"KKV check FAILED: n_{h}({k}) = {n} != r_{h}({k}) = {r}")
        return EXIT_CHECK
    _note(f"KKV check passed: n_h(k) = r_h(k) for all h <= k <= {cfg.kmax}")
    return EXIT_OK


def _gw_text(cfg: RunConfig, gw: gvgw.GWTable) -> str:
    doc = gw_table_to_json(gw)
    if cfg.format == "json":
        return _dumps(doc)
    return to_csv(["g", "d", "num", "den"], [(e["g"], e["d"], e["num"], e["den"]) for e in doc["entries"]])


def _gv_text(cfg: RunConfig, gv: gvgw.GVInput) -> str:
    doc = gv_input_to_json(gv)
    if cfg.format == "json":
        return _dumps(doc)
    return to_csv(["k", "h", "n"], [(e["k"], e["h"], e["n"]) for e in doc["entries"]])


def cmd_gw(cfg: RunConfig) -> int:
    gv = gv_input_from_json(_read_json(cfg.input))
    if gv.d_max > cfg.dmax:
        raise UsageError(f"input has degree {gv.d_max} > --dmax {cfg.dmax}")
    _emit(cfg, _gw_text(cfg, gvgw.gv_to_gw(gv, cfg.gmax, cfg.dmax)))
    return EXIT_OK


def cmd_gv_invert(cfg: RunConfig) -> int:
    gw = gw_table_from_json(_read_json(cfg.input))
    if gw.d_max > cfg.dmax:
        raise UsageError(f"input has degree {gw.d_max} > --dmax {cfg.dmax}")
    try:
        gv = gvgw.gw_to_gv(gw, cfg.hmax, cfg.dmax)
    except gvgw.InconsistentGW as exc:
        _note(f"inconsistent GW input: {exc}")
        return EXIT_CHECK
    _emit(cfg, _gv_text(cfg, gv))
    return EXIT_OK


def random_chern_data(seed: int) -> grr.ChernData:
    rng = random.Random(seed)
    cy = grr.quintic() if rng.random() < 0.5 else grr.bicubic()
    ring = grr.KunnethRing(cy, {"x1": 2, "x2": 2, "w": 4})
    return grr.random_line_bundle_sum(ring, rng)


def _parity_doc(report: grr.ParityReport) -> dict:
    def rat(m):
        if m is None:
            return None
        return [{"generator": g, "num": v.numerator, "den": v.denominator} for g, v in sorted(m.items())]

    return {
        "c1": rat(report.c1),
        "integral": report.integral,
        "even": report.even,
        "alpha2_square": rat(report.alpha2_square),
        "pushforward_e": rat(report.pushforward_e),
    }


def cmd_parity(cfg: RunConfig, reduce: bool = False, emit_input: str | None = None) -> int:
    if cfg.seed is not None:
        cd = random_chern_data(cfg.seed)
    else:
        cd = chern_from_json(_read_json(cfg.input))
    if emit_input:
        try:
            Path(emit_input).write_text(_dumps(chern_to_json(cd)), encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {emit_input}: {exc.strerror}") from None
    if reduce:
        cd = grr.det_twist_reduce(cd)
    report = grr.parity_check(cd)
    doc = _parity_doc(report)
    if cfg.format == "json":
        _emit(cfg, _dumps(doc))
    else:
        rows = [("c1[%s]" % e["generator"], f"{e['num']}/{e['den']}") for e in doc["c1"]]
        for name in ("alpha2_square", "pushforward_e"):
            for e in doc[name] or []:
                rows.append((f"{name}[{e['generator']}]", f"{e['num']}/{e['den']}"))
        rows.append(("integral", str(report.integral).lower()))
        rows.append(("even", "" if report.even is None else str(report.even).lower()))
        _emit(cfg, to_csv(["key", "value"], rows))
    expansion = " + ".join(f"{_frac_str(v)}*{g}" for g, v in sorted(report.c1.items())) or "0"
    _note(f"c1 = {expansion}; integral={report.integral}; even={report.even}")
    return EXIT_OK if report.even else EXIT_CHECK


def cmd_cech(cfg: RunConfig) -> int:
    nerve, sigma = cover_from_json(_read_json(cfg.input))
    closed = cech.is_cocycle(sigma)
    doc = {
        "cocycle": closed,
        "trivial": None,
        "witness": None,
        "h1_dim": cech.cohomology_dim(nerve, 1),
        "h2_dim": cech.cohomology_dim(nerve, 2),
        "torsor_count": cech.torsor_count(nerve),
    }
    if closed:
        result = cech.obstruction_class(sigma)
        doc["trivial"] = result.trivial
        if result.witness is not None:
            doc["witness"] = [
                {"pair": list(f), "sign": -1 if v else 1} for f, v in result.witness.values().items()
            ]
    if cfg.format == "json":
        _emit(cfg, _dumps(doc))
    else:
        rows = [(k, "" if doc[k] is None else str(doc[k]).lower()) for k in
                ("cocycle", "trivial", "h1_dim", "h2_dim", "torsor_count")]
        for e in doc["witness"] or []:
            rows.append(("witness[%s]" % ",".join(map(str, e["pair"])), str(e["sign"])))
        _emit(cfg, to_csv(["key", "value"], rows))
    if not closed:
        _note("sign data is not a cocycle")
        return EXIT_CHECK
    _note(f"obstruction {'vanishes' if doc['trivial'] else 'is nontrivial'}; "
          f"{doc['torsor_count']} inequivalent square roots when it vanishes")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "k3":
            return cmd_k3(cfg)
        if args.command == "gw":
            return cmd_gw(cfg)
        if args.command == "gv-invert":
            return cmd_gv_invert(cfg)
        if args.command == "parity":
            return cmd_parity(cfg, reduce=args.reduce, emit_input=args.emit_input)
        if args.command == "cech":
            return cmd_cech(cfg)
    except UsageError as exc:
        _note(f"gvkit: {exc}")
        return EXIT_USAGE
    except SchemaError as exc:
        _note(f"gvkit: schema error: {exc}")
        return EXIT_SCHEMA
    parser.error(f"unknown command {args.command}")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
