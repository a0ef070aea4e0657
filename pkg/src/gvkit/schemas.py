"""JSON and CSV forms of the tables and inputs.

Rationals are always written as separate integer ``num``/``den`` fields.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction

from .cech import Nerve, transition_sign_cocycle
from .grr import CY3Data, ChernData, KunnethRing, ONE, POINT
from .gvgw import GVInput, GWTable
from .k3hilb import KKVReport

__all__ = [
    "SchemaError",
    "gv_input_to_json",
    "gv_input_from_json",
    "gw_table_to_json",
    "gw_table_from_json",
    "kkv_report_to_json",
    "chern_from_json",
    "chern_to_json",
    "cover_from_json",
    "to_csv",
]


class SchemaError(ValueError):
    """Malformed input; ``field`` names the offending location."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _get(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}.{key}", "missing")
    v = obj[key]
    if kind is not None and not _is(v, kind):
        raise SchemaError(f"{where}.{key}", f"expected {kind.__name__}, got {type(v).__name__}")
    return v


def _is(v, kind) -> bool:
    if kind is int:
        return isinstance(v, int) and not isinstance(v, bool)
    return isinstance(v, kind)


def _entries(doc, where="$"):
    entries = _get(doc, "entries", where, list)
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise SchemaError(f"{where}.entries[{i}]", "expected an object")
    return entries


# -- GV / GW tables ------------------------------------------------------------
def gv_input_to_json(gv: GVInput) -> dict:
    rows = sorted(gv.n.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    return {"entries": [{"h": h, "k": d, "n": n} for (h, d), n in rows]}


def gv_input_from_json(doc) -> GVInput:
    n = {}
    for i, e in enumerate(_entries(doc)):
        where = f"$.entries[{i}]"
        h, k, v = (_get(e, f, where, int) for f in ("h", "k", "n"))
        if h < 0:
            raise SchemaError(f"{where}.h", "must be nonnegative")
        if k < 1:
            raise SchemaError(f"{where}.k", "degree must be positive")
        if (h, k) in n:
            raise SchemaError(where, f"duplicate entry (h={h}, k={k})")
        n[h, k] = v
    return GVInput(n)


def gw_table_to_json(gw: GWTable) -> dict:
    rows = sorted(gw.N.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    return {
        "entries": [
            {"g": g, "d": d, "num": v.numerator, "den": v.denominator} for (g, d), v in rows
        ]
    }


def gw_table_from_json(doc) -> GWTable:
    N = {}
    for i, e in enumerate(_entries(doc)):
        where = f"$.entries[{i}]"
        g, d, num, den = (_get(e, f, where, int) for f in ("g", "d", "num", "den"))
        if g < 0:
            raise SchemaError(f"{where}.g", "must be nonnegative")
        if d < 1:
            raise SchemaError(f"{where}.d", "degree must be positive")
        if den == 0:
            raise SchemaError(f"{where}.den", "zero denominator")
        if (g, d) in N:
            raise SchemaError(where, f"duplicate entry (g={g}, d={d})")
        N[g, d] = Fraction(num, den)
    return GWTable(N)


def kkv_report_to_json(report: KKVReport) -> dict:
    n, r = report.n_table, report.r_table
    out = {
        "k_max": n.k_max,
        "entries": [{"h": h, "k": k, "n": v} for h, k, v in n.entries()],
        "kkv_entries": [{"h": h, "k": k, "n": v} for h, k, v in r.entries()],
        "kkv_equal": report.equal,
    }
    if report.first_mismatch:
        h, k, nv, rv = report.first_mismatch
        out["first_mismatch"] = {"h": h, "k": k, "n": nv, "r": rv}
    return out


# -- Chern data ----------------------------------------------------------------
def _rational(t, where) -> Fraction:
    num = _get(t, "coeff_num", where, int)
    den = t.get("coeff_den", 1)
    if not _is(den, int) or den == 0:
        raise SchemaError(f"{where}.coeff_den", "must be a nonzero integer")
    return Fraction(num, den)


def _class(ring: KunnethRing, terms, where, degree: int, integral: bool):
    if not isinstance(terms, list):
        raise SchemaError(where, "expected a list of terms")
    out = {}
    for i, t in enumerate(terms):
        w = f"{where}[{i}]"
        mono = _get(t, "x_monomial", w, list)
        for g in mono:
            if g not in ring.x_generators:
                raise SchemaError(f"{w}.x_monomial", f"unknown X generator {g!r}")
        y = _get(t, "y_basis", w, str)
        try:
            deg = ring.degree(tuple(mono), y)
        except KeyError:
            raise SchemaError(f"{w}.y_basis", f"unknown Y basis element {y!r}") from None
        if deg != degree:
            raise SchemaError(w, f"term has degree {deg}, expected {degree}")
        c = _rational(t, w)
        if integral and c.denominator != 1:
            raise SchemaError(f"{w}.coeff_num", "Chern class coordinates must be integers")
        key = (tuple(sorted(mono)), y)
        out[key] = out.get(key, 0) + c
    return ring.element(out)


def chern_from_json(doc) -> ChernData:
    rank = _get(doc, "rank", "$", int)
    gens = _get(doc, "generators", "$", list)
    xgens, h2, h4 = {}, [], []
    for i, g in enumerate(gens):
        w = f"$.generators[{i}]"
        name = _get(g, "name", w, str)
        deg = _get(g, "degree", w, int)
        side = _get(g, "side", w, str)
        if name in (ONE, POINT) or name in xgens or name in h2 or name in h4:
            raise SchemaError(f"{w}.name", f"duplicate or reserved name {name!r}")
        if side == "X":
            if deg <= 0 or deg % 2:
                raise SchemaError(f"{w}.degree", "X generators need positive even degree")
            xgens[name] = deg
        elif side == "Y":
            if deg == 2:
                h2.append(name)
            elif deg == 4:
                h4.append(name)
            else:
                raise SchemaError(f"{w}.degree", "Y basis elements have degree 2 or 4")
        else:
            raise SchemaError(f"{w}.side", "must be 'X' or 'Y'")
    cy = _get(doc, "cy3", "$", dict)
    pairing = {}
    for i, p in enumerate(_get(cy, "pairing", "$.cy3", list)):
        w = f"$.cy3.pairing[{i}]"
        pairing[_get(p, "h2", w, str), _get(p, "h4", w, str)] = _get(p, "value", w, int)
    triple = {}
    for i, p in enumerate(_get(cy, "triple_product", "$.cy3", list)):
        w = f"$.cy3.triple_product[{i}]"
        factors = _get(p, "factors", w, list)
        triple[tuple(factors)] = _get(p, "value", w, int)
    c2 = _get(cy, "c2", "$.cy3", dict)
    for k, v in c2.items():
        if not _is(v, int):
            raise SchemaError(f"$.cy3.c2.{k}", "must be an integer")
    try:
        cy3 = CY3Data(tuple(h2), tuple(h4), pairing, triple, dict(c2))
        ring = KunnethRing(cy3, xgens)
    except ValueError as exc:
        raise SchemaError("$.cy3", str(exc)) from None
    classes = [
        _class(ring, _get(doc, f"alpha{i}", "$"), f"$.alpha{i}", 2 * i, True) for i in (1, 2, 3)
    ]
    delta4 = _class(ring, _get(doc, "delta4", "$"), "$.delta4", 8, False)
    return ChernData(ring, rank, *classes, delta4)


def _terms_json(cls) -> list:
    return [
        {"x_monomial": list(mono), "y_basis": y, "coeff_num": v.numerator, "coeff_den": v.denominator}
        for (mono, y), v in sorted(cls.terms.items())
    ]


def chern_to_json(cd: ChernData) -> dict:
    ring, cy = cd.ring, cd.ring.cy3
    gens = [{"name": n, "degree": d, "side": "X"} for n, d in ring.x_generators.items()]
    gens += [{"name": n, "degree": 2, "side": "Y"} for n in cy.h2]
    gens += [{"name": n, "degree": 4, "side": "Y"} for n in cy.h4]
    return {
        "rank": cd.rank,
        "generators": gens,
        "alpha1": _terms_json(cd.alpha1),
        "alpha2": _terms_json(cd.alpha2),
        "alpha3": _terms_json(cd.alpha3),
        "delta4": _terms_json(cd.delta4),
        "cy3": {
            "pairing": [{"h2": d, "h4": c, "value": v} for (d, c), v in sorted(cy.pairing.items())],
            "triple_product": [
                {"factors": list(k), "value": v} for k, v in sorted(cy.triple.items())
            ],
            "c2": dict(sorted(cy.c2.items())),
        },
    }


# -- covers --------------------------------------------------------------------
def _face_key(s: str, vertices: list, where: str) -> tuple:
    lookup = {str(v): v for v in vertices}
    parts = [p.strip() for p in s.split(",")]
    try:
        return tuple(lookup[p] for p in parts)
    except KeyError as exc:
        raise SchemaError(where, f"unknown vertex {exc.args[0]!r}") from None


def cover_from_json(doc):
    """(nerve, sigma) from a Cover document; sigma is built from the signs."""
    vertices = _get(doc, "vertices", "$", list)
    faces = _get(doc, "faces", "$", dict)
    parsed = {}
    for size, flist in faces.items():
        w = f"$.faces.{size}"
        try:
            n = int(size)
        except ValueError:
            raise SchemaError(w, "face size must be an integer key") from None
        if not isinstance(flist, list) or not all(isinstance(f, list) for f in flist):
            raise SchemaError(w, "expected a list of vertex lists")
        parsed[n] = [tuple(f) for f in flist]
    try:
        nerve = Nerve(vertices, parsed)
    except ValueError as exc:
        raise SchemaError("$.faces", str(exc)) from exc
    signs = doc.get("signs", {}) or {}
    if not isinstance(signs, dict):
        raise SchemaError("$.signs", "expected an object")
    dets, corr = {}, {}
    for name, target, size in (("pairs", dets, 2), ("triples", corr, 3)):
        table = signs.get(name, {}) or {}
        if not isinstance(table, dict):
            raise SchemaError(f"$.signs.{name}", "expected an object")
        for key, s in table.items():
            w = f"$.signs.{name}.{key}"
            face = _face_key(key, vertices, w)
            if len(face) != size:
                raise SchemaError(w, f"expected {size} vertices")
            if s not in (1, -1):
                raise SchemaError(w, "sign must be 1 or -1")
            try:
                nerve.index(face)
            except KeyError:
                raise SchemaError(w, "not a face of the nerve") from None
            target[face] = s
    try:
        sigma = transition_sign_cocycle(nerve, dets, corr)
    except ValueError as exc:
        raise SchemaError("$.signs", str(exc)) from None
    return nerve, sigma


def to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
