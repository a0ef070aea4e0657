"""Grothendieck-Riemann-Roch for c_1 of Ext_pi(E, E) on X x Y, Y a Calabi-Yau threefold.

Cohomology of X x Y is modeled by Kunneth terms ``x_monomial (x) y_basis``:

* X is a free commutative ring on even-degree generators (no relations), so
  an identity verified here holds for every X;
* Y is given by its even cohomology ``1, H^2, H^4, pt`` with the cup
  products determined by the triple intersection numbers on H^2 and the
  pairing H^2 x H^4 -> Z.

Degrees are real degrees.  Everything above total degree 8 is discarded:
pushing forward along Y (real dimension 6) to a degree-2 class on X only
sees degree 8.  Odd cohomology is not modeled.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import sympy

__all__ = [
    "ONE",
    "POINT",
    "CY3Data",
    "KunnethRing",
    "KunnethClass",
    "ChernData",
    "ParityReport",
    "quintic",
    "bicubic",
    "line_bundle",
    "chern_character",
    "dual_character",
    "todd_multiply",
    "pushforward_c1",
    "det_twist_reduce",
    "parity_check",
    "point_component",
    "random_line_bundle_sum",
    "random_sheaf_data",
]

ONE = "1"
POINT = "pt"
DEGREE_CAP = 8


@dataclass(frozen=True)
class CY3Data:
    """Even cohomology of a Calabi-Yau threefold modulo torsion.

    ``pairing[(D, C)]`` is the integral of D.C for D in H^2, C in H^4;
    ``triple[(D1, D2, D3)]`` the triple intersection (any order of keys);
    ``c2[C]`` the coordinates of c_2(T_Y) in the H^4 basis.
    """

    h2: tuple
    h4: tuple
    pairing: dict
    triple: dict
    c2: dict

    def __post_init__(self):
        if len(self.h2) != len(self.h4):
            raise ValueError("H^2 and H^4 bases must have the same size")
        names = (ONE, POINT) + tuple(self.h2) + tuple(self.h4)
        if len(set(names)) != len(names):
            raise ValueError("duplicate Y basis names")
        for (d, c), v in self.pairing.items():
            if d not in self.h2 or c not in self.h4 or int(v) != v:
                raise ValueError(f"bad pairing entry {(d, c)}: {v}")
        for key, v in self.triple.items():
            if len(key) != 3 or any(d not in self.h2 for d in key) or int(v) != v:
                raise ValueError(f"bad triple-product entry {key}: {v}")
        for c, v in self.c2.items():
            if c not in self.h4 or int(v) != v:
                raise ValueError(f"bad c2 entry {c}: {v}")
        if abs(self._pairing_matrix.det()) != 1:
            raise ValueError("H^2 x H^4 pairing is not unimodular")

    @cached_property
    def _pairing_matrix(self):
        return sympy.Matrix(
            [[self.pairing.get((d, c), 0) for c in self.h4] for d in self.h2]
        )

    def triple_product(self, a: str, b: str, c: str) -> int:
        for key, v in self.triple.items():
            if sorted(key) == sorted((a, b, c)):
                return int(v)
        return 0

    def y_degree(self, y: str) -> int:
        if y == ONE:
            return 0
        if y == POINT:
            return 6
        if y in self.h2:
            return 2
        if y in self.h4:
            return 4
        raise KeyError(f"unknown Y basis element {y!r}")

    @cached_property
    def _h2_squares(self) -> dict:
        # D_a D_b = sum_c M_c C_c with  sum_c pairing(D_e, C_c) M_c = triple(a, b, e)
        inv = self._pairing_matrix.inv()
        out = {}
        for a in self.h2:
            for b in self.h2:
                t = sympy.Matrix([self.triple_product(a, b, e) for e in self.h2])
                m = inv * t
                out[a, b] = {c: Fraction(int(x.p), int(x.q)) for c, x in zip(self.h4, m) if x != 0}
        return out

    def y_product(self, a: str, b: str) -> dict:
        """Cup product of two Y basis elements as {basis: coefficient}."""
        da, db = self.y_degree(a), self.y_degree(b)
        if da + db > 6:
            return {}
        if a == ONE:
            return {b: Fraction(1)}
        if b == ONE:
            return {a: Fraction(1)}
        if da == 2 and db == 2:
            return self._h2_squares[a, b]
        if da == 2 and db == 4:
            v = self.pairing.get((a, b), 0)
            return {POINT: Fraction(v)} if v else {}
        if da == 4 and db == 2:
            return self.y_product(b, a)
        return {}


def quintic() -> CY3Data:
    """Quintic threefold: H^3 = 5, H.L = 1, c_2 = 50 L."""
    return CY3Data(("H",), ("L",), {("H", "L"): 1}, {("H", "H", "H"): 5}, {"L": 50})


def bicubic() -> CY3Data:
    """Bicubic in P^2 x P^2: H1^2 H2 = H1 H2^2 = 3, c_2.H_i = 36."""
    return CY3Data(
        ("H1", "H2"),
        ("L1", "L2"),
        {("H1", "L1"): 1, ("H2", "L2"): 1},
        {("H1", "H1", "H2"): 3, ("H1", "H2", "H2"): 3},
        {"L1": 36, "L2": 36},
    )


class KunnethRing:
    """Truncated even cohomology of X x Y (through total degree 8)."""

    def __init__(self, cy3: CY3Data, x_generators: dict):
        for name, deg in x_generators.items():
            if deg <= 0 or deg % 2:
                raise ValueError(f"X generator {name!r} must have positive even degree")
            if name in (ONE, POINT) or name in cy3.h2 or name in cy3.h4:
                raise ValueError(f"X generator {name!r} clashes with a Y basis name")
        self.cy3 = cy3
        self.x_generators = dict(x_generators)

    def x_degree(self, mono: tuple) -> int:
        return sum(self.x_generators[g] for g in mono)

    def degree(self, mono: tuple, y: str) -> int:
        return self.x_degree(mono) + self.cy3.y_degree(y)

    def element(self, terms: dict) -> "KunnethClass":
        return KunnethClass(self, terms)

    def zero(self) -> "KunnethClass":
        return KunnethClass(self, {})

    def one(self) -> "KunnethClass":
        return KunnethClass(self, {((), ONE): 1})

    def x(self, name: str) -> "KunnethClass":
        if name not in self.x_generators:
            raise KeyError(name)
        return KunnethClass(self, {((name,), ONE): 1})

    def y(self, name: str) -> "KunnethClass":
        self.cy3.y_degree(name)
        return KunnethClass(self, {((), name): 1})

    def c2(self) -> "KunnethClass":
        return KunnethClass(self, {((), c): v for c, v in self.cy3.c2.items()})


class KunnethClass:
    """Sum of Kunneth terms with exact rational coefficients (possibly mixed degree)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: KunnethRing, terms: dict):
        self.ring = ring
        clean = {}
        for (mono, y), c in terms.items():
            mono = tuple(sorted(mono))
            c = Fraction(c)
            if c == 0 or ring.degree(mono, y) > DEGREE_CAP:
                continue
            clean[mono, y] = clean.get((mono, y), 0) + c
        self.terms = {k: v for k, v in clean.items() if v}

    def _wrap(self, other) -> "KunnethClass":
        if isinstance(other, KunnethClass):
            return other
        return self.ring.one() * Fraction(other) if other else self.ring.zero()

    def __add__(self, other):
        other = self._wrap(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return KunnethClass(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return KunnethClass(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, KunnethClass):
            c = Fraction(other)
            return KunnethClass(self.ring, {k: c * v for k, v in self.terms.items()})
        ring, cy = self.ring, self.ring.cy3
        out: dict = {}
        for (ma, ya), ca in self.terms.items():
            da = ring.degree(ma, ya)
            for (mb, yb), cb in other.terms.items():
                if da + ring.degree(mb, yb) > DEGREE_CAP:
                    continue
                mono = tuple(sorted(ma + mb))
                for y, cy_ in cy.y_product(ya, yb).items():
                    out[mono, y] = out.get((mono, y), 0) + ca * cb * cy_
        return KunnethClass(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, KunnethClass):
            other = self._wrap(other)
        return self.terms == other.terms

    __hash__ = None

    def part(self, degree: int) -> "KunnethClass":
        return KunnethClass(
            self.ring, {k: v for k, v in self.terms.items() if self.ring.degree(*k) == degree}
        )

    def is_homogeneous(self, degree: int) -> bool:
        return all(self.ring.degree(*k) == degree for k in self.terms)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (mono, y), c in sorted(self.terms.items()):
            factors = list(mono) + ([] if y == ONE else [y])
            parts.append(f"{c}*{'*'.join(factors) or '1'}")
        return " + ".join(parts)


@dataclass(frozen=True)
class ChernData:
    """Rank, Chern classes alpha_1..3 and the degree-8 Chern character part delta_4."""

    ring: KunnethRing
    rank: int
    alpha1: KunnethClass
    alpha2: KunnethClass
    alpha3: KunnethClass
    delta4: KunnethClass

    def __post_init__(self):
        for i, a in enumerate((self.alpha1, self.alpha2, self.alpha3), start=1):
            if not a.is_homogeneous(2 * i):
                raise ValueError(f"alpha{i} must be homogeneous of degree {2 * i}")
        if not self.delta4.is_homogeneous(8):
            raise ValueError("delta4 must be homogeneous of degree 8")

    @property
    def is_integral(self) -> bool:
        return all(a.is_integral() for a in (self.alpha1, self.alpha2, self.alpha3))


def line_bundle(c1: KunnethClass) -> ChernData:
    """Chern data of a line bundle with first Chern class ``c1``."""
    ring = c1.ring
    z = ring.zero()
    return ChernData(ring, 1, c1, z, z, (c1 ** 4) * Fraction(1, 24))


def chern_character(cd: ChernData) -> KunnethClass:
    """r + a1 + (a1^2 - 2 a2)/2 + (a1^3 - 3 a1 a2 + 3 a3)/6 + delta4."""
    a1, a2, a3 = cd.alpha1, cd.alpha2, cd.alpha3
    return (
        cd.ring.one() * cd.rank
        + a1
        + (a1 * a1 - a2 * 2) * Fraction(1, 2)
        + (a1 ** 3 - a1 * a2 * 3 + a3 * 3) * Fraction(1, 6)
        + cd.delta4
    )


def dual_character(ch: KunnethClass) -> KunnethClass:
    """ch(E^dual): the ch_i part (real degree 2i) picks up (-1)^i."""
    ring = ch.ring
    return KunnethClass(
        ring,
        {k: (-v if ring.degree(*k) % 4 == 2 else v) for k, v in ch.terms.items()},
    )


def todd_multiply(ch: KunnethClass) -> KunnethClass:
    """Multiply by td(Y) = 1 + c_2(T_Y)/12."""
    return ch + ch * ch.ring.c2() * Fraction(1, 12)


def point_component(cls: KunnethClass, x_degree: int | None = None) -> dict:
    """Coefficients of ``x_monomial (x) [pt]``, i.e. the integral over Y."""
    ring = cls.ring
    return {
        mono: v
        for (mono, y), v in cls.terms.items()
        if y == POINT and (x_degree is None or ring.x_degree(mono) == x_degree)
    }


def pushforward_c1(total: KunnethClass) -> dict:
    """Degree-2 part of pi_*: {X generator: coefficient}."""
    return {mono[0]: v for mono, v in point_component(total.part(DEGREE_CAP), 2).items()}


def _rhom_character(cd: ChernData) -> KunnethClass:
    ch = chern_character(cd)
    return ch * dual_character(ch)


def ext_c1(cd: ChernData) -> dict:
    """c_1(Ext_pi(E, E)) through the full GRR pipeline."""
    return pushforward_c1(todd_multiply(_rhom_character(cd)))


def det_twist_reduce(cd: ChernData) -> ChernData:
    """Chern data of E + det(E)^-1, which has vanishing first Chern class.

    Whitney sum with c(L) = 1 - alpha1 through degree 8; the degree-8
    character gains ch_4(L) = alpha1^4 / 24.
    """
    a1, a2, a3 = cd.alpha1, cd.alpha2, cd.alpha3
    return ChernData(
        cd.ring,
        cd.rank + 1,
        a1 - a1,
        a2 - a1 * a1,
        a3 - a1 * a2,
        cd.delta4 + (a1 ** 4) * Fraction(1, 24),
    )


@dataclass
class ParityReport:
    c1: dict
    integral: bool
    even: bool | None
    # alpha1 = 0 only: c1 = int_Y alpha2^2 + 2 r c1(pi_! E)
    alpha2_square: dict | None = None
    pushforward_e: dict | None = None
    notes: list = field(default_factory=list)


def _add(*maps_with_weights) -> dict:
    out: dict = {}
    for m, w in maps_with_weights:
        for k, v in m.items():
            out[k] = out.get(k, 0) + w * v
    return {k: v for k, v in out.items() if v}


def parity_check(cd: ChernData) -> ParityReport:
    """Is the torsion-free part of c_1(Ext_pi(E, E)) divisible by 2?"""
    if not cd.is_integral:
        raise ValueError("Chern classes alpha1..alpha3 must have integer coefficients")
    c1 = {k: v for k, v in ext_c1(cd).items() if v}
    integral = all(v.denominator == 1 for v in c1.values())
    even = all(v.numerator % 2 == 0 for v in c1.values()) if integral else None
    report = ParityReport(c1, integral, even)
    if cd.alpha1.is_zero():
        sq = {m[0]: v for m, v in point_component(cd.alpha2 * cd.alpha2, 2).items()}
        pe = pushforward_c1(
            cd.delta4 - cd.alpha2 * cd.ring.c2() * Fraction(1, 12)
        )
        report.alpha2_square = {k: v for k, v in sq.items() if v}
        report.pushforward_e = {k: v for k, v in pe.items() if v}
        if _add((sq, 1), (pe, 2 * cd.rank)) != c1:
            raise AssertionError("alpha1 = 0 decomposition disagrees with the GRR pipeline")
    if not integral:
        report.notes.append("c1 is not integral: input is outside the integrality hypotheses")
    return report


# -- random corpora ----------------------------------------------------------
def _random_divisor(ring: KunnethRing, rng: random.Random, bound: int) -> KunnethClass:
    terms = {}
    for g, deg in ring.x_generators.items():
        if deg == 2:
            terms[(g,), ONE] = rng.randint(-bound, bound)
    for d in ring.cy3.h2:
        terms[(), d] = rng.randint(-bound, bound)
    return ring.element(terms)


def random_line_bundle_sum(ring: KunnethRing, rng: random.Random, n_max: int = 3,
                           bound: int = 3) -> ChernData:
    """Chern data of a virtual sum of line bundles with random integral c_1.

    Such data are geometric, so GRR integrality holds without further
    constraints on the coefficients.
    """
    one = ring.one()
    total = one
    rank = 0
    delta4 = ring.zero()
    for _ in range(rng.randint(1, n_max)):
        d = _random_divisor(ring, rng, bound)
        sign = rng.choice((1, 1, -1))
        rank += sign
        delta4 = delta4 + (d ** 4) * Fraction(sign, 24)
        if sign > 0:
            total = total * (one + d)
        else:
            total = total * (one - d + d ** 2 - d ** 3 + d ** 4)
    return ChernData(ring, rank, total.part(2), total.part(4), total.part(6), delta4)


def random_sheaf_data(ring: KunnethRing, rng: random.Random, bound: int = 5) -> ChernData:
    """Rank 0, alpha1 = 0 data with an arbitrary integral Kunneth alpha2."""
    terms = {}
    xs = {d: [g for g, k in ring.x_generators.items() if k == d] for d in (2, 4)}
    for c in ring.cy3.h4:
        terms[(), c] = rng.randint(-bound, bound)
    for g in xs[2]:
        for d in ring.cy3.h2:
            terms[(g,), d] = rng.randint(-bound, bound)
        for h in xs[2]:
            terms[(g, h), ONE] = rng.randint(-bound, bound)
    for g in xs[4]:
        terms[(g,), ONE] = rng.randint(-bound, bound)
    alpha2 = ring.element(terms)
    alpha3 = ring.element({((g,), c): rng.randint(-bound, bound) for g in xs[2] for c in ring.cy3.h4})
    delta4 = ring.element({((g,), POINT): Fraction(rng.randint(-bound, bound), 12) for g in xs[2]})
    return ChernData(ring, 0, ring.zero(), alpha2, alpha3, delta4)
