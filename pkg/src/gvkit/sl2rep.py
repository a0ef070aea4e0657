"""sl2 and sl2 x sl2 characters.

A character is a Laurent polynomial in the torus weight.  Exponents are
twice the spin-weight, so the spin-1/2 irrep is ``t + t**-1`` and no
half-integer exponent ever appears.

Greedy peeling from the top weight down is canonical for both the
irreducible basis and the ``J_h = (t_L + t_L**-1 + 2)**h`` basis: each basis
element has a unique leading term ``t**d`` with coefficient +1, so the change
of basis is unitriangular and the peeled multiplicities are the only
solution.  There are no ties to break.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .series import TruncatedSeries, constant, laurent, substitute

__all__ = [
    "T_L",
    "T_R",
    "IrrepLabel",
    "GVDecomposition",
    "AsymmetricCharacter",
    "VirtualCharacter",
    "irrep_character",
    "cg_decompose",
    "bi_decompose",
    "recompose",
    "jh_basis_character",
    "extract_gv",
    "tr_minus_one",
    "triangular_peel",
    "dimension",
    "is_symmetric",
]

T_L = "t_L"
T_R = "t_R"


class AsymmetricCharacter(ValueError):
    """Input is not invariant under t <-> 1/t."""


class VirtualCharacter(ValueError):
    """A negative multiplicity appeared where an honest representation was required."""


@dataclass(frozen=True, order=True)
class IrrepLabel:
    """Irreducible sl2 representation, stored as twice its spin."""

    twice: int

    def __post_init__(self):
        if self.twice < 0:
            raise ValueError("twice-spin must be nonnegative")

    @classmethod
    def spin(cls, j) -> "IrrepLabel":
        return cls(int(Fraction(j) * 2))

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def dim(self) -> int:
        return self.twice + 1

    def __str__(self):
        return f"({self.j})"


def _weights(char: TruncatedSeries, var: str) -> dict:
    """{exponent: integer coefficient} for a one-variable character."""
    out = {}
    for k, c in char.exponents(var).items():
        if c.denominator != 1:
            raise ValueError(f"character coefficient {c} is not an integer")
        out[k] = int(c)
    return out


def _symmetric(w: dict) -> bool:
    return all(w.get(-k, 0) == c for k, c in w.items())


def is_symmetric(char: TruncatedSeries, var: str) -> bool:
    """True when ``char`` is invariant under ``var <-> 1/var``."""
    i = None
    for n, v in enumerate(char.variables):
        if v.name == var:
            i = n
    if i is None:
        return True
    terms = char.terms
    for e, c in terms.items():
        flipped = e[:i] + (-e[i],) + e[i + 1:]
        if terms.get(flipped, 0) != c:
            return False
    return True


def irrep_character(j: IrrepLabel, var: str = "t") -> TruncatedSeries:
    t = laurent(var)
    terms = {(k,): 1 for k in range(-j.twice, j.twice + 1, 2)}
    return TruncatedSeries(t.variables, terms)


def cg_decompose(char: TruncatedSeries, allow_virtual: bool = False, var: str = "t") -> dict:
    """Multiplicities of irreducibles in a symmetric one-variable character."""
    w = _weights(char, var)
    if not _symmetric(w):
        raise AsymmetricCharacter(f"{char!r} is not symmetric in {var}")
    mult = {}
    while w:
        top = max(w)
        c = w[top]
        if c < 0 and not allow_virtual:
            raise VirtualCharacter(f"negative multiplicity {c} for spin {Fraction(top, 2)}")
        mult[IrrepLabel(top)] = c
        for k in range(-top, top + 1, 2):
            r = w.get(k, 0) - c
            if r:
                w[k] = r
            else:
                w.pop(k, None)
    return mult


def bi_decompose(char: TruncatedSeries, allow_virtual: bool = False) -> dict:
    """Multiplicities of (j_L, j_R) irreducibles in a bicharacter.

    Peels the right weight first with coefficients that are left
    characters, then decomposes each coefficient on the left.
    """
    if not (is_symmetric(char, T_L) and is_symmetric(char, T_R)):
        raise AsymmetricCharacter(f"{char!r} is not symmetric in both weights")
    rows: dict = {}
    iL = iR = None
    for n, v in enumerate(char.variables):
        if v.name == T_L:
            iL = n
        elif v.name == T_R:
            iR = n
        else:
            raise ValueError(f"unexpected variable {v.name!r} in bicharacter")
    for e, c in char.items():
        a = e[iL] if iL is not None else 0
        b = e[iR] if iR is not None else 0
        if c.denominator != 1:
            raise ValueError(f"character coefficient {c} is not an integer")
        row = rows.setdefault(b, {})
        row[a] = row.get(a, 0) + int(c)
    right: dict = {}
    while rows:
        top = max(rows)
        coeff = dict(rows[top])
        right[top] = coeff
        for k in range(-top, top + 1, 2):
            row = rows.setdefault(k, {})
            for a, c in coeff.items():
                r = row.get(a, 0) - c
                if r:
                    row[a] = r
                else:
                    row.pop(a, None)
            if not row:
                del rows[k]
    out = {}
    tl = laurent(T_L)
    for top, coeff in right.items():
        left = TruncatedSeries(tl.variables, {(a,): c for a, c in coeff.items()})
        for label, m in cg_decompose(left, allow_virtual, var=T_L).items():
            if m < 0 and not allow_virtual:
                raise VirtualCharacter(f"negative multiplicity {m}")
            out[(label, IrrepLabel(top))] = m
    return out


def recompose(mult: dict) -> TruncatedSeries:
    """Inverse of :func:`bi_decompose` (keys are (left, right) labels) or
    :func:`cg_decompose` (keys are single labels, variable ``t``)."""
    total = constant(0)
    for key, m in mult.items():
        if isinstance(key, tuple):
            jl, jr = key
            total = total + irrep_character(jl, T_L) * irrep_character(jr, T_R) * m
        else:
            total = total + irrep_character(key) * m
    return total


def dimension(char: TruncatedSeries) -> int:
    """Evaluate every weight at 1."""
    return int(sum(c for _, c in char.items()))


def jh_basis_character(h: int, var: str = T_L) -> TruncatedSeries:
    """Character of ``((1/2) + 2(0))**(tensor h)``: ``(t + 1/t + 2)**h``."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    t = laurent(var)
    return (t + t ** -1 + 2) ** h if h else constant(1)


@dataclass(frozen=True)
class GVDecomposition:
    """Integers n_h with sum_h n_h * J_h equal to the decomposed character."""

    n: dict = field(default_factory=dict)

    @property
    def h_max(self) -> int:
        return max(self.n, default=-1)

    def __getitem__(self, h: int) -> int:
        return self.n.get(h, 0)

    def reconstruct(self, var: str = T_L) -> TruncatedSeries:
        total = constant(0)
        for h, c in self.n.items():
            total = total + jh_basis_character(h, var) * c
        return total


def triangular_peel(w: dict, basis) -> dict:
    """Triangular solve against a basis whose element of index d has
    leading term ``lead(d) * t**d`` with lead = +-1."""
    n = {}
    while w:
        top = max(w)
        if top < 0:
            raise ArithmeticError(f"residual {w} has no nonnegative top weight")
        elem, lead = basis(top)
        c = w[top] * lead
        if c:
            n[top] = c
        for k, b in elem.items():
            r = w.get(k, 0) - c * b
            if r:
                w[k] = r
            else:
                w.pop(k, None)
    return n


def _jh_weights(h: int) -> tuple:
    return {k: int(c) for k, c in jh_basis_character(h, "t").exponents("t").items()}, 1


def extract_gv(p: TruncatedSeries, var: str = T_L) -> GVDecomposition:
    """Write a symmetric integer Laurent polynomial in the J_h basis."""
    w = _weights(p, var)
    if not _symmetric(w):
        raise AsymmetricCharacter(f"{p!r} is not symmetric in {var}")
    return GVDecomposition(triangular_peel(w, _jh_weights))


def tr_minus_one(char) -> TruncatedSeries:
    """Specialize the right weight to -1 (the supertrace of (-1)**H_R)."""
    if isinstance(char, TruncatedSeries):
        return substitute(char, T_R, -1)
    return constant(char)
