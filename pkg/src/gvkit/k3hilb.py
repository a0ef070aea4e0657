"""GV invariants of the K3 fiber class from Hilbert schemes of points.

Two independent routes produce the same integer table:

* the (t_L, t_R)-graded Poincare series of ``S^[k]`` is expanded as an
  infinite product, specialized at ``t_R = -1`` and written in the
  ``(t_L + 1/t_L + 2)**h`` basis (:func:`gv_table`);
* the KKV product in ``(q, y)`` is expanded directly and written in the
  basis ``(-1)**h (y**(1/2) - y**(-1/2))**(2h) = (2 - y - 1/y)**h``
  (:func:`kkv_table`).  The half powers never appear: the square is already
  a Laurent polynomial in ``y``.

:func:`verify_kkv` compares the two tables exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .series import (
    TruncatedSeries,
    VariableSpec,
    coefficient_of,
    constant,
    laurent,
    power_factor,
    product_factor,
    substitute,
)
from .sl2rep import T_L, T_R, extract_gv, is_symmetric, jh_basis_character, tr_minus_one, triangular_peel

__all__ = [
    "Q",
    "Y",
    "HilbSeries",
    "GVTable",
    "KKVReport",
    "KKVMismatch",
    "k3_character",
    "sym_product_series",
    "hilb_series",
    "gv_table",
    "kkv_rhs",
    "kkv_coefficient",
    "kkv_table",
    "verify_kkv",
    "euler_from_gv",
]

Q = "q"
Y = "y"

FROM_DECOMPOSITION = "from-decomposition"
FROM_KKV = "from-kkv"


def k3_character() -> TruncatedSeries:
    """(1/2)_L x (1/2)_R + 20 (0)_L x (0)_R."""
    tl, tr = laurent(T_L), laurent(T_R)
    return (tl + tl ** -1) * (tr + tr ** -1) + 20


def _torus_monomials():
    tl, tr = laurent(T_L), laurent(T_R)
    return [tl * tr, tl ** -1 * tr, tl * tr ** -1, tl ** -1 * tr ** -1]


@dataclass(frozen=True)
class HilbSeries:
    series: TruncatedSeries
    k_max: int

    def coefficient(self, k: int) -> TruncatedSeries:
        return coefficient_of(self.series, Q, k)

    def is_palindromic(self, k: int) -> bool:
        c = self.coefficient(k)
        return is_symmetric(c, T_L) and is_symmetric(c, T_R)


def sym_product_series(k_max: int) -> HilbSeries:
    """Poincare series of the symmetric products S^(k), through q**k_max."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    s = constant(1).with_variables(VariableSpec(Q, "truncated", k_max))
    for mono in _torus_monomials():
        s = s * power_factor(mono, 1, -1, k_max, Q)
    s = s * power_factor(1, 1, -20, k_max, Q)
    return HilbSeries(s, k_max)


def hilb_series(k_max: int) -> HilbSeries:
    """Poincare series of the Hilbert schemes S^[k], through q**k_max."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    count = max(k_max, 1)
    s = constant(1).with_variables(VariableSpec(Q, "truncated", k_max))
    for mono in _torus_monomials():
        s = s * product_factor(mono, -1, count, k_max, Q)
    s = s * product_factor(1, -20, count, k_max, Q)
    return HilbSeries(s, k_max)


@dataclass(frozen=True)
class GVTable:
    """n_h(k) for 1 <= k <= k_max; absent entries are zero."""

    n: dict = field(default_factory=dict)
    k_max: int = 0
    provenance: str = FROM_DECOMPOSITION

    def __getitem__(self, hk: tuple) -> int:
        return self.n.get(hk, 0)

    def row(self, h: int) -> list:
        return [self[h, k] for k in range(1, self.k_max + 1)]

    def entries(self) -> list:
        """(h, k, n) for every h <= k, sorted by k then h."""
        return [(h, k, self[h, k]) for k in range(1, self.k_max + 1) for h in range(0, k + 1)]


def gv_table(k_max: int) -> GVTable:
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    hs = hilb_series(k_max)
    n = {}
    for k in range(1, k_max + 1):
        p = tr_minus_one(hs.coefficient(k))
        for h, v in extract_gv(p).n.items():
            n[h, k] = v
    return GVTable(n, k_max, FROM_DECOMPOSITION)


def kkv_rhs(k_max: int) -> TruncatedSeries:
    """``1 / prod_m (1 - y q^m)^2 (1 - q^m/y)^2 (1 - q^m)^20`` through q**k_max.

    The overall ``1/q`` of the KKV formula is not stored.  The formula's
    ``q**(k-1)`` coefficient is the stored ``q**k`` coefficient and is
    reported under index k (see :func:`kkv_coefficient`).
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    order = k_max
    y = laurent(Y)
    count = order
    s = product_factor(y, -2, count, order, Q)
    s = s * product_factor(y ** -1, -2, count, order, Q)
    s = s * product_factor(1, -20, count, order, Q)
    return s


def kkv_coefficient(rhs: TruncatedSeries, k: int) -> TruncatedSeries:
    return coefficient_of(rhs, Q, k)


def _bps_basis(h: int) -> tuple:
    # (-1)^h (y^(1/2) - y^(-1/2))^(2h) = (2 - y - 1/y)^h, leading term (-1)^h y^h
    y = laurent(Y)
    elem = (2 - y - y ** -1) ** h if h else constant(1)
    return {k: int(c) for k, c in elem.exponents(Y).items()}, (-1) ** h


def kkv_table(k_max: int) -> GVTable:
    """r_h(k) read off the KKV product in the (-1)^h (y^1/2 - y^-1/2)^2h basis."""
    n = {}
    if k_max >= 1:
        rhs = kkv_rhs(k_max)
        for k in range(1, k_max + 1):
            w = {e: int(c) for e, c in kkv_coefficient(rhs, k).exponents(Y).items()}
            for h, v in triangular_peel(w, _bps_basis).items():
                n[h, k] = v
    return GVTable(n, max(k_max, 0), FROM_KKV)


class KKVMismatch(AssertionError):
    def __init__(self, h: int, k: int, n: int, r: int):
        super().__init__(f"n_{h}({k}) = {n} but r_{h}({k}) = {r}")
        self.h, self.k, self.n, self.r = h, k, n, r


@dataclass(frozen=True)
class KKVReport:
    n_table: GVTable
    r_table: GVTable
    first_mismatch: tuple | None

    @property
    def equal(self) -> bool:
        return self.first_mismatch is None

    def check(self) -> "KKVReport":
        if self.first_mismatch is not None:
            raise KKVMismatch(*self.first_mismatch)
        return self


def verify_kkv(k_max: int) -> KKVReport:
    """Compare the decomposition and KKV tables entry by entry."""
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    n = gv_table(k_max)
    r = kkv_table(k_max)
    mismatch = None
    for k in range(1, k_max + 1):
        for h in range(0, k_max + 1):
            if n[h, k] != r[h, k]:
                mismatch = (h, k, n[h, k], r[h, k])
                break
        if mismatch:
            break
    return KKVReport(n, r, mismatch)


def euler_from_gv(table: GVTable, k: int) -> int:
    """Euler number of S^[k] from the GV table: sum_h n_h(k) J_h(t_L = -1)."""
    if not 1 <= k <= table.k_max:
        raise ValueError(f"k={k} outside 1..{table.k_max}")
    total = 0
    for (h, kk), v in table.n.items():
        if kk == k:
            total += v * substitute(jh_basis_character(h), T_L, -1).constant_value()
    return int(total)
