"""GV <-> GW conversion along a ray of curve classes d * beta_1.

    sum_{g,d} N_g(d) q^d lam^(2g-2)
        = sum_{k,h,d} n_h(d) (1/k) (2 sin(k lam / 2))^(2h-2) q^(k d)

Only proportional classes mix under multiple covers, so fixing a primitive
class loses nothing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .series import TruncatedSeries, VariableSpec, coefficient_of, invert_unit

__all__ = [
    "LAM",
    "GVInput",
    "GWTable",
    "InconsistentGW",
    "sin_power_expansion",
    "gv_to_gw",
    "gw_to_gv",
]

LAM = "lam"
LAM_FLOOR = -2


class InconsistentGW(ValueError):
    """GW data whose inversion produces a non-integer GV invariant."""

    def __init__(self, h: int, d: int, value: Fraction):
        super().__init__(f"n_{h}({d}) = {value} is not an integer")
        self.h, self.d, self.value = h, d, value


@dataclass(frozen=True)
class GVInput:
    """n_h(d) for degrees d >= 1 along the ray; zeros are not stored."""

    n: dict = field(default_factory=dict)

    def __post_init__(self):
        for (h, d), v in self.n.items():
            if h < 0 or d < 1:
                raise ValueError(f"bad GV index (h={h}, d={d})")
            if int(v) != v:
                raise ValueError(f"n_{h}({d}) = {v} is not an integer")
        object.__setattr__(self, "n", {k: int(v) for k, v in self.n.items() if v})

    def __getitem__(self, hd: tuple) -> int:
        return self.n.get(hd, 0)

    @property
    def h_max(self) -> int:
        return max((h for h, _ in self.n), default=-1)

    @property
    def d_max(self) -> int:
        return max((d for _, d in self.n), default=0)


@dataclass(frozen=True)
class GWTable:
    """N_g(d) as exact rationals; zeros are not stored."""

    N: dict = field(default_factory=dict)

    def __post_init__(self):
        for (g, d) in self.N:
            if g < 0 or d < 1:
                raise ValueError(f"bad GW index (g={g}, d={d})")
        object.__setattr__(self, "N", {k: Fraction(v) for k, v in self.N.items() if v})

    def __getitem__(self, gd: tuple) -> Fraction:
        return self.N.get(gd, Fraction(0))

    @property
    def g_max(self) -> int:
        return max((g for g, _ in self.N), default=-1)

    @property
    def d_max(self) -> int:
        return max((d for _, d in self.N), default=0)


def _two_minus_two_cos(k: int, order: int) -> TruncatedSeries:
    # (2 sin(x/2))^2 = 2 - 2 cos x = sum_{n>=1} 2 (-1)^(n+1) x^(2n) / (2n)!,  x = k lam
    spec = VariableSpec(LAM, "truncated", order, LAM_FLOOR)
    terms = {
        (2 * n,): Fraction(2 * (-1) ** (n + 1) * k ** (2 * n), factorial(2 * n))
        for n in range(1, order // 2 + 1)
    }
    return TruncatedSeries((spec,), terms)


@lru_cache(maxsize=None)
def sin_power_expansion(k: int, h: int, order: int) -> TruncatedSeries:
    """``(2 sin(k lam / 2))**(2h - 2)`` exactly through ``lam**order``."""
    if k < 1 or h < 0 or order < 0:
        raise ValueError("need k >= 1, h >= 0, order >= 0")
    if h == 0:
        # inverting lam^2 (...) costs four orders of precision
        return invert_unit(_two_minus_two_cos(k, order + 4)).truncate(**{LAM: order})
    base = _two_minus_two_cos(k, order)
    if h == 1:
        return TruncatedSeries(base.variables, {(0,): 1})
    return base ** (h - 1)


def _lam_order(g_max: int) -> int:
    return 2 * g_max + 2


def _cover_coefficient(k: int, h: int, g: int, order: int) -> Fraction:
    """[lam^(2g-2)] of (1/k) (2 sin(k lam/2))^(2h-2)."""
    if 2 * g - 2 < 2 * h - 2:
        return Fraction(0)
    c = coefficient_of(sin_power_expansion(k, h, order), LAM, 2 * g - 2)
    return c.constant_value() / k


def gv_to_gw(gv: GVInput, g_max: int, d_max: int) -> GWTable:
    """GW invariants N_g(d) for g <= g_max, d <= d_max."""
    if gv.d_max > d_max:
        raise ValueError(f"GV data has degree {gv.d_max} > d_max={d_max}")
    order = _lam_order(g_max)
    N: dict = {}
    for (h, d0), n in gv.n.items():
        for k in range(1, d_max // d0 + 1):
            for g in range(h, g_max + 1):
                c = _cover_coefficient(k, h, g, order)
                if c:
                    N[g, k * d0] = N.get((g, k * d0), 0) + n * c
    return GWTable(N)


def gw_to_gv(gw: GWTable, h_max: int, d_max: int) -> GVInput:
    """Invert :func:`gv_to_gw` degree by degree, then genus by genus.

    At degree d the multiple covers of lower degrees are subtracted; what
    remains is the k = 1 contribution, in which n_g(d) enters
    lam^(2g-2) with coefficient exactly 1.  GV invariants above ``h_max``
    are not determined by the data and are taken to be zero.
    """
    if gw.d_max > d_max:
        raise ValueError(f"GW data has degree {gw.d_max} > d_max={d_max}")
    order = _lam_order(h_max)
    n: dict = {}
    for d in range(1, d_max + 1):
        for g in range(0, h_max + 1):
            r = gw[g, d]
            for k in range(2, d + 1):
                if d % k:
                    continue
                for h in range(0, g + 1):
                    v = n.get((h, d // k), 0)
                    if v:
                        r -= v * _cover_coefficient(k, h, g, order)
            for h in range(0, g):
                v = n.get((h, d), 0)
                if v:
                    r -= v * _cover_coefficient(1, h, g, order)
            if r.denominator != 1:
                raise InconsistentGW(g, d, r)
            if r:
                n[g, d] = int(r)
    return GVInput(n)
