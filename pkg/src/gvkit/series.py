"""Exact truncated multivariate Laurent series.

Every generating function in the package lives here: the degree variable
``q``, the genus variable ``lam``, the torus weights ``t_L``/``t_R`` and the
KKV variable ``y``.  Coefficients are :class:`fractions.Fraction`; nothing is
ever evaluated in floating point.

Two kinds of variables exist:

* ``truncated`` variables carry a truncation order ``N``: only exponents in
  ``[floor, N]`` are stored and the series is exact through ``x**N``.
  ``floor`` is 0 except for ``lam``, where the h = 0 multiple-cover factor
  forces a floor of -2.
* ``laurent`` variables admit any integer exponent; a series is a finite
  Laurent polynomial in them.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Union

__all__ = [
    "VariableSpec",
    "TruncatedSeries",
    "IncompatibleVariables",
    "NotAUnit",
    "truncated",
    "laurent",
    "constant",
    "add",
    "mul",
    "invert_unit",
    "power_factor",
    "product_factor",
    "substitute",
    "coefficient_of",
]

TRUNCATED = "truncated"
LAURENT = "laurent"

Scalar = Union[int, Fraction]
Exponents = tuple


class IncompatibleVariables(ValueError):
    """Two operands declare the same variable name with different kinds."""


class NotAUnit(ValueError):
    """The series has no inverse in the ring it lives in."""


@dataclass(frozen=True)
class VariableSpec:
    name: str
    kind: str = LAURENT
    order: int | None = None
    floor: int = 0

    def __post_init__(self):
        if self.kind not in (TRUNCATED, LAURENT):
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.kind == TRUNCATED:
            if self.order is None:
                raise ValueError(f"truncated variable {self.name!r} needs an order")
            if self.order < self.floor - 1:
                raise ValueError(f"order of {self.name!r} below its floor")
        elif self.order is not None:
            raise ValueError(f"laurent variable {self.name!r} takes no order")

    @property
    def truncated(self) -> bool:
        return self.kind == TRUNCATED

    def admits(self, e: int) -> bool:
        if self.kind == LAURENT:
            return True
        return self.floor <= e <= self.order


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class TruncatedSeries:
    """Immutable sparse series: a map from exponent vectors to rationals.

    Exponent vectors are aligned with :attr:`variables`.  Zero coefficients
    are never stored.  ``==`` compares coefficientwise at the shared
    truncation order, which is what identities between truncated generating
    functions mean.
    """

    __slots__ = ("_vars", "_terms", "_index")

    def __init__(self, variables: Iterable[VariableSpec] = (), terms: Mapping | None = None):
        vs = tuple(variables)
        names = [v.name for v in vs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        n = len(vs)
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {names}")
            c = _frac(c)
            if c == 0:
                continue
            for v, k in zip(vs, e):
                if not v.admits(k):
                    if v.truncated and k > v.order:
                        break  # beyond the truncation: silently dropped
                    raise ValueError(f"exponent {k} of {v.name!r} below floor {v.floor}")
            else:
                clean[e] = clean.get(e, 0) + c
        self._vars = vs
        self._terms = {e: c for e, c in clean.items() if c != 0}
        self._index = {v.name: i for i, v in enumerate(vs)}

    @classmethod
    def _raw(cls, vs: tuple, terms: dict) -> "TruncatedSeries":
        # trusted constructor: terms already valid and nonzero
        s = cls.__new__(cls)
        s._vars = vs
        s._terms = terms
        s._index = {v.name: i for i, v in enumerate(vs)}
        return s

    # -- accessors ---------------------------------------------------------
    @property
    def variables(self) -> tuple:
        return self._vars

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def order(self) -> dict:
        """Effective truncation order of each truncated variable."""
        return {v.name: v.order for v in self._vars if v.truncated}

    def spec(self, name: str) -> VariableSpec:
        return self._vars[self._index[name]]

    def has_variable(self, name: str) -> bool:
        return name in self._index

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self!r} is not a constant")
        return next(iter(self._terms.values()), Fraction(0))

    def items(self):
        return self._terms.items()

    def valuation(self, name: str) -> int | None:
        """Smallest exponent of ``name`` among stored terms, None if zero."""
        i = self._index.get(name)
        if not self._terms:
            return None
        if i is None:
            return 0
        return min(e[i] for e in self._terms)

    def degree(self, name: str) -> int | None:
        i = self._index.get(name)
        if not self._terms:
            return None
        if i is None:
            return 0
        return max(e[i] for e in self._terms)

    def exponents(self, name: str) -> dict:
        """One-variable view {exponent: coefficient}; the series must only involve ``name``."""
        i = self._index.get(name)
        out = {}
        for e, c in self._terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError(f"series involves variables other than {name!r}")
            out[e[i] if i is not None else 0] = c
        return out

    # -- context handling --------------------------------------------------
    def _embed(self, vs: tuple) -> dict:
        """Terms re-indexed into the context ``vs`` and truncated to its orders."""
        if vs == self._vars:
            return self._terms
        pos = [self._index.get(v.name) for v in vs]
        out = {}
        for e, c in self._terms.items():
            ne = tuple(e[p] if p is not None else 0 for p in pos)
            if all(v.admits(k) for v, k in zip(vs, ne)):
                out[ne] = c
        return out

    def truncate(self, **orders: int) -> "TruncatedSeries":
        """Narrow truncation orders (never widens)."""
        vs = tuple(
            replace(v, order=min(v.order, orders[v.name])) if v.truncated and v.name in orders else v
            for v in self._vars
        )
        return TruncatedSeries._raw(vs, self._embed(vs))

    def with_variables(self, *specs: VariableSpec) -> "TruncatedSeries":
        """Adjoin variables to the context (terms unchanged)."""
        vs = _merge(self._vars, tuple(specs))
        return TruncatedSeries._raw(vs, self._embed(vs))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _frac(other))
        return mul(self, invert_unit(_coerce(other)))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return invert_unit(self) ** (-n)
        result = constant(1).with_variables(*self._vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "TruncatedSeries":
        c = _frac(c)
        if c == 0:
            return TruncatedSeries._raw(self._vars, {})
        return TruncatedSeries._raw(self._vars, {e: c * v for e, v in self._terms.items()})

    def shift(self, **powers: int) -> "TruncatedSeries":
        """Multiply by a monomial, keeping orders (exponents beyond order are dropped)."""
        d = tuple(powers.get(v.name, 0) for v in self._vars)
        unknown = set(powers) - set(self._index)
        if unknown:
            raise KeyError(f"unknown variables {sorted(unknown)}")
        return TruncatedSeries(
            self._vars, {tuple(a + b for a, b in zip(e, d)): c for e, c in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = constant(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        vs = _merge(self._vars, other._vars)
        return self._embed(vs) == other._embed(vs)

    __hash__ = None

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "*".join(
                v.name if k == 1 else f"{v.name}^{k}" for v, k in zip(self._vars, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts).replace("+ -", "- ")
        tails = [f"O({v.name}^{v.order + 1})" for v in self._vars if v.truncated]
        return out + ("" if not tails else " + " + " + ".join(tails))


# -- constructors -------------------------------------------------------------
def constant(c: Scalar) -> TruncatedSeries:
    return TruncatedSeries((), {(): c})


def truncated(name: str, order: int, floor: int = 0) -> TruncatedSeries:
    """The variable ``name`` itself, as a truncated series through ``name**order``."""
    v = VariableSpec(name, TRUNCATED, order, floor)
    return TruncatedSeries((v,), {(1,): 1})


def laurent(name: str) -> TruncatedSeries:
    v = VariableSpec(name, LAURENT)
    return TruncatedSeries((v,), {(1,): 1})


def _coerce(x) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x
    return constant(_frac(x))


def _merge(a: tuple, b: tuple, widest: bool = False) -> tuple:
    if a == b:
        return a
    out = list(a)
    pos = {v.name: i for i, v in enumerate(a)}
    for v in b:
        i = pos.get(v.name)
        if i is None:
            out.append(v)
            continue
        u = out[i]
        if u.kind != v.kind:
            raise IncompatibleVariables(
                f"variable {v.name!r} is {u.kind} in one operand and {v.kind} in the other"
            )
        if u.truncated:
            order = (max if widest else min)(u.order, v.order)
            out[i] = VariableSpec(u.name, TRUNCATED, order, min(u.floor, v.floor))
    return tuple(out)


# -- operations -----------------------------------------------------------------
def add(a, b) -> TruncatedSeries:
    """Coefficientwise sum, truncated to the smaller order of each variable."""
    a, b = _coerce(a), _coerce(b)
    vs = _merge(a._vars, b._vars)
    out = dict(a._embed(vs))
    for e, c in b._embed(vs).items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return TruncatedSeries._raw(vs, out)


def mul(a, b) -> TruncatedSeries:
    """Cauchy product.

    The result order per truncated variable is the minimum of the operand
    orders, lowered only when an operand has negative valuation in that
    variable (a ``lam**-2`` factor costs two orders of precision).
    """
    a, b = _coerce(a), _coerce(b)
    vs = _merge(a._vars, b._vars)
    wide = _merge(a._vars, b._vars, widest=True)
    # embed without narrowing: a high term of one operand can meet a
    # negative power of the other
    ta, tb = a._embed(wide), b._embed(wide)
    narrowed = []
    for i, v in enumerate(vs):
        if v.truncated:
            va = min((e[i] for e in ta), default=0)
            vb = min((e[i] for e in tb), default=0)
            oa = a.spec(v.name).order if a.has_variable(v.name) else v.order
            ob = b.spec(v.name).order if b.has_variable(v.name) else v.order
            order = min(oa + min(0, vb), ob + min(0, va))
            v = VariableSpec(v.name, TRUNCATED, order, v.floor)
        narrowed.append(v)
    vs = tuple(narrowed)
    bounds = [(i, v.order) for i, v in enumerate(vs) if v.truncated]
    out: dict = {}
    for ea, ca in ta.items():
        for eb, cb in tb.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if any(e[i] > o for i, o in bounds):
                continue
            out[e] = out.get(e, 0) + ca * cb
    for e, v in list(out.items()):
        if v == 0:
            del out[e]
        elif any(e[i] < vs[i].floor for i, _ in bounds):
            raise ValueError(f"product exponent {e} falls below a variable floor")
    return TruncatedSeries._raw(vs, out)


def invert_unit(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse up to the truncation order.

    The lowest monomial in the truncated variables is factored out first, so
    ``lam**2 - lam**4/12`` inverts to ``lam**-2 + 1/12 + ...``; what remains
    must have an invertible Laurent monomial as constant term.
    """
    s = _coerce(s)
    if s.is_zero():
        raise NotAUnit("zero is not invertible")
    vs = s._vars
    tidx = [i for i, v in enumerate(vs) if v.truncated]
    low = {i: min(e[i] for e in s._terms) for i in tidx}
    # u = s / monomial, exact through order - low
    uvars = tuple(
        VariableSpec(v.name, TRUNCATED, v.order - low[i], 0) if v.truncated else v
        for i, v in enumerate(vs)
    )
    if any(v.order < 0 for v in uvars if v.truncated):
        raise NotAUnit("not enough precision to invert")
    uterms = {
        tuple(k - low.get(i, 0) for i, k in enumerate(e)): c for e, c in s._terms.items()
    }
    const = [(e, c) for e, c in uterms.items() if all(e[i] == 0 for i in tidx)]
    if len(const) != 1:
        raise NotAUnit(f"constant term of {s!r} is not a Laurent monomial")
    e0, c0 = const[0]
    lead_inv = TruncatedSeries._raw(uvars, {tuple(-k for k in e0): 1 / c0})
    u = TruncatedSeries._raw(uvars, uterms)
    w = 1 - lead_inv * u  # every term has positive total truncated degree
    depth = sum(v.order for v in uvars if v.truncated)
    inv = constant(1).with_variables(*uvars)
    power = inv
    for _ in range(depth):
        power = power * w
        if power.is_zero():
            break
        inv = inv + power
    inv = inv * lead_inv
    # shift back by the inverse monomial; exact through order - 2*low
    rvars = tuple(
        VariableSpec(v.name, TRUNCATED, v.order - 2 * low[i], v.floor) if v.truncated else v
        for i, v in enumerate(vs)
    )
    return TruncatedSeries(
        rvars,
        {tuple(k - low.get(i, 0) for i, k in enumerate(e)): c for e, c in inv._terms.items()},
    )


def _monomial(base) -> TruncatedSeries:
    base = _coerce(base)
    if len(base._terms) != 1:
        raise ValueError(f"expected a monomial, got {base!r}")
    if any(v.truncated for v in base._vars):
        raise ValueError("monomial base must only involve laurent variables")
    return base


def power_factor(base, m: int, exponent: int, order: int, var: str = "q") -> TruncatedSeries:
    """``(1 - base*var**m)**exponent`` through ``var**order``.

    Expanded by the generalized binomial theorem, so negative exponents
    cost no inversion.
    """
    if m < 1:
        raise ValueError("m must be positive")
    base = _monomial(base)
    qv = VariableSpec(var, TRUNCATED, order)
    out = constant(1).with_variables(qv, *base._vars)
    if exponent == 0:
        return out
    (be, bc), = base._terms.items()
    terms = {}
    bpos = [out._index[v.name] for v in base._vars]
    for n in range(0, order // m + 1):
        if exponent >= 0 and n > exponent:
            break
        # binomial(exponent, n) for any integer exponent
        if exponent >= 0:
            binom = comb(exponent, n)
        else:
            binom = (-1) ** n * comb(-exponent + n - 1, n)
        c = binom * (-bc) ** n
        if c == 0:
            continue
        e = [0] * len(out._vars)
        e[0] = m * n
        for p, k in zip(bpos, be):
            e[p] = k * n
        terms[tuple(e)] = c
    return TruncatedSeries(out._vars, terms)


def product_factor(base, exponent: int, count: int, order: int, var: str = "q") -> TruncatedSeries:
    """``prod_{m=1..count} (1 - base*var**m)**exponent`` through ``var**order``.

    Factors with ``m > order`` are 1 at this precision, so any
    ``count >= order`` gives the same result.
    """
    if count < order:
        raise ValueError(f"count={count} must be at least order={order}")
    result = constant(1).with_variables(VariableSpec(var, TRUNCATED, order))
    if exponent == 0:
        return result
    for m in range(1, min(count, order) + 1):
        result = result * power_factor(base, m, exponent, order, var)
    return result


def substitute(s: TruncatedSeries, var: str, value) -> TruncatedSeries:
    """Replace a laurent variable by a nonzero rational or a laurent monomial.

    ``var`` disappears from the context; variables of ``value`` are adjoined.
    """
    if not s.has_variable(var):
        return s
    spec = s.spec(var)
    if spec.truncated:
        raise ValueError(f"can only substitute laurent variables, {var!r} is truncated")
    if _coerce(value).is_zero():
        raise ZeroDivisionError(f"cannot substitute 0 for laurent variable {var!r}")
    value = _monomial(value)
    i = s._index[var]
    rest = tuple(v for v in s._vars if v.name != var)
    vs = _merge(rest, value._vars)
    (ve, vc), = value._terms.items()
    names = [u.name for u in vs]
    vpos = [names.index(v.name) for v in value._vars]
    out: dict = {}
    for e, c in s._terms.items():
        k = e[i]
        # rest is a prefix of the merged context
        ne = list(e[:i] + e[i + 1:]) + [0] * (len(vs) - len(rest))
        for p, x in zip(vpos, ve):
            ne[p] += x * k
        ne = tuple(ne)
        out[ne] = out.get(ne, 0) + c * vc ** k
    return TruncatedSeries(vs, out)


def coefficient_of(s: TruncatedSeries, var: str, k: int) -> TruncatedSeries:
    """Coefficient of ``var**k`` as a series in the remaining variables."""
    if not s.has_variable(var):
        return s if k == 0 else TruncatedSeries((), {})
    spec = s.spec(var)
    if spec.truncated and k > spec.order:
        raise ValueError(f"{var}^{k} is beyond the truncation order {spec.order}")
    i = s._index[var]
    rest = tuple(v for v in s._vars if v.name != var)
    out = {e[:i] + e[i + 1:]: c for e, c in s._terms.items() if e[i] == k}
    return TruncatedSeries._raw(rest, out)
