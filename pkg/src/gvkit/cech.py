"""Z/2 Cech cochains on the nerve of a finite cover.

This is a combinatorial stand-in for the gluing problem: the local data
(charts, determinant lines of their tangent spaces) are forgotten and only
the +-1 transition signs on overlaps are kept.  A cocycle sigma on triple
overlaps is trivial exactly when some tau on pairs has delta(tau) = sigma;
tau is then the gluing datum, and any two choices differ by a 1-cocycle,
so the square roots form a torsor under H^1(N; Z/2).

Cochains are stored additively over F2 (a sign -1 is the bit 1).  Rows of
coboundary matrices are Python ints used as bitsets.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

__all__ = [
    "Nerve",
    "Cochain",
    "NerveError",
    "NotACocycle",
    "ObstructionResult",
    "coboundary",
    "is_cocycle",
    "obstruction_class",
    "torsor_count",
    "cohomology_dim",
    "transition_sign_cocycle",
    "sign_to_bit",
]


class NerveError(ValueError):
    """The face sets are not downward closed."""

    def __init__(self, face: tuple, missing: tuple):
        super().__init__(f"face {list(face)} has missing subface {list(missing)}")
        self.face, self.missing = face, missing


class NotACocycle(ValueError):
    pass


class Nerve:
    """Vertices plus their 2-, 3- and 4-element faces, sorted lexicographically."""

    def __init__(self, vertices, faces: dict | None = None):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        pos = {v: i for i, v in enumerate(self.vertices)}
        self._pos = pos
        self._faces = {1: [(v,) for v in self.vertices]}
        for size, flist in (faces or {}).items():
            size = int(size)
            if size < 2:
                raise ValueError(f"face size {size} must be at least 2")
            seen = set()
            for f in flist:
                if len(f) != size or len(set(f)) != size:
                    raise ValueError(f"face {list(f)} does not have {size} distinct vertices")
                for v in f:
                    if v not in pos:
                        raise ValueError(f"face {list(f)} uses unknown vertex {v!r}")
                seen.add(self._sorted(f))
            self._faces[size] = sorted(seen, key=lambda f: [pos[v] for v in f])
        self._index = {size: {f: i for i, f in enumerate(fs)} for size, fs in self._faces.items()}
        for size, fs in self._faces.items():
            if size < 2:
                continue
            for f in fs:
                for sub in combinations(f, size - 1):
                    if sub not in self._index.get(size - 1, {}):
                        raise NerveError(f, sub)

    def _sorted(self, f) -> tuple:
        return tuple(sorted(f, key=self._pos.__getitem__))

    @classmethod
    def full_simplex(cls, n: int) -> "Nerve":
        vs = list(range(n))
        return cls(vs, {k: list(combinations(vs, k)) for k in range(2, min(n, 4) + 1)})

    def faces(self, size: int) -> list:
        return list(self._faces.get(size, []))

    def index(self, face) -> int:
        f = self._sorted(face)
        return self._index[len(f)][f]

    def canonical(self, face) -> tuple:
        return self._sorted(face)

    def count(self, size: int) -> int:
        return len(self._faces.get(size, []))

    def coboundary_rows(self, k: int) -> list:
        """Rows (bitsets over k-cochains) of delta: C^k -> C^(k+1)."""
        size = k + 1
        idx = self._index.get(size, {})
        rows = []
        for f in self._faces.get(size + 1, []):
            bits = 0
            for sub in combinations(f, size):
                bits |= 1 << idx[sub]
            rows.append(bits)
        return rows


@dataclass(frozen=True)
class Cochain:
    """F2-valued k-cochain: bit i is the value on the i-th k-face."""

    nerve: Nerve
    k: int
    bits: int = 0

    def __post_init__(self):
        if self.bits >> self.nerve.count(self.k + 1):
            raise ValueError("cochain has values outside its faces")

    @classmethod
    def from_values(cls, nerve: Nerve, k: int, values: dict) -> "Cochain":
        bits = 0
        for face, v in values.items():
            if v % 2:
                bits |= 1 << nerve.index(face)
        return cls(nerve, k, bits)

    def value(self, face) -> int:
        return (self.bits >> self.nerve.index(face)) & 1

    def values(self) -> dict:
        return {f: (self.bits >> i) & 1 for i, f in enumerate(self.nerve.faces(self.k + 1))}

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.nerve is not self.nerve or other.k != self.k:
            raise ValueError("cochains live on different nerves or degrees")
        return Cochain(self.nerve, self.k, self.bits ^ other.bits)


def _apply(rows: list, bits: int) -> int:
    out = 0
    for i, r in enumerate(rows):
        if bin(r & bits).count("1") & 1:
            out |= 1 << i
    return out


def coboundary(c: Cochain) -> Cochain:
    """(delta c)(f) = sum of c over the codimension-one faces of f."""
    rows = c.nerve.coboundary_rows(c.k)
    return Cochain(c.nerve, c.k + 1, _apply(rows, c.bits))


def is_cocycle(sigma: Cochain) -> bool:
    return coboundary(sigma).bits == 0


def _rank(rows: list) -> int:
    basis: dict = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = r
                break
            r ^= basis[top]
    return len(basis)


def _solve(rows: list, rhs: int, ncols: int) -> int | None:
    """One solution x of rows . x = rhs over F2, or None."""
    # eliminate on the augmented system; bit ncols carries the right-hand side
    pivots: dict = {}
    for i, r in enumerate(rows):
        r |= ((rhs >> i) & 1) << ncols
        for col, p in pivots.items():
            if (r >> col) & 1:
                r ^= p
        low = r & ((1 << ncols) - 1)
        if not low:
            if r:
                return None
            continue
        col = low.bit_length() - 1
        for c2, p in list(pivots.items()):
            if (p >> col) & 1:
                pivots[c2] = p ^ r
        pivots[col] = r
    x = 0
    for col, p in pivots.items():
        if (p >> ncols) & 1:
            x |= 1 << col
    return x


def cohomology_dim(nerve: Nerve, k: int) -> int:
    """dim H^k(N; F2) = dim C^k - rank delta_k - rank delta_(k-1)."""
    n = nerve.count(k + 1)
    rank_out = _rank(nerve.coboundary_rows(k))
    rank_in = _rank(nerve.coboundary_rows(k - 1)) if k > 0 else 0
    return n - rank_out - rank_in


def torsor_count(nerve: Nerve) -> int:
    """Number of inequivalent square roots: |H^1(N; F2)|."""
    return 2 ** cohomology_dim(nerve, 1)


@dataclass(frozen=True)
class ObstructionResult:
    trivial: bool
    witness: Cochain | None


def obstruction_class(sigma: Cochain) -> ObstructionResult:
    """Decide whether the 2-cocycle sigma is a coboundary, with a witness."""
    if sigma.k != 2:
        raise ValueError("the obstruction is a 2-cochain")
    if not is_cocycle(sigma):
        raise NotACocycle("sigma is not closed")
    nerve = sigma.nerve
    x = _solve(nerve.coboundary_rows(1), sigma.bits, nerve.count(2))
    if x is None:
        return ObstructionResult(False, None)
    return ObstructionResult(True, Cochain(nerve, 1, x))


def sign_to_bit(s: int) -> int:
    if s not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {s}")
    return 0 if s == 1 else 1


def transition_sign_cocycle(nerve: Nerve, dets: dict, composition_signs: dict | None = None) -> Cochain:
    """sigma(abc) = d(ab) d(bc) d(ca) * correction(abc), written additively.

    ``dets`` are the determinants (+-1) of the transition maps on pairs,
    keyed by ordered or unordered pairs; a sign is its own inverse, so
    d(ba) = d(ab).  Missing entries are +1.  The result need not be a
    cocycle if the corrections are inconsistent; check with :func:`is_cocycle`.
    """
    d = {}
    for pair, s in dets.items():
        key = nerve.canonical(pair)
        b = sign_to_bit(s)
        if key in d and d[key] != b:
            raise ValueError(f"conflicting signs for pair {list(pair)}")
        d[key] = b
    corr = {}
    for triple, s in (composition_signs or {}).items():
        key = nerve.canonical(triple)
        nerve.index(key)
        corr[key] = corr.get(key, 0) ^ sign_to_bit(s)
    for key in d:
        nerve.index(key)
    values = {}
    for f in nerve.faces(3):
        a, b, c = f
        v = d.get((a, b), 0) ^ d.get((b, c), 0) ^ d.get((a, c), 0) ^ corr.get(f, 0)
        values[f] = v
    return Cochain.from_values(nerve, 2, values)
