"""Ideals of a polynomial ring and the calculus built on Groebner bases:
membership, sums, intersections, colon ideals, dimension, Hilbert series
and multiplicity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .groebner import GroebnerBasis, buchberger, groebner
from .ring import FIELD_MASK, WIDTH, Polynomial, Ring, RingError


class IdealError(ValueError):
    """Argument error for an ideal operation (unit ideal, zero divisor...)."""


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series of R/I written as numerator / (1-t)^dimension."""

    numerator: tuple[int, ...]
    dimension: int

    @property
    def multiplicity(self) -> int:
        return sum(self.numerator)

    def series(self, nterms: int) -> list[int]:
        """First ``nterms`` values of the Hilbert function."""
        coeffs = list(self.numerator) + [0] * nterms
        out = coeffs[:nterms]
        for _ in range(self.dimension):
            acc = 0
            for k in range(nterms):
                acc += out[k]
                out[k] = acc
        return out


class Ideal:
    """Ideal given by generators; the reduced basis is computed lazily."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial] = ()):
        gens = []
        for f in generators:
            if not isinstance(f, Polynomial):
                f = ring.parse(f) if isinstance(f, str) else ring.const(f)
            if f.ring != ring:
                raise RingError(f"generator {f} lives in {f.ring!r}, not {ring!r}")
            if f:
                gens.append(f)
        self.ring = ring
        self.generators = tuple(gens)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators) or '0'})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    @cached_property
    def gb(self) -> GroebnerBasis:
        return groebner(self.ring, self.generators)

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(f.is_homogeneous() for f in self.generators)

    def is_proper(self) -> bool:
        return not self.gb.is_unit()

    def contains(self, f: Polynomial) -> bool:
        if not f:
            return True
        if self.is_zero():
            return False
        return self.gb.reduces_to_zero(f)

    def __contains__(self, f):
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def __le__(self, other: "Ideal") -> bool:
        return other.contains_ideal(self)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.contains_ideal(other) and other.contains_ideal(self)

    __hash__ = None

    def normal_form(self, f: Polynomial) -> Polynomial:
        if self.is_zero():
            return f
        return self.gb.normal_form(f)

    # -- constructions ------------------------------------------------------
    def __add__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        self._same_ring(other)
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            other = Ideal(self.ring, [other])
        self._same_ring(other)
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators])

    def power(self, k: int) -> "Ideal":
        out = Ideal(self.ring, [self.ring.one()])
        for _ in range(k):
            out = out * self
        return out

    def _same_ring(self, other: "Ideal"):
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def minimal_generators(self) -> list[Polynomial]:
        """A minimal homogeneous generating set (input must be homogeneous)."""
        if not self.is_homogeneous():
            raise IdealError("minimal generators are only defined for homogeneous ideals")
        gens = sorted(self.generators, key=lambda f: f.degree())
        _, idx = buchberger(self.ring, [list(f.terms) for f in gens])
        return [gens[i] for i in sorted(idx)]

    def intersect(self, other: "Ideal") -> "Ideal":
        return ideal_intersect(self, other)

    def quotient(self, other) -> "Ideal":
        return ideal_quotient(self, other)

    def saturation(self, other) -> "Ideal":
        return saturation(self, other)

    # -- numerical invariants -----------------------------------------------
    def _require_proper(self):
        if not self.is_zero() and not self.is_proper():
            raise IdealError("the unit ideal has no dimension")

    def dimension(self) -> int:
        """Krull dimension of R/I from independent sets of the initial ideal."""
        self._require_proper()
        if self.is_zero():
            return self.ring.nvars
        return independent_set_dimension(self.ring, self.gb.leading_monomials)

    def height(self) -> int:
        return self.ring.nvars - self.dimension()

    def hilbert(self) -> HilbertData:
        if not self.is_homogeneous():
            raise IdealError("Hilbert series needs homogeneous generators")
        self._require_proper()
        ring = self.ring
        if ring.order == "lex":
            basis = groebner(ring.with_order("grevlex"),
                             [f.to_ring(ring.with_order("grevlex")) for f in self.generators])
            lms = basis.leading_monomials
            ring = basis.ring
        else:
            lms = [] if self.is_zero() else self.gb.leading_monomials
        exps = [ring.exponents(m) for m in lms]
        num = hilbert_numerator(exps, ring.nvars)
        return reduce_hilbert(num, ring.nvars)

    def multiplicity(self) -> int:
        return self.hilbert().multiplicity


# ---------------------------------------------------------------------------
# monomial-ideal combinatorics

def independent_set_dimension(ring: Ring, lms: Sequence[int]) -> int:
    """Max size of a variable set containing the support of no leading
    monomial, i.e. n minus a minimum hitting set of the supports."""
    n = ring.nvars
    supports = sorted({ring.support_mask(m) for m in lms}, key=lambda s: bin(s).count("1"))
    if 0 in supports:
        raise IdealError("the unit ideal has no dimension")
    minimal = []
    for s in supports:
        if not any(t & s == t for t in minimal):
            minimal.append(s)
    best = [n]

    def search(chosen: int, size: int):
        if size >= best[0]:
            return
        for s in minimal:
            if not s & chosen:
                break
        else:
            best[0] = size
            return
        bits = s
        while bits:
            low = bits & -bits
            search(chosen | low, size + 1)
            bits ^= low

    search(0, 0)
    return n - best[0]


def _minimalize(gens: list[tuple]) -> list[tuple]:
    gens = sorted(set(gens), key=sum)
    out: list[tuple] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def hilbert_numerator(gens: Sequence[tuple], nvars: int) -> list[int]:
    """Numerator K(t) with H(R/M, t) = K(t)/(1-t)^nvars for monomial ideal M,
    via pivot recursion H(M) = H(M + (p)) + t^deg(p) H(M : p)."""
    gens = _minimalize(list(gens))
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    supports = [[i for i, e in enumerate(g) if e] for g in gens]
    if all(len(s) == 1 for s in supports):
        num = [1]
        for g in gens:
            d = sum(g)
            factor = [1] + [0] * (d - 1) + [-1]
            num = _poly_mul(num, factor)
        return num
    counts = [0] * nvars
    for g, s in zip(gens, supports):
        if len(s) > 1:
            for i in s:
                counts[i] += 1
    v = max(range(nvars), key=lambda i: counts[i])
    exps = sorted(g[v] for g, s in zip(gens, supports) if g[v] and len(s) > 1)
    e = exps[len(exps) // 2]
    pivot = tuple(e if i == v else 0 for i in range(nvars))
    plus = [g for g in gens if g[v] < e] + [pivot]
    colon = [tuple(max(0, a - b) for a, b in zip(g, pivot)) for g in gens]
    left = hilbert_numerator(plus, nvars)
    right = hilbert_numerator(colon, nvars)
    shifted = [0] * e + right
    n = max(len(left), len(shifted))
    return [(left[i] if i < len(left) else 0) + (shifted[i] if i < len(shifted) else 0)
            for i in range(n)]


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def reduce_hilbert(num: list[int], nvars: int) -> HilbertData:
    """Cancel factors (1-t) until the numerator does not vanish at 1."""
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    if not num:
        raise IdealError("the unit ideal has no Hilbert series")
    d = nvars
    while d > 0 and sum(num) == 0:
        # divide by (1 - t): q_k = sum_{i<=k} num_i
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        while num and num[-1] == 0:
            num.pop()
        d -= 1
    return HilbertData(tuple(num), d)


# ---------------------------------------------------------------------------
# intersections and colon ideals

def _tag_ring(ring: Ring) -> Ring:
    name = "_t"
    while name in ring.index:
        name += "_"
    return Ring((name,) + ring.names, ring.field, "elim1")


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by eliminating a tag variable t from t*I + (1-t)*J."""
    I._same_ring(J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal(ring)
    T = _tag_ring(ring)
    t = T.var(0)
    gens = [t * f.to_ring(T) for f in I.generators]
    gens += [(T.one() - t) * g.to_ring(T) for g in J.generators]
    G = groebner(T, gens)
    out = []
    back = [ring.zero()] + ring.gens()
    for g in G.elements:
        if all(m & FIELD_MASK == 0 for m, _ in g.terms):
            out.append(g.substitute(back))
    return Ideal(ring, out)


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient f/g, which must be exact."""
    ring = f.ring
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    inv = ring.field.inv(g.lc)
    q: dict = {}
    r = f
    while r:
        m, c = r.terms[0]
        if not ring.divides(g.lm, m):
            raise IdealError(f"{g} does not divide {f}")
        qm = m - g.lm
        qc = ring.field(c * inv)
        q[qm] = qc
        r = r - g.mul_monomial(qm, qc)
    return ring.from_dict(q)


def element_quotient(I: Ideal, g: Polynomial) -> Ideal:
    """I : (g) = (I ∩ (g)) / g."""
    ring = I.ring
    if not g:
        raise IdealError("colon by the zero ideal")
    if I.contains(g):
        return Ideal(ring, [ring.one()])
    meet = ideal_intersect(I, Ideal(ring, [g]))
    return Ideal(ring, [exact_divide(h, g) for h in meet.generators])


def ideal_quotient(I: Ideal, J) -> Ideal:
    """Colon ideal I : J as the intersection of the element quotients."""
    ring = I.ring
    if isinstance(J, Polynomial):
        J = Ideal(ring, [J])
    I._same_ring(J)
    if J.is_zero():
        raise IdealError("colon by the zero ideal")
    result = None
    for g in J.generators:
        q = element_quotient(I, g)
        result = q if result is None else ideal_intersect(result, q)
    return result


def saturation(I: Ideal, J) -> Ideal:
    """I : J^infinity, by iterated quotients until the chain stabilizes."""
    cur = I
    while True:
        nxt = ideal_quotient(cur, J)
        if nxt == cur:
            return cur
        cur = nxt


def is_regular_sequence(fs: Sequence[Polynomial]) -> bool:
    """True iff each f_i is a nonzerodivisor modulo (f_1..f_{i-1})."""
    if not fs:
        return True
    ring = fs[0].ring
    prev = Ideal(ring)
    for f in fs:
        if not f:
            return False
        nxt = prev + f
        if not nxt.is_proper():
            return False
        if not prev.is_zero():
            q = element_quotient(prev, f)
            if not prev.contains_ideal(q):
                return False
        prev = nxt
    return True


def linear_change(ring: Ring, matrix: Sequence[Sequence]) -> list[Polynomial]:
    """Images of the variables under x_i -> sum_j matrix[i][j] x_j."""
    out = []
    for row in matrix:
        d = {ring.var_monos[j]: c for j, c in enumerate(row) if c}
        out.append(ring.from_dict(d))
    return out


def exponent_of(ring: Ring, m: int, i: int) -> int:
    return (m >> (WIDTH * i)) & FIELD_MASK
