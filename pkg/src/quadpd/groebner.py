"""Buchberger's algorithm with the Gebauer-Moeller criteria and sugar.

Polynomials inside the kernel are plain lists of ``(monomial, coeff)`` pairs
sorted descending; basis elements are kept monic so reduction never needs a
field inversion.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

from .ring import Polynomial, Ring, RingError


def reduce_terms(ring: Ring, terms: Iterable, basis: Sequence, full: bool = True) -> list:
    """Normal form of ``terms`` modulo monic ``basis`` entries ``(lm, tail)``.

    With ``full=False`` only the head is reduced; the unreduced remainder is
    appended untouched once a non-reducible leading term is found.
    """
    p = ring.field.p
    key, unkey, guard = ring.key, ring.unkey, ring.guard
    d = dict(terms)
    heap = [-key(m) for m in d]
    heapify(heap)
    out = []
    while heap:
        m = unkey(-heappop(heap))
        c = d.pop(m, None)
        if c is None:
            continue
        for lm, tail in basis:
            if ((m | guard) - lm) & guard == guard:
                q = m - lm
                for tm, tc in tail:
                    nm = tm + q
                    old = d.get(nm)
                    if old is None:
                        v = -c * tc
                        if p:
                            v %= p
                        d[nm] = v
                        heappush(heap, -key(nm))
                    else:
                        v = old - c * tc
                        if p:
                            v %= p
                        if v:
                            d[nm] = v
                        else:
                            del d[nm]
                break
        else:
            out.append((m, c))
            if not full:
                rest = []
                while heap:
                    m2 = unkey(-heappop(heap))
                    c2 = d.pop(m2, None)
                    if c2 is not None:
                        rest.append((m2, c2))
                return out + rest
    return out


def _monic(ring: Ring, terms: list) -> list:
    lc = terms[0][1]
    if lc == 1:
        return terms
    inv = ring.field.inv(lc)
    p = ring.field.p
    if p:
        return [(m, c * inv % p) for m, c in terms]
    return [(m, c * inv) for m, c in terms]


def _spoly(ring: Ring, f: list, g: list, lcm: int) -> list:
    """S-polynomial of two monic term lists."""
    p = ring.field.p
    qf = lcm - f[0][0]
    qg = lcm - g[0][0]
    d = {}
    for m, c in f[1:]:
        d[m + qf] = c
    for m, c in g[1:]:
        nm = m + qg
        v = d.get(nm, 0) - c
        if p:
            v %= p
        if v:
            d[nm] = v
        else:
            d.pop(nm, None)
    key = ring.key
    return sorted(d.items(), key=lambda t: key(t[0]), reverse=True)


class _Basis:
    """Mutable working state of one Buchberger run."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.polys: list[list] = []
        self.sugar: list[int] = []
        self.active: list[bool] = []
        self.reducers: list[tuple] = []

    def rebuild(self):
        self.reducers = [(f[0][0], f[1:]) for f, a in zip(self.polys, self.active) if a]


def buchberger(ring: Ring, polys: Sequence[list], max_degree: int | None = None,
               track_minimal: bool = False):
    """Run Buchberger on monic-normalisable term lists.

    Returns ``(basis_terms, minimal_input_indices)``; the second entry lists
    the inputs that were not in the ideal of the previously accepted inputs
    when processed (a minimal generating set for homogeneous input).
    """
    B = _Basis(ring)
    sug = ring.sugar
    lcm_of = ring.lcm
    key = ring.key
    divides = ring.divides
    coprime = ring.coprime

    # queue entries: (sugar, kind, lcm_key, i, j); kind 0 = pair, 1 = input
    queue: list = []
    for idx, f in enumerate(polys):
        if f:
            s = max(sug(m) for m, _ in f)
            queue.append((s, 1, key(f[0][0]), idx, -1))
    heapify(queue)
    pairs: dict = {}
    minimal: list[int] = []
    counter = 0

    def update(h_idx: int):
        nonlocal counter
        h = B.polys[h_idx][0][0]
        C = []
        for i, f in enumerate(B.polys):
            if i != h_idx and B.active[i]:
                C.append((lcm_of(h, f[0][0]), i, coprime(h, f[0][0])))
        D = []
        while C:
            L, i, cop = C.pop()
            if cop or not any(divides(L2, L) for L2, _, _ in C) and not any(divides(L2, L) for L2, _, _ in D):
                D.append((L, i, cop))
        # B criterion on existing pairs
        for pk in list(pairs):
            i, j = pk
            L = pairs[pk][0]
            if divides(h, L):
                fi = B.polys[i][0][0]
                fj = B.polys[j][0][0]
                if lcm_of(fi, h) != L and lcm_of(fj, h) != L:
                    del pairs[pk]
        for L, i, cop in D:
            if cop:
                continue
            fi = B.polys[i]
            s = max(B.sugar[i] + sug(L) - sug(fi[0][0]), B.sugar[h_idx] + sug(L) - sug(h))
            pk = (i, h_idx)
            pairs[pk] = (L, s)
            heappush(queue, (s, 0, key(L), i, h_idx))
            counter += 1
        for i, f in enumerate(B.polys):
            if i != h_idx and B.active[i] and divides(h, f[0][0]):
                B.active[i] = False

    while queue:
        s, kind, _, i, j = heappop(queue)
        if max_degree is not None and s > max_degree:
            break
        if kind == 0:
            if (i, j) not in pairs:
                continue
            L, _ = pairs.pop((i, j))
            f = _spoly(ring, B.polys[i], B.polys[j], L)
            origin = None
        else:
            f = list(polys[i])
            origin = i
        if not f:
            continue
        h = reduce_terms(ring, f, B.reducers)
        if not h:
            continue
        if origin is not None:
            minimal.append(origin)
        h = _monic(ring, h)
        B.polys.append(h)
        B.sugar.append(s)
        B.active.append(True)
        if h[0][0] == 0:
            return [[(0, ring.field(1))]], minimal
        update(len(B.polys) - 1)
        B.rebuild()

    G = [f for f, a in zip(B.polys, B.active) if a]
    return _interreduce(ring, G), minimal


def _interreduce(ring: Ring, G: list) -> list:
    """Reduced basis: minimal leading monomials, fully reduced tails."""
    key = ring.key
    G = sorted(G, key=lambda f: key(f[0][0]))
    lms = [f[0][0] for f in G]
    keep = []
    for i, f in enumerate(G):
        if not any(ring.divides(lms[j], lms[i]) for j in range(len(G)) if j != i and
                   (lms[j] != lms[i] or j < i)):
            keep.append(f)
    out = []
    for i, f in enumerate(keep):
        others = [(g[0][0], g[1:]) for j, g in enumerate(keep) if j != i]
        tail = reduce_terms(ring, f[1:], others)
        out.append([f[0]] + sorted(tail, key=lambda t: key(t[0]), reverse=True))
    return out


class GroebnerBasis:
    """Reduced Groebner basis of an ideal (monic elements, ascending LMs)."""

    def __init__(self, ring: Ring, elements: Sequence[Polynomial]):
        self.ring = ring
        self.order = ring.order
        self.elements = tuple(elements)
        self._reducers = [(f.lm, list(f.terms[1:])) for f in self.elements]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and other.ring == self.ring and \
            set(other.elements) == set(self.elements)

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __repr__(self):
        return "GroebnerBasis([" + ", ".join(str(g) for g in self.elements) + "])"

    @property
    def leading_monomials(self) -> list[int]:
        return [g.lm for g in self.elements]

    def is_unit(self) -> bool:
        return any(g.lm == 0 for g in self.elements)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingError(f"ring mismatch: {f.ring!r} vs {self.ring!r}")
        if not f:
            return f
        terms = reduce_terms(self.ring, f.terms, self._reducers)
        key = self.ring.key
        terms.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self.ring, tuple(terms))

    def reduces_to_zero(self, f: Polynomial) -> bool:
        return not self.normal_form(f)


def groebner(ring: Ring, polys: Sequence[Polynomial], max_degree: int | None = None) -> GroebnerBasis:
    for f in polys:
        if f.ring != ring:
            raise RingError(f"ring mismatch: {f.ring!r} vs {ring!r}")
    G, _ = buchberger(ring, [list(f.terms) for f in polys if f], max_degree)
    return GroebnerBasis(ring, [Polynomial(ring, tuple(g)) for g in G])


def s_pairs_reduce_to_zero(G: GroebnerBasis) -> bool:
    """Buchberger's criterion, checked on every pair (test helper)."""
    ring = G.ring
    els = [list(g.terms) for g in G.elements]
    red = G._reducers
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            L = ring.lcm(els[i][0][0], els[j][0][0])
            s = _spoly(ring, els[i], els[j], L)
            if s and reduce_terms(ring, s, red):
                return False
    return True
