"""Syzygies, minimal graded free resolutions and Betti tables.

Module terms ``mu * e_j`` are encoded as integers ("keys") whose integer
order is a Schreyer order: ``key(mu e_j) = base_j + (E(mu) << shift)`` where
``E`` is an additive encoding of grevlex (``E(m) = deg(m) * 2^S - L(m)``)
and ``base_j`` is built from the key of the leading term of the image of
``e_j``.  Multiplying a vector by a monomial is therefore a constant shift of
all its keys.

Each step computes a degree-by-degree module Groebner basis of the current
columns, tracking for every basis element its expression in the columns.
Columns that reduce to zero when their degree is reached are redundant and
dropped; S-pairs that reduce to zero yield syzygies.  Feeding the syzygies
back in gives the next differential, so every module produced is minimally
generated and the resulting resolution is minimal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush
from typing import Sequence

from .ideal import Ideal, IdealError
from .ring import Polynomial, Ring, RingError

TIE_BITS = 24
TIE_MASK = (1 << TIE_BITS) - 1


class ResolutionError(ValueError):
    pass


class KeySpace:
    """Key encoding for the terms of one free module."""

    def __init__(self, ring: Ring, bases: list[int], shift: int, tie: bool):
        self.ring = ring
        self.bases = bases
        self.shift = shift
        self.tie = tie
        self.S = ring.shift
        self.mask = ring.mask

    def E(self, m: int) -> int:
        return ((m >> self.S) << self.S) - (m & self.mask)

    def key(self, j: int, m: int) -> int:
        return self.bases[j] + (self.E(m) << self.shift)

    def decode(self, k: int) -> tuple[int, int]:
        j = TIE_MASK - (k & TIE_MASK) if self.tie else 0
        e = (k - self.bases[j]) >> self.shift
        S = self.S
        d = -((-e) >> S)
        return j, (d << S) | ((d << S) - e)

    def child(self, lead_keys: list[int]) -> "KeySpace":
        """Schreyer key space induced by columns with the given lead keys."""
        if len(lead_keys) > TIE_MASK:
            raise ResolutionError("too many generators for the key encoding")
        bases = [(k << TIE_BITS) | (TIE_MASK - j) for j, k in enumerate(lead_keys)]
        return KeySpace(self.ring, bases, self.shift + TIE_BITS, True)


def _scaled_shift(terms, shift, c, p):
    """Yield (key + shift, c * coeff)."""
    if p:
        return [(k + shift, v * c % p) for k, v in terms]
    return [(k + shift, v * c) for k, v in terms]


@dataclass
class _Elem:
    comp: int
    mono: int
    degree: int
    vec: list          # [(key, coeff)] descending, monic, lead first
    rep: list          # [(key, coeff)] in the column key space


def _syzygy_step(ring: Ring, space: KeySpace, twists: Sequence[int], columns: Sequence[dict],
                 col_degrees: Sequence[int], keep_all: bool = False):
    """One resolution step.

    ``columns`` are homogeneous vectors (``{key: coeff}`` in ``space``).
    Returns ``(kept, child_space, syzygies)`` where ``kept`` lists the indices
    of the columns retained as minimal generators (all of them when
    ``keep_all``), ``child_space`` encodes the free module on the kept
    columns and ``syzygies`` is a list of ``(degree, {key: coeff})``.
    """
    p = ring.field.p
    inv = ring.field.inv
    guard = ring.guard
    decode = space.decode
    E = space.E
    vshift = space.shift

    order = sorted(range(len(columns)), key=lambda i: col_degrees[i])
    kept: list[int] = []
    lead_keys: list[int] = []
    child_bases: list[int] = []
    rshift = space.shift + TIE_BITS

    G: list[_Elem] = []
    by_comp: dict[int, list[int]] = {}
    pairs: dict = {}
    queue: list = []
    for i in order:
        queue.append((col_degrees[i], 1, i, -1))
    heapify(queue)
    syz: list = []

    def reduce(vec: dict, rep: dict):
        heap = [-k for k in vec]
        heapify(heap)
        while heap:
            k = -heappop(heap)
            c = vec.get(k)
            if c is None:
                continue
            j, m = decode(k)
            for gi in by_comp.get(j, ()):
                g = G[gi]
                if ((m | guard) - g.mono) & guard == guard:
                    q = m - g.mono
                    eq = E(q)
                    dv = eq << vshift
                    del vec[k]
                    for tk, tc in g.vec[1:]:
                        nk = tk + dv
                        old = vec.get(nk)
                        if old is None:
                            v = -c * tc
                            if p:
                                v %= p
                            vec[nk] = v
                            heappush(heap, -nk)
                        else:
                            v = old - c * tc
                            if p:
                                v %= p
                            if v:
                                vec[nk] = v
                            else:
                                del vec[nk]
                    dr = eq << rshift
                    for rk, rc in g.rep:
                        nk = rk + dr
                        v = rep.get(nk, 0) - c * rc
                        if p:
                            v %= p
                        if v:
                            rep[nk] = v
                        else:
                            rep.pop(nk, None)
                    break
            else:
                return k
        return None

    def add_elem(vec: dict, rep: dict, lead: int, degree: int):
        c = vec[lead]
        if c != 1:
            ci = inv(c)
            if p:
                vec = {k: v * ci % p for k, v in vec.items()}
                rep = {k: v * ci % p for k, v in rep.items()}
            else:
                vec = {k: v * ci for k, v in vec.items()}
                rep = {k: v * ci for k, v in rep.items()}
        items = sorted(vec.items(), reverse=True)
        j, m = decode(lead)
        e = _Elem(j, m, degree, items, list(rep.items()))
        idx = len(G)
        G.append(e)
        # Gebauer-Moeller update restricted to the component of the new lead
        others = by_comp.setdefault(j, [])
        C = [(ring.lcm(m, G[o].mono), o) for o in others]
        D = []
        while C:
            L, o = C.pop()
            if not any(ring.divides(L2, L) for L2, _ in C) and not any(ring.divides(L2, L) for L2, _ in D):
                D.append((L, o))
        for pk in list(pairs):
            a, b = pk
            if G[a].comp != j:
                continue
            L = pairs[pk]
            if ring.divides(m, L) and ring.lcm(G[a].mono, m) != L and ring.lcm(G[b].mono, m) != L:
                del pairs[pk]
        tw = twists[j]
        for L, o in D:
            pairs[(o, idx)] = L
            heappush(queue, (ring.degree(L) + tw, 0, o, idx))
        others.append(idx)

    while queue:
        deg, kind, a, b = heappop(queue)
        if kind == 0:
            L = pairs.pop((a, b), None)
            if L is None:
                continue
            ga, gb = G[a], G[b]
            qa = E(L - ga.mono)
            qb = E(L - gb.mono)
            vec: dict = {}
            for k, v in ga.vec[1:]:
                vec[k + (qa << vshift)] = v
            for k, v in gb.vec[1:]:
                nk = k + (qb << vshift)
                nv = vec.get(nk, 0) - v
                if p:
                    nv %= p
                if nv:
                    vec[nk] = nv
                else:
                    vec.pop(nk, None)
            rep: dict = {}
            for k, v in ga.rep:
                rep[k + (qa << rshift)] = v
            for k, v in gb.rep:
                nk = k + (qb << rshift)
                nv = rep.get(nk, 0) - v
                if p:
                    nv %= p
                if nv:
                    rep[nk] = nv
                else:
                    rep.pop(nk, None)
            lead = reduce(vec, rep) if vec else None
            if lead is None:
                if rep:
                    syz.append((deg, rep))
            else:
                add_elem(vec, rep, lead, deg)
        else:
            col = columns[a]
            vec = dict(col)
            rep: dict = {}
            lead = reduce(vec, rep) if vec else None
            if lead is None and not keep_all:
                continue
            k_new = len(kept)
            kept.append(a)
            lk = max(col) if col else 0
            lead_keys.append(lk)
            base = (lk << TIE_BITS) | (TIE_MASK - k_new)
            child_bases.append(base)
            rep[base] = rep.get(base, 0) + 1
            if p:
                rep[base] %= p
            if not rep[base]:
                del rep[base]
            if lead is None:
                if rep:
                    syz.append((deg, rep))
            else:
                add_elem(vec, rep, lead, deg)

    child = KeySpace(ring, child_bases, rshift, True)
    return kept, child, syz


# ---------------------------------------------------------------------------
# public data types

@dataclass(frozen=True)
class GradedFreeModule:
    twists: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)


@dataclass
class BettiTable:
    """Graded Betti numbers beta_{i,j} as a sparse map."""

    entries: dict = field(default_factory=dict)

    def __getitem__(self, ij):
        return self.entries.get(ij, 0)

    @property
    def pd(self) -> int:
        return max((i for (i, _), b in self.entries.items() if b), default=0)

    def total(self, i: int) -> int:
        return sum(b for (k, _), b in self.entries.items() if k == i)

    def totals(self) -> list[int]:
        return [self.total(i) for i in range(self.pd + 1)]

    def triples(self) -> list[list[int]]:
        return [[i, j, b] for (i, j), b in sorted(self.entries.items()) if b]

    def hilbert_numerator(self, nvars: int) -> list[int]:
        """K(t) with H(R/I,t) = K(t)/(1-t)^nvars, from sum (-1)^i beta_ij t^j."""
        top = max((j for (_, j) in self.entries), default=0)
        num = [0] * (top + 1)
        for (i, j), b in self.entries.items():
            num[j] += (-1) ** i * b
        return num

    def __str__(self):
        if not self.entries:
            return "0"
        pd = self.pd
        rows = {}
        for (i, j), b in self.entries.items():
            rows.setdefault(j - i, {})[i] = b
        width = max(len(str(b)) for b in self.entries.values()) + 1
        lines = ["      " + "".join(str(i).rjust(width) for i in range(pd + 1)),
                 "total:" + "".join(str(self.total(i)).rjust(width) for i in range(pd + 1))]
        for r in sorted(rows):
            cells = "".join((str(rows[r][i]) if rows[r].get(i) else "-").rjust(width)
                            for i in range(pd + 1))
            lines.append(f"{r:>5}:" + cells)
        return "\n".join(lines)


@dataclass
class FreeResolution:
    """Minimal graded free resolution F_0 <- F_1 <- ... <- F_p of R/I.

    ``differentials[i-1]`` is d_i as a list of rows (rank F_{i-1}) of lists
    of polynomials (rank F_i columns)."""

    ring: Ring
    modules: list[GradedFreeModule]
    differentials: list[list[list[Polynomial]]]
    minimal: bool = True

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    @property
    def betti(self) -> BettiTable:
        entries: dict = {}
        for i, F in enumerate(self.modules):
            for t in F.twists:
                entries[(i, t)] = entries.get((i, t), 0) + 1
        return BettiTable(entries)

    @property
    def pd(self) -> int:
        return self.length

    def column(self, i: int, c: int) -> list[Polynomial]:
        return [row[c] for row in self.differentials[i - 1]]

    def compositions_vanish(self) -> bool:
        for i in range(1, len(self.differentials)):
            if not matrix_product_is_zero(self.differentials[i - 1], self.differentials[i]):
                return False
        return True

    def is_minimal(self) -> bool:
        return all(not e or e.degree() >= 1
                   for d in self.differentials for row in d for e in row)

    def entries_homogeneous(self) -> bool:
        for i, d in enumerate(self.differentials, start=1):
            src, tgt = self.modules[i].twists, self.modules[i - 1].twists
            for r, row in enumerate(d):
                for c, e in enumerate(row):
                    if e and not e.is_homogeneous(src[c] - tgt[r]):
                        return False
        return True


def matrix_product_is_zero(A, B) -> bool:
    if not A or not B:
        return True
    ring = None
    for row in A:
        for e in row:
            ring = e.ring
            break
    inner = len(B)
    for r in range(len(A)):
        for c in range(len(B[0])):
            acc: dict = {}
            for k in range(inner):
                a, b = A[r][k], B[k][c]
                if a and b:
                    for m, v in (a * b).terms:
                        acc[m] = acc.get(m, 0) + v
            if ring.from_dict(acc):
                return False
    return True


# ---------------------------------------------------------------------------
# drivers

def _resolution_ring(I: Ideal) -> tuple[Ring, list[Polynomial]]:
    ring = I.ring
    if ring.order != "grevlex":
        ring = ring.with_order("grevlex")
        return ring, [f.to_ring(ring) for f in I.generators]
    return ring, list(I.generators)


def _poly_columns(space: KeySpace, polys: Sequence[Polynomial]) -> list[dict]:
    return [{space.key(0, m): c for m, c in f.terms} for f in polys]


def _decode_columns(ring: Ring, space: KeySpace, rank: int, vecs: Sequence[dict]) -> list[list[Polynomial]]:
    """Convert vectors to a row-major polynomial matrix."""
    cols = []
    for vec in vecs:
        comps: list[dict] = [dict() for _ in range(rank)]
        for k, c in vec.items():
            j, m = space.decode(k)
            comps[j][m] = c
        cols.append([ring.from_dict(d) for d in comps])
    return [[cols[c][r] for c in range(len(cols))] for r in range(rank)]


def minimal_free_resolution(I: Ideal, max_length: int | None = None) -> FreeResolution:
    """Minimal graded free resolution of R/I."""
    if not I.is_homogeneous():
        raise IdealError("resolutions need homogeneous generators")
    ring, gens = _resolution_ring(I)
    if I.is_zero():
        return FreeResolution(ring, [GradedFreeModule((0,))], [])
    if not I.is_proper():
        return FreeResolution(ring, [], [], True)
    space0 = KeySpace(ring, [0], 0, False)
    columns = _poly_columns(space0, gens)
    degrees = [f.degree() for f in gens]
    twists = [0]
    space = space0
    modules = [GradedFreeModule((0,))]
    raw_diffs = []
    limit = ring.nvars + 1 if max_length is None else max_length
    while columns and len(modules) <= limit:
        kept, child, syz = _syzygy_step(ring, space, twists, columns, degrees)
        new_twists = [degrees[k] for k in kept]
        raw_diffs.append((space, len(twists), [columns[k] for k in kept]))
        modules.append(GradedFreeModule(tuple(new_twists)))
        twists = new_twists
        space = child
        columns = [v for _, v in syz]
        degrees = [d for d, _ in syz]
    if columns and max_length is None:
        raise ResolutionError("resolution longer than the number of variables")
    diffs = [_decode_columns(ring, sp, rank, cols) for sp, rank, cols in raw_diffs]
    return FreeResolution(ring, modules, diffs)


def betti_table(I: Ideal) -> BettiTable:
    return minimal_free_resolution(I).betti


def projective_dimension(I: Ideal) -> int:
    """pd(R/I), the length of the minimal free resolution of R/I."""
    if not I.is_zero() and not I.is_proper():
        return 0
    return minimal_free_resolution(I).pd


def syzygies(matrix: Sequence[Sequence[Polynomial]], row_twists: Sequence[int] | None = None
             ) -> list[list[Polynomial]]:
    """Generators of the syzygy module of the columns of a homogeneous matrix,
    returned as a matrix (one column per syzygy)."""
    rows = len(matrix)
    if rows == 0:
        raise ResolutionError("empty matrix")
    ncols = len(matrix[0])
    ring = None
    for row in matrix:
        for e in row:
            ring = e.ring
            break
        break
    if ring.order != "grevlex":
        raise RingError("syzygies are computed in a grevlex ring")
    twists = list(row_twists) if row_twists is not None else [0] * rows
    space = KeySpace(ring, [(TIE_MASK - j) for j in range(rows)], TIE_BITS, True)
    columns, degrees = [], []
    for c in range(ncols):
        vec = {}
        deg = None
        for r in range(rows):
            e = matrix[r][c]
            for m, v in e.terms:
                d = ring.degree(m) + twists[r]
                if deg is None:
                    deg = d
                elif d != deg:
                    raise ResolutionError(f"column {c} is not homogeneous")
                vec[space.key(r, m)] = v
        columns.append(vec)
        degrees.append(deg if deg is not None else 0)
    nonzero = [i for i, v in enumerate(columns) if v]
    kept, child, syz = _syzygy_step(ring, space, twists, [columns[i] for i in nonzero],
                                    [degrees[i] for i in nonzero], keep_all=True)
    # zero columns contribute unit vectors
    out_cols: list[list[Polynomial]] = []
    for _, vec in syz:
        col = [ring.zero() for _ in range(ncols)]
        for k, c in vec.items():
            j, m = child.decode(k)
            col[nonzero[kept[j]]] = col[nonzero[kept[j]]] + ring.from_dict({m: c})
        out_cols.append(col)
    for i, v in enumerate(columns):
        if not v:
            col = [ring.zero() for _ in range(ncols)]
            col[i] = ring.one()
            out_cols.append(col)
    return [[out_cols[c][r] for c in range(len(out_cols))] for r in range(ncols)]


def is_socle_element(f: Polynomial, I: Ideal) -> bool:
    """f is nonzero in R/I and killed by every variable."""
    if I.contains(f):
        return False
    return all(I.contains(v * f) for v in f.ring.gens())


# ---------------------------------------------------------------------------
# verification helpers

def minimalize_complex(diffs: list[list[list[Polynomial]]], ranks: list[int]):
    """Cancel unit entries of a (possibly non-minimal) complex.

    ``diffs[i]`` maps F_{i+1} -> F_i.  Returns new ``(diffs, kept_indices)``
    where ``kept_indices[i]`` lists the surviving basis elements of F_i.
    """
    diffs = [[list(row) for row in d] for d in diffs]
    alive = [list(range(r)) for r in ranks]
    changed = True
    while changed:
        changed = False
        for i, d in enumerate(diffs):
            hit = None
            for r in alive[i]:
                for c in alive[i + 1]:
                    e = d[r][c]
                    if e and e.is_constant():
                        hit = (r, c, e.terms[0][1])
                        break
                if hit:
                    break
            if not hit:
                continue
            r, c, u = hit
            ring = d[r][c].ring
            inv = ring.field.inv(u)
            for k in alive[i + 1]:
                if k != c and d[r][k]:
                    factor = d[r][k].scale(inv)
                    for rr in alive[i]:
                        if d[rr][c]:
                            d[rr][k] = d[rr][k] - factor * d[rr][c]
            alive[i].remove(r)
            alive[i + 1].remove(c)
            changed = True
            break
    out = []
    for i, d in enumerate(diffs):
        out.append([[d[r][c] for c in alive[i + 1]] for r in alive[i]])
    return out, alive


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        pr = [v * inv % p for v in rows[rank]]
        rows[rank] = pr
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], pr)]
        rank += 1
    return rank


def generic_ranks(res: FreeResolution, seed: int = 0) -> list[int]:
    """Ranks of d_1..d_p at a random point (generic rank over the fraction
    field with overwhelming probability for large p)."""
    ring = res.ring
    p = ring.field.p or 1_000_003
    rng = random.Random(seed)
    point = [rng.randrange(1, p) for _ in range(ring.nvars)]
    ranks = []
    for d in res.differentials:
        rows = []
        for row in d:
            vals = []
            for e in row:
                v = e.evaluate(point) if ring.field.p else _eval_rational(e, point, p)
                vals.append(int(v) % p)
            rows.append(vals)
        ranks.append(_rank_mod_p(rows, p))
    return ranks


def _eval_rational(e: Polynomial, point, p):
    total = 0
    ring = e.ring
    for m, c in e.terms:
        term = c.numerator * pow(c.denominator, -1, p)
        for i, x in enumerate(ring.exponents(m)):
            if x:
                term = term * pow(point[i], x, p)
        total += term
    return total % p


def is_generically_exact(res: FreeResolution, seed: int = 0) -> bool:
    """rank d_i + rank d_{i+1} = rank F_i for i >= 1 (and rank d_1 = 1)."""
    ranks = generic_ranks(res, seed) + [0]
    for i in range(1, res.length + 1):
        if ranks[i - 1] + ranks[i] != res.modules[i].rank:
            return False
    return True
