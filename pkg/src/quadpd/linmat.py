"""Matrices of linear forms for quadric ideals inside a linear prime (x, y).

A 2 x (n+1) matrix ``M`` with first column ``(x, y)`` represents the ideal
generated by the minors ``det[col_0, col_j]``.  This module finds
generalized zeros (vanishing K-combinations of the entries of a generalized
row), tests 1-genericity, and reduces ``M`` by ideal-preserving elementary
operations to one of five canonical shapes, logging every operation.

Generalized zeros of a two-row matrix are found through the pencil
``C(s,t) = s*C_1 + t*C_2`` of coefficient matrices: a zero exists at
``(s:t)`` iff ``rank C(s,t) < m``, so the candidate points are the common
roots of the maximal minors.  Their gcd is obtained from a column Hermite
reduction over K[s] (unimodular column operations keep the ideal of maximal
minors) plus a separate rank test at the point at infinity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .ideal import Ideal, ideal_quotient
from .ring import Field, Polynomial, Ring, RingError


class MatrixError(ValueError):
    pass


class RepresentationError(MatrixError):
    pass


class ExtensionNeeded(MatrixError):
    """A generalized zero exists only over a proper field extension."""

    def __init__(self, form: list):
        super().__init__(f"generalized zero needs a field extension; binary form {form}")
        self.form = form


class PreconditionError(MatrixError):
    pass


# ---------------------------------------------------------------------------
# scalar linear algebra

def _rref(rows: list[list], K: Field):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    A = [[K(v) for v in r] for r in rows]
    piv = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = K.inv(A[r][c])
        A[r] = [K(v * inv) for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [K(a - f * b) for a, b in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], piv


def rank(rows: list[list], K: Field) -> int:
    if not rows or not rows[0]:
        return 0
    return len(_rref(rows, K)[1])


def left_kernel(rows: list[list], K: Field) -> list[list]:
    """Basis of {c : c^T A = 0} for the m x N matrix ``rows``."""
    m = len(rows)
    N = len(rows[0]) if rows else 0
    At = [[rows[i][j] for i in range(m)] for j in range(N)]
    if not At:
        At = [[0] * m]
    R, piv = _rref(At, K)
    free = [c for c in range(m) if c not in piv]
    basis = []
    for f in free:
        v = [K(0)] * m
        v[f] = K(1)
        for row, pc in zip(R, piv):
            v[pc] = K(-row[f])
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# univariate polynomials over K, coefficient lists low -> high

def _trim(a):
    while a and not a[-1]:
        a.pop()
    return a


def _sub(a, b, K):
    n = max(len(a), len(b))
    return _trim([K((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) for i in range(n)])


def _mul(a, b, K):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([K(v) for v in out])


def _divmod(a, b, K):
    a = list(a)
    q = [K(0)] * max(len(a) - len(b) + 1, 0)
    inv = K.inv(b[-1])
    while len(a) >= len(b) and a:
        c = K(a[-1] * inv)
        d = len(a) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            a[i + d] = K(a[i + d] - c * y)
        _trim(a)
    return _trim(q), a


def _monic(a, K):
    if not a:
        return a
    inv = K.inv(a[-1])
    return [K(v * inv) for v in a]


def _gcd(a, b, K):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, K)[1]
    return _monic(a, K)


def _powmod(base, e, mod, K):
    result = [K(1)]
    base = _divmod(base, mod, K)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, K), mod, K)[1]
        base = _divmod(_mul(base, base, K), mod, K)[1]
        e >>= 1
    return result


def _eval(a, x, K):
    v = K(0)
    for c in reversed(a):
        v = K(v * x + c)
    return v


def roots_in_field(f: list, K: Field, seed: int = 0) -> list:
    """Distinct roots in K of a nonzero univariate polynomial, ascending.

    Over GF(p): gcd with s^p - s isolates the linear factors, which are then
    split by Cantor-Zassenhaus.  Over QQ: rational root candidates of the
    primitive integer polynomial."""
    f = _trim([K(c) for c in f])
    if len(f) <= 1:
        return []
    p = K.p
    if p:
        if p == 2:
            return [x for x in (0, 1) if not _eval(f, x, K)]
        h = _gcd(f, _sub(_powmod([0, 1], p, f, K), [0, 1], K), K)
        rng = random.Random(seed)
        out = []
        stack = [h]
        while stack:
            g = stack.pop()
            if len(g) <= 1:
                continue
            if len(g) == 2:
                out.append(K(-g[0]))
                continue
            while True:
                a = rng.randrange(p)
                w = _sub(_powmod([a, 1], (p - 1) // 2, g, K), [1], K)
                d = _gcd(g, w, K)
                if 1 < len(d) < len(g):
                    stack.append(d)
                    stack.append(_divmod(g, d, K)[0])
                    break
        return sorted(out)
    # rationals
    out = []
    while f and not f[0]:
        f = f[1:]
        if 0 not in out:
            out.append(Fraction(0))
    if len(f) <= 1:
        return sorted(out)
    den = 1
    for c in f:
        den = den * c.denominator // _igcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    a0, an = abs(ints[0]), abs(ints[-1])
    for u in _divisors(a0):
        for v in _divisors(an):
            for sgn in (1, -1):
                x = Fraction(sgn * u, v)
                if x not in out and not _eval(f, x, K):
                    out.append(x)
    return sorted(out)


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _pencil_gcd(C1: list[list], C2: list[list], K: Field):
    """Monic gcd of the maximal minors of s*C1 + C2 (m x N, m <= N), or None
    when they all vanish identically."""
    m = len(C1)
    N = len(C1[0]) if m else 0
    A = [[_trim([K(C2[i][j]), K(C1[i][j])]) for j in range(N)] for i in range(m)]
    prod = [K(1)]
    for i in range(m):
        while True:
            nz = [j for j in range(i, N) if A[i][j]]
            if not nz:
                return None
            j0 = min(nz, key=lambda j: (len(A[i][j]), j))
            if j0 != i:
                for r in range(m):
                    A[r][i], A[r][j0] = A[r][j0], A[r][i]
            done = True
            for j in range(i + 1, N):
                if A[i][j]:
                    q, rem = _divmod(A[i][j], A[i][i], K)
                    for r in range(m):
                        A[r][j] = _sub(A[r][j], _mul(q, A[r][i], K), K)
                    if rem:
                        done = False
            if done:
                break
        prod = _mul(prod, A[i][i], K)
    return _monic(prod, K)


# ---------------------------------------------------------------------------
# matrices

def _is_linear_or_zero(f: Polynomial) -> bool:
    return not f or f.is_homogeneous(1)


@dataclass(frozen=True)
class LinearMatrix:
    """Two-row matrix of linear forms (or zeros).

    With ``distinguished=True`` the first column is the pair (x, y), which
    must be linearly independent."""

    ring: Ring
    rows: tuple
    distinguished: bool = True

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != 2:
            raise MatrixError("a linear matrix has exactly two rows")
        if len(rows[0]) != len(rows[1]):
            raise MatrixError("rows of different length")
        for r in rows:
            for e in r:
                if e.ring != self.ring:
                    raise RingError("entry from a different ring")
                if not _is_linear_or_zero(e):
                    raise MatrixError(f"entry {e} is not a linear form")
        if self.distinguished:
            if not rows[0]:
                raise MatrixError("matrix needs a first column")
            x, y = rows[0][0], rows[1][0]
            if rank([_coeffs(x), _coeffs(y)], self.ring.field) < 2:
                raise MatrixError("first column entries are not linearly independent")

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def n(self) -> int:
        return self.ncols - 1 if self.distinguished else self.ncols

    @property
    def x(self) -> Polynomial:
        return self.rows[0][0]

    @property
    def y(self) -> Polynomial:
        return self.rows[1][0]

    def entry(self, i: int, j: int) -> Polynomial:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Polynomial, Polynomial]:
        return self.rows[0][j], self.rows[1][j]

    def submatrix(self, cols: Sequence[int], distinguished: bool | None = None) -> "LinearMatrix":
        dist = self.distinguished and cols and cols[0] == 0 if distinguished is None else distinguished
        return LinearMatrix(self.ring, ([self.rows[0][j] for j in cols], [self.rows[1][j] for j in cols]),
                            bool(dist))

    def minor(self, i: int, j: int) -> Polynomial:
        return self.rows[0][i] * self.rows[1][j] - self.rows[1][i] * self.rows[0][j]

    def to_lists(self) -> list[list[str]]:
        return [[str(e) for e in r] for r in self.rows]

    def text(self) -> str:
        return "\n".join(", ".join(str(e) for e in r) for r in self.rows)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"


def _coeffs(f: Polynomial) -> list:
    if not f:
        return [f.ring.field(0)] * f.ring.nvars
    return f.linear_coefficients()


def _form(ring: Ring, vec: Sequence) -> Polynomial:
    return ring.from_dict({ring.var_monos[i]: c for i, c in enumerate(vec) if c})


def matrix_from_strings(ring: Ring, rows: Sequence[Sequence[str]], distinguished: bool = True) -> LinearMatrix:
    return LinearMatrix(ring, [[ring(e) for e in r] for r in rows], distinguished)


# ---------------------------------------------------------------------------
# representations

def _complete_basis(ring: Ring, forms: Sequence[Polynomial]) -> list[list]:
    """Rows of an invertible matrix whose first rows are the given forms,
    completed greedily by standard basis vectors."""
    K = ring.field
    rows = [_coeffs(f) for f in forms]
    for i in range(ring.nvars):
        if len(rows) == ring.nvars:
            break
        e = [K(0)] * ring.nvars
        e[i] = K(1)
        if rank(rows + [e], K) > len(rows):
            rows.append(e)
    return rows


def _invert(P: list[list], K: Field) -> list[list]:
    n = len(P)
    aug = [list(P[i]) + [K(1) if j == i else K(0) for j in range(n)] for i in range(n)]
    R, piv = _rref(aug, K)
    if piv[:n] != list(range(n)):
        raise MatrixError("singular change of coordinates")
    return [r[n:] for r in R]


def represent_by_coefficients(quadrics: Sequence[Polynomial], x: Polynomial, y: Polynomial) -> LinearMatrix:
    """The 2 x n coefficient matrix A with q_i = -y*a_1i + x*a_2i.

    The split q = x*u + y*v is made canonical by passing to coordinates in
    which x and y are the first two variables: terms divisible by x go to
    x*u, the rest (divisible by y) to y*v."""
    ring = x.ring
    K = ring.field
    if not (x.is_homogeneous(1) and y.is_homogeneous(1)):
        raise MatrixError("x and y must be linear forms")
    if rank([_coeffs(x), _coeffs(y)], K) < 2:
        raise MatrixError("x and y are linearly dependent")
    if ring.nvars < 2:
        raise MatrixError("ring too small")
    P = _complete_basis(ring, [x, y])     # new coordinate u_i = sum_j P[i][j] v_j
    Pinv = _invert(P, K)                  # v_k = sum_l Pinv[k][l] u_l
    to_new = [_form(ring, Pinv[k]) for k in range(ring.nvars)]
    to_old = [_form(ring, P[l]) for l in range(ring.nvars)]
    top, bottom = [], []
    for q in quadrics:
        if q.ring != ring:
            raise RingError("quadric from a different ring")
        if q and not q.is_homogeneous(2):
            raise RepresentationError(f"{q} is not a quadric")
        qn = q.substitute(to_new)
        u, v = {}, {}
        for m, c in qn.terms:
            e = ring.exponents(m)
            if e[0]:
                u[m - ring.var_monos[0]] = c
            elif e[1]:
                v[m - ring.var_monos[1]] = c
            else:
                raise RepresentationError(f"{q} is not in the ideal ({x}, {y})")
        U = ring.from_dict(u).substitute(to_old)
        V = ring.from_dict(v).substitute(to_old)
        top.append(-V)
        bottom.append(U)
    return LinearMatrix(ring, (top, bottom), distinguished=False)


def matrix_from_coefficients(A: LinearMatrix, x: Polynomial, y: Polynomial) -> LinearMatrix:
    return LinearMatrix(A.ring, ([x] + list(A.rows[0]), [y] + list(A.rows[1])))


def ideal_from_minors(M: LinearMatrix) -> Ideal:
    """Ideal of the minors det[col_0, col_j], j >= 1."""
    gens = [M.minor(0, j) for j in range(1, M.ncols)]
    return Ideal(M.ring, [g for g in gens if g])


def minors_ideal(rows: Sequence[Sequence[Polynomial]], size: int) -> Ideal:
    """Ideal I_size of a general matrix of polynomials."""
    ring = None
    for r in rows:
        for e in r:
            ring = e.ring
            break
    p, q = len(rows), len(rows[0])
    gens = []
    for rs in combinations(range(p), size):
        for cs in combinations(range(q), size):
            d = _det([[rows[i][j] for j in cs] for i in rs], ring)
            if d:
                gens.append(d)
    return Ideal(ring, gens)


def _det(A, ring):
    n = len(A)
    if n == 1:
        return A[0][0]
    total = ring.zero()
    for j in range(n):
        if A[0][j]:
            sub = [row[:j] + row[j + 1:] for row in A[1:]]
            term = A[0][j] * _det(sub, ring)
            total = total + term if j % 2 == 0 else total - term
    return total


def all_minors_ideal(M: LinearMatrix) -> Ideal:
    """I_2(M): every 2 x 2 minor."""
    gens = [M.minor(i, j) for i, j in combinations(range(M.ncols), 2)]
    return Ideal(M.ring, [g for g in gens if g])


# ---------------------------------------------------------------------------
# generalized zeros

@dataclass(frozen=True)
class GeneralizedZeroWitness:
    """sum_j c_j * (s*M_1j + t*M_2j) = 0 with (s, t) != 0 and c != 0."""

    s: object
    t: object
    coefficients: tuple
    literal: bool = False

    def identity(self, M: LinearMatrix) -> Polynomial:
        ring = M.ring
        acc = ring.zero()
        for j, c in enumerate(self.coefficients):
            if c:
                acc = acc + (M.rows[0][j].scale(self.s) + M.rows[1][j].scale(self.t)).scale(c)
        return acc

    def certifies(self, M: LinearMatrix) -> bool:
        return (bool(self.s) or bool(self.t)) and any(self.coefficients) and not self.identity(M)


@dataclass(frozen=True)
class NoGeneralizedZero:
    """``status`` is ``none-over-base`` (zeros exist only over an extension;
    ``form`` is the gcd binary form, coefficients of s^d, s^(d-1) t, ...) or
    ``none-absolutely``."""

    status: str
    form: tuple = ()


def _pencil(M: LinearMatrix):
    C1 = [_coeffs(M.rows[0][j]) for j in range(M.ncols)]
    C2 = [_coeffs(M.rows[1][j]) for j in range(M.ncols)]
    return C1, C2


def _witness_at(M, C1, C2, s, t, K):
    C = [[K(s * a + t * b) for a, b in zip(r1, r2)] for r1, r2 in zip(C1, C2)]
    ker = left_kernel(C, K)
    if not ker:
        return None
    c = ker[0]
    return GeneralizedZeroWitness(K(s), K(t), tuple(c))


def find_generalized_zero(M: LinearMatrix, seed: int = 0):
    """Return a witness, or ``NoGeneralizedZero``.

    Preference order: literal zeros (top row first, leftmost first), then the
    point (1:0), then affine points (s:1) in ascending order of s."""
    ring = M.ring
    K = ring.field
    m = M.ncols
    for i, (s, t) in ((0, (1, 0)), (1, (0, 1))):
        for j in range(m):
            if not M.rows[i][j]:
                c = [K(0)] * m
                c[j] = K(1)
                return GeneralizedZeroWitness(K(s), K(t), tuple(c), literal=True)
    C1, C2 = _pencil(M)
    if m > ring.nvars:
        return _witness_at(M, C1, C2, 1, 0, K)
    if rank(C1, K) < m:
        return _witness_at(M, C1, C2, 1, 0, K)
    g = _pencil_gcd(C1, C2, K)
    if g is None:
        return _witness_at(M, C1, C2, 1, 0, K)
    if len(g) <= 1:
        return NoGeneralizedZero("none-absolutely")
    roots = roots_in_field(g, K, seed)
    if roots:
        return _witness_at(M, C1, C2, roots[0], 1, K)
    # homogenized gcd, coefficients of s^d, s^(d-1) t, ..., t^d
    return NoGeneralizedZero("none-over-base", tuple(reversed(g)))


def is_one_generic(M: LinearMatrix) -> bool:
    """No generalized zeros over the algebraic closure."""
    r = find_generalized_zero(M)
    return isinstance(r, NoGeneralizedZero) and r.status == "none-absolutely"


def generalized_zero_brute_force(M: LinearMatrix) -> bool:
    """Exhaustive search over P^1(GF(p)) (small p only, used as an oracle)."""
    K = M.ring.field
    if not K.p or K.p > 101:
        raise MatrixError("brute force needs a small prime field")
    C1, C2 = _pencil(M)
    pts = [(1, 0)] + [(s, 1) for s in range(K.p)]
    for s, t in pts:
        C = [[K(s * a + t * b) for a, b in zip(r1, r2)] for r1, r2 in zip(C1, C2)]
        if rank(C, K) < M.ncols:
            return True
    return False


# ---------------------------------------------------------------------------
# elementary operations

def _scalar(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


@dataclass(frozen=True)
class RowOp:
    """rows <- [[a, b], [c, d]] * rows with ad - bc != 0."""

    a: object
    b: object
    c: object
    d: object

    def apply(self, M: LinearMatrix) -> LinearMatrix:
        r1, r2 = M.rows
        top = [e.scale(self.a) + f.scale(self.b) for e, f in zip(r1, r2)]
        bot = [e.scale(self.c) + f.scale(self.d) for e, f in zip(r1, r2)]
        return LinearMatrix(M.ring, (top, bot), M.distinguished)

    def is_invertible(self, K: Field) -> bool:
        return bool(K(self.a * self.d - self.b * self.c))

    def to_dict(self):
        return {"op": "row", "matrix": [[_scalar(self.a), _scalar(self.b)], [_scalar(self.c), _scalar(self.d)]]}


@dataclass(frozen=True)
class ColumnCombine:
    """col_target <- sum_k coefficients[k] * col_k over non-first columns,
    with a nonzero coefficient on the target itself."""

    target: int
    coefficients: tuple    # ((k, c), ...)

    def apply(self, M: LinearMatrix) -> LinearMatrix:
        rows = [list(r) for r in M.rows]
        for i in range(2):
            acc = M.ring.zero()
            for k, c in self.coefficients:
                acc = acc + M.rows[i][k].scale(c)
            rows[i][self.target] = acc
        return LinearMatrix(M.ring, rows, M.distinguished)

    def is_invertible(self, K: Field) -> bool:
        d = dict(self.coefficients)
        return self.target >= 1 and all(k >= 1 for k in d) and bool(K(d.get(self.target, 0)))

    def to_dict(self):
        return {"op": "combine", "target": self.target,
                "coefficients": [[k, _scalar(c)] for k, c in self.coefficients]}


@dataclass(frozen=True)
class AddFirstColumn:
    """col_target <- col_target + scalar * col_0."""

    target: int
    scalar: object

    def apply(self, M: LinearMatrix) -> LinearMatrix:
        rows = [list(r) for r in M.rows]
        for i in range(2):
            rows[i][self.target] = M.rows[i][self.target] + M.rows[i][0].scale(self.scalar)
        return LinearMatrix(M.ring, rows, M.distinguished)

    def is_invertible(self, K: Field) -> bool:
        return self.target >= 1

    def to_dict(self):
        return {"op": "add-first", "target": self.target, "scalar": _scalar(self.scalar)}


@dataclass(frozen=True)
class Permute:
    """New column k (k >= 1) is old column order[k-1]."""

    order: tuple

    def apply(self, M: LinearMatrix) -> LinearMatrix:
        rows = [[r[0]] + [r[k] for k in self.order] for r in M.rows]
        return LinearMatrix(M.ring, rows, M.distinguished)

    def is_invertible(self, K: Field) -> bool:
        return sorted(self.order) == list(range(1, len(self.order) + 1))

    def to_dict(self):
        return {"op": "permute", "order": list(self.order)}


@dataclass
class ElementaryOpLog:
    ops: list = field(default_factory=list)

    def append(self, op) -> None:
        self.ops.append(op)

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def replay(self, M: LinearMatrix) -> LinearMatrix:
        for op in self.ops:
            M = op.apply(M)
        return M

    def to_list(self) -> list[dict]:
        return [op.to_dict() for op in self.ops]


def op_from_dict(d: dict, K: Field):
    kind = d.get("op")
    conv = lambda v: K(Fraction(v)) if isinstance(v, str) else K(v)  # noqa: E731
    if kind == "row":
        (a, b), (c, e) = d["matrix"]
        return RowOp(conv(a), conv(b), conv(c), conv(e))
    if kind == "combine":
        return ColumnCombine(int(d["target"]), tuple((int(k), conv(c)) for k, c in d["coefficients"]))
    if kind == "add-first":
        return AddFirstColumn(int(d["target"]), conv(d["scalar"]))
    if kind == "permute":
        return Permute(tuple(int(k) for k in d["order"]))
    raise MatrixError(f"unknown operation {kind!r}")


# ---------------------------------------------------------------------------
# canonical forms

TAGS = ("T1", "T2", "T3", "T4", "T5")


@dataclass
class CanonicalFormReport:
    tag: str
    matrix: LinearMatrix
    log: ElementaryOpLog
    lam: object = None
    d_columns: tuple = ()     # columns of the designated submatrix D (T2, T4)

    def designated(self) -> LinearMatrix | None:
        if not self.d_columns:
            return None
        return self.matrix.submatrix(list(self.d_columns))


def _ratio(f: Polynomial, g: Polynomial):
    """c with f = c*g (g a nonzero linear form proportional to f)."""
    K = f.ring.field
    m, c = g.terms[0]
    v = f.as_dict().get(m, 0)
    r = K(v * K.inv(c))
    if f != g.scale(r):
        raise MatrixError("entries are not proportional")
    return r


class _Work:
    def __init__(self, M: LinearMatrix):
        self.M = M
        self.log = ElementaryOpLog()

    def apply(self, op):
        self.M = op.apply(self.M)
        self.log.append(op)

    def put_zero(self, J: list[int], seed: int):
        """Create a literal zero in the top entry of column J[0] using a
        generalized zero of the submatrix on columns [0] + J."""
        K = self.M.ring.field
        D = self.M.submatrix([0] + J)
        w = find_generalized_zero(D, seed)
        if isinstance(w, NoGeneralizedZero):
            return w
        c = w.coefficients
        idx = [0] + J
        jstar_pos = next(i for i in range(1, len(idx)) if c[i])
        jstar = idx[jstar_pos]
        combo = tuple((idx[i], c[i]) for i in range(1, len(idx)) if c[i])
        if combo != ((jstar, K(1)),):
            self.apply(ColumnCombine(jstar, combo))
        if c[0]:
            self.apply(AddFirstColumn(jstar, c[0]))
        s, t = w.s, w.t
        if (s, t) != (K(1), K(0)):
            op = RowOp(s, t, K(0), K(1)) if s else RowOp(s, t, K(1), K(0))
            self.apply(op)
        if self.M.rows[0][jstar]:
            raise MatrixError("internal: generalized zero did not produce a literal zero")
        if jstar != J[0]:
            order = list(range(1, self.M.ncols))
            a, b = order.index(J[0]), order.index(jstar)
            order[a], order[b] = order[b], order[a]
            self.apply(Permute(tuple(order)))
        return None


def _check_extension(res):
    if isinstance(res, NoGeneralizedZero) and res.status == "none-over-base":
        raise ExtensionNeeded(list(res.form))


def canonical_form(M: LinearMatrix, seed: int = 0, check_height: bool = True) -> CanonicalFormReport:
    """Reduce M by ideal-preserving operations to one of five shapes:

    T1  M is 1-generic;
    T2  [[x,0,...],[y,a21,...]] with D = columns {0,2..n} 1-generic;
    T3  two zeros in the first row (columns 1 and 2);
    T4  [[x,0,a12,...],[y,a21,0,...]] with D = columns {0,3..n} 1-generic;
    T5  [[x,0,a12,a13,...],[y,a21,0,lam*a13,...]].
    """
    if not M.distinguished:
        raise MatrixError("canonical_form needs the distinguished first column")
    n = M.n
    if n < 1:
        raise MatrixError("matrix needs at least two columns")
    if check_height:
        I = ideal_from_minors(M)
        if I.is_zero() or I.height() != 2:
            raise PreconditionError("the ideal of minors does not have height two")
    K = M.ring.field
    W = _Work(M)
    first = find_generalized_zero(M, seed)
    _check_extension(first)
    if isinstance(first, NoGeneralizedZero):
        return CanonicalFormReport("T1", W.M, W.log)
    W.put_zero(list(range(1, n + 1)), seed)
    if n == 1:
        return CanonicalFormReport("T2", W.M, W.log, d_columns=(0,))
    rest = list(range(2, n + 1))
    r = W.put_zero(rest, seed)
    _check_extension(r)
    if r is not None:
        return CanonicalFormReport("T2", W.M, W.log, d_columns=tuple([0] + rest))
    # column 1 is now (alpha*l, beta*l), column 2 is (0, l')
    top1, bot1 = W.M.column(1)
    if not top1:
        return CanonicalFormReport("T3", W.M, W.log)
    if bot1:
        W.apply(RowOp(K(1), K(0), K(-_ratio(bot1, top1)), K(1)))
    # now column 1 = (alpha*l, 0), column 2 = (0, l')
    rest = list(range(3, n + 1))
    r = W.put_zero(rest, seed) if rest else NoGeneralizedZero("none-absolutely")
    _check_extension(r)
    if r is not None:
        order = [2, 1] + list(range(3, n + 1))
        W.apply(Permute(tuple(order)))
        return CanonicalFormReport("T4", W.M, W.log, d_columns=tuple([0] + list(range(3, n + 1))))
    # column 3 = (0, l''); columns 1, 2 were mixed by the last row operation
    top1, bot1 = W.M.column(1)
    if not top1:
        order = [1, 3, 2] + list(range(4, n + 1))
        W.apply(Permute(tuple(order)))
        return CanonicalFormReport("T3", W.M, W.log)
    if bot1:
        W.apply(RowOp(K(1), K(0), K(-_ratio(bot1, top1)), K(1)))
    top2, bot2 = W.M.column(2)
    if not top2:
        order = [2, 3, 1] + list(range(4, n + 1))
        W.apply(Permute(tuple(order)))
        return CanonicalFormReport("T3", W.M, W.log)
    lam = _ratio(bot2, top2) if bot2 else K(0)
    # columns (alpha l, 0), (gamma m, delta m), (0, l'') -> (0, l''), (alpha l, 0), (gamma m, delta m)
    order = [3, 1, 2] + list(range(4, n + 1))
    W.apply(Permute(tuple(order)))
    return CanonicalFormReport("T5", W.M, W.log, lam=lam)


def check_report(report: CanonicalFormReport) -> list[str]:
    """Problems with a report's shape conditions (empty when valid)."""
    M = report.matrix
    probs = []
    z = lambda i, j: not M.rows[i][j]  # noqa: E731
    tag = report.tag
    if tag == "T1":
        if not is_one_generic(M):
            probs.append("T1 matrix is not 1-generic")
    elif tag == "T2":
        if not z(0, 1):
            probs.append("T2 needs a zero at (1,2)")
        if not is_one_generic(report.designated()):
            probs.append("T2 submatrix D is not 1-generic")
    elif tag == "T3":
        if not (z(0, 1) and z(0, 2)):
            probs.append("T3 needs two zeros in the first row")
    elif tag == "T4":
        if not (z(0, 1) and z(1, 2)):
            probs.append("T4 needs zeros at (1,2) and (2,3)")
        if not is_one_generic(report.designated()):
            probs.append("T4 submatrix D is not 1-generic")
    elif tag == "T5":
        if not (z(0, 1) and z(1, 2)):
            probs.append("T5 needs zeros at (1,2) and (2,3)")
        if M.rows[1][3] != M.rows[0][3].scale(report.lam):
            probs.append("T5 needs entry (2,4) = lambda * entry (1,4)")
    else:
        probs.append(f"unknown tag {tag}")
    return probs


def cramer_containment(I: Ideal, M: LinearMatrix) -> bool:
    """Every 2x2 minor of M lies in I : (x, y)."""
    Q = ideal_quotient(I, Ideal(M.ring, [M.x, M.y]))
    return all(Q.contains(M.minor(i, j)) for i, j in combinations(range(M.ncols), 2))


def cramer_equality(I: Ideal, M: LinearMatrix) -> bool:
    """I_2(M) = I : (x, y)."""
    Q = ideal_quotient(I, Ideal(M.ring, [M.x, M.y]))
    return all_minors_ideal(M) == Q
