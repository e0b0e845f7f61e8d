"""Coefficient fields, packed monomials and multivariate polynomials.

Monomials are stored as Python ints.  Each variable owns an 8-bit field
(exponent in the low 7 bits, the top bit is a guard used for divisibility
tests) and the total degree sits above all variable fields.  Variable ``i``
lives at bit offset ``8*i``.  With this layout the graded reverse
lexicographic comparison of two monomials is plain integer comparison after
XOR-ing the variable fields with an all-ones mask, multiplication is integer
addition and divisibility is a single masked subtraction.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Iterable, Sequence

WIDTH = 8
FIELD_MASK = (1 << WIDTH) - 1
MAX_EXPONENT = (1 << (WIDTH - 1)) - 1
DEG_BITS = 16

DEFAULT_CHARACTERISTIC = 32003

ORDERS = ("grevlex", "lex", "elim1")


class RingError(ValueError):
    """Structural misuse: mismatched rings, bad variables, overflow."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


class Field:
    """Prime field GF(p) (``p > 0``) or the rationals (``p == 0``)."""

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_CHARACTERISTIC):
        if p != 0 and not is_prime(p):
            raise RingError(f"characteristic must be 0 or a prime, got {p}")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return self.name

    @property
    def name(self) -> str:
        return f"GF({self.p})" if self.p else "QQ"

    def __call__(self, c) -> int | Fraction:
        if self.p:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            return int(c) % self.p
        return Fraction(c)

    def inv(self, c):
        if not c:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(c, self.p - 2, self.p)
        return 1 / Fraction(c)

    def signed(self, c):
        """Symmetric representative, used for printing."""
        if self.p and c > self.p // 2:
            return c - self.p
        return c

    def random_element(self, rng: random.Random, nonzero: bool = False):
        if self.p:
            lo = 1 if nonzero else 0
            return rng.randrange(lo, self.p)
        while True:
            c = Fraction(rng.randint(-9, 9))
            if c or not nonzero:
                return c


class Ring:
    """Standard graded polynomial ring K[x_1..x_N] with a monomial order.

    Orders: ``grevlex`` (default), ``lex``, and ``elim1`` which compares the
    exponent of the first variable before falling back to grevlex on the
    others (the first variable is treated as a degree-0 tag for sugar).
    """

    def __init__(self, variables: Sequence[str], field: Field | int | None = None,
                 order: str = "grevlex"):
        names = tuple(variables)
        if not names:
            raise RingError("a ring needs at least one variable")
        if len(set(names)) != len(names):
            raise RingError(f"duplicate variable names in {list(names)}")
        for v in names:
            if not _NAME_RE.fullmatch(v):
                raise RingError(f"invalid variable name {v!r}")
        if order not in ORDERS:
            raise RingError(f"unknown monomial order {order!r}")
        if field is None:
            field = Field()
        elif isinstance(field, int):
            field = Field(field)
        self.field = field
        self.names = names
        self.order = order
        self.nvars = n = len(names)
        self.index = {v: i for i, v in enumerate(names)}
        self.shift = WIDTH * n
        self.mask = (1 << self.shift) - 1
        self.guard = sum(1 << (WIDTH * i + WIDTH - 1) for i in range(n))
        self.low = sum(1 << (WIDTH * i) for i in range(n))
        self.var_monos = tuple((1 << self.shift) | (1 << (WIDTH * i)) for i in range(n))
        if order == "grevlex":
            self.key = self.mask.__xor__
            self.unkey = self.mask.__xor__
            self.sugar = self.shift.__rrshift__
        elif order == "lex":
            self.key = self._lex_key
            self.unkey = self._lex_unkey
            self.sugar = self.shift.__rrshift__
        else:
            if n < 2:
                raise RingError("elim1 needs at least two variables")
            self._rest_mask = (1 << (WIDTH * (n - 1))) - 1
            self._top = self.shift + DEG_BITS
            self.key = self._elim_key
            self.unkey = self._elim_unkey
            self.sugar = self._elim_sugar

    # -- identity -------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Ring) and other.names == self.names
                and other.field == self.field and other.order == self.order)

    def __hash__(self):
        return hash((self.names, self.field, self.order))

    def __repr__(self):
        return f"{self.field.name}[{','.join(self.names)}]"

    @property
    def characteristic(self) -> int:
        return self.field.p

    def with_order(self, order: str) -> "Ring":
        return Ring(self.names, self.field, order)

    # -- monomials ------------------------------------------------------
    def monomial(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise RingError(f"exponent vector of length {len(exps)} in a ring with {self.nvars} variables")
        m = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise RingError(f"exponent {e} out of range")
            m |= e << (WIDTH * i)
        return m | (sum(exps) << self.shift)

    def exponents(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (WIDTH * i)) & FIELD_MASK for i in range(self.nvars))

    def degree(self, m: int) -> int:
        return m >> self.shift

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        m = 0
        d = 0
        for i in range(self.nvars):
            s = WIDTH * i
            e = max((a >> s) & FIELD_MASK, (b >> s) & FIELD_MASK)
            m |= e << s
            d += e
        return m | (d << self.shift)

    def _support_bits(self, m: int) -> int:
        m &= self.mask
        f = m | (m >> 1)
        f |= f >> 2
        f |= f >> 4
        return f & self.low

    def coprime(self, a: int, b: int) -> bool:
        return not (self._support_bits(a) & self._support_bits(b))

    def support_mask(self, m: int) -> int:
        """Bitmask of variables occurring in ``m``."""
        bits = 0
        for i in range(self.nvars):
            if (m >> (WIDTH * i)) & FIELD_MASK:
                bits |= 1 << i
        return bits

    def mono_str(self, m: int) -> str:
        parts = []
        for v, e in zip(self.names, self.exponents(m)):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def _lex_key(self, m: int) -> int:
        n = self.nvars
        k = 0
        for i in range(n):
            k |= ((m >> (WIDTH * i)) & FIELD_MASK) << (WIDTH * (n - 1 - i))
        return k

    def _lex_unkey(self, k: int) -> int:
        n = self.nvars
        m = 0
        d = 0
        for i in range(n):
            e = (k >> (WIDTH * (n - 1 - i))) & FIELD_MASK
            m |= e << (WIDTH * i)
            d += e
        return m | (d << self.shift)

    def _elim_key(self, m: int) -> int:
        et = m & FIELD_MASK
        rest = (m >> WIDTH) & self._rest_mask
        drest = (m >> self.shift) - et
        return (et << self._top) | (drest << self.shift) | (rest ^ self._rest_mask)

    def _elim_unkey(self, k: int) -> int:
        et = k >> self._top
        drest = (k >> self.shift) & ((1 << DEG_BITS) - 1)
        rest = (k & self._rest_mask) ^ self._rest_mask
        return ((drest + et) << self.shift) | (rest << WIDTH) | et

    def _elim_sugar(self, m: int) -> int:
        return (m >> self.shift) - (m & FIELD_MASK)

    # -- polynomials ----------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, ((0, c),) if c else ())

    def var(self, name: str | int) -> "Polynomial":
        i = name if isinstance(name, int) else self._var_index(name)
        return Polynomial(self, ((self.var_monos[i], self.field(1)),))

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def _var_index(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise RingError(f"variable {name!r} is not declared in {self!r}") from None

    def from_dict(self, d: dict) -> "Polynomial":
        """Build a polynomial from ``{packed monomial: coefficient}``."""
        key = self.key
        if self.field.p:
            p = self.field.p
            items = [(m, c % p) for m, c in d.items() if c % p]
        else:
            items = [(m, Fraction(c)) for m, c in d.items() if c]
        items.sort(key=lambda t: key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "Polynomial":
        d: dict = {}
        for exps, c in terms:
            m = self.monomial(exps)
            d[m] = d.get(m, 0) + self.field(c)
        return self.from_dict(d)

    def parse(self, text: str) -> "Polynomial":
        from .parsing import parse_polynomial
        return parse_polynomial(self, text)

    def __call__(self, text: str) -> "Polynomial":
        return self.parse(text)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Polynomial:
    """Immutable polynomial; ``terms`` is a tuple of ``(monomial, coeff)``
    sorted strictly descending in the ring's monomial order."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic accessors --------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lm(self) -> int:
        return self.terms[0][0]

    @property
    def lc(self):
        return self.terms[0][1]

    def as_dict(self) -> dict:
        return dict(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        s = self.ring.shift
        return max(m >> s for m, _ in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        if not self.terms:
            return True
        s = self.ring.shift
        d0 = self.terms[0][0] >> s if d is None else d
        return all(m >> s == d0 for m, _ in self.terms)

    def is_linear_form(self) -> bool:
        return bool(self.terms) and self.is_homogeneous(1)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.lc)
        return self.scale(inv)

    def variables(self) -> set[str]:
        mask = 0
        for m, _ in self.terms:
            mask |= self.ring.support_mask(m)
        return {v for i, v in enumerate(self.ring.names) if mask >> i & 1}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return self.ring.from_dict(d)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) - c
        return self.ring.from_dict(d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d: dict = {}
        get = d.get
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 + m2
                d[m] = get(m, 0) + c1 * c2
        guard = self.ring.guard
        if any(m & guard for m in d):
            raise RingError("exponent overflow in polynomial product")
        return self.ring.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise RingError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, tuple((m, a * c % p) for m, a in self.terms))
        return Polynomial(self.ring, tuple((m, a * c) for m, a in self.terms))

    def mul_monomial(self, mono: int, c=1) -> "Polynomial":
        c = self.ring.field(c)
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, tuple((m + mono, a * c % p) for m, a in self.terms))
        return Polynomial(self.ring, tuple((m + mono, a * c) for m, a in self.terms))

    # -- comparisons ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.terms))
        return self._hash

    # -- calculus and substitution -----------------------------------------
    def derivative(self, var: str | int) -> "Polynomial":
        ring = self.ring
        i = var if isinstance(var, int) else ring._var_index(var)
        s = WIDTH * i
        d: dict = {}
        for m, c in self.terms:
            e = (m >> s) & FIELD_MASK
            if e:
                d[m - ring.var_monos[i]] = c * e
        return ring.from_dict(d)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a point given as one field element per variable."""
        ring = self.ring
        f = ring.field
        total = f(0)
        for m, c in self.terms:
            term = c
            for i, e in enumerate(ring.exponents(m)):
                if e:
                    term = term * pow(point[i], e)
            total += term
        return f(total)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring map sending variable i to ``images[i]`` (images may live in
        another ring)."""
        target = images[0].ring
        acc: dict = {}
        cache: dict = {}
        for m, c in self.terms:
            term = target.const(c)
            for i, e in enumerate(self.ring.exponents(m)):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    term = term * cache[key]
            for tm, tc in term.terms:
                acc[tm] = acc.get(tm, 0) + tc
        return target.from_dict(acc)

    def to_ring(self, target: Ring) -> "Polynomial":
        """Re-express in a ring whose variables include ours (by name)."""
        if target == self.ring:
            return self
        images = [target.var(v) for v in self.ring.names]
        return self.substitute(images)

    def linear_coefficients(self) -> list:
        """Coefficient vector of a linear form (one entry per variable)."""
        ring = self.ring
        vec = [ring.field(0)] * ring.nvars
        for m, c in self.terms:
            if m >> ring.shift != 1:
                raise RingError(f"{self} is not a linear form")
            vec[ring.exponents(m).index(1)] = c
        return vec

    # -- printing -----------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        f = self.ring.field
        out = []
        for m, c in self.terms:
            c = f.signed(c)
            neg = c < 0
            a = -c if neg else c
            ms = self.ring.mono_str(m)
            if ms == "1":
                body = str(a)
            elif a == 1:
                body = ms
            else:
                body = f"{a}*{ms}"
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({self})"


def monomial_compare(a: Sequence[int], b: Sequence[int], order: str = "grevlex") -> int:
    """Compare exponent vectors; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise RingError("exponent vectors of different length")
    if order == "grevlex":
        da, db = sum(a), sum(b)
        if da != db:
            return 1 if da > db else -1
        for x, y in zip(reversed(a), reversed(b)):
            if x != y:
                return 1 if x < y else -1
        return 0
    if order == "lex":
        for x, y in zip(a, b):
            if x != y:
                return 1 if x > y else -1
        return 0
    raise RingError(f"unknown monomial order {order!r}")


def random_linear_form(ring: Ring, seed: int | random.Random,
                       support: Iterable[str] | None = None) -> Polynomial:
    """Uniformly random nonzero linear form in the given variables."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    names = list(ring.names if support is None else support)
    if not names:
        raise ValueError("random_linear_form needs a non-empty support")
    idx = [ring._var_index(v) for v in names]
    f = ring.field
    while True:
        coeffs = [f.random_element(rng) for _ in idx]
        if any(coeffs):
            break
    d = {ring.var_monos[i]: c for i, c in zip(idx, coeffs) if c}
    return ring.from_dict(d)


def random_form(ring: Ring, degree: int, seed: int | random.Random,
                support: Iterable[str] | None = None) -> Polynomial:
    """Random homogeneous form with every monomial of the given degree in
    ``support`` receiving an independent uniform coefficient."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    names = list(ring.names if support is None else support)
    idx = [ring._var_index(v) for v in names]
    f = ring.field
    d = {}
    for m in monomials_of_degree(ring, degree, idx):
        c = f.random_element(rng)
        if c:
            d[m] = c
    return ring.from_dict(d)


def monomials_of_degree(ring: Ring, degree: int, idx: Sequence[int] | None = None) -> list[int]:
    idx = list(range(ring.nvars)) if idx is None else list(idx)
    out = []

    def rec(pos, left, acc):
        if pos == len(idx) - 1:
            out.append(acc + left * ring.var_monos[idx[pos]])
            return
        for e in range(left, -1, -1):
            rec(pos + 1, left - e, acc + e * ring.var_monos[idx[pos]])

    if not idx:
        return [0] if degree == 0 else []
    rec(0, degree, 0)
    return out
