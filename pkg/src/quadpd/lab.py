"""Instance families, type signatures, bound checks and fuzzing campaigns
for height-two ideals of quadrics."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .ideal import Ideal, IdealError, linear_change
from .linmat import (AddFirstColumn, ColumnCombine, LinearMatrix, Permute, RowOp,
                     ideal_from_minors, is_one_generic, rank)
from .resolution import minimal_free_resolution
from .ring import Polynomial, Ring, random_linear_form, monomials_of_degree

REJECTION_BUDGET = 50

FAMILIES = ("generic", "in-linear-prime", "in-(x,q)", "in-scroll", "two-linear-primes",
            "multiple-structure", "one-generic", "canonical-form-type")


class GenerationError(RuntimeError):
    pass


class ClassificationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# named ideals

def tight_family(n: int, field=None) -> Ideal:
    """(x^2, y^2, a1j*x + a2j*y for j = 1..n-2), pd(R/I) = 2n - 2."""
    if not isinstance(n, int) or n < 2:
        raise ValueError("tight_family needs an integer n >= 2")
    names = ["x", "y"] + [f"a{r}{j}" for j in range(1, n - 1) for r in (1, 2)]
    R = Ring(names, field)
    x, y = R.var("x"), R.var("y")
    gens = [x * x, y * y] + [R.var(f"a1{j}") * x + R.var(f"a2{j}") * y for j in range(1, n - 1)]
    return Ideal(R, gens)


def scroll_ring(field=None, extra: int = 0) -> Ring:
    return Ring(["x0", "x1", "x2", "x3"] + [f"z{i}" for i in range(1, extra + 1)], field)


def scroll_matrix(R: Ring | None = None) -> list[list[Polynomial]]:
    R = R or scroll_ring()
    v = [R.var(f"x{i}") for i in range(4)]
    return [[v[0], v[1], v[2]], [v[1], v[2], v[3]]]


def scroll_ideal(R: Ring | None = None) -> Ideal:
    """2x2 minors of [[x0,x1,x2],[x1,x2,x3]] (twisted cubic, e = 3)."""
    R = R or scroll_ring()
    (a, b, c), (d, e, f) = scroll_matrix(R)
    return Ideal(R, [a * e - b * d, a * f - c * d, b * f - c * e])


def linear_ring(nvars: int, field=None) -> Ring:
    """Variables x, y, a1, a2, ... (nvars in total)."""
    if nvars < 2:
        raise ValueError("need at least two variables")
    return Ring(["x", "y"] + [f"a{i}" for i in range(1, nvars - 1)], field)


def one_generic_instance(n: int, seed: int, nvars: int | None = None, field=None) -> LinearMatrix:
    """Random 2 x (n+1) matrix with first column (x, y), certified 1-generic."""
    if n < 1:
        raise ValueError("n must be at least 1")
    nvars = nvars if nvars is not None else n + 3
    R = linear_ring(nvars, field)
    rng = random.Random(seed)
    for _ in range(REJECTION_BUDGET):
        rows = [[R.var("x")], [R.var("y")]]
        for _ in range(n):
            for r in rows:
                r.append(random_linear_form(R, rng))
        M = LinearMatrix(R, rows)
        if is_one_generic(M):
            return M
    raise GenerationError(f"no 1-generic 2x{n + 1} matrix in {nvars} variables after {REJECTION_BUDGET} tries")


# ---------------------------------------------------------------------------
# random families

@dataclass(frozen=True)
class FuzzConfig:
    seed: int = 0
    trials: int = 1
    n_range: tuple = (3, 5)
    variables: int = 8
    characteristic: int = 32003
    family: str = "generic"

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        lo, hi = self.n_range
        if lo < 2 or hi < lo:
            raise ValueError(f"bad n range {lo}..{hi}")
        if self.family not in FAMILIES and self.family != "mixed":
            raise ValueError(f"unknown family {self.family!r}")

    def instance_seed(self, i: int) -> int:
        return (self.seed * 1_000_003 + i * 7919 + 17) % (1 << 62)


@dataclass
class Instance:
    family: str
    n: int
    seed: int
    ideal: Ideal
    primes: list = field(default_factory=list)
    matrix: LinearMatrix | None = None
    detail: str = ""


def _random_quadric(R: Ring, rng: random.Random, support: Sequence[str] | None = None) -> Polynomial:
    names = list(support or R.names)
    idx = [R.index[v] for v in names]
    d = {}
    for m in monomials_of_degree(R, 2, idx):
        d[m] = R.field.random_element(rng)
    return R.from_dict(d)


def _combine(gens: list[Polynomial], rng: random.Random) -> list[Polynomial]:
    """Random invertible recombination of a list of generators."""
    K = gens[0].ring.field
    k = len(gens)
    while True:
        A = [[K.random_element(rng) for _ in range(k)] for _ in range(k)]
        if rank(A, K) == k:
            break
    out = []
    for row in A:
        acc = gens[0].ring.zero()
        for c, g in zip(row, gens):
            if c:
                acc = acc + g.scale(c)
        out.append(acc)
    return out


def _random_coordinates(R: Ring, rng: random.Random) -> list[Polynomial]:
    """Images of the variables under a random invertible linear change."""
    K = R.field
    N = R.nvars
    while True:
        A = [[K.random_element(rng) for _ in range(N)] for _ in range(N)]
        if rank(A, K) == N:
            return linear_change(R, A)


def quadric_rank(q: Polynomial) -> int:
    """Rank of the symmetric Gram matrix of a quadric (characteristic != 2)."""
    R = q.ring
    K = R.field
    if K.p == 2:
        raise ValueError("quadric rank is not defined in characteristic 2")
    N = R.nvars
    G = [[K(0)] * N for _ in range(N)]
    half = K.inv(K(2))
    for m, c in q.terms:
        e = R.exponents(m)
        idx = [i for i, v in enumerate(e) for _ in range(v)]
        i, j = idx
        if i == j:
            G[i][i] = K(G[i][i] + c)
        else:
            G[i][j] = K(G[i][j] + c * half)
            G[j][i] = K(G[j][i] + c * half)
    return rank(G, K)


def _sparse_linear_form(R: Ring, rng: random.Random) -> Polynomial:
    """Random nonzero linear form supported on one to three variables."""
    k = rng.choice((1, 1, 2, 3))
    return random_linear_form(R, rng, support=rng.sample(R.names, min(k, R.nvars)))


def _make(family: str, n: int, rng: random.Random, nvars: int, char: int) -> Instance:
    if family == "generic":
        R = linear_ring(nvars, char)
        gens = []
        monos = monomials_of_degree(R, 2)
        for _ in range(n):
            k = rng.randint(1, 3)
            d = {m: R.field.random_element(rng, nonzero=True) for m in rng.sample(monos, k)}
            gens.append(R.from_dict(d))
        return Instance(family, n, 0, Ideal(R, gens))
    if family == "in-linear-prime":
        R = linear_ring(nvars, char)
        x, y = R.var("x"), R.var("y")
        gens = [x * _sparse_linear_form(R, rng) + y * _sparse_linear_form(R, rng) for _ in range(n)]
        return Instance(family, n, 0, Ideal(R, gens), primes=[Ideal(R, [x, y])])
    if family in ("in-(x,q)", "two-linear-primes"):
        R = linear_ring(max(nvars, 4), char)
        x = R.var("x")
        if family == "in-(x,q)":
            rest = [v for v in R.names if v != "x"]
            while True:
                q = _random_quadric(R, rng, rest)
                if quadric_rank(q) >= 3:
                    break
            primes = [Ideal(R, [x, q])]
        else:
            y, z = R.var("y"), R.var("a1")
            q = y * z
            primes = [Ideal(R, [x, y]), Ideal(R, [x, z])]
        ells = [random_linear_form(R, rng) for _ in range(n)]
        gens = [q + x * ells[0]] + [x * e for e in ells[1:]]
        return Instance(family, n, 0, Ideal(R, _combine(gens, rng)), primes=primes)
    if family == "in-scroll":
        R = scroll_ring(char, max(nvars - 4, 0))
        images = _random_coordinates(R, rng)
        P = Ideal(R, [g.substitute(images) for g in scroll_ideal(R).generators])
        k = min(n, 3)
        gens = _combine(list(P.generators), rng)[:k]
        return Instance(family, k, 0, Ideal(R, gens), primes=[P])
    if family == "multiple-structure":
        R = linear_ring(max(nvars, 3), char)
        x, y = R.var("x"), R.var("y")
        u = x.scale(R.field.random_element(rng, nonzero=True)) + y.scale(R.field.random_element(rng))
        gens = [u * random_linear_form(R, rng) + _random_quadric(R, rng, ["x", "y"]) for _ in range(n)]
        return Instance(family, n, 0, Ideal(R, gens), primes=[Ideal(R, [x, y])])
    if family == "one-generic":
        M = one_generic_instance(n, rng.randrange(1 << 30), nvars=max(nvars, n + 3), field=char)
        return Instance(family, n, 0, ideal_from_minors(M), primes=[Ideal(M.ring, [M.x, M.y])], matrix=M)
    if family == "canonical-form-type":
        tag = rng.choice(["T1", "T2", "T3", "T4", "T5"])
        M = canonical_shape_matrix(tag, n, rng, max(nvars, n + 3), char)
        return Instance(family, n, 0, ideal_from_minors(M), primes=[Ideal(M.ring, [M.x, M.y])],
                        matrix=M, detail=tag)
    raise ValueError(f"unknown family {family!r}")


def canonical_shape_matrix(tag: str, n: int, rng: random.Random, nvars: int, char=None,
                           scramble: bool = True) -> LinearMatrix:
    """Random 2 x (n+1) matrix with the zero pattern of a canonical shape,
    optionally disguised by random ideal-preserving operations."""
    R = linear_ring(nvars, char)
    K = R.field
    rows = [[R.var("x")], [R.var("y")]]
    for _ in range(n):
        for r in rows:
            r.append(_sparse_linear_form(R, rng))
    zeros = {"T1": [], "T2": [(0, 1)], "T3": [(0, 1), (0, 2)], "T4": [(0, 1), (1, 2)],
             "T5": [(0, 1), (1, 2)]}[tag]
    for i, j in zeros:
        if j <= n:
            rows[i][j] = R.zero()
    if tag == "T5" and n >= 3:
        rows[1][3] = rows[0][3].scale(K.random_element(rng))
    M = LinearMatrix(R, rows)
    if scramble:
        ops = []
        while True:
            a, b, c, d = (K.random_element(rng) for _ in range(4))
            if K(a * d - b * c):
                ops.append(RowOp(a, b, c, d))
                break
        if n >= 2:
            j = rng.randint(1, n)
            coeffs = [(k, K.random_element(rng)) for k in range(1, n + 1)]
            coeffs = [(k, c if k != j else (c or K(1))) for k, c in coeffs]
            ops.append(ColumnCombine(j, tuple((k, c) for k, c in coeffs if c)))
        ops.append(AddFirstColumn(rng.randint(1, n), K.random_element(rng)))
        order = list(range(1, n + 1))
        rng.shuffle(order)
        ops.append(Permute(tuple(order)))
        for op in ops:
            M = op.apply(M)
    return M


def random_quadric_ideal(family: str, n: int, seed: int, config: FuzzConfig | None = None,
                         require_height: int | None = 2) -> Instance:
    """Seeded instance of a family with exactly n minimal quadric generators
    (and height 2 unless ``require_height`` is None), by rejection sampling."""
    config = config or FuzzConfig(family=family if family in FAMILIES else "generic")
    rng = random.Random(seed)
    for _ in range(REJECTION_BUDGET):
        inst = _make(family, n, rng, config.variables, config.characteristic)
        I = inst.ideal
        if len(I.generators) < inst.n:
            continue
        try:
            if I.is_zero() or not I.is_proper():
                continue
            if require_height is not None and I.height() != require_height:
                continue
        except IdealError:
            continue
        if len(I.minimal_generators()) != inst.n:
            continue
        inst.seed = seed
        return inst
    raise GenerationError(f"family {family}: no valid instance with n={n} after {REJECTION_BUDGET} tries")


# ---------------------------------------------------------------------------
# type signatures

@dataclass(frozen=True)
class TypeSignature:
    """Pairs (e_i, lambda_i) over the minimal primes of minimal height."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(tuple(p) for p in self.pairs)))
        for e, lam in self.pairs:
            if lam is not None and (e < 1 or lam < 1):
                raise ValueError("type entries must be positive")

    @classmethod
    def of(cls, es: Sequence[int], lams: Sequence[int]) -> "TypeSignature":
        if len(es) != len(lams):
            raise ValueError("e and lambda lists differ in length")
        return cls(tuple(zip(es, lams)))

    @classmethod
    def parse(cls, text: str) -> "TypeSignature":
        body = text.strip().strip("<>⟨⟩ ")
        es, lams = body.split(";")
        return cls.of([int(v) for v in es.split(",")], [int(v) for v in lams.split(",")])

    @property
    def resolved(self) -> bool:
        return all(lam is not None for _, lam in self.pairs)

    @property
    def total(self) -> int:
        return sum(e * lam for e, lam in self.pairs)

    def __str__(self):
        es = ",".join(str(e) for e, _ in self.pairs)
        ls = ",".join("?" if lam is None else str(lam) for _, lam in self.pairs)
        return f"<{es};{ls}>"


_TABLE = {
    ((1, 1),): ("2n-2", "linear prime"),
    ((2, 1),): ("n", "multiplicity-two prime"),
    ((1, 2),): ("n+2", "multiple structure on a linear prime"),
    ((1, 1), (1, 1)): ("n+1", "two linear primes"),
    ((3, 1),): ("2", "prime of minimal multiplicity"),
    ((1, 3),): ("n+2", "multiple structure on a linear prime"),
    ((1, 1), (2, 1)): ("n", "multiplicity-two prime"),
    ((1, 1), (1, 2)): ("n+1", "two linear primes"),
    ((1, 1), (1, 1), (1, 1)): ("n+1", "two linear primes"),
}

KNOWN_SIGNATURES = tuple(TypeSignature(k) for k in _TABLE)


def _eval_bound(expr: str, n: int) -> int:
    return {"2n-2": 2 * n - 2, "n": n, "n+1": n + 1, "n+2": n + 2, "2": 2}[expr]


def table_bound(sig: TypeSignature, n: int) -> int:
    """Projective-dimension bound for a type signature."""
    row = _TABLE.get(sig.pairs)
    if row is None:
        raise ValueError(f"unknown type signature {sig}")
    return _eval_bound(row[0], n)


def table_source(sig: TypeSignature) -> str:
    row = _TABLE.get(sig.pairs)
    if row is None:
        raise ValueError(f"unknown type signature {sig}")
    return row[1]


def table_maximum(n: int) -> int:
    return max(table_bound(s, n) for s in KNOWN_SIGNATURES)


def classify_type(I: Ideal, primes: Sequence[Ideal]) -> TypeSignature:
    """Type signature from caller-declared minimal primes of height two.

    e_i is the multiplicity of R/p_i; the local lengths come from
    e(R/I) = sum e_i * lambda_i (unique solution required for several
    primes, exact division for one)."""
    if not primes:
        raise ClassificationError("no primes declared")
    es = []
    for p in primes:
        if p.ring != I.ring:
            raise ClassificationError("declared prime lives in another ring")
        if not p.contains_ideal(I):
            raise ClassificationError(f"declared prime {p} does not contain the ideal")
        if p.height() != 2:
            raise ClassificationError(f"declared prime {p} does not have height two")
        es.append(p.multiplicity())
    if I.height() != 2:
        raise ClassificationError("the ideal does not have height two")
    # every minimal prime of height two must be declared: after removing the
    # declared components nothing of height two may remain
    rest = I
    for p in primes:
        rest = rest.saturation(p)
    if rest.is_proper() and rest.height() == 2:
        raise ClassificationError("the ideal has an undeclared minimal prime of height two")
    eI = I.multiplicity()
    if len(es) == 1:
        if eI % es[0]:
            raise ClassificationError(f"e(R/I) = {eI} is not a multiple of e(R/p) = {es[0]}")
        return TypeSignature.of(es, [eI // es[0]])
    sols = []

    def search(i, left, acc):
        if i == len(es):
            if left == 0:
                sols.append(list(acc))
            return
        lam = 1
        while es[i] * lam <= left - sum(es[i + 1:]):
            search(i + 1, left - es[i] * lam, acc + [lam])
            lam += 1

    search(0, eI, [])
    if not sols:
        raise ClassificationError(f"e(R/I) = {eI} is incompatible with the declared primes")
    if len(sols) > 1:
        return TypeSignature.of(es, [None] * len(es))
    return TypeSignature.of(es, sols[0])


# ---------------------------------------------------------------------------
# bound verification

@dataclass
class BoundReport:
    instance: str
    n: int
    h: int
    pd: int
    bound: int | None
    source: str
    passed: bool | None
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Invariants:
    n: int
    h: int
    pd: int
    e: int | None
    betti: list


def invariants(I: Ideal) -> Invariants:
    res = minimal_free_resolution(I)
    h = I.height() if not I.is_zero() else 0
    e = I.multiplicity() if I.is_homogeneous() else None
    return Invariants(res.betti.total(1), h, res.pd, e, res.betti.triples())


def verify_main_bound(I: Ideal, instance: str = "", inv: Invariants | None = None) -> BoundReport:
    """pd(R/I) <= 2n - 2 with n the minimal number of generators."""
    inv = inv or invariants(I)
    if inv.h != 2:
        return BoundReport(instance, inv.n, inv.h, inv.pd, None, "main bound", None,
                           "precondition: height is not two")
    bound = 2 * inv.n - 2
    return BoundReport(instance, inv.n, inv.h, inv.pd, bound, "main bound", inv.pd <= bound)


CASE_BOUNDS = {
    "in-scroll": [("2", "prime of minimal multiplicity")],
    "in-(x,q)": [("n", "multiplicity-two prime")],
    "two-linear-primes": [("n", "two linear primes"), ("n+1", "two linear primes (table)")],
    "multiple-structure": [("n+2", "multiple structure on a linear prime")],
    "one-generic": [("n", "1-generic representation"), ("n+1", "1-generic representation (table)")],
    "in-linear-prime": [("2n-2", "linear prime")],
    "canonical-form-type": [("2n-2", "linear prime")],
}


def verify_case_bounds(I: Ideal, context: str, instance: str = "",
                       inv: Invariants | None = None) -> list[BoundReport]:
    """Family-specific bounds for an ideal built under a declared hypothesis."""
    inv = inv or invariants(I)
    out = []
    for expr, source in CASE_BOUNDS.get(context, []):
        bound = _eval_bound(expr, inv.n)
        note = ""
        if inv.h != 2:
            out.append(BoundReport(instance, inv.n, inv.h, inv.pd, None, source, None,
                                   "precondition: height is not two"))
            continue
        if context == "in-scroll":
            note = "exact value 2 expected"
            passed = inv.pd == 2
        else:
            passed = inv.pd <= bound
        out.append(BoundReport(instance, inv.n, inv.h, inv.pd, bound, source, passed, note))
    return out


def essential_variable_count(I: Ideal) -> int:
    """Dimension of the span of the first partial derivatives of the
    quadric generators: the least number of linear forms needed to write I."""
    R = I.ring
    if R.field.p == 2:
        raise ValueError("essential variable count is unsupported in characteristic 2")
    rows = []
    for f in I.generators:
        if not f.is_homogeneous(2):
            raise ValueError(f"{f} is not a quadric")
        for v in range(R.nvars):
            d = f.derivative(v)
            if d:
                rows.append(d.linear_coefficients())
    return rank(rows, R.field) if rows else 0


@dataclass
class Question2Record:
    pd: int
    h: int
    n: int
    bound: int
    slack: int
    flagged: bool

    def to_dict(self) -> dict:
        return asdict(self)


def explore_question2(I: Ideal, inv: Invariants | None = None) -> Question2Record:
    """Slack h(n-h+1) - pd for an ideal of quadrics; negative slack is flagged."""
    inv = inv or invariants(I)
    bound = inv.h * (inv.n - inv.h + 1)
    slack = bound - inv.pd
    return Question2Record(inv.pd, inv.h, inv.n, bound, slack, slack < 0)


# ---------------------------------------------------------------------------
# fuzzing

def _trial(args):
    config, i = args
    from .documents import IdealDocument
    seed = config.instance_seed(i)
    rng = random.Random(seed)
    lo, hi = config.n_range
    n = rng.randint(lo, hi)
    family = config.family
    if family == "mixed":
        family = rng.choice(["generic", "in-linear-prime", "canonical-form-type"])
    rec = {"index": i, "seed": seed, "family": family, "n_requested": n}
    try:
        inst = random_quadric_ideal(family, n, seed, config)
    except GenerationError as exc:
        rec["status"] = "generation-error"
        rec["error"] = str(exc)
        return rec
    I = inst.ideal
    inv = invariants(I)
    rec.update({"status": "ok", "n": inv.n, "h": inv.h, "pd": inv.pd, "e": inv.e})
    failures = []
    main = verify_main_bound(I, f"{i}", inv)
    if main.passed is False:
        failures.append("main bound")
    if inv.h == 2 and inv.n >= 3 and inv.e is not None and inv.e > 3:
        failures.append("multiplicity ceiling")
    for r in verify_case_bounds(I, inst.family, f"{i}", inv):
        if r.passed is False and "(table)" not in r.source:
            failures.append(r.source)
    q2 = explore_question2(I, inv)
    rec["slack"] = q2.slack
    rec["failures"] = failures
    if failures or q2.flagged:
        rec["document"] = IdealDocument.from_ideal(I, primes=inst.primes, matrix=inst.matrix).text()
    return rec


def fuzz_campaign(config: FuzzConfig, jobs: int = 1) -> dict:
    """Run a seeded campaign; the summary does not depend on ``jobs``."""
    tasks = [(config, i) for i in range(config.trials)]
    if jobs > 1 and len(tasks) > 1:
        from multiprocessing import get_context
        with get_context("spawn").Pool(jobs) as pool:
            records = pool.map(_trial, tasks, chunksize=1)
    else:
        records = [_trial(t) for t in tasks]
    ok = [r for r in records if r["status"] == "ok"]
    max_pd: dict = {}
    for r in ok:
        key = str(r["n"])
        max_pd[key] = max(max_pd.get(key, 0), r["pd"])
    violations = [r for r in ok if r["failures"]]
    mult_viol = [r["index"] for r in ok if "multiplicity ceiling" in r["failures"]]
    findings = [r for r in ok if r["slack"] < 0]
    return {
        "config": {"seed": config.seed, "trials": config.trials, "family": config.family,
                   "n_range": list(config.n_range), "variables": config.variables,
                   "characteristic": config.characteristic},
        "instances": len(records),
        "checked": len(ok),
        "generation_errors": len(records) - len(ok),
        "passed": len(ok) - len(violations),
        "failed": len(violations),
        "max_pd_by_n": dict(sorted(max_pd.items(), key=lambda kv: int(kv[0]))),
        "multiplicity_violations": mult_viol,
        "violations": violations,
        "question2_findings": findings,
        "records": [{k: v for k, v in r.items() if k != "document"} for r in records],
        "exit_code": 2 if violations else 0,
    }
