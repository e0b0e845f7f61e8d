"""Text documents describing an ideal, and JSON reports.

Document syntax::

    # comment
    ring GF(32003)[x, y, a, b]      # or QQ[...]; field may be omitted
    order grevlex                   # optional, grevlex or lex
    gens: x^2, y^2,
      a*x + b*y                     # indented lines continue a section
    primes:
      x, y                          # one declared prime per line
    matrix:
      x, 0, a                       # one matrix row per line
      y, b, 0

Sections may appear once each; ``ring`` and ``gens`` are required.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

from .ideal import Ideal
from .linmat import LinearMatrix
from .parsing import ParseError, parse_polynomial
from .ring import DEFAULT_CHARACTERISTIC, Field, Ring, RingError

SCHEMA_VERSION = 1
CHAR_ENV = "QUADPD_CHARACTERISTIC"

_SECTIONS = ("ring", "order", "gens", "primes", "matrix")
_RING_RE = re.compile(r"^\s*(?:(GF\(\s*(\d+)\s*\)|QQ))?\s*\[(.*)\]\s*$")


def default_characteristic() -> int:
    raw = os.environ.get(CHAR_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_CHARACTERISTIC
    try:
        p = int(raw)
        Field(p)
    except (ValueError, RingError):
        raise ParseError(f"environment variable {CHAR_ENV}={raw!r} is not 0 or a prime", 0, 0)
    return p


@dataclass
class IdealDocument:
    ring: Ring
    gens: list
    primes: list = field(default_factory=list)      # list of lists of Polynomial
    matrix: list | None = None                        # two rows of Polynomial

    @property
    def ideal(self) -> Ideal:
        return Ideal(self.ring, self.gens)

    def prime_ideals(self) -> list[Ideal]:
        return [Ideal(self.ring, p) for p in self.primes]

    def linear_matrix(self) -> LinearMatrix:
        if self.matrix is None:
            raise ParseError("document has no matrix section", 0, 0)
        return LinearMatrix(self.ring, self.matrix)

    @classmethod
    def from_ideal(cls, I: Ideal, primes=(), matrix: LinearMatrix | None = None) -> "IdealDocument":
        return cls(I.ring, list(I.generators), [list(p.generators) for p in primes],
                   [list(r) for r in matrix.rows] if matrix is not None else None)

    def text(self) -> str:
        R = self.ring
        lines = [f"ring {R.field.name}[{', '.join(R.names)}]", f"order {R.order}",
                 "gens: " + ", ".join(str(g) for g in self.gens)]
        if self.primes:
            lines.append("primes:")
            lines += ["  " + ", ".join(str(g) for g in p) for p in self.primes]
        if self.matrix is not None:
            lines.append("matrix:")
            lines += ["  " + ", ".join(str(e) for e in row) for row in self.matrix]
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return isinstance(other, IdealDocument) and self.text() == other.text()


def _split_items(text: str, line: int, col0: int):
    """Split at top-level commas, yielding (item, column)."""
    depth = 0
    start = 0
    out = []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append((text[start:i], col0 + start))
            start = i + 1
    out.append((text[start:], col0 + start))
    items = []
    for s, c in out:
        stripped = s.strip()
        if not stripped:
            raise ParseError("empty list item", line, c)
        items.append((stripped, c + (len(s) - len(s.lstrip()))))
    return items


def _parse_ring(text: str, line: int, col: int) -> Ring:
    m = _RING_RE.match(text)
    if not m:
        raise ParseError("expected ring header like GF(32003)[x, y] or QQ[x, y]", line, col)
    if m.group(1) is None:
        p = default_characteristic()
    elif m.group(2) is not None:
        p = int(m.group(2))
    else:
        p = 0
    names = [v.strip() for v in m.group(3).split(",")]
    try:
        if p != 0:
            Field(p)
        return Ring(names, p)
    except RingError as exc:
        raise ParseError(str(exc), line, col)


def parse_document(text: str) -> IdealDocument:
    """Parse a document, raising ParseError with line:column positions."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        if raw[0] in " \t":
            if current is None:
                raise ParseError("indented line outside a section", lineno, 1)
            sections[current].append((body, lineno, 1))
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_-]*)\s*(:?)", body)
        if not m:
            raise ParseError(f"expected a section keyword, got {body.split()[0]!r}", lineno, 1)
        key = m.group(1)
        if key not in _SECTIONS:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        if key in sections:
            raise ParseError(f"duplicate section {key!r}", lineno, 1)
        rest = body[m.end():]
        col = m.end() + 1
        sections[key] = []
        if rest.strip():
            lead = len(rest) - len(rest.lstrip())
            sections[key].append((rest.strip(), lineno, col + lead))
        current = key
    if "ring" not in sections or not sections["ring"]:
        raise ParseError("missing ring header", 1, 1)
    (rtext, rl, rc), *extra = sections["ring"]
    if extra:
        raise ParseError("ring header must be a single line", extra[0][1], 1)
    ring = _parse_ring(rtext, rl, rc)
    if "order" in sections:
        ents = sections["order"]
        if len(ents) != 1 or ents[0][0] not in ("grevlex", "lex"):
            where = ents[0] if ents else (None, rl, 1)
            raise ParseError("order must be grevlex or lex", where[1], where[2])
        ring = ring.with_order(ents[0][0])
    if "gens" not in sections:
        raise ParseError("missing gens section", 1, 1)

    if not sections["gens"]:
        raise ParseError("gens section is empty", 1, 1)
    gens = []
    last = len(sections["gens"]) - 1
    for k, (chunk, ln, col) in enumerate(sections["gens"]):
        if k < last and chunk.endswith(","):
            chunk = chunk[:-1]      # a trailing comma continues on the next line
        gens += [parse_polynomial(ring, it, ln, c) for it, c in _split_items(chunk, ln, col)]
    primes = []
    for chunk, ln, col in sections.get("primes", []):
        primes.append([parse_polynomial(ring, it, ln, c) for it, c in _split_items(chunk, ln, col)])
    matrix = None
    if "matrix" in sections:
        rows = []
        for chunk, ln, col in sections["matrix"]:
            rows.append(([parse_polynomial(ring, it, ln, c) for it, c in _split_items(chunk, ln, col)], ln))
        if len(rows) != 2:
            ln = rows[-1][1] if rows else 1
            raise ParseError("matrix section needs exactly two rows", ln, 1)
        if len(rows[0][0]) != len(rows[1][0]):
            raise ParseError("matrix rows have different lengths", rows[1][1], 1)
        for row, ln in rows:
            for e in row:
                if e and not e.is_homogeneous(1):
                    raise ParseError(f"matrix entry {e} is not a linear form", ln, 1)
        matrix = [rows[0][0], rows[1][0]]
    return IdealDocument(ring, gens, primes, matrix)


def dumps_report(report: dict) -> str:
    """Canonical JSON encoding with sorted keys and a schema version."""
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(report)
    return json.dumps(payload, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(v):
    from fractions import Fraction
    if isinstance(v, Fraction):
        return str(v)
    raise TypeError(f"cannot encode {type(v).__name__}")


FIXTURES = ("tight_n4", "t1", "t2", "t3_coefficients", "t4", "t5", "scroll")


def fixture_text(name: str) -> str:
    """Text of a shipped example document."""
    from importlib.resources import files
    if name not in FIXTURES:
        raise KeyError(f"no fixture named {name!r}")
    return files("quadpd").joinpath("fixtures", f"{name}.txt").read_text(encoding="utf-8")
