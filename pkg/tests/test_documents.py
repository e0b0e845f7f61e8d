import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quadpd.documents import (CHAR_ENV, FIXTURES, IdealDocument, default_characteristic, dumps_report,
                              fixture_text, parse_document)
from quadpd.lab import tight_family
from quadpd.parsing import ParseError
from quadpd.ring import Ring

from helpers import random_quadrics


def test_minimal_document():
    doc = parse_document("ring GF(7)[x, y]\ngens: x^2, y^2\n")
    assert len(doc.gens) == 2
    assert doc.ring.field.p == 7
    assert doc.primes == [] and doc.matrix is None


def test_tight_fixture_is_the_tight_family():
    doc = parse_document(fixture_text("tight_n4"))
    I = tight_family(4)
    assert doc.ring.names == I.ring.names
    assert doc.ideal == I


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_roundtrip(name):
    doc = parse_document(fixture_text(name))
    again = parse_document(doc.text())
    assert again == doc
    assert again.text() == doc.text()


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_roundtrip_random(seed, k):
    R = Ring(["x", "y", "a", "b"])
    doc = IdealDocument(R, random_quadrics(R, k, seed), primes=[[R("x"), R("y")]])
    assert parse_document(doc.text()) == doc


def test_rational_field_and_lex_order():
    doc = parse_document("ring QQ[x, y]\norder lex\ngens: 1/2*x^2 - y\n")
    assert doc.ring.order == "lex" and doc.ring.field.p == 0
    assert doc.gens[0].lc == Fraction(1, 2)
    assert parse_document(doc.text()) == doc


def test_comments_and_continuations():
    text = "# header\nring GF(5)[x, y, z]   # three variables\ngens: x^2,\n  y^2,\n  z^2\n"
    assert len(parse_document(text).gens) == 3


def _error(text):
    with pytest.raises(ParseError) as exc:
        parse_document(text)
    return exc.value


def test_undeclared_variable_position():
    e = _error("ring GF(7)[x, y]\ngens: x^2, y*z\n")
    assert "'z'" in e.message and (e.line, e.column) == (2, 14)


def test_structural_errors():
    assert "unknown key" in _error("ring GF(7)[x]\ngens: x\nideal: x\n").message
    e = _error("ring GF(7)[x]\ngens: x\ngens: x^2\n")
    assert "duplicate" in e.message and e.line == 3
    assert "missing ring" in _error("gens: x\n").message
    assert "missing gens" in _error("ring GF(7)[x]\n").message
    assert _error("ring GF(6)[x]\ngens: x\n").line == 1
    assert "empty list item" in _error("ring GF(7)[x]\ngens: x,,x\n").message
    assert "order" in _error("ring GF(7)[x]\norder revlex\ngens: x\n").message
    assert "indented" in _error("  x\nring GF(7)[x]\n").message


def test_matrix_errors():
    base = "ring GF(7)[x, y, a]\ngens: x*a\nmatrix:\n"
    assert "two rows" in _error(base + "  x, a\n").message
    assert "different lengths" in _error(base + "  x, a\n  y\n").message
    assert "linear" in _error(base + "  x, a^2\n  y, a\n").message


def test_default_characteristic_from_environment(monkeypatch):
    monkeypatch.setenv(CHAR_ENV, "101")
    assert default_characteristic() == 101
    assert parse_document("ring [x]\ngens: x\n").ring.field.p == 101
    monkeypatch.setenv(CHAR_ENV, "100")
    with pytest.raises(ParseError):
        default_characteristic()
    monkeypatch.delenv(CHAR_ENV)
    assert parse_document("ring [x]\ngens: x\n").ring.field.p == 32003


def test_report_encoding_is_canonical():
    text = dumps_report({"b": 1, "a": [Fraction(1, 2)]})
    data = json.loads(text)
    assert data == {"a": ["1/2"], "b": 1, "schema_version": 1}
    assert text == dumps_report({"a": [Fraction(1, 2)], "b": 1})


@given(st.text(max_size=80))
def test_parser_never_crashes(text):
    try:
        parse_document(text)
    except ParseError:
        pass


@given(st.lists(st.sampled_from(["ring GF(7)[x, y]", "gens: x^2", "primes:", "matrix:", "  x, y",
                                 "  y, x", "order lex", "# c", "gens: x*", "  ,", "ring QQ[x]"]),
                max_size=8))
def test_parser_never_crashes_on_shuffled_sections(lines):
    try:
        parse_document("\n".join(lines))
    except ParseError:
        pass
