"""Parsing and serialization of germ descriptions.

Two input forms are accepted:

* expression text: three polynomial expressions in u and v separated by
  semicolons, e.g. ``"u; u^2+v^2; 2u^2+u v"``.  Grammar (whitespace is
  ignored everywhere)::

      germ        := expression ';' expression ';' expression
      expression  := sign? term (('+'|'-') term)*
      term        := coefficient? ('/' number)? monomial? ('/' number)?
      monomial    := ('u' ('^' int)?)? ('v' ('^' int)?)?
      coefficient := number          (decimal, fraction p/q, or exponent
                                      notation 1.5e-3)

  with implicit multiplication inside a term.  A term needs a coefficient
  or a monomial; total degree above the jet order is an error naming the
  offending monomial.

* a structured document ``{"order": N, "components": [[{"i","j","c"}...],
  ...]}`` with exact coefficients; expression text is sugar compiled to it.

Serialization uses ``repr`` floats (shortest round-trip form), so
``parse(serialize(germ))`` reproduces the germ bit-exactly.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import GermParseError
from .jets import MapGerm, TruncatedPoly2

DEFAULT_ORDER = 5

_DIGITS = set("0123456789")


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def location(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self.location(pos)
        raise GermParseError(message, line, col)

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self):
        ch = self.text[self.pos]
        self.pos += 1
        return ch

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_uint(sc):
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos] in _DIGITS:
        sc.pos += 1
    if sc.pos == start:
        sc.error("expected an integer")
    return int(sc.text[start : sc.pos])


def _parse_number(sc):
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos] in _DIGITS:
        sc.pos += 1
    if sc.pos < len(sc.text) and sc.text[sc.pos] == ".":
        sc.pos += 1
        while sc.pos < len(sc.text) and sc.text[sc.pos] in _DIGITS:
            sc.pos += 1
    if sc.pos == start or sc.text[start : sc.pos] == ".":
        sc.error("expected a number")
    if sc.pos < len(sc.text) and sc.text[sc.pos] in "eE":
        mark = sc.pos
        sc.pos += 1
        if sc.pos < len(sc.text) and sc.text[sc.pos] in "+-":
            sc.pos += 1
        if sc.pos < len(sc.text) and sc.text[sc.pos] in _DIGITS:
            while sc.pos < len(sc.text) and sc.text[sc.pos] in _DIGITS:
                sc.pos += 1
        else:
            sc.pos = mark  # the 'e' was not an exponent
    return float(sc.text[start : sc.pos])


def _parse_denominator(sc, ch_pos):
    value = _parse_number(sc)
    if value == 0.0:
        sc.error("division by zero in coefficient", ch_pos)
    return value


def _parse_term(sc, order, sign):
    """One term; returns (i, j, coefficient)."""
    term_start = sc.pos
    coeff = None
    sc.skip_ws()
    if sc.pos < len(sc.text) and (sc.text[sc.pos] in _DIGITS or sc.text[sc.pos] == "."):
        coeff = _parse_number(sc)
        sc.skip_ws()
        if sc.pos < len(sc.text) and sc.text[sc.pos] == "/":
            pos = sc.pos
            sc.pos += 1
            sc.skip_ws()
            coeff /= _parse_denominator(sc, pos)
    i = j = 0
    sc.skip_ws()
    if sc.pos < len(sc.text) and sc.text[sc.pos] == "u":
        sc.pos += 1
        i = 1
        sc.skip_ws()
        if sc.pos < len(sc.text) and sc.text[sc.pos] == "^":
            sc.pos += 1
            sc.skip_ws()
            i = _parse_uint(sc)
    sc.skip_ws()
    if sc.pos < len(sc.text) and sc.text[sc.pos] == "v":
        sc.pos += 1
        j = 1
        sc.skip_ws()
        if sc.pos < len(sc.text) and sc.text[sc.pos] == "^":
            sc.pos += 1
            sc.skip_ws()
            j = _parse_uint(sc)
    if coeff is None and i == 0 and j == 0:
        sc.error("expected a term (coefficient or monomial)", term_start)
    sc.skip_ws()
    if (i or j) and sc.pos < len(sc.text) and sc.text[sc.pos] == "/":
        pos = sc.pos
        sc.pos += 1
        sc.skip_ws()
        den = _parse_denominator(sc, pos)
        coeff = (1.0 if coeff is None else coeff) / den
    if i + j > order:
        mono = ("u" if i == 1 else f"u^{i}" if i else "") + ("v" if j == 1 else f"v^{j}" if j else "")
        sc.error(f"monomial {mono} exceeds the jet order {order}", term_start)
    return i, j, sign * (1.0 if coeff is None else coeff)


def _parse_expression(sc, order):
    coeffs = np.zeros((order + 1, order + 1))
    sign = 1.0
    ch = sc.peek()
    if ch and ch in "+-":
        sc.advance()
        sign = -1.0 if ch == "-" else 1.0
    i, j, c = _parse_term(sc, order, sign)
    coeffs[i, j] += c
    while True:
        ch = sc.peek()
        if ch and ch in "+-":
            sc.advance()
            i, j, c = _parse_term(sc, order, -1.0 if ch == "-" else 1.0)
            coeffs[i, j] += c
        elif ch in (";", ""):
            return TruncatedPoly2(order, coeffs)
        else:
            sc.error(f"unexpected character {ch!r}")


def parse_germ_text(text, order=DEFAULT_ORDER):
    """Parse three semicolon-separated polynomial expressions into a germ."""
    sc = _Scanner(text)
    comps = [_parse_expression(sc, order)]
    while sc.peek() == ";":
        sc.advance()
        comps.append(_parse_expression(sc, order))
    if not sc.at_end():
        sc.error(f"unexpected character {sc.peek()!r}")
    if len(comps) != 3:
        sc.error(f"expected 3 components separated by ';', got {len(comps)}")
    for comp in comps:
        if comp.coeffs[0, 0] != 0.0:
            sc.error("germ components must have no constant term (germ is based at the origin)")
    return MapGerm(tuple(comps))


def parse_germ_doc(doc, order=None):
    """Parse the structured document form ``{"order": N, "components": ...}``."""
    if not isinstance(doc, dict):
        raise GermParseError("structured germ must be a JSON object")
    n = doc.get("order", DEFAULT_ORDER) if order is None else order
    if not isinstance(n, int) or n < 1:
        raise GermParseError("'order' must be a positive integer")
    comps_spec = doc.get("components")
    if not isinstance(comps_spec, list) or len(comps_spec) != 3:
        raise GermParseError("'components' must be a list of three term lists")
    comps = []
    for terms in comps_spec:
        coeffs = np.zeros((n + 1, n + 1))
        for term in terms:
            try:
                i, j, c = int(term["i"]), int(term["j"]), float(term["c"])
            except (KeyError, TypeError, ValueError) as exc:
                raise GermParseError(f"malformed term {term!r}") from exc
            if i < 0 or j < 0 or i + j > n:
                raise GermParseError(f"monomial u^{i}v^{j} exceeds the jet order {n}")
            coeffs[i, j] += c
        comps.append(TruncatedPoly2(n, coeffs))
    for comp in comps:
        if comp.coeffs[0, 0] != 0.0:
            raise GermParseError("germ components must have no constant term")
    return MapGerm(tuple(comps))


def parse_germ(source, order=None):
    """Parse expression text, a JSON string, or a structured dict."""
    if isinstance(source, dict):
        return parse_germ_doc(source, order)
    text = source.strip()
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GermParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        return parse_germ_doc(doc, order)
    return parse_germ_text(source, DEFAULT_ORDER if order is None else order)


def _format_monomial(i, j):
    return ("u" if i == 1 else f"u^{i}" if i else "") + ("v" if j == 1 else f"v^{j}" if j else "")


def serialize_component(poly):
    terms = sorted(poly.terms(), key=lambda t: (t[0] + t[1], t[1]))
    if not terms:
        return "0"
    parts = []
    for i, j, c in terms:
        mono = _format_monomial(i, j)
        mag = abs(c)
        body = mono if (mono and mag == 1.0) else (repr(mag) + mono)
        parts.append(("-" if c < 0 else "+", body))
    sign0, body0 = parts[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def serialize_germ(germ):
    return "; ".join(serialize_component(c) for c in germ.components)


def germ_to_doc(germ):
    """Canonical structured document (terms sorted by exponents)."""
    comps = []
    for comp in germ.components:
        comps.append(
            [{"i": i, "j": j, "c": c} for i, j, c in sorted(comp.terms(), key=lambda t: (t[0], t[1]))]
        )
    return {"order": germ.order, "components": comps}


def canonical_json(germ):
    return json.dumps(germ_to_doc(germ), sort_keys=True, separators=(",", ":"))


def input_hash(germ):
    """Hash of the canonical serialized germ; keys report provenance."""
    return hashlib.sha256(canonical_json(germ).encode()).hexdigest()
