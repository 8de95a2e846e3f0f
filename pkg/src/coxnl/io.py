"""Line-oriented text formats for fans, polynomials and ideals.

Fan file::

    fan d=3 r=4
    ray 0 1 0 0
    ...
    cone 0 1 2

Polynomial file (one term per line, exponents in ray order)::

    poly class=4
    1 : 4 0 0 0
    -3/2 : 0 1 3 0

Ideal file: ``ideal n=<count>`` followed by ``count`` polynomial blocks.
Blank lines and lines starting with ``#`` are ignored.  Writers emit terms
in increasing monomial order, so reading and writing round-trips exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .cox_ring import CoxRing, GradedPolynomial
from .fan import Fan
from .graded_ideal import GradedIdeal


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            out.append((n, s))
    return out


def _ints(tokens: list[str], n: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", n) from None


# -- fans ------------------------------------------------------------------------------

_FAN_HEADER = re.compile(r"^fan d=(\d+) r=(\d+)$")


def parse_fan(text: str) -> Fan:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty fan file")
    n, head = lines[0]
    m = _FAN_HEADER.match(head)
    if not m:
        raise FormatError("expected header 'fan d=<int> r=<int>'", n)
    d, r = int(m.group(1)), int(m.group(2))
    rays: dict[int, list[int]] = {}
    cones = []
    for n, s in lines[1:]:
        tok = s.split()
        if tok[0] == "ray":
            vals = _ints(tok[1:], n)
            if len(vals) != d + 1:
                raise FormatError(f"ray line needs an index and {d} coordinates", n)
            if vals[0] in rays or not 0 <= vals[0] < r:
                raise FormatError(f"bad or repeated ray index {vals[0]}", n)
            rays[vals[0]] = vals[1:]
        elif tok[0] == "cone":
            idx = _ints(tok[1:], n)
            if len(idx) != d or any(not 0 <= i < r for i in idx):
                raise FormatError(f"cone line needs {d} ray indices in [0, {r})", n)
            cones.append(idx)
        else:
            raise FormatError(f"unknown record {tok[0]!r}", n)
    if sorted(rays) != list(range(r)):
        raise FormatError(f"expected rays 0..{r - 1}")
    return Fan([rays[i] for i in range(r)], cones)


def format_fan(fan: Fan) -> str:
    out = [f"fan d={fan.d} r={fan.r}"]
    out += [f"ray {i} " + " ".join(map(str, v)) for i, v in enumerate(fan.rays)]
    out += ["cone " + " ".join(map(str, c)) for c in fan.cones]
    return "\n".join(out) + "\n"


def read_fan(path) -> Fan:
    return parse_fan(Path(path).read_text())


# -- polynomials -----------------------------------------------------------------------

_POLY_HEADER = re.compile(r"^poly class=(-?\d+(?:,-?\d+)*)$")
_COEF = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def _parse_poly_lines(lines: list[tuple[int, str]], ring: CoxRing) -> GradedPolynomial:
    n, head = lines[0]
    m = _POLY_HEADER.match(head)
    if not m:
        raise FormatError("expected header 'poly class=<c1,...>'", n)
    coords = [int(c) for c in m.group(1).split(",")]
    try:
        degree = ring.fan.from_class(coords)
    except ValueError as e:
        raise FormatError(str(e), n) from None
    terms: dict[tuple, Fraction] = {}
    for n, s in lines[1:]:
        if ":" not in s:
            raise FormatError("expected '<num>/<den> : e_1 ... e_r'", n)
        c, e = s.split(":", 1)
        mc = _COEF.match(c.strip())
        if not mc or mc.group(2) == "0":
            raise FormatError(f"malformed coefficient {c.strip()!r}", n)
        exps = _ints(e.split(), n)
        if len(exps) != ring.r or min(exps) < 0:
            raise FormatError(f"expected {ring.r} non-negative exponents", n)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + Fraction(
            int(mc.group(1)), int(mc.group(2) or 1))
    return GradedPolynomial(ring, terms, degree)


def parse_poly(text: str, ring: CoxRing) -> GradedPolynomial:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty polynomial file")
    return _parse_poly_lines(lines, ring)


def format_poly(f: GradedPolynomial) -> str:
    out = [f"poly class={f.degree.label()}"]
    for m in sorted(f.terms):
        c = f.terms[m]
        coef = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        out.append(f"{coef} : " + " ".join(map(str, m)))
    return "\n".join(out) + "\n"


def read_poly(path, ring: CoxRing) -> GradedPolynomial:
    return parse_poly(Path(path).read_text(), ring)


# -- ideals ----------------------------------------------------------------------------

_IDEAL_HEADER = re.compile(r"^ideal n=(\d+)$")


def parse_ideal(text: str, ring: CoxRing) -> GradedIdeal:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty ideal file")
    n, head = lines[0]
    m = _IDEAL_HEADER.match(head)
    if not m:
        raise FormatError("expected header 'ideal n=<count>'", n)
    count = int(m.group(1))
    starts = [i for i, (_, s) in enumerate(lines) if s.startswith("poly ")]
    if len(starts) != count:
        raise FormatError(f"header announces {count} polynomials, found {len(starts)}")
    if starts and starts[0] != 1:
        raise FormatError("terms before the first 'poly' header", lines[1][0])
    gens = []
    for a, b in zip(starts, starts[1:] + [len(lines)]):
        gens.append(_parse_poly_lines(lines[a:b], ring))
    return GradedIdeal(ring, gens)


def format_ideal(I: GradedIdeal) -> str:
    return f"ideal n={len(I.generators)}\n" + "".join(format_poly(g) for g in I.generators)


def read_ideal(path, ring: CoxRing) -> GradedIdeal:
    return parse_ideal(Path(path).read_text(), ring)


def fixtures_dir() -> Path:
    return Path(__file__).resolve().parent / "fixtures"


def fixture(name: str) -> Path:
    p = fixtures_dir() / name
    if not p.exists():
        raise FileNotFoundError(f"no bundled fixture {name!r}")
    return p
