"""Exact multivariate polynomial arithmetic over the rationals.

A ``Poly`` is a sparse sum of monomials with ``fractions.Fraction``
coefficients over a fixed, ordered tuple of variable names (the "ring").
No floating point is used anywhere: every verdict downstream of this module
is a statement about exact rational arithmetic.

Monomials are exponent tuples (one entry per ring variable).  Terms are kept
in a dict with no zero coefficients; printing orders terms in descending
graded-lex order, so ``str`` output is canonical and re-parses to an equal
polynomial.

The text grammar accepted by :func:`parse` (and produced by ``str``) is the
interchange format used by the case registry and the CLI: signed sums of
rational-coefficient monomials with ``^`` (or ``**``) powers, explicit ``*``
or juxtaposition for products, and parenthesised subexpressions, e.g. ::

    x1^4 + x2^4 + x3^4 + x0*x1*x2*x3 + x4*(x0^3 + x4^3)
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

Rat = Fraction
Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class RingMismatch(ValueError):
    """Raised when an operation mixes polynomials over different rings."""


class ParseError(ValueError):
    """Raised on malformed polynomial text."""


def _glex_key(mono: Monomial) -> tuple:
    return (sum(mono), mono)


class Poly:
    """Immutable sparse polynomial over ``Fraction`` coefficients.

    Instances are hashable and compare by (ring, terms).  All arithmetic
    returns new objects; nothing mutates ``terms`` after construction.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Sequence[str], terms: Mapping[Monomial, Scalar] | None = None):
        ring = tuple(ring)
        if len(set(ring)) != len(ring):
            raise ValueError(f"duplicate variable names in ring {ring}")
        n = len(ring)
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} has wrong arity for ring {ring}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            c = Fraction(coeff)
            if c:
                acc = clean.get(mono, Fraction(0)) + c
                if acc:
                    clean[mono] = acc
                else:
                    clean.pop(mono, None)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Poly is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, ring: Sequence[str]) -> "Poly":
        return cls(ring, {})

    @classmethod
    def const(cls, ring: Sequence[str], value: Scalar) -> "Poly":
        ring = tuple(ring)
        return cls(ring, {(0,) * len(ring): Fraction(value)})

    @classmethod
    def var(cls, ring: Sequence[str], name: str) -> "Poly":
        ring = tuple(ring)
        if name not in ring:
            raise ValueError(f"unknown variable {name!r} for ring {ring}")
        mono = tuple(1 if v == name else 0 for v in ring)
        return cls(ring, {mono: Fraction(1)})

    @classmethod
    def monomial(cls, ring: Sequence[str], exponents: Mapping[str, int], coeff: Scalar = 1) -> "Poly":
        ring = tuple(ring)
        unknown = set(exponents) - set(ring)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)} for ring {ring}")
        mono = tuple(int(exponents.get(v, 0)) for v in ring)
        return cls(ring, {mono: Fraction(coeff)})

    # ------------------------------------------------------------------
    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def min_degree(self) -> int:
        """Minimal total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return min(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.ring, {m: c for m, c in self.terms.items() if sum(m) == d})

    def coefficient(self, exponents: Mapping[str, int]) -> Fraction:
        mono = tuple(int(exponents.get(v, 0)) for v in self.ring)
        return self.terms.get(mono, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.ring), Fraction(0))

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.ring)
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.ring, used) if u)

    # ------------------------------------------------------------------
    # arithmetic

    def _check_ring(self, other: "Poly") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ring, other)
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            acc = out.get(m, Fraction(0)) + c
            if acc:
                out[m] = acc
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.ring, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Poly":
        return (-self) + other

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.ring, {m: c * v for m, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        self._check_ring(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                acc = out.get(m, Fraction(0)) + c1 * c2
                if acc:
                    out[m] = acc
                else:
                    out.pop(m, None)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self, var: str) -> "Poly":
        """Formal partial derivative with respect to ``var``."""
        if var not in self.ring:
            raise ValueError(f"unknown variable {var!r} for ring {self.ring}")
        i = self.ring.index(var)
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                dm = list(m)
                dm[i] -= 1
                out[tuple(dm)] = c * m[i]
        return Poly(self.ring, out)

    # ------------------------------------------------------------------
    # substitution and friends

    def substitute(self, assignment: Mapping[str, "Poly | Scalar"], ring: Sequence[str] | None = None) -> "Poly":
        """Exact composition: replace every ring variable by its image.

        ``assignment`` must cover every variable of the ring.  All ``Poly``
        values must share one target ring; scalars are coerced into it.  When
        every value is a scalar, ``ring`` selects the target (defaults to the
        source ring).
        """
        missing = set(self.ring) - set(assignment)
        if missing:
            raise ValueError(f"assignment missing variables {sorted(missing)}")
        target: tuple[str, ...] | None = tuple(ring) if ring is not None else None
        for v in self.ring:
            val = assignment[v]
            if isinstance(val, Poly):
                if target is None:
                    target = val.ring
                elif val.ring != target:
                    raise RingMismatch(f"assignment values over mixed rings: {target} vs {val.ring}")
        if target is None:
            target = self.ring
        images: dict[str, Poly] = {}
        for v in self.ring:
            val = assignment[v]
            images[v] = val if isinstance(val, Poly) else Poly.const(target, val)

        result = Poly.zero(target)
        powers: dict[tuple[str, int], Poly] = {}

        def power_of(v: str, e: int) -> Poly:
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] ** e
            return powers[key]

        for m, c in self.terms.items():
            term = Poly.const(target, c)
            for v, e in zip(self.ring, m):
                if e:
                    term = term * power_of(v, e)
            result = result + term
        return result

    def evaluate(self, values: Sequence[Scalar]) -> Fraction:
        if len(values) != len(self.ring):
            raise ValueError(f"expected {len(self.ring)} values, got {len(values)}")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for m, c in self.terms.items():
            prod = c
            for v, e in zip(vals, m):
                if e:
                    prod *= v**e
            total += prod
        return total

    def translate(self, point: Sequence[Scalar]) -> "Poly":
        """Shift the origin to ``point``: returns g with g(x) = f(x + point)."""
        if len(point) != len(self.ring):
            raise ValueError(f"expected {len(self.ring)} coordinates, got {len(point)}")
        assignment = {
            v: Poly.var(self.ring, v) + Fraction(p) for v, p in zip(self.ring, point)
        }
        return self.substitute(assignment)

    def jet(self, order: int) -> "Poly":
        """All terms of total degree <= order, exactly."""
        if order < 0:
            raise ValueError("jet order must be >= 0")
        return Poly(self.ring, {m: c for m, c in self.terms.items() if sum(m) <= order})

    # ------------------------------------------------------------------
    # canonical printing / equality

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order (the canonical order)."""
        return sorted(self.terms.items(), key=lambda t: _glex_key(t[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono_txt = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.ring, m) if e
            )
            neg = c < 0
            mag = -c if neg else c
            if mono_txt:
                body = mono_txt if mag == 1 else f"{mag}*{mono_txt}"
            else:
                body = str(mag)
            if i == 0:
                pieces.append(f"-{body}" if neg else body)
            else:
                pieces.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self.ring!r}, {str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h


# ----------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<pow>\*\*|\^)|(?P<op>[-+*()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        pos = m.end()
        if m.lastgroup == "pow":
            tokens.append(("^", "^"))
        elif m.lastgroup is not None:
            tokens.append((m.lastgroup, m.group(m.lastgroup)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]], ring: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def parse_expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        while tok is not None and tok[1] in "+-":
            if tok[1] == "-":
                sign = -sign
            self.next()
            tok = self.peek()
        result = self.parse_term() * sign
        while True:
            tok = self.peek()
            if tok is None or tok[1] not in "+-":
                break
            sign = 1
            while tok is not None and tok[1] in "+-":
                if tok[1] == "-":
                    sign = -sign
                self.next()
                tok = self.peek()
            result = result + self.parse_term() * sign
        return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None:
                break
            kind, val = tok
            if val == "*":
                self.next()
                result = result * self.parse_factor()
            elif kind in ("name", "number") or val == "(":
                # implicit multiplication by juxtaposition
                result = result * self.parse_factor()
            else:
                break
        return result

    def parse_factor(self) -> Poly:
        base = self.parse_base()
        tok = self.peek()
        if tok is not None and tok[0] == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok[0] != "number" or "/" in exp_tok[1]:
                raise ParseError(f"malformed exponent {exp_tok[1]!r}")
            base = base ** int(exp_tok[1])
        return base

    def parse_base(self) -> Poly:
        kind, val = self.next()
        if kind == "number":
            if "/" in val:
                num, den = val.split("/")
                return Poly.const(self.ring, Fraction(int(num), int(den)))
            return Poly.const(self.ring, int(val))
        if kind == "name":
            if val not in self.ring:
                raise ParseError(f"unknown variable {val!r} (ring is {self.ring})")
            return Poly.var(self.ring, val)
        if val == "(":
            inner = self.parse_expr()
            tok = self.next()
            if tok[1] != ")":
                raise ParseError("missing closing parenthesis")
            return inner
        if val == "-":
            return -self.parse_factor()
        raise ParseError(f"unexpected token {val!r}")


def parse(text: str, ring: Sequence[str]) -> Poly:
    """Parse polynomial text over the given ring.

    Raises :class:`ParseError` on empty input, unknown variables, or
    malformed syntax.  ``parse(str(p), p.ring) == p`` for every ``Poly``.
    """
    ring = tuple(ring)
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    parser = _Parser(tokens, ring)
    result = parser.parse_expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input at token {parser.peek()[1]!r}")
    return result


# ----------------------------------------------------------------------
# univariate utilities (used for restricted Jacobian systems and
# conjugate-point certificates; coefficients ascending by degree)

UnivPoly = list[Fraction]


def as_univariate(f: Poly, var: str) -> UnivPoly:
    """Coefficient list of a polynomial that only involves ``var``."""
    if var not in f.ring:
        raise ValueError(f"unknown variable {var!r}")
    i = f.ring.index(var)
    for m in f.terms:
        if any(e and j != i for j, e in enumerate(m)):
            raise ValueError(f"{f} is not univariate in {var!r}")
    deg = max((m[i] for m in f.terms), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in f.terms.items():
        coeffs[m[i]] = c
    return uv_trim(coeffs)


def uv_trim(c: UnivPoly) -> UnivPoly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def uv_degree(c: UnivPoly) -> int:
    return len(uv_trim(c)) - 1


def uv_eval(c: UnivPoly, x: Scalar) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(uv_trim(c)):
        acc = acc * Fraction(x) + coeff
    return acc


def uv_mul(a: UnivPoly, b: UnivPoly) -> UnivPoly:
    a, b = uv_trim(a), uv_trim(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return uv_trim(out)


def uv_divmod(a: UnivPoly, b: UnivPoly) -> tuple[UnivPoly, UnivPoly]:
    a, b = uv_trim(a), uv_trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        factor = r[-1] / b[-1]
        shift = len(r) - len(b)
        q[shift] = factor
        for i, cb in enumerate(b):
            r[shift + i] -= factor * cb
        r = uv_trim(r)
        if not r:
            break
    return uv_trim(q), uv_trim(r)


def uv_monic(c: UnivPoly) -> UnivPoly:
    c = uv_trim(c)
    if not c:
        return c
    lead = c[-1]
    return [x / lead for x in c]


def uv_gcd(a: UnivPoly, b: UnivPoly) -> UnivPoly:
    a, b = uv_trim(a), uv_trim(b)
    while b:
        _, r = uv_divmod(a, b)
        a, b = b, r
    return uv_monic(a)


def uv_derivative(c: UnivPoly) -> UnivPoly:
    return uv_trim([c[i] * i for i in range(1, len(c))])


def uv_squarefree_part(c: UnivPoly) -> UnivPoly:
    c = uv_trim(c)
    if uv_degree(c) < 1:
        return uv_monic(c)
    g = uv_gcd(c, uv_derivative(c))
    q, r = uv_divmod(c, g)
    assert not r
    return uv_monic(q)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def uv_rational_roots(c: UnivPoly) -> list[tuple[Fraction, int]]:
    """All rational roots with multiplicities, via the rational root theorem."""
    c = uv_trim(c)
    if uv_degree(c) < 1:
        return []
    roots: list[tuple[Fraction, int]] = []
    # extract powers of x
    k = 0
    while c and c[0] == 0:
        c = c[1:]
        k += 1
    if k:
        roots.append((Fraction(0), k))
    if uv_degree(c) < 1:
        return roots
    # clear denominators
    den = 1
    for x in c:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    content = 0
    for v in ints:
        content = gcd(content, v)
    ints = [v // content for v in ints]
    a0, an = ints[0], ints[-1]
    candidates = {
        Fraction(sp * p, q)
        for p in _divisors(a0)
        for q in _divisors(an)
        for sp in (1, -1)
    }
    for cand in sorted(candidates):
        if uv_eval(c, cand) == 0:
            mult = 0
            cur = c
            while uv_eval(cur, cand) == 0:
                cur, rem = uv_divmod(cur, [-cand, Fraction(1)])
                assert not rem
                mult += 1
            roots.append((cand, mult))
            c = cur
            if uv_degree(c) < 1:
                break
    return roots


def uv_factor_certificates(c: UnivPoly) -> tuple[list[tuple[Fraction, int]], list[tuple[UnivPoly, bool]]]:
    """Split off rational roots; return (roots, leftover factors).

    Each leftover factor comes with an irreducibility flag: degree 2 and 3
    cofactors with no rational root are certified irreducible over Q; higher
    degrees are reported unfactored (flag False).
    """
    c = uv_trim(c)
    roots = uv_rational_roots(c)
    rest = c
    for root, mult in roots:
        for _ in range(mult):
            rest, rem = uv_divmod(rest, [-root, Fraction(1)])
            assert not rem
    rest = uv_monic(rest)
    factors: list[tuple[UnivPoly, bool]] = []
    if uv_degree(rest) >= 1:
        factors.append((rest, uv_degree(rest) in (2, 3)))
    return roots, factors


def uv_to_poly(c: UnivPoly, ring: Sequence[str], var: str) -> Poly:
    ring = tuple(ring)
    i = ring.index(var)
    terms = {}
    for e, coeff in enumerate(uv_trim(c)):
        if coeff:
            mono = [0] * len(ring)
            mono[i] = e
            terms[tuple(mono)] = coeff
    return Poly(ring, terms)
