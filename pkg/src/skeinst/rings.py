"""Exact coefficient arithmetic for the solid-torus skein engine.

Everything is computed over the rationals, with no floating point anywhere:

- ``LaurentPoly``: Laurent polynomials in the two variables q, z with
  Fraction coefficients, kept in canonical form (no zero terms), so equality
  of values is equality of term maps.
- ``RationalFn``: the fraction field Q(q, z).  Fractions are reduced by a
  bivariate polynomial GCD and carry a canonical denominator (an ordinary
  polynomial, not divisible by q or z, with lex-leading coefficient 1), so
  equality is componentwise.
- ``SqrtLambdaScalar``: scalars of the form sqrt(lambda)^h * f(q, z) with
  h in {0, 1} after folding sqrt(lambda)^2 = lambda = (z + 1 - q)/(q z).

The module also hosts the expression parser used for round-tripping printed
polynomials / rational functions / trace values, and a small exact linear
solver over Q(q, z) shared by the normal-form and equation-system code.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping


class CoefficientError(ValueError):
    """Raised on division by zero, evaluation at a pole, and similar misuse."""


# ---------------------------------------------------------------------------
# Laurent polynomials in q, z
# ---------------------------------------------------------------------------

class LaurentPoly:
    """A Laurent polynomial in q and z over Q.

    Terms map ``(q_exponent, z_exponent) -> Fraction`` and never store a zero
    coefficient; instances are immutable by convention.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Fraction] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    clean[key] = Fraction(c)
        self.terms = clean
        self._hash: int | None = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> LaurentPoly:
        return _ZERO

    @staticmethod
    def one() -> LaurentPoly:
        return _ONE

    @staticmethod
    def const(c) -> LaurentPoly:
        c = Fraction(c)
        return LaurentPoly({(0, 0): c}) if c else _ZERO

    @staticmethod
    def monomial(c, qexp: int = 0, zexp: int = 0) -> LaurentPoly:
        c = Fraction(c)
        return LaurentPoly({(qexp, zexp): c}) if c else _ZERO

    @staticmethod
    def parse(text: str) -> LaurentPoly:
        """Parse canonical text such as ``q^2 - q + 1`` or ``q^-1*z``."""
        fn = RationalFn.parse(text)
        if not fn.den.is_one():
            raise CoefficientError(f"not a Laurent polynomial: {text!r}")
        return fn.num

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0, 0): Fraction(1)}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def is_unit_monomial(self) -> bool:
        """True when the value is c * q^a * z^b with c != 0 (a ring unit)."""
        return len(self.terms) == 1

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key)
            if s is None:
                out[key] = c
            else:
                s = s + c
                if s:
                    out[key] = s
                else:
                    del out[key]
        res = LaurentPoly.__new__(LaurentPoly)
        res.terms = out
        res._hash = None
        return res

    def __neg__(self) -> LaurentPoly:
        res = LaurentPoly.__new__(LaurentPoly)
        res.terms = {key: -c for key, c in self.terms.items()}
        res._hash = None
        return res

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        if not self.terms or not other.terms:
            return _ZERO
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                s = out.get(key)
                if s is None:
                    out[key] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s:
                        out[key] = s
                    else:
                        del out[key]
        res = LaurentPoly.__new__(LaurentPoly)
        res.terms = out
        res._hash = None
        return res

    def scale(self, c) -> LaurentPoly:
        c = Fraction(c)
        if not c:
            return _ZERO
        res = LaurentPoly.__new__(LaurentPoly)
        res.terms = {key: v * c for key, v in self.terms.items()}
        res._hash = None
        return res

    def shift(self, dq: int, dz: int) -> LaurentPoly:
        """Multiply by the unit monomial q^dq * z^dz."""
        res = LaurentPoly.__new__(LaurentPoly)
        res.terms = {(a + dq, b + dz): c for (a, b), c in self.terms.items()}
        res._hash = None
        return res

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if self.is_unit_monomial():
                ((a, b), c), = self.terms.items()
                return LaurentPoly.monomial(Fraction(1) / c, a, b) ** (-n)
            raise CoefficientError("negative power of a non-unit polynomial")
        out = _ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- evaluation & degrees -------------------------------------------------

    def evaluate(self, q0, z0) -> Fraction:
        q0, z0 = Fraction(q0), Fraction(z0)
        if (q0 == 0 or z0 == 0) and any(a < 0 or b < 0 for a, b in self.terms):
            raise CoefficientError("evaluation of a Laurent polynomial at 0")
        total = Fraction(0)
        for (a, b), c in self.terms.items():
            total += c * q0 ** a * z0 ** b
        return total

    def min_exponents(self) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        return (min(a for a, _ in self.terms), min(b for _, b in self.terms))

    def lex_leading(self) -> tuple[tuple[int, int], Fraction]:
        key = max(self.terms)
        return key, self.terms[key]

    def total_degree_span(self) -> int:
        """Rough size measure used for pivot selection."""
        if not self.terms:
            return 0
        return len(self.terms) + max(abs(a) + abs(b) for a, b in self.terms)

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for key in sorted(self.terms, reverse=True):
            c = self.terms[key]
            mono = _monomial_str(*key)
            if not mono:
                body = _fraction_str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_fraction_str(abs(c))}*{mono}"
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


def _monomial_str(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("q" if a == 1 else f"q^{a}")
    if b:
        parts.append("z" if b == 1 else f"z^{b}")
    return "*".join(parts)


def _fraction_str(c: Fraction) -> str:
    return str(c)


_ZERO = LaurentPoly()
_ONE = LaurentPoly({(0, 0): Fraction(1)})

ZERO = _ZERO
ONE = _ONE
Q = LaurentPoly({(1, 0): Fraction(1)})
Z = LaurentPoly({(0, 1): Fraction(1)})
QINV = LaurentPoly({(-1, 0): Fraction(1)})
Q_MINUS_1 = Q - ONE
ONE_MINUS_QINV = ONE - QINV
QINV_MINUS_1 = QINV - ONE


def qpow(n: int) -> LaurentPoly:
    return LaurentPoly({(n, 0): Fraction(1)})


# ---------------------------------------------------------------------------
# bivariate GCD over Q[q, z]
#
# Laurent polynomials are shifted to ordinary polynomials first; the GCD is
# only meaningful up to unit monomials, and we return the primitive ordinary
# representative with lex-leading coefficient 1.
# ---------------------------------------------------------------------------

def _to_zpolys(p: LaurentPoly) -> dict[int, tuple[Fraction, ...]]:
    """Ordinary poly as {q_exp: z-coefficient-list}; caller shifts first."""
    byq: dict[int, dict[int, Fraction]] = {}
    for (a, b), c in p.terms.items():
        byq.setdefault(a, {})[b] = c
    out = {}
    for a, m in byq.items():
        deg = max(m)
        out[a] = tuple(m.get(i, Fraction(0)) for i in range(deg + 1))
    return out


def _zp_trim(v: list[Fraction]) -> tuple[Fraction, ...]:
    while v and not v[-1]:
        v.pop()
    return tuple(v)


def _zp_add(a, b):
    n = max(len(a), len(b))
    return _zp_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                     for i in range(n)])


def _zp_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _zp_trim(out)


def _zp_scale(a, c):
    if not c:
        return ()
    return tuple(x * c for x in a)


def _zp_divmod(a, b):
    if not b:
        raise ZeroDivisionError("zero divisor in z-polynomial division")
    rem = list(a)
    quo = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b):
        if not rem[-1]:
            rem.pop()
            continue
        c = rem[-1] / b[-1]
        off = len(rem) - len(b)
        quo[off] = c
        for i in range(len(b)):
            rem[off + i] -= c * b[i]
        rem.pop()
    return _zp_trim(quo), _zp_trim(list(rem))


def _zp_gcd(a, b):
    while b:
        _, r = _zp_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    return _zp_scale(a, Fraction(1) / a[-1])  # monic


def _biv_content(byq: dict[int, tuple[Fraction, ...]]):
    g = ()
    for coeff in byq.values():
        g = _zp_gcd(g, coeff) if g else _zp_scale(coeff, Fraction(1) / coeff[-1])
        if len(g) == 1:
            return (Fraction(1),)
    return g if g else (Fraction(1),)


def _biv_exact_div_z(byq, zpoly):
    out = {}
    for a, coeff in byq.items():
        quo, rem = _zp_divmod(coeff, zpoly)
        if rem:
            raise CoefficientError("inexact z-polynomial division")
        out[a] = quo
    return out


def _biv_prem(a: dict, b: dict):
    """Pseudo-remainder of a by b viewed as polynomials in q over Q[z]."""
    da, db = max(a), max(b)
    lead_b = b[db]
    rem = {k: v for k, v in a.items()}
    for _ in range(da - db + 1):
        if not rem:
            return {}
        dr = max(rem)
        if dr < db:
            break
        lead_r = rem[dr]
        new: dict[int, tuple[Fraction, ...]] = {}
        for k, v in rem.items():
            if k == dr:
                continue
            new[k] = _zp_mul(v, lead_b)
        for k, v in b.items():
            if k == db:
                continue
            shift_k = k + dr - db
            term = _zp_mul(v, lead_r)
            cur = new.get(shift_k, ())
            s = _zp_add(cur, _zp_scale(term, Fraction(-1)))
            if s:
                new[shift_k] = s
            elif shift_k in new:
                del new[shift_k]
        rem = {k: v for k, v in new.items() if v}
    return rem


def _biv_gcd(a: dict, b: dict) -> dict:
    if not a:
        return b
    if not b:
        return a
    ca, cb = _biv_content(a), _biv_content(b)
    pa = _biv_exact_div_z(a, ca)
    pb = _biv_exact_div_z(b, cb)
    cg = _zp_gcd(ca, cb)
    while pb:
        r = _biv_prem(pa, pb)
        if not r:
            pa = pb
            break
        pa, pb = pb, _biv_exact_div_z(r, _biv_content(r))
    # pa is the primitive gcd of the primitive parts
    return {k: _zp_mul(v, cg) for k, v in _biv_exact_div_z(pa, _biv_content(pa)).items()}


def _from_zpolys(byq: dict) -> LaurentPoly:
    terms = {}
    for a, coeff in byq.items():
        for b, c in enumerate(coeff):
            if c:
                terms[(a, b)] = c
    return LaurentPoly(terms)


def poly_gcd(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    """GCD in Q[q,z] up to units; result is ordinary with lex-leading coeff 1."""
    if p.is_zero():
        base = r
    elif r.is_zero():
        base = p
    else:
        sp = p.shift(*(-e for e in p.min_exponents()))
        sr = r.shift(*(-e for e in r.min_exponents()))
        base = _from_zpolys(_biv_gcd(_to_zpolys(sp), _to_zpolys(sr)))
    if base.is_zero():
        return _ZERO
    base = base.shift(*(-e for e in base.min_exponents()))
    _, lead = base.lex_leading()
    return base.scale(Fraction(1) / lead)


def poly_div_exact(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Exact division p / d; raises if d does not divide p."""
    if d.is_zero():
        raise ZeroDivisionError("exact division by zero polynomial")
    if p.is_zero():
        return _ZERO
    dmin = d.min_exponents()
    d0 = d.shift(-dmin[0], -dmin[1])
    pmin = p.min_exponents()
    p0 = p.shift(-pmin[0], -pmin[1])
    a, b = _to_zpolys(p0), _to_zpolys(d0)
    out: dict[int, tuple[Fraction, ...]] = {}
    db = max(b)
    lead = b[db]
    while a:
        da = max(a)
        if da < db:
            raise CoefficientError("inexact polynomial division")
        quo_c, rem_c = _zp_divmod(a[da], lead)
        if rem_c:
            raise CoefficientError("inexact polynomial division")
        out[da - db] = quo_c
        new = dict(a)
        for k, v in b.items():
            term = _zp_mul(v, quo_c)
            cur = new.get(k + da - db, ())
            s = _zp_add(cur, _zp_scale(term, Fraction(-1)))
            if s:
                new[k + da - db] = s
            elif (k + da - db) in new:
                del new[k + da - db]
        a = new
    q0 = _from_zpolys(out)
    return q0.shift(pmin[0] - dmin[0], pmin[1] - dmin[1])


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------

class RationalFn:
    """An element of Q(q, z) in reduced canonical form.

    The denominator is an ordinary polynomial, not divisible by q or z, with
    lex-leading coefficient 1; the numerator absorbs all unit monomials.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = _ONE, *, _reduced=False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash: int | None = None

    @staticmethod
    def from_poly(p: LaurentPoly) -> RationalFn:
        return RationalFn(p, _ONE, _reduced=True)

    @staticmethod
    def const(c) -> RationalFn:
        return RationalFn(LaurentPoly.const(c), _ONE, _reduced=True)

    @staticmethod
    def parse(text: str) -> RationalFn:
        expr = parse_symbolic(text)
        if set(expr) - {()}:
            raise CoefficientError(f"unexpected symbols in {text!r}")
        return expr.get((), RF_ZERO)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def as_poly(self) -> LaurentPoly:
        if not self.den.is_one():
            raise CoefficientError(f"not a Laurent polynomial: {self}")
        return self.num

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFn)
                and self.num == other.num and self.den == other.den)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other: RationalFn) -> RationalFn:
        if self.den == other.den:
            return RationalFn(self.num + other.num, self.den)
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __neg__(self) -> RationalFn:
        return RationalFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other: RationalFn) -> RationalFn:
        return self + (-other)

    def __mul__(self, other: RationalFn) -> RationalFn:
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: RationalFn) -> RationalFn:
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def inverse(self) -> RationalFn:
        return RF_ONE / self

    def __pow__(self, n: int) -> RationalFn:
        if n < 0:
            return self.inverse() ** (-n)
        out = RF_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def evaluate(self, q0, z0) -> Fraction:
        d = self.den.evaluate(q0, z0)
        if d == 0:
            raise CoefficientError(f"evaluation at a pole: q={q0}, z={z0}")
        return self.num.evaluate(q0, z0) / d

    def size(self) -> int:
        return self.num.total_degree_span() + self.den.total_degree_span()

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return _ZERO, _ONE
    g = poly_gcd(num, den)
    if not g.is_one():
        num = poly_div_exact(num, g)
        den = poly_div_exact(den, g)
    dq, dz = den.min_exponents()
    if dq or dz:
        den = den.shift(-dq, -dz)
        num = num.shift(-dq, -dz)
    _, lead = den.lex_leading()
    if lead != 1:
        inv = Fraction(1) / lead
        den = den.scale(inv)
        num = num.scale(inv)
    return num, den


RF_ZERO = RationalFn.from_poly(_ZERO)
RF_ONE = RationalFn.from_poly(_ONE)

# lambda = (z + 1 - q)/(q z), so 1 - lambda*q = (q - 1)/z.
LAMBDA = RationalFn(Z + ONE - Q, Q * Z)
LAMBDA_INV = LAMBDA.inverse()


def lambda_power(n: int) -> RationalFn:
    return LAMBDA ** n


# ---------------------------------------------------------------------------
# sqrt(lambda)-graded scalars
# ---------------------------------------------------------------------------

class SqrtLambdaScalar:
    """A scalar sqrt(lambda)^half * coeff with half in {0, 1} after folding."""

    __slots__ = ("half", "coeff")

    def __init__(self, half: int, coeff: RationalFn):
        carry, rem = divmod(half, 2)
        if carry:
            coeff = coeff * lambda_power(carry)
        if coeff.is_zero():
            rem = 0
        self.half = rem
        self.coeff = coeff

    @staticmethod
    def one() -> SqrtLambdaScalar:
        return SqrtLambdaScalar(0, RF_ONE)

    def is_even(self) -> bool:
        return self.half == 0

    def __mul__(self, other: SqrtLambdaScalar) -> SqrtLambdaScalar:
        return SqrtLambdaScalar(self.half + other.half, self.coeff * other.coeff)

    def inverse(self) -> SqrtLambdaScalar:
        if self.coeff.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        # (sqrt(lambda)^h c)^-1 = sqrt(lambda)^-h c^-1
        return SqrtLambdaScalar(-self.half, self.coeff.inverse())

    def __pow__(self, n: int) -> SqrtLambdaScalar:
        if n < 0:
            return self.inverse() ** (-n)
        out = SqrtLambdaScalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (isinstance(other, SqrtLambdaScalar)
                and self.half == other.half and self.coeff == other.coeff)

    def __hash__(self) -> int:
        return hash((self.half, self.coeff))

    def __str__(self) -> str:
        if self.half == 0:
            return str(self.coeff)
        return f"sqrt(lambda)*({self.coeff})"

    def __repr__(self) -> str:
        return f"SqrtLambdaScalar({self})"


SQRT_LAMBDA = SqrtLambdaScalar(1, RF_ONE)

# Delta = -(1 - lambda q)/(sqrt(lambda)(1 - q)) simplifies to 1/(z sqrt(lambda)):
# 1 - lambda q = (q - 1)/z, so the (1 - q) factors cancel up to sign.
DELTA = SqrtLambdaScalar(-1, RationalFn(ONE, Z))


def delta_from_definition() -> SqrtLambdaScalar:
    """Delta built verbatim from its defining formula (used as a cross-check)."""
    num = RF_ONE - LAMBDA * RationalFn.from_poly(Q)
    den = RF_ONE - RationalFn.from_poly(Q)
    return SqrtLambdaScalar(-1, -(num / den))


# ---------------------------------------------------------------------------
# expression parser
#
# Grammar (whitespace-insensitive):
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := atom ['^' ['-'] digits]
#   atom   := digits ['/' digits handled by term] | 'q' | 'z' | '(' expr ')'
#             | extra atoms supplied by the caller (e.g. 's[3]')
# The result is a map from extra-atom monomials to RationalFn coefficients.
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z]+(?:\[-?\d+\])?|\^|\*|/|\+|\-|\(|\))")


class ParseError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


SymbolicExpr = dict[tuple, RationalFn]


def _sym_add(a: SymbolicExpr, b: SymbolicExpr) -> SymbolicExpr:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, RF_ZERO) + v
        if s.is_zero():
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _sym_mul(a: SymbolicExpr, b: SymbolicExpr) -> SymbolicExpr:
    out: SymbolicExpr = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(sorted(ka + kb))
            s = out.get(k, RF_ZERO) + va * vb
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
    return out


def parse_symbolic(text: str,
                   atom_parser: Callable[[str], object] | None = None) -> SymbolicExpr:
    """Parse an expression over q, z and optional caller-defined atoms."""
    tokens = _tokenize(text)
    idx = 0

    def peek() -> str | None:
        return tokens[idx][0] if idx < len(tokens) else None

    def pos() -> int:
        return tokens[idx][1] if idx < len(tokens) else len(text)

    def take() -> str:
        nonlocal idx
        tok = tokens[idx][0]
        idx += 1
        return tok

    def parse_expr() -> SymbolicExpr:
        sign = 1
        if peek() == "-":
            take()
            sign = -1
        value = parse_term()
        if sign < 0:
            value = _sym_mul({(): RationalFn.const(-1)}, value)
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            if op == "-":
                rhs = _sym_mul({(): RationalFn.const(-1)}, rhs)
            value = _sym_add(value, rhs)
        return value

    def parse_term() -> SymbolicExpr:
        value = parse_factor()
        while peek() in ("*", "/"):
            op = take()
            rhs = parse_factor()
            if op == "*":
                value = _sym_mul(value, rhs)
            else:
                if set(rhs) - {()}:
                    raise ParseError("cannot divide by a symbolic factor", pos())
                value = _sym_mul(value, {(): rhs.get((), RF_ZERO).inverse()})
        return value

    def parse_factor() -> SymbolicExpr:
        value = parse_atom()
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                take()
                neg = True
            tok = peek()
            if tok is None or not tok.isdigit():
                raise ParseError("malformed exponent", pos())
            take()
            n = -int(tok) if neg else int(tok)
            if len(value) == 1 and () in value:
                return {(): value[()] ** n}
            if n < 0:
                raise ParseError("negative power of a symbolic factor", pos())
            out: SymbolicExpr = {(): RF_ONE}
            for _ in range(n):
                out = _sym_mul(out, value)
            return out
        return value

    def parse_atom() -> SymbolicExpr:
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of expression", pos())
        at = pos()
        if tok == "(":
            take()
            value = parse_expr()
            if peek() != ")":
                raise ParseError("missing closing parenthesis", pos())
            take()
            return value
        if tok.isdigit():
            take()
            return {(): RationalFn.const(int(tok))}
        if tok == "q":
            take()
            return {(): RationalFn.from_poly(Q)}
        if tok == "z":
            take()
            return {(): RationalFn.from_poly(Z)}
        if atom_parser is not None:
            atom = atom_parser(tok)
            if atom is not None:
                take()
                return {(atom,): RF_ONE}
        raise ParseError(f"unknown token {tok!r}", at)

    if not tokens:
        raise ParseError("empty expression", 0)
    value = parse_expr()
    if idx != len(tokens):
        raise ParseError(f"trailing input {peek()!r}", pos())
    return value


# ---------------------------------------------------------------------------
# exact linear solver over Q(q, z)
# ---------------------------------------------------------------------------

def linear_combination(vectors: list[dict], target: dict):
    """Express ``target`` as an exact linear combination of ``vectors``.

    Vectors are sparse maps key -> RationalFn.  Returns the coefficient list
    (RationalFn per vector, zeros included) or None when the target is not in
    the span.  Elimination is plain Gaussian over Q(q, z) with pivots chosen
    by smallest operand size to limit coefficient growth.
    """
    keys: list = sorted({k for v in vectors for k in v} | set(target))
    key_index = {k: i for i, k in enumerate(keys)}
    ncols = len(vectors)
    # rows of the transposed system: one row per key, columns per vector
    rows = []
    for k in keys:
        row = [vec.get(k, RF_ZERO) for vec in vectors]
        row.append(target.get(k, RF_ZERO))
        rows.append(row)
    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    used_rows: set[int] = set()
    for col in range(ncols):
        best = None
        for r in range(len(rows)):
            if r in used_rows:
                continue
            entry = rows[r][col]
            if entry.is_zero():
                continue
            score = entry.size()
            if best is None or score < best[0]:
                best = (score, r)
        if best is None:
            continue
        r = best[1]
        used_rows.add(r)
        pivot_cols.append(col)
        pivot_rows.append(r)
        inv = rows[r][col].inverse()
        rows[r] = [e * inv for e in rows[r]]
        for r2 in range(len(rows)):
            if r2 == r or rows[r2][col].is_zero():
                continue
            factor = rows[r2][col]
            rows[r2] = [e2 - factor * e1 for e1, e2 in zip(rows[r], rows[r2])]
    # consistency: all non-pivot rows must have zero RHS
    for r in range(len(rows)):
        if r in used_rows:
            continue
        if not rows[r][ncols].is_zero():
            return None
    coeffs = [RF_ZERO] * ncols
    for col, r in zip(pivot_cols, pivot_rows):
        coeffs[col] = rows[r][ncols]
    # verify (cheap relative to elimination, catches pivot bookkeeping bugs)
    for k in keys:
        i = key_index[k]
        total = RF_ZERO
        for c, vec in zip(coeffs, vectors):
            if not c.is_zero():
                v = vec.get(k)
                if v is not None:
                    total = total + c * v
        if total != target.get(k, RF_ZERO):
            return None
    return coeffs
