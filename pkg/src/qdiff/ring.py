"""Exact scalars in the quantum parameter q.

A :class:`QCoeff` is a quotient of a Laurent polynomial in ``q`` by an
ordinary polynomial, both with rational coefficients.  Values are kept in
a canonical form so that equality is decidable by comparing fields:

* the value is ``q**shift * num / den``;
* ``num`` has a nonzero constant term (or is zero, with ``shift == 0``);
* ``den`` is ``None`` (meaning 1) or a monic polynomial with nonzero
  constant term and no common factor with ``num``.

The polynomial arithmetic itself is delegated to python-flint.
"""

from fractions import Fraction

import flint

from .errors import NotVanishingAtOne, ParseError, PoleAtOne, ZeroDenominator

__all__ = [
    "QCoeff",
    "normalize",
    "eval_at_one",
    "poisson_scale",
    "parse_coeff",
    "ZERO",
    "ONE",
    "Q",
]

_fmpq_poly = flint.fmpq_poly
_fmpq = flint.fmpq
_POLY_ONE = _fmpq_poly([1])
_POLY_ZERO = _fmpq_poly([])


def _to_fmpq(x):
    if isinstance(x, _fmpq):
        return x
    if isinstance(x, int):
        return _fmpq(x)
    x = Fraction(x)
    return _fmpq(x.numerator, x.denominator)


def _to_fraction(x):
    return Fraction(int(x.p), int(x.q))


def _valuation(p):
    """Index of the lowest nonzero coefficient of a nonzero polynomial."""
    if p[0] != 0:
        return 0
    v = 1
    while p[v] == 0:
        v += 1
    return v


class QCoeff:
    __slots__ = ("num", "shift", "den")

    def __init__(self, value=0):
        if isinstance(value, QCoeff):
            self.num, self.shift, self.den = value.num, value.shift, value.den
            return
        c = _to_fmpq(value)
        self.num = _fmpq_poly([c]) if c != 0 else _POLY_ZERO
        self.shift = 0
        self.den = None

    @classmethod
    def _make(cls, num, shift, den):
        obj = object.__new__(cls)
        obj.num = num
        obj.shift = shift
        obj.den = den
        return obj

    @classmethod
    def _laurent(cls, num, shift):
        """Build from an fmpq_poly that may have a zero constant term."""
        if num.is_zero():
            return cls._make(_POLY_ZERO, 0, None)
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        return cls._make(num, shift, None)

    @classmethod
    def _quotient(cls, num, shift, den):
        """Canonicalize ``q**shift * num / den`` for arbitrary polynomials."""
        if den.is_zero():
            raise ZeroDenominator("division by the zero polynomial")
        if num.is_zero():
            return cls._make(_POLY_ZERO, 0, None)
        v = _valuation(den)
        if v:
            den = den.right_shift(v)
            shift -= v
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        if den.degree() == 0:
            return cls._laurent(num, shift)
        v = _valuation(num)
        if v:
            num = num.right_shift(v)
            shift += v
        return cls._make(num, shift, den)

    @classmethod
    def from_terms(cls, terms):
        """Laurent polynomial from a mapping ``exponent -> rational``."""
        terms = {int(e): c for e, c in terms.items() if c != 0}
        if not terms:
            return cls._make(_POLY_ZERO, 0, None)
        low = min(terms)
        coeffs = [0] * (max(terms) - low + 1)
        for e, c in terms.items():
            coeffs[e - low] = _to_fmpq(c)
        return cls._make(_fmpq_poly(coeffs), low, None)

    @classmethod
    def q_power(cls, k, coeff=1):
        c = _to_fmpq(coeff)
        if c == 0:
            return cls._make(_POLY_ZERO, 0, None)
        return cls._make(_fmpq_poly([c]), int(k), None)

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_laurent(self):
        return self.den is None

    def is_monomial(self):
        """True for ``c * q**k`` with ``c != 0`` (the units of the Laurent ring)."""
        return self.den is None and self.num.degree() == 0

    def is_constant(self):
        return self.den is None and self.num.degree() <= 0 and (self.shift == 0 or self.num.is_zero())

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return _to_fraction(self.num[0])

    def numerator_terms(self):
        """``{exponent: Fraction}`` of the Laurent numerator."""
        return {
            i + self.shift: _to_fraction(c)
            for i, c in enumerate(self.num.coeffs())
            if c != 0
        }

    def denominator_terms(self):
        if self.den is None:
            return {0: Fraction(1)}
        return {i: _to_fraction(c) for i, c in enumerate(self.den.coeffs()) if c != 0}

    def terms(self):
        if self.den is not None:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.numerator_terms()

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return QCoeff._make(-self.num, self.shift, self.den)

    def __add__(self, other):
        if not isinstance(other, QCoeff):
            if isinstance(other, (int, Fraction, _fmpq)):
                other = QCoeff(other)
            else:
                return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s1, s2 = self.shift, other.shift
        if self.den is None and other.den is None:
            if s1 == s2:
                return QCoeff._laurent(self.num + other.num, s1)
            if s1 < s2:
                return QCoeff._make(self.num + other.num.left_shift(s2 - s1), s1, None)
            return QCoeff._make(other.num + self.num.left_shift(s1 - s2), s2, None)
        d1 = self.den if self.den is not None else _POLY_ONE
        d2 = other.den if other.den is not None else _POLY_ONE
        shift = min(s1, s2)
        if d1 == d2:
            a, b, den = self.num, other.num, d1
        else:
            a, b, den = self.num * d2, other.num * d1, d1 * d2
        num = a.left_shift(s1 - shift) + b.left_shift(s2 - shift)
        return QCoeff._quotient(num, shift, den)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QCoeff):
            if isinstance(other, (int, Fraction, _fmpq)):
                other = QCoeff(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QCoeff):
            if isinstance(other, (int, Fraction, _fmpq)):
                c = _to_fmpq(other)
                if c == 0:
                    return ZERO
                return QCoeff._make(self.num * c, self.shift, self.den)
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        shift = self.shift + other.shift
        if self.den is None and other.den is None:
            return QCoeff._make(self.num * other.num, shift, None)
        num = self.num * other.num
        if self.den is None:
            return QCoeff._quotient(num, shift, other.den)
        if other.den is None:
            return QCoeff._quotient(num, shift, self.den)
        return QCoeff._quotient(num, shift, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        den = self.den if self.den is not None else _POLY_ONE
        return QCoeff._quotient(den, -self.shift, self.num)

    def __truediv__(self, other):
        if not isinstance(other, QCoeff):
            if isinstance(other, (int, Fraction, _fmpq)):
                c = _to_fmpq(other)
                if c == 0:
                    raise ZeroDenominator("division by zero")
                return QCoeff._make(self.num / c, self.shift, self.den)
            return NotImplemented
        if self.num.is_zero():
            if other.num.is_zero():
                raise ZeroDenominator("division by zero")
            return ZERO
        if other.is_monomial():
            return QCoeff._make(self.num / other.num[0], self.shift - other.shift, self.den)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QCoeff(other) * self.inverse()

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        if self.den is None:
            return QCoeff._make(self.num ** k, self.shift * k, None) if k else ONE
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QCoeff):
            if isinstance(other, (int, Fraction, _fmpq)):
                other = QCoeff(other)
            else:
                return NotImplemented
        if self.shift != other.shift or self.num != other.num:
            return False
        if self.den is None or other.den is None:
            return self.den is None and other.den is None
        return self.den == other.den

    def __hash__(self):
        den = () if self.den is None else tuple(str(c) for c in self.den.coeffs())
        return hash((self.shift, tuple(str(c) for c in self.num.coeffs()), den))

    # -- evaluation -------------------------------------------------------

    def eval_at(self, value):
        """Exact value at a nonzero rational ``q``."""
        x = Fraction(value)
        if x == 0 and self.shift < 0:
            raise ZeroDenominator("negative power of q at q = 0")
        xq = _to_fmpq(x)
        num = _to_fraction(self.num(xq)) * x ** self.shift
        if self.den is None:
            return num
        den = _to_fraction(self.den(xq))
        if den == 0:
            raise ZeroDenominator(f"pole at q = {x}")
        return num / den

    def eval_at_one(self):
        if self.den is not None and self.den(_fmpq(1)) == 0:
            raise PoleAtOne(f"{self} has a pole at q = 1")
        return self.eval_at(1)

    def poisson_scale(self):
        """``self / (q - 1)``, defined when the value at q = 1 is zero."""
        if self.num.is_zero():
            return self
        if self.num(_fmpq(1)) != 0:
            if self.den is not None and self.den(_fmpq(1)) == 0:
                raise PoleAtOne(f"{self} has a pole at q = 1")
            raise NotVanishingAtOne(f"{self} does not vanish at q = 1")
        quo, rem = divmod(self.num, _fmpq_poly([-1, 1]))
        assert rem.is_zero()
        if self.den is None:
            return QCoeff._laurent(quo, self.shift)
        return QCoeff._quotient(quo, self.shift, self.den)

    def derivative(self):
        """Formal derivative with respect to q."""
        q = _fmpq_poly([0, 1])
        # d/dq (q^s n / d) = q^(s-1) (s n d + q n' d - q n d') / d^2
        den = self.den if self.den is not None else _POLY_ONE
        top = self.num * den * self.shift + q * (self.num.derivative() * den - self.num * den.derivative())
        return QCoeff._quotient(top, self.shift - 1, den * den)

    # -- text -------------------------------------------------------------

    def __str__(self):
        if self.den is None:
            return _format_sum(self.numerator_terms())
        return f"({_format_sum(self.numerator_terms())})/({_format_sum(self.denominator_terms())})"

    def __repr__(self):
        return f"QCoeff({str(self)!r})"


def _format_rational(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_sum(terms):
    if not terms:
        return "0q^0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        body = f"{_format_rational(abs(c))}q^{e}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+" if c > 0 else "-") + body)
    return "".join(parts)


ZERO = QCoeff(0)
ONE = QCoeff(1)
Q = QCoeff.q_power(1)


def normalize(numerator, denominator=None):
    """Canonical :class:`QCoeff` from raw ``{exponent: rational}`` maps.

    Exponents of either map may be negative.  Raises
    :class:`~qdiff.errors.ZeroDenominator` if ``denominator`` is zero.
    """
    num = QCoeff.from_terms(numerator)
    if denominator is None:
        return num
    den = QCoeff.from_terms(denominator)
    if den.is_zero():
        raise ZeroDenominator("denominator is the zero polynomial")
    return num / den


def eval_at_one(c):
    return QCoeff(c).eval_at_one()


def poisson_scale(c):
    return QCoeff(c).poisson_scale()


# -- parsing --------------------------------------------------------------


class _Scanner:
    def __init__(self, text, line=1, col_offset=0):
        self.text = text
        self.pos = 0
        self.line = line
        self.col_offset = col_offset

    def error(self, message):
        raise ParseError(message, self.line, self.col_offset + self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed=True):
        self.skip_ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def term(self, sign=1):
        num = self.integer()
        den = 1
        if self.peek() == "/":
            self.pos += 1
            den = self.integer(signed=False)
            if den == 0:
                self.error("zero denominator in rational")
        if self.peek() != "q":
            self.error("expected 'q^<int>' after the rational")
        self.pos += 1
        self.expect("^")
        exp = self.integer()
        return exp, sign * Fraction(num, den)

    def sum(self):
        terms = {}
        exp, c = self.term()
        terms[exp] = terms.get(exp, 0) + c
        while self.peek() in ("+", "-"):
            save = self.pos
            sign = 1 if self.text[self.pos] == "+" else -1
            self.pos += 1
            try:
                exp, c = self.term(sign)
            except ParseError:
                # the sign belongs to whatever follows the coefficient
                self.pos = save
                break
            terms[exp] = terms.get(exp, 0) + c
        return terms

    def coeff(self):
        if self.peek() == "(":
            self.pos += 1
            num = self.sum()
            self.expect(")")
            self.expect("/")
            self.expect("(")
            den = self.sum()
            self.expect(")")
            if not any(den.values()):
                self.error("zero denominator")
            return normalize(num, den)
        return normalize(self.sum())

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_coeff(text, line=1, col_offset=0):
    """Parse the coefficient display syntax, e.g. ``1q^1-1q^-1``."""
    sc = _Scanner(text, line, col_offset)
    value = sc.coeff()
    if not sc.at_end():
        sc.error("trailing characters after coefficient")
    return value
