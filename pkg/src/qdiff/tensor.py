"""Words over the generator alphabet and formal linear combinations of them.

A word is a tuple of 1-based generator indices; the empty tuple is the unit.
A :class:`TensorElement` maps words to nonzero :class:`~qdiff.ring.QCoeff`
coefficients.  The helpers operating on plain ``dict`` objects are used by
the inner loops of the other modules, which avoid wrapper overhead.
"""

from .errors import DegreeMismatch, ParseError
from .ring import ONE, QCoeff, _Scanner

__all__ = [
    "TensorElement",
    "add_term",
    "letter_counts",
    "misordering_index",
    "order_compare",
    "order_key",
    "concat",
    "format_word",
    "parse_word",
    "parse_tensor",
]


def add_term(terms, word, coeff):
    """In-place ``terms[word] += coeff`` that drops zero entries."""
    old = terms.get(word)
    if old is None:
        if coeff:
            terms[word] = coeff
        return
    new = old + coeff
    if new:
        terms[word] = new
    else:
        del terms[word]


def letter_counts(word, n_generators=None):
    """The vector ``(n_1, ..., n_N)`` counting each letter of ``word``."""
    if n_generators is None:
        n_generators = max(word, default=0)
    counts = [0] * n_generators
    for a in word:
        counts[a - 1] += 1
    return tuple(counts)


def misordering_index(word):
    """Number of pairs of positions whose letters are out of order."""
    return sum(1 for x in range(len(word)) for y in range(x + 1, len(word)) if word[x] > word[y])


def order_key(word, n_generators):
    """Key realising the termination order on words of one degree.

    The letter-count vector is compared starting from its last coordinate,
    so that ``(0, ..., 0, r)`` is the biggest; ties are broken by the
    misordering index.  Distinct words can share a key, in which case they
    are incomparable.
    """
    counts = letter_counts(word, n_generators)
    return (tuple(reversed(counts)), misordering_index(word))


def order_compare(a, b):
    """Compare two words of equal length in the termination order.

    Returns one of ``"less"``, ``"equal"``, ``"greater"`` or
    ``"incomparable"``.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise DegreeMismatch(f"words of degree {len(a)} and {len(b)} are not comparable")
    if a == b:
        return "equal"
    n = max(max(a, default=0), max(b, default=0))
    ka, kb = order_key(a, n), order_key(b, n)
    if ka < kb:
        return "less"
    if ka > kb:
        return "greater"
    return "incomparable"


def format_word(word):
    if not word:
        return "1"
    return ".".join(f"X{a}" for a in word)


def _word_key(word):
    return (len(word), word)


class TensorElement:
    """A finitely supported linear combination of words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for word, coeff in dict(terms).items():
                add_term(clean, tuple(word), QCoeff(coeff))
        self.terms = clean

    @classmethod
    def _wrap(cls, terms):
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def word(cls, *letters, coeff=ONE):
        return cls._wrap({tuple(letters): QCoeff(coeff)} if coeff else {})

    @classmethod
    def one(cls):
        return cls._wrap({(): ONE})

    def copy(self):
        return type(self)._wrap(dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: _word_key(kv[0])))

    def coefficient(self, word):
        from .ring import ZERO

        return self.terms.get(tuple(word), ZERO)

    def degrees(self):
        return sorted({len(w) for w in self.terms})

    def is_homogeneous(self):
        return len({len(w) for w in self.terms}) <= 1

    def degree(self):
        """Common length of all words; raises for mixed or empty support."""
        degs = self.degrees()
        if len(degs) != 1:
            raise DegreeMismatch(f"element has degrees {degs}")
        return degs[0]

    def graded_component(self, n):
        return type(self)._wrap({w: c for w, c in self.terms.items() if len(w) == n})

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_term(out, w, c)
        return type(self)._wrap(out)

    def __neg__(self):
        return type(self)._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_term(out, w, -c)
        return type(self)._wrap(out)

    def scale(self, coeff):
        coeff = QCoeff(coeff)
        if not coeff:
            return type(self)()
        return type(self)._wrap({w: c * coeff for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return concat(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_coefficients(self, fn):
        out = {}
        for w, c in self.terms.items():
            add_term(out, w, fn(c))
        return type(self)._wrap(out)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c} * {self._format_word(w)}" for w, c in self)

    _format_word = staticmethod(format_word)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


def concat(a, b):
    """Bilinear extension of word concatenation."""
    out = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            add_term(out, wa + wb, ca * cb)
    return type(a)._wrap(out)


# -- parsing --------------------------------------------------------------


def _scan_word(sc, letter="X"):
    letters = []
    while True:
        sc.skip_ws()
        if sc.peek() != letter:
            sc.error(f"expected a generator like {letter}1")
        sc.pos += 1
        letters.append(sc.integer(signed=False))
        if sc.peek() != ".":
            return tuple(letters)
        sc.pos += 1


def _scan_expression(sc, n_generators, letter="X", dual=False):
    terms = {}
    sign = 1
    first = True
    while True:
        if not first:
            ch = sc.peek()
            if ch == "":
                break
            if ch not in "+-":
                sc.error("expected '+' or '-' between terms")
            sign = 1 if ch == "+" else -1
            sc.pos += 1
        first = False
        ch = sc.peek()
        if ch == letter:
            coeff = QCoeff(sign)
            word = _scan_dual_word(sc) if dual else _scan_word(sc, letter)
        elif ch == "1" and _bare_one(sc):
            sc.skip_ws()
            sc.pos += 1
            coeff, word = QCoeff(sign), ()
        else:
            coeff = _scan_coeff(sc) * sign
            if sc.peek() == "*":
                sc.pos += 1
                if sc.peek() == "1" and _bare_one(sc):
                    sc.skip_ws()
                    sc.pos += 1
                    word = ()
                else:
                    word = _scan_dual_word(sc) if dual else _scan_word(sc, letter)
            else:
                word = ()
        if n_generators is not None:
            for a in word:
                if not 1 <= a <= n_generators:
                    sc.error(f"generator index {a} outside 1..{n_generators}")
        add_term(terms, word, coeff)
    return terms


def _bare_one(sc):
    """True when the scanner sits on a literal ``1`` that denotes the unit word."""
    sc.skip_ws()
    rest = sc.text[sc.pos + 1 :].lstrip()
    return rest == "" or rest[0] in "+-"


def _scan_coeff(sc):
    """Coefficient in display syntax; a bare rational means a constant."""
    sc.skip_ws()
    if sc.peek() == "(":
        return sc.coeff()
    save = sc.pos
    try:
        return sc.coeff()
    except ParseError:
        sc.pos = save
    from fractions import Fraction

    num = sc.integer()
    den = 1
    if sc.peek() == "/":
        sc.pos += 1
        den = sc.integer(signed=False)
        if den == 0:
            sc.error("zero denominator in rational")
    return QCoeff(Fraction(num, den))


def _scan_dual_word(sc):
    letters = []
    while True:
        sc.skip_ws()
        if sc.peek() != "X":
            sc.error("expected a dual generator like X1*")
        sc.pos += 1
        letters.append(sc.integer(signed=False))
        if sc.peek() != "*":
            sc.error("expected '*' after dual generator")
        sc.pos += 1
        if sc.peek() != ".":
            return tuple(letters)
        sc.pos += 1


def parse_word(text):
    sc = _Scanner(text)
    if text.strip() == "1":
        return ()
    word = _scan_word(sc)
    if not sc.at_end():
        sc.error("trailing characters after word")
    return word


def parse_tensor(text, n_generators=None, line=1):
    """Parse the canonical text form, e.g. ``1q^0 * X1.X4 + -1q^1+1q^-1 * X2.X3``.

    A bare word stands for coefficient one, a term without ``*`` is a
    multiple of the unit word, and ``0`` is the zero element.
    """
    if text.strip() == "0":
        return TensorElement()
    sc = _Scanner(text, line)
    if sc.at_end():
        sc.error("empty expression")
    return TensorElement._wrap(_scan_expression(sc, n_generators))
