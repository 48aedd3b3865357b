"""Dual pairing, polynomial representations and the star product.

A dual element ``w`` is a functional on tensors, stored as its values on
words.  Its polynomial representative has, for each exponent vector
``alpha``:

* scheme ``f2``: coefficient ``c_alpha * <w, P(X^alpha)>``, with
  ``c_alpha`` the multinomial coefficient;
* scheme ``f1``: coefficient ``sum of <w, P(u)>`` over all words ``u`` with
  letter content ``alpha``.

Here ``P`` is the q-symmetrization projector and ``X^alpha`` the sorted
word.  The star product is concatenation of dual elements, read back
through the representation.
"""

from fractions import Fraction
from math import factorial

from .algebra import monomial_word, normal_form_word, pbw_basis
from .errors import DegreeMismatch, NotQuasipolynomial, ParseError
from .linalg import nullspace, solve
from .qsym import _distinct_permutations, all_words, projector_matrix
from .ring import ONE, ZERO, QCoeff, _Scanner
from .tensor import TensorElement, _scan_expression, add_term

__all__ = [
    "DualElement",
    "PolyRep",
    "multinomial",
    "pair",
    "pair_symmetrized",
    "w_of_monomial",
    "f_rep",
    "lift",
    "dual_relations",
    "star_product",
    "star_unlabeled",
    "parse_poly",
    "parse_dual",
]

SCHEMES = ("f1", "f2")


def _format_dual_word(word):
    if not word:
        return "1"
    return ".".join(f"X{a}*" for a in word)


class DualElement(TensorElement):
    """A functional on tensors; ``terms[word]`` is its value on ``word``."""

    __slots__ = ()
    _format_word = staticmethod(_format_dual_word)


def multinomial(alpha):
    """``|alpha|! / prod(alpha_i!)``, the number of words with content ``alpha``."""
    out = factorial(sum(alpha))
    for a in alpha:
        out //= factorial(a)
    return out


# -- polynomials ----------------------------------------------------------


class PolyRep:
    """A polynomial in commuting variables z_1..z_N with QCoeff coefficients.

    ``label`` optionally records a dual element it represents; it is carried
    along by :func:`f_rep` and :func:`star_product` and ignored by equality.
    """

    __slots__ = ("n", "terms", "label")

    def __init__(self, n, terms=None, label=None):
        self.n = int(n)
        clean = {}
        for beta, c in (terms or {}).items():
            beta = tuple(beta)
            if len(beta) != self.n:
                raise DegreeMismatch(f"exponent vector {beta} has the wrong length for {self.n} variables")
            add_term(clean, beta, QCoeff(c))
        self.terms = clean
        self.label = label

    @classmethod
    def _wrap(cls, n, terms, label=None):
        obj = object.__new__(cls)
        obj.n, obj.terms, obj.label = n, terms, label
        return obj

    @classmethod
    def monomial(cls, beta, coeff=ONE):
        beta = tuple(beta)
        return cls._wrap(len(beta), {beta: QCoeff(coeff)} if coeff else {})

    @classmethod
    def variable(cls, n, i):
        beta = [0] * n
        beta[i - 1] = 1
        return cls.monomial(beta)

    @classmethod
    def constant(cls, n, c=ONE):
        return cls.monomial((0,) * n, c)

    def unlabeled(self):
        return PolyRep._wrap(self.n, dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, beta):
        return self.terms.get(tuple(beta), ZERO)

    def degrees(self):
        return sorted({sum(b) for b in self.terms})

    def __add__(self, other):
        out = dict(self.terms)
        for b, c in other.terms.items():
            add_term(out, b, c)
        return PolyRep._wrap(self.n, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for b, c in other.terms.items():
            add_term(out, b, -c)
        return PolyRep._wrap(self.n, out)

    def __neg__(self):
        return PolyRep._wrap(self.n, {b: -c for b, c in self.terms.items()})

    def scale(self, c):
        c = QCoeff(c)
        if not c:
            return PolyRep._wrap(self.n, {})
        return PolyRep._wrap(self.n, {b: v * c for b, v in self.terms.items()})

    def __mul__(self, other):
        """Commutative product (not the star product)."""
        if not isinstance(other, PolyRep):
            return self.scale(other)
        out = {}
        for b1, c1 in self.terms.items():
            for b2, c2 in other.terms.items():
                add_term(out, tuple(x + y for x, y in zip(b1, b2)), c1 * c2)
        return PolyRep._wrap(self.n, out)

    __rmul__ = scale

    def map_coefficients(self, fn):
        out = {}
        for b, c in self.terms.items():
            add_term(out, b, QCoeff(fn(c)))
        return PolyRep._wrap(self.n, out)

    def __eq__(self, other):
        if not isinstance(other, PolyRep):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{self.terms[b]} * {format_monomial(b)}" for b in sorted(self.terms))

    def __repr__(self):
        return f"PolyRep({str(self)!r})"


def format_monomial(beta):
    parts = [f"z{i}^{e}" for i, e in enumerate(beta, start=1) if e]
    return "".join(parts) if parts else "1"


def parse_poly(text, n):
    """Parse ``<coeff> * z1^2z3^1 + ...``; bare monomials and ``0`` are accepted."""
    if text.strip() == "0":
        return PolyRep(n)
    sc = _Scanner(text)
    if sc.at_end():
        sc.error("empty polynomial")
    terms = {}
    first = True
    while True:
        sign = 1
        if not first:
            ch = sc.peek()
            if ch == "":
                break
            if ch not in "+-":
                sc.error("expected '+' or '-' between terms")
            sign = 1 if ch == "+" else -1
            sc.pos += 1
        first = False
        if sc.peek() == "z":
            coeff = QCoeff(sign)
            beta = _scan_monomial(sc, n)
        elif sc.peek() == "1" and _bare_unit(sc):
            sc.skip_ws()
            sc.pos += 1
            coeff, beta = QCoeff(sign), (0,) * n
        else:
            from .tensor import _scan_coeff

            coeff = _scan_coeff(sc) * sign
            if sc.peek() == "*":
                sc.pos += 1
                if sc.peek() == "1" and _bare_unit(sc):
                    sc.skip_ws()
                    sc.pos += 1
                    beta = (0,) * n
                else:
                    beta = _scan_monomial(sc, n)
            else:
                beta = (0,) * n
        add_term(terms, beta, coeff)
    return PolyRep._wrap(n, terms)


def _bare_unit(sc):
    sc.skip_ws()
    rest = sc.text[sc.pos + 1 :].lstrip()
    return rest == "" or rest[0] in "+-"


def _scan_monomial(sc, n):
    beta = [0] * n
    seen = False
    while True:
        sc.skip_ws()
        if sc.pos >= len(sc.text) or sc.text[sc.pos] != "z":
            if not seen:
                sc.error("expected a variable like z1")
            return tuple(beta)
        sc.pos += 1
        i = sc.integer(signed=False)
        if not 1 <= i <= n:
            sc.error(f"variable index {i} outside 1..{n}")
        e = 1
        if sc.peek() == "^":
            sc.pos += 1
            e = sc.integer(signed=False)
        beta[i - 1] += e
        seen = True
        if sc.peek() == ".":
            sc.pos += 1


def parse_dual(text, n_generators=None):
    """Parse dual elements such as ``X1*.X2* + 1q^1 * X2*.X1*``."""
    if text.strip() == "0":
        return DualElement()
    sc = _Scanner(text)
    if sc.at_end():
        sc.error("empty expression")
    return DualElement._wrap(_scan_expression(sc, n_generators, dual=True))


# -- pairing --------------------------------------------------------------


def pair(w, t):
    """Tensor-extended dual-basis pairing; different degrees pair to zero."""
    total = ZERO
    small, big = (w.terms, t.terms) if len(w.terms) <= len(t.terms) else (t.terms, w.terms)
    for word, c in small.items():
        d = big.get(word)
        if d is not None:
            total = total + c * d
    return total


def pair_symmetrized(spec, w, t, method="normal_form"):
    """``sum over degrees n of n! <w, P(t_n)>``."""
    by_degree = {}
    for word, c in t.terms.items():
        by_degree.setdefault(len(word), {})[word] = c
    total = ZERO
    for n, terms in by_degree.items():
        proj = projector_matrix(spec, n, method=method)
        sym = proj.apply_terms(terms)
        total = total + pair(w, TensorElement._wrap(sym)) * factorial(n)
    return total


# -- lifts of monomials ---------------------------------------------------


def w_of_monomial(spec, beta, method="normal_form", scheme="f2"):
    """Dual element representing ``z^beta``, taken in the projector row space.

    For ``scheme="f2"`` its value on a word ``u`` is the coefficient of the
    sorted word ``X^beta`` in the normal form of ``u`` divided by
    ``c_beta``; ``method="solve"`` obtains the same functional from an
    explicit linear solve against the projector.  For ``scheme="f1"`` the
    values on sorted words solve a triangular system instead.
    """
    beta = tuple(beta)
    if len(beta) != spec.n:
        raise DegreeMismatch(f"exponent vector {beta} has the wrong length for {spec.n} generators")
    key = ("w", beta, method, scheme)
    return spec.cache(key, lambda: _build_w(spec, beta, method, scheme))


def _build_w(spec, beta, method, scheme):
    n = sum(beta)
    target = monomial_word(beta)
    words = all_words(spec.n, n)
    if scheme == "f1":
        lam = _f1_values(spec, n)[beta]
        out = {}
        for u in words:
            acc = ZERO
            for v, c in normal_form_word(spec, u).items():
                x = lam.get(v)
                if x is not None:
                    acc = acc + c * x
            if acc:
                out[u] = acc
        return DualElement._wrap(out)
    if scheme != "f2":
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if method == "normal_form":
        scale = QCoeff(Fraction(1, multinomial(beta)))
        out = {}
        for u in words:
            c = normal_form_word(spec, u).get(target)
            if c is not None:
                out[u] = c * scale
        return DualElement._wrap(out)
    if method == "solve":
        proj = projector_matrix(spec, n)
        rows, rhs = [], []
        for alpha in pbw_basis(spec, n):
            rows.append(dict(proj.columns[monomial_word(alpha)]))
            rhs.append(QCoeff(Fraction(1, multinomial(beta))) if alpha == beta else ZERO)
        y = solve(rows, rhs, words)
        return DualElement._wrap(proj.transpose_apply_terms(y))
    raise ValueError("method must be 'normal_form' or 'solve'")


def _f1_values(spec, n):
    """Values on sorted words of the f1 lifts of every degree-``n`` monomial."""

    def build():
        basis = pbw_basis(spec, n)
        sums = {}
        for alpha in basis:
            acc = {}
            for u in _distinct_permutations(monomial_word(alpha)):
                for v, c in normal_form_word(spec, u).items():
                    add_term(acc, v, c)
            sums[alpha] = acc
        columns = [monomial_word(g) for g in basis]
        rows = [sums[alpha] for alpha in basis]
        out = {}
        for beta in basis:
            rhs = [ONE if alpha == beta else ZERO for alpha in basis]
            out[beta] = solve(rows, rhs, columns)
        return out

    return spec.cache(("f1-values", n), build)


def lift(spec, f, scheme="f2"):
    """The dual element ``sum f_beta w_beta`` representing an unlabeled polynomial."""
    out = {}
    for beta, c in f.terms.items():
        for u, d in w_of_monomial(spec, beta, scheme=scheme).terms.items():
            add_term(out, u, c * d)
    return DualElement._wrap(out)


def label_of(spec, f, scheme="f2"):
    return f.label if f.label is not None else lift(spec, f, scheme)


# -- representations ------------------------------------------------------


def f_rep(spec, w, scheme="f2", method="normal_form"):
    """Polynomial representing the dual element ``w``."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    by_degree = {}
    for word, c in w.terms.items():
        if any(not 1 <= a <= spec.n for a in word):
            raise DegreeMismatch(f"dual word {word} uses generators outside 1..{spec.n}")
        by_degree.setdefault(len(word), {})[word] = c
    out = {}
    for n, terms in by_degree.items():
        proj = projector_matrix(spec, n, method=method)
        for alpha in pbw_basis(spec, n):
            if scheme == "f2":
                col = proj.columns[monomial_word(alpha)]
                v = _pair_terms(terms, col) * multinomial(alpha)
            else:
                v = ZERO
                for u in _distinct_permutations(monomial_word(alpha)):
                    v = v + _pair_terms(terms, proj.columns[u])
            add_term(out, alpha, v)
    return PolyRep._wrap(spec.n, out, label=DualElement._wrap(dict(w.terms)))


def _pair_terms(a, b):
    total = ZERO
    if len(a) > len(b):
        a, b = b, a
    for word, c in a.items():
        d = b.get(word)
        if d is not None:
            total = total + c * d
    return total


def star_product(spec, f, g, scheme="f2"):
    """``F[w1] * F[w2] = F[w1 (x) w2]``; unlabeled inputs are lifted first."""
    w1, w2 = label_of(spec, f, scheme), label_of(spec, g, scheme)
    return f_rep(spec, DualElement._wrap(dict(_concat_terms(w1.terms, w2.terms))), scheme)


def _concat_terms(a, b):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            add_term(out, wa + wb, ca * cb)
    return out


def star_unlabeled(spec, f, g, scheme="f2"):
    """Star product of the unlabeled polynomials ``f`` and ``g``."""
    return star_product(spec, f.unlabeled(), g.unlabeled(), scheme).unlabeled()


# -- dual relations -------------------------------------------------------


def dual_relations(spec):
    """Exponents ``c`` with ``X_i* X_j* = q^c X_j* X_i*`` (i > j) spanning the dual relations.

    The relations are read off a basis of the kernel of the transposed
    degree-2 projector; :class:`NotQuasipolynomial` is raised if that
    kernel has the wrong dimension or no basis of this shape.
    """
    proj = projector_matrix(spec, 2)
    words = all_words(spec.n, 2)
    # kernel of P^t: functionals y with sum_u y(u) P[u][v] = 0 for all v
    rows = [dict(proj.columns[v]) for v in words]
    sorted_first = [w for w in words if w[0] <= w[1]] + [w for w in words if w[0] > w[1]]
    basis = nullspace(rows, sorted_first)
    expected = spec.n * (spec.n - 1) // 2
    if len(basis) != expected:
        raise NotQuasipolynomial(f"dual relation space has dimension {len(basis)}, expected {expected}")
    out = []
    for vec in basis:
        free = [w for w in vec if w[0] > w[1]]
        if len(free) != 1 or len(vec) != 2:
            raise NotQuasipolynomial(f"dual relation {DualElement._wrap(vec)} is not a two-term q-commutation")
        i, j = free[0]
        other = vec.get((j, i))
        if other is None or not other.is_monomial() or other.num[0] != -1:
            raise NotQuasipolynomial(f"dual relation {DualElement._wrap(vec)} is not of the form x - q^c y")
        out.append((i, j, other.shift))
    return sorted(out)
