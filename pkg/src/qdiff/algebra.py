"""Quadratic algebras in triangular form and their PBW normal forms.

An :class:`AlgebraSpec` stores, for every pair ``i > j`` of generator
indices, the rewriting rule

    X_i X_j  ->  q**alpha[i, j] * X_j X_i + tails[i, j]

where the tail only involves generators below ``i``.  Reducing the leftmost
out-of-order pair until every word is sorted gives the normal form; the
result is memoized per word on the spec object.
"""

from itertools import combinations

from .errors import (
    InhomogeneousAlgebra,
    InvalidAlgebra,
    MissingRelation,
    ParseError,
)
from .report import Report
from .ring import ONE, QCoeff, _Scanner
from .tensor import TensorElement, add_term, format_word, order_key

__all__ = [
    "AlgebraSpec",
    "normal_form",
    "normal_form_word",
    "multiply",
    "dcp_check",
    "diamond_check",
    "pbw_basis",
    "monomial_word",
    "word_exponents",
    "parse_qalg",
    "format_qalg",
    "load_qalg",
]

# When true, every reduction step asserts that the produced words are
# strictly smaller than the word being rewritten.
CHECK_ORDER = False


class AlgebraSpec:
    """A validated presentation ``X_i X_j = q^alpha_ij X_j X_i + p_ij`` (i > j)."""

    def __init__(self, n_generators, alpha, tails=None, names=None, name="algebra", allow_inhomogeneous=False):
        self.n = int(n_generators)
        if self.n < 1:
            raise InvalidAlgebra("an algebra needs at least one generator")
        self.name = name
        self.names = list(names) if names is not None else [f"X{i}" for i in range(1, self.n + 1)]
        if len(self.names) != self.n:
            raise InvalidAlgebra(f"{len(self.names)} names given for {self.n} generators")
        self.alpha = {}
        self.tails = {}
        self.homogeneous = True
        tails = tails or {}
        for i in range(2, self.n + 1):
            for j in range(1, i):
                if (i, j) not in alpha:
                    raise MissingRelation(f"no relation given for X{i}X{j}")
                self.alpha[(i, j)] = int(alpha[(i, j)])
                tail = tails.get((i, j), {})
                if isinstance(tail, TensorElement):
                    tail = tail.terms
                clean = {}
                for word, c in tail.items():
                    add_term(clean, tuple(word), QCoeff(c))
                self._validate_tail(i, j, clean, allow_inhomogeneous)
                self.tails[(i, j)] = clean
        extra = set(alpha) - set(self.alpha)
        if extra:
            raise InvalidAlgebra(f"relations for pairs {sorted(extra)} are not of the form i > j")
        self.diamond_report = None
        self._b = {k: QCoeff.q_power(a) for k, a in self.alpha.items()}
        self._binv = {k: QCoeff.q_power(-a) for k, a in self.alpha.items()}
        self._nf = {}
        self._cache = {}

    def _validate_tail(self, i, j, tail, allow_inhomogeneous):
        for word in tail:
            if len(word) != 2:
                if not allow_inhomogeneous or len(word) > 2:
                    raise InhomogeneousAlgebra(
                        f"tail of X{i}X{j} contains {format_word(word)}, which is not of degree 2"
                    )
                self.homogeneous = False
            if any(not 1 <= a < i for a in word):
                raise InvalidAlgebra(f"tail of X{i}X{j} contains {format_word(word)}, outside X1..X{i - 1}")
            if list(word) != sorted(word):
                raise InvalidAlgebra(f"tail word {format_word(word)} of X{i}X{j} is not normal ordered")

    def b(self, i, j):
        return self._b[(i, j)]

    def b_inv(self, i, j):
        return self._binv[(i, j)]

    def tail(self, i, j):
        return TensorElement._wrap(dict(self.tails[(i, j)]))

    def relation_element(self, i, j):
        """``b_ij X_j X_i + p_ij - X_i X_j`` as a tensor (an element of I_R)."""
        terms = {(j, i): self._b[(i, j)]}
        for w, c in self.tails[(i, j)].items():
            add_term(terms, w, c)
        add_term(terms, (i, j), -ONE)
        return TensorElement._wrap(terms)

    def relations(self):
        return [(i, j) for i in range(2, self.n + 1) for j in range(1, i)]

    def require_homogeneous(self):
        if not self.homogeneous:
            raise InhomogeneousAlgebra(f"{self.name} has relations with tails of degree below 2")

    def cache(self, key, build):
        """Write-once per-spec cache used by the downstream modules."""
        try:
            return self._cache[key]
        except KeyError:
            value = build()
            return self._cache.setdefault(key, value)

    def signature(self):
        """Hashable summary of the presentation."""
        return (
            self.n,
            tuple(sorted(self.alpha.items())),
            tuple(sorted((k, tuple(sorted(v.items(), key=lambda t: t[0]))) for k, v in self.tails.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, AlgebraSpec):
            return NotImplemented
        return self.signature() == other.signature() and self.names == other.names and self.name == other.name

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, n={self.n})"


# -- normal forms ---------------------------------------------------------


def normal_form_word(spec, word):
    """Normal form of a single word as a ``{sorted word: QCoeff}`` dict.

    The returned dict is shared with the memo and must not be mutated.
    """
    memo = spec._nf
    hit = memo.get(word)
    if hit is not None:
        return hit
    stack = [word]
    while stack:
        w = stack[-1]
        if w in memo:
            stack.pop()
            continue
        pos = _first_descent(w)
        if pos < 0:
            memo[w] = {w: ONE}
            stack.pop()
            continue
        pieces = _rewrite(spec, w, pos)
        missing = [u for u, _ in pieces if u not in memo]
        if missing:
            stack.extend(missing)
            continue
        out = {}
        for u, c in pieces:
            for v, d in memo[u].items():
                add_term(out, v, c * d)
        memo[w] = out
        stack.pop()
    return memo[word]


def _first_descent(w):
    for k in range(len(w) - 1):
        if w[k] > w[k + 1]:
            return k
    return -1


def _rewrite(spec, w, pos):
    """One reduction step at slots ``pos, pos + 1`` as a list of (word, coeff)."""
    i, j = w[pos], w[pos + 1]
    pre, post = w[:pos], w[pos + 2 :]
    pieces = [(pre + (j, i) + post, spec._b[(i, j)])]
    for t, c in spec.tails[(i, j)].items():
        pieces.append((pre + t + post, c))
    if CHECK_ORDER:
        key = order_key(w, spec.n)
        for u, _ in pieces:
            if len(u) == len(w):
                assert order_key(u, spec.n) < key, f"{u} is not below {w}"
    return pieces


def normal_form_terms(spec, terms):
    out = {}
    for w, c in terms.items():
        for v, d in normal_form_word(spec, w).items():
            add_term(out, v, c * d)
    return out


def normal_form(spec, t):
    """PBW normal form: the unique combination of sorted words equal to ``t`` in A."""
    return TensorElement._wrap(normal_form_terms(spec, t.terms))


def multiply(spec, a, b):
    """Product in the algebra, returned in normal form."""
    na, nb = normal_form_terms(spec, a.terms), normal_form_terms(spec, b.terms)
    out = {}
    for wa, ca in na.items():
        for wb, cb in nb.items():
            for v, d in normal_form_word(spec, wa + wb).items():
                add_term(out, v, ca * cb * d)
    return TensorElement._wrap(out)


# -- validation -----------------------------------------------------------


def dcp_check(spec):
    """Check that each scaling X_j -> b_ij X_j (j < i) preserves the relations of A_{i-1}."""
    report = Report(f"scaling automorphisms of {spec.name}")
    for i in range(3, spec.n + 1):
        scale = {j: spec.b(i, j) for j in range(1, i)}
        for k in range(2, i):
            for l in range(1, k):
                rel = spec.relation_element(k, l)
                image = {}
                for w, c in rel.terms.items():
                    f = c
                    for a in w:
                        f = f * scale[a]
                    add_term(image, w, f)
                residual = normal_form_terms(spec, image)
                label = f"i={i} relation X{k}X{l}"
                detail = "" if not residual else f"image normal form {TensorElement._wrap(residual)}"
                report.add(label, not residual, detail)
    if not report.results:
        report.notes.append("fewer than three generators: nothing to check")
    return report


def diamond_check(spec):
    """Resolve every overlap X_i X_j X_k (i > j > k) along both rewriting routes."""
    report = Report(f"overlap ambiguities of {spec.name}")
    for k, j, i in combinations(range(1, spec.n + 1), 3):
        left = {}
        for u, c in _rewrite(spec, (i, j, k), 0):
            for v, d in normal_form_word(spec, u).items():
                add_term(left, v, c * d)
        right = {}
        for u, c in _rewrite(spec, (i, j, k), 1):
            for v, d in normal_form_word(spec, u).items():
                add_term(right, v, c * d)
        diff = dict(left)
        for v, d in right.items():
            add_term(diff, v, -d)
        label = f"X{i}X{j}X{k}"
        detail = ""
        if diff:
            detail = (
                f"left-first {TensorElement._wrap(left)} ; right-first {TensorElement._wrap(right)} ;"
                f" difference {TensorElement._wrap(diff)}"
            )
        report.add(label, not diff, detail)
    if not report.results:
        report.notes.append("fewer than three generators: no overlaps")
    return report


def residual(spec, i, j, k):
    """Left-first minus right-first normal form of X_i X_j X_k."""
    left, right = {}, {}
    for side, pos in ((left, 0), (right, 1)):
        for u, c in _rewrite(spec, (i, j, k), pos):
            for v, d in normal_form_word(spec, u).items():
                add_term(side, v, c * d)
    for v, d in right.items():
        add_term(left, v, -d)
    return TensorElement._wrap(left)


# -- PBW monomials --------------------------------------------------------


def pbw_basis(spec_or_n, degree):
    """Exponent vectors of the sorted monomials of ``degree``, ascending lexicographically."""
    n = spec_or_n.n if isinstance(spec_or_n, AlgebraSpec) else int(spec_or_n)
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + (left,))
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e, slots - 1)

    rec((), degree, n)
    return out


def monomial_word(beta):
    """The sorted word X_1^{b_1} ... X_N^{b_N}."""
    return tuple(i for i, e in enumerate(beta, start=1) for _ in range(e))


def word_exponents(word, n):
    counts = [0] * n
    for a in word:
        counts[a - 1] += 1
    return tuple(counts)


# -- .qalg text format ----------------------------------------------------


def format_qalg(spec):
    lines = ["qalg 1", f"name {spec.name}", f"gens {spec.n}"]
    if spec.names != [f"X{i}" for i in range(1, spec.n + 1)]:
        lines.append("names " + " ".join(spec.names))
    for i, j in spec.relations():
        tail = spec.tails[(i, j)]
        parts = []
        for w, c in sorted(tail.items(), key=lambda kv: (len(kv[0]), kv[0])):
            parts.append(f"{c} * {' '.join(str(a) for a in w)}" if w else f"{c}")
        body = f"rel {i} {j} : 1q^{spec.alpha[(i, j)]} ;"
        if parts:
            body += " " + ", ".join(parts)
        lines.append(body)
    return "\n".join(lines) + "\n"


def parse_qalg(text, allow_inhomogeneous=False):
    """Parse ``.qalg`` text; errors carry 1-based line and column numbers."""
    header_seen = False
    name, n, names = None, None, None
    alpha, tails = {}, {}
    rel_lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, _, rest = stripped.partition(" ")
        if not header_seen:
            if stripped.split() != ["qalg", "1"]:
                raise ParseError("file must start with 'qalg 1'", lineno, col)
            header_seen = True
            continue
        if head == "name":
            if not rest.strip() or len(rest.split()) != 1:
                raise ParseError("expected 'name <identifier>'", lineno, col)
            name = rest.strip()
        elif head == "gens":
            try:
                n = int(rest)
            except ValueError:
                raise ParseError("expected 'gens <N>'", lineno, col + 5) from None
            if n < 1:
                raise ParseError("generator count must be positive", lineno, col + 5)
        elif head == "names":
            names = rest.split()
        elif head == "rel":
            if n is None:
                raise ParseError("'rel' before 'gens'", lineno, col)
            i, j, a, tail = _parse_rel(line, lineno, n, allow_inhomogeneous)
            if (i, j) in rel_lines:
                raise ParseError(f"duplicate relation for {i} {j} (first on line {rel_lines[(i, j)]})", lineno, col)
            rel_lines[(i, j)] = lineno
            alpha[(i, j)] = a
            tails[(i, j)] = tail
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, col)
    if not header_seen:
        raise ParseError("empty input; expected 'qalg 1'", 1, 1)
    if n is None:
        raise ParseError("missing 'gens' line", 1, 1)
    if names is not None and len(names) != n:
        raise ParseError(f"'names' lists {len(names)} names for {n} generators", 1, 1)
    return AlgebraSpec(n, alpha, tails, names=names, name=name or "algebra", allow_inhomogeneous=allow_inhomogeneous)


def _parse_rel(line, lineno, n, allow_inhomogeneous):
    sc = _Scanner(line, lineno)
    sc.skip_ws()
    sc.pos += 3  # 'rel'
    i = sc.integer(signed=False)
    j = sc.integer(signed=False)
    if not (1 <= j < i <= n):
        sc.error(f"relation indices must satisfy 1 <= j < i <= {n}")
    sc.expect(":")
    sc.skip_ws()
    start = sc.pos
    b = sc.coeff()
    if not b.is_monomial() or b.num[0] != 1:
        sc.pos = start
        sc.error("the commutation factor must be a single term 1q^<int>")
    alpha = b.shift
    tail = {}
    if sc.peek() == ";":
        sc.pos += 1
        while not sc.at_end():
            c = sc.coeff()
            word = ()
            if sc.peek() == "*":
                sc.pos += 1
                letters = []
                while sc.peek().isdigit():
                    letters.append(sc.integer(signed=False))
                word = tuple(letters)
            if len(word) != 2 and not allow_inhomogeneous:
                sc.error("tail terms must be '<coeff> * <a> <b>'")
            for a in word:
                if not 1 <= a < i:
                    sc.error(f"tail generator {a} must lie in 1..{i - 1}")
            if list(word) != sorted(word):
                sc.error("tail words must satisfy a <= b")
            add_term(tail, word, c)
            if sc.peek() == ",":
                sc.pos += 1
            elif not sc.at_end():
                sc.error("expected ',' between tail terms")
    elif not sc.at_end():
        sc.error("expected ';' after the commutation factor")
    return i, j, alpha, tail


def load_qalg(path_or_text, allow_inhomogeneous=False):
    import sys

    if path_or_text == "-":
        return parse_qalg(sys.stdin.read(), allow_inhomogeneous)
    with open(path_or_text) as fh:
        return parse_qalg(fh.read(), allow_inhomogeneous)
