"""Twisted swaps, their averages, and the q-symmetrization projector.

The swap ``sigma_i`` rewrites the letters in slots ``i, i + 1`` with the
defining relation (``variant="full"``) or with the relation stripped of its
tail (``variant="bar"``).  Averaging the lifts of all permutations gives an
operator ``P``; iterating ``P`` until it stabilizes gives the projector.

The average over all ``n!`` lifted permutations is never expanded.  Every
permutation has a unique factorization ``c_1 c_2 ... c_{n-1}`` with
``c_k`` in ``{1, s_k, s_k s_{k-1}, ..., s_k ... s_1}`` (``insertion_left``)
or ``b_{n-1} ... b_1`` with ``b_k`` in ``{1, s_k, s_k s_{k+1}, ...}``
(``insertion_right``), and lengths add, so the sum of lifts along these
reduced words factors into ``n - 1`` short sums.
"""

from fractions import Fraction
from itertools import permutations
from math import factorial

from .algebra import monomial_word, normal_form_terms, normal_form_word, pbw_basis, word_exponents
from .errors import DegreeBudgetExceeded, DegreeMismatch, NoConvergence, PositionOutOfRange
from .report import Report
from .ring import ONE, QCoeff
from .tensor import TensorElement, add_term, format_word

__all__ = [
    "MAX_DEGREE",
    "MAX_DIMENSION",
    "check_budget",
    "sigma_apply",
    "reduced_word",
    "perm_lift",
    "p_average",
    "q_symmetrize",
    "Projector",
    "projector_matrix",
    "star_identities_check",
    "quasi_symmetric_vector",
    "all_words",
    "braid_check",
    "scheme_independence_check",
]

MAX_DEGREE = 7
MAX_DIMENSION = 10 ** 6
VARIANTS = ("full", "bar")
SCHEMES = ("insertion_left", "insertion_right")


def check_budget(spec, n, force=False):
    if force:
        return
    if n > MAX_DEGREE or spec.n ** n > MAX_DIMENSION:
        raise DegreeBudgetExceeded(
            f"degree {n} over {spec.n} generators exceeds the budget "
            f"(degree <= {MAX_DEGREE}, {spec.n}^n <= {MAX_DIMENSION}); pass force=True to override"
        )


def all_words(n_generators, n):
    """All words of length ``n``, in plain lexicographic order."""
    words = [()]
    for _ in range(n):
        words = [w + (a,) for w in words for a in range(1, n_generators + 1)]
    return words


# -- swaps ----------------------------------------------------------------


def _sigma_word(spec, w, pos, bar):
    """Swap at 0-based slots ``pos, pos + 1`` as a list of (word, coeff)."""
    a, b = w[pos], w[pos + 1]
    if a == b:
        return ((w, ONE),)
    pre, post = w[:pos], w[pos + 2 :]
    swapped = pre + (b, a) + post
    if a > b:
        out = [(swapped, spec._b[(a, b)])]
        if not bar:
            out.extend((pre + t + post, c) for t, c in spec.tails[(a, b)].items())
        return out
    binv = spec._binv[(b, a)]
    out = [(swapped, binv)]
    if not bar:
        out.extend((pre + t + post, -binv * c) for t, c in spec.tails[(b, a)].items())
    return out


def _sigma_terms(spec, terms, pos, bar):
    out = {}
    for w, c in terms.items():
        for u, d in _sigma_word(spec, w, pos, bar):
            add_term(out, u, c * d)
    return out


def sigma_apply(spec, t, i, variant="full"):
    """Apply the swap at 1-based slots ``i, i + 1`` to every word of ``t``."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if i < 1 or any(len(w) < i + 1 for w in t.terms):
        raise PositionOutOfRange(f"no slots {i}, {i + 1} in every word of {t}")
    return TensorElement._wrap(_sigma_terms(spec, t.terms, i - 1, variant == "bar"))


# -- lifted permutations --------------------------------------------------


def _compose(a, b):
    """``(a b)(x) = a(b(x))`` for permutations stored as 0-based tuples."""
    return tuple(a[b[x]] for x in range(len(a)))


def _inverse(p):
    inv = [0] * len(p)
    for x, y in enumerate(p):
        inv[y] = x
    return tuple(inv)


def _transposition(n, i):
    p = list(range(n))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def word_to_permutation(n, word):
    p = tuple(range(n))
    for i in word:
        p = _compose(p, _transposition(n, i))
    return p


def reduced_word(perm, scheme="insertion_left"):
    """Reduced word ``[i_1, ..., i_r]`` with ``perm = s_{i_1} ... s_{i_r}``.

    ``perm`` is a 0-based tuple; ``s_i`` swaps ``i - 1`` and ``i``.
    """
    n = len(perm)
    perm = tuple(perm)
    if scheme == "insertion_left":
        blocks = []
        for top in range(n - 1, 0, -1):
            # perm = tau * (s_top s_{top-1} ... s_m) with tau fixing ``top``
            m = _inverse(perm)[top] + 1
            block = list(range(top, m - 1, -1))
            blocks.append(block)
            perm = _compose(perm, _inverse(word_to_permutation(n, block)))
        word = []
        for block in reversed(blocks):
            word.extend(block)
        return word
    if scheme == "insertion_right":
        word = []
        for low in range(1, n):
            # perm = rho * (s_low s_{low+1} ... s_m) with rho fixing ``low - 1``
            m = _inverse(perm)[low - 1]
            block = list(range(low, m + 1))
            perm = _compose(perm, _inverse(word_to_permutation(n, block)))
            word = block + word
        return word
    raise ValueError(f"scheme must be one of {SCHEMES}")


class PermutationLift:
    """The composite of swaps along a fixed reduced word."""

    def __init__(self, spec, perm, variant, scheme):
        self.spec = spec
        self.perm = tuple(perm)
        self.variant = variant
        self.scheme = scheme
        self.word = reduced_word(self.perm, scheme)

    def apply_terms(self, terms):
        bar = self.variant == "bar"
        for i in reversed(self.word):
            terms = _sigma_terms(self.spec, terms, i - 1, bar)
        return terms

    def __call__(self, t):
        if any(len(w) != len(self.perm) for w in t.terms):
            raise DegreeMismatch(f"lift of a permutation of {len(self.perm)} applied to {t}")
        return TensorElement._wrap(self.apply_terms(t.terms))


def perm_lift(spec, perm, variant="full", scheme="insertion_left"):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    return PermutationLift(spec, perm, variant, scheme)


# -- averages -------------------------------------------------------------


def _p_average_terms(spec, terms, n, bar, scheme):
    if n < 2:
        return dict(terms)
    if scheme == "insertion_left":
        for k in range(n - 1, 0, -1):
            acc = terms
            for m in range(1, k + 1):
                acc = _sigma_terms(spec, acc, m - 1, bar)
                for w, c in terms.items():
                    add_term(acc, w, c)
            terms = acc
    elif scheme == "insertion_right":
        for k in range(1, n):
            acc = terms
            for m in range(n - 1, k - 1, -1):
                acc = _sigma_terms(spec, acc, m - 1, bar)
                for w, c in terms.items():
                    add_term(acc, w, c)
            terms = acc
    else:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    scale = QCoeff(Fraction(1, factorial(n)))
    return {w: c * scale for w, c in terms.items()}


def _homogeneous_degree(t):
    degs = {len(w) for w in t.terms}
    if len(degs) > 1:
        raise DegreeMismatch(f"expected a homogeneous element, got degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def p_average(spec, t, variant="full", scheme="insertion_left"):
    """``(1/n!) * sum of the lifted permutations`` applied to ``t``."""
    spec.require_homogeneous()
    n = _homogeneous_degree(t)
    return TensorElement._wrap(_p_average_terms(spec, t.terms, n, variant == "bar", scheme))


def _fixpoint_terms(spec, terms, n, scheme):
    cap = spec.n ** n
    cur = terms
    for it in range(cap + 1):
        nxt = _p_average_terms(spec, cur, n, False, scheme)
        if nxt == cur:
            return cur, it
        cur = nxt
    raise NoConvergence(f"no fixpoint after {cap} averaging steps in degree {n}")


def q_symmetrize(spec, t, scheme="insertion_left", method="iterate", return_iterations=False):
    """The q-symmetrization of ``t``, degree by degree.

    ``method="iterate"`` repeats the averaged operator until two consecutive
    iterates agree.  ``method="normal_form"`` computes the same element as
    the unique combination of quasi-symmetric vectors congruent to ``t``.
    With ``return_iterations`` the number of averaging steps needed to reach
    the fixpoint (maximum over degrees) is returned as well.
    """
    spec.require_homogeneous()
    by_degree = {}
    for w, c in t.terms.items():
        by_degree.setdefault(len(w), {})[w] = c
    out, iterations = {}, 0
    for n, terms in by_degree.items():
        if method == "iterate":
            res, it = _fixpoint_terms(spec, terms, n, scheme)
            iterations = max(iterations, it)
        elif method == "normal_form":
            res = _qsym_by_normal_form(spec, terms, n)
        else:
            raise ValueError("method must be 'iterate' or 'normal_form'")
        for w, c in res.items():
            add_term(out, w, c)
    result = TensorElement._wrap(out)
    return (result, iterations) if return_iterations else result


# -- quasi-symmetric vectors ----------------------------------------------


def _distinct_permutations(word):
    word = sorted(word)
    out = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        last = None
        for x in range(len(remaining)):
            if remaining[x] == last:
                continue
            last = remaining[x]
            rec(prefix + [remaining[x]], remaining[:x] + remaining[x + 1 :])

    rec([], word)
    return out


def twisted_inversions(spec, word):
    """Sum of ``alpha[a, b]`` over pairs of positions carrying ``a > b``."""
    total = 0
    for x in range(len(word)):
        a = word[x]
        for y in range(x + 1, len(word)):
            b = word[y]
            if a > b:
                total += spec.alpha[(a, b)]
    return total


def quasi_symmetric_vector(spec, beta):
    """The invariant vector whose sorted word is ``X^beta`` with coefficient 1.

    It is fixed by every tail-free swap, and these vectors span the
    invariants in each degree.
    """
    return TensorElement._wrap(dict(_qsym_vector_terms(spec, tuple(beta))))


def _qsym_vector_terms(spec, beta):
    key = ("qsym-vector", beta)

    def build():
        return {u: QCoeff.q_power(-twisted_inversions(spec, u)) for u in _distinct_permutations(monomial_word(beta))}

    return spec.cache(key, build)


def _qsym_vector_nf(spec, beta):
    key = ("qsym-vector-nf", beta)
    return spec.cache(key, lambda: normal_form_terms(spec, _qsym_vector_terms(spec, beta)))


def _order_desc(spec, n):
    key = ("pbw-desc", n)
    return spec.cache(key, lambda: sorted(pbw_basis(spec, n), key=lambda b: tuple(reversed(b)), reverse=True))


def _qsym_coordinates(spec, nf_terms, n):
    """Coordinates ``y`` with ``sum y_beta NF(v_beta) = nf_terms``."""
    residual = dict(nf_terms)
    coords = {}
    for beta in _order_desc(spec, n):
        if not residual:
            break
        word = monomial_word(beta)
        c = residual.get(word)
        if c is None:
            continue
        vnf = _qsym_vector_nf(spec, beta)
        y = c / vnf[word]
        coords[beta] = y
        for w, d in vnf.items():
            add_term(residual, w, -y * d)
        assert word not in residual
    assert not residual, "normal forms of invariant vectors are not triangular"
    return coords


def _qsym_by_normal_form(spec, terms, n):
    coords = _qsym_coordinates(spec, normal_form_terms(spec, terms), n)
    out = {}
    for beta, y in coords.items():
        for u, c in _qsym_vector_terms(spec, beta).items():
            add_term(out, u, y * c)
    return out


# -- projector matrices ---------------------------------------------------


class Projector:
    """The degree-``n`` projector as a sparse column map ``word -> {word: coeff}``."""

    def __init__(self, spec, degree, columns, iterations_to_fixpoint=None, method="iterate"):
        self.algebra = spec
        self.degree = degree
        self.columns = columns
        self.iterations_to_fixpoint = iterations_to_fixpoint
        self.method = method

    @property
    def words(self):
        return all_words(self.algebra.n, self.degree)

    def apply_terms(self, terms):
        out = {}
        for w, c in terms.items():
            for u, d in self.columns[w].items():
                add_term(out, u, c * d)
        return out

    def apply(self, t):
        return TensorElement._wrap(self.apply_terms(t.terms))

    def __call__(self, t):
        return self.apply(t)

    def entry(self, row, col):
        from .ring import ZERO

        return self.columns[tuple(col)].get(tuple(row), ZERO)

    def rows(self):
        """Transposed storage ``row word -> {col word: coeff}``."""
        out = {}
        for col, column in self.columns.items():
            for row, c in column.items():
                out.setdefault(row, {})[col] = c
        return out

    def transpose_apply_terms(self, terms):
        """``P^t`` on a functional given as ``{word: value}``."""
        out = {}
        for col, column in self.columns.items():
            acc = None
            for row, c in column.items():
                v = terms.get(row)
                if v is not None:
                    acc = v * c if acc is None else acc + v * c
            if acc:
                out[col] = acc
        return out

    def is_idempotent(self):
        return all(self.apply_terms(col) == col for col in self.columns.values())

    def trace(self):
        from .ring import ZERO

        total = ZERO
        for w, col in self.columns.items():
            c = col.get(w)
            if c is not None:
                total = total + c
        return total

    def rank(self):
        """Rank of an idempotent matrix, read off as its trace.

        Raises if the matrix is not idempotent.  A specialization rank at a
        rational value of q is available from :meth:`rank_at`.
        """
        if not self.is_idempotent():
            raise ValueError("rank via trace needs an idempotent matrix")
        t = self.trace()
        if not t.is_constant():
            raise ValueError(f"trace {t} of an idempotent matrix is not a constant")
        return int(t.constant_value())

    def rank_at(self, q_value):
        """Exact rank after substituting a rational value for q."""
        import flint

        words = self.words
        index = {w: k for k, w in enumerate(words)}
        m = flint.fmpq_mat(len(words), len(words))
        for col, column in self.columns.items():
            for row, c in column.items():
                v = c.eval_at(q_value)
                m[index[row], index[col]] = flint.fmpq(v.numerator, v.denominator)
        return m.rank()

    def export_lines(self):
        lines = []
        for col in sorted(self.columns):
            for row in sorted(self.columns[col]):
                lines.append(f"{format_word(row)} {format_word(col)} {self.columns[col][row]}")
        lines.sort(key=lambda s: s)
        return lines

    def export(self):
        """Triplets ``row_word col_word coeff`` sorted by (row, column)."""
        out = []
        rows = self.rows()
        for row in sorted(rows):
            for col in sorted(rows[row]):
                out.append(f"{format_word(row)} {format_word(col)} {rows[row][col]}")
        return "\n".join(out) + ("\n" if out else "")


def projector_matrix(spec, n, method="normal_form", scheme="insertion_left", force=False):
    """The degree-``n`` projector, cached per (spec, degree, method, scheme).

    ``method="iterate"`` builds every column by iterating the averaged
    operator to its fixpoint; ``method="normal_form"`` builds it from the
    quasi-symmetric vectors.  Both give the same matrix.
    """
    spec.require_homogeneous()
    check_budget(spec, n, force)
    key = ("projector", n, method, scheme if method == "iterate" else None)

    def build():
        words = all_words(spec.n, n)
        columns = {}
        its = 0
        for w in words:
            if method == "iterate":
                col, it = _fixpoint_terms(spec, {w: ONE}, n, scheme)
                its = max(its, it)
            elif method == "normal_form":
                col = _qsym_by_normal_form(spec, {w: ONE}, n)
            else:
                raise ValueError("method must be 'iterate' or 'normal_form'")
            columns[w] = col
        return Projector(spec, n, columns, its if method == "iterate" else None, method)

    return spec.cache(key, build)


def relation_span(spec, n):
    """Spanning set ``a * (relation) * b`` of the degree-``n`` part of the ideal."""
    out = []
    if n < 2:
        return out
    rels = [spec.relation_element(i, j).terms for i, j in spec.relations()]
    for left in range(n - 1):
        for a in all_words(spec.n, left):
            for b in all_words(spec.n, n - 2 - left):
                for rel in rels:
                    out.append({a + w + b: c for w, c in rel.items()})
    return out


# -- sandwich identities --------------------------------------------------


def _sandwich_terms(inner, terms, r, k):
    out = {}
    for w, c in terms.items():
        a, m, b = w[:r], w[r : r + k], w[r + k :]
        for u, d in inner.columns[m].items():
            add_term(out, a + u + b, c * d)
    return out


def star_identities_check(spec, n, r, k, s, method="normal_form", words=None):
    """Check ``(I_r x P_k x I_s) P_n = P_n`` and ``P_n (I_r x P_k x I_s) = P_n``."""
    if r + k + s != n or min(r, k, s) < 0:
        raise DegreeMismatch(f"split ({r},{k},{s}) does not add up to {n}")
    big = projector_matrix(spec, n, method=method)
    inner = projector_matrix(spec, k, method=method)
    report = Report(f"sandwich identities of {spec.name}, n={n}, (r,k,s)=({r},{k},{s})")
    bad_left, bad_right = [], []
    for w in words if words is not None else all_words(spec.n, n):
        col = big.columns[w]
        if _sandwich_terms(inner, col, r, k) != col:
            bad_left.append(format_word(w))
        if big.apply_terms(_sandwich_terms(inner, {w: ONE}, r, k)) != col:
            bad_right.append(format_word(w))
    report.add("(I x P x I) P = P", not bad_left, ", ".join(bad_left[:10]))
    report.add("P (I x P x I) = P", not bad_right, ", ".join(bad_right[:10]))
    return report


def braid_check(spec, n, lifts=True):
    """Involutivity and braid relations of the tail-free swaps on every word of degree ``n``.

    With ``lifts`` the lifted permutations along both reduced-word schemes
    are compared as well.
    """
    report = Report(f"tail-free swaps of {spec.name} on degree {n}")
    words = all_words(spec.n, n)

    def bar(terms, *positions):
        for pos in reversed(positions):
            terms = _sigma_terms(spec, terms, pos - 1, True)
        return terms

    for i in range(1, n):
        bad = [format_word(w) for w in words if bar({w: ONE}, i, i) != {w: ONE}]
        report.add(f"swap {i} squares to the identity", not bad, ", ".join(bad[:5]))
    for i in range(1, n - 1):
        bad = [format_word(w) for w in words if bar({w: ONE}, i, i + 1, i) != bar({w: ONE}, i + 1, i, i + 1)]
        report.add(f"braid relation at {i}, {i + 1}", not bad, ", ".join(bad[:5]))
    for i in range(1, n):
        for j in range(i + 2, n):
            bad = [format_word(w) for w in words if bar({w: ONE}, i, j) != bar({w: ONE}, j, i)]
            report.add(f"swaps {i} and {j} commute", not bad, ", ".join(bad[:5]))
    if lifts:
        bad = []
        for perm in permutations(range(n)):
            left = perm_lift(spec, perm, "bar", "insertion_left")
            right = perm_lift(spec, perm, "bar", "insertion_right")
            if any(left.apply_terms({w: ONE}) != right.apply_terms({w: ONE}) for w in words):
                bad.append(str(perm))
        report.add(f"tail-free lifts of all {factorial(n)} permutations agree across schemes", not bad, ", ".join(bad[:5]))
    return report


def scheme_independence_check(spec, n):
    """The iterated fixpoint does not depend on the reduced-word scheme."""
    report = Report(f"fixpoint scheme independence of {spec.name} on degree {n}")
    bad = []
    for w in all_words(spec.n, n):
        left, _ = _fixpoint_terms(spec, {w: ONE}, n, "insertion_left")
        right, _ = _fixpoint_terms(spec, {w: ONE}, n, "insertion_right")
        if left != right:
            bad.append(format_word(w))
    report.add(f"left and right insertion give the same fixpoint on {spec.n ** n} words", not bad, ", ".join(bad[:5]))
    return report


def classical_symmetrizer(n_generators, n):
    """Columns of the ordinary symmetrizer ``(1/n!) sum over permutations``."""
    scale = Fraction(1, factorial(n))
    columns = {}
    for w in all_words(n_generators, n):
        col = {}
        for p in permutations(range(n)):
            u = tuple(w[p[x]] for x in range(n))
            add_term(col, u, QCoeff(scale))
        columns[w] = col
    return columns


def pbw_count(spec, n):
    return len(pbw_basis(spec, n))


def invariant_under_bars(spec, terms, n):
    return all(_sigma_terms(spec, terms, pos, True) == terms for pos in range(n - 1))


def words_with_content(beta):
    return _distinct_permutations(monomial_word(beta))


def exponents_of(spec, word):
    return word_exponents(word, spec.n)


def normal_form_coefficient(spec, word, beta):
    from .ring import ZERO

    return normal_form_word(spec, word).get(monomial_word(beta), ZERO)
