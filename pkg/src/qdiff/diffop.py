"""Quantized partial derivatives obtained by duality, and their closed forms.

The derivative along generator ``g`` sends ``z^beta`` to the polynomial whose
``z^alpha`` coefficient is

    |beta| * c_alpha * < w_beta, P(X_g (x) X^alpha) >          (scheme f2)
    |beta| * sum_{u with content alpha} < w_beta, P(X_g (x) u) >  (scheme f1)

where ``w_beta`` is the row-space lift of ``z^beta``.  Because that lift is
unchanged by the transposed projector, the pairing can be evaluated directly
on ``X_g (x) X^alpha`` through its normal form (``method="normal_form"``);
``method="projector"`` symmetrizes first, as the definition reads.

For the quantum matrix algebras this module also provides the diagonal
shift operators ``K``, the raising operators ``Kcal`` and ``O``, structured
operators built from them, the path formula for every generator, the wave
operator of the 2 x 2 case and the two covariant lifts of the fourth
derivative.
"""

import itertools
import random
from fractions import Fraction

from .algebra import monomial_word, normal_form, normal_form_word, pbw_basis
from .catalog import aiii, aiii_index
from .dual import PolyRep, _f1_values, multinomial, star_unlabeled, w_of_monomial
from .errors import DegreeMismatch, WrongAlgebra
from .qsym import _distinct_permutations, projector_matrix
from .report import Report
from .ring import ONE, ZERO, Q, QCoeff
from .tensor import TensorElement, add_term

__all__ = [
    "QDiffOperator",
    "Factor",
    "Term",
    "StructuredOperator",
    "q_derivative",
    "derivative_operator",
    "mq2_closed_form",
    "k_operators",
    "apply_K",
    "apply_Kcal",
    "apply_O",
    "apply_d",
    "wave_operator",
    "wave_operator_check",
    "poisson_bracket",
    "poisson_check",
    "paths",
    "path_structure",
    "path_operator",
    "path_check",
    "lowest_order_check",
    "mq2_structured",
    "mq2_display_check",
    "opposite_relations_check",
    "closed_form_check",
    "difform_check",
    "covariant_lift_check",
]

LAMBDA = Q - Q ** -1


# -- elementary operators on polynomials ----------------------------------


def _kcal_coefficient(a):
    """Scalar of the raising operator at exponent ``a``: -q^(2a-1)(1-q^(-2a-2))/(a+1)."""
    return -(Q ** (2 * a - 1)) * (ONE - Q ** (-2 * a - 2)) / (a + 1)


def _map_monomials(f, fn):
    out = {}
    for beta, c in f.terms.items():
        res = fn(beta)
        if res is None:
            continue
        new_beta, factor = res
        add_term(out, new_beta, c * factor)
    return PolyRep._wrap(f.n, out)


def apply_K(f, v, power=1):
    """``K_v^power``: ``z^alpha -> q^(-power * alpha_v) z^alpha``."""
    return _map_monomials(f, lambda b: (b, QCoeff.q_power(-power * b[v - 1])))


def apply_Kcal(f, v):
    def fn(b):
        a = b[v - 1]
        nb = list(b)
        nb[v - 1] += 1
        return tuple(nb), _kcal_coefficient(a)

    return _map_monomials(f, fn)


def apply_O(f, v):
    """``O_v = Kcal_v K_v^2``."""
    def fn(b):
        a = b[v - 1]
        nb = list(b)
        nb[v - 1] += 1
        return tuple(nb), _kcal_coefficient(a) * QCoeff.q_power(-2 * a)

    return _map_monomials(f, fn)


def apply_d(f, v):
    """Classical partial derivative in ``z_v``."""
    def fn(b):
        a = b[v - 1]
        if a == 0:
            return None
        nb = list(b)
        nb[v - 1] -= 1
        return tuple(nb), QCoeff(a)

    return _map_monomials(f, fn)


def _resolve_variable(spec, index):
    if isinstance(index, tuple):
        n = _matrix_size(spec)
        i, j = index
        if n is None or not (1 <= i <= n and 1 <= j <= n):
            raise WrongAlgebra(f"index pair {index} needs a quantum matrix algebra of matching size")
        return aiii_index(i, j, n)
    if not 1 <= index <= spec.n:
        raise ValueError(f"variable {index} outside 1..{spec.n}")
    return index


def k_operators(spec, which, index, f, power=1):
    """Apply ``K``, ``Kcal`` or ``O`` for a variable given as a number or an (i, j) pair."""
    v = _resolve_variable(spec, index)
    if which == "K":
        return apply_K(f, v, power)
    if which in ("Kcal", "Kc"):
        return apply_Kcal(f, v)
    if which == "O":
        return apply_O(f, v)
    raise ValueError("which must be 'K', 'Kcal' or 'O'")


# -- structured operators -------------------------------------------------


class Factor:
    """One factor ``K^e``, ``Kcal``, ``O`` or ``d`` acting on variable ``var``."""

    __slots__ = ("kind", "var", "power")

    def __init__(self, kind, var, power=1):
        if kind not in ("K", "Kcal", "O", "d"):
            raise ValueError(f"unknown factor kind {kind!r}")
        self.kind, self.var, self.power = kind, var, power

    def apply(self, f):
        if self.kind == "K":
            return apply_K(f, self.var, self.power)
        if self.kind == "Kcal":
            return apply_Kcal(f, self.var)
        if self.kind == "O":
            return apply_O(f, self.var)
        return apply_d(f, self.var)

    def label(self, n=None):
        name = {"K": "K", "Kcal": "Kc", "O": "O", "d": "d"}[self.kind]
        idx = f"[{(self.var - 1) // n + 1},{(self.var - 1) % n + 1}]" if n else f"[{self.var}]"
        suffix = f"^{self.power}" if self.kind == "K" and self.power != 1 else ""
        return f"{name}{idx}{suffix}"

    def key(self):
        return (self.kind, self.var, self.power)

    def __eq__(self, other):
        return isinstance(other, Factor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Factor{self.key()}"


class Term:
    """``scalar * f_1 f_2 ... f_k``, with ``f_k`` applied first."""

    __slots__ = ("scalar", "factors")

    def __init__(self, factors, scalar=ONE):
        self.factors = list(factors)
        self.scalar = QCoeff(scalar)

    def apply(self, f):
        for fac in reversed(self.factors):
            f = fac.apply(f)
            if not f:
                return f
        return f.scale(self.scalar)

    def order(self):
        return sum(1 for fac in self.factors if fac.kind == "d")

    def label(self, n=None):
        body = " ".join(fac.label(n) for fac in self.factors) or "1"
        return body if self.scalar == ONE else f"{self.scalar} * {body}"


class StructuredOperator:
    """A formal sum of :class:`Term` objects."""

    def __init__(self, terms, matrix_size=None):
        self.terms = list(terms)
        self.matrix_size = matrix_size

    def apply(self, f):
        out = PolyRep._wrap(f.n, {})
        for t in self.terms:
            out = out + t.apply(f)
        return out

    def __call__(self, f):
        return self.apply(f)

    def factor_strings(self):
        """Terms without their scalars, as printed factor lists."""
        return [" ".join(fac.label(self.matrix_size) for fac in t.factors) for t in self.terms]

    def __str__(self):
        return " + ".join(t.label(self.matrix_size) for t in self.terms) if self.terms else "0"


# -- derivatives by duality -----------------------------------------------


def _derivative_matrix(spec, g, d, scheme, method):
    """``{beta: {alpha: coeff}}`` for the derivative along ``g`` on degree ``d``."""
    spec.require_homogeneous()
    key = ("derivative", g, d, scheme, method)

    def build():
        cols = {}
        if d == 0:
            return cols
        basis = pbw_basis(spec, d - 1)
        if scheme == "f2" and method == "normal_form":
            for alpha in basis:
                ca = multinomial(alpha)
                for word, c in normal_form_word(spec, (g,) + monomial_word(alpha)).items():
                    beta = _exponents(word, spec.n)
                    coeff = c * Fraction(d * ca, multinomial(beta))
                    cols.setdefault(beta, {})[alpha] = coeff
            return cols
        if scheme == "f2" and method == "projector":
            proj = projector_matrix(spec, d)
            lifts = {beta: w_of_monomial(spec, beta).terms for beta in pbw_basis(spec, d)}
            for alpha in basis:
                col = proj.columns[(g,) + monomial_word(alpha)]
                ca = multinomial(alpha)
                for beta, w in lifts.items():
                    v = _pair(w, col)
                    if v:
                        cols.setdefault(beta, {})[alpha] = v * (d * ca)
            return cols
        if scheme == "f1":
            lam = _f1_values(spec, d)
            proj = projector_matrix(spec, d) if method == "projector" else None
            for alpha in basis:
                acc = {}
                for u in _distinct_permutations(monomial_word(alpha)):
                    word = (g,) + u
                    if proj is None:
                        for v, c in normal_form_word(spec, word).items():
                            add_term(acc, v, c)
                    else:
                        for w, c in proj.columns[word].items():
                            for v, e in normal_form_word(spec, w).items():
                                add_term(acc, v, c * e)
                for beta, vals in lam.items():
                    total = ZERO
                    for v, c in acc.items():
                        x = vals.get(v)
                        if x is not None:
                            total = total + x * c
                    if total:
                        cols.setdefault(beta, {})[alpha] = total * d
            return cols
        raise ValueError("scheme must be 'f1' or 'f2' and method 'normal_form' or 'projector'")

    return spec.cache(key, build)


def _pair(a, b):
    total = ZERO
    if len(a) > len(b):
        a, b = b, a
    for w, c in a.items():
        d = b.get(w)
        if d is not None:
            total = total + c * d
    return total


def _exponents(word, n):
    counts = [0] * n
    for a in word:
        counts[a - 1] += 1
    return tuple(counts)


class QDiffOperator:
    """A linear operator on polynomials, given degree by degree through exact matrices.

    ``structured`` optionally carries a closed form; :meth:`agrees_with_structure`
    compares the two on all monomials up to a degree.
    """

    def __init__(self, spec, column, name="D", structured=None):
        self.spec = spec
        self._column = column
        self.name = name
        self.structured = structured

    def column(self, beta):
        return self._column(tuple(beta))

    def apply(self, f):
        out = {}
        for beta, c in f.terms.items():
            for alpha, d in self.column(beta).items():
                add_term(out, alpha, c * d)
        return PolyRep._wrap(f.n, out)

    def __call__(self, f):
        return self.apply(f)

    def matrix(self, degree):
        """``{beta: {alpha: coeff}}`` on the monomials of ``degree``."""
        return {beta: dict(self.column(beta)) for beta in pbw_basis(self.spec, degree)}

    def export(self, degree):
        from .dual import format_monomial

        lines = []
        for beta in pbw_basis(self.spec, degree):
            for alpha, c in sorted(self.column(beta).items()):
                lines.append(f"{format_monomial(alpha)} {format_monomial(beta)} {c}")
        return "\n".join(lines) + ("\n" if lines else "")

    def agrees_with_structure(self, max_degree):
        if self.structured is None:
            return True
        for d in range(max_degree + 1):
            for beta in pbw_basis(self.spec, d):
                if self.apply(PolyRep.monomial(beta)) != self.structured.apply(PolyRep.monomial(beta)):
                    return False
        return True


def derivative_operator(spec, g, scheme="f2", method="normal_form"):
    """The quantized partial derivative along generator ``g`` as a :class:`QDiffOperator`."""
    if not 1 <= g <= spec.n:
        raise ValueError(f"generator {g} outside 1..{spec.n}")

    def column(beta):
        d = sum(beta)
        if len(beta) != spec.n:
            raise DegreeMismatch(f"exponent vector {beta} has the wrong length")
        return _derivative_matrix(spec, g, d, scheme, method).get(beta, {})

    structured = None
    if _is_mq(spec, 2) and scheme == "f2":
        structured = mq2_structured()[g - 1]
    elif _matrix_size(spec) is not None and scheme == "f2":
        n = _matrix_size(spec)
        structured = path_structure(n, (g - 1) // n + 1, (g - 1) % n + 1)
    return QDiffOperator(spec, column, name=f"D{g}", structured=structured)


def q_derivative(spec, g, f, scheme="f2", method="normal_form"):
    """Apply the quantized partial derivative along generator ``g`` to ``f``."""
    return derivative_operator(spec, g, scheme, method).apply(f)


# -- the 2 x 2 quantum matrices -------------------------------------------


def _matrix_size(spec):
    key = ("matrix-size",)

    def build():
        n = int(round(spec.n ** 0.5))
        if n * n != spec.n:
            return None
        ref = aiii(n)
        return n if ref.signature() == spec.signature() else None

    return spec.cache(key, build)


def _is_mq(spec, n):
    return _matrix_size(spec) == n


def mq2_closed_form(g, beta, spec=None):
    """The four closed-form derivatives of monomials on the 2 x 2 quantum matrices.

    Variables are ordered z1 = z_{1,1}, z2 = z_{1,2}, z3 = z_{2,1}, z4 = z_{2,2}.
    """
    if spec is not None and not _is_mq(spec, 2):
        raise WrongAlgebra("the closed forms are stated for the 2 x 2 quantum matrices")
    if g not in (1, 2, 3, 4):
        raise ValueError("generator must be 1, 2, 3 or 4")
    a1, a2, a3, a4 = beta
    out = {}

    def put(exps, c):
        if c and min(exps) >= 0:
            add_term(out, tuple(exps), c)

    if g == 1:
        put((a1 - 1, a2, a3, a4), QCoeff(a1))
    elif g == 2:
        put((a1, a2 - 1, a3, a4), QCoeff.q_power(-a1, a2))
    elif g == 3:
        put((a1, a2, a3 - 1, a4), QCoeff.q_power(-a1, a3))
    else:
        put((a1, a2, a3, a4 - 1), QCoeff.q_power(-a2 - a3, a4))
        if a2 and a3:
            c = _kcal_coefficient(a1) * QCoeff.q_power(-2 * a1 + 2) * (a2 * a3)
            put((a1 + 1, a2 - 1, a3 - 1, a4), c)
    return PolyRep._wrap(4, out)


def mq2_structured(literal=False):
    """Structured forms of the four derivatives on the 2 x 2 quantum matrices.

    The fourth is ``K2 K3 d4 + q^2 O1 d2 d3``; with ``literal=True`` the
    ``q^2`` is dropped, as in the five-line operator display.
    """
    k, d, o = (lambda v: Factor("K", v)), (lambda v: Factor("d", v)), (lambda v: Factor("O", v))
    scalar = ONE if literal else Q ** 2
    return [
        StructuredOperator([Term([d(1)])], 2),
        StructuredOperator([Term([k(1), d(2)])], 2),
        StructuredOperator([Term([k(1), d(3)])], 2),
        StructuredOperator([Term([k(2), k(3), d(4)]), Term([o(1), d(2), d(3)], scalar)], 2),
    ]


def _require_mq2(spec):
    if not _is_mq(spec, 2):
        raise WrongAlgebra(f"{spec.name} is not the 2 x 2 quantum matrix algebra in row-major order")


def closed_form_check(spec, max_degree=6):
    """Duality derivatives against the closed forms, every monomial up to ``max_degree``."""
    _require_mq2(spec)
    report = Report(f"closed-form derivatives of {spec.name}")
    ops = [derivative_operator(spec, g) for g in range(1, 5)]
    for g in range(1, 5):
        bad, total = [], 0
        for d in range(max_degree + 1):
            for beta in pbw_basis(spec, d):
                total += 1
                if ops[g - 1].apply(PolyRep.monomial(beta)) != mq2_closed_form(g, beta):
                    bad.append(beta)
        report.add(f"D{g} on {total} monomials of degree <= {max_degree}", not bad, _few(bad))
    for g, op in enumerate(ops, start=1):
        report.add(f"D{g} equals its K/O structured form (degree <= {max_degree})", op.agrees_with_structure(max_degree))
    lit = mq2_structured(literal=True)[3]
    bad = [b for d in range(max_degree + 1) for b in pbw_basis(spec, d)
           if lit.apply(PolyRep.monomial(b)) != ops[3].apply(PolyRep.monomial(b))]
    report.notes.append(
        f"display form K2 K3 d4 + O1 d2 d3 without the q^2 differs from D4 on {len(bad)} monomials"
    )
    return report


def _few(items, k=5):
    if not items:
        return ""
    shown = ", ".join(str(x) for x in items[:k])
    return shown + (f" (+{len(items) - k} more)" if len(items) > k else "")


def _all_monomials(spec, max_degree):
    for d in range(max_degree + 1):
        yield from pbw_basis(spec, d)


def wave_operator(spec):
    """``D1 D4 - q^-1 D2 D3`` on the 2 x 2 quantum matrices."""
    _require_mq2(spec)
    D = [derivative_operator(spec, g) for g in range(1, 5)]
    qinv = Q ** -1

    def apply(f):
        return D[0](D[3](f)) - D[1](D[2](f)).scale(qinv)

    return apply


def _wave_simplified(f):
    a = apply_d(apply_d(f, 4), 1)
    a = apply_K(apply_K(a, 2), 3)
    b = apply_d(apply_d(f, 3), 2).scale(Q)
    return a - b


def wave_operator_check(spec, max_degree=6, central_degree=None):
    _require_mq2(spec)
    if central_degree is None:
        central_degree = max(max_degree - 1, 0)
    box = wave_operator(spec)
    D = [derivative_operator(spec, g) for g in range(1, 5)]
    report = Report(f"wave operator of {spec.name}")
    z = {i: PolyRep.variable(4, i) for i in range(1, 5)}
    one = PolyRep.constant(4)
    report.add("box(z1 z4) = 1", box(z[1] * z[4]) == one)
    report.add("box(z2 z3) = -q", box(z[2] * z[3]) == one.scale(-Q))
    report.add("box(z1) = 0", not box(z[1]))
    bad, total = [], 0
    for beta in _all_monomials(spec, max_degree):
        total += 1
        f = PolyRep.monomial(beta)
        if box(f) != _wave_simplified(f):
            bad.append(beta)
    report.add(f"box = K2 K3 d1 d4 - q d2 d3 on {total} monomials of degree <= {max_degree}", not bad, _few(bad))
    for i in range(1, 5):
        bad, total = [], 0
        for beta in _all_monomials(spec, central_degree):
            total += 1
            f = PolyRep.monomial(beta)
            if box(D[i - 1](f)) != D[i - 1](box(f)):
                bad.append(beta)
        report.add(f"box commutes with D{i} on {total} monomials of degree <= {central_degree}", not bad, _few(bad))
    return report


def opposite_relations_check(spec, max_degree=5):
    """The derivatives obey the quantum matrix relations with q replaced by q^-1.

    D1, D2, D3, D4 play the roles of the generators in positions (1,1),
    (2,1), (1,2), (2,2).
    """
    _require_mq2(spec)
    D = {g: derivative_operator(spec, g) for g in range(1, 5)}
    qi = Q ** -1
    relations = [
        ("D1 D2 = q^-1 D2 D1", lambda f: D[1](D[2](f)) - D[2](D[1](f)).scale(qi)),
        ("D1 D3 = q^-1 D3 D1", lambda f: D[1](D[3](f)) - D[3](D[1](f)).scale(qi)),
        ("D2 D4 = q^-1 D4 D2", lambda f: D[2](D[4](f)) - D[4](D[2](f)).scale(qi)),
        ("D3 D4 = q^-1 D4 D3", lambda f: D[3](D[4](f)) - D[4](D[3](f)).scale(qi)),
        ("D2 D3 = D3 D2", lambda f: D[2](D[3](f)) - D[3](D[2](f))),
        (
            "D1 D4 = D4 D1 + (q^-1 - q) D3 D2",
            lambda f: D[1](D[4](f)) - D[4](D[1](f)) - D[3](D[2](f)).scale(qi - Q),
        ),
    ]
    report = Report(f"opposite relations of the derivatives of {spec.name}")
    for label, rel in relations:
        bad, total = [], 0
        for beta in _all_monomials(spec, max_degree):
            total += 1
            if rel(PolyRep.monomial(beta)):
                bad.append(beta)
        report.add(f"{label} on {total} monomials of degree <= {max_degree}", not bad, _few(bad))
    return report


# -- Poisson bracket ------------------------------------------------------


def poisson_bracket(spec, f, g, scheme="f2"):
    """Classical limit of ``(f * g - g * f) / (q - 1)`` for the star product."""
    comm = star_unlabeled(spec, f, g, scheme) - star_unlabeled(spec, g, f, scheme)
    return comm.map_coefficients(lambda c: QCoeff(c.poisson_scale().eval_at_one()))


def poisson_check(spec, scheme="f2"):
    """Antisymmetry, quasipolynomial shape and Jacobi identity on coordinate functions."""
    from .dual import dual_relations

    n = spec.n
    z = [PolyRep.variable(n, i) for i in range(1, n + 1)]
    report = Report(f"Poisson brackets of {spec.name}")
    br = {}
    for i in range(n):
        for j in range(n):
            br[(i, j)] = poisson_bracket(spec, z[i], z[j], scheme)
    anti = [(i + 1, j + 1) for i in range(n) for j in range(n) if br[(i, j)] + br[(j, i)]]
    report.add("antisymmetry {zi,zj} = -{zj,zi}", not anti, _few(anti))
    exps = {(i, j): c for i, j, c in dual_relations(spec)}
    shape = []
    for (i, j), c in exps.items():
        if br[(i - 1, j - 1)] != (z[i - 1] * z[j - 1]).scale(c):
            shape.append((i, j))
    report.add("{zi,zj} = c_ij zi zj with the dual relation exponents", not shape, _few(shape))
    jac = []
    for i, j, k in itertools.combinations(range(n), 3):
        total = PolyRep._wrap(n, {})
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            total = total + _bracket_with_product(br, z, a, b, c, n)
        if total:
            jac.append((i + 1, j + 1, k + 1))
    report.add("Jacobi identity on coordinate triples", not jac, _few(jac))
    return report


def _bracket_with_product(br, z, a, b, c, n):
    """``{z_a, {z_b, z_c}}`` via the Leibniz rule on the quadratic bracket."""
    inner = br[(b, c)]
    out = PolyRep._wrap(n, {})
    for beta, coeff in inner.terms.items():
        # {z_a, prod z_v^beta_v} = sum_v beta_v z^(beta - e_v) {z_a, z_v}
        for v, e in enumerate(beta):
            if e:
                rest = list(beta)
                rest[v] -= 1
                out = out + (PolyRep.monomial(tuple(rest), coeff * e) * br[(a, v)])
    return out


# -- path formula ---------------------------------------------------------


def paths(n, i, j):
    """The two path families ``(down, up)`` for the generator in position (i, j).

    A path is a pair of tuples ``(rows, cols)`` with strictly increasing rows
    ending at ``i`` and strictly decreasing columns starting at ``j``; the
    first family starts in row 1, the second below it.  Column 1 has the
    single upward path ``[i; 1]`` and row 1 the single downward path
    ``[1; j]``.
    """
    if j == 1:
        return [], [((i,), (1,))]
    if i == 1:
        return [((1,), (j,))], []
    down, up = [], []
    for r in range(1, min(i, j) + 1):
        for rows in itertools.combinations(range(1, i + 1), r):
            if rows[-1] != i:
                continue
            for cols in itertools.combinations(range(1, j + 1), r):
                cols = tuple(reversed(cols))
                if cols[0] != j:
                    continue
                (down if rows[0] == 1 else up).append((rows, cols))
    return down, up


def path_structure(n, i, j, literal=False):
    """Structured operator for the derivative along Z_{i,j} on n x n quantum matrices.

    Every ``K`` below is the diagonal operator ``z^alpha -> q^(-alpha_v) z^alpha``.
    A path ``[i_1..i_r; j_1..j_r]`` contributes

        q^(2(r-1)) * prod_y O[i_y, j_(y+1)] * prod K[s,t] * prod_(x < j_r) K[i,x] * prod_x d[i_x, j_x]

    where ``(s, t)`` runs over the cells ``(i_x, t)`` with ``j_(x+1) < t < j_x``
    and the cells ``(s, j_(x+1))`` (downward paths) or ``(s, j_x)`` (upward
    paths, with ``i_0 = 0``) with ``s`` strictly between consecutive rows.

    ``literal=True`` instead follows the printed index sets and exponents
    word for word (no ``q^2``, inverse powers where printed, the printed
    row/column constraints); it does not agree with the duality derivative.
    """
    down, up = paths(n, i, j)

    def v(s, t):
        return aiii_index(s, t, n)

    terms = []
    for kind, family in (("d", down), ("u", up)):
        for rows, cols in family:
            r = len(rows)
            factors = [Factor("O", v(rows[y], cols[y + 1])) for y in range(r - 1)]
            ks = []
            if kind == "d":
                for x in range(r - 1):
                    for t in range(cols[x + 1] + 1, cols[x]):
                        ks.append(((rows[x], t), 1))
                for x in range(r - 1):
                    t = cols[x + 1]
                    if literal:
                        ks.extend(((s, t), -1) for s in range(1, n + 1) if rows[x] < t < rows[x + 1])
                    else:
                        ks.extend(((s, t), 1) for s in range(rows[x] + 1, rows[x + 1]))
            else:
                for x in range(r - 1):
                    s_row = rows[x + 1] if literal else rows[x]
                    for t in range(cols[x + 1] + 1, cols[x]):
                        ks.append(((s_row, t), 1))
                prev = (0,) + rows
                for x in range(1, r + 1):
                    t = cols[x - 1]
                    if literal:
                        ks.extend(((s, t), -1) for s in range(1, n + 1) if prev[x - 1] < t < prev[x])
                    else:
                        ks.extend(((s, t), 1) for s in range(prev[x - 1] + 1, prev[x]))
            for x in range(1, cols[-1]):
                ks.append(((i, x), -1 if literal else 1))
            factors.extend(Factor("K", v(*cell), p) for cell, p in ks)
            factors.extend(Factor("d", v(rows[x], cols[x])) for x in range(r))
            scalar = ONE if literal else Q ** (2 * (r - 1))
            terms.append(Term(factors, scalar))
    return StructuredOperator(terms, n)


def path_operator(spec, i, j):
    """Derivative along Z_{i,j} with the path formula attached as its structured form."""
    n = _matrix_size(spec)
    if n is None:
        raise WrongAlgebra(f"{spec.name} is not a quantum matrix algebra in row-major order")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"position ({i},{j}) outside a {n} x {n} matrix")
    op = derivative_operator(spec, aiii_index(i, j, n))
    op.structured = path_structure(n, i, j)
    op.name = f"d/dZ[{i},{j}]"
    return op


def path_check(spec, max_degree=3, literal=False):
    n = _matrix_size(spec)
    if n is None:
        raise WrongAlgebra(f"{spec.name} is not a quantum matrix algebra in row-major order")
    tag = "printed" if literal else "corrected"
    report = Report(f"path formula ({tag} reading) against duality on {spec.name}")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            op = derivative_operator(spec, aiii_index(i, j, n))
            struct = path_structure(n, i, j, literal)
            bad, total = [], 0
            for beta in _all_monomials(spec, max_degree):
                total += 1
                f = PolyRep.monomial(beta)
                if struct.apply(f) != op.apply(f):
                    bad.append(beta)
            report.add(f"({i},{j}): {struct} on {total} monomials", not bad, _few(bad, 3))
    return report


def mq2_display_check():
    """Path decomposition for n = 2 against the factor strings of the five-line display."""
    display = mq2_structured(literal=True)
    report = Report("path formula against the 2 x 2 display, factor by factor")
    for g, (i, j) in enumerate([(1, 1), (1, 2), (2, 1), (2, 2)], start=1):
        got = sorted(path_structure(2, i, j).factor_strings())
        want = sorted(display[g - 1].factor_strings())
        report.add(f"({i},{j}): {' + '.join(got)}", got == want, "" if got == want else f"display has {want}")
    return report


def lowest_order_check(n):
    """The first-order summand of each path operator, against the closing remark.

    Checked is ``prod_(y<j) K[i,y] prod_(x<i) K[x,j] d[i,j]``.  The printed
    remark uses ``K[1,y]`` in the first product; the report notes where that
    differs.
    """
    report = Report(f"lowest order summands for {n} x {n} quantum matrices")
    mismatched = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            struct = path_structure(n, i, j)
            first = [t for t in struct.terms if t.order() == 1]
            want = sorted(
                [("K", aiii_index(i, y, n), 1) for y in range(1, j)]
                + [("K", aiii_index(x, j, n), 1) for x in range(1, i)]
                + [("d", aiii_index(i, j, n), 1)]
            )
            printed = sorted(
                [("K", aiii_index(1, y, n), 1) for y in range(1, j)]
                + [("K", aiii_index(x, j, n), 1) for x in range(1, i)]
                + [("d", aiii_index(i, j, n), 1)]
            )
            ok = len(first) == 1 and sorted(f.key() for f in first[0].factors) == want and first[0].scalar == ONE
            report.add(f"({i},{j}) has a single first-order summand {first[0].label(n) if first else '-'}", ok)
            if want != printed:
                mismatched.append((i, j))
    if mismatched:
        report.notes.append(
            "with K[1,y] in place of K[i,y] the remark disagrees at " + ", ".join(str(p) for p in mismatched)
        )
    return report


# -- commutation identity of the appendix ---------------------------------


def difform_check(spec, samples=60, max_degree=4, seed=0, literal=False):
    """Moving Z_{n,i} past a monomial in row ``a`` of the quantum matrices.

    Checks, in the algebra,

        Z_{n,i} M = sum_{x<i} c_x q^(-e_x) M_x Z_{n,x} + q^(-alpha_{a,i}) M Z_{n,i}

    with ``M = prod_t Z_{a,t}^alpha_t``, ``M_x`` the monomial with one
    factor moved from column ``x`` to column ``i``, ``c_x = q(q^(-2 alpha_x) - 1)``
    and ``e_x = alpha_(x+1) + ... + alpha_(i-1)``.  ``literal=True`` uses the
    printed signs ``q^(+e_x)`` and ``q^(+alpha_{a,i})``.
    """
    n = _matrix_size(spec)
    if n is None or n < 2:
        raise WrongAlgebra("the commutation identity needs a quantum matrix algebra with n >= 2")
    rng = random.Random(seed)
    sign = 1 if literal else -1
    report = Report(f"row commutation identity ({'printed' if literal else 'corrected'} signs) on {spec.name}")
    cases = []
    for a in range(1, n):
        for i in range(1, n + 1):
            for alpha in itertools.product(range(max_degree + 1), repeat=n):
                if sum(alpha) <= max_degree:
                    cases.append((a, i, alpha))
    if samples is not None and samples < len(cases):
        cases = rng.sample(cases, samples)
    bad = []
    for a, i, alpha in sorted(cases):
        if not _difform_holds(spec, n, a, i, alpha, sign):
            bad.append((a, i, alpha))
    report.add(f"{len(cases)} cases (row a, column i, exponents) of degree <= {max_degree}", not bad, _few(bad, 3))
    return report


def _difform_holds(spec, n, a, i, alpha, sign):
    def v(s, t):
        return aiii_index(s, t, n)

    def row_word(exps):
        return tuple(v(a, t) for t in range(1, n + 1) for _ in range(exps[t - 1]))

    lhs = normal_form(spec, TensorElement.word(v(n, i), *row_word(alpha)))
    rhs = {}
    for x in range(1, i):
        if alpha[x - 1] == 0:
            continue
        c = Q * (Q ** (-2 * alpha[x - 1]) - ONE)
        e = sum(alpha[x : i - 1])
        moved = list(alpha)
        moved[x - 1] -= 1
        moved[i - 1] += 1
        for w, d in normal_form_word(spec, row_word(moved) + (v(n, x),)).items():
            add_term(rhs, w, d * c * QCoeff.q_power(sign * e))
    for w, d in normal_form_word(spec, row_word(alpha) + (v(n, i),)).items():
        add_term(rhs, w, d * QCoeff.q_power(sign * alpha[i - 1]))
    return lhs.terms == rhs


# -- covariant lifts ------------------------------------------------------


def _T(f):
    return apply_K(apply_K(apply_d(f, 4), 2), 3)


def _O_hat(f, literal):
    g = apply_O(apply_d(apply_d(f, 3), 2), 1)
    return g if literal else g.scale(Q ** 2)


def _total_degree(f):
    return max((sum(b) for b in f.terms), default=0)


def covariant_lift_check(spec, version, f, literal=False):
    """Check ``(T + A) F(f) = F(D4 f)`` (version ``AF``) or ``(T + B) G(f) = G(D4 f)`` (``BG``).

    ``T = K2 K3 d4`` and ``D4`` is the duality derivative.  For ``AF`` the
    components obey ``F_0 = 1`` and ``F_(m+1) = F_m O^ + [F_m, T]`` with
    ``O^ = q^2 O1 d2 d3``; they are compared with the printed first
    components as well.  For ``BG`` the components are ``K4^(2m) (d2 d3)^m``
    and ``B`` carries ``q^2 O1 K4^-2`` on its superdiagonal.  With
    ``literal=True`` the ``q^2`` factors are dropped.
    """
    _require_mq2(spec)
    D4 = derivative_operator(spec, 4)
    report = Report(f"covariant lift {version} of f = {f}")
    if version == "AF":
        depth = _total_degree(f) + 1
        comps = _af_components(f, depth + 2, literal)
        comps_d4 = _af_components(D4(f), depth + 2, literal)
        for m in range(depth + 1):
            lhs = _T(comps[m]) + comps[m + 1]
            report.add(f"component {m}", lhs == comps_d4[m])
        # printed closed forms of the first components
        o = lambda g: _O_hat(g, literal)
        printed = [f, o(f), o(o(f)) + o(_T(f)) - _T(o(f))]
        printed.append(o(o(o(f))) + o(o(_T(f))) - _T(o(o(f))) + _T(o(_T(f))) - _T(_T(o(f))))
        for m, p in enumerate(printed):
            if m < len(comps) and p != comps[m]:
                report.notes.append(f"printed component {m} differs from the recursion")
        return report
    if version == "BG":
        depth = 1 + min(_max_exp(f, 2), _max_exp(f, 3))
        g_f = _bg_components(f, depth + 2)
        g_d4 = _bg_components(D4(f), depth + 2)
        for m in range(depth + 1):
            shifted = apply_K(g_f[m + 1], 4, -2)
            shifted = apply_O(shifted, 1)
            if not literal:
                shifted = shifted.scale(Q ** 2)
            lhs = _T(g_f[m]) + shifted
            report.add(f"component {m}", lhs == g_d4[m])
        return report
    raise ValueError("version must be 'AF' or 'BG'")


def _max_exp(f, v):
    return max((b[v - 1] for b in f.terms), default=0)


def _af_components(f, count, literal):
    """``[F_0 f, ..., F_(count-1) f]`` from the recursion on operator words."""
    # F_m is stored as a list of (coeff, word) with word a string over 'O', 'T'
    # applied right to left.
    ops = [{"": 1}]
    for _ in range(count - 1):
        cur = ops[-1]
        nxt = {}
        for w, c in cur.items():
            for new, s in ((w + "O", 1), (w + "T", 1), ("T" + w, -1)):
                nxt[new] = nxt.get(new, 0) + s * c
        ops.append({w: c for w, c in nxt.items() if c})
    out = []
    for table in ops:
        total = PolyRep._wrap(f.n, {})
        for w, c in table.items():
            g = f
            for letter in reversed(w):
                g = _T(g) if letter == "T" else _O_hat(g, literal)
                if not g:
                    break
            if g:
                total = total + g.scale(c)
        out.append(total)
    return out


def _bg_components(f, count):
    out = []
    g = f
    for m in range(count):
        out.append(apply_K(g, 4, 2 * m) if m else g)
        g = apply_d(apply_d(g, 3), 2)
    return out
