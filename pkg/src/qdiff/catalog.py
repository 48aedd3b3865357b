"""Built-in presentations of the standard quadratic algebras.

Every constructor returns an :class:`~qdiff.algebra.AlgebraSpec` whose
generator order makes each tail lie in the span of earlier generators:

* ``aiii(n)``: quantum n x n matrices, generators Z_{i,j} row-major.
* ``ci(n)``: symmetric matrices W_{i,j} (i <= j) in lexicographic order.
* ``fq(N)``: z_0, ..., z_{N-1} followed by z*_{N-1}, ..., z*_0.
* ``quantum_plane()``: X2 X1 = q^-1 X1 X2.
* ``symmetric(N)``: the commutative polynomial algebra.
"""

from .algebra import AlgebraSpec, diamond_check
from .errors import InvalidAlgebra
from .ring import ONE, Q, QCoeff

__all__ = [
    "FAMILIES",
    "make_family",
    "aiii",
    "ci",
    "fq",
    "quantum_plane",
    "symmetric",
    "quantized_weyl",
    "aiii_index",
    "aiii_position",
]

LAMBDA = Q - Q ** -1


def aiii_index(i, j, n):
    """Generator number of Z_{i,j} in the row-major order (1-based)."""
    return (i - 1) * n + j


def aiii_position(g, n):
    return ((g - 1) // n + 1, (g - 1) % n + 1)


def aiii(n):
    if n < 1:
        raise InvalidAlgebra("matrix size must be positive")
    N = n * n
    alpha, tails = {}, {}
    for hi in range(1, N + 1):
        s, t = aiii_position(hi, n)
        for lo in range(1, hi):
            i, j = aiii_position(lo, n)
            if i == s or j == t:
                alpha[(hi, lo)] = -1
            elif t < j:
                alpha[(hi, lo)] = 0
            else:
                # Z_{s,t} Z_{i,j} = Z_{i,j} Z_{s,t} - (q - q^-1) Z_{i,t} Z_{s,j}
                alpha[(hi, lo)] = 0
                tails[(hi, lo)] = {(aiii_index(i, t, n), aiii_index(s, j, n)): -LAMBDA}
    names = [f"Z{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
    return AlgebraSpec(N, alpha, tails, names=names, name=f"aiii{n}")


def _ci_generators(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def ci(n, with_report=True):
    """The CI relations as printed, including the two added ones.

    The relation for ``i < j < k < l`` is used with the coefficient
    ``q^-1 - q`` exactly as displayed.  The overlap report is attached as
    ``spec.diamond_report``.
    """
    if n < 1:
        raise InvalidAlgebra("matrix size must be positive")
    gens = _ci_generators(n)
    idx = {g: k for k, g in enumerate(gens, start=1)}
    alpha, tails = {}, {}
    q2 = Q ** 2
    for a, (i, j) in enumerate(gens, start=1):
        for b in range(a + 1, len(gens) + 1):
            k, l = gens[b - 1]
            exp, tail = 0, {}
            if i == k:
                exp = 2 if i == j else 1
            elif i == j:
                if k == l:
                    tail = {(idx[(i, k)], idx[(i, k)]): -(ONE - q2) / (Q + Q ** -1)}
                else:
                    tail = {(idx[(i, k)], idx[(i, l)]): -(ONE - q2)}
            elif k == l:
                if k == j:
                    exp = 2
                elif k > j:
                    tail = {(idx[(i, k)], idx[(j, k)]): -(ONE - q2)}
            elif k == j:
                exp = 1
                tail = {(idx[(i, l)], idx[(j, j)]): -(Q ** -2 - q2)}
            elif k > j:
                tail = {(idx[(i, k)], idx[(j, l)]): -(Q ** -1 - Q)}
            elif l > j:
                tail = {(idx[(i, l)], idx[(k, j)]): -(Q ** -1 - Q)}
            elif l == j:
                exp = 1
            alpha[(b, a)] = exp
            if tail:
                tails[(b, a)] = tail
    names = [f"W{i}_{j}" for i, j in gens]
    spec = AlgebraSpec(len(gens), alpha, tails, names=names, name=f"ci{n}")
    if with_report:
        spec.diamond_report = diamond_check(spec)
    return spec


def fq(N):
    if N < 1:
        raise InvalidAlgebra("N must be positive")

    def z(i):
        return i + 1

    def zs(i):
        return 2 * N - i

    alpha, tails = {}, {}
    for hi in range(1, 2 * N + 1):
        for lo in range(1, hi):
            alpha[(hi, lo)] = 1
    for i in range(N):
        tails[(zs(i), z(i))] = {(z(k), zs(k)): -(Q ** 2 - ONE) for k in range(i + 1, N)}
        alpha[(zs(i), z(i))] = 0
    names = [f"z{i}" for i in range(N)] + [f"z{i}*" for i in reversed(range(N))]
    return AlgebraSpec(2 * N, alpha, tails, names=names, name=f"fq{N}")


def quantum_plane():
    return AlgebraSpec(2, {(2, 1): -1}, names=["A", "B"], name="quantum_plane")


def symmetric(N):
    if N < 1:
        raise InvalidAlgebra("N must be positive")
    alpha = {(i, j): 0 for i in range(2, N + 1) for j in range(1, i)}
    return AlgebraSpec(N, alpha, name=f"symmetric{N}")


def quantized_weyl():
    """X2 X1 = q^-2 X1 X2 - q^-2, accepted only for rewriting experiments."""
    return AlgebraSpec(
        2,
        {(2, 1): -2},
        {(2, 1): {(): -QCoeff.q_power(-2)}},
        names=["A", "B"],
        name="quantized_weyl",
        allow_inhomogeneous=True,
    )


FAMILIES = {
    "aiii": aiii,
    "ci": ci,
    "fq": fq,
    "quantum_plane": quantum_plane,
    "symmetric": symmetric,
}


def make_family(family, param=None):
    """Build a family by name; ``quantum_plane`` takes no size parameter."""
    key = family.replace("-", "_").lower()
    if key not in FAMILIES:
        raise InvalidAlgebra(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if key == "quantum_plane":
        if param is not None:
            raise InvalidAlgebra("quantum_plane takes no parameter")
        return quantum_plane()
    if param is None:
        raise InvalidAlgebra(f"family {family} needs a size parameter")
    return FAMILIES[key](int(param))
