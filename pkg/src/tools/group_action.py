"""
Exact action of upper-triangular groups on the nilradical by conjugation.

Group elements carry Fraction entries; Ad_g(x) = g x g^-1 must keep x supported
on M, anything else is a SupportLeak.
"""

import logging
import random
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from ..models.errors import BadIndices, SupportLeak, ZeroDiagonal
from ..models.types import Root
from .exact_algebra import PointM, Polynomial

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Generator = Tuple[str, int, int, Fraction]


class GroupElement:
    """Upper triangular invertible matrix over the rationals"""

    __slots__ = ("matrix", "provenance")

    def __init__(self, matrix: Sequence[Sequence[Scalar]], provenance: Iterable[Generator] = ()):
        self.matrix: List[List[Fraction]] = [[Fraction(v) for v in row] for row in matrix]
        self.provenance: Tuple[Generator, ...] = tuple(provenance)
        n = len(self.matrix)
        for i in range(n):
            if self.matrix[i][i] == 0:
                raise ZeroDiagonal(f"diagonal entry {i + 1} is zero")
            if any(self.matrix[i][j] != 0 for j in range(i)):
                raise BadIndices(f"row {i + 1} has entries below the diagonal")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "GroupElement":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def is_unipotent(self) -> bool:
        return all(self.matrix[i][i] == 1 for i in range(self.n))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        n = self.n
        a, b = self.matrix, other.matrix
        product = [[sum((a[i][k] * b[k][j] for k in range(i, j + 1)), Fraction(0)) if j >= i else Fraction(0)
                    for j in range(n)] for i in range(n)]
        return GroupElement(product, self.provenance + other.provenance)

    def inverse(self) -> "GroupElement":
        """Back substitution, column by column"""
        n = self.n
        a = self.matrix
        inv = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            for i in range(j, -1, -1):
                acc = Fraction(1 if i == j else 0)
                for k in range(i + 1, j + 1):
                    acc -= a[i][k] * inv[k][j]
                inv[i][j] = acc / a[i][i]
        return GroupElement(inv)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(tuple(map(tuple, self.matrix)))


def elementary_unipotent(n: int, i: int, j: int, t: Scalar) -> GroupElement:
    """g_{i,j}(t) = I + t E_{i,j}"""
    if not 1 <= i < j <= n:
        raise BadIndices(f"unipotent generator needs 1 <= i < j <= {n}", (i, j))
    matrix = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    matrix[i - 1][j - 1] = Fraction(t)
    return GroupElement(matrix, [("g", i, j, Fraction(t))])


def diagonal_torus(entries: Sequence[Scalar]) -> GroupElement:
    n = len(entries)
    for index, value in enumerate(entries, start=1):
        if value == 0:
            raise ZeroDiagonal(f"torus entry {index} is zero")
    matrix = [[entries[r] if r == c else 0 for c in range(n)] for r in range(n)]
    return GroupElement(matrix, [("t", index, index, Fraction(v)) for index, v in enumerate(entries, start=1)])


def torus_generator(n: int, i: int, b: Scalar) -> GroupElement:
    """h_i(b): row i scaled by b and column i by 1/b under Ad"""
    if not 1 <= i <= n:
        raise BadIndices(f"torus generator index must lie in 1..{n}", (i, i))
    entries: List[Scalar] = [1] * n
    entries[i - 1] = Fraction(b)
    g = diagonal_torus(entries)
    return GroupElement(g.matrix, [("h", i, i, Fraction(b))])


def _read_back(grid: List[List[Fraction]], x: PointM) -> PointM:
    domain = x.values.keys()
    for r in range(x.n):
        for c in range(x.n):
            if grid[r][c] != 0 and Root(r + 1, c + 1) not in domain:
                raise SupportLeak("conjugation leaves the nilradical", (r + 1, c + 1))
    return PointM(n=x.n, values={root: grid[root.row - 1][root.col - 1] for root in domain})


def adjoint(g: GroupElement, x: PointM) -> PointM:
    """
    Ad_g x = g x g^-1

    Args:
        g: Element of B
        x: Point of the nilradical

    Returns:
        The conjugated point, read back on the same domain
    """
    n = x.n
    a, b = g.matrix, g.inverse().matrix
    grid = x.matrix()
    left = [[sum((a[i][k] * grid[k][j] for k in range(i, n) if grid[k][j]), Fraction(0)) for j in range(n)]
            for i in range(n)]
    out = [[sum((left[i][k] * b[k][j] for k in range(0, j + 1) if left[i][k]), Fraction(0)) for j in range(n)]
           for i in range(n)]
    return _read_back(out, x)


def apply_unipotent_rule(x: PointM, i: int, j: int, t: Scalar) -> PointM:
    """Row j times t added to row i, then column i times t subtracted from column j"""
    if not 1 <= i < j <= x.n:
        raise BadIndices("unipotent generator indices out of range", (i, j))
    t = Fraction(t)
    grid = x.matrix()
    for c in range(x.n):
        grid[i - 1][c] += t * grid[j - 1][c]
    for r in range(x.n):
        grid[r][j - 1] -= t * grid[r][i - 1]
    return _read_back(grid, x)


def substitute_adjoint(p: Polynomial, g: GroupElement, domain: Optional[Iterable[Root]] = None) -> Polynomial:
    """
    q(x) = p(Ad_g x) as a polynomial in x

    Args:
        p: Polynomial in the coordinates x_{i,j}
        g: Element of B
        domain: Coordinates of x (usually M); cells outside it are zero. All
            strictly upper cells when omitted.
    """
    n = g.n
    a, b = g.matrix, g.inverse().matrix
    cells = ([Root(k, l) for k in range(1, n + 1) for l in range(k + 1, n + 1)] if domain is None
             else sorted(Root(*root) for root in domain))
    variables = {(root.row, root.col): Polynomial.variable(root) for root in cells}
    mapping = {}
    for root in p.variables():
        r, c = root
        acc = Polynomial.zero()
        for (k, l), var in variables.items():
            coef = a[r - 1][k - 1] * b[l - 1][c - 1]
            if coef:
                acc = acc + var * coef
        mapping[root] = acc
    return p.substitute(mapping)


def random_unipotent(n: int, rng: random.Random, max_generators: int = 12) -> GroupElement:
    """Product of at most max_generators elementary unipotents, parameters in [-9, 9]"""
    g = GroupElement.identity(n)
    if n < 2:
        return g
    for _ in range(rng.randint(1, max_generators)):
        i = rng.randint(1, n - 1)
        j = rng.randint(i + 1, n)
        g = g @ elementary_unipotent(n, i, j, rng.randint(-9, 9))
    return g


def random_borel(n: int, rng: random.Random, max_generators: int = 12) -> GroupElement:
    """Mixed product of unipotent and torus generators"""
    g = GroupElement.identity(n)
    for _ in range(rng.randint(1, max_generators)):
        if n >= 2 and rng.random() < 0.5:
            i = rng.randint(1, n - 1)
            j = rng.randint(i + 1, n)
            g = g @ elementary_unipotent(n, i, j, rng.randint(-9, 9))
        else:
            b = rng.choice([v for v in range(-9, 10) if v != 0])
            g = g @ torus_generator(n, rng.randint(1, n), b)
    return g


def random_point(n: int, M: Iterable[Root], rng: random.Random, low: int = -9, high: int = 9,
                 nonzero: Optional[Iterable[Root]] = None) -> PointM:
    """Random integer point of the nilradical; coordinates in nonzero avoid 0"""
    nonzero = frozenset(nonzero or ())
    values = {}
    for root in sorted(M):
        value = rng.randint(low, high)
        while root in nonzero and value == 0:
            value = rng.randint(low, high)
        values[root] = Fraction(value)
    return PointM(n=n, values=values)
