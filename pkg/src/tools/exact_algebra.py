"""
Exact sparse polynomials in the variables x_{i,j}.

A polynomial maps monomials to nonzero Fraction coefficients. A monomial is a
tuple of (root, exponent) pairs sorted by root, so the empty tuple is the
constant monomial and the zero polynomial has no terms at all.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict

from ..config import get_settings
from ..models.errors import (
    BadIndices,
    DegenerateInput,
    MissingValue,
    MissingVariable,
    NotSquare,
    SizeCapExceeded,
    VanishingDenominator,
)
from ..models.types import Root

logger = logging.getLogger(__name__)

Monomial = Tuple[Tuple[Root, int], ...]
Scalar = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    powers: Dict[Root, int] = dict(a)
    for root, e in b:
        powers[root] = powers.get(root, 0) + e
    return tuple(sorted(powers.items()))


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients"""

    __slots__ = ("terms", "symbol", "universe")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None, symbol: str = "x",
                 universe: Optional[FrozenSet[Root]] = None):
        self.terms: Dict[Monomial, Fraction] = {
            mono: Fraction(coef) for mono, coef in (terms or {}).items() if coef != 0
        }
        self.symbol = symbol
        self.universe = universe
        if universe is not None:
            for mono in self.terms:
                for root, _ in mono:
                    if root not in universe:
                        raise BadIndices("variable outside the nilradical", root)

    @classmethod
    def zero(cls, symbol: str = "x") -> "Polynomial":
        return cls({}, symbol)

    @classmethod
    def constant(cls, value: Scalar, symbol: str = "x") -> "Polynomial":
        return cls({(): Fraction(value)}, symbol)

    @classmethod
    def variable(cls, root: Root, symbol: str = "x", universe: Optional[FrozenSet[Root]] = None) -> "Polynomial":
        return cls({((Root(*root), 1),): Fraction(1)}, symbol, universe)

    def _universe_with(self, other: "Polynomial") -> Optional[FrozenSet[Root]]:
        if self.universe is None or other.universe is None:
            return self.universe if other.universe is None else other.universe
        if self.universe is other.universe or self.universe == other.universe:
            return self.universe
        return self.universe | other.universe

    @staticmethod
    def _lift(other: Union["Polynomial", Scalar], symbol: str) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other, symbol)

    def __add__(self, other):
        other = self._lift(other, self.symbol)
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coef
        return Polynomial(terms, self.symbol, self._universe_with(other))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.symbol, self.universe)

    def __sub__(self, other):
        return self + (-self._lift(other, self.symbol))

    def __rsub__(self, other):
        return self._lift(other, self.symbol) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            scale = Fraction(other)
            return Polynomial({m: c * scale for m, c in self.terms.items()}, self.symbol, self.universe)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.symbol)
        terms: Dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = _mono_mul(ma, mb)
                terms[mono] = terms.get(mono, Fraction(0)) + ca * cb
        return Polynomial(terms, self.symbol, self._universe_with(other))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(1, self.symbol)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.symbol)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> FrozenSet[Root]:
        return frozenset(root for mono in self.terms for root, _ in mono)

    def degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self.terms), default=0)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical order: lexicographic on the (row, col, exp) sequence"""
        return sorted(self.terms.items(), key=lambda item: tuple((r.row, r.col, e) for r, e in item[0]))

    def evaluate(self, values: Mapping[Root, Scalar]) -> Fraction:
        """
        Evaluate at a point

        Args:
            values: Value of every variable occurring in the polynomial

        Returns:
            Exact rational value
        """
        total = Fraction(0)
        for mono, coef in self.terms.items():
            term = coef
            for root, e in mono:
                try:
                    value = values[root]
                except KeyError:
                    raise MissingVariable("no value for variable", root)
                term *= Fraction(value) ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[Root, Union["Polynomial", Scalar]], symbol: Optional[str] = None) -> "Polynomial":
        """Replace variables by polynomials or numbers; unmapped variables stay"""
        symbol = symbol or self.symbol
        result = Polynomial.zero(symbol)
        for mono, coef in self.terms.items():
            term = Polynomial.constant(coef, symbol)
            for root, e in mono:
                image = mapping.get(root)
                if image is None:
                    term = term * Polynomial({((root, e),): 1}, symbol)
                elif isinstance(image, Polynomial):
                    term = term * image ** e
                else:
                    term = term * (Fraction(image) ** e)
                if term.is_zero():
                    break
            result = result + term
        return result

    def derivative(self, root: Root) -> "Polynomial":
        terms: Dict[Monomial, Fraction] = {}
        for mono, coef in self.terms.items():
            powers = dict(mono)
            e = powers.get(root, 0)
            if e == 0:
                continue
            if e == 1:
                del powers[root]
            else:
                powers[root] = e - 1
            key = tuple(sorted(powers.items()))
            terms[key] = terms.get(key, Fraction(0)) + coef * e
        return Polynomial(terms, self.symbol, self.universe)

    def torus_weight(self, n: int) -> Optional[Tuple[int, ...]]:
        """Character of diag(t) on a weight-homogeneous polynomial, None otherwise"""
        weights = {_monomial_weight(mono, n) for mono in self.terms}
        if len(weights) > 1:
            return None
        return weights.pop() if weights else (0,) * n

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, coef in self.sorted_terms():
            factors = [
                f"{self.symbol}({r.row},{r.col})" + (f"^{e}" if e > 1 else "") for r, e in mono
            ]
            magnitude = abs(coef)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(magnitude)] + factors)
            sign = "-" if coef < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    __repr__ = __str__


def _monomial_weight(mono: Monomial, n: int) -> Tuple[int, ...]:
    weight = [0] * n
    for root, e in mono:
        weight[root.row - 1] += e
        weight[root.col - 1] -= e
    return tuple(weight)


class RationalExpr:
    """Unreduced quotient num/den; equality by cross-multiplication"""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Optional[Polynomial] = None):
        den = den if den is not None else Polynomial.constant(1, num.symbol)
        if den.is_zero():
            raise VanishingDenominator("zero denominator")
        self.num = num
        self.den = den

    def __mul__(self, other: "RationalExpr") -> "RationalExpr":
        return RationalExpr(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalExpr") -> "RationalExpr":
        return RationalExpr(self.num * other.den, self.den * other.num)

    def evaluate(self, values: Mapping[Root, Scalar]) -> Fraction:
        den = self.den.evaluate(values)
        if den == 0:
            raise DegenerateInput("denominator vanishes at the point")
        return self.num.evaluate(values) / den

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


def ratexpr_equal(a: RationalExpr, b: RationalExpr) -> bool:
    return a.num * b.den == b.num * a.den


class PolyMatrix:
    """Dense rectangular grid of polynomials"""

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        self.entries: List[List[Polynomial]] = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged polynomial matrix")

    def __getitem__(self, index: Tuple[int, int]) -> Polynomial:
        i, j = index
        return self.entries[i - 1][j - 1]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        """1-based row and column selection"""
        return PolyMatrix([[self.entries[i - 1][j - 1] for j in cols] for i in rows])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Polynomial.zero()
                for k in range(self.cols):
                    a, b = self.entries[i][k], other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)


def formal_matrix(n: int, M: Iterable[Root]) -> PolyMatrix:
    """The n x n matrix with x_{i,j} on the cells of M and zero elsewhere"""
    M = frozenset(M)
    return PolyMatrix([
        [Polynomial.variable(Root(i, j), universe=M) if Root(i, j) in M else Polynomial.zero()
         for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ])


def _laplace(size: int, entry: Callable[[int, int], object], zero, one, is_zero: Callable[[object], bool]):
    memo: Dict[Tuple[int, int], object] = {}

    def expand(row: int, mask: int):
        if row == size:
            return one
        key = (row, mask)
        if key in memo:
            return memo[key]
        total = zero
        sign = 1
        for col in range(size):
            if not mask & (1 << col):
                continue
            a = entry(row, col)
            if not is_zero(a):
                minor = expand(row + 1, mask & ~(1 << col))
                if not is_zero(minor):
                    total = total + a * minor if sign > 0 else total - a * minor
            sign = -sign
        memo[key] = total
        return total

    return expand(0, (1 << size) - 1)


def poly_det(m: PolyMatrix, cap: Optional[int] = None) -> Polynomial:
    """
    Determinant by cofactor expansion along rows, memoized on the used columns

    Args:
        m: Square polynomial matrix
        cap: Maximal size, defaults to the configured PINV_DET_SIZE_CAP

    Returns:
        Exact determinant
    """
    if m.rows != m.cols:
        raise NotSquare(f"matrix is {m.rows}x{m.cols}")
    cap = cap if cap is not None else get_settings().det_size_cap
    if m.rows > cap:
        raise SizeCapExceeded(f"determinant of size {m.rows} exceeds the cap {cap}")
    return _laplace(
        m.rows, lambda i, j: m.entries[i][j], Polynomial.zero(), Polynomial.constant(1),
        lambda p: p.is_zero(),
    )


def fraction_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a numeric matrix by fraction elimination"""
    a = [[Fraction(v) for v in row] for row in rows]
    size = len(a)
    if any(len(row) != size for row in a):
        raise NotSquare(f"matrix is {size}x{len(a[0]) if a else 0}")
    det = Fraction(1)
    for k in range(size):
        pivot = next((r for r in range(k, size) if a[r][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for r in range(k + 1, size):
            factor = a[r][k] / a[k][k]
            if factor:
                for c in range(k, size):
                    a[r][c] -= factor * a[k][c]
    return det


class PointM(BaseModel):
    """Exact point of the nilradical: every coordinate of M listed, zeros included"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    values: Dict[Root, Fraction]

    @classmethod
    def build(cls, n: int, M: Iterable[Root], values: Mapping[Tuple[int, int], Scalar]) -> "PointM":
        """
        Build a point whose domain is exactly M

        Args:
            n: Matrix size
            M: Nilradical roots
            values: Coordinate values

        Returns:
            The point
        """
        M = frozenset(M)
        clean: Dict[Root, Fraction] = {}
        for key, value in values.items():
            root = Root(*key)
            if root not in M:
                raise BadIndices("coordinate outside the nilradical", root)
            clean[root] = Fraction(value)
        for root in sorted(M):
            if root not in clean:
                raise MissingValue("coordinate missing from the point", root)
        return cls(n=n, values=clean)

    def __getitem__(self, root: Tuple[int, int]) -> Fraction:
        return self.values[Root(*root)]

    def matrix(self) -> List[List[Fraction]]:
        grid = [[Fraction(0)] * self.n for _ in range(self.n)]
        for root, value in self.values.items():
            grid[root.row - 1][root.col - 1] = value
        return grid

    def support(self) -> FrozenSet[Root]:
        return frozenset(root for root, value in self.values.items() if value != 0)
