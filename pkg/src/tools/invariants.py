"""
N-invariants (base minors M and the sums L) and B-invariants (A and B quotients).

Invariants of the two series are kept as signed products of M and L factors,
so they evaluate factor by factor and expand to a RationalExpr on demand.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, PrivateAttr

from ..models.errors import (
    CaseMismatch,
    CertificateFailure,
    DegenerateInput,
    MissingWitness,
    NotAdmissible,
    VanishingDenominator,
)
from ..models.types import (
    AdmissiblePair,
    CaseTag,
    CorrectionKind,
    InvariantKind,
    ParabolicStructure,
    RestrictionImage,
    Root,
)
from .exact_algebra import Polynomial, PolyMatrix, RationalExpr, formal_matrix, fraction_det, poly_det
from .root_combinatorics import nested_layers, psi1_witnesses, sorted_roots

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]


class Factor(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: InvariantKind
    root: Root
    exponent: int = 1

    def __str__(self) -> str:
        power = abs(self.exponent)
        return f"{self.kind.value}{self.root}" + (f"^{power}" if power > 1 else "")


class Invariant(BaseModel):
    """Product of M and L factors with signed exponents"""

    model_config = ConfigDict(frozen=True)

    kind: InvariantKind
    root: Root
    factors: Tuple[Factor, ...]
    witnesses: Dict[str, Root] = {}
    correction: CorrectionKind = CorrectionKind.NONE

    @property
    def numerator(self) -> List[Factor]:
        return [f for f in self.factors if f.exponent > 0]

    @property
    def denominator(self) -> List[Factor]:
        return [f for f in self.factors if f.exponent < 0]

    def __str__(self) -> str:
        num = "*".join(map(str, self.numerator)) or "1"
        den = "*".join(map(str, self.denominator))
        return f"{self.kind.value}{self.root} = {num}" + (f" / ({den})" if den else "")


class InvariantFamily(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    minors: Dict[Root, Polynomial]
    lpolys: Dict[Root, Polynomial]
    a_inv: Dict[Root, Invariant]
    b_inv: Dict[Root, Invariant]


def s_gamma(gamma: Root, base: Iterable[Root]) -> Tuple[List[int], List[int]]:
    """
    Ordered rows and columns of the minor attached to gamma

    Args:
        gamma: Root (a, b)
        base: Base roots

    Returns:
        (I, J) with I = {a} and the rows of S_gamma, J = the columns of S_gamma and {b}
    """
    a, b = gamma
    inside = [xi for xi in base if xi.row > a and xi.col < b]
    rows = sorted([a] + [xi.row for xi in inside])
    cols = sorted([xi.col for xi in inside] + [b])
    return rows, cols


def _unit(n: int, index: int, sign: int = 1) -> List[int]:
    vector = [0] * n
    vector[index - 1] = sign
    return vector


class InvariantBuilder:
    """Builds and evaluates the invariants of one parabolic structure"""

    def __init__(self, structure: ParabolicStructure):
        self.structure = structure
        self.n = structure.n
        self.base = structure.extended.base
        self._X: Optional[PolyMatrix] = None
        self._minors: Dict[Root, Polynomial] = {}
        self._lpolys: Dict[Root, Polynomial] = {}
        self._square: Dict[Tuple[int, int], Polynomial] = {}

    @property
    def X(self) -> PolyMatrix:
        if self._X is None:
            self._X = formal_matrix(self.n, self.structure.roots.M)
        return self._X

    # N-invariants

    def minor_M(self, gamma: Root) -> Polynomial:
        gamma = Root(*gamma)
        if gamma not in self._minors:
            rows, cols = s_gamma(gamma, self.base)
            self._minors[gamma] = poly_det(self.X.submatrix(rows, cols))
        return self._minors[gamma]

    def pair_for(self, phi: Root, pair: Optional[AdmissiblePair] = None) -> AdmissiblePair:
        phi = Root(*phi)
        if pair is None:
            pair = self.structure.extended.pairs.get(phi)
            if pair is None:
                raise NotAdmissible("no admissible pair produces this root", phi)
            return pair
        bs = self.structure.blocks
        first, second = pair.first, pair.second
        if first not in self.base or second not in self.base:
            raise NotAdmissible("pair members must be base roots", phi)
        if not (first.col < second.row and bs.same_block(first.col, second.row)):
            raise NotAdmissible("bridge root is not in the reductive part", phi)
        if phi != Root(first.col, second.col):
            raise NotAdmissible("root does not match the pair", phi)
        return pair

    def L_invariant(self, phi: Root, pair: Optional[AdmissiblePair] = None) -> Polynomial:
        """Sum over the chains through the bridge block of M_(a,m) * M_(m,d)"""
        pair = self.pair_for(phi, pair)
        phi = pair.phi
        if phi in self._lpolys:
            return self._lpolys[phi]
        a, b = pair.first
        c, d = pair.second
        total = Polynomial.zero()
        for m in range(b, c + 1):
            total = total + self.minor_M(Root(a, m)) * self.minor_M(Root(m, d))
        self._lpolys[phi] = total
        return total

    def square_entry(self, i: int, j: int) -> Polynomial:
        """Entry (i, j) of the square of the formal matrix"""
        if (i, j) not in self._square:
            acc = Polynomial.zero()
            for k in range(i + 1, j):
                left, right = self.X[i, k], self.X[k, j]
                if left and right:
                    acc = acc + left * right
            self._square[(i, j)] = acc
        return self._square[(i, j)]

    def combined_minor_block(
        self, rows: Sequence[int], rows2: Sequence[int], cols: Sequence[int], cols2: Sequence[int]
    ) -> Polynomial:
        """
        Block determinant with X on (rows, cols2), X^2 on (rows, cols), zero below and X on (rows2, cols)

        Args:
            rows: Upper row indices I
            rows2: Lower row indices I'
            cols: Right column indices J
            cols2: Left column indices J'

        Returns:
            The determinant, rows ordered I then I', columns J' then J
        """
        zero = Polynomial.zero()
        grid = []
        for i in rows:
            grid.append([self.X[i, j] for j in cols2] + [self.square_entry(i, j) for j in cols])
        for i in rows2:
            grid.append([zero for _ in cols2] + [self.X[i, j] for j in cols])
        return poly_det(PolyMatrix(grid))

    def combined_minor(self, phi: Root, pair: Optional[AdmissiblePair] = None) -> Polynomial:
        pair = self.pair_for(phi, pair)
        rows, cols1 = s_gamma(pair.first, self.base)
        rows2, cols = s_gamma(pair.second, self.base)
        lower = [i for i in rows2 if i != pair.second.row]
        left = [j for j in cols1 if j != pair.first.col]
        return self.combined_minor_block(rows, lower, cols, left)

    # torus weights

    def weight_M(self, gamma: Root) -> Weight:
        rows, cols = s_gamma(Root(*gamma), self.base)
        weight = [0] * self.n
        for i in rows:
            weight[i - 1] += 1
        for j in cols:
            weight[j - 1] -= 1
        return tuple(weight)

    def weight_L(self, phi: Root) -> Weight:
        pair = self.pair_for(phi)
        parts = [
            self.weight_M(pair.first), self.weight_M(pair.second),
            _unit(self.n, pair.first.col), _unit(self.n, pair.second.row, -1),
        ]
        return tuple(map(sum, zip(*parts)))

    def torus_weight(self, inv: Invariant) -> Weight:
        """Character of diag(t) on the invariant; zero for a B-invariant"""
        weight = [0] * self.n
        for factor in inv.factors:
            w = self.weight_M(factor.root) if factor.kind == InvariantKind.M else self.weight_L(factor.root)
            for index, value in enumerate(w):
                weight[index] += factor.exponent * value
        return tuple(weight)

    # B-invariants

    def A_invariant(self, psi: Root, witnesses: Optional[Tuple[Root, Root, Root]] = None) -> Invariant:
        """
        First-series invariant of psi

        Args:
            psi: Root of the first series
            witnesses: Optional explicit (xi1, xi2, xi3), otherwise the certificate's

        Returns:
            L_psi L_xi2 / (L_xi1 L_xi3), or L_psi L_xi2 / (L_xi1 M_gamma M_xi3) when xi3 is a base root
        """
        psi = Root(*psi)
        ext = self.structure.extended
        cert = self.structure.certificates.psi1.get(psi)
        if witnesses is None:
            if cert is None:
                raise MissingWitness("root is not in the first series", psi)
            xi1, xi2, xi3 = cert.xi1, cert.xi2, cert.xi3
        else:
            xi1, xi2, xi3 = (Root(*w) for w in witnesses)
            if (xi1, xi2, xi3) not in psi1_witnesses(ext, psi):
                raise MissingWitness("witnesses do not form a first-series square", psi)

        factors = [Factor(kind=InvariantKind.L, root=psi), Factor(kind=InvariantKind.L, root=xi2),
                   Factor(kind=InvariantKind.L, root=xi1, exponent=-1)]
        named = {"xi1": xi1, "xi2": xi2, "xi3": xi3}
        if xi3 in ext.base:
            pair = ext.pairs.get(xi2)
            if pair is None:
                raise MissingWitness("xi2 has no admissible pair", xi2)
            gamma = pair.first
            named["gamma"] = gamma
            factors += [Factor(kind=InvariantKind.M, root=gamma, exponent=-1),
                        Factor(kind=InvariantKind.M, root=xi3, exponent=-1)]
        else:
            factors.append(Factor(kind=InvariantKind.L, root=xi3, exponent=-1))

        inv = Invariant(kind=InvariantKind.A, root=psi, factors=tuple(factors), witnesses=named)
        if any(self.torus_weight(inv)):
            raise CertificateFailure("first-series quotient is not torus invariant", psi)
        return inv

    def B_invariant(self, psi: Root) -> Invariant:
        """
        Second-series invariant of psi

        The general formula is kept when it has torus weight zero. Otherwise
        the nested minor products are replaced by the monomial in base minors
        that cancels the weight.
        """
        psi = Root(*psi)
        cert = self.structure.certificates.psi2.get(psi)
        if cert is None:
            raise MissingWitness("root is not in the second series", psi)

        bs = self.structure.blocks
        r_s, r_t = bs.size(cert.s), bs.size(cert.t)
        if cert.simple != (cert.t == cert.s + 1 and 2 in (r_s, r_t)):
            raise CaseMismatch("simple flag disagrees with the block sizes", psi)
        expected = CaseTag.EQUAL if r_s == r_t else CaseTag.S_LESS if r_s < r_t else CaseTag.S_GREATER
        if cert.case != expected:
            raise CaseMismatch(f"case {cert.case.value} disagrees with r_s={r_s}, r_t={r_t}", psi)

        def M(root: Root, exponent: int = 1) -> Factor:
            return Factor(kind=InvariantKind.M, root=root, exponent=exponent)

        def L(root: Root, exponent: int = 1) -> Factor:
            return Factor(kind=InvariantKind.L, root=root, exponent=exponent)

        if cert.case == CaseTag.EQUAL:
            d = [M(cert.gamma1, -1), M(cert.gamma3, -1), M(cert.gamma5, -1)]
        elif cert.case == CaseTag.S_LESS:
            if cert.xi2 is None:
                raise MissingWitness("xi2 is required when r_s < r_t", psi)
            d = [M(cert.gamma1, -1), L(cert.xi2, -1)]
        else:
            if cert.xi3 is None:
                raise MissingWitness("xi3 is required when r_s > r_t", psi)
            d = [M(cert.gamma3, -1), L(cert.xi3, -1)]

        core = [L(cert.xi1), L(psi)] + d
        named = {k: v for k, v in cert.model_dump(include={
            "xi1", "xi2", "xi3", "gamma1", "gamma2", "gamma3", "gamma4", "gamma5"}).items() if v is not None}
        named = {k: Root(*v) for k, v in named.items()}

        if cert.simple:
            inv = Invariant(kind=InvariantKind.B, root=psi, factors=tuple(core), witnesses=named)
        else:
            base = self.structure.extended.base
            up, _ = nested_layers(cert.gamma5, base)
            down1, down2 = nested_layers(cert.gamma4, base)
            nested = [M(mu) for mu in sorted_roots(up)]
            nested += [M(mu, -1) for mu in sorted_roots(down1)] + [M(mu, -1) for mu in sorted_roots(down2)]
            inv = Invariant(kind=InvariantKind.B, root=psi, factors=tuple(core + nested),
                            witnesses=named, correction=CorrectionKind.NESTED)

        if any(self.torus_weight(inv)):
            inv = self._balance(psi, core, named)
        return inv

    def _balance(self, psi: Root, core: List[Factor], named: Dict[str, Root]) -> Invariant:
        base = sorted_roots(self.structure.extended.base)
        core_invariant = Invariant(kind=InvariantKind.B, root=psi, factors=tuple(core))
        target = [-w for w in self.torus_weight(core_invariant)]

        A = sympy.Matrix([[self.weight_M(xi)[i] for xi in base] for i in range(self.n)])
        try:
            solution, params = A.gauss_jordan_solve(sympy.Matrix(target))
        except ValueError:
            raise CertificateFailure("no monomial in base minors balances the torus weight", psi)
        if params.shape[0]:
            solution = solution.subs({p: 0 for p in params})
        exponents = [sympy.Rational(v) for v in solution]
        if any(e.q != 1 for e in exponents):
            raise CertificateFailure("balancing monomial is not integral", psi)

        extra = [Factor(kind=InvariantKind.M, root=xi, exponent=int(e)) for xi, e in zip(base, exponents) if e != 0]
        inv = Invariant(kind=InvariantKind.B, root=psi, factors=tuple(core + extra),
                        witnesses=named, correction=CorrectionKind.BALANCED)
        logger.warning("second-series invariant of %s rebalanced: %s", psi, inv)
        return inv

    def family(self) -> InvariantFamily:
        ext = self.structure.extended
        certificates = self.structure.certificates
        return InvariantFamily(
            minors={xi: self.minor_M(xi) for xi in sorted_roots(ext.base)},
            lpolys={phi: self.L_invariant(phi) for phi in sorted_roots(ext.phi)},
            a_inv={psi: self.A_invariant(psi) for psi in sorted_roots(certificates.psi1)},
            b_inv={psi: self.B_invariant(psi) for psi in sorted_roots(certificates.psi2)},
        )

    def invariants(self) -> List[Invariant]:
        """A and B invariants in numbering order"""
        certificates = self.structure.certificates
        return [
            self.A_invariant(psi) if psi in certificates.psi1 else self.B_invariant(psi)
            for psi in certificates.numbering
        ]

    # expansion and evaluation

    def factor_poly(self, factor: Factor) -> Polynomial:
        return self.minor_M(factor.root) if factor.kind == InvariantKind.M else self.L_invariant(factor.root)

    def expand(self, inv: Invariant) -> RationalExpr:
        num = Polynomial.constant(1)
        den = Polynomial.constant(1)
        for factor in inv.factors:
            poly = self.factor_poly(factor) ** abs(factor.exponent)
            if factor.exponent > 0:
                num = num * poly
            else:
                den = den * poly
        return RationalExpr(num, den)

    def _numeric_M(self, grid: List[List[Fraction]], gamma: Root) -> Fraction:
        rows, cols = s_gamma(gamma, self.base)
        return fraction_det([[grid[i - 1][j - 1] for j in cols] for i in rows])

    def _numeric_L(self, grid: List[List[Fraction]], phi: Root) -> Fraction:
        pair = self.pair_for(phi)
        a, b = pair.first
        c, d = pair.second
        return sum(
            (self._numeric_M(grid, Root(a, m)) * self._numeric_M(grid, Root(m, d)) for m in range(b, c + 1)),
            Fraction(0),
        )

    def factor_values(self, values: Mapping[Root, Fraction], factors: Iterable[Factor]) -> Dict[Factor, Fraction]:
        grid = [[Fraction(0)] * self.n for _ in range(self.n)]
        for root, value in values.items():
            grid[root.row - 1][root.col - 1] = Fraction(value)
        out = {}
        for factor in factors:
            key = factor.model_copy(update={"exponent": 1})
            if key not in out:
                out[key] = (self._numeric_M(grid, factor.root) if factor.kind == InvariantKind.M
                            else self._numeric_L(grid, factor.root))
        return out

    def evaluate(self, inv: Invariant, values: Mapping[Root, Fraction]) -> Fraction:
        """
        Exact value of an invariant at a point

        Raises:
            DegenerateInput: a denominator factor vanishes at the point
        """
        table = self.factor_values(values, inv.factors)
        result = Fraction(1)
        for factor in inv.factors:
            value = table[factor.model_copy(update={"exponent": 1})]
            if factor.exponent < 0 and value == 0:
                raise DegenerateInput(f"denominator factor {factor} vanishes", factor.root)
            result *= value ** factor.exponent
        return result

    def evaluate_M(self, gamma: Root, values: Mapping[Root, Fraction]) -> Fraction:
        return self.evaluate(Invariant(kind=InvariantKind.M, root=gamma, factors=(Factor(kind=InvariantKind.M, root=gamma),)), values)

    def evaluate_L(self, phi: Root, values: Mapping[Root, Fraction]) -> Fraction:
        return self.evaluate(Invariant(kind=InvariantKind.L, root=phi, factors=(Factor(kind=InvariantKind.L, root=phi),)), values)

    # restriction to the slice X

    def pi_mapping(self) -> Dict[Root, object]:
        psi = self.structure.psi
        extended = self.structure.extended.extended
        mapping: Dict[Root, object] = {}
        for root in self.structure.roots.M:
            if root in psi:
                mapping[root] = Polynomial.variable(root, symbol="c")
            elif root in extended:
                mapping[root] = 1
            else:
                mapping[root] = 0
        return mapping

    def restrict_pi(self, f: RationalExpr) -> RationalExpr:
        """Substitute c_psi on Psi, 1 on the rest of the extended base and 0 elsewhere"""
        mapping = self.pi_mapping()
        den = f.den.substitute(mapping, symbol="c")
        if den.is_zero():
            raise VanishingDenominator("denominator vanishes identically on the slice X")
        return RationalExpr(f.num.substitute(mapping, symbol="c"), den)

    def restrict_invariant(self, inv: Invariant) -> RationalExpr:
        """Factor-wise restriction, same value as restrict_pi(expand(inv))"""
        mapping = self.pi_mapping()
        num = Polynomial.constant(1, "c")
        den = Polynomial.constant(1, "c")
        for factor in inv.factors:
            image = self.factor_poly(factor).substitute(mapping, symbol="c") ** abs(factor.exponent)
            if factor.exponent > 0:
                num = num * image
            else:
                if image.is_zero():
                    raise VanishingDenominator(f"factor {factor} vanishes on the slice X", factor.root)
                den = den * image
        return RationalExpr(num, den)

    def restriction_image(self, psi: Root) -> RestrictionImage:
        """
        Closed form of the invariant of psi on the slice X

        The sign is the value of the invariant at the point with every
        extended-base coordinate equal to 1.
        """
        psi = Root(*psi)
        certificates = self.structure.certificates
        if psi in certificates.psi1:
            cert = certificates.psi1[psi]
            inv = self.A_invariant(psi)
            num = (cert.xi2,)
            den = (cert.xi1,) if cert.xi3_in_base else (cert.xi1, cert.xi3)
        elif psi in certificates.psi2:
            cert = certificates.psi2[psi]
            inv = self.B_invariant(psi)
            num = (cert.xi1,)
            den = {CaseTag.EQUAL: (), CaseTag.S_LESS: (cert.xi2,), CaseTag.S_GREATER: (cert.xi3,)}[cert.case]
        else:
            raise MissingWitness("root is not in Psi", psi)

        ones = {root: Fraction(1) for root in self.structure.extended.extended}
        sign = self.evaluate(inv, ones)
        if sign not in (1, -1):
            raise CertificateFailure(f"invariant takes the value {sign} at the unit point of X", psi)
        return RestrictionImage(psi=psi, kind=inv.kind, sign=int(sign), numerator=num, denominator=den)


def image_polynomials(image: RestrictionImage, psi_set: Iterable[Root]) -> RationalExpr:
    """The closed form sign * c_psi * prod c~(num) / prod c~(den) as polynomials in c"""
    psi_set = frozenset(psi_set)

    def tilde(root: Root) -> Polynomial:
        return Polynomial.variable(root, symbol="c") if root in psi_set else Polynomial.constant(1, "c")

    num = Polynomial.variable(image.psi, symbol="c") * image.sign
    for root in image.numerator:
        num = num * tilde(root)
    den = Polynomial.constant(1, "c")
    for root in image.denominator:
        den = den * tilde(root)
    return RationalExpr(num, den)
