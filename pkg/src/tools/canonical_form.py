"""
Canonical representatives of generic B-orbits.

Points of the slice Y are brought to the slice X by the torus alone. Any other
generic point is canonicalized through the values of the A and B invariants,
solved in numbering order.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from ..models.errors import (
    CertificateFailure,
    DegenerateInput,
    DegenerateOrbit,
    InternalContradiction,
    MissingValue,
    NotYPoint,
    WrongSupport,
    ZeroCoefficient,
)
from ..models.types import (
    BlockStructure,
    ParabolicStructure,
    ReductionTranscript,
    Root,
    SliceKind,
    TorusStep,
)
from .exact_algebra import PointM
from .group_action import GroupElement, adjoint, torus_generator
from .invariants import InvariantBuilder
from .root_combinatorics import sorted_roots

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class SlicePoint(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: PointM
    kind: SliceKind
    coefficients: Dict[Root, Fraction]


def _full_point(structure: ParabolicStructure, support: Mapping[Root, Fraction]) -> PointM:
    values = {root: Fraction(0) for root in structure.roots.M}
    values.update(support)
    return PointM(n=structure.n, values=values)


def make_Y_point(structure: ParabolicStructure, coeffs: Mapping[Tuple[int, int], Scalar]) -> SlicePoint:
    """
    Point supported exactly on the extended base

    Args:
        structure: Analyzed parabolic structure
        coeffs: Nonzero coefficient of every root of S and Phi

    Returns:
        The slice point of kind Y
    """
    extended = structure.extended.extended
    clean: Dict[Root, Fraction] = {}
    for key, value in coeffs.items():
        root = Root(*key)
        if root not in extended:
            raise WrongSupport("coefficient outside the extended base", root)
        if value == 0:
            raise ZeroCoefficient("coefficient must be nonzero", root)
        clean[root] = Fraction(value)
    for root in sorted_roots(extended):
        if root not in clean:
            raise WrongSupport("extended-base coefficient missing", root)
    return SlicePoint(point=_full_point(structure, clean), kind=SliceKind.Y, coefficients=clean)


def make_X_point(structure: ParabolicStructure, coeffs: Mapping[Tuple[int, int], Scalar]) -> SlicePoint:
    """Ones on the extended base outside Psi, the given nonzero coefficients on Psi"""
    psi = structure.psi
    clean: Dict[Root, Fraction] = {}
    for key, value in coeffs.items():
        root = Root(*key)
        if root not in psi:
            raise WrongSupport("coefficient outside Psi", root)
        if value == 0:
            raise ZeroCoefficient("coefficient must be nonzero", root)
        clean[root] = Fraction(value)
    for root in sorted_roots(psi):
        if root not in clean:
            raise WrongSupport("Psi coefficient missing", root)
    support = {root: Fraction(1) for root in structure.extended.extended}
    support.update(clean)
    return SlicePoint(point=_full_point(structure, support), kind=SliceKind.X, coefficients=clean)


def is_Y_point(structure: ParabolicStructure, point: PointM) -> bool:
    return point.support() == structure.extended.extended


def is_X_point(structure: ParabolicStructure, point: PointM) -> bool:
    if not is_Y_point(structure, point):
        return False
    psi = structure.psi
    return all(point[root] == 1 for root in structure.extended.extended if root not in psi)


def as_slice_point(structure: ParabolicStructure, point: PointM) -> SlicePoint:
    """Classify a point of the nilradical as a Y point (or X point)"""
    if not is_Y_point(structure, point):
        raise NotYPoint("point is not supported exactly on the extended base")
    if is_X_point(structure, point):
        return SlicePoint(point=point, kind=SliceKind.X,
                          coefficients={root: point[root] for root in sorted_roots(structure.psi)})
    return SlicePoint(point=point, kind=SliceKind.Y,
                      coefficients={root: point[root] for root in sorted_roots(structure.extended.extended)})


def record_blocks(bs: BlockStructure) -> Tuple[int, ...]:
    """a_1 = 1, then every block larger than the previous record (and than 1)"""
    records = [1]
    record = bs.size(1)
    for k in range(2, bs.u + 1):
        if bs.size(k) > max(record, 1):
            records.append(k)
            record = bs.size(k)
    return tuple(records)


def reduction_step(bs: BlockStructure, column: int) -> int:
    """Step (1..5) of the torus reduction that fixes the cells of a column"""
    a = record_blocks(bs)
    p = len(a)
    if p == 1:
        if column == bs.R(1) + 1:
            return 1
        return 2 if column <= bs.R(1) else 5
    if column == bs.R(a[1]) + 1:
        return 1
    if column <= bs.R(a[1]):
        return 2
    for k in range(3, p + 1):
        if bs.R(a[k - 2]) + 2 <= column <= bs.R(a[k - 1]):
            return 3
        if column == bs.R(a[k - 1]) + 1:
            return 4
    return 5


class _Components:
    """Union-find over matrix indices with explicit member lists"""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.members = {i: [i] for i in range(1, n + 1)}

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if len(self.members[ri]) < len(self.members[rj]):
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.members[ri].extend(self.members.pop(rj))


def t_reduce(structure: ParabolicStructure, y: SlicePoint) -> Tuple[SlicePoint, ReductionTranscript]:
    """
    Bring a Y point to the slice X with torus generators only

    Cells of the extended base outside Psi are fixed column group by column
    group in the step order. A cell joining two index components is made 1 by
    scaling one whole component, which leaves already fixed cells alone.

    Args:
        structure: Analyzed parabolic structure
        y: Point of the slice Y

    Returns:
        The X point and the transcript of generators h_i(b)
    """
    if y.kind not in (SliceKind.Y, SliceKind.X) or not is_Y_point(structure, y.point):
        raise NotYPoint("t_reduce needs a point of the slice Y")

    bs = structure.blocks
    psi = structure.psi
    values = dict(y.point.values)
    targets = sorted(
        (root for root in structure.extended.extended if root not in psi),
        key=lambda r: (reduction_step(bs, r.col), r.col, r.row),
    )

    components = _Components(bs.n)
    steps: List[TorusStep] = []

    def scale(indices: List[int], b: Fraction, step: int) -> None:
        for k in sorted(indices):
            steps.append(TorusStep(i=k, b=b, step=step))
            for root in values:
                if root.row == k:
                    values[root] *= b
                elif root.col == k:
                    values[root] /= b

    for root in targets:
        v = values[root]
        if v == 0:
            raise DegenerateInput("coordinate read by the reduction is zero", root)
        step = reduction_step(bs, root.col)
        ci, cj = components.find(root.row), components.find(root.col)
        if ci == cj:
            if v != 1:
                raise DegenerateInput("cycle in the extended base forces a coordinate", root)
            continue
        if v != 1:
            if step in (1, 2):
                scale(components.members[ci], 1 / v, step)
            else:
                scale(components.members[cj], v, step)
        components.union(root.row, root.col)
        logger.debug("step %d fixed %s", step, root)

    reduced = PointM(n=bs.n, values=values)
    transcript = ReductionTranscript(steps=tuple(steps))

    g = GroupElement.identity(bs.n)
    for s in steps:
        g = torus_generator(bs.n, s.i, s.b) @ g
    if adjoint(g, y.point) != reduced:
        raise InternalContradiction("transcript does not reproduce the reduced point")
    if not is_X_point(structure, reduced):
        raise InternalContradiction("reduced point is not in the slice X")

    x = SlicePoint(point=reduced, kind=SliceKind.X,
                   coefficients={root: reduced[root] for root in sorted_roots(psi)})
    return x, transcript


def invariant_values(structure: ParabolicStructure, point: PointM,
                     builder: Optional[InvariantBuilder] = None) -> Dict[Root, Fraction]:
    """Values of every A and B invariant at a point"""
    builder = builder or InvariantBuilder(structure)
    return {inv.root: builder.evaluate(inv, point.values) for inv in builder.invariants()}


def invariants_to_canonical(structure: ParabolicStructure, values: Mapping[Root, Fraction],
                            builder: Optional[InvariantBuilder] = None) -> Dict[Root, Fraction]:
    """
    Solve the images on X for the coefficients c_psi, in numbering order

    Args:
        structure: Analyzed parabolic structure
        values: Value of the A or B invariant of every root of Psi

    Returns:
        Coefficients of the canonical X representative
    """
    builder = builder or InvariantBuilder(structure)
    psi_set = structure.psi
    solved: Dict[Root, Fraction] = {}

    def tilde(root: Root) -> Fraction:
        if root not in psi_set:
            return Fraction(1)
        if root not in solved:
            raise CertificateFailure("witness root is numbered after the root it serves", root)
        return solved[root]

    for psi in structure.certificates.numbering:
        if psi not in values:
            raise MissingValue("no invariant value for root", psi)
        value = Fraction(values[psi])
        if value == 0:
            raise DegenerateOrbit("invariant vanishes, orbit is not generic", psi)
        image = builder.restriction_image(psi)
        factor = Fraction(image.sign)
        for root in image.numerator:
            factor *= tilde(root)
        for root in image.denominator:
            factor /= tilde(root)
        if factor == 0:
            raise DegenerateOrbit("division by zero in the canonical solve", psi)
        solved[psi] = value / factor
    return solved


def canonicalize_point(structure: ParabolicStructure, point: PointM,
                       builder: Optional[InvariantBuilder] = None
                       ) -> Tuple[SlicePoint, Optional[ReductionTranscript]]:
    """
    Canonical X representative of the orbit of a generic point

    Y points go through t_reduce and come with a transcript; other points are
    solved from their invariant values.
    """
    if is_Y_point(structure, point):
        return t_reduce(structure, as_slice_point(structure, point))
    builder = builder or InvariantBuilder(structure)
    coefficients = invariants_to_canonical(structure, invariant_values(structure, point, builder), builder)
    return make_X_point(structure, coefficients), None


def orbit_dimension(bs: BlockStructure, psi) -> int:
    """dim m - |Psi| for orbits in general position"""
    total = sum(bs.sizes) ** 2 - sum(r * r for r in bs.sizes)
    return total // 2 - len(psi)


def orbit_report(structure: ParabolicStructure) -> Dict[str, int]:
    return {
        "dim_m": structure.roots.dim_m,
        "psi": len(structure.psi),
        "orbit_dimension": orbit_dimension(structure.blocks, structure.psi),
    }
