"""
Root combinatorics of a parabolic nilradical in gl(n).

Builds the block structure, the base S (layer by layer from minimal
elements), the admissible pairs with their roots Phi, and the first and
second series of Psi together with the auxiliary roots each one needs.
"""

import logging
import random
from itertools import accumulate
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from ..models.errors import CertificateFailure, EmptyInput, InternalContradiction, NonPositive
from ..models.types import (
    AdmissiblePair,
    BlockStructure,
    CaseTag,
    ExtendedBase,
    ParabolicStructure,
    Psi1Certificate,
    Psi2Certificate,
    PsiCertificates,
    Root,
    RootSets,
)

logger = logging.getLogger(__name__)


def build_block_structure(sizes: Sequence[int]) -> Tuple[BlockStructure, RootSets]:
    """
    Build the block structure and root sets for diagonal block sizes

    Args:
        sizes: Block sizes (r_1, ..., r_u)

    Returns:
        The block structure and the sets M (nilradical) and delta_r (reductive part)
    """
    sizes = tuple(int(r) for r in sizes)
    if not sizes:
        raise EmptyInput("block sizes are empty")
    for r in sizes:
        if r < 1:
            raise NonPositive(f"block size {r} is not positive")

    prefix = tuple(accumulate(sizes))
    n = prefix[-1]
    block_index = tuple(k for k, r in enumerate(sizes, start=1) for _ in range(r))
    bs = BlockStructure(sizes=sizes, n=n, prefix=prefix, block_index=block_index)

    M: Set[Root] = set()
    delta_r: Set[Root] = set()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            (delta_r if bs.same_block(i, j) else M).add(Root(i, j))

    return bs, RootSets(M=frozenset(M), delta_r=frozenset(delta_r))


def root_gt(a: Root, b: Root) -> bool:
    """True iff a - b is a positive root. Not an order relation."""
    return (a.row == b.row and a.col > b.col) or (a.col == b.col and a.row < b.row)


def is_nested(inner: Root, outer: Root) -> bool:
    """inner lies strictly inside outer: rows greater, columns smaller"""
    return outer.row < inner.row and inner.col < outer.col


def sorted_roots(roots: Iterable[Root]) -> List[Root]:
    """Rows ascending, then columns ascending"""
    return sorted(roots)


def _minimal_elements(roots: Set[Root], order: List[Root]) -> List[Root]:
    leftmost: Dict[int, int] = {}
    lowest: Dict[int, int] = {}
    for root in order:
        leftmost[root.row] = min(leftmost.get(root.row, root.col), root.col)
        lowest[root.col] = max(lowest.get(root.col, root.row), root.row)
    return [r for r in order if leftmost[r.row] == r.col and lowest[r.col] == r.row]


def compute_base(bs: BlockStructure, shuffle: Optional[random.Random] = None) -> Tuple[Tuple[Root, ...], ...]:
    """
    Extract the base layer by layer

    Each layer is the set of minimal elements of the surviving roots. A layer
    removes itself together with every root greater than one of its roots
    (same row further right, same column further up).

    Args:
        bs: Block structure
        shuffle: Optional generator used to permute the internal iteration order

    Returns:
        Layers S_1, S_2, ... as sorted tuples
    """
    _, roots = build_block_structure(bs.sizes)
    remaining: Set[Root] = set(roots.M)
    layers: List[Tuple[Root, ...]] = []

    while remaining:
        order = list(remaining)
        if shuffle is not None:
            shuffle.shuffle(order)
        layer = _minimal_elements(remaining, order)
        if not layer:
            raise InternalContradiction("no minimal element in a nonempty root set")

        rows = {r.row: r.col for r in layer}
        cols = {r.col: r.row for r in layer}
        remaining = {
            r for r in remaining
            if not (r.row in rows and r.col >= rows[r.row])
            and not (r.col in cols and r.row <= cols[r.col])
        }
        layers.append(tuple(sorted_roots(layer)))
        logger.debug("base layer %d: %s", len(layers), ", ".join(map(str, layers[-1])))

    base = frozenset(r for layer in layers for r in layer)
    check_base(bs, roots.M, base)
    return tuple(layers)


def check_base(bs: BlockStructure, M: FrozenSet[Root], base: FrozenSet[Root]) -> None:
    """Verify antichain, covering and the one-root-per-row/column property"""
    for a in base:
        for b in base:
            if root_gt(a, b):
                raise InternalContradiction(f"base roots {a} and {b} are comparable", a)

    for gamma in M - base:
        if not any(root_gt(gamma, xi) for xi in base):
            raise InternalContradiction("root is not above any base root", gamma)

    rows = [r.row for r in base]
    cols = [r.col for r in base]
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise InternalContradiction("two base roots share a row or a column")


def antidiagonal(bs: BlockStructure, i: int) -> List[Root]:
    """Antidiagonal of the block between diagonal blocks i and i+1"""
    R = bs.R(i)
    depth = min(bs.size(i), bs.size(i + 1))
    return [Root(R - d, R + 1 + d) for d in range(depth)]


def compute_extended_base(bs: BlockStructure, layers: Tuple[Tuple[Root, ...], ...]) -> ExtendedBase:
    """
    Pair up base roots through bridge roots of the reductive part

    Args:
        bs: Block structure
        layers: Base layers from compute_base

    Returns:
        The extended base with every admissible pair keyed by its root phi
    """
    base = frozenset(r for layer in layers for r in layer)
    pairs: Dict[Root, AdmissiblePair] = {}

    for xi in sorted_roots(base):
        for xi2 in sorted_roots(base):
            if not (xi.col < xi2.row and bs.same_block(xi.col, xi2.row)):
                continue
            phi = Root(xi.col, xi2.col)
            if bs.same_block(phi.row, phi.col):
                raise InternalContradiction("admissible root lies outside the nilradical", phi)
            if phi in base:
                raise InternalContradiction("admissible root collides with the base", phi)
            if phi in pairs:
                raise InternalContradiction("two admissible pairs give the same root", phi)
            pairs[phi] = AdmissiblePair(first=xi, second=xi2, bridge=Root(xi.col, xi2.row), phi=phi)

    logger.debug("admissible roots: %s", ", ".join(str(p) for p in sorted_roots(pairs)))
    return ExtendedBase(layers=layers, base=base, phi=frozenset(pairs), pairs=pairs)


def psi1_witnesses(ext: ExtendedBase, psi: Root) -> List[Tuple[Root, Root, Root]]:
    """
    All first-series witness triples (xi1, xi2, xi3) of a root

    The triples come smallest j first and, for equal j, largest a first.
    """
    found = []
    i, b = psi
    extended = ext.extended
    for j in range(i + 1, b):
        for a in range(b - 1, j, -1):
            xi1, xi2, xi3 = Root(i, a), Root(j, a), Root(j, b)
            if xi1 in ext.phi and xi2 in ext.phi and xi3 in extended:
                found.append((xi1, xi2, xi3))
    return found


def psi1_certificate(ext: ExtendedBase, psi: Root, witnesses: Tuple[Root, Root, Root]) -> Psi1Certificate:
    xi1, xi2, xi3 = witnesses
    in_base = xi3 in ext.base
    gamma = ext.pairs[xi2].first if in_base else None
    return Psi1Certificate(psi=psi, xi1=xi1, xi2=xi2, xi3=xi3, xi3_in_base=in_base, gamma=gamma)


def _phi_count(ext: ExtendedBase, row: int) -> int:
    return len(ext.phi_in_row(row))


def _psi2_certificate(bs: BlockStructure, ext: ExtendedBase, psi: Root, t: int, k: int) -> Optional[Psi2Certificate]:
    candidates = [s for s in range(1, t) if _phi_count(ext, bs.R(s - 1) + 1) >= k]
    if not candidates:
        return None
    s = max(candidates)

    exact = [c for c in range(1, t) if _phi_count(ext, bs.R(c - 1) + 1) == k]
    if (max(exact) if exact else None) != s:
        logger.warning(
            "row condition for %s: at-least-%d reading picks block %d, exactly-%d reading picks %s",
            psi, k, s, k, max(exact) if exact else "none",
        )

    row = bs.R(s - 1) + 1
    in_row = ext.phi_in_row(row)
    xi1 = in_row[k - 1]

    gamma1 = Root(bs.R(s - 1), bs.R(s - 1) + 1)
    pair = ext.pairs[psi]
    gamma2, gamma3 = pair.first, pair.second
    if gamma1 not in ext.base:
        raise CertificateFailure("gamma1 is not a base root", gamma1)
    if gamma2.col != bs.R(t - 1) + k:
        raise CertificateFailure("gamma2 sits in the wrong column", gamma2)
    if gamma3 != Root(bs.R(t), bs.R(t) + 1):
        raise CertificateFailure("gamma3 is not the corner root of block t", gamma3)

    gamma4 = ext.base_in_col(bs.R(t - 1) + k + 1)
    if gamma4 is None:
        raise CertificateFailure("no base root in the column of gamma4", psi)

    r_s, r_t = bs.size(s), bs.size(t)
    xi2 = xi3 = None
    if r_s == r_t:
        case = CaseTag.EQUAL
        gamma5 = Root(row, bs.R(t))
        if gamma5 not in ext.base:
            raise CertificateFailure("gamma5 is not a base root", gamma5)
    elif r_s < r_t:
        case = CaseTag.S_LESS
        gamma5 = ext.base_in_row(row)
        if gamma5 is None:
            raise CertificateFailure("no base root in the row of gamma5", psi)
        xi2 = Root(gamma5.col, gamma3.col)
        found = ext.pairs.get(xi2)
        if found is None or (found.first, found.second) != (gamma5, gamma3):
            raise CertificateFailure("gamma5 and gamma3 do not form an admissible pair", xi2)
    else:
        case = CaseTag.S_GREATER
        gamma5 = ext.base_in_col(bs.R(t))
        if gamma5 is None:
            raise CertificateFailure("no base root in the column of gamma5", psi)
        xi3 = Root(row, bs.R(t))
        if xi3 not in ext.phi:
            raise CertificateFailure("xi3 is not an admissible root", xi3)

    simple = t == s + 1 and (r_s == 2 or r_t == 2)
    logger.debug("second series %s: s=%d t=%d k=%d case=%s simple=%s", psi, s, t, k, case.value, simple)
    return Psi2Certificate(
        psi=psi, s=s, t=t, k=k, xi1=xi1,
        gamma1=gamma1, gamma2=gamma2, gamma3=gamma3, gamma4=gamma4, gamma5=gamma5,
        xi2=xi2, xi3=xi3, case=case, simple=simple, row_count=len(in_row),
    )


def compute_psi(bs: BlockStructure, ext: ExtendedBase) -> PsiCertificates:
    """
    Classify admissible roots into the first series, the second series or neither

    Args:
        bs: Block structure
        ext: Extended base

    Returns:
        Certificates for both series and the numbering of Psi
    """
    psi1: Dict[Root, Psi1Certificate] = {}
    for psi in sorted_roots(ext.phi):
        witnesses = psi1_witnesses(ext, psi)
        if witnesses:
            psi1[psi] = psi1_certificate(ext, psi, witnesses[0])

    psi2: Dict[Root, Psi2Certificate] = {}
    for t in range(2, bs.u):
        for k in range(1, bs.size(t)):
            psi = Root(bs.R(t - 1) + k, bs.R(t) + 1)
            if psi not in ext.phi:
                continue
            cert = _psi2_certificate(bs, ext, psi, t, k)
            if cert is None:
                continue
            if psi in psi1:
                logger.warning("%s meets both series conditions, kept in the first series", psi)
                continue
            psi2[psi] = cert

    numbering = psi_numbering(bs, set(psi1) | set(psi2))
    return PsiCertificates(psi1=psi1, psi2=psi2, numbering=tuple(numbering))


def psi_numbering(bs: BlockStructure, psi: Iterable[Root]) -> List[Root]:
    """Bottom up in columns: column ascending, then row descending"""
    return sorted(psi, key=lambda r: (r.col, -r.row))


def nested_layers(gamma: Root, base: Iterable[Root]) -> Tuple[FrozenSet[Root], FrozenSet[Root]]:
    """
    Maximal base roots nested inside gamma, and the maximal ones nested inside those

    Args:
        gamma: Enclosing root
        base: Base roots

    Returns:
        (layer1, layer2)
    """
    base = list(base)

    def maximal_inside(outer: Root) -> Set[Root]:
        inner = [mu for mu in base if is_nested(mu, outer)]
        return {mu for mu in inner if not any(is_nested(mu, nu) for nu in inner)}

    layer1 = maximal_inside(gamma)
    layer2: Set[Root] = set()
    for mu in layer1:
        layer2 |= maximal_inside(mu)
    return frozenset(layer1), frozenset(layer2)


def analyze_structure(sizes: Sequence[int]) -> ParabolicStructure:
    """Run the whole combinatorial pipeline for one choice of block sizes"""
    bs, roots = build_block_structure(sizes)
    layers = compute_base(bs)
    ext = compute_extended_base(bs, layers)
    certificates = compute_psi(bs, ext)
    logger.info(
        "blocks %s: |M|=%d |S|=%d |Phi|=%d |Psi1|=%d |Psi2|=%d",
        ",".join(map(str, bs.sizes)), len(roots.M), len(ext.base), len(ext.phi),
        len(certificates.psi1), len(certificates.psi2),
    )
    return ParabolicStructure(blocks=bs, roots=roots, extended=ext, certificates=certificates)
