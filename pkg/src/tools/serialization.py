import re
from fractions import Fraction
from typing import Any, Dict, List, Tuple, Union

from ..models.errors import BadIndices, EmptyInput, NonPositive, UnsupportedFormat
from ..models.types import InvariantKind, ParabolicStructure, ReductionTranscript, Root
from .exact_algebra import PointM, Polynomial
from .group_action import GroupElement
from .invariants import Factor, Invariant, InvariantBuilder

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def format_rational(value: Union[int, Fraction]) -> str:
    """Always p/q with q > 0 and gcd(p, q) = 1"""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: Union[str, int]) -> Fraction:
    if isinstance(text, bool):
        raise UnsupportedFormat(f"malformed rational {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL.match(str(text))
    if not match or (match.group(2) is not None and int(match.group(2)) == 0):
        raise UnsupportedFormat(f"malformed rational {text!r}")
    return Fraction(int(match.group(1)), int(match.group(2) or 1))


def parse_blocks(text: str) -> Tuple[int, ...]:
    """'2,1,3,2' -> (2, 1, 3, 2)"""
    parts = [p.strip() for p in str(text).split(",") if p.strip()]
    if not parts:
        raise EmptyInput("no block sizes given")
    sizes = []
    for part in parts:
        if not re.fullmatch(r"[+-]?\d+", part):
            raise UnsupportedFormat(f"block size {part!r} is not an integer")
        value = int(part)
        if value < 1:
            raise NonPositive(f"block size {value} is not positive")
        sizes.append(value)
    return tuple(sizes)


def _root_json(root: Root) -> Dict[str, int]:
    return {"row": root.row, "col": root.col}


def polynomial_to_json(p: Polynomial) -> Dict[str, Any]:
    return {
        "terms": [
            {"coef": format_rational(coef),
             "vars": [{"row": r.row, "col": r.col, "exp": e} for r, e in mono]}
            for mono, coef in p.sorted_terms()
        ]
    }


def polynomial_from_json(doc: Dict[str, Any], symbol: str = "x") -> Polynomial:
    terms = {}
    for term in doc.get("terms", []):
        mono = tuple(sorted((Root(v["row"], v["col"]), int(v["exp"])) for v in term["vars"]))
        terms[mono] = terms.get(mono, Fraction(0)) + parse_rational(term["coef"])
    return Polynomial(terms, symbol)


def point_to_json(point: PointM) -> Dict[str, Any]:
    """Sparse: only nonzero coordinates, rows then columns"""
    return {
        "n": point.n,
        "entries": [
            {"row": root.row, "col": root.col, "value": format_rational(value)}
            for root, value in sorted(point.values.items()) if value != 0
        ],
    }


def point_from_json(doc: Dict[str, Any], structure: ParabolicStructure) -> PointM:
    """Unlisted coordinates of M are zero"""
    if doc.get("n", structure.n) != structure.n:
        raise BadIndices(f"point has n={doc.get('n')}, blocks give n={structure.n}")
    values = {root: Fraction(0) for root in structure.roots.M}
    for entry in doc.get("entries", []):
        root = Root(int(entry["row"]), int(entry["col"]))
        if root not in values:
            raise BadIndices("coordinate outside the nilradical", root)
        values[root] = parse_rational(entry["value"])
    return PointM(n=structure.n, values=values)


def transcript_to_json(transcript: ReductionTranscript) -> List[Dict[str, Any]]:
    return [{"op": s.op, "i": s.i, "b": format_rational(s.b), "step": s.step} for s in transcript.steps]


def group_element_to_json(g: GroupElement) -> Dict[str, Any]:
    unipotent = g.is_unipotent()
    entries = []
    for i, row in enumerate(g.matrix, start=1):
        for j, value in enumerate(row, start=1):
            if j < i or value == 0 or (unipotent and i == j):
                continue
            entries.append({"row": i, "col": j, "value": format_rational(value)})
    return {"n": g.n, "unipotent": unipotent, "entries": entries}


def group_element_from_json(doc: Dict[str, Any]) -> GroupElement:
    n = int(doc["n"])
    diagonal = 1 if doc.get("unipotent") else 0
    matrix = [[Fraction(diagonal if i == j else 0) for j in range(n)] for i in range(n)]
    for entry in doc.get("entries", []):
        i, j = int(entry["row"]), int(entry["col"])
        if not 1 <= i <= j <= n:
            raise BadIndices("group element entry outside the upper triangle", (i, j))
        matrix[i - 1][j - 1] = parse_rational(entry["value"])
    return GroupElement(matrix)


def invariant_to_json(inv: Invariant, builder: InvariantBuilder) -> Dict[str, Any]:
    expr = builder.expand(inv)
    return {
        "kind": inv.kind.value,
        "root": _root_json(inv.root),
        "witnesses": {name: _root_json(root) for name, root in inv.witnesses.items()},
        "correction": inv.correction.value,
        "factors": [{"kind": f.kind.value, "root": _root_json(f.root), "exp": f.exponent} for f in inv.factors],
        "num": polynomial_to_json(expr.num),
        "den": polynomial_to_json(expr.den),
    }


def family_to_json(builder: InvariantBuilder) -> List[Dict[str, Any]]:
    """Every M, L, A and B invariant in the JSON invariant schema"""
    structure = builder.structure
    docs = []
    for xi in sorted(structure.extended.base):
        docs.append(invariant_to_json(
            Invariant(kind=InvariantKind.M, root=xi, factors=(Factor(kind=InvariantKind.M, root=xi),)), builder))
    for phi in sorted(structure.extended.phi):
        pair = structure.extended.pairs[phi]
        docs.append(invariant_to_json(
            Invariant(kind=InvariantKind.L, root=phi, factors=(Factor(kind=InvariantKind.L, root=phi),),
                      witnesses={"first": pair.first, "second": pair.second}), builder))
    docs += [invariant_to_json(inv, builder) for inv in builder.invariants()]
    return docs
