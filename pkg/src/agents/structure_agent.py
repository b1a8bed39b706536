import json
import logging
from typing import List, Sequence

from ..models.types import DiagramFormat, InvariantKind, ParabolicStructure, Which
from ..tools.diagram import DiagramRenderer
from ..tools.invariants import InvariantBuilder
from ..tools.root_combinatorics import analyze_structure, sorted_roots
from ..tools.serialization import family_to_json

logger = logging.getLogger(__name__)

_KINDS = {
    Which.BASE: {"M"},
    Which.EXTENDED: {"M", "L"},
    Which.A: {"A"},
    Which.B: {"B"},
    Which.ALL: {"M", "L", "A", "B"},
}


class StructureAgent:
    """Agent responsible for the combinatorics, the diagrams and the invariant families"""

    name = "Structure"
    description = "I build block structures, bases, admissible roots and the invariants attached to them."

    def __init__(self):
        self.renderer = DiagramRenderer()

    def analyze(self, sizes: Sequence[int]) -> ParabolicStructure:
        return analyze_structure(sizes)

    def diagram(self, structure: ParabolicStructure, fmt: DiagramFormat, which: Which) -> str:
        return self.renderer.render(structure, fmt, which)

    def invariants(self, structure: ParabolicStructure, fmt: DiagramFormat, which: Which) -> str:
        """
        Describe the invariant family

        Args:
            structure: Analyzed parabolic structure
            fmt: json gives the invariant schema, any other format one line per invariant
            which: Kinds to include

        Returns:
            Text output
        """
        builder = InvariantBuilder(structure)
        kinds = _KINDS[which]
        if fmt == DiagramFormat.JSON:
            docs = [doc for doc in family_to_json(builder) if doc["kind"] in kinds]
            return json.dumps(docs, indent=2) + "\n"

        lines: List[str] = []
        ext = structure.extended
        if "M" in kinds:
            lines += [f"M{xi} = {builder.minor_M(xi)}" for xi in sorted_roots(ext.base)]
        if "L" in kinds:
            lines += [f"L{phi} = {builder.L_invariant(phi)}" for phi in sorted_roots(ext.phi)]
        for inv in builder.invariants():
            if inv.kind.value not in kinds:
                continue
            line = str(inv)
            if inv.kind == InvariantKind.B and inv.correction.value == "balanced":
                line += "  [torus-balanced]"
            lines.append(line)
        return "\n".join(lines) + ("\n" if lines else "")
