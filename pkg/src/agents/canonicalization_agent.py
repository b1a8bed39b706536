import logging
from typing import Any, Dict

from ..models.types import ParabolicStructure
from ..tools.canonical_form import canonicalize_point, orbit_report
from ..tools.invariants import InvariantBuilder
from ..tools.serialization import format_rational, point_from_json, point_to_json, transcript_to_json

logger = logging.getLogger(__name__)


class CanonicalizationAgent:
    """Agent responsible for canonical orbit representatives and orbit dimensions"""

    name = "Canonicalizer"
    description = "I bring generic points to the canonical slice and report orbit dimensions."

    def canonicalize(self, structure: ParabolicStructure, doc: Dict[str, Any]) -> Dict[str, Any]:
        """
        Canonical representative of a point given in the point JSON schema

        Args:
            structure: Analyzed parabolic structure
            doc: Point JSON

        Returns:
            Point JSON of the X representative, with its coefficients and,
            for points of Y, the torus transcript
        """
        point = point_from_json(doc, structure)
        builder = InvariantBuilder(structure)
        x, transcript = canonicalize_point(structure, point, builder)
        result = point_to_json(x.point)
        result["coefficients"] = [
            {"row": root.row, "col": root.col, "value": format_rational(value)}
            for root, value in sorted(x.coefficients.items())
        ]
        if transcript is not None:
            result["transcript"] = transcript_to_json(transcript)
        logger.info("canonicalized point with %d Psi coefficients", len(x.coefficients))
        return result

    def orbit_dimension(self, structure: ParabolicStructure) -> Dict[str, int]:
        return orbit_report(structure)
