import logging
from typing import List, Optional

from ..models.types import CheckReport, ParabolicStructure
from ..tools.verification import InvarianceVerifier, summary_line

logger = logging.getLogger(__name__)


class VerificationAgent:
    """Agent responsible for checking invariance and independence of the families"""

    name = "Verifier"
    description = "I run exact randomized invariance trials and Jacobian rank tests."

    def verify(self, structure: ParabolicStructure, trials: int, seed: Optional[int] = None) -> List[CheckReport]:
        """
        Run every check on one structure

        Args:
            structure: Analyzed parabolic structure
            trials: Random trials per invariance check
            seed: Random seed

        Returns:
            One report per check
        """
        verifier = InvarianceVerifier(structure, seed=seed)
        return verifier.run_all(trials)

    def describe(self, structure: ParabolicStructure, reports: List[CheckReport]) -> str:
        if all(r.passed for r in reports):
            return summary_line(structure) + "\n"
        lines = []
        for report in reports:
            if report.passed:
                continue
            lines.append(f"check {report.name} FAILED")
            lines += [f"  {failure}" for failure in report.failures]
        return "\n".join(lines) + "\n"
