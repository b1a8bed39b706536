import json
import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError

from .canonicalization_agent import CanonicalizationAgent
from .structure_agent import StructureAgent
from .verification_agent import VerificationAgent
from ..models.errors import EmptyInput, PinvError
from ..models.types import AnalysisResult, CliConfig, Command, DiagramFormat

logger = logging.getLogger(__name__)


class CoordinatorAgent:
    """Main coordinator agent that sequences the analysis of one block structure"""

    name = "Coordinator"
    description = "I run one analysis command from block sizes to its final output."

    def __init__(self):
        # Initialize sub-agents
        self.structure_agent = StructureAgent()
        self.verifier = VerificationAgent()
        self.canonicalizer = CanonicalizationAgent()
        self.sub_agents = [self.structure_agent, self.verifier, self.canonicalizer]

    def run(self, config: CliConfig, input_doc: Optional[Dict[str, Any]] = None) -> AnalysisResult:
        """
        Run one command

        Args:
            config: Validated command configuration
            input_doc: Point JSON for canonicalize

        Returns:
            AnalysisResult with the text output, the structured data and the exit code
        """
        blocks = list(config.blocks)
        try:
            logger.info("Step 1: building block structure %s", blocks)
            structure = self.structure_agent.analyze(config.blocks)

            if config.command == Command.DIAGRAM:
                logger.info("Step 2: rendering diagram")
                output = self.structure_agent.diagram(structure, config.format, config.which)
                return AnalysisResult(status="completed", message="diagram rendered", blocks=blocks, output=output)

            if config.command == Command.INVARIANTS:
                logger.info("Step 2: constructing invariants")
                output = self.structure_agent.invariants(structure, config.format, config.which)
                return AnalysisResult(status="completed", message="invariants constructed",
                                      blocks=blocks, output=output)

            if config.command == Command.CHECK:
                logger.info("Step 2: verifying invariants with %d trials", config.trials)
                reports = self.verifier.verify(structure, config.trials, config.seed)
                passed = all(r.passed for r in reports)
                if config.format == DiagramFormat.JSON:
                    output = json.dumps([r.model_dump() for r in reports], indent=2) + "\n"
                else:
                    output = self.verifier.describe(structure, reports)
                return AnalysisResult(
                    status="completed" if passed else "verification_failed",
                    message="all checks passed" if passed else "verification failed",
                    blocks=blocks, output=output, reports=reports, exit_code=0 if passed else 1,
                )

            if config.command == Command.CANONICALIZE:
                if input_doc is None:
                    raise EmptyInput("canonicalize needs a point (--input-file)")
                logger.info("Step 2: canonicalizing point")
                data = self.canonicalizer.canonicalize(structure, input_doc)
                return AnalysisResult(status="completed", message="point canonicalized", blocks=blocks,
                                      output=json.dumps(data, indent=2) + "\n", data=data)

            logger.info("Step 2: computing orbit dimension")
            data = self.canonicalizer.orbit_dimension(structure)
            if config.format == DiagramFormat.JSON:
                output = json.dumps(data, indent=2) + "\n"
            else:
                output = f"dim m = {data['dim_m']}, |Psi| = {data['psi']}, orbit dimension = {data['orbit_dimension']}\n"
            return AnalysisResult(status="completed", message="orbit dimension computed", blocks=blocks,
                                  output=output, data=data)

        except PinvError as e:
            logger.error("Error analyzing blocks %s: %s", blocks, e)
            return AnalysisResult(status="error", message="analysis failed", blocks=blocks,
                                  error=str(e), exit_code=e.exit_code)
        except ValidationError as e:
            return AnalysisResult(status="error", message="invalid input", blocks=blocks,
                                  error=str(e), exit_code=2)
