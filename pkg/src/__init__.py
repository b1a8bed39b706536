"""
Parabolic invariants

Bases, N-invariants and B-invariants of the nilradical of a parabolic
subalgebra of gl(n), with exact verification and canonical B-orbit
representatives.
"""

__version__ = "1.0.0"

from .agents.coordinator_agent import CoordinatorAgent
from .agents.structure_agent import StructureAgent
from .agents.verification_agent import VerificationAgent
from .agents.canonicalization_agent import CanonicalizationAgent

from .models.types import (
    AnalysisResult,
    BlockStructure,
    CliConfig,
    ExtendedBase,
    ParabolicStructure,
    PsiCertificates,
    Root,
)
from .tools.root_combinatorics import analyze_structure

__all__ = [
    'CoordinatorAgent',
    'StructureAgent',
    'VerificationAgent',
    'CanonicalizationAgent',
    'AnalysisResult',
    'BlockStructure',
    'CliConfig',
    'ExtendedBase',
    'ParabolicStructure',
    'PsiCertificates',
    'Root',
    'analyze_structure',
]
