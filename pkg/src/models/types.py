from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple, Union
from fractions import Fraction
from enum import Enum


class Root(NamedTuple):
    """A positive root (i, j), i < j, identified with the matrix cell it indexes"""

    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


class Marker(str, Enum):
    BASE = "S"
    PHI = "Phi"
    PSI1 = "Psi1"
    PSI2 = "Psi2"


class CaseTag(str, Enum):
    EQUAL = "equal"
    S_LESS = "sLess"
    S_GREATER = "sGreater"


class InvariantKind(str, Enum):
    M = "M"
    L = "L"
    A = "A"
    B = "B"


class CorrectionKind(str, Enum):
    NONE = "none"
    NESTED = "nested"
    BALANCED = "balanced"


class SliceKind(str, Enum):
    Y = "Y"
    X = "X"


class DiagramFormat(str, Enum):
    ASCII = "ascii"
    UNICODE = "unicode"
    JSON = "json"


class Which(str, Enum):
    BASE = "base"
    EXTENDED = "extended"
    A = "A"
    B = "B"
    ALL = "all"


class Command(str, Enum):
    DIAGRAM = "diagram"
    INVARIANTS = "invariants"
    CHECK = "check"
    CANONICALIZE = "canonicalize"
    ORBIT_DIM = "orbit-dim"


class BlockStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    sizes: Tuple[int, ...]
    n: int
    prefix: Tuple[int, ...]
    block_index: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_prefix(self) -> "BlockStructure":
        if any(b <= a for a, b in zip(self.prefix, self.prefix[1:])):
            raise ValueError("prefix sums must be strictly increasing")
        if self.prefix and self.prefix[-1] != self.n:
            raise ValueError("last prefix sum must equal n")
        if len(self.block_index) != self.n:
            raise ValueError("block_index must cover 1..n")
        return self

    @property
    def u(self) -> int:
        return len(self.sizes)

    def R(self, k: int) -> int:
        """Prefix sum R_k, with R_0 = 0"""
        return 0 if k == 0 else self.prefix[k - 1]

    def size(self, k: int) -> int:
        return self.sizes[k - 1]

    def block_of(self, i: int) -> int:
        return self.block_index[i - 1]

    def same_block(self, i: int, j: int) -> bool:
        return self.block_of(i) == self.block_of(j)

    def is_root(self, root: Tuple[int, int]) -> bool:
        return 1 <= root[0] < root[1] <= self.n


class RootSets(BaseModel):
    model_config = ConfigDict(frozen=True)

    M: FrozenSet[Root]
    delta_r: FrozenSet[Root]

    @property
    def dim_m(self) -> int:
        return len(self.M)


class AdmissiblePair(BaseModel):
    """Base roots (first, second) chained through the bridge root (col first, row second)"""

    model_config = ConfigDict(frozen=True)

    first: Root
    second: Root
    bridge: Root
    phi: Root


class ExtendedBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    layers: Tuple[Tuple[Root, ...], ...]
    base: FrozenSet[Root]
    phi: FrozenSet[Root]
    pairs: Dict[Root, AdmissiblePair]

    @property
    def extended(self) -> FrozenSet[Root]:
        return self.base | self.phi

    def base_in_row(self, i: int) -> Optional[Root]:
        return next((r for r in self.base if r.row == i), None)

    def base_in_col(self, j: int) -> Optional[Root]:
        return next((r for r in self.base if r.col == j), None)

    def phi_in_row(self, i: int) -> List[Root]:
        return sorted(r for r in self.phi if r.row == i)

    def layer_of(self, root: Root) -> Optional[int]:
        for index, layer in enumerate(self.layers, start=1):
            if root in layer:
                return index
        return None


class Psi1Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    psi: Root
    xi1: Root
    xi2: Root
    xi3: Root
    xi3_in_base: bool
    gamma: Optional[Root] = None


class Psi2Certificate(BaseModel):
    model_config = ConfigDict(frozen=True)

    psi: Root
    s: int
    t: int
    k: int
    xi1: Root
    gamma1: Root
    gamma2: Root
    gamma3: Root
    gamma4: Root
    gamma5: Root
    xi2: Optional[Root] = None
    xi3: Optional[Root] = None
    case: CaseTag
    simple: bool
    row_count: int = Field(description="Phi roots in row R_{s-1}+1, at least k")


class PsiCertificates(BaseModel):
    model_config = ConfigDict(frozen=True)

    psi1: Dict[Root, Psi1Certificate]
    psi2: Dict[Root, Psi2Certificate]
    numbering: Tuple[Root, ...]

    @property
    def psi(self) -> FrozenSet[Root]:
        return frozenset(self.psi1) | frozenset(self.psi2)

    def number_of(self, root: Root) -> Optional[int]:
        try:
            return self.numbering.index(root) + 1
        except ValueError:
            return None


class ParabolicStructure(BaseModel):
    """Everything the combinatorics yields for one choice of block sizes"""

    model_config = ConfigDict(frozen=True)

    blocks: BlockStructure
    roots: RootSets
    extended: ExtendedBase
    certificates: PsiCertificates

    @property
    def psi(self) -> FrozenSet[Root]:
        return self.certificates.psi

    @property
    def n(self) -> int:
        return self.blocks.n


class RestrictionImage(BaseModel):
    """Signed monomial image sign * c_psi * prod(c~ numerator) / prod(c~ denominator) on the slice X"""

    model_config = ConfigDict(frozen=True)

    psi: Root
    kind: InvariantKind
    sign: int
    numerator: Tuple[Root, ...] = ()
    denominator: Tuple[Root, ...] = ()


class TorusStep(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    op: str = "h"
    i: int
    b: Fraction
    step: int


class ReductionTranscript(BaseModel):
    model_config = ConfigDict(frozen=True)

    steps: Tuple[TorusStep, ...] = ()


class DiagramCell(BaseModel):
    row: int
    col: int
    mark: Marker


class DiagramDocument(BaseModel):
    n: int
    blocks: List[int]
    cells: List[DiagramCell]


class CheckReport(BaseModel):
    name: str
    passed: bool
    trials: int = 0
    skipped: int = 0
    failures: List[str] = []
    detail: Dict[str, float] = {}


class CliConfig(BaseModel):
    blocks: Tuple[int, ...] = ()
    command: Command
    format: DiagramFormat = DiagramFormat.ASCII
    trials: int = 100
    seed: int = Field(default=0, ge=0)
    input_file: Optional[str] = None
    which: Which = Which.ALL

    @model_validator(mode="after")
    def _check_trials(self) -> "CliConfig":
        if self.command == Command.CHECK and self.trials < 1:
            raise ValueError("trials must be at least 1 for check")
        return self


class AnalysisRequest(BaseModel):
    blocks: List[int]
    format: DiagramFormat = DiagramFormat.JSON
    which: Which = Which.ALL


class CanonicalizeRequest(BaseModel):
    blocks: List[int]
    point: dict


class AnalysisResult(BaseModel):
    status: str
    message: str
    blocks: Optional[List[int]] = None
    output: str = ""
    data: Optional[Union[dict, list]] = None
    reports: Optional[List[CheckReport]] = None
    exit_code: int = 0
    error: Optional[str] = None
