import json
from typing import Dict, List, Optional

from ..models.errors import UnsupportedFormat
from ..models.types import (
    DiagramCell,
    DiagramDocument,
    DiagramFormat,
    Marker,
    ParabolicStructure,
    Root,
    Which,
)


GLYPHS = {
    DiagramFormat.ASCII: {
        Marker.BASE: "O", Marker.PHI: "x", Marker.PSI1: "#", Marker.PSI2: "#",
        "empty": ".", "diag": "1", "blank": " ", "vbar": "|", "hbar": "-", "cross": "+",
    },
    DiagramFormat.UNICODE: {
        Marker.BASE: "⊗", Marker.PHI: "×", Marker.PSI1: "⊠", Marker.PSI2: "⊠",
        "empty": "·", "diag": "1", "blank": " ", "vbar": "│", "hbar": "─", "cross": "┼",
    },
}


class DiagramRenderer:
    """Square-array pictures of the base, the admissible roots and Psi"""

    def markers(self, structure: ParabolicStructure, which: Which = Which.ALL) -> Dict[Root, Marker]:
        """
        Marker of every marked cell for a selection

        Args:
            structure: Analyzed parabolic structure
            which: base, extended (Psi drawn as plain admissible roots), A, B or all

        Returns:
            Map from root to marker
        """
        ext = structure.extended
        cells: Dict[Root, Marker] = {root: Marker.BASE for root in ext.base}
        if which == Which.BASE:
            return cells

        for root in ext.phi:
            cells[root] = Marker.PHI
        if which in (Which.A, Which.ALL):
            for root in structure.certificates.psi1:
                cells[root] = Marker.PSI1
        if which in (Which.B, Which.ALL):
            for root in structure.certificates.psi2:
                cells[root] = Marker.PSI2
        return cells

    def render(
        self,
        structure: ParabolicStructure,
        fmt: DiagramFormat = DiagramFormat.ASCII,
        which: Which = Which.ALL,
    ) -> str:
        """
        Render the diagram as text

        Args:
            structure: Analyzed parabolic structure
            fmt: ascii, unicode or json
            which: Cells to show

        Returns:
            Diagram text, newline terminated
        """
        try:
            fmt = DiagramFormat(fmt)
        except ValueError:
            raise UnsupportedFormat(f"unsupported diagram format {fmt!r}")

        cells = self.markers(structure, which)
        if fmt == DiagramFormat.JSON:
            return json.dumps(self.document(structure, cells).model_dump(mode="json"), indent=2) + "\n"
        return self._grid(structure, cells, GLYPHS[fmt])

    def document(self, structure: ParabolicStructure, cells: Optional[Dict[Root, Marker]] = None) -> DiagramDocument:
        if cells is None:
            cells = self.markers(structure)
        return DiagramDocument(
            n=structure.n,
            blocks=list(structure.blocks.sizes),
            cells=[DiagramCell(row=r.row, col=r.col, mark=cells[r]) for r in sorted(cells)],
        )

    def _grid(self, structure: ParabolicStructure, cells: Dict[Root, Marker], glyphs: dict) -> str:
        bs = structure.blocks
        M = structure.roots.M
        lines: List[str] = []

        for i in range(1, bs.n + 1):
            groups = []
            for k in range(1, bs.u + 1):
                row_cells = []
                for j in range(bs.R(k - 1) + 1, bs.R(k) + 1):
                    root = Root(i, j)
                    if i == j:
                        row_cells.append(glyphs["diag"])
                    elif root in cells:
                        row_cells.append(glyphs[cells[root]])
                    elif root in M:
                        row_cells.append(glyphs["empty"])
                    else:
                        row_cells.append(glyphs["blank"])
                groups.append(" ".join(row_cells))
            lines.append(f" {glyphs['vbar']} ".join(groups).rstrip())

            block = bs.block_of(i)
            if i == bs.R(block) and block < bs.u:
                bars = [glyphs["hbar"] * (2 * r - 1) for r in bs.sizes]
                lines.append((glyphs["hbar"] + glyphs["cross"] + glyphs["hbar"]).join(bars))

        return "\n".join(lines) + "\n"
