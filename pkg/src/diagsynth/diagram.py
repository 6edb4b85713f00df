"""Gap diagrams: one two-level rail per control line, one gap per flip."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .sequences import as_general, parity_trace

UPPER = "-"
LOWER = "_"
GAP = "|"

COL_WIDTH = 10
ROW_PITCH = 30
RAIL_HEIGHT = 16
MARGIN_LEFT = 40
MARGIN_TOP = 20


@dataclass(frozen=True)
class GapStats:
    per_row_gaps: tuple[int, ...]
    total: int
    doubling_ok: bool


def gap_stats(seq) -> GapStats:
    """Gap counts per control line.

    ``doubling_ok`` checks the lower bound every non-degenerate diagram obeys:
    with row counts sorted ascending, the ``k`` smallest rows hold at least
    ``2**k`` gaps together (their columns must walk through all ``2**k``
    combinations).
    """
    seq = as_general(seq)
    per_row = [0] * (seq.n - 1)
    for e in seq.entries:
        for m in e:
            per_row[m - 1] += 1
    cumulative = np.cumsum(sorted(per_row))
    doubling_ok = all(int(c) >= 2 ** (k + 1) for k, c in enumerate(cumulative))
    return GapStats(tuple(per_row), sum(per_row), doubling_ok)


def _label(m: int, width: int) -> str:
    return f"m{m}".ljust(width)


def render_text(seq) -> str:
    seq = as_general(seq)
    trace = parity_trace(seq)
    n_cols = len(seq) + 1
    cell = max(2, len(str(n_cols - 1)))
    label_w = len(f"m{seq.n - 1}") + 1

    header = " " * label_w + " ".join(str(i).rjust(cell) for i in range(n_cols))
    lines = [header.rstrip()]
    for m in range(1, seq.n):
        row = trace[m - 1]
        upper, lower = [], []
        for i in range(n_cols):
            if i:
                if m in seq.entries[i - 1]:
                    upper.append(GAP)
                    lower.append(GAP)
                else:
                    upper.append(UPPER if row[i] else " ")
                    lower.append(" " if row[i] else LOWER)
            upper.append((UPPER if row[i] else " ") * cell)
            lower.append((" " if row[i] else LOWER) * cell)
        lines.append(_label(m, label_w) + "".join(upper).rstrip())
        lines.append(" " * label_w + "".join(lower).rstrip())
    return "\n".join(lines) + "\n"


def render_svg(seq) -> str:
    """Deterministic SVG; rails are <line class="rail">, flips <line class="gap">."""
    seq = as_general(seq)
    trace = parity_trace(seq)
    n_cols = len(seq) + 1
    width = MARGIN_LEFT + n_cols * COL_WIDTH + 10
    height = MARGIN_TOP + max(seq.n - 1, 0) * ROW_PITCH + 10
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<g stroke="black" stroke-width="1" font-family="monospace" font-size="10">',
    ]
    for m in range(1, seq.n):
        top = MARGIN_TOP + (m - 1) * ROW_PITCH
        bottom = top + RAIL_HEIGHT
        out.append(f'<text x="4" y="{top + RAIL_HEIGHT // 2 + 4}" stroke="none">{escape(f"m={m}")}</text>')
        row = trace[m - 1]
        for i in range(n_cols):
            x0 = MARGIN_LEFT + i * COL_WIDTH
            y = top if row[i] else bottom
            out.append(f'<line class="rail" x1="{x0}" y1="{y}" x2="{x0 + COL_WIDTH}" y2="{y}"/>')
            if i and m in seq.entries[i - 1]:
                out.append(f'<line class="gap" x1="{x0}" y1="{top}" x2="{x0}" y2="{bottom}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
