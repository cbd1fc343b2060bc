"""Reader and writer for the sparse SDPA text format (.dat-s).

Multi-block files are concatenated into one dense symmetric block; the
original block sizes are kept in the instance metadata so a write
followed by a parse round-trips.  Entries with matrix number 0 populate
the objective matrix C; numbers 1..m populate the constraint matrices.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import InvariantViolation, ParseError
from .sdp import SdpInstance

_COMMENT_PREFIXES = ('"', "*", "#")
_PUNCT = re.compile(r"[{}(),]")


def _tokens(line: str) -> list[str]:
    return _PUNCT.sub(" ", line).split()


def _content_lines(text: str):
    """Yield (lineno, tokens) for non-comment, non-blank lines, 1-based."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(_COMMENT_PREFIXES):
            continue
        yield lineno, _tokens(stripped)


def parse_sdpa(text: str) -> SdpInstance:
    """Parse sparse SDPA input into a single dense-block instance.

    Raises ParseError (carrying the offending line number) on malformed
    input and InvariantViolation when the parsed instance is degenerate
    (b = 0 or dependent constraints).
    """
    lines = iter(_content_lines(text))

    def next_line(what):
        try:
            return next(lines)
        except StopIteration:
            raise ParseError(f"unexpected end of file while reading {what}")

    lineno, toks = next_line("the number of constraints")
    try:
        m = int(toks[0])
    except (ValueError, IndexError):
        raise ParseError("expected the number of constraint matrices", line=lineno)
    if m < 1:
        raise ParseError(f"need at least one constraint, got {m}", line=lineno)

    lineno, toks = next_line("the number of blocks")
    try:
        nblocks = int(toks[0])
    except (ValueError, IndexError):
        raise ParseError("expected the number of blocks", line=lineno)
    if nblocks < 1:
        raise ParseError(f"need at least one block, got {nblocks}", line=lineno)

    lineno, toks = next_line("the block sizes")
    try:
        block_sizes = [int(tok) for tok in toks]
    except ValueError:
        raise ParseError("block sizes must be integers", line=lineno)
    if len(block_sizes) != nblocks:
        raise ParseError(
            f"expected {nblocks} block sizes, got {len(block_sizes)}", line=lineno
        )
    if any(size == 0 for size in block_sizes):
        raise ParseError("block sizes must be nonzero", line=lineno)
    widths = [abs(size) for size in block_sizes]
    offsets = np.concatenate([[0], np.cumsum(widths)])
    n = int(offsets[-1])

    lineno, toks = next_line("the right-hand-side vector")
    try:
        b = np.array([float(tok) for tok in toks])
    except ValueError:
        raise ParseError("right-hand-side entries must be numbers", line=lineno)
    if b.size != m:
        raise ParseError(f"expected {m} right-hand-side values, got {b.size}", line=lineno)

    mats = [np.zeros((n, n)) for _ in range(m + 1)]
    touched = [False] * (m + 1)
    for lineno, toks in lines:
        if len(toks) != 5:
            raise ParseError("entry lines need 'matno blkno i j value'", line=lineno)
        try:
            matno, blkno, i, j = (int(tok) for tok in toks[:4])
            value = float(toks[4])
        except ValueError:
            raise ParseError("malformed entry line", line=lineno)
        if not 0 <= matno <= m:
            raise ParseError(f"matrix number {matno} outside 0..{m}", line=lineno)
        if not 1 <= blkno <= nblocks:
            raise ParseError(f"block number {blkno} outside 1..{nblocks}", line=lineno)
        width = widths[blkno - 1]
        if not 1 <= i <= j <= width:
            raise ParseError(
                f"indices ({i}, {j}) not upper-triangular within block size {width}",
                line=lineno,
            )
        if block_sizes[blkno - 1] < 0 and i != j:
            raise ParseError("diagonal block admits only diagonal entries", line=lineno)
        r = int(offsets[blkno - 1]) + i - 1
        s = int(offsets[blkno - 1]) + j - 1
        mats[matno][r, s] = value
        mats[matno][s, r] = value
        touched[matno] = True

    for k in range(1, m + 1):
        if not touched[k]:
            raise ParseError(f"constraint matrix {k} has no entries")

    inst = SdpInstance(
        C=mats[0],
        constraints=mats[1:],
        b=b,
        metadata={"block_sizes": block_sizes},
    )
    inst.validate()
    return inst


def write_sdpa(inst: SdpInstance) -> str:
    """Serialize an instance in sparse SDPA form (the parser's inverse).

    Block structure from the metadata is honored when the sizes still sum
    to the matrix order; otherwise one dense block is emitted.
    """
    n = inst.n
    block_sizes = inst.metadata.get("block_sizes", [n])
    if sum(abs(size) for size in block_sizes) != n:
        block_sizes = [n]
    offsets = np.concatenate([[0], np.cumsum([abs(s) for s in block_sizes])])

    out = [str(inst.m), str(len(block_sizes)), " ".join(str(s) for s in block_sizes)]
    out.append(" ".join(f"{v:.17g}" for v in inst.b))

    def emit(matno: int, M: np.ndarray):
        for blk, size in enumerate(block_sizes, start=1):
            lo, hi = int(offsets[blk - 1]), int(offsets[blk])
            for i in range(lo, hi):
                for j in range(i, hi):
                    if size < 0 and i != j:
                        if M[i, j] != 0.0:
                            raise InvariantViolation(
                                "off-diagonal entry inside a diagonal block"
                            )
                        continue
                    if M[i, j] != 0.0:
                        out.append(
                            f"{matno} {blk} {i - lo + 1} {j - lo + 1} {M[i, j]:.17g}"
                        )

    emit(0, inst.C)
    for k, A in enumerate(inst.constraints, start=1):
        emit(k, A)
    return "\n".join(out) + "\n"
