"""Exact integer sparse matrices and the SMS interchange format."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class IntSparseMatrix:
    """Sparse matrix over Z; at most one stored entry per position."""

    nrows: int
    ncols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise ValueError(f"entry ({i},{j}) out of range")
            if v == 0:
                raise ValueError(f"stored zero at ({i},{j})")

    @classmethod
    def from_triples(cls, nrows: int, ncols: int, triples) -> "IntSparseMatrix":
        """Accumulate (row, col, value) triples, summing duplicates."""
        acc: dict[tuple[int, int], int] = {}
        for i, j, v in triples:
            key = (i, j)
            acc[key] = acc.get(key, 0) + v
        return cls(nrows, ncols, {k: v for k, v in acc.items() if v})

    @property
    def num_entries(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def matmul(self, other: "IntSparseMatrix") -> "IntSparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        by_col: dict[int, list[tuple[int, int]]] = {}
        for (i, j), v in self.entries.items():
            by_col.setdefault(j, []).append((i, v))
        acc: dict[tuple[int, int], int] = {}
        for (j, l), w in other.entries.items():
            for i, v in by_col.get(j, ()):
                key = (i, l)
                acc[key] = acc.get(key, 0) + v * w
        return IntSparseMatrix(self.nrows, other.ncols,
                               {k: v for k, v in acc.items() if v})

    def transpose(self) -> "IntSparseMatrix":
        return IntSparseMatrix(
            self.ncols, self.nrows,
            {(j, i): v for (i, j), v in self.entries.items()},
        )


def dump_sms(matrix: IntSparseMatrix) -> str:
    """Serialize in SMS text form: 'R C M' header, 1-indexed triples, 0 0 0."""
    lines = [f"{matrix.nrows} {matrix.ncols} M"]
    for (i, j) in sorted(matrix.entries):
        lines.append(f"{i + 1} {j + 1} {matrix.entries[(i, j)]}")
    lines.append("0 0 0")
    return "\n".join(lines) + "\n"


def load_sms(text: str) -> IntSparseMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty SMS input")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError(f"malformed SMS header: {lines[0]!r}")
    nrows, ncols = int(head[0]), int(head[1])
    # third header token is conventionally the letter M; a count is tolerated
    entries: dict[tuple[int, int], int] = {}
    terminated = False
    for ln in lines[1:]:
        i, j, v = ln.split()
        i, j, v = int(i), int(j), int(v)
        if i == 0 and j == 0 and v == 0:
            terminated = True
            break
        if v == 0:
            raise ValueError(f"explicit zero entry in SMS: {ln!r}")
        key = (i - 1, j - 1)
        if key in entries:
            raise ValueError(f"duplicate SMS entry at {i} {j}")
        entries[key] = v
    if not terminated:
        raise ValueError("SMS input missing '0 0 0' terminator")
    return IntSparseMatrix(nrows, ncols, entries)
