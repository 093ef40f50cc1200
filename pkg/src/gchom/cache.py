"""Content-addressed file cache for bases, differentials, and ranks."""

from __future__ import annotations

import os
from pathlib import Path

from gchom.complexes import (
    BasisSlice,
    ComplexSpec,
    differential_matrix,
    dump_basis,
    enumerate_basis,
    load_basis,
)
from gchom.sparse import IntSparseMatrix, dump_sms, load_sms

FORMAT_VERSION = "1"


class FileCache:
    """Caches slice bases (.gls) and differential matrices (.sms).

    Entries are keyed by the complex spec plus vertex count and a format
    version tag; a cached file is byte-identical to a fresh recomputation.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root) / f"v{FORMAT_VERSION}"
        self.root.mkdir(parents=True, exist_ok=True)

    def _key(self, spec: ComplexSpec, vertices: int) -> str:
        return f"{spec.parity}-{spec.variant}-g{spec.loops}-V{vertices}"

    def basis_path(self, spec: ComplexSpec, vertices: int) -> Path:
        return self.root / f"basis-{self._key(spec, vertices)}.gls"

    def matrix_path(self, spec: ComplexSpec, vertices: int) -> Path:
        return self.root / f"diff-{self._key(spec, vertices)}.sms"

    def basis(self, spec: ComplexSpec, vertices: int) -> BasisSlice:
        path = self.basis_path(spec, vertices)
        if path.exists():
            loaded = load_basis(path.read_text())
            if loaded.spec == spec and loaded.num_vertices == vertices:
                return loaded
        fresh = enumerate_basis(spec, vertices)
        path.write_text(dump_basis(fresh))
        return fresh

    def matrix(self, spec: ComplexSpec, vertices: int) -> IntSparseMatrix:
        """Differential from the slice at `vertices` down one slice."""
        path = self.matrix_path(spec, vertices)
        src = self.basis(spec, vertices)
        dst = self.basis(spec, vertices - 1)
        if path.exists():
            loaded = load_sms(path.read_text())
            if loaded.nrows == len(dst) and loaded.ncols == len(src):
                return loaded
        fresh = differential_matrix(src, dst)
        path.write_text(dump_sms(fresh))
        return fresh


def resolve_cache(explicit: str | None) -> FileCache | None:
    """Cache from the --cache flag, else GC_CACHE_DIR, else nothing."""
    root = explicit or os.environ.get("GC_CACHE_DIR")
    return FileCache(root) if root else None
