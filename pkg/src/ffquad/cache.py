"""Versioned, resumable on-disk cache for ensemble sweeps.

A sweep over H_{2g+1} is stored as numbered shard files plus one metadata
file per (q, g) pair:

    <cache_dir>/sweep_q{q}_g{g}/meta.json
    <cache_dir>/sweep_q{q}_g{g}/shard_{i:04d}.npy

Each shard holds an int64 matrix whose rows are [D_code, c₀, …, c_{2g}];
zeros are never cached (cheap and precision-dependent).  Shards partition
the ensemble by contiguous D-code ranges, so a killed sweep resumes by
recomputing only the missing shard files.  The metadata records a magic
string, format version, q, g, and shard count; any mismatch is an error
rather than a silent reuse.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

MAGIC = "ffquad-sweep"
VERSION = 1

#: environment variable overriding the default cache location
CACHE_ENV = "FFQUAD_CACHE_DIR"


class CacheVersionError(RuntimeError):
    """Metadata present but incompatible with this code version."""


def cache_dir(explicit: str | os.PathLike | None = None) -> Path:
    """Resolve the cache root: explicit argument, else $FFQUAD_CACHE_DIR,
    else ~/.cache/ffquad."""
    if explicit is not None:
        return Path(explicit)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "ffquad"


def sweep_dir(q: int, g: int, root: str | os.PathLike | None = None) -> Path:
    return cache_dir(root) / f"sweep_q{q}_g{g}"


def _meta_path(d: Path) -> Path:
    return d / "meta.json"


def read_meta(q: int, g: int, root: str | os.PathLike | None = None) -> dict | None:
    """Load and validate sweep metadata; None when absent."""
    path = _meta_path(sweep_dir(q, g, root))
    if not path.exists():
        return None
    meta = json.loads(path.read_text())
    if meta.get("magic") != MAGIC:
        raise CacheVersionError(f"{path}: unrecognized cache file")
    if meta.get("version") != VERSION:
        raise CacheVersionError(
            f"{path}: cache version {meta.get('version')} != {VERSION}"
        )
    if meta.get("q") != q or meta.get("g") != g:
        raise CacheVersionError(f"{path}: metadata is for a different (q, g)")
    return meta


def write_meta(
    q: int, g: int, n_shards: int, root: str | os.PathLike | None = None
) -> None:
    d = sweep_dir(q, g, root)
    d.mkdir(parents=True, exist_ok=True)
    meta = {
        "magic": MAGIC,
        "version": VERSION,
        "q": q,
        "g": g,
        "n_shards": n_shards,
        "row_format": "D_code, c0..c{2g}",
    }
    _meta_path(d).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def shard_path(q: int, g: int, i: int, root: str | os.PathLike | None = None) -> Path:
    return sweep_dir(q, g, root) / f"shard_{i:04d}.npy"


def load_shard(
    q: int, g: int, i: int, root: str | os.PathLike | None = None
) -> np.ndarray | None:
    path = shard_path(q, g, i, root)
    if not path.exists():
        return None
    rows = np.load(path)
    if rows.ndim != 2 or rows.shape[1] != 2 * g + 2:
        raise CacheVersionError(f"{path}: wrong row width for g={g}")
    return rows


def store_shard(
    q: int, g: int, i: int, rows: np.ndarray, root: str | os.PathLike | None = None
) -> None:
    """Write one shard atomically (write-then-rename)."""
    path = shard_path(q, g, i, root)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    np.save(tmp, rows.astype(np.int64))
    # np.save appends .npy to names without it
    tmp_real = tmp if tmp.exists() else tmp.with_suffix(".tmp.npy")
    os.replace(tmp_real, path)
