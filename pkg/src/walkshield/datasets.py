"""SNAP dataset cache with sha256 verification."""

from __future__ import annotations

import hashlib
import os
import shutil
import tempfile
import urllib.request
from pathlib import Path

from .errors import WalkShieldError

SNAP = "https://snap.stanford.edu/data/"
DATASETS = {
    "facebook": SNAP + "facebook_combined.txt.gz",
    "email": SNAP + "email-Eu-core.txt.gz",
    "hepth": SNAP + "ca-HepTh.txt.gz",
    "gowalla": SNAP + "loc-gowalla_edges.txt.gz",
    "dblp": SNAP + "bigdata/communities/com-dblp.ungraph.txt.gz",
    "amazon": SNAP + "bigdata/communities/com-amazon.ungraph.txt.gz",
    "youtube": SNAP + "bigdata/communities/com-youtube.ungraph.txt.gz",
    "skitter": SNAP + "as-skitter.txt.gz",
}


class ChecksumError(WalkShieldError):
    pass


def data_dir() -> Path:
    return Path(os.environ.get("IMMUNIZE_DATA_DIR", Path.home() / ".cache" / "walkshield"))


def sha256sum(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def cached_path(name: str, root: Path | None = None) -> Path | None:
    """Path of an already-downloaded dataset, or None."""
    url = DATASETS.get(name)
    if url is None:
        return None
    path = (root or data_dir()) / url.rsplit("/", 1)[-1]
    return path if path.exists() else None


def fetch(name: str, root: Path | None = None, sha256: str | None = None,
          url: str | None = None) -> Path:
    """Download a dataset once and verify it against ``sha256``.

    The digest of the first download is stored next to the file and checked
    on every later call, so a corrupted cache is detected.
    """
    url = url or DATASETS.get(name)
    if url is None:
        raise KeyError(f"unknown dataset {name!r}; known: {', '.join(sorted(DATASETS))}")
    root = root or data_dir()
    root.mkdir(parents=True, exist_ok=True)
    path = root / url.rsplit("/", 1)[-1]
    sidecar = path.with_name(path.name + ".sha256")
    if not path.exists():
        fd, tmp = tempfile.mkstemp(dir=root, suffix=".part")
        os.close(fd)
        try:
            with urllib.request.urlopen(url, timeout=60) as resp, open(tmp, "wb") as out:
                shutil.copyfileobj(resp, out)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.remove(tmp)
    digest = sha256sum(path)
    expected = sha256 or (sidecar.read_text().strip() if sidecar.exists() else None)
    if expected and digest != expected:
        raise ChecksumError(f"{path}: sha256 {digest} does not match {expected}")
    sidecar.write_text(digest + "\n")
    return path
