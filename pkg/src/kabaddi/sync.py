"""Mirror a remote fixture repository into a local data directory.

The remote side is static files: ``<base_url>/manifest.json`` plus the paths
it lists. Files whose local digest already matches are kept; the rest are
downloaded, checked against the manifest digest, and written to a staging
directory that replaces ``data_dir`` only when every file verified.
"""

from __future__ import annotations

import logging
import os
import shutil
import time
import urllib.error
import urllib.parse
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from kabaddi.ingest import (
    MANIFEST_NAME,
    FixtureParseError,
    Manifest,
    ManifestEntry,
    load_fixture,
    sha256_hex,
)
from kabaddi.store import FixtureKind

log = logging.getLogger(__name__)


class SyncError(RuntimeError):
    """The remote manifest could not be fetched or understood."""


@dataclass(frozen=True)
class SyncOptions:
    verify_only: bool = False
    max_parallel: int = 4
    attempts: int = 3
    backoff: float = 0.25
    timeout: float = 10.0

    def __post_init__(self):
        if self.max_parallel < 1:
            raise ValueError("max_parallel must be at least 1")
        if self.attempts < 1:
            raise ValueError("attempts must be at least 1")


@dataclass(frozen=True)
class SyncSummary:
    """Outcome of one sync.

    ``verified`` counts files whose bytes matched the manifest digest,
    whether they were already local or just downloaded. ``drift`` lists the
    paths that were (or, with verify_only, would be) downloaded.
    """

    downloaded: int
    skipped: int
    verified: int
    failed: int
    drift: tuple[str, ...] = ()
    failures: tuple[str, ...] = ()
    swapped: bool = False

    @property
    def ok(self) -> bool:
        return self.failed == 0


Fetcher = Callable[[str, float], bytes]


def _http_get(url: str, timeout: float) -> bytes:
    with urllib.request.urlopen(url, timeout=timeout) as resp:
        return resp.read()


def fetch_with_retry(url: str, opts: SyncOptions, fetch: Fetcher = _http_get,
                     sleep: Callable[[float], None] = time.sleep) -> bytes:
    """GET ``url``, retrying network errors and 5xx with exponential backoff.

    Client errors (4xx) are not retried.
    """
    for attempt in range(opts.attempts):
        try:
            return fetch(url, opts.timeout)
        except urllib.error.HTTPError as exc:
            if exc.code < 500 or attempt == opts.attempts - 1:
                raise
            log.warning("GET %s: HTTP %s, retrying", url, exc.code)
        except (urllib.error.URLError, OSError) as exc:
            if attempt == opts.attempts - 1:
                raise
            log.warning("GET %s: %s, retrying", url, exc)
        sleep(opts.backoff * 2 ** attempt)
    raise AssertionError("unreachable")


def _url(base_url: str, rel: str) -> str:
    base = base_url if base_url.endswith("/") else base_url + "/"
    return urllib.parse.urljoin(base, urllib.parse.quote(rel))


def _local_digest(path: Path) -> Optional[str]:
    try:
        return sha256_hex(path.read_bytes())
    except OSError:
        return None


def parse_remote_manifest(data: bytes) -> Manifest:
    try:
        records, violations = load_fixture(FixtureKind.MANIFEST, data, "remote manifest.json")
    except FixtureParseError as exc:
        raise SyncError(f"malformed remote manifest: {exc}") from None
    bad = [v for v in violations if v.is_error]
    if bad or not records:
        raise SyncError("invalid remote manifest: " + "; ".join(v.message for v in bad))
    return records[0]


def sync(
    base_url: str,
    data_dir,
    opts: SyncOptions = SyncOptions(),
    fetch: Fetcher = _http_get,
    sleep: Callable[[float], None] = time.sleep,
) -> SyncSummary:
    """Bring ``data_dir`` in line with the remote manifest.

    On any failed file nothing is written and the summary reports it.
    """
    root = Path(data_dir)
    try:
        manifest_bytes = fetch_with_retry(_url(base_url, MANIFEST_NAME), opts, fetch, sleep)
    except (urllib.error.URLError, OSError) as exc:
        raise SyncError(f"cannot fetch manifest from {base_url}: {exc}") from None
    manifest = parse_remote_manifest(manifest_bytes)

    current = [e for e in manifest.files if _local_digest(root / e.path) == e.sha256]
    stale = [e for e in manifest.files if e not in current]
    drift = tuple(e.path for e in stale)
    if opts.verify_only:
        return SyncSummary(0, len(current), len(current), 0, drift)

    def get(entry: ManifestEntry) -> tuple[ManifestEntry, Optional[bytes], str]:
        try:
            return entry, fetch_with_retry(_url(base_url, entry.path), opts, fetch, sleep), ""
        except (urllib.error.URLError, OSError) as exc:
            return entry, None, str(exc)

    with ThreadPoolExecutor(max_workers=opts.max_parallel) as pool:
        results = list(pool.map(get, stale))

    # verification is serialized, in manifest order
    fetched: dict[str, bytes] = {}
    failures = []
    for entry, data, err in results:
        if data is None:
            failures.append(f"{entry.path}: {err}")
        elif sha256_hex(data) != entry.sha256:
            failures.append(f"{entry.path}: sha256 mismatch")
        else:
            fetched[entry.path] = data
    verified = len(current) + len(fetched)
    if failures:
        for f in failures:
            log.error("sync: %s", f)
        return SyncSummary(0, len(current), verified, len(failures), drift, tuple(failures))

    local_manifest = root / MANIFEST_NAME
    unchanged = not stale and local_manifest.exists() and local_manifest.read_bytes() == manifest_bytes
    if unchanged and not _extra_files(root, manifest):
        return SyncSummary(0, len(current), verified, 0, drift)

    staging = _stage(root, manifest, manifest_bytes, fetched)
    _swap(staging, root)
    return SyncSummary(len(fetched), len(current), verified, 0, drift, swapped=True)


def _extra_files(root: Path, manifest: Manifest) -> list[Path]:
    listed = {e.path for e in manifest.files} | {MANIFEST_NAME}
    return [p for p in root.rglob("*") if p.is_file() and p.relative_to(root).as_posix() not in listed]


def _stage(root: Path, manifest: Manifest, manifest_bytes: bytes, fetched: dict[str, bytes]) -> Path:
    staging = root.parent / f".{root.name}.staging-{os.getpid()}"
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    try:
        for entry in manifest.files:
            target = staging / entry.path
            target.parent.mkdir(parents=True, exist_ok=True)
            if entry.path in fetched:
                target.write_bytes(fetched[entry.path])
            else:
                shutil.copyfile(root / entry.path, target)
            if sha256_hex(target.read_bytes()) != entry.sha256:
                raise SyncError(f"{entry.path}: staged copy does not match its digest")
        (staging / MANIFEST_NAME).write_bytes(manifest_bytes)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return staging


def _swap(staging: Path, root: Path) -> None:
    """Replace ``root`` with ``staging`` using two renames on one filesystem."""
    if not root.exists():
        staging.rename(root)
        return
    backup = root.parent / f".{root.name}.previous-{os.getpid()}"
    if backup.exists():
        shutil.rmtree(backup)
    root.rename(backup)
    try:
        staging.rename(root)
    except BaseException:
        backup.rename(root)
        raise
    shutil.rmtree(backup, ignore_errors=True)
