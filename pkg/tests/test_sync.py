from __future__ import annotations

import shutil
import urllib.error

import pytest

from kabaddi.ingest import MANIFEST_NAME
from kabaddi.sync import SyncError, SyncOptions, fetch_with_retry, parse_remote_manifest, sync

from conftest import DATA_DIR

BASE = "http://remote.test/data"


def remote_files():
    return {p.relative_to(DATA_DIR).as_posix(): p.read_bytes()
            for p in DATA_DIR.rglob("*") if p.is_file()}


class FakeRemote:
    def __init__(self, files, fail=None):
        self.files = dict(files)
        self.fail = dict(fail or {})  # path -> list of exceptions to raise first
        self.calls = []

    def __call__(self, url, timeout):
        rel = url[len(BASE) + 1:]
        self.calls.append(rel)
        pending = self.fail.get(rel)
        if pending:
            raise pending.pop(0)
        if rel not in self.files:
            raise urllib.error.HTTPError(url, 404, "Not Found", {}, None)
        return self.files[rel]


def tree(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in root.rglob("*") if p.is_file()}


def no_sleep(_):
    pass


def http_error(code):
    return urllib.error.HTTPError(BASE, code, "err", {}, None)


def test_fresh_sync_into_missing_dir(tmp_path):
    target = tmp_path / "data"
    summary = sync(BASE, target, fetch=FakeRemote(remote_files()), sleep=no_sleep)
    assert summary.ok and summary.swapped
    assert summary.downloaded == len(remote_files()) - 1
    assert tree(target) == remote_files()


def test_in_sync_writes_nothing(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    before = {p: p.stat().st_mtime_ns for p in target.rglob("*")}
    remote = FakeRemote(remote_files())
    summary = sync(BASE, target, fetch=remote, sleep=no_sleep)
    assert summary.ok and not summary.swapped and summary.downloaded == 0
    assert remote.calls == [MANIFEST_NAME]
    assert {p: p.stat().st_mtime_ns for p in target.rglob("*")} == before


def test_verify_only_reports_drift(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    (target / "rvd.json").write_bytes(b"[]")
    snapshot = tree(target)
    summary = sync(BASE, target, SyncOptions(verify_only=True), fetch=FakeRemote(remote_files()))
    assert summary.drift == ("rvd.json",)
    assert summary.downloaded == 0
    assert tree(target) == snapshot


def test_stale_file_repaired_and_extras_dropped(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    (target / "rvd.json").write_bytes(b"[]")
    (target / "stray.txt").write_text("x")
    summary = sync(BASE, target, fetch=FakeRemote(remote_files()), sleep=no_sleep)
    assert summary.ok and summary.downloaded == 1 and summary.swapped
    assert tree(target) == remote_files()
    assert not list(tmp_path.glob(".data.*"))


def test_corrupt_download_leaves_local_untouched(tmp_path):
    target = tmp_path / "data"
    shutil.copytree(DATA_DIR, target)
    (target / "rvd.json").write_bytes(b"[]")
    snapshot = tree(target)
    files = remote_files()
    files["rvd.json"] = files["rvd.json"][:-2] + b"!\n"
    summary = sync(BASE, target, fetch=FakeRemote(files), sleep=no_sleep)
    assert not summary.ok
    assert summary.failures == ("rvd.json: sha256 mismatch",)
    assert tree(target) == snapshot


def test_transient_errors_retried(tmp_path):
    sleeps = []
    remote = FakeRemote(remote_files(), fail={"rvd.json": [http_error(503), urllib.error.URLError("reset")]})
    summary = sync(BASE, tmp_path / "data", SyncOptions(backoff=0.5), fetch=remote, sleep=sleeps.append)
    assert summary.ok
    assert remote.calls.count("rvd.json") == 3
    assert sleeps == [0.5, 1.0]


def test_client_error_not_retried():
    remote = FakeRemote({}, fail={"x.json": [http_error(403)]})
    with pytest.raises(urllib.error.HTTPError):
        fetch_with_retry(f"{BASE}/x.json", SyncOptions(), remote, no_sleep)
    assert remote.calls == ["x.json"]


def test_retries_exhausted_is_failure(tmp_path):
    remote = FakeRemote(remote_files(), fail={"rvd.json": [http_error(500)] * 3})
    summary = sync(BASE, tmp_path / "data", fetch=remote, sleep=no_sleep)
    assert summary.failed == 1
    assert not (tmp_path / "data").exists()


def test_bad_remote_manifest(tmp_path):
    with pytest.raises(SyncError, match="malformed"):
        sync(BASE, tmp_path, fetch=FakeRemote({MANIFEST_NAME: b"{"}), sleep=no_sleep)
    with pytest.raises(SyncError, match="cannot fetch"):
        sync(BASE, tmp_path, fetch=FakeRemote({}), sleep=no_sleep)
    with pytest.raises(SyncError):
        parse_remote_manifest(b'{"version": 1, "files": [{"path": "../x", "kind": "Rvd", '
                              b'"season": null, "sha256": "' + b"0" * 64 + b'"}]}')


def test_options_validated():
    with pytest.raises(ValueError):
        SyncOptions(max_parallel=0)
    with pytest.raises(ValueError):
        SyncOptions(attempts=0)
