from __future__ import annotations

import csv
import io
import json
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from kabaddi.cli import run_cli

from conftest import DATA_DIR

D = ("--data-dir", str(DATA_DIR))


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_matches_text():
    code, out, _ = cli("matches", "--season", "10", "--stage", "Semi Final", *D)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split()[:2] == ["season", "match_id"]
    assert set(lines[1]) <= {"-", " "}
    assert len(lines) == 4


def test_matches_csv_and_json_agree():
    _, out_csv, _ = cli("matches", "--season", "10", "--format", "csv", *D)
    _, out_json, _ = cli("matches", "--season", "10", "--format", "json", *D)
    assert out_csv.endswith("\r\n")
    rows = list(csv.DictReader(io.StringIO(out_csv, newline="")))
    docs = json.loads(out_json)
    assert [int(r["match_id"]) for r in rows] == [d["match_id"] for d in docs] == \
        [3160, 3161, 3162, 3163, 3164]


def test_matches_team_by_id_or_name():
    by_id = cli("matches", "--season", "10", "--team", "6", "--format", "json", *D)[1]
    by_name = cli("matches", "--season", "10", "--team", "Patna Pirates", "--format", "json", *D)[1]
    assert by_id == by_name != "[]\n"


def test_date_range():
    code, out, _ = cli("matches", "--season", "10", "--from", "2024-03-01", "--format", "json", *D)
    assert code == 0
    assert all(d["start_date"] >= "2024-03-01" for d in json.loads(out))
    assert cli("matches", "--season", "10", "--from", "March", *D)[0] == 1


def test_events_columns_by_format():
    _, text, _ = cli("events", "--season", "10", "--match-id", "3163", *D)
    _, js, _ = cli("events", "--season", "10", "--match-id", "3163", "--format", "json", *D)
    events = json.loads(js)
    assert len(events) == 92 and len(events[0]) == 35
    assert len(text.splitlines()) == 94
    assert len(text.splitlines()[0].split()) < 35


def test_standings_and_unknown_season():
    code, out, _ = cli("standings", "--season", "5", "--format", "json", *D)
    assert code == 0 and len(json.loads(out)) == 12
    code, out, err = cli("standings", "--season", "99", *D)
    assert (code, out) == (2, "") and "99" in err


def test_team_info_tables():
    code, out, _ = cli("team-info", "--season", "5", "--team-id", "4", *D)
    assert code == 0
    assert [l for l in out.splitlines() if l.startswith("[")] == \
        ["[rank]", "[value]", "[per-match]", "[raider-skills]", "[defender-skills]"]
    code, out, _ = cli("team-info", "--season", "5", "--team-id", "4", "--table", "value",
                       "--format", "csv", *D)
    header, row = list(csv.reader(io.StringIO(out, newline="")))
    assert header[:4] == ["season", "team_id", "team_name", "matches_played"]
    assert row[2] == "Bengal Warriorz"
    code, _, err = cli("team-info", "--season", "5", "--team-id", "4", "--format", "csv", *D)
    assert code == 1 and "--table" in err
    code, out, _ = cli("team-info", "--season", "5", "--team-id", "4", "--format", "json", *D)
    assert set(json.loads(out)) == {"rank", "value", "per-match", "raider-skills", "defender-skills"}


def test_roster_sort_top():
    code, out, _ = cli("roster", "--team-id", "4", "--season", "5", "--sort", "played_count",
                       "--desc", "--top", "3", "--format", "json", *D)
    rows = json.loads(out)
    assert code == 0 and len(rows) == 3
    played = [r["played_count"] for r in rows]
    assert played == sorted(played, reverse=True)
    assert cli("roster", "--team-id", "4", "--season", "5", "--sort", "nope", *D)[0] == 1


def test_rvd_alias():
    a = cli("rvd", "--player-id", "4947", "--season", "5", "--format", "json", *D)
    b = cli("rvd", "--player-id", "143", "--season", "5", "--format", "json", *D)
    assert a == b and a[0] == 0


def test_validate_clean_corpus():
    code, out, _ = cli("validate", *D)
    assert code == 0
    assert out.splitlines()[-1] == "1 match(es) checked: 0 errors, 1 warnings"
    code, out, _ = cli("validate", "--season", "10", "--match-id", "3163", *D)
    assert code == 0 and "W-RAID-30S" in out
    assert cli("validate", "--match-id", "3163", *D)[0] == 1


def test_validate_reports_errors(tmp_path):
    data = tmp_path / "data"
    shutil.copytree(DATA_DIR, data)
    path = data / "season_10/events/match_3163.json"
    doc = json.loads(path.read_text())
    doc["events"][0]["raid_points"] += 1
    path.write_text(json.dumps(doc))
    code, out, err = cli("validate", "--data-dir", str(data))
    assert code == 3
    assert "E-DIGEST" in out
    code, out, _ = cli("validate", "--season", "10", "--data-dir", str(data))
    assert code == 3 and "E-DIGEST" in out
    code, out, _ = cli("validate", "--season", "5", "--data-dir", str(data))
    assert code == 0 and "E-DIGEST" not in out
    code, _, err = cli("matches", "--season", "10", "--data-dir", str(data))
    assert code == 0 and "failed to load" in err


def test_env_var_data_dir(monkeypatch, tmp_path):
    monkeypatch.setenv("KABADDI_DATA_DIR", str(DATA_DIR))
    assert cli("standings", "--season", "5")[0] == 0
    monkeypatch.setenv("KABADDI_DATA_DIR", str(tmp_path))
    code, _, err = cli("standings", "--season", "5")
    assert code == 2 and "manifest" in err


@pytest.mark.parametrize("argv", [[], ["bogus"], ["matches"], ["matches", "--season", "x"],
                                  ["standings", "--season", "5", "--format", "xml"]])
def test_usage_errors(argv):
    assert cli(*argv)[0] == 1


def test_plot_to_file(tmp_path):
    target = tmp_path / "p.svg"
    code, out, _ = cli("plot", "point-progression", "--season", "10", "--match-id", "3163",
                       "-o", str(target), "--width", "500", "--height", "300", *D)
    assert (code, out) == (0, "")
    root = ET.fromstring(target.read_text())
    assert (root.get("width"), root.get("height")) == ("500", "300")


def test_plot_player_zones_stdout():
    code, out, _ = cli("plot", "player-zones", "--player-ids", "143,12,211", "--season", "5",
                       "--max-cols", "3", *D)
    assert code == 0
    root = ET.fromstring(out)
    assert len(root.findall(".//{http://www.w3.org/2000/svg}g[@class='panel']")) == 3


def test_plot_zone_gap_exit_2():
    code, out, err = cli("plot", "team-zones", "--team-id", "4", "--season", "9", *D)
    assert (code, out) == (2, "") and "seasons 8, 9, and 10" in err


def test_sync_bad_url_exit_3(tmp_path):
    code, _, err = cli("sync", "--base-url", "http://127.0.0.1:9/none", "--data-dir", str(tmp_path))
    assert code == 3 and "cannot fetch manifest" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kabaddi", "standings", "--season", "5", *D],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "Bengal Warriorz" in proc.stdout
