"""Command-line contract: exit codes, output shapes, determinism."""

import json
from pathlib import Path

import pytest

from killplane.cli import main

from conftest import fixture_text

FIXTURES = ("ransomware", "romance_scam", "business_email_compromise", "tech_support")


@pytest.fixture
def fixture_file(tmp_path):
    def write(name: str) -> Path:
        path = tmp_path / f"{name}.json"
        path.write_text(fixture_text(name), encoding="utf-8")
        return path

    return write


@pytest.fixture
def empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text('{"id": "c0", "name": "Empty", "events": []}\n', encoding="utf-8")
    return path


class TestValidate:
    def test_valid_fixture_exits_zero_silently(self, fixture_file, capsys):
        assert main(["validate", str(fixture_file("ransomware"))]) == 0
        assert capsys.readouterr().out == ""

    def test_empty_campaign_valid(self, empty_file, capsys):
        assert main(["validate", str(empty_file)]) == 0
        assert capsys.readouterr().out == ""

    def test_violations_printed_one_per_line_exit_two(self, tmp_path, capsys):
        doc = {
            "id": "c",
            "name": "n",
            "events": [
                {"id": "e", "seq": 1, "ckc": "Delivery", "human": "ZeroClick"},
                {"id": "e", "seq": 2, "ckc": "Delivery", "human": "ZeroClick",
                 "duration_seconds": -4},
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        assert main(["validate", str(path)]) == 2
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2

    def test_json_format(self, fixture_file, capsys):
        assert main(["validate", str(fixture_file("romance_scam")), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"valid": True, "violations": []}

    def test_missing_file_exits_one(self, tmp_path, capsys):
        assert main(["validate", str(tmp_path / "nope.json")]) == 1
        assert "error" in capsys.readouterr().err

    def test_malformed_json_exits_one(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{oops")
        assert main(["validate", str(path)]) == 1
        assert "position" in capsys.readouterr().err


class TestProject:
    def test_ckc_lines(self, fixture_file, capsys):
        assert main(["project", str(fixture_file("ransomware")), "--axis", "ckc"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 4
        assert lines[-1] == "ActionsOnObjectives"

    def test_hkc_lines(self, fixture_file, capsys):
        assert main(["project", str(fixture_file("ransomware")), "--axis", "hkc"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == ["TrustEstablishment", "EmotionalTriggering"]

    def test_json_round_trips(self, fixture_file, capsys):
        assert (
            main(["project", str(fixture_file("ransomware")), "--axis", "ckc",
                  "--format", "json"])
            == 0
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["axis"] == "ckc"
        assert payload["sequence"][0] == "Delivery"

    def test_missing_axis_is_usage_error(self, fixture_file, capsys):
        assert main(["project", str(fixture_file("ransomware"))]) == 1
        assert "usage error" in capsys.readouterr().err


class TestAnalyze:
    def test_text_report(self, fixture_file, capsys):
        assert main(["analyze", str(fixture_file("romance_scam"))]) == 0
        out = capsys.readouterr().out
        assert "critical stage: SustainedEngagement" in out
        assert "duration in bounds: yes" in out
        assert "critical stage matches: yes" in out

    def test_json_report_parses(self, fixture_file, capsys):
        assert main(["analyze", str(fixture_file("ransomware")), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["critical_stage"] == "EmotionalTriggering"
        assert payload["interaction_ratio"] == 0.5
        assert payload["conformance"] is None
        assert len(payload["disruption"]) == 3

    def test_profile_flag(self, fixture_file, capsys):
        assert (
            main(["analyze", str(fixture_file("ransomware")), "--profile", "Tech support",
                  "--format", "json"])
            == 0
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["conformance"]["duration_in_bounds"] is False  # 49h > 48h

    def test_unknown_profile_is_usage_error(self, fixture_file, capsys):
        assert main(["analyze", str(fixture_file("ransomware")), "--profile", "Nope"]) == 1

    def test_empty_campaign_is_domain_error(self, empty_file, capsys):
        assert main(["analyze", str(empty_file)]) == 2

    def test_w0_flag_changes_ranking(self, fixture_file, capsys):
        assert (
            main(["analyze", str(fixture_file("ransomware")), "--w0", "1.0",
                  "--format", "json"])
            == 0
        )
        payload = json.loads(capsys.readouterr().out)
        assert payload["disruption"][0]["ckc"] == "ActionsOnObjectives"


class TestRender:
    def test_writes_deterministic_svg(self, fixture_file, tmp_path):
        src = fixture_file("ransomware")
        out1 = tmp_path / "a.svg"
        out2 = tmp_path / "b.svg"
        assert main(["render", str(src), "--out", str(out1)]) == 0
        assert main(["render", str(src), "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_empty_campaign_renders_63_cells_no_trajectory(self, empty_file, tmp_path):
        out = tmp_path / "empty.svg"
        assert main(["render", str(empty_file), "--out", str(out)]) == 0
        svg = out.read_text()
        assert svg.count('class="cell"') == 63
        assert "trajectory" not in svg

    def test_spec_flags(self, empty_file, tmp_path):
        out = tmp_path / "bare.svg"
        assert (
            main(["render", str(empty_file), "--out", str(out),
                  "--cell-size", "32", "--margin", "4", "--no-labels"])
            == 0
        )
        svg = out.read_text()
        assert 'width="32" height="32"' in svg
        assert "row-label" not in svg


class TestPhingo:
    def test_builtin_vocabulary_cards(self, tmp_path):
        out = tmp_path / "cards"
        assert main(["phingo", "--seed", "7", "-n", "3", "--out", str(out)]) == 0
        files = sorted(out.glob("card_*.txt"))
        assert [f.name for f in files] == ["card_001.txt", "card_002.txt", "card_003.txt"]
        for f in files:
            rows = [line.split("\t") for line in f.read_text().strip().split("\n")]
            labels = [label for row in rows for label in row]
            assert len(rows) == 5 and all(len(r) == 5 for r in rows)
            assert len(set(labels)) == 25

    def test_seed_determinism_across_runs(self, tmp_path):
        out1, out2 = tmp_path / "one", tmp_path / "two"
        main(["phingo", "--seed", "11", "-n", "2", "--out", str(out1)])
        main(["phingo", "--seed", "11", "-n", "2", "--out", str(out2)])
        for name in ("card_001.txt", "card_002.txt"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_vocab_file(self, tmp_path):
        vocab = tmp_path / "vocab.txt"
        vocab.write_text("\n".join(f"tactic {i}" for i in range(26)) + "\n")
        out = tmp_path / "cards"
        assert main(["phingo", "--vocab", str(vocab), "--seed", "1", "--out", str(out)]) == 0
        assert (out / "card_001.txt").exists()

    def test_small_vocabulary_exits_two(self, tmp_path, capsys):
        vocab = tmp_path / "vocab.txt"
        vocab.write_text("\n".join(f"tactic {i}" for i in range(10)) + "\n")
        assert main(["phingo", "--vocab", str(vocab), "--seed", "1",
                     "--out", str(tmp_path / "cards")]) == 2
        assert "25" in capsys.readouterr().err


def test_unknown_command_is_usage_error(capsys):
    assert main(["frobnicate"]) == 1
    assert "usage error" in capsys.readouterr().err
