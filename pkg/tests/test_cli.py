"""Front-end behavior: exit codes, report shapes, DOT output, determinism."""

import json
from importlib import resources

import pytest

from ttperiods.cli import main
from ttperiods.graded import make_ring, ring_to_obj
from ttperiods.groups import dihedral, group_to_obj
from ttperiods.sections_catalog import write_all as write_section_files
from ttperiods.spaces import dumps_canonical
from ttperiods.tworing_catalog import build_two_ring, two_ring_to_obj


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(dumps_canonical(obj), encoding="utf-8")
    return str(path)


@pytest.fixture
def d8_ring_file(tmp_path):
    ring = make_ring(
        2, [("α0", 1), ("α1", 1), ("β", 2)], [[(1, {"α0": 1, "α1": 1})]]
    )
    return write_json(tmp_path, "d8.json", ring_to_obj(ring))


class TestRing:
    def test_periods_match_known_table(self, capsys, d8_ring_file):
        code, out, _ = run(capsys, "ring", "periods", "--input", d8_ring_file)
        assert code == 0
        report = json.loads(out)
        periods = report["result"]["model"]["periods"]
        assert periods == {
            "⟨α0⟩": 1,
            "⟨α1⟩": 1,
            "⟨α0,α1⟩": 2,
            "⟨α0,β⟩": 1,
            "⟨α1,β⟩": 1,
            "⟨α0,α1,β⟩": 0,
        }
        tags = report["result"]["tags"]
        assert set(tags.values()) == {"computed"}
        assert set(tags) == set(periods)

    def test_validate_pass_and_fail(self, capsys, tmp_path, d8_ring_file):
        code, out, _ = run(capsys, "ring", "validate", "--input", d8_ring_file)
        assert code == 0
        assert json.loads(out)["result"]["diagnosis"]["ok"] is True
        bad = write_json(
            tmp_path, "bad.json", ring_to_obj(make_ring(6, [("x", 1)]))
        )
        code, out, _ = run(capsys, "ring", "validate", "--input", bad)
        assert code == 1
        assert json.loads(out)["result"]["diagnosis"]["ok"] is False

    def test_patterns_dot(self, capsys, d8_ring_file):
        code, out, _ = run(
            capsys, "ring", "patterns", "--input", d8_ring_file, "--format", "dot"
        )
        assert code == 0
        assert out.startswith('digraph "d8"')

    def test_witnesses_required_for_non_monomial(self, capsys, tmp_path):
        ring = make_ring(
            3,
            [("a", 8), ("b", 12), ("c", 16)],
            [[(1, {"b": 2}), (1, {"a": 1, "c": 1}), (-1, {"a": 3})]],
        )
        plain = write_json(tmp_path, "m11.json", ring_to_obj(ring))
        code, _, err = run(capsys, "ring", "patterns", "--input", plain)
        assert code == 2
        assert "NonMonomialWithoutWitnesses" in err
        obj = ring_to_obj(ring)
        obj["witnesses"] = [
            [[], "witness"],
            [["b"], "witness"],
            [["a", "b"], "witness"],
            [["a", "b", "c"], "witness"],
        ]
        with_wits = write_json(tmp_path, "m11w.json", obj)
        code, out, _ = run(capsys, "ring", "periods", "--input", with_wits)
        assert code == 0
        periods = json.loads(out)["result"]["model"]["periods"]
        assert periods["⟨⟩"] == 4
        assert periods["⟨a,b⟩"] == 16

    def test_malformed_json_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{not json", encoding="utf-8")
        code, _, err = run(capsys, "ring", "validate", "--input", str(path))
        assert code == 2
        assert "input error" in err

    def test_validate_rejects_dot(self, capsys, d8_ring_file):
        code, _, err = run(
            capsys, "ring", "validate", "--input", d8_ring_file, "--format", "dot"
        )
        assert code == 2

    def test_deterministic_output(self, capsys, d8_ring_file):
        _, first, _ = run(capsys, "ring", "periods", "--input", d8_ring_file)
        _, second, _ = run(capsys, "ring", "periods", "--input", d8_ring_file)
        assert first == second

    def test_emitted_model_reingests_equal(self, capsys, d8_ring_file):
        from ttperiods.spaces import model_from_obj

        _, out, _ = run(capsys, "ring", "periods", "--input", d8_ring_file)
        obj = json.loads(out)["result"]["model"]
        model, per = model_from_obj(obj)
        assert sorted(model.points) == sorted(obj["points"])
        assert sorted(map(tuple, obj["specializes"])) == sorted(
            model.cover_pairs()
        )
        assert {q: per[q] for q in model.points} == obj["periods"]


class TestGroup:
    def test_dperm_q8_dot_colors(self, capsys):
        code, out, _ = run(
            capsys, "group", "dperm", "--group", "Q8", "--prime", "2",
            "--format", "dot",
        )
        assert code == 0
        assert "fillcolor=red" in out and "fillcolor=blue" in out
        assert "fillcolor=black" in out

    def test_dperm_q8_json(self, capsys):
        code, out, _ = run(capsys, "group", "dperm", "--group", "Q8", "--prime", "2")
        assert code == 0
        report = json.loads(out)
        periods = report["result"]["model"]["periods"]
        values = sorted(periods.values())
        assert values.count(4) == 1
        assert values.count(0) == 6
        assert set(report["result"]["tags"].values()) <= {
            "computed", "paper-dataset", "bound",
        }

    def test_stmod_d8_json(self, capsys):
        code, out, _ = run(capsys, "group", "stmod", "--group", "D8", "--prime", "2")
        assert code == 0
        periods = json.loads(out)["result"]["model"]["periods"]
        assert periods["⟨α0,α1⟩"] == 2
        assert all(v == 1 for q, v in periods.items() if q != "⟨α0,α1⟩")

    def test_stmod_catalog_name_passthrough(self, capsys):
        code, out, _ = run(capsys, "group", "stmod", "--group", "M11", "--prime", "3")
        assert code == 0
        result = json.loads(out)["result"]
        assert result["model"]["periods"]["⟨a,b⟩"] == 16
        assert result["discrepancies"] == {
            "⟨b⟩": {"derived": 8, "stated": 4}
        }

    def test_stmod_without_stated_table_has_no_discrepancy_block(self, capsys):
        code, out, _ = run(capsys, "group", "stmod", "--group", "D8", "--prime", "2")
        assert code == 0
        assert "discrepancies" not in json.loads(out)["result"]

    def test_group_file_input(self, capsys, tmp_path):
        path = write_json(tmp_path, "d8_group.json", group_to_obj(dihedral(8)))
        code, out, _ = run(capsys, "group", "dperm", "--group", path, "--prime", "2")
        assert code == 0
        assert json.loads(out)["result"]["group"] == "D8"

    def test_unknown_name(self, capsys):
        code, _, err = run(capsys, "group", "dperm", "--group", "X99", "--prime", "2")
        assert code == 2
        code, _, err = run(capsys, "group", "stmod", "--group", "X99", "--prime", "2")
        assert code == 2


class TestTower:
    def test_small_tower(self, capsys):
        code, out, _ = run(capsys, "tower", "--prime", "2", "--depth", "2")
        assert code == 0
        report = json.loads(out)
        chain = report["result"]["chain"]
        assert set(chain["periods"].values()) <= {0, 1, 2}
        for stratum in report["result"]["strata"]:
            if stratum["proj_sequence"]:
                assert stratum["proj_eventual"] is not None

    def test_depth_out_of_range(self, capsys):
        code, _, err = run(capsys, "tower", "--prime", "2", "--depth", "9")
        assert code == 2
        assert "ValueError" in err


class TestTworing:
    def test_spc_zero_by_name(self, capsys):
        code, out, _ = run(capsys, "tworing", "spc", "--input", "zero")
        assert code == 0
        assert json.loads(out)["result"]["model"]["points"] == []

    def test_spc_zero_by_file(self, capsys, tmp_path):
        path = write_json(
            tmp_path, "zero.json", two_ring_to_obj(build_two_ring("zero"))
        )
        code, out, _ = run(capsys, "tworing", "spc", "--input", path)
        assert code == 0
        assert json.loads(out)["result"]["model"]["points"] == []

    def test_ideals_laurent(self, capsys):
        code, out, _ = run(
            capsys, "tworing", "ideals", "--input", "laurent_f2_z2"
        )
        assert code == 0
        result = json.loads(out)["result"]
        assert result["count"] == 2

    def test_agree_identity(self, capsys):
        code, out, _ = run(
            capsys, "tworing", "agree", "--input", "identity_laurent_f2_z2"
        )
        assert code == 0
        result = json.loads(out)["result"]
        assert result["tightening"]["ok"] and result["agreement"]["ok"]

    def test_agree_broken_fails(self, capsys):
        code, out, _ = run(
            capsys, "tworing", "agree", "--input", "broken_dual_laurent"
        )
        assert code == 1
        assert json.loads(out)["result"]["tightening"]["ok"] is False

    def test_agree_needs_catalog_name(self, capsys):
        code, _, err = run(capsys, "tworing", "agree", "--input", "nope")
        assert code == 2
        assert "tightening name" in err

    def test_localize_nilpotent_collapses(self, capsys, tmp_path):
        system = write_json(
            tmp_path,
            "sys.json",
            {"generators": [{"src": "0", "dst": "1", "vec": [1]}]},
        )
        code, out, _ = run(
            capsys, "tworing", "localize", "--input", "nilpotent_f2_z2",
            "--system", system,
        )
        assert code == 0
        result = json.loads(out)["result"]
        assert result["diagnosis"]["ok"] is True
        dims = result["localized"]["dims"]
        assert all(v == 0 for v in dims.values())

    def test_localize_without_system(self, capsys):
        code, out, _ = run(
            capsys, "tworing", "localize", "--input", "laurent_f2_z2"
        )
        assert code == 0
        assert json.loads(out)["result"]["diagnosis"]["ok"] is True

    def test_unknown_input_file(self, capsys):
        code, _, err = run(capsys, "tworing", "spc", "--input", "missing.json")
        assert code == 2


class TestCompare:
    @pytest.fixture
    def demo(self, tmp_path):
        paths = {p.stem: str(p) for p in write_section_files(tmp_path)}
        return paths

    def test_full_pipeline(self, capsys, demo):
        code, out, _ = run(
            capsys, "compare",
            "--space", demo["stmod_d8_space"],
            "--ring", demo["d8_ring"],
            "--sections", demo["stmod_d8_sections"],
        )
        assert code == 0
        result = json.loads(out)["result"]
        assert result["embedding"] is True
        assert result["ample"] is False
        assert result["transfer"]["ok"] is True
        assert result["divisor"]["ok"] is True
        assert result["comparison"]["⟨α0,α1⟩"] == ["α0", "α1"]

    def test_invert_beta(self, capsys, demo):
        code, out, _ = run(
            capsys, "compare",
            "--space", demo["stmod_d8_space"],
            "--ring", demo["d8_ring"],
            "--sections", demo["stmod_d8_sections"],
            "--invert", "β",
        )
        assert code == 0
        inverted = json.loads(out)["result"]["inverted"]
        assert inverted["pullback"]["ok"] is True
        assert inverted["region"] == ["⟨α0,α1⟩", "⟨α0⟩", "⟨α1⟩"]

    def test_shifted_period_fails(self, capsys, demo, tmp_path):
        obj = json.loads(open(demo["stmod_d8_space"], encoding="utf-8").read())
        obj["periods"]["⟨α0⟩"] = 2
        bad = write_json(tmp_path, "shifted.json", obj)
        code, out, _ = run(
            capsys, "compare",
            "--space", bad,
            "--ring", demo["d8_ring"],
            "--sections", demo["stmod_d8_sections"],
        )
        assert code == 1
        result = json.loads(out)["result"]
        assert result["transfer"]["ok"] is False
        assert result["transfer"]["detail"][0] == "⟨α0⟩"

    def test_unknown_invert_section(self, capsys, demo):
        code, _, err = run(
            capsys, "compare",
            "--space", demo["stmod_d8_space"],
            "--ring", demo["d8_ring"],
            "--sections", demo["stmod_d8_sections"],
            "--invert", "zz",
        )
        assert code == 2
        assert "ComparisonError" in err


class TestFigure:
    def test_stmod_d8_matches_golden(self, capsys):
        code, out, _ = run(capsys, "figure", "stmod_d8")
        assert code == 0
        golden = (
            resources.files("ttperiods") / "data" / "stmod_d8.dot"
        ).read_text(encoding="utf-8")
        assert out == golden

    def test_record_round_trips(self, capsys):
        from ttperiods.spaces import model_from_obj

        code, out, _ = run(capsys, "figure", "ratm_r", "--format", "json")
        assert code == 0
        rec = json.loads(out)["result"]["record"]
        model, per = model_from_obj(rec)
        assert sorted(per.values.values()) == [0, 0, 0, 0, 1, 1]

    def test_unknown_dataset(self, capsys):
        code, _, err = run(capsys, "figure", "nope")
        assert code == 2


class TestUsage:
    def test_no_arguments_is_usage_error(self, capsys):
        assert run(capsys, )[0] == 2

    def test_help_exits_zero(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_bad_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_schema_hint_in_help(self, capsys):
        code, out, _ = run(capsys, "ring", "--help")
        assert code == 0
        assert "ring JSON" in out
