"""Tests for the command line front end: parsing, reports, exit codes."""

import json

import pytest

from tricl.cli import (
    EXIT_INVALID_INPUT,
    EXIT_NOT_ADMITTED,
    EXIT_NOT_FINITELY_GENERATED,
    EXIT_OK,
    SpecError,
    main,
    parse_spec,
)


def write_spec(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload) if isinstance(payload, dict) else payload)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseSpec:
    def test_quadric(self):
        spec = parse_spec('{"kind":"trinomial","blocks":[[2],[2],[2]],"m":0}')
        assert spec.kind == "trinomial"
        assert spec.blocks == [(2,), (2,), (2,)]

    def test_type1_defaults(self):
        spec = parse_spec('{"kind":"type1","blocks":[[2],[2]]}')
        assert spec.kind == "type1"
        assert spec.m == 0 and spec.theta is None

    def test_invalid_exponent(self):
        with pytest.raises(SpecError, match=r"blocks\[0\]\[0\]"):
            parse_spec('{"kind":"trinomial","blocks":[[0]]}')

    def test_malformed_json(self):
        with pytest.raises(SpecError, match="malformed JSON"):
            parse_spec("{nope")

    def test_unknown_kind(self):
        with pytest.raises(SpecError, match="kind"):
            parse_spec('{"kind":"cubic","blocks":[[2]]}')

    def test_unknown_field(self):
        with pytest.raises(SpecError, match="unknown fields"):
            parse_spec('{"kind":"trinomial","blocks":[[2]],"bogus":1}')

    def test_theta_strings(self):
        spec = parse_spec(
            '{"kind":"trinomial","blocks":[[2],[2],[2],[3]],"theta":["1/2"]}'
        )
        assert spec.theta == ("1/2",)
        with pytest.raises(SpecError, match="theta"):
            parse_spec('{"kind":"trinomial","blocks":[[2],[2],[2],[3]],"theta":["x"]}')

    def test_max_block_cap(self, monkeypatch):
        monkeypatch.setenv("TRICL_MAX_BLOCK", "2")
        with pytest.raises(SpecError, match="TRICL_MAX_BLOCK"):
            parse_spec('{"kind":"trinomial","blocks":[[2],[2],[2],[2]]}')
        with pytest.raises(SpecError, match="TRICL_MAX_BLOCK"):
            parse_spec('{"kind":"trinomial","blocks":[[2,2,2]]}')
        monkeypatch.setenv("TRICL_MAX_BLOCK", "16")
        parse_spec('{"kind":"trinomial","blocks":[[2,2,2]]}')


class TestSubcommands:
    def test_classgroup_both_methods(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[2, 4], [2], [2, 6]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "classgroup", path)
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["class_group"]["group"]["pretty"] == "Z^2 x Z/2"
        assert payload["class_group"]["agree"] is True

    def test_classgroup_not_finitely_generated_exits_3(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[6], [3], [4]]}
        )
        code, _, err = run_cli(capsys, "classgroup", path)
        assert code == EXIT_NOT_FINITELY_GENERATED
        assert "not finitely generated" in err

    def test_invalid_input_exits_2(self, tmp_path, capsys):
        path = write_spec(tmp_path, "v.json", {"kind": "trinomial", "blocks": [[0]]})
        code, _, err = run_cli(capsys, "validate", path)
        assert code == EXIT_INVALID_INPUT

    def test_missing_file_exits_2(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "validate", str(tmp_path / "absent.json"))
        assert code == EXIT_INVALID_INPUT

    def test_iterate_not_admitted_exits_4(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[6], [4], [2, 2]]}
        )
        code, _, err = run_cli(capsys, "iterate", path)
        assert code == EXIT_NOT_ADMITTED

    def test_duval_not_hyperplatonic_exits_4(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[7], [3], [2]]}
        )
        code, _, _ = run_cli(capsys, "duval", path)
        assert code == EXIT_NOT_ADMITTED

    def test_iterate_chain(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[4], [3], [2]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "iterate", path)
        assert code == EXIT_OK
        chain = json.loads(out)["chain"]
        triples = [s["basic_platonic_triple"]["triple"] for s in chain["steps"]]
        assert triples == [[4, 3, 2], [3, 3, 2], [2, 2, 2], [1, 1, 1]]

    def test_adjust_fragment(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[3], [4], [2]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "adjust", path)
        assert code == EXIT_OK
        assert json.loads(out)["adjusted"]["blocks"] == [[4], [2], [3]]

    def test_type1_subcommand(self, tmp_path, capsys):
        path = write_spec(tmp_path, "v.json", {"kind": "type1", "blocks": [[2], [1, 1]]})
        code, out, _ = run_cli(capsys, "--format", "json", "type1-classgroup", path)
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["class_group"]["pretty"] == "Z"
        assert payload["lift"]["blocks"] == [[2], [2], [1, 1]]

    def test_type1_on_trinomial_command_exits_2(self, tmp_path, capsys):
        path = write_spec(tmp_path, "v.json", {"kind": "type1", "blocks": [[2], [2]]})
        code, _, _ = run_cli(capsys, "classgroup", path)
        assert code == EXIT_INVALID_INPUT

    def test_coxring_fragment(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[4], [2], [3, 3]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "coxring", path)
        assert code == EXIT_OK
        cox = json.loads(out)["coxring"]
        assert cox["c"] == [1, 1, 2]
        assert cox["tcs_blocks"] == [[2], [1], [3, 3], [3, 3]]
        assert cox["p1"] == [[-2, 1, 0, 0], [-4, 0, 3, 3]]

    def test_selftest_passes(self, capsys):
        code, out, _ = run_cli(capsys, "selftest")
        assert code == EXIT_OK
        assert "18/18 passed" in out


class TestReport:
    def test_report_round_trips(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[4], [2], [3, 3]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "report", path)
        assert code == EXIT_OK
        payload = json.loads(out)
        # machine form round-trips exactly
        assert json.loads(json.dumps(payload)) == payload
        assert payload["class_group"]["group"]["pretty"] == "Z x Z/3"
        assert payload["hyperplatonic"]["ade_label"] == "E6"
        assert payload["predicates"]["free_abelian"] is False

    def test_report_non_hyperplatonic_rational(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[6], [4], [2, 2]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "report", path)
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["hyperplatonic"] is None
        assert payload["duval"] is None
        assert payload["chain"]["admitted"] is False

    def test_report_on_non_rational_still_succeeds(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[6], [3], [4]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "report", path)
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["class_group"]["group"]["finitely_generated"] is False
        assert payload["chain"] is None

    def test_text_and_json_contain_identical_data(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[2], [2], [2]]}
        )
        code, text_out, _ = run_cli(capsys, "report", path)
        code2, json_out, _ = run_cli(capsys, "--format", "json", "report", path)
        assert code == code2 == EXIT_OK
        payload = json.loads(json_out)

        def keys(data):
            if isinstance(data, dict):
                for k, v in data.items():
                    yield k
                    yield from keys(v)
            elif isinstance(data, list):
                for v in data:
                    yield from keys(v)

        for key in keys(payload):
            assert key in text_out

    def test_hyperplatonic_report_has_chain_and_duval(self, tmp_path, capsys):
        path = write_spec(
            tmp_path, "v.json", {"kind": "trinomial", "blocks": [[4], [2], [2]]}
        )
        code, out, _ = run_cli(capsys, "--format", "json", "report", path)
        payload = json.loads(out)
        assert payload["hyperplatonic"]["ade_label"] == "A3"
        assert payload["chain"]["patterns"] == ["(ii)"]
        assert payload["duval"]["verified"] is True


class TestBatch:
    def test_directory_batch_is_fault_tolerant(self, tmp_path, capsys):
        write_spec(tmp_path, "a.json", {"kind": "trinomial", "blocks": [[2], [2], [2]]})
        write_spec(tmp_path, "b.json", {"kind": "trinomial", "blocks": [[6], [3], [4]]})
        write_spec(tmp_path, "c.json", "not json at all")
        code, out, err = run_cli(capsys, "--format", "json", "classgroup", str(tmp_path))
        # one good report on stdout, two failures on stderr, worst code wins
        good = [json.loads(line) for line in out.strip().splitlines()]
        assert len(good) == 1
        assert good[0]["class_group"]["group"]["pretty"] == "Z/2"
        failures = [json.loads(line) for line in err.strip().splitlines() if line.startswith("{")]
        assert {f["exit_code"] for f in failures} == {2, 3}
        assert code == EXIT_NOT_FINITELY_GENERATED

    def test_batch_summary_line(self, tmp_path, capsys):
        write_spec(tmp_path, "a.json", {"kind": "trinomial", "blocks": [[2], [2], [2]]})
        write_spec(tmp_path, "b.json", {"kind": "trinomial", "blocks": [[3], [2], [2]]})
        code, out, _ = run_cli(capsys, "classgroup", str(tmp_path))
        assert code == EXIT_OK
        assert "2/2 inputs processed" in out
