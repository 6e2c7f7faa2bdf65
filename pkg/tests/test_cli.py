import json

import pytest

from cli import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, main, parse_c, parse_modulus
from errors import ConfigError


class TestParseC:
    @pytest.mark.parametrize("raw, expected", [
        ("symbolic", ("symbolic", [])),
        ("random", ("random", [])),
        ("all-Fp", ("all-Fp", [])),
        ("2", ("value", [2])),
        ("0,1,4", ("list", [0, 1, 4])),
        ("3,", ("list", [3])),
        ("", ("list", [])),
    ])
    def test_modes(self, raw, expected):
        assert parse_c(raw) == expected

    def test_garbage(self):
        with pytest.raises(ConfigError):
            parse_c("generic")

    def test_modulus(self):
        assert parse_modulus("1,0,1,1") == (1, 0, 1, 1)
        assert parse_modulus(None) is None
        with pytest.raises(ConfigError):
            parse_modulus("1,x")


class TestConfigErrors:
    @pytest.mark.parametrize("argv, message", [
        (["hilbert", "--p", "2", "--n", "3"], "p must divide n"),
        (["singular", "--p", "4", "--n", "4"], "is not prime"),
        (["hilbert", "--p", "2", "--n", "2", "--d-max", "1"], "--d-max must be at least"),
        (["sweep", "--p", "2", "--n", "2", "--symbolic"], "sweep needs specialized values"),
        (["singular", "--p", "2", "--n", "2", "--c", "all-Fp"], "only accepted by sweep"),
        (["verify", "--p", "2", "--n", "2", "--threads", "0"], "--threads must be at least 1"),
    ])
    def test_exit_code_and_message(self, argv, message, capsys):
        assert main(argv) == EXIT_CONFIG
        assert message in capsys.readouterr().err

    def test_reducible_modulus(self, capsys):
        argv = ["singular", "--p", "2", "--n", "2", "--c", "random", "--modulus", "1,0,1"]
        assert main(argv) == EXIT_CONFIG
        assert "error:" in capsys.readouterr().err


class TestSeries:
    def test_text_dump(self, capsys):
        assert main(["series", "--p", "2", "--n", "2"]) == EXIT_PASS
        out = capsys.readouterr().out
        assert out.startswith("g(z):\nz^0: 1\nz^1: 0\nz^2: x1^2\nF(z):\n")
        assert "F_1(z):" in out

    def test_json(self, capsys):
        assert main(["series", "--p", "2", "--n", "2", "--format", "json"]) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["series"]["g"] == ["1", "0", "x1^2"]
        assert document["series"]["F"][2] == "c*x1^2"


class TestSingular:
    def test_symbolic(self, capsys):
        assert main(["singular", "--p", "2", "--n", "4"]) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["command"] == "singular"
        assert document["verdict"] == "pass"
        assert len(document["generators"]) == 3
        assert [r["parameters"]["k"] for r in document["records"]] == [1, 2, 3]

    def test_text(self, capsys):
        assert main(["singular", "--p", "2", "--n", "2", "--format", "text", "--no-timings"]) == EXIT_PASS
        out = capsys.readouterr().out
        assert out.startswith("singular: PASS\n")
        assert "f_1 = (c + 1)*x1^2" in out

    def test_random_specializations_are_reported(self, capsys):
        argv = ["singular", "--p", "3", "--n", "3", "--c", "random", "--seed", "5"]
        assert main(argv) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        (entry,) = document["specializations"]
        assert entry["seed"] == 5
        assert entry["field"] == "GF(3^4)"


class TestHilbert:
    def test_json(self, capsys):
        assert main(["hilbert", "--p", "3", "--n", "3", "--symbolic"]) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["dims"] == [1, 2, 3, 2, 1, 0, 0]
        assert document["formula_match"] is True
        assert document["socle_degree"] == 4
        assert document["total_dim"] == 9
        assert document["verdict"] == "pass"

    def test_csv(self, capsys):
        assert main(["hilbert", "--p", "2", "--n", "2", "--symbolic", "--format", "csv"]) == EXIT_PASS
        assert capsys.readouterr().out == "d,dim,formula\n0,1,1\n1,1,1\n2,0,0\n3,0,0\n"

    def test_degenerate_value(self, capsys):
        assert main(["hilbert", "--p", "2", "--n", "2", "--c", "1"]) == EXIT_FAIL
        document = json.loads(capsys.readouterr().out)
        assert document["dims"] == [1, 1, 1, 1]
        assert document["verdict"] == "fail"

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "reports" / "hilbert.json"
        assert main(["hilbert", "--p", "2", "--n", "4", "--symbolic", "--out", str(target)]) == EXIT_PASS
        assert capsys.readouterr().out == ""
        assert json.loads(target.read_text())["dims"] == [1, 3, 3, 1, 0, 0]

    def test_random_by_default(self, capsys):
        main(["hilbert", "--p", "2", "--n", "2"])
        document = json.loads(capsys.readouterr().out)
        assert document["session"]["field"] == "GF(2^6)"
        assert len(document["specializations"]) == 3
        for entry in document["specializations"]:
            assert entry["field"] == "GF(2^6)"
            assert len(entry["dims"]) == 4

    def test_symbolic_flag_has_no_specializations(self, capsys):
        assert main(["hilbert", "--p", "2", "--n", "2", "--symbolic"]) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["session"]["c"] == "symbolic"
        assert "specializations" not in document


class TestSweep:
    def test_csv(self, capsys):
        assert main(["sweep", "--p", "2", "--n", "2"]) == EXIT_PASS
        assert capsys.readouterr().out == (
            "c,independent,hilbert_match,first_deviation\n"
            "0,true,true,\n"
            "1,false,false,2\n"
        )

    def test_json(self, capsys):
        assert main(["sweep", "--p", "2", "--n", "2", "--c", "1", "--format", "json"]) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["rows"] == [
            {"c": "1", "independent": False, "hilbert_match": False, "first_deviation": 2, "error": None},
        ]

    def test_empty_list(self, capsys):
        assert main(["sweep", "--p", "2", "--n", "2", "--c", ""]) == EXIT_PASS
        assert capsys.readouterr().out == "c,independent,hilbert_match,first_deviation\n"


class TestVerify:
    def test_symbolic_passes(self, capsys):
        argv = ["verify", "--p", "2", "--n", "2", "--symbolic", "--relation-degree", "2", "--no-timings"]
        assert main(argv) == EXIT_PASS
        document = json.loads(capsys.readouterr().out)
        assert document["verdict"] == "pass"
        names = [r["name"] for r in document["records"]]
        for name in ("lemma_g", "lemma_V", "lemma_G", "relations", "singular",
                     "independence", "witness", "complete_intersection", "compare_ideals"):
            assert name in names
        assert all("wall_time" not in r for r in document["records"])
        assert [row["dim_J"] for row in document["comparison"]] == [0, 0, 1, 1]

    def test_text_for_p_equals_three(self, capsys):
        argv = ["verify", "--p", "3", "--n", "3", "--symbolic", "--relation-degree", "2", "--format", "text"]
        assert main(argv) == EXIT_PASS
        out = capsys.readouterr().out
        assert out.startswith("verify: PASS\n")
        assert "d,dim_A,dim_I,dim_J,equal" in out

    def test_degenerate_value_fails(self, capsys):
        argv = ["verify", "--p", "2", "--n", "2", "--c", "1", "--relation-degree", "1"]
        assert main(argv) == EXIT_FAIL
        document = json.loads(capsys.readouterr().out)
        assert document["verdict"] == "fail"
        status = {r["name"]: r["status"] for r in document["records"]}
        assert status["independence"] == "fail"
        assert status["complete_intersection"] == "fail"
        assert status["compare_ideals"] == "fail"
        assert status["witness"] == "pass"
        gap = next(r for r in document["records"] if r["name"] == "compare_ideals")
        assert gap["witness"]["error"] == "DimensionGap"
        assert len(document["comparison"]) == 4

    def test_random_runs_are_reproducible(self, tmp_path):
        outputs = []
        for name in ("first.json", "second.json"):
            target = tmp_path / name
            argv = ["verify", "--p", "2", "--n", "2", "--c", "random", "--seed", "7",
                    "--relation-degree", "1", "--no-timings", "--out", str(target)]
            main(argv)
            outputs.append(target.read_text())
        assert outputs[0] == outputs[1]
        document = json.loads(outputs[0])
        assert len(document["specializations"]) == 3
        assert {s["seed"] for s in document["specializations"]} == {7}
        names = {r["name"] for r in document["records"]}
        assert {"coherence", "kernel_agreement", "symbolic_containment"} <= names

    def test_random_by_default_checks_symbolic_containment(self, capsys):
        main(["verify", "--p", "2", "--n", "2", "--relation-degree", "1", "--no-timings"])
        document = json.loads(capsys.readouterr().out)
        assert len(document["specializations"]) == 3
        (containment,) = [r for r in document["records"] if r["name"] == "symbolic_containment"]
        assert containment["status"] == "pass"
        assert containment["parameters"] == {"c": "symbolic", "d_max": 3}

    def test_thread_count_does_not_change_the_report(self, tmp_path):
        outputs = []
        for threads in ("1", "3"):
            target = tmp_path / f"threads-{threads}.json"
            argv = ["verify", "--p", "3", "--n", "3", "--symbolic", "--relation-degree", "1",
                    "--no-timings", "--threads", threads, "--out", str(target)]
            assert main(argv) == EXIT_PASS
            outputs.append(target.read_bytes())
        assert outputs[0] == outputs[1]

    def test_records_as_csv(self, capsys):
        argv = ["verify", "--p", "2", "--n", "2", "--symbolic", "--relation-degree", "1", "--format", "csv", "--no-timings"]
        assert main(argv) == EXIT_PASS
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "name,status,parameters,wall_time"
        assert lines[1].startswith("lemma_g,pass,")
