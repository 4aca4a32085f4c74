import json
import subprocess
import sys

import pytest

from tautpic import io
from tautpic.cli import main
from tautpic.errors import IntegrityError
from tautpic.generators import ModuliPair
from tautpic.lattice import IntMatrix
from tautpic.presentations import Presentation, build


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_present_json(capsys):
    code, out, _ = run(capsys, "present", "--g", "1", "--n", "1", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["generators"] == ["lambda", "delta_irr", "delta(0;1)"]
    assert len(doc["relations"]) == 2
    assert doc["structure"] == {"free_rank": 1, "invariant_factors": []}


def test_present_open_json(capsys):
    code, out, _ = run(capsys, "present", "--g", "2", "--n", "0", "--variant", "open", "--json")
    assert code == 0
    assert json.loads(out)["structure"] == {"free_rank": 0, "invariant_factors": [10]}


def test_present_domain_error(capsys):
    code, _, err = run(capsys, "present", "--g", "1", "--n", "0")
    assert code == 2
    assert "3g-3+n > 0" in err


def test_rank(capsys):
    code, out, _ = run(capsys, "rank", "--g", "2", "--n", "3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["free_rank"] == doc["expected_rank"] == 12


def test_reduce(capsys):
    assert run(capsys, "reduce", "--g", "1", "--n", "1", "delta_irr - 12*lambda")[:2] == (0, "0\n")
    assert run(capsys, "reduce", "--g", "2", "--n", "0", "10*lambda")[1] == "delta_irr + 2*delta(1;)\n"
    code, _, err = run(capsys, "reduce", "--g", "2", "--n", "0", "lambda +")
    assert code == 2 and "position 8" in err


def test_equal(capsys):
    assert run(capsys, "equal", "--g", "1", "--n", "1", "lambda", "psi_1")[:2] == (0, "true\n")
    assert run(capsys, "equal", "--g", "0", "--n", "4", "psi_1", "delta(0;1,2)")[:2] == (0, "true\n")
    assert run(capsys, "equal", "--g", "3", "--n", "0", "lambda", "delta_irr")[:2] == (1, "false\n")


def test_clgroup(capsys):
    code, out, _ = run(capsys, "clgroup", "--g", "2", "--n", "0", "--json")
    assert code == 0
    assert json.loads(out)["quotient"]["invariant_factors"] == [2, 2]
    code, out, _ = run(capsys, "clgroup", "--g", "0", "--n", "5", "--json")
    assert code == 0 and "warning" in json.loads(out)


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--gmax", "3", "--nmax", "4")
    assert code == 0 and "all checks passed" in out
    code, out, _ = run(capsys, "verify", "--gmax", "0", "--nmax", "3")
    assert code == 0 and "0 pairs checked" in out


def test_verify_parallel_matches_serial(capsys):
    serial = run(capsys, "verify", "--gmax", "2", "--nmax", "3", "--json")[1]
    parallel = run(capsys, "verify", "--gmax", "2", "--nmax", "3", "--json", "--jobs", "3")[1]
    assert serial == parallel


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--gmax", "2", "--nmax", "4", "--corrupt-relations")
    assert code == 1
    assert "check=rank_formula" in out


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["present", "--g", "2"])
    assert info.value.code == 2


def test_cache_is_byte_identical(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv(io.CACHE_ENV, raising=False)
    argv = ["present", "--g", "2", "--n", "2", "--json"]
    plain = run(capsys, *argv)[1]
    cold = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    warm = run(capsys, *argv, "--cache-dir", str(tmp_path))[1]
    assert plain == cold == warm
    assert (tmp_path / "v1_g2_n2_stable.json").read_text() == plain
    monkeypatch.setenv(io.CACHE_ENV, str(tmp_path))
    assert run(capsys, "reduce", "--g", "2", "--n", "2", "psi_1 + psi_2")[1] == run(
        capsys, "reduce", "--g", "2", "--n", "2", "psi_1 + psi_2", "--cache-dir", ""
    )[1]


def test_corrupt_cache_entry_is_rebuilt(capsys, tmp_path):
    cache = io.PresentationCache(tmp_path)
    target = cache.path(1, 2, "stable")
    target.write_text("{ not json")
    assert cache.get(1, 2, "stable") is None
    pres = io.load_presentation(1, 2, "stable", tmp_path)
    assert pres == build(1, 2)
    assert json.loads(target.read_text())["g"] == 1


def test_large_integers_serialize_as_strings():
    big = 2**60
    pres = Presentation(ModuliPair(3, 0), "stable", ("lambda", "delta_irr", "delta(1;)"), IntMatrix([[big, 0, 0]]))
    doc = io.presentation_to_document(pres)
    assert doc["relations"][0][0] == str(big)
    assert doc["structure"]["invariant_factors"] == [str(big)]
    assert io.encode_int(2**53 - 1) == 2**53 - 1
    back = io.presentation_from_document(json.loads(io.dumps(doc)))
    assert back.relations == pres.relations and back.structure == pres.structure


def test_document_structure_mismatch_rejected():
    doc = io.presentation_to_document(build(2, 0))
    doc["structure"]["free_rank"] = 5
    with pytest.raises(IntegrityError):
        io.presentation_from_document(doc)
    doc = io.presentation_to_document(build(2, 0))
    doc["format_version"] = 99
    with pytest.raises(IntegrityError):
        io.presentation_from_document(doc)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tautpic", "equal", "--g", "2", "--n", "0", "10*lambda", "delta_irr + 2*delta(1;)"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "true\n"
