import json

import pytest

from sumnets.cli import main
from sumnets.network import deserialize


def run(*argv):
    return main(list(argv))


@pytest.fixture()
def built_n1(tmp_path):
    out = tmp_path / "n1.json"
    assert run("build", "--family", "n1", "--m", "2", "--q", "2", "--out", str(out)) == 0
    return out


def test_build_writes_network_and_manifest(built_n1):
    net = deserialize(built_n1.read_bytes())
    assert len(net.sources) == 11
    manifest = json.loads((built_n1.parent / "n1.json.manifest.json").read_text())
    assert manifest["family"] == "n1"
    assert (manifest["capacity_num"], manifest["capacity_den"]) == (2, 3)


def test_build_family_two_terminal_count(tmp_path):
    out = tmp_path / "n2.json"
    assert run("build", "--family", "n2", "--m", "2", "--q", "2", "--out", str(out)) == 0
    net = deserialize(out.read_bytes())
    assert len(net.terminals) == 12


def test_build_rate_target_manifest(tmp_path):
    out = tmp_path / "merged.json"
    assert (
        run("build", "--rate", "3/5", "--primes", "2", "--mode", "in-set", "--out", str(out)) == 0
    )
    manifest = json.loads((tmp_path / "merged.json.manifest.json").read_text())
    assert (manifest["m"], manifest["q"], manifest["k"]) == (9, 2, 3)
    assert (manifest["capacity_num"], manifest["capacity_den"]) == (3, 5)


def test_build_with_dot(tmp_path):
    out = tmp_path / "n1.json"
    assert run("build", "--family", "n1", "--m", "1", "--q", "2", "--dot", "--out", str(out)) == 0
    assert (tmp_path / "n1.dot").read_text().startswith("digraph")


def test_build_usage_errors(tmp_path):
    out = str(tmp_path / "x.json")
    assert run("build", "--family", "n1", "--m", "0", "--q", "2", "--out", out) == 2
    assert run("build", "--rate", "1/2", "--out", out) == 2
    assert run("build", "--out", out) == 2


def test_scheme_verify_round_trip(built_n1, tmp_path):
    code = tmp_path / "code.json"
    assert run("scheme", "--net", str(built_n1), "--p", "2", "--out", str(code)) == 0
    assert run("verify", "--net", str(built_n1), "--code", str(code)) == 0


def test_scheme_refusal_exits_one(built_n1, tmp_path, capsys):
    code = tmp_path / "code.json"
    assert run("scheme", "--net", str(built_n1), "--p", "3", "--out", str(code)) == 1
    assert "characteristic" in capsys.readouterr().out
    assert not code.exists()


def test_scheme_rejects_non_prime_p(built_n1, tmp_path):
    assert run("scheme", "--net", str(built_n1), "--p", "4", "--out", str(tmp_path / "c.json")) == 2


def test_verify_tampered_code_exits_one(built_n1, tmp_path, capsys):
    code = tmp_path / "code.json"
    run("scheme", "--net", str(built_n1), "--p", "2", "--out", str(code))
    doc = json.loads(code.read_text())
    label = sorted(doc["terminal_matrices"])[0]
    doc["terminal_matrices"][label] = [
        [0] * len(flat) for flat in doc["terminal_matrices"][label]
    ]
    code.write_text(json.dumps(doc))
    capsys.readouterr()  # discard the scheme command's output
    assert run("verify", "--net", str(built_n1), "--code", str(code), "--json") == 1
    out = json.loads(capsys.readouterr().out)
    assert out["pass"] is False
    assert out["first_failed"]


def test_search_exhaustive_on_bottleneck(tmp_path, capsys):
    from sumnets.constructions import build_bottleneck2
    from sumnets.network import serialize

    net_path = tmp_path / "b2.json"
    net_path.write_bytes(serialize(build_bottleneck2()))
    out = tmp_path / "results.json"
    rc = run(
        "search", "--net", str(net_path), "--r", "1", "--l", "1", "--p", "3",
        "--exhaustive", "--out", str(out),
    )
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["tried"] == 9
    assert doc["found"] == 2
    assert len(doc["codes"]) == 2


def test_search_random_none_found_exits_one(built_n1, tmp_path):
    rc = run(
        "search", "--net", str(built_n1), "--r", "2", "--l", "3", "--p", "3",
        "--random", "50", "--seed", "7",
    )
    assert rc == 1


def test_search_random_requires_seed(built_n1):
    assert run("search", "--net", str(built_n1), "--r", "2", "--l", "3", "--p", "3",
               "--random", "5") == 2


def test_bounds_without_code(built_n1, capsys):
    assert run("bounds", "--net", str(built_n1)) == 0
    out = capsys.readouterr().out
    assert "capacity: 2/3" in out
    assert "6/11" in out


def test_bounds_with_code_appends_certificate(built_n1, tmp_path, capsys):
    code = tmp_path / "code.json"
    run("scheme", "--net", str(built_n1), "--p", "2", "--out", str(code))
    assert run("bounds", "--net", str(built_n1), "--code", str(code)) == 0
    out = capsys.readouterr().out
    assert "rank of stacked recovery map: 22" in out
    assert "certificate: PASS" in out


def test_bounds_family_two_closed_form(tmp_path, capsys):
    out = tmp_path / "n2.json"
    run("build", "--family", "n2", "--m", "3", "--q", "2", "--out", str(out))
    assert run("bounds", "--net", str(out)) == 0
    text = capsys.readouterr().out
    assert "capacity: 1/2" in text
    assert "3/7" in text


def test_missing_manifest_is_usage_error(tmp_path):
    from sumnets.constructions import build_n1
    from sumnets.network import serialize

    bare = tmp_path / "bare.json"
    bare.write_bytes(serialize(build_n1(1, 2)))
    assert run("scheme", "--net", str(bare), "--p", "2", "--out", str(tmp_path / "c.json")) == 2


def test_build_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("build", "--family", "n2", "--m", "2", "--q", "3", "--k", "2", "--out", str(a))
    run("build", "--family", "n2", "--m", "2", "--q", "3", "--k", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
