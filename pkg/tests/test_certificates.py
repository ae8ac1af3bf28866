import inspect
import json

import pytest

import fatpoints.certificates as certs_mod
from fatpoints import (
    Claim,
    FieldConfig,
    LinearSystem,
    ProofNode,
    SideCondition,
    certificate_from_json,
    certificate_to_json,
    explain,
    verify,
)
from fatpoints.certificates import OracleStamp, claim_implies
from fatpoints.errors import FatpointsError


def test_claim_dim_semantics():
    s = LinearSystem.nodes(3, 3, 5)  # v = -1
    assert Claim(s, "empty").known_dim() == -1
    assert Claim(s, "non_special").known_dim() == -1
    assert Claim(s, "dim", 2).known_dim() == 2
    assert Claim(s, "empty").gives_h1_zero()  # v = -1 and dim = -1
    big = LinearSystem.nodes(3, 3, 9)  # v < -1
    assert not Claim(big, "empty").gives_h1_zero()
    with pytest.raises(ValueError):
        Claim(s, "dim")  # missing value
    with pytest.raises(ValueError):
        Claim(s, "empty", 3)


def test_claim_implies():
    s = LinearSystem.nodes(3, 4, 8)  # v = 2
    c = Claim(s, "non_special")
    assert claim_implies(c, "h1_zero")
    assert claim_implies(c, ("dim", 2))
    assert not claim_implies(c, "empty")
    empty9 = Claim(LinearSystem.nodes(3, 3, 9), "empty")
    assert claim_implies(empty9, "empty")
    assert not claim_implies(empty9, "h1_zero")  # v < -1: h^1 > 0


def test_roundtrip_and_schema(prover):
    cert = prover.prove(3, 5, 14)
    text = certificate_to_json(cert)
    data = json.loads(text)
    assert data["version"] == 1
    assert set(data) == {"version", "claim", "rule", "params", "side_conditions", "children"}
    assert set(data["claim"]) == {"system", "assert", "value"}
    oracle_nodes = []

    def walk(nd):
        if "oracle" in nd:
            oracle_nodes.append(nd)
            assert set(nd["oracle"]) == {"prime", "seed", "trials"}
        for ch in nd.get("children", []):
            walk(ch)

    walk(data)
    assert oracle_nodes, "expected at least one oracle leaf"
    back = certificate_from_json(text)
    assert back == cert
    assert certificate_to_json(back) == text


def test_version_gate(prover):
    data = json.loads(certificate_to_json(prover.prove(2, 4, 5)))
    data["version"] = 99
    with pytest.raises(FatpointsError):
        certificate_from_json(json.dumps(data))


def test_tampered_side_condition_named(prover):
    cert = prover.prove(3, 5, 14)
    data = json.loads(certificate_to_json(cert))
    name = data["side_conditions"][1]["name"]
    data["side_conditions"][1]["value"] += 1
    res = verify(certificate_from_json(json.dumps(data)))
    assert not res.accepted
    assert name in res.reason


def test_tampered_child_system_rejected(prover):
    cert = prover.prove(3, 5, 14)
    data = json.loads(certificate_to_json(cert))
    data["children"][0]["claim"]["system"] = "L(r=2,d=5; 2^6)"
    res = verify(certificate_from_json(json.dumps(data)))
    assert not res.accepted and "child 0" in res.reason


def test_oracle_leaf_claiming_nonempty_rejected():
    # an oracle leaf asserting dim 0 for the empty quintic-point system
    node = ProofNode(
        claim=Claim(LinearSystem.nodes(3, 3, 5), "dim", 0),
        rule="ORACLE",
        oracle=OracleStamp(prime=2**31 - 1, seed=12, trials=3),
    )
    res = verify(node)
    assert not res.accepted and "oracle re-run" in res.reason


def test_unknown_rule_rejected():
    node = ProofNode(claim=Claim(LinearSystem.nodes(3, 3, 5), "empty"), rule="MAGIC")
    res = verify(node)
    assert not res.accepted and "unknown rule" in res.reason


def test_leaf_rule_with_children_rejected(prover):
    inner = prover.prove(2, 4, 5)
    node = ProofNode(
        claim=Claim(LinearSystem.nodes(2, 4, 5), "dim", 0),
        rule="TABLE",
        side_conditions=(SideCondition("is_exception", 1, "== 1"),),
        children=(inner,),
    )
    res = verify(node)
    assert not res.accepted and "leaf rule" in res.reason


def test_rigid_empty_up_requires_dim_zero_row(prover):
    cert = prover.prove(3, 4, 11)  # EMPTY_UP over the nine-node quartic row
    assert verify(cert).accepted
    data = json.loads(certificate_to_json(cert))

    def find(nd):
        if nd["rule"] == "EMPTY_UP" and nd["params"].get("via") == "unique_divisor":
            return nd
        for ch in nd.get("children", []):
            got = find(ch)
            if got:
                return got

    nd = find(data)
    assert nd is not None
    nd["params"]["base"] = "L(r=3,d=4; 2^8)"  # not an exception row
    res = verify(certificate_from_json(json.dumps(data)))
    assert not res.accepted


def test_verifier_does_not_import_prover():
    src = inspect.getsource(certs_mod)
    assert "prover" not in src


def test_verifier_never_calls_prove(prover, monkeypatch):
    cert = prover.prove(5, 3, 9)
    import fatpoints.prover as prover_mod

    def boom(*a, **k):
        raise AssertionError("verify must not call prove")

    monkeypatch.setattr(prover_mod, "prove", boom)
    monkeypatch.setattr(prover_mod.Prover, "prove", boom)
    assert verify(cert).accepted


def test_explain_examples(prover):
    text = explain(prover.prove(3, 5, 14))
    assert "[DEG1 (b=7)]" in text
    assert "exceptional component" in text
    table = explain(prover.prove(4, 3, 7))
    assert "Cubic4" in table  # names the exception row
    cubic = explain(prover.prove(5, 3, 9))
    assert "CUBIC_BASE" in cubic and "oracle:" in cubic


def test_table_verifies_only_exception_rows():
    node = ProofNode(
        claim=Claim(LinearSystem.nodes(3, 5, 14), "dim", 0),
        rule="TABLE",
        side_conditions=(SideCondition("is_exception", 1, "== 1"),),
    )
    res = verify(node)
    assert not res.accepted and "not an exception row" in res.reason


def test_budget_propagates(prover):
    cert = prover.prove(5, 3, 10)  # contains an oracle leaf on 56 columns
    from fatpoints.errors import BudgetError

    with pytest.raises(BudgetError):
        verify(cert, FieldConfig(max_columns=10))
