import pytest

from fatpoints import (
    FieldConfig,
    LinearSystem,
    ProveError,
    Prover,
    dimension,
    n_bounds,
    prove,
    verify,
)


def collect(node, acc=None):
    acc = acc if acc is not None else []
    acc.append(node)
    for c in node.children:
        collect(c, acc)
    return acc


def test_prove_3_5_14_structure(prover):
    cert = prover.prove(3, 5, 14)
    assert cert.rule == "DEG1" and cert.params == {"b": 7}
    systems = [str(c.claim.system) for c in cert.children]
    assert systems == ["L(r=2,d=5; 2^7)", "L(r=3,d=4; 2^7)", "L(r=3,d=3; 2^7)"]
    # the quartic child reaches the (3,4,8) degeneration; the cubic child
    # climbs from the five-node base
    quartic = cert.children[1]
    assert quartic.rule == "MONOTONE_DOWN"
    assert quartic.children[0].rule == "QUARTIC_R3"
    cubic = cert.children[2]
    assert cubic.rule == "EMPTY_UP"
    assert str(cubic.children[0].claim.system) == "L(r=3,d=3; 2^5)"
    assert verify(cert).accepted


def test_prove_table_leaves(prover):
    for (r, d, n), dim in [((2, 4, 5), 0), ((4, 3, 7), 0), ((4, 4, 14), 0), ((3, 2, 2), 2)]:
        cert = prover.prove(r, d, n)
        assert cert.rule == "TABLE"
        assert cert.claim.assertion == "dim" and cert.claim.value == dim


def test_prove_cubic_chain(prover):
    cert = prover.prove(5, 3, 9)
    assert cert.rule == "MONOTONE_DOWN"
    base = cert.children[0]
    assert base.rule == "CUBIC_BASE" and base.params["track"] == "main"
    leaf_rules = {n.rule for n in collect(base)}
    assert "ORACLE" in leaf_rules
    assert verify(cert).accepted


def test_prove_p7_track(prover):
    cert = prover.prove(7, 3, 15)
    nodes = collect(cert)
    tracks = {n.params.get("track") for n in nodes if n.rule == "CUBIC_BASE"}
    assert {"p7", "p7_matching", "p7_k1"} <= tracks
    assert verify(cert).accepted


def test_cubic_step_only_from_r8(prover):
    for r in (8, 9, 10, 11):
        n = n_bounds(r, 3)[0]
        cert = prover.prove(r, 3, n)
        for node in collect(cert):
            if node.rule == "CUBIC_STEP" and node.params.get("track") == "main":
                assert node.claim.system.r >= 8
            if node.params.get("track") == "p7":
                assert node.claim.system.r == 7


def test_deg2_on_beta_one(prover):
    cert = prover.prove(3, 6, 21)
    assert cert.rule == "DEG2" and cert.params == {"b": 10, "beta": 1}
    assert [str(c.claim.system) for c in cert.children] == [
        "L(r=2,d=6; 2^9)",
        "L(r=3,d=5; 2^12)",
        "L(r=3,d=4; 2^11)",
    ]
    assert verify(cert).accepted


def test_quartic_gen(prover):
    cert = prover.prove(5, 4, 21)
    assert cert.rule == "QUARTIC_GEN" and cert.params == {"b": 15}
    assert verify(cert).accepted


def test_p4_cubics_below_exception(prover):
    cert = prover.prove(4, 3, 6)
    assert cert.rule == "CASTELNUOVO" and cert.params["h"] == 5
    assert verify(cert).accepted
    lower = prover.prove(4, 3, 5)
    assert lower.rule == "MONOTONE_DOWN"
    assert verify(lower).accepted


def test_monotone_and_empty_bridges(prover):
    low = prover.prove(3, 5, 3)
    assert low.rule == "MONOTONE_DOWN"
    high = prover.prove(3, 5, 30)
    assert high.rule == "EMPTY_UP" and high.claim.assertion == "non_special"
    assert verify(low).accepted and verify(high).accepted


def test_memoization_shares_subgoals():
    prover = Prover(FieldConfig())
    a = prover.prove(3, 5, 14)
    b = prover.prove(3, 5, 14)
    assert a is b
    c = prover.prove(3, 5, 13)
    assert c.children[0] is not None
    # the cubic base leaf is shared across different goals
    base1 = [n for n in collect(a) if str(n.claim.system) == "L(r=3,d=3; 2^5)"]
    base2 = [n for n in collect(prover.prove(3, 3, 5)) if str(n.claim.system) == "L(r=3,d=3; 2^5)"]
    assert any(x is y for x in base1 for y in base2)


def test_prove_rejects_degenerate_inputs():
    with pytest.raises(ProveError):
        prove(1, 5, 3)
    with pytest.raises(ProveError):
        prove(3, 1, 3)


def test_prove_d2_closed_forms(prover):
    cert = prover.prove(5, 2, 7)
    assert cert.rule == "CLOSED_FORM" and cert.params["family"] == "quadric"
    assert verify(cert).accepted


def test_certified_verdict_matches_oracle_sample(prover, cfg):
    # certificate vs oracle double-check on a small sample across tracks
    for (r, d, n) in [(3, 5, 14), (3, 6, 21), (4, 4, 14), (4, 4, 13), (5, 4, 21),
                      (5, 3, 9), (5, 3, 10), (6, 3, 12), (4, 5, 25), (4, 5, 26)]:
        cert = prover.prove(r, d, n)
        rep = dimension(LinearSystem.nodes(r, d, n), cfg)
        assert cert.claim.known_dim() == rep.dim, (r, d, n)


def test_failure_on_budget():
    from fatpoints.errors import BudgetError

    prover = Prover(FieldConfig(max_columns=30))
    with pytest.raises(BudgetError):
        # budget forbids the oracle leaf the cubic gap verdict needs
        prover.prove(5, 3, 10)


def test_failure_names_obstruction():
    # asking for emptiness of a virtually nonempty system fails loudly
    prover = Prover(FieldConfig())
    with pytest.raises(ProveError, match="virtual dimension"):
        prover._empty(3, 5, 10, 0)
