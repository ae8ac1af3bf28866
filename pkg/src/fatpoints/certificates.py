"""Proof certificates: node model, rule semantics, verifier, narration.

A certificate is a tree of claims about linear systems.  Internal nodes
apply one of a fixed catalog of degeneration rules and record the integer
side conditions under which the rule is sound; leaves are classification
table rows, closed-form families, or finite-field oracle runs with their
(prime, seed, trials) pinned.

Every claim reduces to a known dimension: ``empty`` means dim = -1,
``dim`` pins a value, ``non_special`` means dim equals the expected
dimension (computable from the system alone).  A claim implying
"dim = v >= -1" also certifies that the imposed conditions are linearly
independent, which is what the restriction rules consume from their
premises.

The verifier is independent of the certificate generator: it re-derives
every side condition and every child system from the claim and the rule
parameters, evaluates the recorded relations, and re-runs oracle leaves.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Callable

from .combinatorics import (
    b0_decompose,
    binom,
    expected_dim,
    gamma_r,
    k0,
    k_general,
    k_quartic,
    h_planar,
    n_bounds,
)
from .errors import BudgetError, FatpointsError
from .oracle import FieldConfig, dimension
from .presets import (
    ah3_system,
    k1_system,
    k2_system,
    matching_system,
    p7_k1_system,
    p7_k2_system,
    p7_matching_system,
    quadric_three_subspaces,
)
from .systems import (
    LinearSystem,
    SPORADIC_EXCEPTIONS,
    castelnuovo_split,
    classify,
    cone_reduce,
    deg1_components,
    deg2_components,
    dominates,
    limit_dim,
    planar_dim,
    quadric_dim,
    transversal_intersection_dim,
)

CERTIFICATE_VERSION = 1

ASSERTIONS = ("dim", "non_special", "empty")

LEAF_RULES = ("TABLE", "CLOSED_FORM", "ORACLE")

#: rules whose nodes carry no children but rest on a proved lemma
LEMMA_RULES = ("LF_P2", "LF_P3", "LF_QUARTIC", "LF_GENERAL")


class RuleViolation(FatpointsError):
    """A node fails its rule's structural or arithmetic requirements."""


# ---------------------------------------------------------------------------
# node model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    system: LinearSystem
    assertion: str  # "dim" | "non_special" | "empty"
    value: int | None = None

    def __post_init__(self) -> None:
        if self.assertion not in ASSERTIONS:
            raise ValueError(f"unknown assertion {self.assertion!r}")
        if (self.assertion == "dim") != (self.value is not None):
            raise ValueError("a value is carried exactly by 'dim' claims")

    def known_dim(self) -> int:
        """The dimension this claim pins down."""
        if self.assertion == "empty":
            return -1
        if self.assertion == "dim":
            assert self.value is not None
            return self.value
        return self.system.expected_dim()

    def gives_h1_zero(self) -> bool:
        """True if the claim certifies independent conditions (h^1 = 0)."""
        v = self.system.virtual_dim()
        return v >= -1 and self.known_dim() == v

    def describe(self) -> str:
        if self.assertion == "empty":
            return f"{self.system} is empty"
        if self.assertion == "dim":
            return f"dim {self.system} = {self.value}"
        return f"{self.system} is non-special"


@dataclass(frozen=True)
class SideCondition:
    name: str
    value: int
    relation: str  # "<op> <int>" with op in ==, !=, <=, >=, <, >

    def holds(self) -> bool:
        return _relation_holds(self.value, self.relation)


@dataclass(frozen=True)
class OracleStamp:
    prime: int
    seed: int
    trials: int


@dataclass(frozen=True)
class ProofNode:
    claim: Claim
    rule: str
    params: dict = field(default_factory=dict)
    side_conditions: tuple[SideCondition, ...] = ()
    children: tuple["ProofNode", ...] = ()
    oracle: OracleStamp | None = None


@dataclass(frozen=True)
class VerifyResult:
    accepted: bool
    reason: str | None = None
    path: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.accepted


_REL_RE = re.compile(r"^(==|!=|<=|>=|<|>) (-?\d+)$")


def _relation_holds(value: int, relation: str) -> bool:
    m = _REL_RE.match(relation)
    if not m:
        raise ValueError(f"bad relation {relation!r}")
    op, bound = m.group(1), int(m.group(2))
    return {
        "==": value == bound,
        "!=": value != bound,
        "<=": value <= bound,
        ">=": value >= bound,
        "<": value < bound,
        ">": value > bound,
    }[op]


def _sc(name: str, value: int, relation: str) -> SideCondition:
    return SideCondition(name, int(value), relation)


# ---------------------------------------------------------------------------
# rule semantics
# ---------------------------------------------------------------------------

# child requirements
EMPTY = "empty"
H1_ZERO = "h1_zero"
NON_SPECIAL = "non_special"


def claim_implies(claim: Claim, requirement) -> bool:
    if requirement == EMPTY:
        return claim.known_dim() == -1
    if requirement == H1_ZERO:
        return claim.gives_h1_zero()
    if requirement == NON_SPECIAL:
        return claim.known_dim() == claim.system.expected_dim()
    if isinstance(requirement, tuple) and requirement[0] == "dim":
        return claim.known_dim() == requirement[1]
    raise ValueError(f"unknown requirement {requirement!r}")


@dataclass(frozen=True)
class RuleApplication:
    """What a rule instance demands: side conditions, children (system +
    requirement), and the conclusion it supports for the node's own claim."""

    sides: tuple[SideCondition, ...]
    children: tuple[tuple[LinearSystem, object], ...]
    conclusion: object  # ("dim", k) | H1_ZERO | EMPTY


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise RuleViolation(msg)


def _double_point_shape(s: LinearSystem) -> int:
    _require(s.is_points_only(), f"{s}: rule needs a points-only system")
    n = s.point_count(2)
    _require(
        all(fp.multiplicity == 2 for fp in s.fat_points),
        f"{s}: rule needs double points only",
    )
    return n


def _top_point_shape(s: LinearSystem, top: int) -> int:
    """Shape (top, 2^k): one point of the given multiplicity plus nodes."""
    _require(s.is_points_only(), f"{s}: rule needs a points-only system")
    _require(top >= 3, "top multiplicity must be >= 3")
    k = s.point_count(2)
    _require(
        s.point_count(top) == 1
        and all(fp.multiplicity in (2, top) for fp in s.fat_points),
        f"{s}: expected shape ({top}, 2^k)",
    )
    return k


def _nodes(r: int, d: int, n: int, simple: int = 0) -> LinearSystem:
    return LinearSystem.nodes(r, d, n, simple=simple)


def _check_table(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    n = _double_point_shape(s)
    verdict = classify(s.r, s.d, n)
    _require(verdict.is_exception, f"({s.r},{s.d},{n}) is not an exception row")
    assert verdict.closed_form_dim is not None
    return RuleApplication(
        sides=(_sc("is_exception", 1, "== 1"),),
        children=(),
        conclusion=("dim", verdict.closed_form_dim),
    )


def _closed_form_dim(family: str, s: LinearSystem) -> tuple[int, tuple[SideCondition, ...]]:
    if family == "complete":
        _require(not s.conditions, "complete family has no conditions")
        return binom(s.r + s.d, s.r) - 1, (_sc("condition_count", 0, "== 0"),)
    _require(s.is_points_only(), f"{s}: closed forms cover point conditions")
    mults = s.mults()
    maxm = max(mults) if mults else 0
    if family == "simple_points":
        _require(maxm <= 1, "simple_points family needs multiplicities <= 1")
        return max(s.virtual_dim(), -1), (_sc("max_multiplicity", maxm, "<= 1"),)
    if family == "line":
        _require(s.r == 1, "line family needs r = 1")
        return max(s.virtual_dim(), -1), (_sc("r", s.r, "== 1"),)
    if family == "degree_le1":
        _require(s.d <= 1, "degree_le1 family needs d <= 1")
        return max(s.virtual_dim(), -1), (_sc("d", s.d, "<= 1"),)
    n2, n1 = s.point_count(2), s.point_count(1)
    _require(maxm <= 2, f"{family} family needs multiplicities <= 2")
    if family == "quadric":
        _require(s.d == 2, "quadric family needs d = 2")
        return quadric_dim(s.r, n2, n1), (_sc("d", s.d, "== 2"),)
    if family == "planar":
        _require(s.r == 2, "planar family needs r = 2")
        return planar_dim(s.d, n2, n1), (_sc("r", s.r, "== 2"),)
    raise RuleViolation(f"unknown closed-form family {family!r}")


def _check_closed_form(claim: Claim, params: dict) -> RuleApplication:
    family = params.get("family")
    dim, guards = _closed_form_dim(str(family), claim.system)
    sides = guards + (_sc("closed_dim", dim, ">= -1"),)
    return RuleApplication(sides=sides, children=(), conclusion=("dim", dim))


def _check_oracle(claim: Claim, params: dict) -> RuleApplication:
    return RuleApplication(
        sides=(), children=(), conclusion=("dim", claim.known_dim())
    )


def _check_monotone_down(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    parent = LinearSystem.parse(str(params["parent"]))
    _require((parent.r, parent.d) == (s.r, s.d), "parent lives in another space")
    sides = (
        _sc("dominates", int(dominates(parent, s)), "== 1"),
        _sc("v_parent", parent.virtual_dim(), ">= -1"),
        _sc("v_target", s.virtual_dim(), ">= -1"),
    )
    return RuleApplication(sides=sides, children=((parent, H1_ZERO),), conclusion=H1_ZERO)


def _check_empty_up(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    base = LinearSystem.parse(str(params["base"]))
    via = params.get("via", "dominance")
    if via == "dominance":
        _require((base.r, base.d) == (s.r, s.d), "base lives in another space")
        sides = (
            _sc("dominates", int(dominates(s, base)), "== 1"),
            _sc("v_target", s.virtual_dim(), "<= -1"),
        )
        return RuleApplication(sides=sides, children=((base, EMPTY),), conclusion=EMPTY)
    if via == "unique_divisor":
        n = _double_point_shape(s)
        m = _double_point_shape(base)
        _require((base.r, base.d) == (s.r, s.d), "base lives in another space")
        row = SPORADIC_EXCEPTIONS.get((base.r, base.d, m))
        _require(
            row is not None and row[1] == 0,
            f"({base.r},{base.d},{m}) is not a rigid exception row",
        )
        # the unique member is singular along a proper closed locus only,
        # so one further general node empties the system
        sides = (
            _sc("rigid_exception_row", 1, "== 1"),
            _sc("extra_nodes", n - m, ">= 1"),
        )
        return RuleApplication(sides=sides, children=((base, ("dim", 0)),), conclusion=EMPTY)
    raise RuleViolation(f"unknown EMPTY_UP mode {via!r}")


def _check_castelnuovo(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    h = int(params["h"])
    top = bool(params.get("top", False))
    kernel, trace = castelnuovo_split(s, h, specialize_top=top)
    vk, vt = kernel.virtual_dim(), trace.virtual_dim()
    sides = (
        _sc("v_kernel", vk, ">= -1"),
        _sc("v_trace", vt, ">= -1"),
        _sc("v_additivity", s.virtual_dim() - vk - vt - 1, "== 0"),
        _sc(
            "conditions_conserved",
            kernel.conditions_count() + trace.conditions_count() - s.conditions_count(),
            "== 0",
        ),
    )
    return RuleApplication(
        sides=sides,
        children=((kernel, H1_ZERO), (trace, H1_ZERO)),
        conclusion=H1_ZERO,
    )


def _check_cone(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    reduced = cone_reduce(s)  # raises if no d-fold point
    k = claim.known_dim()
    _require(
        claim.assertion in ("empty", "dim"),
        "cone reduction transfers dimensions, not non-speciality",
    )
    sides = (_sc("cone_point_present", 1, "== 1"),)
    return RuleApplication(
        sides=sides, children=((reduced, ("dim", k)),), conclusion=("dim", k)
    )


def _check_lf(claim: Claim, params: dict, rule: str) -> RuleApplication:
    s = claim.system
    k = _top_point_shape(s, s.d - 1)
    v = s.virtual_dim()
    if rule == "LF_P2":
        _require(s.r == 2 and s.d >= 4, "LF_P2 covers r = 2, d >= 4")
        sides = (
            _sc("k_matches_h", k - h_planar(s.d), "== 0"),
            _sc("v_target", v, ">= -1"),
        )
    elif rule == "LF_P3":
        _require(s.r == 3 and s.d >= 4, "LF_P3 covers r = 3, d >= 4")
        sides = (
            _sc("k_within_k0", k0(s.d) - k, ">= 0"),
            _sc("v_target", v, ">= -1"),
        )
    elif rule == "LF_QUARTIC":
        _require(s.d == 4 and s.r >= 2, "LF_QUARTIC covers d = 4, r >= 2")
        sides = (
            _sc("k_within_quartic_bound", k_quartic(s.r) - k, ">= 0"),
            _sc("v_target", v, ">= -1"),
        )
    else:  # LF_GENERAL
        _require(s.r >= 3 and s.d >= 5, "LF_GENERAL covers r >= 3, d >= 5")
        sides = (
            _sc("k_within_lf_bound", k_general(s.r, s.d) - k, ">= 0"),
            _sc("v_target", v, ">= -1"),
        )
    return RuleApplication(sides=sides, children=(), conclusion=H1_ZERO)


def _check_deg1(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    n = _double_point_shape(s)
    r, d = s.r, s.d
    _require(r >= 3 and d >= 5, "DEG1 needs r >= 3, d >= 5")
    b = int(params["b"])
    b0, beta = b0_decompose(r, d)
    parts = deg1_components(r, d, n, b)
    cone_kernel = _nodes(r - 1, d, b)
    v_p = parts.l_p.virtual_dim()
    r_f = parts.r_ambient - 1 - b
    dim_r = transversal_intersection_dim(v_p, r_f, parts.r_ambient)
    l0 = limit_dim(dim_r, -1, -1)
    sides = (
        _sc("beta", beta, "== 0"),
        _sc("b_matches_b0", b - b0, "== 0"),
        _sc("b_within_n", n - b, ">= 0"),
        _sc("b_within_lf_bound", k_general(r, d) - b, ">= 0"),
        _sc("e_cone_kernel", expected_dim(cone_kernel.virtual_dim()), "== -1"),
        _sc("v_p", v_p, ">= 0"),
        _sc("v_hat_p", parts.hat_l_p.virtual_dim(), "<= -1"),
        _sc("l0_matches_expected", l0 - s.expected_dim(), "== 0"),
    )
    children = (
        (cone_kernel, H1_ZERO),
        (parts.l_p, H1_ZERO),
        (parts.hat_l_p, EMPTY),
    )
    return RuleApplication(
        sides=sides, children=children, conclusion=("dim", s.expected_dim())
    )


def _check_deg2(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    n = _double_point_shape(s)
    r, d = s.r, s.d
    _require(r >= 3 and d >= 5, "DEG2 needs r >= 3, d >= 5")
    b, beta = int(params["b"]), int(params["beta"])
    b0f, beta0 = b0_decompose(r, d)
    parts = deg2_components(r, d, n, b, beta)
    cone_kernel = _nodes(r - 1, d, b - beta)
    cone_kernel_full = _nodes(r - 1, d, b - beta, simple=beta)
    v_p0 = parts.l_p0.virtual_dim()
    match_dim = max(v_p0 - r * beta - (b - beta), -1)
    sides = (
        _sc("beta_matches", beta - beta0, "== 0"),
        _sc("beta_positive", beta, ">= 1"),
        _sc("beta_below_r", r - beta, ">= 1"),
        _sc("b_matches_second", b - (b0f + beta), "== 0"),
        _sc("b_within_n", n - b, ">= 0"),
        _sc("b_within_lf_bound", k_general(r, d) - b, ">= 0"),
        _sc("v_cone_kernel", cone_kernel_full.virtual_dim(), "== -1"),
        _sc("v_bar_p", parts.bar_l_p0.virtual_dim(), ">= -1"),
        _sc("v_hat_p", parts.hat_l_p0.virtual_dim(), "<= -1"),
        _sc("match_dim_matches_expected", match_dim - s.expected_dim(), "== 0"),
    )
    children = (
        (cone_kernel, H1_ZERO),
        (parts.bar_l_p0, H1_ZERO),
        (parts.hat_l_p0, EMPTY),
    )
    return RuleApplication(
        sides=sides, children=children, conclusion=("dim", s.expected_dim())
    )


def _check_quartic_small(claim: Claim, params: dict, rule: str) -> RuleApplication:
    s = claim.system
    n = _double_point_shape(s)
    r = 3 if rule == "QUARTIC_R3" else 4
    n_expected = 8 if rule == "QUARTIC_R3" else 13
    _require(s.r == r and s.d == 4, f"{rule} covers (r, d) = ({r}, 4)")
    b = int(params["b"])
    hat_f = _nodes(r - 1, 4, b)
    l_p = _nodes(r, 3, n - b)
    hat_p = _nodes(r, 2, n - b)
    ambient = binom(4 + r - 2, r - 1)
    v_p = l_p.virtual_dim()
    v_hat_f = hat_f.virtual_dim()
    dim_r = transversal_intersection_dim(v_p, ambient - 1 - b, ambient)
    l0 = limit_dim(dim_r, -1, expected_dim(v_hat_f))
    sides = (
        _sc("node_count", n, f"== {n_expected}"),
        _sc("b_matches", b - (n - r - 1), "== 0"),
        _sc("b_within_quartic_bound", k_quartic(r) - b, ">= 0"),
        _sc("v_hat_f", v_hat_f, ">= -1"),
        _sc("quadric_kernel_nodes", (n - b) - (r + 1), ">= 0"),
        _sc("v_p", v_p, ">= 0"),
        _sc("l0_matches_expected", l0 - s.expected_dim(), "== 0"),
    )
    children = ((hat_f, H1_ZERO), (l_p, H1_ZERO), (hat_p, EMPTY))
    return RuleApplication(
        sides=sides, children=children, conclusion=("dim", s.expected_dim())
    )


def _check_quartic_gen(claim: Claim, params: dict) -> RuleApplication:
    s = claim.system
    n = _double_point_shape(s)
    r = s.r
    _require(s.d == 4 and r >= 5, "QUARTIC_GEN covers d = 4, r >= 5")
    b = int(params["b"])
    hat_f = _nodes(r - 1, 4, b)
    l_p = _nodes(r, 3, r + 1)
    hat_p = _nodes(r, 2, r + 1)
    base_pts = binom(r + 1, 2)
    l_f = LinearSystem.from_mults(r, 4, [3] + [2] * b)
    dim_r = max(expected_dim(l_f.virtual_dim()) - base_pts, -1)
    l0 = limit_dim(dim_r, -1, -1)
    sides = (
        _sc("b_matches", b - (n - r - 1), "== 0"),
        _sc("r_at_least_5", r, ">= 5"),
        _sc("b_within_quartic_bound", k_quartic(r) - b, ">= 0"),
        _sc("v_hat_f", hat_f.virtual_dim(), "<= -1"),
        _sc("p_nodes", n - b, f"== {r + 1}"),
        _sc("v_p", l_p.virtual_dim(), ">= 0"),
        _sc("trace_base_points", base_pts, ">= 1"),
        _sc("l0_matches_expected", l0 - s.expected_dim(), "== 0"),
    )
    children = ((hat_f, EMPTY), (l_p, H1_ZERO), (hat_p, EMPTY))
    return RuleApplication(
        sides=sides, children=children, conclusion=("dim", s.expected_dim())
    )


def _check_cubic(claim: Claim, params: dict, rule: str) -> RuleApplication:
    s = claim.system
    track = str(params.get("track", "main"))
    v = s.virtual_dim()
    if track == "main":
        r = s.r
        _require(s == ah3_system(r), f"claim system is not the r = {r} cubic target")
        if rule == "CUBIC_BASE":
            _require(r in (5, 6), "CUBIC_BASE main track covers r = 5, 6")
        else:
            _require(r >= 8, "CUBIC_STEP main track needs r >= 8")
        nlo, nlo3 = n_bounds(r, 3)[0], n_bounds(r - 3, 3)[0]
        dgamma = gamma_r(r) - gamma_r(r - 3)
        sides = (
            _sc("v_target", v, "== -1"),
            _sc("nodes_on_strict_transform", nlo - nlo3, f"== {r + 1}"),
            _sc("gamma_step", dgamma, ">= 0"),
            _sc("gamma_step_bound", 1 - dgamma, ">= 0"),
        )
        children = ((ah3_system(r - 3), EMPTY), (matching_system(r), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "p7":
        _require(rule == "CUBIC_BASE", "the P^7 round is a base case")
        _require(s == _nodes(7, 3, 15), "P^7 track proves L(r=7,d=3; 2^15) empty")
        sides = (_sc("v_target", v, "== -1"),)
        children = ((_nodes(3, 3, 5), EMPTY), (p7_matching_system(), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "p7_matching":
        _require(rule == "CUBIC_BASE", "the P^7 round is a base case")
        _require(s == p7_matching_system(), "wrong P^7 matching system")
        sides = (_sc("v_target", v, "== -1"),)
        children = ((p7_k1_system(), EMPTY), (_nodes(3, 3, 5), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "p7_k1":
        _require(rule == "CUBIC_BASE", "the P^7 round is a base case")
        _require(s == p7_k1_system(), "wrong P^7 kernel system")
        sides = (_sc("v_target", v, "<= -1"),)
        children = ((p7_k2_system(), EMPTY), (_nodes(3, 3, 5), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "matching":
        r = s.r
        _require(rule == "CUBIC_STEP" and r >= 8, "matching induction needs r >= 8")
        _require(s == matching_system(r), f"claim is not the r = {r} matching system")
        sides = (_sc("v_target", v, "== -1"),)
        children = ((k1_system(r), EMPTY), (matching_system(r - 3), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "k1":
        r = s.r
        _require(s == k1_system(r), f"claim is not K1({r})")
        _require(r == 6 or r >= 8, "K1 induction covers r = 6 and r >= 8")
        sides = (_sc("v_target", v, "<= -1"),)
        children = ((k2_system(r), EMPTY), (k1_system(r - 3), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    if track == "k2":
        r = s.r
        _require(s == k2_system(r), f"claim is not K2({r})")
        _require(r >= 7, "K2 induction covers r >= 7")
        sides = (_sc("v_target", v, "<= -1"),)
        children = ((quadric_three_subspaces(r), EMPTY), (k2_system(r - 1), EMPTY))
        return RuleApplication(sides=sides, children=children, conclusion=EMPTY)
    raise RuleViolation(f"unknown cubic track {track!r}")


_CHECKERS: dict[str, Callable[[Claim, dict], RuleApplication]] = {
    "TABLE": _check_table,
    "CLOSED_FORM": _check_closed_form,
    "ORACLE": _check_oracle,
    "MONOTONE_DOWN": _check_monotone_down,
    "EMPTY_UP": _check_empty_up,
    "CASTELNUOVO": _check_castelnuovo,
    "CONE": _check_cone,
    "LF_P2": lambda c, p: _check_lf(c, p, "LF_P2"),
    "LF_P3": lambda c, p: _check_lf(c, p, "LF_P3"),
    "LF_QUARTIC": lambda c, p: _check_lf(c, p, "LF_QUARTIC"),
    "LF_GENERAL": lambda c, p: _check_lf(c, p, "LF_GENERAL"),
    "DEG1": _check_deg1,
    "DEG2": _check_deg2,
    "QUARTIC_R3": lambda c, p: _check_quartic_small(c, p, "QUARTIC_R3"),
    "QUARTIC_R4": lambda c, p: _check_quartic_small(c, p, "QUARTIC_R4"),
    "QUARTIC_GEN": _check_quartic_gen,
    "CUBIC_BASE": lambda c, p: _check_cubic(c, p, "CUBIC_BASE"),
    "CUBIC_STEP": lambda c, p: _check_cubic(c, p, "CUBIC_STEP"),
}

RULES = tuple(_CHECKERS)


def derive_application(claim: Claim, rule: str, params: dict) -> RuleApplication:
    """Recompute a rule instance's side conditions, required children, and
    conclusion from the claim and parameters alone."""
    checker = _CHECKERS.get(rule)
    if checker is None:
        raise RuleViolation(f"unknown rule {rule!r}")
    return checker(claim, params)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _claim_matches_conclusion(claim: Claim, conclusion) -> bool:
    if conclusion == H1_ZERO:
        return claim.gives_h1_zero()
    if conclusion == EMPTY:
        return claim.known_dim() == -1
    if isinstance(conclusion, tuple) and conclusion[0] == "dim":
        return claim.known_dim() == conclusion[1]
    raise ValueError(f"bad conclusion {conclusion!r}")


class _Reject(Exception):
    def __init__(self, reason: str, path: tuple[int, ...]):
        super().__init__(reason)
        self.reason = reason
        self.path = path


def _fingerprint(node: ProofNode, cache: dict[int, tuple]) -> tuple:
    """Structural identity of a subtree; identical subtrees verify once."""
    got = cache.get(id(node))
    if got is not None:
        return got
    fp = (
        str(node.claim.system),
        node.claim.assertion,
        node.claim.value,
        node.rule,
        tuple(sorted(node.params.items())),
        node.side_conditions,
        node.oracle,
        tuple(_fingerprint(c, cache) for c in node.children),
    )
    cache[id(node)] = fp
    return fp


def verify(root: ProofNode, cfg: FieldConfig | None = None) -> VerifyResult:
    """Independently re-check a certificate.

    Recomputes every side condition and re-derives every child system from
    claim + params, evaluates all recorded relations, and re-runs every
    oracle leaf under its recorded (prime, seed, trials).  Never calls the
    certificate generator.  Oracle re-runs honor ``cfg.max_columns`` and may
    raise :class:`~fatpoints.errors.BudgetError`.
    """
    cfg = cfg or FieldConfig()
    state = _VerifyState({}, set())
    try:
        _verify_node(root, (), cfg, state)
    except _Reject as rej:
        return VerifyResult(False, rej.reason, rej.path)
    return VerifyResult(True)


@dataclass
class _VerifyState:
    fp_cache: dict[int, tuple]
    accepted: set[tuple]


def _verify_node(
    node: ProofNode, path: tuple[int, ...], cfg: FieldConfig, state: _VerifyState
) -> None:
    fp = _fingerprint(node, state.fp_cache)
    if fp in state.accepted:
        return
    where = f"node {'/'.join(map(str, path)) or 'root'} [{node.rule}] {node.claim.describe()}"
    try:
        app = derive_application(node.claim, node.rule, dict(node.params))
    except BudgetError:
        raise
    except (FatpointsError, ValueError, KeyError, TypeError) as exc:
        raise _Reject(f"{where}: {exc}", path) from exc

    if len(app.sides) != len(node.side_conditions):
        raise _Reject(
            f"{where}: expected {len(app.sides)} side conditions, found "
            f"{len(node.side_conditions)}",
            path,
        )
    for got, want in zip(node.side_conditions, app.sides):
        if got.name != want.name or got.relation != want.relation:
            raise _Reject(
                f"{where}: side condition {want.name!r} recorded as {got.name!r} "
                f"with relation {got.relation!r}",
                path,
            )
        if got.value != want.value:
            raise _Reject(
                f"{where}: side condition {got.name!r} recorded value {got.value} "
                f"!= recomputed {want.value}",
                path,
            )
        if not want.holds():
            raise _Reject(
                f"{where}: side condition {want.name!r} fails: "
                f"{want.value} {want.relation}",
                path,
            )

    if not _claim_matches_conclusion(node.claim, app.conclusion):
        raise _Reject(f"{where}: claim not supported by the rule's conclusion", path)

    if node.rule == "ORACLE":
        if node.oracle is None:
            raise _Reject(f"{where}: oracle leaf without a stamp", path)
        run_cfg = FieldConfig(
            prime=node.oracle.prime,
            trials=node.oracle.trials,
            seed=node.oracle.seed,
            max_columns=cfg.max_columns,
            subspace_mode=cfg.subspace_mode,
        )
        report = dimension(node.claim.system, run_cfg)
        if report.dim != node.claim.known_dim():
            raise _Reject(
                f"{where}: oracle re-run found dim {report.dim}, claim needs "
                f"{node.claim.known_dim()}",
                path,
            )

    if node.rule in LEAF_RULES or node.rule in LEMMA_RULES:
        if node.children:
            raise _Reject(f"{where}: leaf rule with children", path)
        state.accepted.add(fp)
        return

    if len(node.children) != len(app.children):
        raise _Reject(
            f"{where}: expected {len(app.children)} children, found {len(node.children)}",
            path,
        )
    for i, (child, (want_sys, requirement)) in enumerate(zip(node.children, app.children)):
        if child.claim.system != want_sys:
            raise _Reject(
                f"{where}: child {i} should concern {want_sys}, found "
                f"{child.claim.system}",
                path,
            )
        if not claim_implies(child.claim, requirement):
            raise _Reject(
                f"{where}: child {i} claim {child.claim.describe()!r} does not "
                f"imply requirement {requirement!r}",
                path,
            )
        _verify_node(child, path + (i,), cfg, state)
    state.accepted.add(fp)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _node_to_dict(node: ProofNode) -> dict:
    out: dict = {
        "claim": {
            "system": str(node.claim.system),
            "assert": node.claim.assertion,
            "value": node.claim.value,
        },
        "rule": node.rule,
        "params": dict(node.params),
        "side_conditions": [
            {"name": sc.name, "value": sc.value, "relation": sc.relation}
            for sc in node.side_conditions
        ],
        "children": [_node_to_dict(c) for c in node.children],
    }
    if node.oracle is not None:
        out["oracle"] = {
            "prime": node.oracle.prime,
            "seed": node.oracle.seed,
            "trials": node.oracle.trials,
        }
    return out


def _node_from_dict(data: dict) -> ProofNode:
    claim = Claim(
        system=LinearSystem.parse(data["claim"]["system"]),
        assertion=data["claim"]["assert"],
        value=data["claim"].get("value"),
    )
    oracle = None
    if "oracle" in data:
        oracle = OracleStamp(
            prime=int(data["oracle"]["prime"]),
            seed=int(data["oracle"]["seed"]),
            trials=int(data["oracle"]["trials"]),
        )
    return ProofNode(
        claim=claim,
        rule=str(data["rule"]),
        params=dict(data.get("params", {})),
        side_conditions=tuple(
            SideCondition(sc["name"], int(sc["value"]), sc["relation"])
            for sc in data.get("side_conditions", [])
        ),
        children=tuple(_node_from_dict(c) for c in data.get("children", [])),
        oracle=oracle,
    )


def certificate_to_json(root: ProofNode) -> str:
    """Stable, byte-reproducible encoding (sorted keys, fixed separators)."""
    payload = {"version": CERTIFICATE_VERSION, **_node_to_dict(root)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def certificate_from_json(text: str) -> ProofNode:
    data = json.loads(text)
    version = data.get("version")
    if version != CERTIFICATE_VERSION:
        raise FatpointsError(f"unsupported certificate version {version!r}")
    return _node_from_dict(data)


# ---------------------------------------------------------------------------
# narration
# ---------------------------------------------------------------------------

_RULE_NOTES = {
    "TABLE": "classification table row",
    "CLOSED_FORM": "closed form",
    "ORACLE": "finite-field rank oracle",
    "MONOTONE_DOWN": "conditions stay independent after removing some of them",
    "EMPTY_UP": "an empty system stays empty under extra conditions",
    "CASTELNUOVO": "restriction to a hyperplane through specialized points",
    "CONE": "a d-fold point makes members cones; project from the vertex",
    "LF_P2": "planar systems with a (d-1)-fold point are non-special up to h(d) nodes",
    "LF_P3": "space systems with a (d-1)-fold point are non-special up to k0(d) nodes",
    "LF_QUARTIC": "quartics with a triple point are non-special up to k(r) nodes",
    "LF_GENERAL": "systems with a (d-1)-fold point are non-special up to k(r,d) nodes",
    "DEG1": "two-component degeneration, b nodes on the exceptional component",
    "DEG2": "second degeneration: beta of the b nodes slide into the intersection",
    "QUARTIC_R3": "(1,4)-degeneration of quartic surfaces",
    "QUARTIC_R4": "(1,8)-degeneration of quartic threefolds",
    "QUARTIC_GEN": "(1, n-r-1)-degeneration with complete restricted series on P",
    "CUBIC_BASE": "cubic base case over random general subspaces",
    "CUBIC_STEP": "cubic induction via a codimension-3 subspace degeneration",
}


def explain(root: ProofNode) -> str:
    """Human-readable narration of a certificate, one node per line."""
    lines: list[str] = []

    def walk(node: ProofNode, depth: int) -> None:
        indent = "  " * depth
        note = _RULE_NOTES.get(node.rule, "")
        if node.rule == "TABLE":
            s = node.claim.system
            verdict = classify(s.r, s.d, s.point_count(2))
            note += f" ({verdict.exception_tag})"
        params = ""
        if node.params:
            params = " (" + ", ".join(f"{k}={v}" for k, v in sorted(node.params.items())) + ")"
        lines.append(f"{indent}- {node.claim.describe()}  [{node.rule}{params}] {note}")
        if node.side_conditions:
            conds = "; ".join(
                f"{sc.name}={sc.value} ({sc.relation})" for sc in node.side_conditions
            )
            lines.append(f"{indent}    side conditions: {conds}")
        if node.oracle is not None:
            lines.append(
                f"{indent}    oracle: prime={node.oracle.prime} seed={node.oracle.seed} "
                f"trials={node.oracle.trials}"
            )
        for child in node.children:
            walk(child, depth + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"
