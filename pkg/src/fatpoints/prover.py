"""Certificate generator for the Alexander-Hirschowitz verdicts.

``prove(r, d, n)`` builds a proof tree for the dimension of the system of n
double points in degree d on P^r.  Dispatch order: classification table and
closed forms, then the degree-specific tracks (cubics via the codimension-3
subspace induction, quartics via (1, b)-degenerations, degree >= 5 via the
first or second point degeneration depending on whether r divides
C(r+d-1, r-1)), with node-count monotonicity bridging away from the critical
counts n^- and n^+.  Any goal whose rule chain fails falls back to a
finite-field oracle leaf when the column budget allows; otherwise proving
fails with the first unsatisfiable side condition named.

Side conditions and child shapes are derived by the same rule semantics the
independent verifier uses (:mod:`fatpoints.certificates`); the prover only
chooses which rule to apply where.
"""

from __future__ import annotations

import hashlib

from .certificates import (
    Claim,
    OracleStamp,
    ProofNode,
    RuleViolation,
    _claim_matches_conclusion,
    claim_implies,
    derive_application,
)
from .combinatorics import b0_decompose, gamma_r, n_bounds
from .errors import FatpointsError
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
from .systems import LinearSystem, castelnuovo_split, classify


class ProveError(FatpointsError):
    """No certificate could be produced; the message names the obstruction."""


def _leaf_seed(seed: int, sys: LinearSystem) -> int:
    h = hashlib.blake2b(f"{seed}|{sys}".encode(), digest_size=8).digest()
    return int.from_bytes(h, "little") % 2**63


class Prover:
    def __init__(self, cfg: FieldConfig | None = None, max_depth: int = 64):
        self.cfg = cfg or FieldConfig()
        self.max_depth = max_depth
        self._memo: dict[tuple[str, str], ProofNode] = {}

    # -- node assembly -------------------------------------------------------

    def _make(
        self,
        claim: Claim,
        rule: str,
        params: dict,
        children: tuple[ProofNode, ...] = (),
        oracle: OracleStamp | None = None,
    ) -> ProofNode:
        try:
            app = derive_application(claim, rule, params)
        except (RuleViolation, ValueError) as exc:
            raise ProveError(f"{rule} on {claim.describe()}: {exc}") from exc
        for sc in app.sides:
            if not sc.holds():
                raise ProveError(
                    f"{rule} on {claim.describe()}: side condition {sc.name!r} "
                    f"fails ({sc.value} {sc.relation})"
                )
        if not _claim_matches_conclusion(claim, app.conclusion):
            raise ProveError(f"{rule} does not support {claim.describe()!r}")
        if len(children) != len(app.children):
            raise ProveError(f"{rule}: wrong child count")
        for child, (want_sys, req) in zip(children, app.children):
            if child.claim.system != want_sys or not claim_implies(child.claim, req):
                raise ProveError(
                    f"{rule}: child {child.claim.describe()!r} does not discharge "
                    f"premise {req!r} on {want_sys}"
                )
        return ProofNode(claim, rule, dict(params), app.sides, children, oracle)

    def _with_assertion(self, node: ProofNode, assertion: str) -> ProofNode:
        claim = Claim(node.claim.system, assertion)
        if claim.known_dim() != node.claim.known_dim():
            raise ProveError("assertion change would alter the claimed dimension")
        return self._make(claim, node.rule, node.params, node.children, node.oracle)

    def _oracle_leaf(self, sys: LinearSystem, assertion: str, value: int | None = None) -> ProofNode:
        key = (str(sys), f"oracle:{assertion}:{value}")
        if key in self._memo:
            return self._memo[key]
        stamp = OracleStamp(
            prime=self.cfg.prime, seed=_leaf_seed(self.cfg.seed, sys), trials=self.cfg.trials
        )
        run_cfg = FieldConfig(
            prime=stamp.prime,
            trials=stamp.trials,
            seed=stamp.seed,
            max_columns=self.cfg.max_columns,
            subspace_mode=self.cfg.subspace_mode,
        )
        report = dimension(sys, run_cfg)  # raises BudgetError when too wide
        claim = Claim(sys, assertion, value)
        if report.dim != claim.known_dim():
            raise ProveError(
                f"oracle found dim {report.dim} for {sys}, cannot certify "
                f"{claim.describe()!r}"
            )
        node = self._make(claim, "ORACLE", {}, (), stamp)
        self._memo[key] = node
        return node

    def _closed_form(
        self, sys: LinearSystem, family: str, assertion: str, value: int | None = None
    ) -> ProofNode:
        return self._make(Claim(sys, assertion, value), "CLOSED_FORM", {"family": family})

    def _memoized(self, key: tuple[str, str], build) -> ProofNode:
        if key in self._memo:
            return self._memo[key]
        node = build()
        self._memo[key] = node
        return node

    def _guard(self, depth: int) -> int:
        if depth > self.max_depth:
            raise ProveError("proof depth budget exhausted")
        return depth + 1

    # -- verdict goals -------------------------------------------------------

    def prove(self, r: int, d: int, n: int) -> ProofNode:
        if r < 2:
            raise ProveError(f"need r >= 2, got {r}")
        if d < 2:
            raise ProveError(f"degree {d} systems are fully classical; nothing to prove")
        if n < 0:
            raise ProveError(f"need n >= 0, got {n}")
        return self._verdict(r, d, n, 0)

    def _verdict(self, r: int, d: int, n: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = LinearSystem.nodes(r, d, n)
        return self._memoized((str(sys), "verdict"), lambda: self._verdict_build(r, d, n, sys, depth))

    def _verdict_build(self, r: int, d: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        verdict = classify(r, d, n)
        if verdict.is_exception:
            return self._make(
                Claim(sys, "dim", verdict.closed_form_dim), "TABLE", {}
            )
        try:
            return self._verdict_rules(r, d, n, sys, depth)
        except ProveError:
            if sys.monomial_count() <= self.cfg.max_columns:
                return self._oracle_leaf(sys, "non_special")
            raise

    def _verdict_rules(self, r: int, d: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        if n == 0:
            return self._closed_form(sys, "complete", "non_special")
        if r == 1:
            return self._closed_form(sys, "line", "non_special")
        if d <= 1:
            return self._closed_form(sys, "degree_le1", "non_special")
        if r == 2:
            return self._closed_form(sys, "planar", "non_special")
        if d == 2:
            return self._closed_form(sys, "quadric", "non_special")

        nlo, nhi = n_bounds(r, d)
        if n < nlo:
            anchor = self._h1_anchor(r, d, depth)
            anchor_n = anchor.claim.system.point_count(2)
            if n == anchor_n:
                return anchor
            return self._make(
                Claim(sys, "non_special"),
                "MONOTONE_DOWN",
                {"parent": str(anchor.claim.system)},
                (anchor,),
            )
        if n > nhi:
            return self._with_assertion(self._empty(r, d, n, depth), "non_special")
        if d == 3:
            return self._cubic_verdict(r, n, sys, depth)
        if d == 4:
            return self._quartic_verdict(r, n, sys, depth)
        return self._deg(r, d, n, depth)

    def _h1_anchor(self, r: int, d: int, depth: int) -> ProofNode:
        """Largest node count below n^- carrying an independent-conditions
        claim; n^- itself except where n^- is an exception row."""
        nlo = n_bounds(r, d)[0]
        if (r, d) == (4, 3):
            return self._castelnuovo_p4_cubics(depth)
        if (r, d) == (4, 4):
            return self._quartic_verdict(4, 13, LinearSystem.nodes(4, 4, 13), depth)
        return self._verdict(r, d, nlo, depth)

    def _castelnuovo_p4_cubics(self, depth: int) -> ProofNode:
        """L_{4,3}(2^6) via hyperplane restriction: quadric kernel plus the
        empty trace L_{3,3}(2^5)."""
        depth = self._guard(depth)
        sys = LinearSystem.nodes(4, 3, 6)

        def build() -> ProofNode:
            kernel, trace = castelnuovo_split(sys, 5)
            k_node = self._closed_form(kernel, "quadric", "dim", kernel.virtual_dim())
            t_node = self._ah3(3, depth)
            return self._make(
                Claim(sys, "non_special"),
                "CASTELNUOVO",
                {"h": 5, "top": False},
                (k_node, t_node),
            )

        return self._memoized((str(sys), "verdict"), build)

    # -- degree >= 5: the two degenerations -----------------------------------

    def _deg(self, r: int, d: int, n: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = LinearSystem.nodes(r, d, n)
        b0, beta = b0_decompose(r, d)
        if beta == 0:
            children = (
                self._verdict(r - 1, d, b0, depth),
                self._verdict(r, d - 1, n - b0, depth),
                self._empty(r, d - 2, n - b0, depth),
            )
            return self._make(Claim(sys, "non_special"), "DEG1", {"b": b0}, children)
        b = b0 + beta
        children = (
            self._verdict(r - 1, d, b0, depth),
            self._verdict(r, d - 1, n - b + beta, depth),
            self._empty(r, d - 2, n - b, depth),
        )
        return self._make(
            Claim(sys, "non_special"), "DEG2", {"b": b, "beta": beta}, children
        )

    # -- quartics -------------------------------------------------------------

    def _quartic_verdict(self, r: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        depth = self._guard(depth)

        def build() -> ProofNode:
            if r == 3:
                children = (
                    self._verdict(2, 4, 4, depth),
                    self._verdict(3, 3, 4, depth),
                    self._empty(3, 2, 4, depth),
                )
                return self._make(Claim(sys, "non_special"), "QUARTIC_R3", {"b": 4}, children)
            if r == 4:
                children = (
                    self._verdict(3, 4, 8, depth),
                    self._verdict(4, 3, 5, depth),
                    self._empty(4, 2, 5, depth),
                )
                return self._make(Claim(sys, "non_special"), "QUARTIC_R4", {"b": 8}, children)
            b = n - r - 1
            children = (
                self._empty(r - 1, 4, b, depth),
                self._verdict(r, 3, r + 1, depth),
                self._empty(r, 2, r + 1, depth),
            )
            return self._make(Claim(sys, "non_special"), "QUARTIC_GEN", {"b": b}, children)

        return self._memoized((str(sys), "verdict"), build)

    # -- cubics ---------------------------------------------------------------

    def _cubic_verdict(self, r: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        depth = self._guard(depth)
        if r == 3:
            return self._with_assertion(self._ah3(3, depth), "non_special")
        if r == 4:
            raise ProveError("P^4 cubics at the critical count are the exception row")
        gamma = gamma_r(r)
        nlo, nhi = n_bounds(r, 3)
        if gamma == 0:
            return self._with_assertion(self._ah3(r, depth), "non_special")
        if n == nlo:
            ah3 = self._ah3(r, depth)
            return self._make(
                Claim(sys, "non_special"),
                "MONOTONE_DOWN",
                {"parent": str(ah3.claim.system)},
                (ah3,),
            )
        # n = n^+ = n^- + 1 < n^- + gamma: the only verdicts the subspace
        # induction does not reach; settled by the oracle at desk scale
        return self._oracle_leaf(sys, "non_special")

    def _ah3(self, r: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = ah3_system(r)

        def build() -> ProofNode:
            if r == 2:
                return self._closed_form(sys, "planar", "empty")
            if r == 3:
                return self._oracle_leaf(sys, "empty")
            if r == 4:
                raise ProveError("L(r=4,d=3; 2^7) is the exception row, not empty")
            if r in (5, 6):
                children = (self._ah3(r - 3, depth), self._matching(r, depth))
                return self._make(
                    Claim(sys, "empty"), "CUBIC_BASE", {"track": "main"}, children
                )
            if r == 7:
                children = (self._ah3(3, depth), self._p7_matching(depth))
                return self._make(
                    Claim(sys, "empty"), "CUBIC_BASE", {"track": "p7"}, children
                )
            children = (self._ah3(r - 3, depth), self._matching(r, depth))
            return self._make(
                Claim(sys, "empty"), "CUBIC_STEP", {"track": "main"}, children
            )

        return self._memoized((str(sys), "empty"), build)

    def _matching(self, r: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = matching_system(r)

        def build() -> ProofNode:
            if r in (5, 6, 7):
                return self._oracle_leaf(sys, "empty")
            children = (self._k1(r, depth), self._matching(r - 3, depth))
            return self._make(
                Claim(sys, "empty"), "CUBIC_STEP", {"track": "matching"}, children
            )

        return self._memoized((str(sys), "empty"), build)

    def _k1(self, r: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        if r == 3:
            return self._ah3(3, depth)
        sys = k1_system(r)

        def build() -> ProofNode:
            if r in (5, 7):
                return self._oracle_leaf(sys, "empty")
            rule = "CUBIC_STEP" if r >= 8 else "CUBIC_BASE"
            children = (self._k2(r, depth), self._k1(r - 3, depth))
            return self._make(Claim(sys, "empty"), rule, {"track": "k1"}, children)

        return self._memoized((str(sys), "empty"), build)

    def _k2(self, r: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = k2_system(r)

        def build() -> ProofNode:
            if r == 6:
                return self._oracle_leaf(sys, "empty")
            rule = "CUBIC_STEP" if r >= 8 else "CUBIC_BASE"
            children = (
                self._oracle_leaf(quadric_three_subspaces(r), "empty"),
                self._k2(r - 1, depth),
            )
            return self._make(Claim(sys, "empty"), rule, {"track": "k2"}, children)

        return self._memoized((str(sys), "empty"), build)

    def _p7_matching(self, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = p7_matching_system()

        def build() -> ProofNode:
            k1 = self._memoized(
                (str(p7_k1_system()), "empty"),
                lambda: self._make(
                    Claim(p7_k1_system(), "empty"),
                    "CUBIC_BASE",
                    {"track": "p7_k1"},
                    (self._oracle_leaf(p7_k2_system(), "empty"), self._ah3(3, depth)),
                ),
            )
            return self._make(
                Claim(sys, "empty"),
                "CUBIC_BASE",
                {"track": "p7_matching"},
                (k1, self._ah3(3, depth)),
            )

        return self._memoized((str(sys), "empty"), build)

    # -- emptiness goals ------------------------------------------------------

    def _empty(self, r: int, d: int, n: int, depth: int) -> ProofNode:
        depth = self._guard(depth)
        sys = LinearSystem.nodes(r, d, n)
        return self._memoized((str(sys), "empty"), lambda: self._empty_build(r, d, n, sys, depth))

    def _empty_build(self, r: int, d: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        if sys.virtual_dim() > -1:
            raise ProveError(f"{sys} has virtual dimension > -1; not empty")
        try:
            return self._empty_rules(r, d, n, sys, depth)
        except ProveError:
            if sys.monomial_count() <= self.cfg.max_columns:
                return self._oracle_leaf(sys, "empty")
            raise

    def _empty_rules(self, r: int, d: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        if r == 1:
            return self._closed_form(sys, "line", "empty")
        if d <= 1:
            return self._closed_form(sys, "degree_le1", "empty")
        if r == 2:
            return self._closed_form(sys, "planar", "empty")
        if d == 2:
            return self._closed_form(sys, "quadric", "empty")
        if d == 3:
            return self._cubic_empty(r, n, sys, depth)
        if d == 4:
            return self._quartic_empty(r, n, sys, depth)
        nlo, nhi = n_bounds(r, d)
        if n == nhi:
            return self._verdict(r, d, nhi, depth)
        if n > nhi:
            base = self._empty(r, d, nhi, depth)
            return self._empty_up(sys, base)
        raise ProveError(f"{sys}: node count below n^+; emptiness does not hold")

    def _empty_up(self, sys: LinearSystem, base: ProofNode) -> ProofNode:
        return self._make(
            Claim(sys, "empty"),
            "EMPTY_UP",
            {"via": "dominance", "base": str(base.claim.system)},
            (base,),
        )

    def _rigid_empty_up(self, sys: LinearSystem, r: int, d: int, m: int) -> ProofNode:
        base_sys = LinearSystem.nodes(r, d, m)
        base = self._make(Claim(base_sys, "dim", 0), "TABLE", {})
        return self._make(
            Claim(sys, "empty"),
            "EMPTY_UP",
            {"via": "unique_divisor", "base": str(base_sys)},
            (base,),
        )

    def _quartic_empty(self, r: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        if r == 3:
            if n <= 9:
                raise ProveError(f"{sys}: not empty (9 nodes give the rigid double quadric)")
            return self._rigid_empty_up(sys, 3, 4, 9)
        if r == 4:
            if n <= 14:
                raise ProveError(f"{sys}: not empty (14 nodes give the rigid double quadric)")
            return self._rigid_empty_up(sys, 4, 4, 14)
        nlo, nhi = n_bounds(r, 4)
        if n == nhi:
            return self._verdict(r, 4, nhi, depth)
        if n > nhi:
            return self._empty_up(sys, self._empty(r, 4, nhi, depth))
        raise ProveError(f"{sys}: node count below n^+; emptiness does not hold")

    def _cubic_empty(self, r: int, n: int, sys: LinearSystem, depth: int) -> ProofNode:
        if r == 3:
            if n < 5:
                raise ProveError(f"{sys}: not empty")
            node = self._ah3(3, depth)
            return node if n == 5 else self._empty_up(sys, node)
        if r == 4:
            if n <= 7:
                raise ProveError(f"{sys}: not empty (7 nodes give the rigid secant cubic)")
            return self._rigid_empty_up(sys, 4, 3, 7)
        gamma = gamma_r(r)
        nlo, nhi = n_bounds(r, 3)
        if gamma == 0:
            if n < nlo:
                raise ProveError(f"{sys}: not empty")
            node = self._ah3(r, depth)
            return node if n == nlo else self._empty_up(sys, node)
        if n >= nlo + gamma:
            return self._empty_up(sys, self._ah3(r, depth))
        if n == nhi:
            return self._oracle_leaf(sys, "empty")
        if n > nhi:
            return self._empty_up(sys, self._oracle_leaf(LinearSystem.nodes(r, 3, nhi), "empty"))
        raise ProveError(f"{sys}: node count below n^+; emptiness does not hold")


def prove(r: int, d: int, n: int, cfg: FieldConfig | None = None, max_depth: int = 64) -> ProofNode:
    """Certificate for the dimension of n double points in degree d on P^r."""
    return Prover(cfg, max_depth).prove(r, d, n)
