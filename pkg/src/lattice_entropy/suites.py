"""Verification suites behind ``verify``; each returns a SuiteReport."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .counterexample import build as build_counterexample
from .entropy import TRUSTED, EntropyConfig, h_w
from .functors import (PSP, TOP, SpacialIndex, all_partition_algebras,
                       all_topologies, apply_functor, apply_functor_to_morphism,
                       builtin_factor_pairs, builtin_systems, check_coproduct_stability,
                       check_localization_minimality, composition_law_holds,
                       entropic_inequality_suite, enumerate_factors, factor_chains,
                       naturality_violations, ornstein_weiss_violations, random_corpus,
                       small_systems, FactorMap)
from .lattice import FiniteDistributiveLattice, GroundSet, format_cover
from .measured import (LatticeMorphism, NonemptyIndicator, PointMeasure,
                       check_measurement_axioms, check_morphism, enumerate_covers)

SUITES = ("axioms", "ornstein-weiss-preconditions", "monotonicity", "functor-laws",
          "localization-minimality", "oracle-equivalence")


@dataclass
class SuiteReport:
    suite: str
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str):
        self.failures.append(msg)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": self.checks,
                "failures": self.failures, "details": self.details}


def run_axioms(measured=None) -> SuiteReport:
    """Measurement axioms on one measured lattice, or on the built-in corpus
    together with morphism preservation for every enumerated factor."""
    rep = SuiteReport("axioms")
    if measured is not None:
        rep.checks += 1
        for v in check_measurement_axioms(measured.lattice, measured.m):
            rep.fail(str(v))
        return rep
    objs = {name: apply_functor(s).measured for name, s in builtin_systems().items()}
    cx = build_counterexample(Fraction(1, 100))
    objs["counterexample-V"], objs["counterexample-W"] = cx.V, cx.W
    for name, V in objs.items():
        rep.checks += 1
        for v in check_measurement_axioms(V.lattice, V.m):
            rep.fail(f"{name}: {v}")
    for name, s in builtin_systems().items():
        for phi in enumerate_factors(s):
            rep.checks += 1
            for v in check_morphism(apply_functor_to_morphism(s.kind, phi)):
                rep.fail(f"{name} factor {phi.point_map}: {v}")
    return rep


def run_ornstein_weiss(seed: int = 0, count: int = 20, max_points: int = 4,
                       cover_size: int = 2, config: EntropyConfig | None = None) -> SuiteReport:
    rep = SuiteReport("ornstein-weiss-preconditions")
    config = config or EntropyConfig()
    certs = set()
    systems = random_corpus(seed, count, max_points)
    for j, s in enumerate(systems):
        side = 3 if s.action.dimension == 1 else 2
        for alpha in enumerate_covers(s.lattice, cover_size):
            bad, n, c = ornstein_weiss_violations(s, alpha, config, side)
            rep.checks += n
            certs |= c
            for b in bad:
                rep.fail(f"system {j} ({s.kind}) cover {format_cover(s.ground, alpha)}: {b}")
    untrusted = certs - set(TRUSTED)
    if untrusted:
        rep.fail(f"non-exact certificates appeared: {sorted(untrusted)}")
    rep.details = {"systems": len(systems), "seed": seed, "certificates": sorted(certs)}
    return rep


def run_monotonicity(pairs=None, config: EntropyConfig | None = None,
                     extra_random: int = 4, seed: int = 0) -> SuiteReport:
    rep = SuiteReport("monotonicity")
    config = config or EntropyConfig(folner_max_n=4)
    pairs = pairs if pairs is not None else builtin_factor_pairs(extra_random, seed)
    res = entropic_inequality_suite(pairs, config)
    rep.checks = len(res.left) + len(res.right)
    for r in res.violations():
        rep.fail(f"{r.label}: source {r.source!r} < target {r.target!r} {r.detail}".strip())
    for r in res.left + res.right:
        if r.certificate not in TRUSTED and r.kind != "shift":
            rep.fail(f"{r.label}: certificate {r.certificate} is not exact")
    rep.details = {"pairs": len(res.left),
                   "shift_pairs": sum(1 for r in res.left if r.kind == "shift")}
    return rep


def run_functor_laws() -> SuiteReport:
    rep = SuiteReport("functor-laws")
    for name, s in builtin_systems().items():
        dyn = apply_functor(s)
        ident = FactorMap.identity(s)
        M_id = apply_functor_to_morphism(s.kind, ident)
        rep.checks += 1
        if M_id.embedding != LatticeMorphism.identity(dyn.measured).embedding:
            rep.fail(f"{name}: M(id) is not the identity")
        for phi, psi in factor_chains(s) if len(s.lattice) <= 8 else []:
            rep.checks += 1
            if not composition_law_holds(s.kind, phi, psi):
                rep.fail(f"{name}: M(psi o phi) != M(phi) then M(psi) for {phi.point_map}, {psi.point_map}")
            for v in check_morphism(apply_functor_to_morphism(s.kind, phi.then(psi))):
                rep.fail(f"{name}: composite morphism: {v}")
        for phi in enumerate_factors(s):
            rep.checks += 1
            for p in naturality_violations(phi):
                rep.fail(f"{name}: {p}")
        index = SpacialIndex.build(s)
        lats = [FiniteDistributiveLattice(s.ground, image, check=False) for image in index.lattices]
        for A, B in itertools.combinations(lats[:12], 2):
            rep.checks += 1
            for p in check_coproduct_stability(dyn, [A, B]):
                rep.fail(f"{name}: coproduct stability: {p}")
    return rep


def run_minimality(max_points: int = 4, cover_size: int = 3, budget: int | None = None) -> SuiteReport:
    rep = SuiteReport("localization-minimality")
    systems = small_systems(max_points)
    inconclusive = 0
    for s in systems:
        index = SpacialIndex.build(s, budget)
        for alpha in enumerate_covers(s.lattice, cover_size):
            rep.checks += 1
            r = check_localization_minimality(s, s.kind, alpha, index=index)
            if r.status == "counterexample":
                rep.fail(f"{s.kind} on {s.ground.size} points, cover "
                         f"{format_cover(s.ground, alpha)}: {r.detail}")
            elif r.status == "inconclusive":
                inconclusive += 1
    if inconclusive:
        rep.fail(f"{inconclusive} checks inconclusive (factor budget)")
    rep.details = {"systems": len(systems), "top": sum(s.kind == TOP for s in systems),
                   "psp": sum(s.kind == PSP for s in systems)}
    return rep


def dyadic_weights(n: int, denominator: int = 4) -> list[tuple]:
    return [tuple(Fraction(x, denominator) for x in w)
            for w in itertools.product(range(denominator + 1), repeat=n) if sum(w) == denominator]


def run_oracle_equivalence(max_points: int = 3) -> SuiteReport:
    """Fast paths against brute force on every sublattice of a powerset of at
    most ``max_points`` points, with full cover pools.

    Dyadic masses must agree bit for bit; other masses to 1e-9.
    """
    rep = SuiteReport("oracle-equivalence")
    counts = {"min_subcover": 0, "partition": 0}
    for n in range(1, max_points + 1):
        g = GroundSet.of_size(n)
        for T in all_topologies(n):
            W = FiniteDistributiveLattice(g, T, check=False)
            _compare(rep, W, NonemptyIndicator(), True, counts, "min_subcover")
        weights = dyadic_weights(n) + [tuple([1 / 3] * n) if n == 3 else tuple([1 / n] * n)]
        if n == 3:
            weights.append((0.01, 0.98, 0.01))
        for A in all_partition_algebras(n):
            W = FiniteDistributiveLattice(g, A, check=False)
            for w in weights:
                exact = all(isinstance(x, Fraction) for x in w)
                _compare(rep, W, PointMeasure(w), exact, counts, "partition")
    rep.details = counts
    return rep


def _compare(rep, W, m, exact, counts, key):
    config = EntropyConfig(cover_pool_max_size=len(W))
    for alpha in enumerate_covers(W, len(W)):
        rep.checks += 1
        counts[key] += 1
        fast = h_w(alpha, W, m, config)
        slow = h_w(alpha, W, m, config, method="bruteforce")
        where = f"{key} {format_cover(W.ground, alpha)} in {W}"
        if fast.certificate != "exact-by-theory":
            rep.fail(f"{where}: fast path certificate {fast.certificate}")
        if slow.certificate not in TRUSTED:
            rep.fail(f"{where}: brute force certificate {slow.certificate}")
        ok = fast.value == slow.value if exact else abs(fast.value - slow.value) <= 1e-9
        if not ok:
            rep.fail(f"{where}: fast {fast.value!r} != brute force {slow.value!r}")


def run_suite(name: str, **kw) -> SuiteReport:
    runners = {"axioms": run_axioms, "ornstein-weiss-preconditions": run_ornstein_weiss,
               "monotonicity": run_monotonicity, "functor-laws": run_functor_laws,
               "localization-minimality": run_minimality,
               "oracle-equivalence": run_oracle_equivalence}
    if name not in runners:
        raise KeyError(name)
    return runners[name](**kw)
