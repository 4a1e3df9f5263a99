"""Static and dynamical cover entropies on measured set lattices.

All values are in nats. Every sup/inf search returns an :class:`Estimate`
whose certificate says how far the number can be trusted:

* ``exact-by-theory``: closed form licensed by a proof (partitions in a
  boolean algebra, minimal subcovers for the nonemptiness measurement, the
  h* = log N sandwich, bounded numerators over finite orbits);
* ``exhaustive``: brute force over a provably sufficient candidate set;
* ``upper-bound`` / ``lower-bound``: a budget cut the search short.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count, product
from typing import Callable, Iterable, Sequence

from .actions import (DynamicalLattice, FolnerBox, GroupAction, act_on_cover,
                      orbit_join, orbit_translates)
from .lattice import (Cover, Element, FiniteDistributiveLattice, LatticeError,
                      cover_join, element_key, is_partition, iter_bits, maximal,
                      popcount, refines)
from .measured import MeasuredLattice, antichain_covers, enumerate_covers

EXACT = "exact-by-theory"
EXHAUSTIVE = "exhaustive"
UPPER = "upper-bound"
LOWER = "lower-bound"
TRUSTED = (EXACT, EXHAUSTIVE)

LN2 = math.log(2)

# Candidate-count ceilings for the brute-force searches.
HAT_BUDGET = 400_000
ASSIGNMENT_BUDGET = 1 << 16


class EntropyError(ValueError):
    """Precondition failure or internal inconsistency in an entropy computation."""


@dataclass(frozen=True)
class EntropyConfig:
    log_base: str = "e"
    decomposition_max_len: int = 3
    cover_pool_max_size: int | None = None  # None: |alpha| + 2
    folner_max_n: int = 12
    tolerance: float = 1e-6

    def __post_init__(self):
        if str(self.log_base) not in ("e", "2"):
            raise ValueError(f"log_base must be 'e' or '2', got {self.log_base!r}")
        object.__setattr__(self, "log_base", str(self.log_base))
        for name in ("decomposition_max_len", "folner_max_n"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.cover_pool_max_size is not None and self.cover_pool_max_size < 1:
            raise ValueError("cover_pool_max_size must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")

    def pool_size(self, alpha) -> int:
        if self.cover_pool_max_size is None:
            return len(alpha) + 2
        return self.cover_pool_max_size

    def scale(self, nats: float) -> float:
        return nats / LN2 if self.log_base == "2" else nats


DEFAULT = EntropyConfig()


@dataclass(frozen=True)
class Estimate:
    value: float
    certificate: str

    def __float__(self):
        return float(self.value)

    @property
    def trusted(self) -> bool:
        return self.certificate in TRUSTED


def weakest(certs: Iterable[str], fallback: str = UPPER) -> str:
    certs = set(certs)
    if not certs or certs <= {EXACT}:
        return EXACT
    if certs <= set(TRUSTED):
        return EXHAUSTIVE
    return fallback


# -- static quantities ---------------------------------------------------------

def total_mass(alpha: Iterable[Element], m):
    S = sum(m(a) for a in alpha)
    if not S > 0:
        raise EntropyError("total mass of a cover is not positive; the measurement is corrupt")
    return S


def _entropy_of_masses(masses: Sequence, S) -> float:
    exact = isinstance(S, (int, Fraction))
    terms = []
    for x in masses:
        if not x:
            continue
        p = float(Fraction(x) / Fraction(S)) if exact and isinstance(x, (int, Fraction)) else x / S
        terms.append(-p * math.log(p))
    return max(0.0, math.fsum(terms))


def h_star(alpha: Iterable[Element], m) -> float:
    """Shannon entropy of the member masses normalised by the total mass."""
    masses = [m(a) for a in alpha]
    S = sum(masses)
    if not S > 0:
        raise EntropyError("total mass of a cover is not positive; the measurement is corrupt")
    return _entropy_of_masses(masses, S)


def n_nonzero(alpha: Iterable[Element], m) -> int:
    return sum(1 for a in alpha if m(a) != 0)


def _require_in(alpha, W: FiniteDistributiveLattice):
    for a in alpha:
        if a not in W:
            raise EntropyError(f"cover member {W.labels(a)} is not in the sublattice W")


def h_hat(alpha: Iterable[Element], W: FiniteDistributiveLattice, m,
          config: EntropyConfig = DEFAULT) -> Estimate:
    """sup h*(beta) over covers beta of W refining alpha with N(beta) <= N(alpha).

    Zero-mass members do not change h*, so beta is searched as a set of at
    most N(alpha) nonzero members, completed by every zero-mass element of W
    that fits under alpha.
    """
    alpha = frozenset(alpha)
    _require_in(alpha, W)
    N = n_nonzero(alpha, m)
    hs = h_star(alpha, m)
    logN = math.log(N)
    if hs >= logN - 1e-12:
        return Estimate(logN, EXACT)
    if not W.materializable:
        return Estimate(hs, LOWER)
    k = min(N, config.pool_size(alpha)) if config.cover_pool_max_size is not None else N
    top = W.top
    under = [e for e in W.nonbottom() if any(e & a == e for a in alpha)]
    zero_union = 0
    nonzero = []
    for e in under:
        if m(e) == 0:
            zero_union |= e
        else:
            nonzero.append(e)
    nonzero.sort(key=lambda e: -popcount(e))
    suffix = [0] * (len(nonzero) + 1)
    for i in range(len(nonzero) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | nonzero[i]
    best = hs
    visited = 0
    chosen: list = []
    truncated = False

    def rec(start, union):
        nonlocal best, visited, truncated
        if union | zero_union == top:
            v = h_star(chosen, m)
            if v > best:
                best = v
        if len(chosen) == k or best >= logN - 1e-15:
            return
        for j in range(start, len(nonzero)):
            if (union | suffix[j] | zero_union) != top:
                return
            visited += 1
            if visited > HAT_BUDGET:
                truncated = True
                return
            chosen.append(nonzero[j])
            rec(j + 1, union | nonzero[j])
            chosen.pop()

    rec(0, 0)
    cert = EXHAUSTIVE if (k == N and not truncated) else LOWER
    return Estimate(best, cert)


# -- fast paths ----------------------------------------------------------------

def disjointify(alpha: Iterable[Element], order=None) -> Cover:
    """Ordered-difference partition a1, a2 - a1, a3 - (a1 v a2), ..."""
    seq = sorted(alpha, key=order or element_key)
    seen, out = 0, []
    for a in seq:
        cell = a & ~seen
        seen |= a
        if cell:
            out.append(cell)
    return frozenset(out)


def partition_path(alpha: Iterable[Element], W: FiniteDistributiveLattice, m) -> Estimate:
    """h_W(alpha) for an additive measure on a boolean algebra W.

    For a partition this is h*(alpha). For a general cover it is the least
    h* over partitions of W refining alpha; each atom of W is assigned to
    one member of alpha containing it and every assignment is tried.
    """
    alpha = frozenset(alpha)
    if not getattr(m, "additive", False):
        raise EntropyError("partition_path needs an additive measurement")
    if not W.is_complemented():
        raise EntropyError("partition_path needs W closed under complement")
    _require_in(alpha, W)
    if is_partition(alpha):
        return Estimate(h_star(alpha, m), EXACT)
    members = sorted(alpha, key=element_key)
    atoms = W.atoms()
    base = [0] * len(members)
    free = []
    for t in atoms:
        choices = [i for i, a in enumerate(members) if t & a == t]
        if not choices:
            raise EntropyError("an atom of W lies under no member of the cover")
        if len(choices) == 1 or m(t) == 0:
            base[choices[0]] |= t
        else:
            free.append((t, choices))
    size = 1
    for _, ch in free:
        size *= len(ch)
    if size > ASSIGNMENT_BUDGET:
        return Estimate(h_star(disjointify(alpha), m), UPPER)
    best = None
    for pick in product(*(ch for _, ch in free)):
        cells = list(base)
        for (t, _), i in zip(free, pick):
            cells[i] |= t
        v = h_star([c for c in cells if c], m)
        if best is None or v < best:
            best = v
    return Estimate(best, EXACT)


def min_subcover(alpha: Iterable[Element]) -> list[Element]:
    """Smallest subfamily of alpha with the same union (exact branch and bound)."""
    sets = sorted(maximal(a for a in alpha if a), key=element_key)
    universe = 0
    for s in sets:
        universe |= s
    best = list(sets)

    def solve(uncovered, cands, chosen):
        nonlocal best
        chosen = list(chosen)
        while True:
            if not uncovered:
                if len(chosen) < len(best):
                    best = chosen
                return
            cands = [s for s in cands if s & uncovered]
            if len(chosen) + 1 >= len(best):
                return
            covering: dict = {}
            for s in cands:
                for i in iter_bits(s & uncovered):
                    covering.setdefault(i, []).append(s)
            if len(covering) < popcount(uncovered):
                return
            forced = {c[0] for c in covering.values() if len(c) == 1}
            if not forced:
                break
            for s in forced:
                chosen.append(s)
                uncovered &= ~s
            cands = [s for s in cands if s not in forced]
            if len(chosen) >= len(best) and uncovered:
                return
        widest = max(popcount(s & uncovered) for s in cands)
        if len(chosen) + -(-popcount(uncovered) // widest) >= len(best):
            return
        pivot = min(covering, key=lambda i: len(covering[i]))
        for s in sorted(covering[pivot], key=lambda s: -popcount(s & uncovered)):
            solve(uncovered & ~s, [c for c in cands if c != s], chosen + [s])

    solve(universe, sets, [])
    return best


def min_subcover_path(alpha: Iterable[Element]) -> Estimate:
    """log of the minimal subcover size; h_W for the nonemptiness measurement."""
    alpha = [a for a in alpha if a]
    if is_partition(alpha):
        # no member of a partition is redundant
        return Estimate(math.log(len(alpha)), EXACT)
    return Estimate(math.log(len(min_subcover(alpha))), EXACT)


# -- localized cover entropy ---------------------------------------------------

class _SearchSpace:
    """Antichain cover pool of W with cached h-hat values."""

    def __init__(self, W, m, pool_max, config):
        self.W, self.m = W, m
        every = antichain_covers(W)
        self.pool = [c for c in every if len(c) <= pool_max]
        self.complete = len(self.pool) == len(every)
        self.config = config
        self.cost: dict = {}

    def hat(self, c) -> Estimate:
        est = self.cost.get(c)
        if est is None:
            est = h_hat(c, self.W, self.m, self.config)
            self.cost[c] = est
        return est

    def prepared(self):
        if not hasattr(self, "_prep"):
            zero, positive, trusted = [], [], True
            for c in self.pool:
                est = self.hat(c)
                trusted &= est.trusted
                (zero if est.value == 0 else positive).append((est.value, c))
            base = frozenset({self.W.top})
            for _, c in zero:
                base = maximal(cover_join(base, c))
            positive.sort(key=lambda t: (t[0], sorted(t[1])))
            self._prep = (base, positive, trusted)
        return self._prep


@lru_cache(maxsize=512)
def _space(W, m, pool_max, config) -> _SearchSpace:
    return _SearchSpace(W, m, pool_max, config)


def h_w_bruteforce(alpha: Iterable[Element], W: FiniteDistributiveLattice, m,
                   config: EntropyConfig = DEFAULT) -> Estimate:
    """inf of sum h-hat(beta_j) over finite families of covers of W whose join
    refines alpha, by uniform-cost search over joins.

    Members of the pool are antichain covers: replacing beta by its maximal
    members keeps the join equivalent and cannot raise h-hat. Zero-cost
    covers are joined in for free at the start. The search state is the
    antichain of the running join together with the number of positive-cost
    covers used (capped by ``decomposition_max_len``).
    """
    alpha = frozenset(alpha)
    _require_in(alpha, W)
    top = W.top
    target = maximal(alpha)
    if top in alpha:
        return Estimate(0.0, EXACT)
    own = h_hat(target, W, m, config)
    if not W.materializable:
        return Estimate(own.value, UPPER)
    space = _space(W, m, config.pool_size(alpha), config)
    base, positive, trusted = space.prepared()
    candidates = list(positive)
    if target not in space.pool:
        candidates.append((own.value, target))
        candidates.sort(key=lambda t: (t[0], sorted(t[1])))
    cap = config.decomposition_max_len
    delta = min((c for c, _ in candidates), default=math.inf)

    tick = count()
    heap = [(0.0, 0, next(tick), base, ())]
    settled = set()
    best = own.value
    truncated_at = math.inf
    while heap:
        cost, depth, _, state, path = heapq.heappop(heap)
        if (state, depth) in settled:
            continue
        settled.add((state, depth))
        if cost >= best:
            break
        if refines(state, target):
            best = cost
            break
        if depth == cap:
            truncated_at = min(truncated_at, cost)
            continue
        for c, beta in candidates:
            nxt = maximal(cover_join(state, beta))
            if nxt == state:
                continue
            new_path = tuple(sorted(path + (c,)))
            heapq.heappush(heap, (math.fsum(new_path), depth + 1, next(tick), nxt, new_path))
    sound = truncated_at + delta >= best - 1e-12
    ok = space.complete and trusted and own.trusted and sound
    return Estimate(best, EXHAUSTIVE if ok else UPPER)


def h_w(alpha: Iterable[Element], W: FiniteDistributiveLattice, m,
        config: EntropyConfig = DEFAULT, method: str = "auto") -> Estimate:
    """Localized cover entropy h_W(alpha).

    ``method="auto"`` takes the minimal-subcover path for the nonemptiness
    measurement, the partition path for additive measures on boolean W, and
    brute force otherwise.
    """
    alpha = frozenset(alpha)
    if method == "bruteforce":
        return h_w_bruteforce(alpha, W, m, config)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if getattr(m, "indicator", False):
        _require_in(alpha, W)
        return min_subcover_path(alpha)
    if getattr(m, "additive", False) and W.is_complemented():
        return partition_path(alpha, W, m)
    return h_w_bruteforce(alpha, W, m, config)


# -- Folner averages -----------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    box_size: int
    h_w: float
    ratio: float
    certificate: str


@dataclass
class ConvergenceTable:
    rows: list = field(default_factory=list)
    limit: Estimate | None = None

    def ratios(self) -> list[float]:
        return [r.ratio for r in self.rows]

    @property
    def terminal(self) -> float:
        return self.rows[-1].ratio

    @property
    def certificate(self) -> str:
        return weakest(r.certificate for r in self.rows)

    def upper_bound(self) -> float:
        """Smallest ratio seen; bounds the limit from above for subadditive rows."""
        return min(self.ratios())

    def converged(self, tol: float) -> bool:
        tail = self.ratios()[-3:]
        return len(tail) == 3 and max(tail) - min(tail) < tol

    def scaled(self, config: EntropyConfig) -> "ConvergenceTable":
        s = config.scale
        rows = [ConvergenceRow(r.n, r.box_size, s(r.h_w), s(r.ratio), r.certificate)
                for r in self.rows]
        lim = None if self.limit is None else Estimate(s(self.limit.value), self.limit.certificate)
        return ConvergenceTable(rows, lim)

    def to_csv(self) -> str:
        lines = ["n,box_size,h_w,ratio,certificate"]
        for r in self.rows:
            lines.append(f"{r.n},{r.box_size},{r.h_w!r},{r.ratio!r},{r.certificate}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        out = {"rows": [{"n": r.n, "box_size": r.box_size, "h_w": r.h_w,
                         "ratio": r.ratio, "certificate": r.certificate} for r in self.rows]}
        if self.limit is not None:
            out["limit"] = {"value": self.limit.value, "certificate": self.limit.certificate}
        return out


def folner_entropy(action: GroupAction, alpha: Iterable[Element], W_rule, m,
                   config: EntropyConfig = DEFAULT, method: str = "auto") -> ConvergenceTable:
    """Rows h_W(alpha^{F_n}) / |F_n| for the boxes F_1 .. F_{folner_max_n}.

    ``W_rule`` is an invariant sublattice containing alpha, or a callable
    (a localization) evaluated at alpha. A permutation action generates a
    finite group, so alpha^{F_n} ranges over finitely many covers and the
    limit of the ratios is 0; the table records that as an exact limit.
    """
    alpha = frozenset(alpha)
    W = W_rule(alpha) if callable(W_rule) else W_rule
    _require_in(alpha, W)
    bad = action.violations(W)
    if bad:
        raise EntropyError(f"W is not invariant under the action: {bad[0]}")
    table = ConvergenceTable()
    seen: dict = {}
    for n in range(1, config.folner_max_n + 1):
        box = FolnerBox(n, action.dimension)
        cover = orbit_join(action, alpha, box)
        key = maximal(cover)
        est = seen.get(key)
        if est is None:
            est = h_w(cover, W, m, config, method)
            seen[key] = est
        table.rows.append(ConvergenceRow(n, len(box), est.value, est.value / len(box),
                                         est.certificate))
    table.limit = Estimate(0.0, EXACT)
    return table


@dataclass
class MDLEntropy:
    """Lattice entropy: the limit value plus the per-window suprema."""

    value: float
    certificate: str
    windows: list = field(default_factory=list)  # (n, sup ratio, certificate)
    covers_examined: int = 0


def h_mdl(obj: DynamicalLattice, config: EntropyConfig = DEFAULT,
          method: str = "auto") -> MDLEntropy:
    """sup over covers alpha of V of the Folner limit of h_{Omega(alpha)}(alpha^{F_n}) / |F_n|.

    Alongside the limit, ``windows[n-1]`` holds the supremum over covers of
    the n-th ratio; the monotonicity under morphisms already holds window
    by window, which is where finite systems carry content.
    """
    V = obj.lattice
    size = len(V.nonbottom())
    budget = config.cover_pool_max_size or size
    complete = budget >= size
    sups = [0.0] * config.folner_max_n
    certs = [[] for _ in range(config.folner_max_n)]
    limit, limit_certs, examined = 0.0, [], 0
    for alpha in enumerate_covers(V, budget):
        examined += 1
        table = folner_entropy(obj.action, alpha, obj.omega, obj.m, config, method)
        for i, row in enumerate(table.rows):
            sups[i] = max(sups[i], row.ratio)
            certs[i].append(row.certificate)
        limit = max(limit, table.limit.value)
        limit_certs.append(table.limit.certificate)
    lower = EXACT if complete else LOWER
    windows = []
    for i in range(config.folner_max_n):
        c = weakest(certs[i], LOWER)
        windows.append((i + 1, sups[i], c if complete else LOWER))
    cert = weakest(limit_certs, LOWER) if complete else lower
    return MDLEntropy(limit, cert, windows, examined)


def palm_global_entropy(V: MeasuredLattice, action: GroupAction | None = None,
                        alpha: Iterable[Element] | None = None,
                        config: EntropyConfig = DEFAULT, method: str = "auto") -> Estimate:
    """Entropy computed relative to the ambient lattice instead of Omega(alpha).

    Without an action the group is trivial and the single Folner set is the
    identity, so this is the static h_V(alpha); without ``alpha`` it is the
    supremum over all covers of V.
    """
    L, m = V.lattice, V.m
    covers = [frozenset(alpha)] if alpha is not None else list(enumerate_covers(L, len(L)))
    best, certs = 0.0, []
    for a in covers:
        if action is None:
            est = h_w(a, L, m, config, method)
        else:
            est = folner_entropy(action, a, L, m, config, method).limit
        best = max(best, est.value)
        certs.append(est.certificate)
    return Estimate(best, weakest(certs, LOWER))


def f_alpha_w(action: GroupAction, alpha, W, m, F: Iterable[tuple],
              config: EntropyConfig = DEFAULT, method: str = "bruteforce") -> Estimate:
    """F -> h_W(alpha^F) for an arbitrary finite F of Z^d."""
    return h_w(orbit_join(action, alpha, list(F)), W, m, config, method)
