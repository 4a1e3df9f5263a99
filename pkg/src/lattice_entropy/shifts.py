"""Symbolic systems presented one Folner window at a time.

A window of length n is the powerset of the admissible n-words (cylinder
atoms). The time-0 cover pushed through the window is the atom partition,
so the Folner ratios reduce to the entropy of the atom partition: a
Shannon sum for the measure kinds, log of the word count for the
topological kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .actions import FolnerBox, GroupAction
from .entropy import (EXACT, UPPER, ConvergenceRow, ConvergenceTable,
                      EntropyConfig, Estimate, DEFAULT, h_w)
from .lattice import Cover, FiniteDistributiveLattice, GroundSet
from .measured import NonemptyIndicator, PointMeasure

KINDS = ("bernoulli", "markov", "sft", "point")
MODES = ("measure", "topological")
PROB_TOL = 1e-9
SPECTRAL_TOL = 1e-13
MAX_WORDS = 1 << 16


class ShiftError(ValueError):
    """Invalid system description or empty language."""


def _as_word(w, alphabet) -> tuple:
    if isinstance(w, str) and all(len(s) == 1 for s in alphabet):
        w = list(w)
    w = tuple(str(s) for s in w)
    for s in w:
        if s not in alphabet:
            raise ShiftError(f"forbidden word uses unknown symbol {s!r}")
    if not w:
        raise ShiftError("forbidden words must be nonempty")
    return w


@dataclass(frozen=True)
class ShiftSystem:
    """One-dimensional shift: Bernoulli, Markov, SFT or the one-point system.

    Measure kinds with ``mode="topological"`` stand for their support
    subshift.
    """

    alphabet: tuple
    kind: str
    mode: str = "measure"
    weights: tuple = ()
    P: tuple = ()
    stationary: tuple = ()
    forbidden: tuple = ()

    def __post_init__(self):
        alph = tuple(str(s) for s in self.alphabet)
        object.__setattr__(self, "alphabet", alph)
        if self.kind not in KINDS:
            raise ShiftError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.mode not in MODES:
            raise ShiftError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if len(set(alph)) != len(alph):
            raise ShiftError("alphabet symbols must be distinct")
        k = len(alph)
        if self.kind == "point":
            if k != 1:
                raise ShiftError("the point system has a one-symbol alphabet")
            return
        if k < 2:
            raise ShiftError("alphabet needs at least 2 symbols")
        if self.kind == "bernoulli":
            w = tuple(self.weights)
            if len(w) != k or any(x < 0 for x in w) or abs(sum(w) - 1) > PROB_TOL:
                raise ShiftError("bernoulli weights must be k nonnegative numbers summing to 1")
            object.__setattr__(self, "weights", w)
        elif self.kind == "markov":
            P = tuple(tuple(r) for r in self.P)
            if len(P) != k or any(len(r) != k for r in P):
                raise ShiftError(f"transition matrix must be {k}x{k}")
            if any(x < 0 for r in P for x in r):
                raise ShiftError("transition probabilities must be nonnegative")
            for i, r in enumerate(P):
                if abs(sum(r) - 1) > PROB_TOL:
                    raise ShiftError(f"row {i} of the transition matrix sums to {sum(r)}, not 1")
            object.__setattr__(self, "P", P)
            pi = tuple(self.stationary) or stationary_vector(P)
            if len(pi) != k or abs(sum(pi) - 1) > PROB_TOL:
                raise ShiftError("stationary vector must be a probability vector")
            for j in range(k):
                if abs(sum(pi[i] * P[i][j] for i in range(k)) - pi[j]) > PROB_TOL:
                    raise ShiftError("stationary vector does not satisfy pi P = pi")
            object.__setattr__(self, "stationary", tuple(pi))
        else:
            if self.mode != "topological":
                raise ShiftError("an SFT carries no measure; use mode 'topological'")
            fw = tuple(_as_word(w, alph) for w in self.forbidden)
            object.__setattr__(self, "forbidden", fw)

    @classmethod
    def bernoulli(cls, weights, alphabet=None, mode="measure"):
        alphabet = alphabet or tuple(str(i) for i in range(len(weights)))
        return cls(tuple(alphabet), "bernoulli", mode, weights=tuple(weights))

    @classmethod
    def markov(cls, P, alphabet=None, mode="measure", stationary=()):
        alphabet = alphabet or tuple(str(i) for i in range(len(P)))
        return cls(tuple(alphabet), "markov", mode, P=tuple(map(tuple, P)), stationary=tuple(stationary))

    @classmethod
    def sft(cls, forbidden, alphabet=("0", "1")):
        return cls(tuple(alphabet), "sft", "topological", forbidden=tuple(forbidden))

    @classmethod
    def point(cls, mode="measure"):
        return cls(("*",), "point", mode)

    @classmethod
    def from_json(cls, data: dict, mode: str | None = None) -> "ShiftSystem":
        if not isinstance(data, dict) or "kind" not in data:
            raise ShiftError("system JSON needs a 'kind' field")
        kind = data["kind"]
        mode = mode or data.get("mode") or ("topological" if kind == "sft" else "measure")
        if kind == "point":
            return cls.point(mode)
        alphabet = tuple(data.get("alphabet") or ())
        if kind == "bernoulli":
            w = data.get("weights") or data.get("p")
            if w is None:
                raise ShiftError("bernoulli system needs 'weights'")
            return cls.bernoulli(w, alphabet or None, mode)
        if kind == "markov":
            if "P" not in data:
                raise ShiftError("markov system needs 'P'")
            return cls.markov(data["P"], alphabet or None, mode, data.get("stationary", ()))
        if kind == "sft":
            return cls(alphabet or ("0", "1"), "sft", mode, forbidden=tuple(data.get("forbidden", ())))
        raise ShiftError(f"unknown kind {kind!r}; expected one of {KINDS}")

    def to_json(self) -> dict:
        out = {"kind": self.kind, "alphabet": list(self.alphabet), "mode": self.mode}
        if self.kind == "bernoulli":
            out["weights"] = list(self.weights)
        elif self.kind == "markov":
            out["P"] = [list(r) for r in self.P]
            out["stationary"] = list(self.stationary)
        elif self.kind == "sft":
            out["forbidden"] = [list(w) for w in self.forbidden]
        return out

    # -- support language ------------------------------------------------------

    def support_forbidden(self) -> tuple:
        """Forbidden words of the (topological) support subshift."""
        a = self.alphabet
        if self.kind == "sft":
            return self.forbidden
        if self.kind == "bernoulli":
            return tuple((a[i],) for i, w in enumerate(self.weights) if w == 0)
        if self.kind == "markov":
            out = [(a[i],) for i, p in enumerate(self.stationary) if p == 0]
            out += [(a[i], a[j]) for i, r in enumerate(self.P) for j, x in enumerate(r) if x == 0]
            return tuple(out)
        return ()


def stationary_vector(P) -> tuple:
    """Left eigenvector of P for eigenvalue 1, normalised (rationals kept exact)."""
    k = len(P)
    if all(isinstance(x, (int, Fraction)) for r in P for x in r):
        return _stationary_exact(P)
    M = np.array(P, dtype=float).T - np.eye(k)
    M = np.vstack([M, np.ones(k)])
    b = np.zeros(k + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(M, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return tuple(float(x) for x in pi / pi.sum())


def _stationary_exact(P) -> tuple:
    k = len(P)
    rows = [[Fraction(P[i][j]) - (1 if i == j else 0) for i in range(k)] for j in range(k)]
    rows[-1] = [Fraction(1)] * k
    rhs = [Fraction(0)] * (k - 1) + [Fraction(1)]
    A = [r + [v] for r, v in zip(rows, rhs)]
    for c in range(k):
        piv = next((r for r in range(c, k) if A[r][c] != 0), None)
        if piv is None:
            raise ShiftError("stationary vector is not unique")
        A[c], A[piv] = A[piv], A[c]
        for r in range(k):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return tuple(A[i][k] / A[i][i] for i in range(k))


# -- language ---------------------------------------------------------------------

def _locally_ok(word: tuple, forbidden: Sequence[tuple]) -> bool:
    n = len(word)
    for f in forbidden:
        L = len(f)
        for i in range(n - L + 1):
            if word[i:i + L] == f:
                return False
    return True


@dataclass
class _BlockGraph:
    block: int
    vertices: list
    succ: dict


def _block_graph(alphabet, forbidden) -> _BlockGraph:
    L = max((len(f) for f in forbidden), default=1)
    B = max(L - 1, 1)
    verts = [w for w in product(alphabet, repeat=B) if _locally_ok(w, forbidden)]
    vs = set(verts)
    succ = {v: [v[1:] + (s,) for s in alphabet
                if v[1:] + (s,) in vs and _locally_ok(v + (s,), forbidden)] for v in verts}
    return _BlockGraph(B, verts, succ)


def _prune(graph: _BlockGraph) -> _BlockGraph:
    """Essential subgraph: repeatedly drop blocks without a predecessor or successor."""
    alive = set(graph.vertices)
    changed = True
    while changed:
        changed = False
        has_pred = set()
        for v in alive:
            for w in graph.succ[v]:
                if w in alive:
                    has_pred.add(w)
        for v in list(alive):
            if v not in has_pred or not any(w in alive for w in graph.succ[v]):
                alive.discard(v)
                changed = True
    verts = [v for v in graph.vertices if v in alive]
    return _BlockGraph(graph.block, verts, {v: [w for w in graph.succ[v] if w in alive] for v in verts})


def _shortest_empty_window(alphabet, forbidden) -> int:
    words = [()]
    n = 0
    while words:
        n += 1
        words = [w + (s,) for w in words for s in alphabet if _locally_ok(w + (s,), forbidden)]
        if n > 64:
            break
    return n


class Language:
    """Words of the subshift avoiding ``forbidden`` (those extending bi-infinitely)."""

    def __init__(self, alphabet, forbidden):
        self.alphabet = tuple(alphabet)
        self.forbidden = tuple(forbidden)
        self.graph = _prune(_block_graph(self.alphabet, self.forbidden))
        if not self.graph.vertices:
            n = _shortest_empty_window(self.alphabet, self.forbidden)
            raise ShiftError(f"the subshift is empty: no admissible word of length {n}")
        self._cache: dict = {}

    def words(self, n: int) -> list[tuple]:
        if n < 1:
            raise ShiftError("window length must be >= 1")
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        B = self.graph.block
        if n <= B:
            out = sorted({v[:n] for v in self.graph.vertices})
        else:
            out = list(self.graph.vertices)
            for _ in range(n - B):
                out = [w + (u[-1],) for w in out for u in self.graph.succ[w[-B:]]]
                if len(out) > MAX_WORDS:
                    raise ShiftError(f"more than {MAX_WORDS} words at length {n}")
            out.sort()
        self._cache[n] = out
        return out

    def transfer_matrix(self) -> np.ndarray:
        idx = {v: i for i, v in enumerate(self.graph.vertices)}
        A = np.zeros((len(idx), len(idx)))
        for v, ws in self.graph.succ.items():
            for w in ws:
                A[idx[v], idx[w]] = 1.0
        return A


def _classes(A: np.ndarray) -> list:
    """Strongly connected classes from the reachability closure."""
    n = A.shape[0]
    R = (A > 0) | np.eye(n, dtype=bool)
    for _ in range(max(1, n.bit_length())):
        R = R | ((R.astype(np.int64) @ R.astype(np.int64)) > 0)
    mutual = R & R.T
    seen, out = np.zeros(n, dtype=bool), []
    for i in range(n):
        if not seen[i]:
            cls = np.flatnonzero(mutual[i])
            seen[cls] = True
            out.append(cls)
    return out


def _perron_irreducible(A: np.ndarray, tol: float, max_iter: int) -> float:
    # A + I is primitive, so the iteration converges geometrically and
    # min/max of y/x bracket the root at every step
    n = A.shape[0]
    M = A + np.eye(n)
    x = np.ones(n) / n
    for _ in range(max_iter):
        y = M @ x
        r = y / x
        lo, hi = float(r.min()), float(r.max())
        x = y / y.sum()
        if hi - lo < tol:
            break
    return (lo + hi) / 2 - 1.0


def spectral_radius(A: np.ndarray, tol: float = SPECTRAL_TOL, max_iter: int = 100_000) -> float:
    """Perron root of a nonnegative matrix: the largest root over its
    irreducible diagonal blocks, each found by power iteration."""
    A = np.asarray(A, dtype=float)
    best = 0.0
    for cls in _classes(A):
        block = A[np.ix_(cls, cls)]
        if len(cls) == 1 and block[0, 0] == 0:
            continue
        best = max(best, _perron_irreducible(block, tol, max_iter))
    return best


# -- windows ------------------------------------------------------------------------

@dataclass
class WindowedLattice:
    window: FolnerBox
    words: list
    lattice: FiniteDistributiveLattice
    m: object
    base_cover: Cover

    def atom_mass(self, i: int):
        return self.m(1 << i)


def language(system: ShiftSystem) -> Language:
    if system.kind == "point":
        return Language(system.alphabet, ())
    return Language(system.alphabet, system.support_forbidden())


def word_measure(system: ShiftSystem, w: tuple):
    a = {s: i for i, s in enumerate(system.alphabet)}
    if system.kind == "point":
        return 1
    if system.kind == "bernoulli":
        out = 1
        for s in w:
            out *= system.weights[a[s]]
        return out
    if system.kind == "markov":
        out = system.stationary[a[w[0]]]
        for x, y in zip(w, w[1:]):
            out *= system.P[a[x]][a[y]]
        return out
    raise ShiftError("an SFT carries no measure")


def window(system: ShiftSystem, n: int, lang: Language | None = None) -> WindowedLattice:
    """Powerset of the admissible n-words with cylinder measure or nonemptiness."""
    lang = lang or language(system)
    words = lang.words(n)
    ground = GroundSet(tuple("".join(w) if all(len(s) == 1 for s in w) else "|".join(w)
                             for w in words))
    L = FiniteDistributiveLattice.powerset(ground)
    if system.mode == "topological":
        m = NonemptyIndicator()
    else:
        m = PointMeasure([word_measure(system, w) for w in words])
    base = frozenset(1 << i for i in range(len(words)))
    return WindowedLattice(FolnerBox(n), words, L, m, base)


def _constant_ratio(system: ShiftSystem) -> bool:
    if system.kind == "point":
        return True
    if system.mode == "measure":
        return system.kind == "bernoulli"
    return system.kind in ("bernoulli", "markov") and not system.support_forbidden()


def shift_entropy_table(system: ShiftSystem, config: EntropyConfig = DEFAULT) -> ConvergenceTable:
    lang = language(system)
    table = ConvergenceTable()
    for n in range(1, config.folner_max_n + 1):
        win = window(system, n, lang)
        est = h_w(win.base_cover, win.lattice, win.m, config)
        table.rows.append(ConvergenceRow(n, n, est.value, est.value / n, est.certificate))
    if _constant_ratio(system) and table.certificate == EXACT:
        table.limit = Estimate(table.rows[0].ratio, EXACT)
    else:
        table.limit = Estimate(table.upper_bound(), UPPER)
    return table


def _shannon(ps) -> float:
    return math.fsum(-p * math.log(p) for p in ps if p > 0)


def classical_ks_entropy(system: ShiftSystem) -> float:
    if system.kind == "point":
        return 0.0
    if system.kind == "bernoulli":
        return _shannon(float(w) for w in system.weights)
    if system.kind == "markov":
        return math.fsum(-float(pi) * float(p) * math.log(float(p))
                         for pi, row in zip(system.stationary, system.P)
                         for p in row if p > 0 and pi > 0)
    raise ShiftError("an SFT carries no measure")


def classical_top_entropy(system: ShiftSystem) -> float:
    if system.kind == "point":
        return 0.0
    rho = spectral_radius(language(system).transfer_matrix())
    return math.log(rho)


def classical_entropy(system: ShiftSystem) -> float:
    if system.mode == "topological":
        return classical_top_entropy(system)
    return classical_ks_entropy(system)


@dataclass
class ShiftMDL:
    value: float
    certificate: str
    table: ConvergenceTable = field(repr=False, default=None)


def shift_h_mdl(system: ShiftSystem, config: EntropyConfig = DEFAULT) -> ShiftMDL:
    """Lattice entropy of a shift, from the generating time-0 cover only.

    The time-0 cover generates, so its Folner limit is the supremum; the
    finite table only certifies that limit when the ratios are constant.
    """
    table = shift_entropy_table(system, config)
    cert = EXACT if table.limit.certificate == EXACT else UPPER
    return ShiftMDL(table.limit.value, cert, table)


# -- periodic models -------------------------------------------------------------

@dataclass
class PeriodicModel:
    """Cyclic words of a fixed period with the rotation action; a finite
    stand-in for a Bernoulli shift on which covers can be joined explicitly."""

    words: list
    ground: GroundSet
    lattice: FiniteDistributiveLattice
    m: PointMeasure
    action: GroupAction
    time0: Cover


def periodic_model(system: ShiftSystem, period: int) -> PeriodicModel:
    if system.kind != "bernoulli":
        raise ShiftError("periodic models are built for Bernoulli systems")
    if not 1 <= period <= 12:
        raise ShiftError("period must be between 1 and 12")
    words = list(product(system.alphabet, repeat=period))
    index = {w: i for i, w in enumerate(words)}
    ground = GroundSet(tuple("".join(w) for w in words))
    shift = tuple(index[w[1:] + w[:1]] for w in words)
    m = PointMeasure([word_measure(system, w) for w in words])
    time0 = frozenset(sum(1 << i for i, w in enumerate(words) if w[0] == s) for s in system.alphabet)
    time0 = frozenset(e for e in time0 if e)
    action = GroupAction(len(words), [shift], boolean=True)
    return PeriodicModel(words, ground, FiniteDistributiveLattice.powerset(ground), m, action, time0)
