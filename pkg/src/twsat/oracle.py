"""Brute-force ground truth and random instances of bounded width."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .decomp import TreeDecomposition, make_nice
from .formula import CnfFormula
from .solvers.stats import Verdict

MAX_BRUTE_VARS = 24


class GeneratorError(ValueError):
    pass


def clause_masks(formula: CnfFormula) -> tuple[np.ndarray, np.ndarray]:
    pos = np.zeros(formula.num_clauses, dtype=np.int64)
    neg = np.zeros(formula.num_clauses, dtype=np.int64)
    for i, clause in enumerate(formula.clauses):
        for lit in clause:
            if lit > 0:
                pos[i] |= 1 << (lit - 1)
            else:
                neg[i] |= 1 << (-lit - 1)
    return pos, neg


def brute_force_model(formula: CnfFormula) -> dict[int, int] | None:
    n = formula.num_vars
    if n > MAX_BRUTE_VARS:
        raise ValueError(f"brute force limited to {MAX_BRUTE_VARS} variables, got {n}")
    pos, neg = clause_masks(formula)
    x = _kernels.brute_force(pos, neg, n)
    if x < 0:
        return None
    return {j: (x >> (j - 1)) & 1 for j in range(1, n + 1)}


def brute_force_sat(formula: CnfFormula) -> Verdict:
    return Verdict.of(brute_force_model(formula) is not None)


@dataclass(frozen=True)
class GeneratorSpec:
    target_width: int
    shape: str = "path"
    num_vars: int = 8
    num_clauses: int = 8
    max_clause_len: int = 3
    seed: int = 0


def _random_clause(rng, pool, max_len) -> tuple[int, ...]:
    k = int(rng.integers(1, min(max_len, len(pool)) + 1))
    chosen = rng.choice(np.asarray(sorted(pool)), size=k, replace=False)
    return tuple(int(x) if rng.random() < 0.5 else -int(x) for x in sorted(chosen))


def gen_bounded_width(spec: GeneratorSpec) -> tuple[CnfFormula, TreeDecomposition]:
    """Random formula plus a decomposition of width at most ``spec.target_width``.

    Each clause draws its variables from one window of at most
    ``target_width`` variables and sits with that window in a bag, so the
    bound holds by construction.
    """
    n, m, w = spec.num_vars, spec.num_clauses, spec.target_width
    if n < 1 or m < 0 or w < 0 or spec.max_clause_len < 1:
        raise GeneratorError("invalid generator parameters")
    window = min(w, n)
    if m and window < 1:
        raise GeneratorError("width 0 cannot hold a clause together with one of its variables")
    if m and spec.max_clause_len > window:
        raise GeneratorError(f"clauses of length {spec.max_clause_len} do not fit a window of {window}")
    rng = np.random.default_rng(spec.seed)
    if spec.shape == "path":
        return _gen_path(rng, n, m, max(window, 1), spec.max_clause_len, w)
    if spec.shape == "tree":
        return _gen_tree(rng, n, m, max(window, 1), spec.max_clause_len, w)
    raise GeneratorError(f"unknown shape {spec.shape!r}")


def _gen_path(rng, n, m, window, max_len, w):
    if w == 0:
        bags = {j: frozenset([j]) for j in range(1, n + 1)}
        return CnfFormula(n, ()), TreeDecomposition(bags, tuple((j, j + 1) for j in range(1, n)), n)
    starts = list(range(1, n - window + 2))
    placed: dict[int, list[int]] = {s: [] for s in starts}
    clauses = []
    for i in range(m):
        s = starts[int(rng.integers(len(starts)))]
        clauses.append(_random_clause(rng, range(s, s + window), max_len))
        placed[s].append(i + 1)
    bags = {}
    chain = []
    for s in starts:
        members = frozenset(range(s, s + window))
        if not placed[s]:
            bags[len(bags) + 1] = members
            chain.append(len(bags))
        for ci in placed[s]:
            bags[len(bags) + 1] = members | {n + ci}
            chain.append(len(bags))
    edges = tuple(zip(chain, chain[1:]))
    return CnfFormula(n, tuple(clauses)), TreeDecomposition(bags, edges, n + m)


def _gen_tree(rng, n, m, window, max_len, w):
    if w == 0:
        bags = {j: frozenset([j]) for j in range(1, n + 1)}
        return CnfFormula(n, ()), TreeDecomposition(bags, tuple((1, j) for j in range(2, n + 1)), n)
    bags: dict[int, frozenset[int]] = {}
    edges = []
    first = min(window, n)
    bags[1] = frozenset(range(1, first + 1))
    nxt = first + 1
    while nxt <= n:
        host = int(rng.integers(1, len(bags) + 1))
        keep_max = window - 1
        inherited = [int(x) for x in rng.permutation(sorted(bags[host]))[: int(rng.integers(0, keep_max + 1))]]
        fresh_count = int(rng.integers(1, window - len(inherited) + 1))
        fresh = list(range(nxt, min(n, nxt + fresh_count - 1) + 1))
        nxt += len(fresh)
        b = len(bags) + 1
        bags[b] = frozenset(inherited + fresh)
        edges.append((host, b))
    var_bags = len(bags)
    clauses = []
    for i in range(m):
        host = int(rng.integers(1, var_bags + 1))
        clause = _random_clause(rng, bags[host], max_len)
        clauses.append(clause)
        b = len(bags) + 1
        bags[b] = frozenset(abs(l) for l in clause) | {n + i + 1}
        edges.append((host, b))
    td = TreeDecomposition(bags, tuple(edges), n + m)
    return CnfFormula(n, tuple(clauses)), make_nice(td)
