"""Backtracking isomorphism search for finite multiplication tables.

Every algebraic isomorphism question in the package is answered by
:func:`iter_isomorphisms`; categories take part once encoded as semigroups
with an absorbing "undefined" element.  The search assigns images to a
generating set and propagates along the right Cayley graph; a consistent
injective assignment of all generators is an isomorphism.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10_000_000


class Budget:
    """Node counter shared by one logical search (possibly many sub-searches)."""

    def __init__(self, limit: int = DEFAULT_BUDGET, what: str = "search"):
        if limit <= 0:
            raise ValueError("budget must be positive")
        self.limit = limit
        self.used = 0
        self.what = what

    def spend(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.limit:
            raise BudgetExceeded(self.what, self.limit)


def as_budget(budget) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(DEFAULT_BUDGET if budget is None else int(budget))


def element_signatures(t: np.ndarray) -> list[tuple]:
    """Isomorphism-invariant fingerprint of every element of a table."""
    n = len(t)
    idx = np.arange(n)
    idem = t[idx, idx] == idx
    if n > 1:
        row_distinct = 1 + (np.diff(np.sort(t, axis=1), axis=1) != 0).sum(axis=1)
        col_distinct = 1 + (np.diff(np.sort(t, axis=0), axis=0) != 0).sum(axis=0)
    else:
        row_distinct = col_distinct = np.ones(n, dtype=np.int64)
    left_acts_trivially = (t == idx[None, :]).sum(axis=1)
    right_acts_trivially = (t == idx[:, None]).sum(axis=0)
    left_absorbed = (t == idx[:, None]).sum(axis=1)
    right_absorbed = (t == idx[None, :]).sum(axis=0)
    rows = t.tolist()
    sigs = []
    for x in range(n):
        seen = {}
        p, k = x, 1
        while p not in seen:
            seen[p] = k
            p = rows[p][x]
            k += 1
        sigs.append((
            bool(idem[x]), seen[p], k - seen[p],
            int(row_distinct[x]), int(col_distinct[x]),
            int(left_acts_trivially[x]), int(right_acts_trivially[x]),
            int(left_absorbed[x]), int(right_absorbed[x]),
        ))
    return sigs


def generating_set(t: np.ndarray, order: Sequence[int]) -> list[int]:
    """Greedy generating set, scanning candidates in ``order``."""
    rows = t.tolist()
    closure: set[int] = set()
    gens: list[int] = []
    for g in order:
        if g in closure:
            continue
        gens.append(g)
        new: list[int] = []

        def add(z):
            if z not in closure:
                closure.add(z)
                new.append(z)

        old = list(closure)
        add(g)
        for x in old + [g]:
            add(rows[x][g])
        while new:
            z = new.pop()
            for h in gens:
                add(rows[z][h])
        if len(closure) == len(rows):
            break
    return gens


def iter_isomorphisms(
    t1: np.ndarray,
    t2: np.ndarray,
    budget: Budget | int | None = None,
    sig1: Sequence | None = None,
    sig2: Sequence | None = None,
) -> Iterator[list[int]]:
    """Yield every isomorphism ``phi`` from table ``t1`` onto table ``t2``.

    ``phi[x]`` is the image of element ``x``.  Optional signatures may carry
    extra invariant data; elements are only matched when signatures agree.
    """
    budget = as_budget(budget)
    n = len(t1)
    if len(t2) != n:
        return
    if sig1 is None:
        sig1 = element_signatures(t1)
    if sig2 is None:
        sig2 = element_signatures(t2)
    if Counter(sig1) != Counter(sig2):
        return
    if n == 0:
        yield []
        return
    by_sig: dict = defaultdict(list)
    for y, s in enumerate(sig2):
        by_sig[s].append(y)
    rarity = Counter(sig1)
    height = [-(s[3] + s[4]) if len(s) > 4 and isinstance(s[3], int) else 0 for s in sig1]
    order = sorted(range(n), key=lambda x: (height[x], rarity[sig1[x]], x))
    gens = generating_set(t1, order)

    l1 = t1.tolist()
    l2 = t2.tolist()
    phi = [-1] * n
    inv = [-1] * n
    mapped: list[int] = []
    images: list[int] = []

    def assign(level: int, y: int):
        g = gens[level]
        trail_start = len(mapped)
        queue: list[int] = []

        def setp(z, w):
            fz = phi[z]
            if fz == -1:
                if inv[w] != -1:
                    return False
                phi[z] = w
                inv[w] = z
                mapped.append(z)
                queue.append(z)
                return True
            return fz == w

        ok = setp(g, y)
        if ok:
            for x in mapped[:trail_start] + [g]:
                if not setp(l1[x][g], l2[phi[x]][y]):
                    ok = False
                    break
        if ok:
            active = gens[:level + 1]
            act_img = images + [y]
            while queue and ok:
                z = queue.pop()
                rz, rfz = l1[z], l2[phi[z]]
                for h, yh in zip(active, act_img):
                    if not setp(rz[h], rfz[yh]):
                        ok = False
                        break
        if not ok:
            undo(trail_start)
        return ok

    def undo(trail_start):
        while len(mapped) > trail_start:
            z = mapped.pop()
            inv[phi[z]] = -1
            phi[z] = -1

    def search(level: int):
        if level == len(gens):
            if len(mapped) == n:
                yield list(phi)
            return
        g = gens[level]
        for y in by_sig[sig1[g]]:
            if inv[y] != -1:
                continue
            budget.spend()
            start = len(mapped)
            if assign(level, y):
                images.append(y)
                yield from search(level + 1)
                images.pop()
                undo(start)

    yield from search(0)


def find_isomorphism(t1, t2, budget=None, sig1=None, sig2=None) -> list[int] | None:
    for phi in iter_isomorphisms(t1, t2, budget, sig1, sig2):
        return phi
    return None


def is_homomorphism(t1: np.ndarray, t2: np.ndarray, phi: Sequence[int]) -> bool:
    phi = np.asarray(phi)
    return bool(np.array_equal(phi[t1], t2[phi[:, None], phi[None, :]]))


def iter_relation_isomorphisms(
    r1: np.ndarray,
    r2: np.ndarray,
    sig1: Sequence,
    sig2: Sequence,
    budget: Budget | int | None = None,
    compatible=None,
) -> Iterator[list[int]]:
    """Bijections ``pi`` with ``r1[i, j] == r2[pi[i], pi[j]]`` for all ``i, j``.

    Only elements with equal signatures are matched, and ``compatible(i, j)``
    (when given) must accept each matched pair.
    """
    budget = as_budget(budget)
    n = len(r1)
    if len(r2) != n or Counter(sig1) != Counter(sig2):
        return
    r1 = np.asarray(r1, dtype=bool)
    r2 = np.asarray(r2, dtype=bool)
    cand = [[j for j in range(n) if sig2[j] == sig1[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: (len(cand[i]), i))
    pi = [-1] * n
    used = [False] * n
    done: list[int] = []

    def search(level):
        if level == n:
            yield list(pi)
            return
        i = order[level]
        for j in cand[i]:
            if used[j]:
                continue
            budget.spend()
            if r1[i, i] != r2[j, j]:
                continue
            if any(r1[i, k] != r2[j, pi[k]] or r1[k, i] != r2[pi[k], j] for k in done):
                continue
            if compatible is not None and not compatible(i, j):
                continue
            pi[i] = j
            used[j] = True
            done.append(i)
            yield from search(level + 1)
            done.pop()
            used[j] = False
            pi[i] = -1

    yield from search(0)
