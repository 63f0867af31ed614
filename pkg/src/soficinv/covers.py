"""Krieger and Fischer covers with the invariants built on their actions.

Cover states are states of the minimal automaton of the factor language;
the sink plays the role of the empty context and is the base point of
every pointed action.  A non-sink state ``q`` is a Krieger state exactly
when ``q = i.s`` for the initial state ``i`` and some non-zero ``s`` that
is fixed on the left by a non-zero idempotent.  Reading a left-infinite
word backwards, the contexts of its suffixes form a decreasing chain that
eventually stabilizes; by pigeonhole on the finite semigroup the stable
segment has an idempotent left factor.  Conversely ``q = i.s`` with
``es = s`` is the context of ``...ppp u`` for words ``p``, ``u``
representing ``e`` and ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from . import _search
from ._graphs import condensation, scc_labels
from .errors import NotIrreducible
from .karoubi import Equivalence, iter_equivalences, karoubi_envelope, skeleton
from .presentation import Presentation, ShiftHandle
from .semigroup import (
    FinSemigroupZ,
    GroupTable,
    green_structure,
    is_irreducible_language,
    lu_subset,
    shift_semigroup,
)


@dataclass(frozen=True, eq=False)
class PointedAction:
    """Right action of a semigroup with zero on ``states``; the last state is the sink.

    ``act[q, s]`` is the index of ``q.s``.  ``labels`` names each state by
    its automaton state id (``"sink"`` for the base point).
    """

    semigroup: FinSemigroupZ
    act: np.ndarray
    labels: tuple[str, ...]

    @property
    def n_states(self) -> int:
        return len(self.act)

    @property
    def sink(self) -> int:
        return self.n_states - 1

    def image(self, s: int) -> np.ndarray:
        return np.unique(self.act[:, s])

    def qe(self, e: int) -> np.ndarray:
        """The set Q.e, base point included."""
        return self.image(e)

    def check(self) -> bool:
        """Action law plus a base point fixed by everything and reached by zero."""
        t = self.semigroup.table
        a = self.act
        if not np.all(a[self.sink] == self.sink):
            return False
        if not np.all(a[:, self.semigroup.zero] == self.sink):
            return False
        # q.(st) == (q.s).t
        return all(np.array_equal(a[a[:, s], :], a[:, t[s]]) for s in range(self.semigroup.size))

    def is_faithful(self) -> bool:
        return len(np.unique(self.act.T, axis=0)) == self.semigroup.size

    def transition_graph(self) -> Presentation:
        """Labeled graph on the non-sink states, edges ``q --a--> q.a``."""
        edges = []
        for q in range(self.sink):
            for a, x in sorted(self.semigroup.letter_map.items()):
                r = int(self.act[q, x])
                if r != self.sink:
                    edges.append((self.labels[q], a, self.labels[r]))
        return Presentation.from_edges(edges, trim=False)


def _restricted_action(s: FinSemigroupZ, dfa_states, sink: int) -> PointedAction:
    states = [int(q) for q in dfa_states if q != sink] + [sink]
    pos = np.full(s.transformations.shape[1], -1, dtype=np.int64)
    pos[states] = np.arange(len(states))
    act = pos[s.transformations[:, states].T]
    if np.any(act < 0):
        raise ValueError("state set is not closed under the action")
    labels = tuple(f"q{q}" for q in states[:-1]) + ("sink",)
    return PointedAction(s, act, labels)


def krieger_states(s: FinSemigroupZ, initial: int, sink: int) -> np.ndarray:
    t = s.table
    idx = np.arange(s.size)
    E = np.array([e for e in s.idempotents.tolist() if e != s.zero], dtype=np.int64)
    if len(E) == 0:
        return np.zeros(0, dtype=np.int64)
    fixed = (t[E, :] == idx[None, :]).any(axis=0) & (idx != s.zero)
    q = np.unique(s.transformations[fixed, initial])
    return q[q != sink]


def krieger_cover(h: ShiftHandle):
    """The Krieger cover (sink removed) and the pointed action on its states."""
    def build():
        s = shift_semigroup(h)
        d = h.dfa
        a = _restricted_action(s, krieger_states(s, d.initial, d.sink), d.sink)
        return a.transition_graph(), a
    return h.memo("krieger", build)


def terminal_component(h: ShiftHandle) -> np.ndarray:
    """Non-sink states of the unique terminal strongly connected component."""
    d = h.dfa
    live = [q for q in d.states if q != d.sink]
    src, dst = [], []
    for q in live:
        for r in d.delta[q].tolist():
            if r != d.sink:
                src.append(q)
                dst.append(r)
    labels, reach = condensation(d.n_states, src, dst)
    comps = sorted({int(labels[q]) for q in live})
    terminal = [c for c in comps if not any(reach[c, k] for k in comps if k != c)]
    if len(terminal) != 1:
        raise NotIrreducible(f"{len(terminal)} terminal components")
    return np.array([q for q in live if labels[q] == terminal[0]], dtype=np.int64)


def fischer_cover(h: ShiftHandle):
    """The Fischer cover and its pointed action; only defined for irreducible shifts."""
    def build():
        s = shift_semigroup(h)
        if not is_irreducible_language(s):
            raise NotIrreducible("the shift is not irreducible")
        d = h.dfa
        a = _restricted_action(s, terminal_component(h), d.sink)
        return a.transition_graph(), a
    return h.memo("fischer", build)


def krieger_states_by_extension(h: ShiftHandle, depth: int | None = None) -> np.ndarray:
    """Krieger states found by bounded left extension, independently of idempotents.

    A non-sink state ``q`` is reported when some chain ``z, a1 z, a2 a1 z, ...``
    of at least ``depth`` left extensions keeps every element non-zero with
    ``i.z = q``.  The default depth exceeds the semigroup order, which forces
    a repeated element and hence a left-infinite word with context ``q``.
    """
    s = shift_semigroup(h)
    d = h.dfa
    if depth is None:
        depth = max(2 * d.n_states, s.size + 1)
    t = s.table
    letters = np.array(sorted(set(s.letter_map.values())), dtype=np.int64)
    where = s.transformations[:, d.initial]
    nonzero = np.arange(s.size) != s.zero
    found = []
    for q in range(d.n_states):
        if q == d.sink:
            continue
        alive = nonzero & (where == q)
        inside = alive.copy()
        for _ in range(depth):
            alive = inside & alive[t[letters, :]].any(axis=0)
            if not alive.any():
                break
        if alive.any():
            found.append(q)
    return np.array(found, dtype=np.int64)


# -- the Karoubi action -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KaroubiAction:
    """Contravariant action of the Karoubi envelope: (e, x, f) maps Qe to Qf."""

    action: PointedAction

    def states_at(self, e: int) -> np.ndarray:
        return self.action.qe(e)

    def apply(self, q: int, m) -> int:
        e, x, f = m
        return int(self.action.act[q, x])

    def morphism_map(self, m) -> dict[int, int]:
        return {int(q): self.apply(int(q), m) for q in self.states_at(m[0])}


def karoubi_action(a: PointedAction) -> KaroubiAction:
    return KaroubiAction(a)


def element_rank(a: PointedAction, s: int) -> int:
    """Number of non-sink states in the image of ``s``."""
    return int(np.count_nonzero(a.image(s) != a.sink))


# -- posets -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Poset:
    """Finite partial order; ``leq[i, j]`` means element i is below element j."""

    elements: tuple
    leq: np.ndarray

    def __len__(self):
        return len(self.elements)

    def is_partial_order(self) -> bool:
        r = self.leq
        n = len(r)
        refl = bool(np.all(np.diag(r))) if n else True
        anti = not np.any(r & r.T & ~np.eye(n, dtype=bool))
        trans = not np.any((r.astype(np.int64) @ r.astype(np.int64) > 0) & ~r)
        return refl and anti and trans

    def signatures(self):
        r = self.leq
        return [(int(r[i].sum()), int(r[:, i].sum())) for i in range(len(r))]

    def hasse_edges(self) -> list[tuple[int, int]]:
        r = self.leq & ~np.eye(len(self.leq), dtype=bool)
        cover = r & ~((r.astype(np.int64) @ r.astype(np.int64)) > 0)
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cover))]

    def to_json(self):
        return {
            "elements": [list(e) if isinstance(e, tuple) else e for e in self.elements],
            "order": [[i, j] for i, j in self.hasse_edges()],
        }

    def to_dot(self, name: str = "P") -> str:
        lines = [f'digraph "{name}" {{']
        for i, e in enumerate(self.elements):
            lab = ",".join(map(str, e)) if isinstance(e, tuple) else str(e)
            lines.append(f'  n{i} [label="{lab}"];')
        for i, j in self.hasse_edges():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def poset_isomorphism(p1: Poset, p2: Poset, budget=None) -> list[int] | None:
    for pi in _search.iter_relation_isomorphisms(p1.leq, p2.leq, p1.signatures(), p2.signatures(), budget):
        return pi
    return None


def cyclic_poset(a: PointedAction) -> Poset:
    """Classes of I = Q.E(S) under mutual LU-reachability; q below q' when q' is in q.LU."""
    s = a.semigroup
    lu = lu_subset(s)
    I = np.unique(a.act[:, s.idempotents])
    orbit = np.zeros((len(I), a.n_states), dtype=bool)
    for i, q in enumerate(I.tolist()):
        orbit[i, a.act[q, lu]] = True
    below = orbit[:, I]                       # below[i, j]: I[j] in I[i].LU
    mutual = below & below.T
    cls = np.full(len(I), -1)
    reps = []
    for i in range(len(I)):
        if cls[i] < 0:
            members = np.flatnonzero(mutual[i])
            cls[members] = len(reps)
            reps.append(members)
    elements = tuple(tuple(a.labels[I[j]] for j in m) for m in reps)
    leq = np.array([[bool(below[m1[0], m2[0]]) for m2 in reps] for m1 in reps], dtype=bool)
    return Poset(elements, leq.reshape(len(reps), len(reps)))


def proper_communication_graph(g: Presentation, sink: str | None = None) -> Poset:
    """Non-trivial strongly connected components ordered by reachability.

    When ``sink`` is given, the pointed version of the graph is used: the
    sink vertex carries a loop and receives an edge from every vertex.
    """
    verts = list(g.vertices)
    if sink is not None:
        verts.append(sink)
    pos = {v: i for i, v in enumerate(verts)}
    src = [pos[e[0]] for e in g.edges]
    dst = [pos[e[2]] for e in g.edges]
    if sink is not None:
        k = pos[sink]
        src += list(range(len(verts)))
        dst += [k] * len(verts)
    labels, reach = condensation(len(verts), src, dst)
    loops = np.zeros(len(verts), dtype=bool)
    loops[[s for s, d in zip(src, dst) if s == d]] = True
    size = np.bincount(labels, minlength=int(labels.max()) + 1)
    nontrivial = [c for c in range(len(size)) if size[c] > 1 or any(loops[labels == c])]
    elements = tuple(tuple(v for v in verts if labels[pos[v]] == c) for c in nontrivial)
    leq = reach[np.ix_(nontrivial, nontrivial)]
    return Poset(elements, leq)


# -- labeled preorder of D-classes -------------------------------------------------

@dataclass(frozen=True, eq=False)
class LabeledPreorder:
    """D-classes of LU(S) with their factor preorder and (regular, group, rank) labels."""

    elements: tuple
    leq: np.ndarray
    labels: tuple

    def __len__(self):
        return len(self.elements)

    def is_preorder(self) -> bool:
        r = self.leq
        return bool(np.all(np.diag(r)) and not np.any((r.astype(np.int64) @ r.astype(np.int64) > 0) & ~r))

    def label_key(self, i: int):
        regular, group, rank = self.labels[i]
        return (regular, group.fingerprint, rank)

    def to_json(self):
        out = []
        for i, elems in enumerate(self.elements):
            regular, group, rank = self.labels[i]
            out.append({"members": list(elems), "regular": int(regular), "group": group.to_json(),
                        "rank": rank})
        strict = self.leq & ~np.eye(len(self.leq), dtype=bool)
        return {"classes": out, "order": [[int(i), int(j)] for i, j in zip(*np.nonzero(strict))]}

    def to_dot(self, name: str = "D") -> str:
        lines = [f'digraph "{name}" {{']
        for i in range(len(self.elements)):
            regular, group, rank = self.labels[i]
            lines.append(f'  d{i} [label="({int(regular)}, {group.describe()}, {rank})"];')
        strict = self.leq & ~np.eye(len(self.leq), dtype=bool)
        cover = strict & ~((strict.astype(np.int64) @ strict.astype(np.int64)) > 0)
        for i, j in zip(*np.nonzero(cover)):
            lines.append(f"  d{i} -> d{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def dclass_labeled_preorder(s: FinSemigroupZ, a: PointedAction | None) -> LabeledPreorder:
    """Labeled preorder of the D-classes of LU(S), with Green's relations taken inside LU(S).

    Without an action the rank component is reported as ``-1``.
    """
    sub, emb = s.restrict(lu_subset(s))
    g = green_structure(sub)
    elements, labels = [], []
    for k, members in enumerate(g.d_classes):
        rep = int(emb[members[0]])
        rank = -1 if a is None else element_rank(a, rep)
        elements.append(tuple(sub.names[x] for x in members))
        labels.append((bool(g.regular[k]), g.schutz[k], rank))
    return LabeledPreorder(tuple(elements), g.d_leq.copy(), tuple(labels))


def labeled_preorder_isomorphic(p1: LabeledPreorder, p2: LabeledPreorder, budget=None) -> list[int] | None:
    sig1 = [(p1.label_key(i), int(p1.leq[i].sum()), int(p1.leq[:, i].sum())) for i in range(len(p1))]
    sig2 = [(p2.label_key(i), int(p2.leq[i].sum()), int(p2.leq[:, i].sum())) for i in range(len(p2))]

    def groups_match(i, j):
        return p1.labels[i][1].isomorphic(p2.labels[j][1], budget)

    for pi in _search.iter_relation_isomorphisms(p1.leq, p2.leq, sig1, sig2, budget, groups_match):
        return pi
    return None


# -- action equivalence ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ActionEquivalence:
    """An equivalence F of Karoubi envelopes with a natural isomorphism eta.

    ``eta[e]`` maps the states of ``Q1.e`` to those of ``Q2.F(e)`` for every
    object ``e`` of the source skeleton.
    """

    functor: Equivalence
    eta: dict


def _natural_isomorphisms(F: Equivalence, a1: PointedAction, a2: PointedAction, budget) -> Iterator[dict]:
    k1 = F.source
    objs = list(k1.objects)
    target = {e: F.object_map[e] for e in objs}
    dom1 = {e: a1.qe(e).tolist() for e in objs}
    dom2 = {e: a2.qe(target[e]).tolist() for e in objs}
    if any(len(dom1[e]) != len(dom2[e]) for e in objs):
        return
    # morphisms grouped by codomain, with their images
    into: dict[int, list] = {e: [] for e in objs}
    for m, fm in F.morphism_map.items():
        into[m[0]].append((m[1], m[2], fm[1]))
    act1, act2 = a1.act, a2.act
    eta: dict = {e: {} for e in objs}
    inv: dict = {e: {} for e in objs}
    trail: list = []

    def setp(e, q, r):
        cur = eta[e].get(q)
        if cur is None:
            if r in inv[e]:
                return False
            eta[e][q] = r
            inv[e][r] = q
            trail.append((e, q))
            return True
        return cur == r

    def undo(mark):
        while len(trail) > mark:
            e, q = trail.pop()
            r = eta[e].pop(q)
            del inv[e][r]

    def propagate(start):
        queue = list(trail[start:])
        while queue:
            e, q = queue.pop()
            r = eta[e][q]
            for x, f, y in into[e]:
                before = len(trail)
                if not setp(f, int(act1[q, x]), int(act2[r, y])):
                    return False
                queue.extend(trail[before:])
        return True

    mark = len(trail)
    ok = all(setp(e, a1.sink, a2.sink) for e in objs) and propagate(mark)
    if not ok:
        return

    def search():
        for e in objs:
            for q in dom1[e]:
                if q not in eta[e]:
                    for r in dom2[e]:
                        if r in inv[e]:
                            continue
                        budget.spend()
                        m = len(trail)
                        if setp(e, q, r) and propagate(m):
                            yield from search()
                        undo(m)
                    return
        yield {e: dict(eta[e]) for e in objs}

    yield from search()


def iter_action_equivalences(a1: PointedAction, a2: PointedAction, budget=None) -> Iterator[ActionEquivalence]:
    budget = _search.as_budget(budget)
    c1 = karoubi_envelope(a1.semigroup)
    c2 = karoubi_envelope(a2.semigroup)
    for F in iter_equivalences(c1, c2, budget):
        for eta in _natural_isomorphisms(F, a1, a2, budget):
            yield ActionEquivalence(F, eta)


def decide_action_equivalence(a1: PointedAction, a2: PointedAction, budget=None) -> ActionEquivalence | None:
    for w in iter_action_equivalences(a1, a2, budget):
        return w
    return None


def check_naturality(w: ActionEquivalence, a1: PointedAction, a2: PointedAction) -> bool:
    """Verify every eta component is a base-point preserving bijection, natural in all morphisms."""
    F = w.functor
    for e, comp in w.eta.items():
        if sorted(comp) != a1.qe(e).tolist():
            return False
        if sorted(comp.values()) != a2.qe(F.object_map[e]).tolist():
            return False
        if comp[a1.sink] != a2.sink:
            return False
    for m, fm in F.morphism_map.items():
        e, x, f = m
        for q in a1.qe(e).tolist():
            if w.eta[f][int(a1.act[q, x])] != int(a2.act[w.eta[e][q], fm[1]]):
                return False
    return True


# -- export ---------------------------------------------------------------------

def cover_to_dot(g: Presentation, name: str = "cover") -> str:
    lines = [f'digraph "{name}" {{']
    for v in g.vertices:
        lines.append(f'  "{v}" [shape=circle];')
    for s, a, t in g.edges:
        lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
