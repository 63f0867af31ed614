"""Karoubi envelopes of finite semigroups with zero.

A morphism is a triple ``(e, x, f)`` with ``x`` in ``eSf``; it points from
``f`` to ``e``.  Composition is ``(e, x, f)(f, y, g) = (e, xy, g)``, so the
left factor is applied last, as for functions.

Equivalence of two envelopes is decided on skeletons.  A finite category
is encoded as a semigroup whose elements are its morphisms plus an extra
absorbing element standing for "not composable"; two categories are
isomorphic exactly when these semigroups are, because identities are the
idempotents that act neutrally on everything they compose with.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from . import _search
from .errors import NotAPreorder
from .semigroup import FinSemigroupZ, _associative, from_table, green_structure

Morphism = tuple[int, int, int]


@dataclass(frozen=True, eq=False)
class ZeroCategory:
    """Full subcategory of the Karoubi envelope of ``semigroup`` on ``objects``.

    ``witnesses`` is filled in for skeletons: it sends every idempotent of
    the semigroup to ``(rep, to_rep, from_rep)`` where ``to_rep`` and
    ``from_rep`` are mutually inverse isomorphisms with the representative.
    """

    semigroup: FinSemigroupZ
    objects: tuple[int, ...]
    witnesses: dict | None = None

    @property
    def zero_object(self) -> int | None:
        z = self.semigroup.zero
        return z if z in self.objects else None

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.objects)}

    @cached_property
    def _masks(self):
        t = self.semigroup.table
        obj = np.asarray(self.objects, dtype=np.int64)
        idx = np.arange(self.semigroup.size)
        left = t[obj, :] == idx[None, :]     # e x == x
        right = t[:, obj].T == idx[None, :]  # x f == x
        return left, right

    def hom_elements(self, f: int, e: int) -> np.ndarray:
        """The set eSf, i.e. the middle entries of morphisms f -> e."""
        left, right = self._masks
        return np.flatnonzero(left[self._pos[e]] & right[self._pos[f]])

    def hom(self, f: int, e: int) -> list[Morphism]:
        return [(e, int(x), f) for x in self.hom_elements(f, e)]

    @cached_property
    def hom_sizes(self) -> np.ndarray:
        """``hom_sizes[i, j]`` = number of morphisms from object j to object i."""
        left, right = self._masks
        return left.astype(np.int64) @ right.T.astype(np.int64)

    def end_size(self, e: int) -> int:
        i = self._pos[e]
        return int(self.hom_sizes[i, i])

    @cached_property
    def morphisms(self) -> list[Morphism]:
        out = []
        for e in self.objects:
            for f in self.objects:
                out.extend(self.hom(f, e))
        return out

    @staticmethod
    def domain(m: Morphism) -> int:
        return m[2]

    @staticmethod
    def codomain(m: Morphism) -> int:
        return m[0]

    def compose(self, m1: Morphism, m2: Morphism) -> Morphism:
        """``m1 after m2``; requires domain(m1) == codomain(m2)."""
        if m1[2] != m2[0]:
            raise ValueError(f"morphisms {m1} and {m2} are not composable")
        return (m1[0], int(self.semigroup.table[m1[1], m2[1]]), m2[2])

    @staticmethod
    def identity(e: int) -> Morphism:
        return (e, e, e)

    def zero_morphism(self, f: int, e: int) -> Morphism:
        return (e, self.semigroup.zero, f)

    def is_zero(self, m: Morphism) -> bool:
        return m[1] == self.semigroup.zero

    def is_isomorphism(self, m: Morphism) -> bool:
        e, x, f = m
        t = self.semigroup.table
        ys = self.hom_elements(e, f)
        return bool(np.any((t[x, ys] == e) & (t[ys, x] == f)))

    def name(self, m: Morphism) -> str:
        n = self.semigroup.names
        return f"({n[m[0]]},{n[m[1]]},{n[m[2]]})"

    @cached_property
    def consolidated(self) -> tuple[np.ndarray, list[Morphism]]:
        """All morphisms plus a trailing "not composable" element, as a table."""
        morph = self.morphisms
        N = len(morph)
        k = len(self.objects)
        n = self.semigroup.size
        cod = np.array([self._pos[m[0]] for m in morph], dtype=np.int64)
        dom = np.array([self._pos[m[2]] for m in morph], dtype=np.int64)
        elt = np.array([m[1] for m in morph], dtype=np.int64)
        keys = (cod * k + dom) * n + elt
        order = np.argsort(keys)
        sorted_keys = keys[order]
        P = np.full((N + 1, N + 1), N, dtype=np.int64)
        I, J = np.nonzero(dom[:, None] == cod[None, :])
        prod = (cod[I] * k + dom[J]) * n + self.semigroup.table[elt[I], elt[J]]
        P[I, J] = order[np.searchsorted(sorted_keys, prod)]
        return P, morph

    def check_axioms(self) -> bool:
        """Associativity with neutral identities; zero morphisms must absorb."""
        P, morph = self.consolidated
        if not _associative(P):
            return False
        for m in morph:
            if self.compose(m, self.identity(m[2])) != m or self.compose(self.identity(m[0]), m) != m:
                return False
        z = self.semigroup.zero
        for m in morph:
            for e in self.objects:
                if not self.is_zero(self.compose(self.zero_morphism(m[0], e), m)):
                    return False
                if not self.is_zero(self.compose(m, self.zero_morphism(e, m[2]))):
                    return False
        return z is not None


def karoubi_envelope(s: FinSemigroupZ) -> ZeroCategory:
    return s.memo("karoubi", lambda: ZeroCategory(s, tuple(s.idempotents.tolist())))


def _iso_pair(s: FinSemigroupZ, r: int, e: int):
    """Mutually inverse a in rSe and b in eSr, or None when r and e are not isomorphic."""
    t = s.table
    idx = np.arange(s.size)
    rse = np.flatnonzero((t[r] == idx) & (t[:, e] == idx))
    esr = np.flatnonzero((t[e] == idx) & (t[:, r] == idx))
    for a in rse.tolist():
        ok = (t[a, esr] == r) & (t[esr, a] == e)
        if ok.any():
            return a, int(esr[np.argmax(ok)])
    return None


def skeleton(c: ZeroCategory) -> ZeroCategory:
    """One object per isomorphism class, which for idempotents is a D-class."""
    if c.witnesses is not None:
        return c
    s = c.semigroup

    def build():
        g = green_structure(s)
        reps: dict[int, int] = {}
        for e in sorted(c.objects):
            reps.setdefault(int(g.d_label[e]), e)
        if s.zero in c.objects:
            reps[int(g.d_label[s.zero])] = s.zero
        witnesses = {}
        for e in c.objects:
            r = reps[int(g.d_label[e])]
            a, b = _iso_pair(s, r, e)
            witnesses[e] = (r, (r, a, e), (e, b, r))
        objects = tuple(sorted(reps.values()))
        return ZeroCategory(s, objects, witnesses)

    if c.objects == tuple(s.idempotents.tolist()):
        return s.memo("skeleton", build)
    return build()


# -- equivalence ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Equivalence:
    """An isomorphism between two skeletons, extendable to the full envelopes."""

    source: ZeroCategory
    target: ZeroCategory
    morphism_index: tuple[int, ...]

    @cached_property
    def morphism_map(self) -> dict[Morphism, Morphism]:
        m1 = self.source.consolidated[1]
        m2 = self.target.consolidated[1]
        return {m1[i]: m2[j] for i, j in enumerate(self.morphism_index[:len(m1)])}

    @cached_property
    def object_map(self) -> dict[int, int]:
        return {e: self.morphism_map[(e, e, e)][0] for e in self.source.objects}

    def on_object(self, e: int) -> int:
        return self.object_map[self.source.witnesses[e][0]]

    def __call__(self, m: Morphism) -> Morphism:
        """Image of a morphism of the full source envelope."""
        w = self.source.witnesses
        e, x, f = m
        re, to_re, _ = w[e]
        rf, _, from_rf = w[f]
        c = self.source
        return self.morphism_map[c.compose(c.compose(to_re, m), from_rf)]

    def preserves_zero(self) -> bool:
        z1, z2 = self.source.zero_object, self.target.zero_object
        if (z1 is None) != (z2 is None):
            return False
        if z1 is not None and self.object_map[z1] != z2:
            return False
        return all(self.target.is_zero(v) == self.source.is_zero(k) for k, v in self.morphism_map.items())


def _category_signatures(c: ZeroCategory) -> list[tuple]:
    P, morph = c.consolidated
    base = _search.element_signatures(P)
    hs = c.hom_sizes
    pos = c._pos
    out = []
    for i, m in enumerate(morph):
        e, f = pos[m[0]], pos[m[2]]
        out.append(base[i] + (int(hs[e, f]), int(hs[e, e]), int(hs[f, f]), e == f))
    out.append(base[len(morph)] + (-1, -1, -1, False))
    return out


def _object_profile(c: ZeroCategory):
    hs = c.hom_sizes
    return sorted((int(hs[i, i]), tuple(sorted(hs[i].tolist())), tuple(sorted(hs[:, i].tolist())))
                  for i in range(len(c.objects)))


def iter_equivalences(c1: ZeroCategory, c2: ZeroCategory, budget=None) -> Iterator[Equivalence]:
    """All isomorphisms between the skeletons of ``c1`` and ``c2``."""
    budget = _search.as_budget(budget)
    k1, k2 = skeleton(c1), skeleton(c2)
    if len(k1.objects) != len(k2.objects) or _object_profile(k1) != _object_profile(k2):
        return
    P1, _ = k1.consolidated
    P2, _ = k2.consolidated
    if len(P1) != len(P2):
        return
    for phi in _search.iter_isomorphisms(P1, P2, budget, _category_signatures(k1), _category_signatures(k2)):
        yield Equivalence(k1, k2, tuple(phi))


def decide_equivalence(c1: ZeroCategory, c2: ZeroCategory, budget=None) -> Equivalence | None:
    for eq in iter_equivalences(c1, c2, budget):
        return eq
    return None


# -- non-zero divisors and the Krieger semigroup --------------------------------

def _zero_masks(s: FinSemigroupZ):
    z = s.table == s.zero
    return z, ~z


def divisor_subcategories(c: ZeroCategory, s: FinSemigroupZ | None = None):
    """Non-zero divisors and strong non-zero divisors of ``c``, as sets of morphisms."""
    s = c.semigroup if s is None else s
    t = s.table
    Z, NZ = _zero_masks(s)
    Zi = Z.astype(np.int64)
    obj = np.asarray(c.objects, dtype=np.int64)
    pos = c._pos
    # strong: r e != 0 implies r x != 0; f t != 0 implies x t != 0
    bad_left_s = (NZ[:, obj].T.astype(np.int64) @ Zi) > 0      # [e, x]
    bad_right_s = (NZ[obj, :].astype(np.int64) @ Zi.T) > 0     # [f, x]
    # plain: composites with every composable non-zero morphism stay non-zero
    left, right = c._masks
    nonzero = np.arange(s.size) != s.zero
    any_cod = left.any(axis=0)      # x with e'x = x for some object e'
    any_dom = right.any(axis=0)     # x with x f' = x for some object f'
    ends_at = right & any_cod[None, :] & nonzero[None, :]     # [e, y]: y non-zero, y in (obj) S e
    starts_at = left & any_dom[None, :] & nonzero[None, :]    # [f, z]: z non-zero, z in f S (obj)
    bad_left_p = (ends_at.astype(np.int64) @ Zi) > 0          # [e, x]: some such y has y x = 0
    bad_right_p = (starts_at.astype(np.int64) @ Zi.T) > 0     # [f, x]: some such z has x z = 0
    nzd, snzd = set(), set()
    for m in c.morphisms:
        e, x, f = m
        if x == s.zero:
            continue
        i, j = pos[e], pos[f]
        if not (bad_left_p[i, x] or bad_right_p[j, x]):
            nzd.add(m)
        if not (bad_left_s[i, x] or bad_right_s[j, x]):
            snzd.add(m)
    return frozenset(nzd), frozenset(snzd)


def snzd_counts(c: ZeroCategory, s: FinSemigroupZ | None = None) -> np.ndarray:
    """``counts[i, j]`` = number of snzd morphisms from object j to object i."""
    _, snzd = divisor_subcategories(c, s)
    pos = c._pos
    counts = np.zeros((len(c.objects), len(c.objects)), dtype=np.int64)
    for e, _, f in snzd:
        counts[pos[e], pos[f]] += 1
    return counts


def is_snzd_preorder(c: ZeroCategory, s: FinSemigroupZ | None = None) -> bool:
    return bool(snzd_counts(skeleton(c), s).max(initial=0) <= 1)


@dataclass(frozen=True)
class MorphismClass:
    representative: Morphism
    members: tuple[Morphism, ...]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def morphism_iso_classes(c: ZeroCategory) -> list[MorphismClass]:
    """Partition of the morphisms of ``c`` under f ~ phi f psi with phi, psi isomorphisms.

    All zero morphisms form one class, listed last.
    """
    morph = c.morphisms
    index = {m: i for i, m in enumerate(morph)}
    isos_from: dict[int, list[Morphism]] = {e: [] for e in c.objects}
    isos_to: dict[int, list[Morphism]] = {e: [] for e in c.objects}
    for m in morph:
        if not c.is_zero(m) and c.is_isomorphism(m):
            isos_from[m[2]].append(m)
            isos_to[m[0]].append(m)
    uf = _UnionFind(len(morph))
    zeros = [i for i, m in enumerate(morph) if c.is_zero(m)]
    for i in zeros[1:]:
        uf.union(zeros[0], i)
    for i, m in enumerate(morph):
        if c.is_zero(m):
            continue
        for phi in isos_from[m[0]]:
            uf.union(i, index[c.compose(phi, m)])
        for psi in isos_to[m[2]]:
            uf.union(i, index[c.compose(m, psi)])
    groups: dict[int, list[Morphism]] = {}
    for i, m in enumerate(morph):
        groups.setdefault(uf.find(i), []).append(m)
    classes = [MorphismClass(ms[0], tuple(ms)) for ms in groups.values()]
    classes.sort(key=lambda k: (c.is_zero(k.representative), index[k.representative]))
    return classes


@dataclass(frozen=True, eq=False)
class KriegerSemigroup:
    semigroup: FinSemigroupZ
    classes: tuple[MorphismClass, ...]


def krieger_semigroup(c: ZeroCategory, s: FinSemigroupZ | None = None) -> KriegerSemigroup:
    """Semigroup of iso classes of morphisms, multiplied through the unique snzd morphism.

    Computed on the skeleton of ``c``.  Raises :class:`NotAPreorder` when
    some hom-set holds two strong non-zero divisors.
    """
    k = skeleton(c)
    s = k.semigroup if s is None else s
    _, snzd = divisor_subcategories(k, s)
    link: dict[tuple[int, int], Morphism] = {}
    for h in snzd:
        key = (h[2], h[0])
        if key in link:
            raise NotAPreorder(f"two strong non-zero divisors {k.name(link[key])} and {k.name(h)}")
        link[key] = h
    classes = morphism_iso_classes(k)
    of = {}
    for i, cl in enumerate(classes):
        for m in cl.members:
            of[m] = i
    zero = len(classes) - 1
    n = len(classes)
    table = np.full((n, n), zero, dtype=np.int64)
    for i, c1 in enumerate(classes[:-1]):
        for j, c2 in enumerate(classes[:-1]):
            values = set()
            for f1 in c1.members:
                for f2 in c2.members:
                    h = link.get((f2[0], f1[2]))
                    if h is None:
                        values.add(zero)
                    else:
                        values.add(of[k.compose(k.compose(f1, h), f2)])
            if len(values) != 1:
                raise ValueError("product of iso classes depends on the representatives")
            table[i, j] = values.pop()
    names = tuple("<" + k.name(cl.representative) + ">" for cl in classes[:-1]) + ("0",)
    return KriegerSemigroup(from_table(table, zero, names), tuple(classes))


# -- export ---------------------------------------------------------------------

def to_dot(c: ZeroCategory, name: str = "K") -> str:
    """Objects as nodes, one edge per non-zero iso class of morphisms."""
    s = c.semigroup
    lines = [f'digraph "{name}" {{']
    for e in c.objects:
        lines.append(f'  "{s.names[e]}" [shape=circle];')
    counts: dict[tuple[int, int], int] = {}
    for cl in morphism_iso_classes(c):
        m = cl.representative
        if c.is_zero(m):
            continue
        counts[(m[2], m[0])] = counts.get((m[2], m[0]), 0) + 1
    for (f, e), k in sorted(counts.items()):
        lines.append(f'  "{s.names[f]}" -> "{s.names[e]}" [label="x{k}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
