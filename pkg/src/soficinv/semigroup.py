"""Finite semigroups with zero given by multiplication tables.

Elements are integers ``0..n-1``; ``table[x, y]`` is the product ``xy``.
Syntactic semigroups of sofic shifts are built as transition semigroups of
minimal automata, each element being the map it induces on the states
(sink included), composed left to right: ``q.(st) = (q.s).t``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _search
from ._graphs import condensation, relabel_by_first_occurrence, scc_labels
from .errors import BoundTooSmall, BudgetExceeded, ParseError
from .presentation import Dfa, Presentation, block_label, minimal_automaton

DEFAULT_MAX_SIZE = 6000


def word_name(word: Sequence[str]) -> str:
    return "[" + block_label(word) + "]"


@dataclass(frozen=True, eq=False)
class FinSemigroupZ:
    """A finite semigroup with a distinguished zero.

    ``witnesses[x]`` is the shortlex-least word over ``letter_map`` whose
    image is ``x``; it is ``None`` for a zero that no word reaches.
    ``transformations`` holds the state maps when the semigroup came from
    an automaton.
    """

    table: np.ndarray
    zero: int
    names: tuple[str, ...]
    letter_map: Mapping[str, int]
    witnesses: tuple
    transformations: np.ndarray | None = field(default=None, repr=False)
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def memo(self, key, compute):
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]

    @property
    def size(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def name(self, x: int) -> str:
        return self.names[x]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def mul(self, *xs: int) -> int:
        out = xs[0]
        for y in xs[1:]:
            out = int(self.table[out, y])
        return out

    def evaluate(self, word: Sequence[str]) -> int:
        """Image of a non-empty word; unknown letters map to zero."""
        if not word:
            raise ValueError("the empty word has no image in a semigroup")
        out = self.letter_map.get(word[0], self.zero)
        for a in word[1:]:
            out = int(self.table[out, self.letter_map.get(a, self.zero)])
        return out

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Letter images plus the zero; these generate the semigroup."""
        gens = sorted(set(self.letter_map.values()) | {self.zero})
        return tuple(gens)

    @cached_property
    def idempotents(self) -> np.ndarray:
        idx = np.arange(self.size)
        return idx[self.table[idx, idx] == idx]

    def is_idempotent(self, x: int) -> bool:
        return int(self.table[x, x]) == x

    @cached_property
    def identity(self) -> int | None:
        idx = np.arange(self.size)
        for e in self.idempotents.tolist():
            if np.array_equal(self.table[e], idx) and np.array_equal(self.table[:, e], idx):
                return e
        return None

    @property
    def is_monoid(self) -> bool:
        return self.identity is not None

    def generated_by(self, gens: Iterable[int]) -> set[int]:
        gens = sorted(set(int(g) for g in gens))
        seen = set(gens)
        queue = deque(gens)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = int(self.table[x, g])
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def restrict(self, subset: Iterable[int]) -> tuple["FinSemigroupZ", np.ndarray]:
        """Subsemigroup on ``subset`` (which must contain the zero).

        Every element becomes a letter of the subsemigroup.  Returns the
        subsemigroup and the array sending its elements to ours.
        """
        elems = np.array(sorted(set(int(x) for x in subset)), dtype=np.int64)
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        if pos[self.zero] < 0:
            raise ValueError("a subsemigroup with zero must contain the zero")
        sub = pos[self.table[np.ix_(elems, elems)]]
        if np.any(sub < 0):
            raise ValueError("subset is not closed under the product")
        names = tuple(self.names[x] for x in elems)
        trans = None if self.transformations is None else self.transformations[elems]
        return FinSemigroupZ(
            table=sub,
            zero=int(pos[self.zero]),
            names=names,
            letter_map={names[i]: i for i in range(len(elems))},
            witnesses=tuple(self.witnesses[x] for x in elems),
            transformations=trans,
        ), elems

    def check_associative(self) -> bool:
        return _associative(self.table)

    def check_zero_laws(self) -> bool:
        z = self.zero
        return bool(np.all(self.table[z] == z) and np.all(self.table[:, z] == z))

    def dumps(self) -> str:
        """Serialize in the semigroup table file format."""
        lines = ["elements: " + " ".join(self.names), "zero: " + self.names[self.zero]]
        for row in self.table.tolist():
            lines.append(" ".join(self.names[y] for y in row))
        return "\n".join(lines) + "\n"


def _associative(t: np.ndarray) -> bool:
    # (xy)z == x(yz) for all triples, one left factor at a time to bound memory
    for x in range(len(t)):
        if not np.array_equal(t[t[x]], t[x][t]):
            return False
    return True


def _shortlex_witnesses(table, letter_map, zero):
    """Shortlex-least words reaching each element from the letter images."""
    n = len(table)
    witness: list = [None] * n
    queue = deque()
    for a in sorted(letter_map):
        g = letter_map[a]
        if witness[g] is None:
            witness[g] = (a,)
            queue.append(g)
    letters = sorted(letter_map)
    while queue:
        x = queue.popleft()
        for a in letters:
            y = int(table[x, letter_map[a]])
            if witness[y] is None:
                witness[y] = witness[x] + (a,)
                queue.append(y)
    return tuple(witness)


def from_table(table, zero: int, names: Sequence[str] | None = None,
               letter_map: Mapping[str, int] | None = None) -> FinSemigroupZ:
    """Wrap a raw product table.  Without a letter map every non-zero element is a letter."""
    table = np.asarray(table, dtype=np.int64)
    n = len(table)
    if table.shape != (n, n) or np.any(table < 0) or np.any(table >= n):
        raise ValueError("table must be a square array of element indices")
    if names is None:
        names = tuple(str(i) for i in range(n))
    names = tuple(names)
    if letter_map is None:
        letter_map = {names[x]: x for x in range(n) if x != zero}
    return FinSemigroupZ(
        table=table,
        zero=int(zero),
        names=names,
        letter_map=dict(letter_map),
        witnesses=_shortlex_witnesses(table, letter_map, zero),
    )


def transition_semigroup(d: Dfa, max_size: int = DEFAULT_MAX_SIZE) -> FinSemigroupZ:
    """Transition semigroup of a minimal automaton, isomorphic to S(X)."""
    delta = d.delta
    n_states, k = delta.shape
    maps: list[np.ndarray] = []
    index: dict[bytes, int] = {}
    parent: list[int] = []
    via: list[int] = []
    for a in range(k):
        m = np.ascontiguousarray(delta[:, a])
        key = m.tobytes()
        if key not in index:
            index[key] = len(maps)
            maps.append(m)
            parent.append(-1)
            via.append(a)
    # right multiplication of every element by every letter
    right: list[list[int]] = []
    i = 0
    while i < len(maps):
        row = []
        m = maps[i]
        for a in range(k):
            img = delta[m, a]
            key = img.tobytes()
            j = index.get(key)
            if j is None:
                j = len(maps)
                if j >= max_size:
                    raise BudgetExceeded("syntactic semigroup size", max_size)
                index[key] = j
                maps.append(img)
                parent.append(i)
                via.append(a)
            row.append(j)
        right.append(row)
        i += 1
    sink_map = np.full(n_states, d.sink, dtype=delta.dtype)
    zero = index.get(sink_map.tobytes())
    adjoined = zero is None
    if adjoined:
        zero = len(maps)
        maps.append(sink_map)
        parent.append(-1)
        via.append(-1)
        right.append([zero] * k)
    n = len(maps)
    R = np.array(right, dtype=np.int64).reshape(n, k)
    T = np.empty((n, n), dtype=np.int64)
    for b in range(n):
        if b == zero and adjoined:
            T[:, b] = zero
        elif parent[b] < 0:
            T[:, b] = R[:, via[b]]
        else:
            T[:, b] = R[T[:, parent[b]], via[b]]
    alphabet = d.alphabet
    witnesses = []
    for b in range(n):
        if via[b] < 0:
            witnesses.append(None)
            continue
        w = []
        c = b
        while c >= 0:
            w.append(alphabet[via[c]])
            c = parent[c]
        witnesses.append(tuple(reversed(w)))
    names = tuple("0" if b == zero else word_name(witnesses[b]) for b in range(n))
    letter_map = {a: index[np.ascontiguousarray(delta[:, i]).tobytes()] for i, a in enumerate(alphabet)}
    return FinSemigroupZ(
        table=T,
        zero=int(zero),
        names=names,
        letter_map=letter_map,
        witnesses=tuple(witnesses),
        transformations=np.array(maps, dtype=np.int64).reshape(n, n_states),
    )


def syntactic_semigroup(p: Presentation, max_size: int = DEFAULT_MAX_SIZE) -> FinSemigroupZ:
    return transition_semigroup(minimal_automaton(p), max_size)


def brandt_semigroup(n: int) -> FinSemigroupZ:
    """B_n: the n x n matrix units together with a zero."""
    if n < 1:
        raise ValueError("n must be positive")
    units = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    zero = len(units)
    t = np.full((zero + 1, zero + 1), zero, dtype=np.int64)
    for x, (i, j) in enumerate(units):
        for y, (k, l) in enumerate(units):
            if j == k:
                t[x, y] = units.index((i, l))
    names = tuple(f"({i},{j})" for i, j in units) + ("0",)
    if n == 1:
        letter_map = {"a": 0}
    elif n == 2:
        letter_map = {"a": units.index((1, 2)), "b": units.index((2, 1))}
    else:
        letter_map = {}
        for i in range(1, n):
            letter_map[f"x{i}"] = units.index((i, i + 1))
            letter_map[f"y{i}"] = units.index((i + 1, i))
    return from_table(t, zero, names, letter_map)


# -- table file format -------------------------------------------------------

def load_semigroup_table(source: str) -> FinSemigroupZ:
    lines = [ln.split("#", 1)[0].strip() for ln in source.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2 or not lines[0].startswith("elements:") or not lines[1].startswith("zero:"):
        raise ParseError("expected 'elements:' and 'zero:' header lines")
    names = lines[0][len("elements:"):].split()
    if not names or len(set(names)) != len(names):
        raise ParseError("element names must be non-empty and distinct")
    pos = {nm: i for i, nm in enumerate(names)}
    zero_name = lines[1][len("zero:"):].strip()
    if zero_name not in pos:
        raise ParseError(f"zero {zero_name!r} is not an element")
    rows = lines[2:]
    if len(rows) != len(names):
        raise ParseError(f"expected {len(names)} table rows, found {len(rows)}")
    table = np.empty((len(names), len(names)), dtype=np.int64)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != len(names):
            raise ParseError(f"row {i + 1} has {len(toks)} entries, expected {len(names)}")
        try:
            table[i] = [pos[t] for t in toks]
        except KeyError as exc:
            raise ParseError(f"row {i + 1}: unknown element {exc.args[0]!r}") from None
    s = from_table(table, pos[zero_name], names)
    if not s.check_zero_laws():
        raise ParseError("the declared zero is not absorbing")
    if not _associative(s.table):
        raise ParseError("the table is not associative")
    return s


def read_semigroup_table(path: str | Path) -> FinSemigroupZ:
    return load_semigroup_table(Path(path).read_text())


# -- groups --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupTable:
    table: np.ndarray

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def identity(self) -> int:
        idx = np.arange(self.order)
        return int(np.flatnonzero((self.table == idx[None, :]).all(axis=1))[0])

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        e = self.identity
        for g in range(self.order):
            k, x = 1, g
            while x != e:
                x = int(self.table[x, g])
                k += 1
            out.append(k)
        return tuple(out)

    @property
    def abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @property
    def fingerprint(self) -> tuple:
        return (self.order, self.abelian, tuple(sorted(self.element_orders)))

    def describe(self) -> str:
        if self.order == 1:
            return "1"
        if self.order in self.element_orders:
            return f"C{self.order}"
        kind = "abelian" if self.abelian else "nonabelian"
        return f"G{self.order}:{kind}:" + ",".join(map(str, sorted(self.element_orders)))

    def isomorphic(self, other: "GroupTable", budget=None) -> bool:
        if self.fingerprint != other.fingerprint:
            return False
        return _search.find_isomorphism(self.table, other.table, budget) is not None

    def check_axioms(self) -> bool:
        e = self.identity
        t = self.table
        inverses = (t == e).any(axis=1).all()
        return bool(inverses and _associative(t) and np.all(np.sort(t, axis=1) == np.arange(self.order)))

    def to_json(self) -> dict:
        return {"name": self.describe(), "fingerprint": list(self.fingerprint[:2]) + [list(self.fingerprint[2])],
                "table": self.table.tolist()}

    @classmethod
    def from_permutations(cls, perms: Sequence[tuple[int, ...]]) -> "GroupTable":
        """Group of distinct permutations (tuples), product ``p*q = p after q``."""
        perms = list(perms)
        pos = {p: i for i, p in enumerate(perms)}
        n = len(perms)
        t = np.empty((n, n), dtype=np.int64)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                t[i, j] = pos[tuple(p[k] for k in q)]
        return cls(t)

    @classmethod
    def trivial(cls) -> "GroupTable":
        return cls(np.zeros((1, 1), dtype=np.int64))

    @classmethod
    def cyclic(cls, n: int) -> "GroupTable":
        i = np.arange(n)
        return cls((i[:, None] + i[None, :]) % n)


# -- Green's relations -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GreenStructure:
    """Green's relations of a finite semigroup.

    Class labels are numbered by least member.  ``d_leq[i, j]`` holds when
    the D-class ``i`` lies in the ideal generated by D-class ``j``.
    """

    semigroup: FinSemigroupZ
    r_label: np.ndarray
    l_label: np.ndarray
    h_label: np.ndarray
    d_label: np.ndarray
    d_leq: np.ndarray
    regular: tuple[bool, ...]
    schutz: tuple[GroupTable, ...]

    @staticmethod
    def _classes(labels):
        out: list[list[int]] = [[] for _ in range(int(labels.max()) + 1)] if len(labels) else []
        for x, c in enumerate(labels.tolist()):
            out[c].append(x)
        return [tuple(c) for c in out]

    @cached_property
    def r_classes(self):
        return self._classes(self.r_label)

    @cached_property
    def l_classes(self):
        return self._classes(self.l_label)

    @cached_property
    def h_classes(self):
        return self._classes(self.h_label)

    @cached_property
    def d_classes(self):
        return self._classes(self.d_label)

    @property
    def idempotents(self) -> frozenset[int]:
        return frozenset(self.semigroup.idempotents.tolist())

    def d_class_of(self, x: int) -> int:
        return int(self.d_label[x])


def _cayley_edges(t: np.ndarray, gens: Sequence[int], side: str):
    n = len(t)
    g = np.asarray(gens, dtype=np.int64)
    src = np.repeat(np.arange(n), len(g))
    if side == "right":
        dst = t[:, g].ravel()
    else:
        dst = t[g, :].T.ravel()
    return src, dst


def schutzenberger_group(t: np.ndarray, h_class: Sequence[int]) -> GroupTable:
    """Group of permutations of an H-class induced by its left stabilizer in S^1."""
    h = np.asarray(h_class, dtype=np.int64)
    pos = {int(x): i for i, x in enumerate(h_class)}
    inside = np.zeros(len(t), dtype=bool)
    inside[h] = True
    perms = {tuple(range(len(h)))}
    images = t[:, h]
    for row in images[inside[images].all(axis=1)].tolist():
        perms.add(tuple(pos[y] for y in row))
    return GroupTable.from_permutations(sorted(perms))


def green_structure(s: FinSemigroupZ, gens: Sequence[int] | None = None) -> GreenStructure:
    t = s.table
    n = s.size
    if gens is None:
        gens = s.generators
    rs, rd = _cayley_edges(t, gens, "right")
    ls, ld = _cayley_edges(t, gens, "left")
    r_label = relabel_by_first_occurrence(scc_labels(n, rs, rd))
    l_label = relabel_by_first_occurrence(scc_labels(n, ls, ld))
    raw_d, reach = condensation(n, np.concatenate([rs, ls]), np.concatenate([rd, ld]))
    d_label = relabel_by_first_occurrence(raw_d)
    k = int(d_label.max()) + 1
    to_raw = np.empty(k, dtype=np.int64)
    to_raw[d_label] = raw_d
    # reach[a, b]: class b is reachable from a, i.e. D_b lies in the ideal of D_a
    d_leq = reach[np.ix_(to_raw, to_raw)].T.copy()
    pair = r_label * (int(l_label.max()) + 1) + l_label
    h_label = relabel_by_first_occurrence(pair)
    idem = np.zeros(n, dtype=bool)
    idem[s.idempotents] = True
    regular = []
    schutz = []
    h_classes = GreenStructure._classes(h_label)
    for members in GreenStructure._classes(d_label):
        has_idem = [x for x in members if idem[x]]
        regular.append(bool(has_idem))
        rep = has_idem[0] if has_idem else members[0]
        schutz.append(schutzenberger_group(t, h_classes[int(h_label[rep])]))
    return GreenStructure(
        semigroup=s,
        r_label=r_label,
        l_label=l_label,
        h_label=h_label,
        d_label=d_label,
        d_leq=d_leq,
        regular=tuple(regular),
        schutz=tuple(schutz),
    )


# -- local monoids and predicates ---------------------------------------------

def local_monoid_elements(s: FinSemigroupZ, e: int) -> np.ndarray:
    return np.unique(s.table[e, s.table[:, e]])


def local_monoids_and_lu(s: FinSemigroupZ):
    """Local monoids eSe (as subsemigroups with identity e) and LU(S) = E(S)SE(S).

    Returns ``(locals, lu)`` where ``locals`` maps each idempotent to a pair
    ``(monoid, embedding)`` and ``lu`` is a sorted array of elements.
    """
    t = s.table
    E = s.idempotents
    locals_ = {}
    for e in E.tolist():
        locals_[e] = s.restrict(local_monoid_elements(s, e))
    es = np.unique(t[E, :])
    lu = np.unique(t[np.ix_(es, E)])
    return locals_, lu


def lu_subset(s: FinSemigroupZ) -> np.ndarray:
    t = s.table
    E = s.idempotents
    return np.unique(t[np.ix_(np.unique(t[E, :]), E)])


def power_map(t: np.ndarray, k: int) -> np.ndarray:
    """``x -> x^k`` for every element at once."""
    idx = np.arange(len(t))
    result = None
    base = idx
    while k:
        if k & 1:
            result = base if result is None else t[result, base]
        base = t[base, base]
        k >>= 1
    return result


@dataclass(frozen=True)
class Predicates:
    aperiodic: bool
    zero_disjunctive: bool
    irreducible_language: bool
    local_sl: bool
    local_ecom: bool


def is_aperiodic(s: FinSemigroupZ) -> bool:
    n = s.size
    return bool(np.array_equal(power_map(s.table, n), power_map(s.table, n + 1)))


def syntactic_congruence_classes(s: FinSemigroupZ) -> np.ndarray:
    """Coarsest congruence saturating {0}, as class labels."""
    t = s.table
    gens = np.asarray(s.generators)
    block = (np.arange(s.size) != s.zero).astype(np.int64)
    count = len(np.unique(block))
    while True:
        sig = np.column_stack([block, block[t[:, gens]], block[t[gens, :].T]])
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        c = int(new.max()) + 1
        block = new
        if c == count:
            return block
        count = c


def is_zero_disjunctive(s: FinSemigroupZ) -> bool:
    return len(np.unique(syntactic_congruence_classes(s))) == s.size


def is_irreducible_language(s: FinSemigroupZ) -> bool:
    t = s.table
    n = s.size
    z = s.zero
    M = np.zeros((n, n), dtype=bool)
    M[np.repeat(np.arange(n), n), t.ravel()] = True
    M[np.arange(n), np.arange(n)] = True
    NZ = (t != z).astype(np.int64)
    reach = (M.astype(np.int64) @ NZ) > 0
    nz = np.arange(n) != z
    return bool(reach[np.ix_(nz, nz)].all())


def _local_checks(s: FinSemigroupZ):
    t = s.table
    sl = ecom = True
    idem = np.zeros(s.size, dtype=bool)
    idem[s.idempotents] = True
    for e in s.idempotents.tolist():
        m = local_monoid_elements(s, e)
        sub = t[np.ix_(m, m)]
        if sl and not (np.array_equal(np.diag(sub), m) and np.array_equal(sub, sub.T)):
            sl = False
        f = m[idem[m]]
        fs = t[np.ix_(f, f)]
        if not np.array_equal(fs, fs.T):
            ecom = False
            sl = False
            break
    return sl, ecom


def semigroup_predicates(s: FinSemigroupZ) -> Predicates:
    sl, ecom = _local_checks(s)
    return Predicates(
        aperiodic=is_aperiodic(s),
        zero_disjunctive=is_zero_disjunctive(s),
        irreducible_language=is_irreducible_language(s),
        local_sl=sl,
        local_ecom=ecom,
    )


def synchronizing_and_magic(s: FinSemigroupZ) -> tuple[frozenset[int], frozenset[int]]:
    """Non-zero synchronizing elements and magic idempotents."""
    t = s.table
    z = s.zero
    sync = []
    for x in range(s.size):
        if x == z:
            continue
        left = np.unique(t[t[:, x] != z, x])
        right = np.flatnonzero(t[x] != z)
        if left.size == 0 or right.size == 0 or np.all(t[np.ix_(left, right)] != z):
            sync.append(x)
    sync_set = frozenset(sync)
    magic = frozenset(e for e in s.idempotents.tolist() if e in sync_set)
    return sync_set, magic


# -- brute-force context oracle ---------------------------------------------

@dataclass(frozen=True)
class ContextVerdict:
    """Outcome of :func:`context_oracle`.

    When ``equal`` is false, ``x u y`` and ``x v y`` disagree on membership;
    ``side`` is ``"left"`` when ``x u y`` is the one in the language.
    """

    equal: bool
    x: tuple[str, ...] | None = None
    y: tuple[str, ...] | None = None
    side: str | None = None


def context_oracle(p: Presentation, u: Sequence[str], v: Sequence[str],
                   bound: int | None = None) -> ContextVerdict:
    """Decide whether u and v have the same two-sided contexts in L(p).

    All words ``x``, ``y`` of length at most ``bound`` are covered; words
    are grouped by the vertex sets they reach in ``p`` so the enumeration is
    exhaustive without listing words one by one.
    """
    n_m = minimal_automaton(p).n_states
    need = 2 * n_m * n_m
    if bound is None:
        bound = need
    if bound < need:
        raise BoundTooSmall(f"bound {bound} is below 2*|M|^2 = {need}")
    succ = p.successors
    alphabet = p.alphabet

    def step(vs, a):
        return frozenset(succ[q][a] for q in vs if a in succ[q])

    def run(vs, word):
        for a in word:
            vs = step(vs, a)
        return vs

    full = frozenset(p.vertices)
    lefts = {full: ()}
    frontier = [full]
    for _ in range(bound):
        nxt = []
        for vs in frontier:
            for a in alphabet:
                w = step(vs, a)
                if w not in lefts:
                    lefts[w] = lefts[vs] + (a,)
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    for X, x in lefts.items():
        start = (run(X, u), run(X, v))
        seen = {start: ()}
        frontier = [start]
        depth = 0
        while frontier:
            nxt = []
            for pair in frontier:
                a_in, b_in = bool(pair[0]), bool(pair[1])
                if a_in != b_in:
                    return ContextVerdict(False, x, seen[pair], "left" if a_in else "right")
                if depth == bound:
                    continue
                for a in alphabet:
                    q = (step(pair[0], a), step(pair[1], a))
                    if q not in seen:
                        seen[q] = seen[pair] + (a,)
                        nxt.append(q)
            frontier = nxt
            depth += 1
    return ContextVerdict(True)


# -- isomorphism ------------------------------------------------------------------

def iter_isomorphisms(s1: FinSemigroupZ, s2: FinSemigroupZ, budget=None):
    yield from _search.iter_isomorphisms(s1.table, s2.table, budget)


def find_isomorphism(s1: FinSemigroupZ, s2: FinSemigroupZ, budget=None) -> list[int] | None:
    return _search.find_isomorphism(s1.table, s2.table, budget)


def shift_semigroup(h, max_size: int = DEFAULT_MAX_SIZE) -> FinSemigroupZ:
    """Syntactic semigroup of a :class:`~soficinv.presentation.ShiftHandle`, memoized on it."""
    return h.memo("semigroup", lambda: transition_semigroup(h.dfa, max_size))


# -- higher powers under the natural embedding --------------------------------

def _set_product(t: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(len(t), dtype=bool)
    out[t[np.ix_(np.flatnonzero(a), np.flatnonzero(b))].ravel()] = True
    return out


def length_class(s: FinSemigroupZ, k: int) -> np.ndarray:
    """Mask of the images of all words of length ``k`` over the alphabet."""
    if k < 1:
        raise ValueError("k must be positive")
    base = np.zeros(s.size, dtype=bool)
    base[list(s.letter_map.values())] = True
    result = None
    while k:
        if k & 1:
            result = base if result is None else _set_product(s.table, result, base)
        k >>= 1
        if k:
            base = _set_product(s.table, base, base)
    return result


def power_subsemigroup(s: FinSemigroupZ, k: int) -> np.ndarray:
    """Image of S(X^k) in S(X): the zero plus everything generated by length-k words."""
    gens = np.flatnonzero(length_class(s, k)).tolist()
    return np.array(sorted(s.generated_by(gens + [s.zero])), dtype=np.int64)


def power_exponent(s: FinSemigroupZ) -> int:
    """Product of witness lengths over all idempotents.

    A zero that no word reaches counts as the one-letter word made of the
    formal zero symbol.
    """
    out = 1
    for e in s.idempotents.tolist():
        w = s.witnesses[e]
        out *= 1 if w is None else len(w)
    return out


def lu_of_power(s: FinSemigroupZ, k: int) -> np.ndarray:
    """LU(X^k) computed inside S(X^k) and returned as a subset of S(X)."""
    sub, emb = s.restrict(power_subsemigroup(s, k))
    return np.sort(emb[lu_subset(sub)])
