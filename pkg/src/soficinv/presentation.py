"""Labeled-graph presentations of sofic shifts and their minimal automata.

A presentation is a finite right-resolving labeled multigraph.  Every
vertex is both initial and final, so the language of the presentation is
the set of labels of finite paths, which is the factor language L(X) of
the shift it presents once the graph is essential.

Text format, one edge per line::

    # golden mean shift
    1 a 1
    1 b 2
    2 a 1
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EmptyShift,
    GensDoNotGenerate,
    LetterCollision,
    LetterNotInAlphabet,
    NotProlongable,
    NotRightResolving,
    ParseError,
)

Edge = tuple[str, str, str]


@dataclass(frozen=True)
class Presentation:
    """Essential right-resolving labeled graph.

    Build instances with :meth:`from_edges`, which validates and trims;
    the raw constructor trusts its arguments.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[str]], trim: bool = True) -> "Presentation":
        edges = [tuple(str(t) for t in e) for e in edges]
        seen = {}
        for src, label, dst in edges:
            if (src, label) in seen:
                raise NotRightResolving(
                    f"vertex {src!r} has two out-edges labeled {label!r} "
                    f"(to {seen[src, label]!r} and {dst!r})"
                )
            seen[src, label] = dst
        if trim:
            edges = _trim(edges)
        if not edges:
            raise EmptyShift("no bi-infinite path survives trimming")
        verts = []
        for src, _, dst in edges:
            for v in (src, dst):
                if v not in verts:
                    verts.append(v)
        return cls(tuple(verts), tuple(edges))

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({a for _, a, _ in self.edges}))

    @cached_property
    def successors(self) -> dict[str, dict[str, str]]:
        out: dict[str, dict[str, str]] = {v: {} for v in self.vertices}
        for src, a, dst in self.edges:
            out[src][a] = dst
        return out

    def follow(self, vertex: str, word: Iterable[str]) -> str | None:
        """End vertex of the path labeled ``word`` from ``vertex``, if any."""
        for a in word:
            vertex = self.successors[vertex].get(a)
            if vertex is None:
                return None
        return vertex

    def accepts(self, word: Sequence[str]) -> bool:
        return any(self.follow(v, word) is not None for v in self.vertices)

    def canonical(self) -> "Presentation":
        """Relabel vertices ``0..n-1`` in BFS order from the least edge."""
        order = _canonical_order(self)
        ren = {v: str(i) for i, v in enumerate(order)}
        edges = sorted(((ren[s], a, ren[t]) for s, a, t in self.edges),
                       key=lambda e: (int(e[0]), e[1], int(e[2])))
        return Presentation(tuple(str(i) for i in range(len(order))), tuple(edges))

    def reversed(self) -> "Presentation":
        """The reversed graph; presents the left-handed version of the shift.

        The reversal of a right-resolving graph need not be right-resolving,
        so this is only valid for left-resolving inputs.
        """
        return Presentation.from_edges((t, a, s) for s, a, t in self.edges)


def _trim(edges: list[Edge]) -> list[Edge]:
    while True:
        has_in = {t for _, _, t in edges}
        has_out = {s for s, _, _ in edges}
        kept = [e for e in edges if e[0] in has_in and e[2] in has_out]
        if len(kept) == len(edges):
            return kept
        edges = kept


def _canonical_order(p: Presentation) -> list[str]:
    edge_key = lambda e: (e[1], e[0], e[2])
    order: list[str] = []
    seen: set[str] = set()
    remaining = sorted(p.edges, key=edge_key)
    while len(order) < len(p.vertices):
        start = next(e[0] for e in remaining if e[0] not in seen)
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            order.append(v)
            for a in sorted(p.successors[v]):
                w = p.successors[v][a]
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


# -- text I/O ---------------------------------------------------------------

def load_presentation(source: str) -> Presentation:
    edges = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise ParseError(f"line {lineno}: expected '<src> <label> <dst>', got {raw!r}")
        edges.append(tuple(toks))
    if not edges:
        raise EmptyShift("document contains no edges")
    return Presentation.from_edges(edges)


def read_presentation(path: str | Path) -> Presentation:
    return load_presentation(Path(path).read_text(encoding="utf-8"))


def dumps(p: Presentation) -> str:
    c = p.canonical()
    return "".join(f"{s} {a} {t}\n" for s, a, t in c.edges)


def to_dot(p: Presentation, name: str = "X") -> str:
    lines = [f'digraph "{name}" {{', "  node [shape=circle];"]
    for v in p.vertices:
        lines.append(f'  "{v}";')
    for s, a, t in p.edges:
        lines.append(f'  "{s}" -> "{t}" [label="{a}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- minimal automaton ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Dfa:
    """Complete deterministic automaton of a factor language, with sink.

    ``delta[q, i]`` is the successor of state ``q`` under ``alphabet[i]``.
    Every state but the sink accepts; the initial state is the right
    context of the empty word.
    """

    alphabet: tuple[str, ...]
    delta: np.ndarray
    initial: int
    sink: int
    subsets: tuple[frozenset, ...]

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def states(self) -> range:
        return range(self.n_states)

    @cached_property
    def letter_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @property
    def productive(self) -> np.ndarray:
        flags = np.ones(self.n_states, dtype=bool)
        flags[self.sink] = False
        return flags

    def run(self, state: int, word: Iterable[str]) -> int:
        for a in word:
            i = self.letter_index.get(a)
            if i is None:
                return self.sink
            state = int(self.delta[state, i])
        return state

    def accepts(self, word: Sequence[str]) -> bool:
        return self.run(self.initial, word) != self.sink


def minimal_automaton(p: Presentation) -> Dfa:
    alphabet = p.alphabet
    succ = p.successors
    start = frozenset(p.vertices)
    empty = frozenset()
    index = {start: 0}
    subsets = [start]
    rows = []
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        row = []
        for a in alphabet:
            nxt = frozenset(succ[v][a] for v in cur if a in succ[v])
            if nxt not in index:
                index[nxt] = len(subsets)
                subsets.append(nxt)
                queue.append(nxt)
            row.append(index[nxt])
        rows.append(row)
    if empty not in index:
        index[empty] = len(subsets)
        subsets.append(empty)
        rows.append([index[empty]] * len(alphabet))
    delta = np.array(rows, dtype=np.int64).reshape(len(subsets), len(alphabet))
    sink = index[empty]

    # Moore refinement; the sink is the only non-accepting state
    block = np.zeros(len(subsets), dtype=np.int64)
    block[sink] = 1
    n_blocks = 2
    while True:
        sig = np.column_stack([block, block[delta]])
        _, new_block = np.unique(sig, axis=0, return_inverse=True)
        new_block = new_block.ravel()
        count = int(new_block.max()) + 1
        block = new_block
        if count == n_blocks:
            break
        n_blocks = count

    # renumber blocks in BFS order from the initial state, sink last
    order: list[int] = []
    rep: dict[int, int] = {}
    queue = deque([0])
    rep[int(block[0])] = 0
    while queue:
        q = queue.popleft()
        b = int(block[q])
        if b == block[sink]:
            continue
        order.append(b)
        for i in range(len(alphabet)):
            t = int(delta[q, i])
            bt = int(block[t])
            if bt not in rep:
                rep[bt] = t
                queue.append(t)
    order.append(int(block[sink]))
    rep.setdefault(int(block[sink]), sink)
    new_id = {b: i for i, b in enumerate(order)}
    new_delta = np.empty((len(order), len(alphabet)), dtype=np.int64)
    for b in order:
        new_delta[new_id[b]] = [new_id[int(block[t])] for t in delta[rep[b]]]
    return Dfa(
        alphabet=alphabet,
        delta=new_delta,
        initial=0,
        sink=len(order) - 1,
        subsets=tuple(subsets[rep[b]] for b in order),
    )


# -- transformations --------------------------------------------------------

def fresh_letter(alphabet: Iterable[str], base: str = "◊") -> str:
    used = set(alphabet)
    if base not in used:
        return base
    i = 1
    while f"{base}{i}" in used:
        i += 1
    return f"{base}{i}"


def symbol_expansion(p: Presentation, alpha: str, diamond: str | None = None) -> Presentation:
    """Replace every ``alpha`` edge by a two-edge path labeled ``alpha``, ``diamond``."""
    if alpha not in p.alphabet:
        raise LetterNotInAlphabet(f"{alpha!r} is not a letter of the presentation")
    if diamond is None:
        diamond = fresh_letter(p.alphabet)
    if diamond in p.alphabet:
        raise LetterCollision(f"{diamond!r} already occurs in the alphabet")
    taken = set(p.vertices)
    counter = 0
    edges = []
    for s, a, t in p.edges:
        if a != alpha:
            edges.append((s, a, t))
            continue
        while f"m{counter}" in taken:
            counter += 1
        mid = f"m{counter}"
        taken.add(mid)
        edges += [(s, alpha, mid), (mid, diamond, t)]
    return Presentation.from_edges(edges)


def block_label(letters: Sequence[str]) -> str:
    if all(len(a) == 1 for a in letters):
        return "".join(letters)
    return ".".join(letters)


def _paths(p: Presentation, start: str, length: int):
    """Yield ``(labels, end)`` for every path of ``length`` edges from ``start``."""
    stack = [((), start)]
    while stack:
        word, v = stack.pop()
        if len(word) == length:
            yield word, v
            continue
        for a, w in p.successors[v].items():
            stack.append((word + (a,), w))


def higher_block(p: Presentation, n: int) -> Presentation:
    if n < 1:
        raise ValueError("block length must be positive")
    if n == 1:
        return p
    edges = set()
    for s in p.vertices:
        for word, t in _paths(p, s, n - 1):
            src = block_label(word) + "@" + t
            for a, t2 in p.successors[t].items():
                dst = block_label(word[1:] + (a,)) + "@" + t2
                edges.add((src, block_label(word + (a,)), dst))
    return Presentation.from_edges(sorted(edges))


def higher_power(p: Presentation, n: int) -> Presentation:
    if n < 1:
        raise ValueError("power must be positive")
    if n == 1:
        return p
    edges = []
    for s in p.vertices:
        for word, t in _paths(p, s, n):
            edges.append((s, block_label(word), t))
    return Presentation.from_edges(sorted(edges))


def induced_shift(s, gens: Mapping[str, int]) -> Presentation:
    """Presentation of the shift whose language is the preimage of S minus 0.

    ``s`` is a :class:`~soficinv.semigroup.FinSemigroupZ` and ``gens`` sends
    letters to element ids.  Built on the right Cayley graph of ``s``.
    """
    table = s.table
    zero = s.zero
    nonzero = [x for x in range(s.size) if x != zero]
    reached = s.generated_by(gens.values())
    if not set(nonzero) <= reached:
        raise GensDoNotGenerate("the letter images do not generate every non-zero element")
    for x in nonzero:
        if not np.any(table[table[:, x], :] != zero):
            raise NotProlongable(f"element {s.name(x)} has SxS = {{0}}")
    letters = sorted(gens)
    edges = []
    for a in letters:
        g = gens[a]
        if g != zero:
            edges.append(("1", a, s.name(g)))
    for x in nonzero:
        for a in letters:
            y = int(table[x, gens[a]])
            if y != zero:
                edges.append((s.name(x), a, s.name(y)))
    return Presentation.from_edges(edges)


# -- handle -----------------------------------------------------------------

@dataclass(eq=False)
class ShiftHandle:
    """A presentation plus lazily computed derived data.

    Other modules memoize their results in ``cache`` so that one handle
    computes each invariant once.
    """

    presentation: Presentation
    name: str = "X"
    cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def dfa(self) -> Dfa:
        return minimal_automaton(self.presentation)

    def memo(self, key, compute):
        if key not in self.cache:
            self.cache[key] = compute()
        return self.cache[key]

    @classmethod
    def from_text(cls, text: str, name: str = "X") -> "ShiftHandle":
        return cls(load_presentation(text), name)

    @classmethod
    def from_file(cls, path: str | Path) -> "ShiftHandle":
        path = Path(path)
        return cls(read_presentation(path), path.stem)
