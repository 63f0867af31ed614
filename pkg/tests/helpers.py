"""Brute-force reference computations shared by the test modules."""

import itertools
import random

import numpy as np

from soficinv.presentation import Presentation


def path_words(p: Presentation, maxlen: int) -> set[tuple[str, ...]]:
    """All labels of paths with 1..maxlen edges, by explicit path enumeration."""
    out = set()
    frontier = {((), v) for v in p.vertices}
    for _ in range(maxlen):
        nxt = set()
        for word, v in frontier:
            for s, a, t in p.edges:
                if s == v:
                    w = word + (a,)
                    out.add(w)
                    nxt.add((w, t))
        frontier = nxt
    return out


def all_words(alphabet, maxlen: int, minlen: int = 1):
    for n in range(minlen, maxlen + 1):
        yield from itertools.product(alphabet, repeat=n)


def right_context_classes(p: Presentation, prefix_len: int, suffix_len: int) -> int:
    """Number of distinct right contexts among words up to ``prefix_len`` (empty word included).

    Contexts are compared on suffixes up to ``suffix_len``; words outside the
    language all share the empty context.
    """
    lang = path_words(p, prefix_len + suffix_len)
    suffixes = list(all_words(p.alphabet, suffix_len))
    sigs = set()
    for u in [()] + list(all_words(p.alphabet, prefix_len)):
        sigs.add(frozenset(v for v in suffixes if u + v in lang))
    return len(sigs)


def random_strongly_connected(rng: random.Random, n: int, extra: int) -> Presentation:
    """Strongly connected graph on n vertices with every edge carrying its own letter."""
    edges = [(i, (i + 1) % n) for i in range(n)]
    for _ in range(extra):
        edges.append((rng.randrange(n), rng.randrange(n)))
    return Presentation.from_edges((f"v{s}", f"e{k}", f"v{t}") for k, (s, t) in enumerate(edges))


def is_permutation_of(phi, n) -> bool:
    return sorted(phi) == list(range(n))


def relabel(p: Presentation, seed: int) -> Presentation:
    rng = random.Random(seed)
    names = list(p.vertices)
    fresh = [f"w{i}" for i in range(len(names))]
    rng.shuffle(fresh)
    ren = dict(zip(names, fresh))
    return Presentation.from_edges((ren[s], a, ren[t]) for s, a, t in p.edges)


def d_related(green, x, y) -> bool:
    return int(green.d_label[x]) == int(green.d_label[y])


def table_power(t: np.ndarray, x: int, k: int) -> int:
    out = x
    for _ in range(k - 1):
        out = int(t[out, x])
    return out
