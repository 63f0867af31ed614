"""Seeded pseudo-random corpus of small presentations for property suites."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import EmptyShift
from .presentation import Presentation, ShiftHandle

LETTERS = "abc"


@dataclass(frozen=True)
class CorpusItem:
    index: int
    handle: ShiftHandle
    letter: str


def random_presentation(rng: random.Random, max_vertices: int = 5, max_letters: int = 3,
                        density: float | None = None) -> Presentation:
    """Essential right-resolving presentation; retries until trimming leaves something."""
    while True:
        nv = rng.randint(1, max_vertices)
        letters = LETTERS[:rng.randint(1, max_letters)]
        p = rng.uniform(0.35, 0.8) if density is None else density
        edges = []
        for v in range(nv):
            for a in letters:
                if rng.random() < p:
                    edges.append((str(v), a, str(rng.randrange(nv))))
        try:
            return Presentation.from_edges(edges)
        except EmptyShift:
            continue


def generate_corpus(seed: int = 2024, count: int = 200, max_vertices: int = 5,
                    max_letters: int = 3) -> list[CorpusItem]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        p = random_presentation(rng, max_vertices, max_letters)
        letter = rng.choice(p.alphabet)
        out.append(CorpusItem(i, ShiftHandle(p, f"corpus{i}"), letter))
    return out
