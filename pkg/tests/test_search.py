import itertools
import random

import numpy as np
import pytest

from soficinv._search import (
    Budget,
    as_budget,
    element_signatures,
    find_isomorphism,
    generating_set,
    is_homomorphism,
    iter_isomorphisms,
    iter_relation_isomorphisms,
)
from soficinv.errors import BudgetExceeded
from soficinv.semigroup import GroupTable, brandt_semigroup


def permuted(t, perm):
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    return perm[t[np.ix_(inv, inv)]]


def test_budget_counts_and_raises():
    b = Budget(3, "demo")
    b.spend(3)
    with pytest.raises(BudgetExceeded, match="demo"):
        b.spend()
    with pytest.raises(ValueError):
        Budget(0)
    assert as_budget(b) is b
    assert as_budget(5).limit == 5


def test_isomorphism_of_relabelled_brandt_semigroup():
    t = brandt_semigroup(3).table
    rng = random.Random(1)
    perm = list(range(len(t)))
    rng.shuffle(perm)
    u = permuted(t, perm)
    phi = find_isomorphism(t, u)
    assert phi is not None and is_homomorphism(t, u, phi)


def test_automorphism_count_of_klein_group():
    klein = GroupTable.from_permutations([(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)])
    # Aut(C2 x C2) is the symmetric group on the three involutions
    assert len(list(iter_isomorphisms(klein.table, klein.table))) == 6


def test_automorphism_count_of_cyclic_group():
    c = GroupTable.cyclic(5).table
    assert len(list(iter_isomorphisms(c, c))) == 4


def test_non_isomorphic_tables():
    c4 = GroupTable.cyclic(4).table
    klein = GroupTable.from_permutations([(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]).table
    assert find_isomorphism(c4, klein) is None


def test_search_respects_budget():
    t = GroupTable.cyclic(7).table
    with pytest.raises(BudgetExceeded):
        list(iter_isomorphisms(t, t, Budget(2)))


def test_signatures_are_invariant():
    t = brandt_semigroup(2).table
    perm = [4, 2, 0, 1, 3]
    u = permuted(t, perm)
    s1, s2 = element_signatures(t), element_signatures(u)
    assert [s2[perm[i]] for i in range(len(t))] == s1


def test_generating_set_generates():
    t = brandt_semigroup(3).table
    gens = generating_set(t, range(len(t)))
    closure = set(gens)
    while True:
        new = {int(t[x, y]) for x in closure for y in closure} - closure
        if not new:
            break
        closure |= new
    assert closure == set(range(len(t)))


def test_relation_isomorphisms_of_a_chain():
    chain = np.array([[i <= j for j in range(3)] for i in range(3)])
    sig = [(int(chain[i].sum()), int(chain[:, i].sum())) for i in range(3)]
    found = list(iter_relation_isomorphisms(chain, chain, sig, sig))
    assert found == [[0, 1, 2]]
    antichain = np.eye(3, dtype=bool)
    sig_a = [(1, 1)] * 3
    assert len(list(iter_relation_isomorphisms(antichain, antichain, sig_a, sig_a))) == 6
    assert not list(iter_relation_isomorphisms(chain, antichain, sig, sig_a))


def test_relation_isomorphism_compatibility_filter():
    r = np.eye(2, dtype=bool)
    sig = [(1, 1)] * 2
    found = list(iter_relation_isomorphisms(r, r, sig, sig, compatible=lambda i, j: i == j))
    assert found == [[0, 1]]


def test_all_group_isomorphisms_are_homomorphisms():
    s3 = GroupTable.from_permutations(list(itertools.permutations(range(3)))).table
    autos = list(iter_isomorphisms(s3, s3))
    assert len(autos) == 6
    assert all(is_homomorphism(s3, s3, phi) for phi in autos)
