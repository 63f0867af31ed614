import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import all_words, path_words, relabel, right_context_classes
from soficinv.corpus import random_presentation
from soficinv.errors import (
    EmptyShift,
    GensDoNotGenerate,
    LetterCollision,
    LetterNotInAlphabet,
    NotProlongable,
    NotRightResolving,
    ParseError,
)
from soficinv.presentation import (
    Presentation,
    ShiftHandle,
    block_label,
    dumps,
    higher_block,
    higher_power,
    induced_shift,
    load_presentation,
    minimal_automaton,
    symbol_expansion,
    to_dot,
)
from soficinv.semigroup import brandt_semigroup, find_isomorphism, from_table, syntactic_semigroup


def presentations():
    return st.integers(0, 10**6).map(lambda seed: random_presentation(random.Random(seed), 4, 3))


# -- loading ----------------------------------------------------------------

def test_golden_mean_loads_with_two_vertices_three_edges(golden):
    p = golden.presentation
    assert len(p.vertices) == 2
    assert len(p.edges) == 3


def test_even_shift_language_forbids_odd_zero_runs_between_ones(even):
    # a word is in the language iff it has no factor 1 0^(2n+1) 1
    def allowed(w):
        s = "".join(w)
        ones = [i for i, c in enumerate(s) if c == "1"]
        return all((j - i - 1) % 2 == 0 for i, j in zip(ones, ones[1:]))

    lang = path_words(even.presentation, 10)
    for w in all_words(("0", "1"), 10):
        assert (w in lang) == allowed(w), w


def test_dangling_edge_trims_to_empty_shift():
    with pytest.raises(EmptyShift):
        load_presentation("1 a 2")


def test_empty_document_is_empty_shift():
    with pytest.raises(EmptyShift):
        load_presentation("# nothing\n\n")


def test_malformed_line_reports_line_number():
    with pytest.raises(ParseError, match="line 2"):
        load_presentation("1 a 1\n1 b\n")


def test_duplicate_source_label_rejected():
    with pytest.raises(NotRightResolving):
        load_presentation("1 a 1\n1 a 2\n2 a 1\n")


def test_comments_and_blank_lines_ignored():
    p = load_presentation("# header\n\n1 a 1   # loop\n")
    assert p.edges == (("1", "a", "1"),)


def test_trimming_removes_transient_vertices():
    p = load_presentation("1 a 1\n2 b 1\n1 c 3\n")
    assert set(p.vertices) == {"1"}


def test_dumps_is_invariant_under_vertex_renaming(golden):
    p = golden.presentation
    assert dumps(p) == dumps(relabel(p, 7))
    assert dumps(load_presentation(dumps(p))) == dumps(p)


def test_to_dot_lists_every_edge(golden):
    dot = to_dot(golden.presentation, "gm")
    assert dot.count("->") == 3
    assert 'label="b"' in dot


# -- minimal automaton --------------------------------------------------------

@pytest.mark.parametrize("text, classes", [
    ("1 a 1\n1 b 2\n2 a 1\n", 3),
    ("1 a 1\n1 b 1\n", 1),
    ("A 1 A\nA 0 B\nB 0 A\n", 4),
])
def test_minimal_automaton_matches_brute_force_myhill_nerode(text, classes):
    p = load_presentation(text)
    d = minimal_automaton(p)
    brute = right_context_classes(p, 5, 5)
    live = d.n_states - 1
    # brute force counts the empty context only when some word reaches it
    reaches_sink = any(w not in path_words(p, 5) for w in all_words(p.alphabet, 5))
    assert brute == live + (1 if reaches_sink else 0)
    assert brute == classes


def test_minimal_automaton_golden_mean_has_three_states(golden):
    assert golden.dfa.n_states == 3


def test_minimal_automaton_full_shift_has_one_live_state(full_ab):
    d = full_ab.dfa
    assert d.n_states - 1 == 1


def test_minimal_automaton_even_shift_three_live_states_plus_sink(even):
    assert even.dfa.n_states == 4


def test_sink_is_absorbing_and_last(even):
    d = even.dfa
    assert d.sink == d.n_states - 1
    assert all(int(x) == d.sink for x in d.delta[d.sink])


@settings(max_examples=40, deadline=None)
@given(presentations())
def test_automaton_accepts_exactly_path_labels(p):
    d = minimal_automaton(p)
    maxlen = min(2 * len(p.vertices) ** 2, 7)
    lang = path_words(p, maxlen)
    for w in all_words(p.alphabet, maxlen):
        assert d.accepts(w) == (w in lang)


@settings(max_examples=40, deadline=None)
@given(presentations())
def test_automaton_states_have_distinct_right_languages(p):
    d = minimal_automaton(p)
    seen = set()
    for q in d.states:
        sig = tuple(d.run(q, w) != d.sink for w in all_words(p.alphabet, 6))
        seen.add(sig)
    assert len(seen) == d.n_states


# -- symbol expansion -----------------------------------------------------------

def test_expansion_of_single_loop_is_two_cycle(full_a):
    q = symbol_expansion(full_a.presentation, "a", "d")
    assert len(q.vertices) == 2
    assert sorted(e[1] for e in q.edges) == ["a", "d"]


def test_expansion_of_golden_mean_counts(golden):
    q = symbol_expansion(golden.presentation, "a")
    assert len(q.vertices) == 4
    assert len(q.edges) == 5


def test_expansion_errors(golden):
    with pytest.raises(LetterNotInAlphabet):
        symbol_expansion(golden.presentation, "z")
    with pytest.raises(LetterCollision):
        symbol_expansion(golden.presentation, "a", "b")


@settings(max_examples=50, deadline=None)
@given(presentations(), st.integers(0, 2))
def test_expansion_preserves_right_resolving_and_essential(p, k):
    alpha = p.alphabet[k % len(p.alphabet)]
    q = symbol_expansion(p, alpha)
    keys = [(s, a) for s, a, _ in q.edges]
    assert len(keys) == len(set(keys))
    assert Presentation.from_edges(q.edges).vertices == q.vertices


def test_expansion_language_is_substitution(golden):
    q = symbol_expansion(golden.presentation, "a", "d")
    lang = path_words(q, 8)
    for w in path_words(golden.presentation, 4):
        expanded = tuple(c for a in w for c in ((a, "d") if a == "a" else (a,)))
        assert expanded in lang


# -- higher block and power ---------------------------------------------------------

def test_higher_block_one_is_identity(golden):
    assert higher_block(golden.presentation, 1) is golden.presentation


def test_higher_block_two_of_golden_mean_alphabet(golden):
    q = higher_block(golden.presentation, 2)
    assert set(q.alphabet) == {"aa", "ab", "ba"}


@settings(max_examples=25, deadline=None)
@given(presentations(), st.sampled_from([2, 3]))
def test_higher_block_language_is_block_recoding(p, n):
    q = higher_block(p, n)
    base = path_words(p, n + 3)
    lang = path_words(q, 4)
    for w in lang:
        # consecutive n-blocks overlap in n-1 letters and spell a word of L
        blocks = [tuple(b) if len(b) == n else tuple(b.split(".")) for b in w]
        for x, y in zip(blocks, blocks[1:]):
            assert x[1:] == y[:-1]
        spelled = blocks[0] + tuple(b[-1] for b in blocks[1:])
        assert spelled in base
    for u in base:
        if n <= len(u) <= n + 3:
            blocks = tuple(block_label(u[i:i + n]) for i in range(len(u) - n + 1))
            assert blocks in lang


def test_higher_power_one_is_identity(golden):
    assert higher_power(golden.presentation, 1) is golden.presentation


def test_higher_power_of_full_shift_is_full_shift_on_four_letters(full_ab):
    q = higher_power(full_ab.presentation, 2)
    assert set(q.alphabet) == {"aa", "ab", "ba", "bb"}
    assert len(q.vertices) == 1


def test_higher_power_of_golden_mean(golden):
    q = higher_power(golden.presentation, 2)
    assert len(q.vertices) == 2
    assert set(q.alphabet) == {"aa", "ab", "ba"}


@settings(max_examples=25, deadline=None)
@given(presentations(), st.sampled_from([2, 3]))
def test_higher_power_language_is_restriction_to_block_boundaries(p, n):
    q = higher_power(p, n)
    base = path_words(p, 3 * n)
    lang = path_words(q, 3)
    expected = {tuple(block_label(u[i:i + n]) for i in range(0, len(u), n))
                for u in base if len(u) % n == 0}
    assert lang == expected


# -- induced shift ------------------------------------------------------------------

def test_induced_shift_of_two_element_semigroup_is_full_shift_on_one_letter():
    s = from_table([[0, 1], [1, 1]], 1, ("e", "0"), {"a": 0})
    p = induced_shift(s, {"a": 0})
    assert p.alphabet == ("a",)
    assert path_words(p, 5) == {("a",) * k for k in range(1, 6)}


def test_induced_shift_round_trip_golden_mean(golden):
    s = syntactic_semigroup(golden.presentation)
    back = syntactic_semigroup(induced_shift(s, s.letter_map))
    assert find_isomorphism(s, back) is not None
    assert path_words(induced_shift(s, s.letter_map), 6) == path_words(golden.presentation, 6)


def test_induced_shift_of_b2_alternates_letters():
    b2 = brandt_semigroup(2)
    p = induced_shift(b2, b2.letter_map)
    words = path_words(p, 6)
    assert words == {w for w in all_words(("a", "b"), 6)
                     if all(x != y for x, y in zip(w, w[1:]))}
    assert find_isomorphism(b2, syntactic_semigroup(p)) is not None


def test_induced_shift_errors():
    null = from_table([[1, 1], [1, 1]], 1, ("n", "0"))
    with pytest.raises(NotProlongable):
        induced_shift(null, {"a": 0})
    b2 = brandt_semigroup(2)
    with pytest.raises(GensDoNotGenerate):
        induced_shift(b2, {"a": b2.letter_map["a"]})


def test_shift_handle_memoizes(golden):
    calls = []
    golden.memo("k", lambda: calls.append(1) or 5)
    assert golden.memo("k", lambda: calls.append(1) or 6) == 5
    assert calls == [1]
    assert isinstance(ShiftHandle.from_text("1 a 1"), ShiftHandle)
