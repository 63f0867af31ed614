"""Top-level invariants of a sofic shift and pairwise comparison reports.

A comparison never concludes flow equivalence.  When every computed
invariant agrees the verdict is ``karoubi_equivalent``, which is only an
inconclusive positive; any disagreement is a proof that the two shifts are
not flow equivalent.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import _search
from .covers import (
    Poset,
    cyclic_poset,
    dclass_labeled_preorder,
    decide_action_equivalence,
    fischer_cover,
    krieger_cover,
    labeled_preorder_isomorphic,
    poset_isomorphism,
)
from .errors import BudgetExceeded
from .karoubi import (
    decide_equivalence,
    is_snzd_preorder,
    karoubi_envelope,
    krieger_semigroup,
    skeleton,
)
from .presentation import ShiftHandle
from .semigroup import (
    FinSemigroupZ,
    green_structure,
    local_monoid_elements,
    semigroup_predicates,
    shift_semigroup,
    synchronizing_and_magic,
)

FLAG_NAMES = ("aperiodic", "property_a", "irreducible", "synchronizing", "finite_type", "almost_finite_type")


@dataclass(frozen=True)
class ShiftClass:
    irreducible: bool
    synchronizing: bool
    finite_type: bool
    almost_finite_type: bool
    aperiodic: bool
    property_a: bool


def _semigroup_of(x) -> FinSemigroupZ:
    return shift_semigroup(x) if isinstance(x, ShiftHandle) else x


def semigroup_property_a(s: FinSemigroupZ) -> bool:
    def compute():
        if not semigroup_predicates(s).aperiodic:
            return False
        return is_snzd_preorder(karoubi_envelope(s))
    return s.memo("property_a", compute)


def property_a(h) -> bool:
    """Property (A), decided through the strong non-zero divisors of the Karoubi envelope."""
    return semigroup_property_a(_semigroup_of(h))


def classify_shift(h) -> ShiftClass:
    s = _semigroup_of(h)

    def compute():
        pred = semigroup_predicates(s)
        sync, _ = synchronizing_and_magic(s)
        irr = pred.irreducible_language
        return ShiftClass(
            irreducible=irr,
            synchronizing=bool(sync),
            finite_type=irr and pred.local_sl,
            almost_finite_type=irr and pred.local_ecom,
            aperiodic=pred.aperiodic,
            property_a=semigroup_property_a(s),
        )
    return s.memo("class", compute)


def subsynchronizing_poset(h) -> Poset:
    """Magic idempotents up to generating the same subshift; e below f when fSe is not {0}."""
    s = _semigroup_of(h)

    def compute():
        t = s.table
        _, magic = synchronizing_and_magic(s)
        magic = sorted(magic)
        k = len(magic)
        rel = np.zeros((k, k), dtype=bool)
        for i, e in enumerate(magic):
            for j, f in enumerate(magic):
                rel[i, j] = bool(np.any(t[t[f, :], e] != s.zero))
        classes: list[list[int]] = []
        seen = set()
        for i in range(k):
            if i in seen:
                continue
            members = [j for j in range(k) if rel[i, j] and rel[j, i]]
            seen.update(members)
            classes.append(members)
        elements = tuple(tuple(s.names[magic[j]] for j in c) for c in classes)
        leq = np.array([[rel[c1[0], c2[0]] for c2 in classes] for c1 in classes], dtype=bool)
        return Poset(elements, leq.reshape(len(classes), len(classes)))
    return s.memo("subs", compute)


def local_monoid_table(s: FinSemigroupZ, e: int) -> np.ndarray:
    m = local_monoid_elements(s, e)
    pos = {int(x): i for i, x in enumerate(m)}
    sub = s.table[np.ix_(m, m)]
    return np.vectorize(pos.__getitem__)(sub) if len(m) else sub


def monoid_embeds_as_local(s1: FinSemigroupZ, s2: FinSemigroupZ, budget=None) -> bool:
    """True when the monoid ``s1`` is isomorphic to some local monoid of ``s2``."""
    k2 = skeleton(karoubi_envelope(s2))
    for f in k2.objects:
        t = local_monoid_table(s2, f)
        if len(t) == s1.size and _search.find_isomorphism(s1.table, t, budget) is not None:
            return True
    return False


# -- reports ----------------------------------------------------------------

def _krieger_action(x):
    return krieger_cover(x)[1] if isinstance(x, ShiftHandle) else None


def kd_preorder(x):
    s = _semigroup_of(x)
    return s.memo("KD", lambda: dclass_labeled_preorder(s, _krieger_action(x)))


def fd_preorder(x):
    s = _semigroup_of(x)
    return s.memo("FD", lambda: dclass_labeled_preorder(s, fischer_cover(x)[1]))


def p_poset(x) -> Poset:
    s = _semigroup_of(x)
    return s.memo("P", lambda: cyclic_poset(krieger_cover(x)[1]))


def krieger_semigroup_of(x):
    s = _semigroup_of(x)
    return s.memo("krieger_semigroup", lambda: krieger_semigroup(karoubi_envelope(s)))


def _semigroup_json(s: FinSemigroupZ) -> dict:
    g = green_structure(s)
    return {
        "order": s.size,
        "idempotents": [s.names[e] for e in s.idempotents.tolist()],
        "d_classes": len(g.d_classes),
        "is_monoid": s.is_monoid,
        "elements": [{"name": s.names[x], "witness": None if s.witnesses[x] is None else list(s.witnesses[x])}
                     for x in range(s.size)],
    }


def _karoubi_json(s: FinSemigroupZ) -> dict:
    c = karoubi_envelope(s)
    k = skeleton(c)
    return {
        "objects": len(c.objects),
        "skeleton_objects": [s.names[e] for e in k.objects],
        "skeleton_morphisms": len(k.morphisms),
        "local_monoid_orders": [k.end_size(e) for e in k.objects],
        "hom_sizes": k.hom_sizes.tolist(),
    }


@dataclass
class InvariantReport:
    name: str
    semigroup: dict
    karoubi: dict
    flags: dict
    kd: dict
    p: dict | None = None
    fd: dict | None = None
    krieger_semigroup: dict | None = None
    subs: dict | None = None
    covers: dict | None = None

    def to_json(self) -> dict:
        return asdict(self)


def analyze(x, name: str | None = None) -> InvariantReport:
    """Full invariant report for a shift handle or a raw semigroup."""
    s = _semigroup_of(x)
    is_shift = isinstance(x, ShiftHandle)
    flags = asdict(classify_shift(s))
    pred = semigroup_predicates(s)
    flags["zero_disjunctive"] = pred.zero_disjunctive
    rep = InvariantReport(
        name=name or (x.name if is_shift else "S"),
        semigroup=_semigroup_json(s),
        karoubi=_karoubi_json(s),
        flags=flags,
        kd=kd_preorder(x).to_json(),
        subs=subsynchronizing_poset(s).to_json(),
    )
    if flags["property_a"]:
        ks = krieger_semigroup_of(s).semigroup
        rep.krieger_semigroup = {"order": ks.size, "elements": list(ks.names), "table": ks.table.tolist()}
    if is_shift:
        rep.p = p_poset(x).to_json()
        g, a = krieger_cover(x)
        rep.covers = {"krieger": [list(e) for e in g.edges]}
        if flags["irreducible"]:
            rep.fd = fd_preorder(x).to_json()
            rep.covers["fischer"] = [list(e) for e in fischer_cover(x)[0].edges]
    return rep


# -- comparison ----------------------------------------------------------------

@dataclass
class Row:
    name: str
    status: str          # "match", "mismatch", "n/a" or "skipped"
    left: object = None
    right: object = None

    def to_json(self):
        return asdict(self)


@dataclass
class ComparisonVerdict:
    outcome: str                      # "distinguished" or "karoubi_equivalent"
    separator: str | None
    rows: list[Row] = field(default_factory=list)
    witness: dict | None = None

    @property
    def distinguished(self) -> bool:
        return self.outcome == "distinguished"

    def row(self, name: str) -> Row:
        return next(r for r in self.rows if r.name == name)

    def to_json(self) -> dict:
        return {
            "verdict": self.outcome,
            "separator": self.separator,
            "rows": [r.to_json() for r in self.rows],
            "witness": self.witness,
            "note": None if self.distinguished else
            "all computed invariants agree; flow equivalence itself is not decided",
        }


def _both_shifts(x1, x2):
    return isinstance(x1, ShiftHandle) and isinstance(x2, ShiftHandle)


def _comparisons(x1, x2, budget) -> list[tuple[str, Callable]]:
    s1, s2 = _semigroup_of(x1), _semigroup_of(x2)
    rows: list[tuple[str, Callable]] = []

    for flag in FLAG_NAMES:
        def cmp(flag=flag):
            a, b = getattr(classify_shift(s1), flag), getattr(classify_shift(s2), flag)
            return ("match" if a == b else "mismatch"), a, b
        rows.append((flag, cmp))

    def monoid():
        m1, m2 = s1.is_monoid, s2.is_monoid
        if not (m1 or m2):
            return "n/a", False, False
        ok = True
        if m1:
            ok = ok and monoid_embeds_as_local(s1, s2, budget)
        if m2:
            ok = ok and monoid_embeds_as_local(s2, s1, budget)
        return ("match" if ok else "mismatch"), m1, m2
    rows.append(("monoid", monoid))

    if _both_shifts(x1, x2):
        def p():
            a, b = p_poset(x1), p_poset(x2)
            return ("match" if poset_isomorphism(a, b, budget) is not None else "mismatch"), a.to_json(), b.to_json()
        rows.append(("P", p))

    def kd():
        a, b = kd_preorder(x1), kd_preorder(x2)
        ok = labeled_preorder_isomorphic(a, b, budget) is not None
        return ("match" if ok else "mismatch"), a.to_json(), b.to_json()
    rows.append(("KD", kd))

    def subs():
        a, b = subsynchronizing_poset(s1), subsynchronizing_poset(s2)
        return ("match" if poset_isomorphism(a, b, budget) is not None else "mismatch"), a.to_json(), b.to_json()
    rows.append(("Subs", subs))

    if _both_shifts(x1, x2):
        def both_irreducible():
            return classify_shift(s1).irreducible and classify_shift(s2).irreducible

        def fd():
            if not both_irreducible():
                return "n/a", None, None
            a, b = fd_preorder(x1), fd_preorder(x2)
            ok = labeled_preorder_isomorphic(a, b, budget) is not None
            return ("match" if ok else "mismatch"), a.to_json(), b.to_json()
        rows.append(("FD", fd))

        def fischer_action():
            if not both_irreducible():
                return "n/a", None, None
            w = decide_action_equivalence(fischer_cover(x1)[1], fischer_cover(x2)[1], budget)
            return ("match" if w is not None else "mismatch"), None, None
        rows.append(("fischer_action", fischer_action))

    def krieger_sg():
        pa, pb = semigroup_property_a(s1), semigroup_property_a(s2)
        if not (pa and pb):
            return "n/a", None, None
        a, b = krieger_semigroup_of(s1).semigroup, krieger_semigroup_of(s2).semigroup
        ok = a.size == b.size and _search.find_isomorphism(a.table, b.table, budget) is not None
        return ("match" if ok else "mismatch"), a.size, b.size
    rows.append(("krieger_semigroup", krieger_sg))

    def karoubi():
        eq = decide_equivalence(karoubi_envelope(s1), karoubi_envelope(s2), budget)
        return ("match" if eq is not None else "mismatch"), _karoubi_json(s1), _karoubi_json(s2)
    rows.append(("karoubi", karoubi))

    if _both_shifts(x1, x2):
        def action():
            w = decide_action_equivalence(krieger_cover(x1)[1], krieger_cover(x2)[1], budget)
            return ("match" if w is not None else "mismatch"), None, None
        rows.append(("krieger_action", action))
    return rows


def compare_shifts(x1, x2, budget=None, exhaustive: bool = False) -> ComparisonVerdict:
    """Compare two shifts (or two raw semigroups), cheapest invariants first.

    On :class:`BudgetExceeded` the rows computed so far are attached to the
    exception as ``partial``.
    """
    budget = _search.as_budget(budget)
    done: list[Row] = []
    separator = None
    for name, fn in _comparisons(x1, x2, budget):
        if separator is not None and not exhaustive:
            done.append(Row(name, "skipped"))
            continue
        try:
            status, left, right = fn()
        except BudgetExceeded as exc:
            exc.partial = done
            raise
        done.append(Row(name, status, left, right))
        if status == "mismatch" and separator is None:
            separator = name
    outcome = "distinguished" if separator is not None else "karoubi_equivalent"
    witness = None
    if separator is None:
        k1 = skeleton(karoubi_envelope(_semigroup_of(x1)))
        witness = {"skeleton_objects": len(k1.objects), "skeleton_morphisms": len(k1.morphisms)}
    return ComparisonVerdict(outcome, separator, done, witness)
