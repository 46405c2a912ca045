"""Arborification morphisms, the symmetrization map, and pullbacks.

Reading convention (load-bearing): a forest's word series lists the
decorations of each linear extension from the <<-greatest vertex down to the
<<-least, i.e. the root letter of the canonical decomposition is appended
*last*.  This is the unique reading for which the recursion

    arborify(tau' x_a tau'') = [arborify(tau') shuffle arborify(tau'')] a

holds and for which the map is a Hopf algebra morphism onto the shuffle
algebra with the deconcatenation coproduct.  The extension-sum oracle
therefore reads extensions in reverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .algebra import (
    FreeSemigroup,
    GradedSeries,
    Letter,
    LinearFunctional,
    Semigroup,
    TensorSeries,
    Word,
)
from .forests import (
    NonplanarForest,
    PlanarForest,
    decompose,
    order_relations,
    planar_representatives,
    symmetry_factor,
)
from .hopf import (
    HopfStructure,
    Report,
    _tensor_product_series,
    quasi_shuffle,
    shuffle,
)


class MorphismError(ValueError):
    pass


# --- arborification ----------------------------------------------------------


def _append_letter(series: GradedSeries, a: Letter) -> GradedSeries:
    out = GradedSeries()
    for w, c in series.coeffs.items():
        out = out.add_term(Word(w.letters + (a,)), c)
    return out


@lru_cache(maxsize=None)
def arborify_planar(f: PlanarForest) -> GradedSeries:
    """a_<<(f): recursion [a(tau') sh a(tau'')] a over the canonical split."""
    if f.is_empty():
        return GradedSeries.term(Word())
    head, a, tail = decompose(f)
    left = arborify_planar(head)
    right = arborify_planar(tail)
    out = GradedSeries()
    for v, cv in left.coeffs.items():
        for w, cw in right.coeffs.items():
            out = out + _append_letter(shuffle(v, w), a).scale(cv * cw)
    return out


def arborify_planar_extensions(f: PlanarForest) -> GradedSeries:
    """Oracle: sum over <<-linear extensions, decorations read greatest-first."""
    return _extension_words(f, "<<")


def _extension_words(f: PlanarForest, relation: str) -> GradedSeries:
    from .forests import iter_linear_extensions

    if f.is_empty():
        return GradedSeries.term(Word())
    poset = order_relations(f)
    out = GradedSeries()
    for ext in iter_linear_extensions(poset, relation):
        letters = tuple(poset.letters[v] for v in reversed(ext))
        out = out.add_term(Word(letters), 1)
    return out


@lru_cache(maxsize=None)
def _arborify_planar_contracting_cached(
    f: PlanarForest, sg: Semigroup
) -> GradedSeries:
    if f.is_empty():
        return GradedSeries.term(Word())
    head, a, tail = decompose(f)
    left = _arborify_planar_contracting_cached(head, sg)
    right = _arborify_planar_contracting_cached(tail, sg)
    out = GradedSeries()
    for v, cv in left.coeffs.items():
        for w, cw in right.coeffs.items():
            out = out + _append_letter(quasi_shuffle(v, w, sg), a).scale(cv * cw)
    return out


_FREE = FreeSemigroup()


def arborify_planar_contracting(
    f: PlanarForest, semigroup: Semigroup | None = None
) -> GradedSeries:
    """a^c_<<(f): recursion with the quasi-shuffle; includes contraction terms."""
    return _arborify_planar_contracting_cached(f, semigroup or _FREE)


def _contracting_extension_words(
    f: PlanarForest, relation: str, sg: Semigroup
) -> GradedSeries:
    """Oracle: sum over increasing surjections of the order onto {1..n-r};
    vertices sharing a slot contribute their semigroup sum, slots read
    greatest-first."""
    poset = order_relations(f)
    n = poset.size
    if n == 0:
        return GradedSeries.term(Word())
    above = poset.relation(relation)
    below: list[set[int]] = [set() for _ in range(n)]
    for v in range(n):
        for w in above[v]:
            below[w].add(v)

    out = GradedSeries()

    def rec(remaining: frozenset[int], placed: frozenset[int], suffix: tuple):
        nonlocal out
        if not remaining:
            out = out.add_term(Word(suffix), 1)
            return
        minimal = [v for v in remaining if below[v] <= placed]
        # any nonempty antichain of minimal vertices may share the next slot
        import itertools

        for k in range(1, len(minimal) + 1):
            for combo in itertools.combinations(minimal, k):
                good = True
                for i, v in enumerate(combo):
                    for w in combo[i + 1 :]:
                        if w in above[v] or v in above[w]:
                            good = False
                            break
                    if not good:
                        break
                if not good:
                    continue
                letter = poset.letters[combo[0]]
                ok = True
                for v in combo[1:]:
                    try:
                        letter = sg.add(letter, poset.letters[v])
                    except Exception as exc:
                        raise MorphismError(str(exc)) from exc
                rec(
                    remaining - frozenset(combo),
                    placed | frozenset(combo),
                    (letter,) + suffix,
                )

    rec(frozenset(range(n)), frozenset(), ())
    return out


def arborify_nonplanar(f: NonplanarForest) -> GradedSeries:
    """a(f): sum over <-linear extensions, same greatest-first reading."""
    return _extension_words(f.planar_representative(), "<")


def arborify_nonplanar_contracting(
    f: NonplanarForest, semigroup: Semigroup | None = None
) -> GradedSeries:
    return _contracting_extension_words(
        f.planar_representative(), "<", semigroup or _FREE
    )


def omega(f: NonplanarForest) -> GradedSeries:
    """Symmetrization: sum of planar representatives weighted by Sym."""
    out = GradedSeries()
    for rep in planar_representatives(f):
        out = out.add_term(rep, symmetry_factor(rep))
    return out


# --- morphism objects ---------------------------------------------------------


@dataclass
class HopfMorphism:
    name: str
    source: HopfStructure
    target: HopfStructure
    rule: Callable[[object], GradedSeries]

    def apply(self, series: GradedSeries) -> GradedSeries:
        return series.map_basis(self.rule)


def arborification_morphism(mkw: HopfStructure, sh: HopfStructure) -> HopfMorphism:
    return HopfMorphism("a_<<", mkw, sh, arborify_planar)


def contracting_arborification_morphism(
    mkw: HopfStructure, qsh: HopfStructure, semigroup: Semigroup | None = None
) -> HopfMorphism:
    sg = semigroup or _FREE
    return HopfMorphism(
        "a^c_<<", mkw, qsh, lambda f: arborify_planar_contracting(f, sg)
    )


def omega_morphism(bck: HopfStructure, mkw: HopfStructure) -> HopfMorphism:
    return HopfMorphism("Omega", bck, mkw, omega)


def nonplanar_arborification_morphism(
    bck: HopfStructure, sh: HopfStructure
) -> HopfMorphism:
    return HopfMorphism("a", bck, sh, arborify_nonplanar)


def pullback(phi: LinearFunctional, m: HopfMorphism) -> LinearFunctional:
    """(phi o m)(x) = phi(m(x)); characters pull back to characters."""
    return LinearFunctional(
        lambda x: phi.pair(m.rule(x)), phi.cap, name=f"{phi.name}o{m.name}"
    )


# --- verification -------------------------------------------------------------


def verify_morphism(m: HopfMorphism, max_degree: int) -> Report:
    """Check degree preservation, combinatorial coefficients, product and
    coproduct compatibility exhaustively on the source basis."""
    rep = Report()
    src, tgt = m.source, m.target
    basis_by_deg = {n: src.basis(n) for n in range(0, max_degree + 1)}

    ok, wit = True, ""
    for n, elems in basis_by_deg.items():
        for x in elems:
            img = m.rule(x)
            for y, c in img.coeffs.items():
                if y.degree != n:
                    ok, wit = False, f"{m.name}({x}) has off-degree term {y}"
                    break
                if c != int(c) or c < 0:
                    ok, wit = False, f"{m.name}({x}) has coefficient {c} on {y}"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add(f"{m.name}: degree-preserving, nonneg integer coefficients", ok, wit)

    ok, wit = True, ""
    if m.rule(src.unit) != GradedSeries.term(tgt.unit):
        ok, wit = False, f"{m.name}(1) != 1"
    rep.add(f"{m.name}: unit", ok, wit)

    ok, wit = True, ""
    for p in range(1, max_degree):
        for q in range(p, max_degree - p + 1):
            for x in basis_by_deg[p]:
                for y in basis_by_deg[q]:
                    lhs = m.apply(src.product(x, y))
                    rhs = tgt.product_series(m.rule(x), m.rule(y))
                    if lhs != rhs:
                        ok, wit = False, f"{m.name}({x}.{y}) mismatch"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add(f"{m.name}: product compatibility", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for x in basis_by_deg[n]:
            lhs = tgt.coproduct_series(m.rule(x))
            rhs = TensorSeries()
            for (l, r), c in src.coproduct(x).coeffs.items():
                for l2, c2 in m.rule(l).coeffs.items():
                    for r2, c3 in m.rule(r).coeffs.items():
                        rhs = rhs + TensorSeries.term(l2, r2, c * c2 * c3)
            if lhs != rhs:
                ok, wit = False, f"Delta {m.name}({x}) mismatch"
                break
        if not ok:
            break
    rep.add(f"{m.name}: coproduct compatibility", ok, wit)

    return rep


def verify_arborification_recursion(d: int, max_degree: int) -> Report:
    """The recursion and the extension-sum oracle agree."""
    from .forests import enumerate_forests

    rep = Report()
    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for f in enumerate_forests(n, d):
            if arborify_planar(f) != arborify_planar_extensions(f):
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add("a_<< recursion == extension sum", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for f in enumerate_forests(n, d):
            lhs = arborify_planar_contracting(f)
            rhs = _contracting_extension_words(f, "<<", _FREE)
            if lhs != rhs:
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add("a^c_<< recursion == increasing-surjection sum", ok, wit)
    return rep


def verify_arborification_diagram(d: int, max_degree: int) -> Report:
    """a_<< o Omega = a and a^c_<< o Omega = a^c on the BCK basis."""
    from .hopf import bck_hopf

    bck = bck_hopf(d)
    rep = Report()

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for f in bck.basis(n):
            lhs = omega(f).map_basis(arborify_planar)
            rhs = arborify_nonplanar(f)
            if lhs != rhs:
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add("a_<< o Omega == a", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for f in bck.basis(n):
            lhs = omega(f).map_basis(lambda p: arborify_planar_contracting(p))
            rhs = arborify_nonplanar_contracting(f)
            if lhs != rhs:
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add("a^c_<< o Omega == a^c", ok, wit)
    return rep
