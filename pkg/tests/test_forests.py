import itertools
import json
import math
from fractions import Fraction

import pytest

from roughforest.forests import (
    EMPTY_FOREST,
    ForestError,
    ResourceCapError,
    NonplanarForest,
    b_plus,
    catalan,
    decompose,
    enumerate_forests,
    forget_planarity,
    iter_linear_extensions,
    linear_extensions,
    monte_carlo_volume,
    nonplanar_factorial,
    nonplanar_factorial_via_extensions,
    order_relations,
    parse_forest,
    planar_factorial,
    planar_factorial_via_extensions,
    planar_representatives,
    render_forest,
    symmetry_factor,
)


def test_parse_basic_examples():
    assert render_forest(parse_forest("a")) == "a"
    assert render_forest(parse_forest("i[j]")) == "i[j]"
    f = parse_forest("c a[b]")
    assert len(f.trees) == 2
    assert f.degree == 3
    head, a, tail = decompose(f)
    assert (str(head), a, str(tail)) == ("c", 0, "b")


def test_parse_errors_carry_positions():
    for bad in ("a[", "a[]", "a[b,", "A", "a  b?", "a["):
        with pytest.raises(ForestError) as err:
            parse_forest(bad)
        assert "position" in str(err.value)
    with pytest.raises(ForestError):
        parse_forest("z", d=2)  # unknown letter for alphabet size 2


def test_b_plus_decompose_inverse():
    f = parse_forest("b c")
    t = b_plus(0, f)
    assert str(t) == "a[b,c]"
    head, a, tail = decompose(t.as_forest())
    assert head == EMPTY_FOREST and a == 0 and str(tail) == "b c"
    assert b_plus(0, EMPTY_FOREST).degree == 1


@pytest.mark.parametrize("n,d,count", [(3, 1, 5), (4, 1, 14), (2, 2, 8)])
def test_enumeration_counts(n, d, count):
    assert len(enumerate_forests(n, d)) == count


def test_catalan_counts_to_ten():
    expected = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
    for n in range(0, 11):
        assert catalan(n) == expected[n]
    for n in range(0, 9):
        assert len(enumerate_forests(n, 1)) == expected[n]
    # the n=9,10 counts come from the shape recursion used by enumeration
    from roughforest.forests import _forest_shapes

    assert len(_forest_shapes(9)) == 4862
    assert len(_forest_shapes(10)) == 16796


def test_degree_cap_enforced():
    with pytest.raises(ResourceCapError):
        enumerate_forests(11, 1)
    assert enumerate_forests(3, 1, cap=2, force=True)


def test_grammar_roundtrip_exhaustive():
    for n in range(0, 7):
        for f in enumerate_forests(n, 1):
            assert parse_forest(render_forest(f)) == f
    for n in range(0, 5):
        for f in enumerate_forests(n, 2):
            assert parse_forest(render_forest(f)) == f


def test_order_relations_cherry():
    pv = order_relations(parse_forest("a[b,c]"))
    # <<<-ranks: 0 = root a, 1 = right child c, 2 = left child b
    assert [chr(97 + l) for l in pv.letters] == ["a", "c", "b"]
    assert pv.ll[0] == frozenset({1, 2})
    assert pv.ll[1] == frozenset({2})
    assert linear_extensions(pv, "<<") == 1
    assert linear_extensions(pv, "<") == 2


def test_order_relations_two_roots():
    pv = order_relations(parse_forest("j i"))
    # rightmost root (i) is <<-least
    assert [chr(97 + l) for l in pv.letters] == ["i", "j"]
    assert pv.ll[0] == frozenset({1})


def test_order_relations_paper_forest():
    pv = order_relations(parse_forest("c a[b]"))
    # a << b, a << c, b and c incomparable
    names = [chr(97 + l) for l in pv.letters]
    assert names == ["a", "b", "c"]
    assert pv.ll[0] == frozenset({1, 2})
    assert pv.ll[1] == frozenset()
    assert pv.ll[2] == frozenset()
    assert linear_extensions(pv, "<<") == 2


def test_posetview_json():
    blob = order_relations(parse_forest("i[j]")).to_json_dict()
    assert blob["vertices"] == [
        {"rank": 0, "letter": "i"},
        {"rank": 1, "letter": "j"},
    ]
    assert blob["lt"] == [[0, 1]]
    assert blob["ll"] == [[0, 1]]
    json.dumps(blob)


def test_linear_extension_iterator_matches_count():
    for text in ("a[b,c]", "c a[b]", "a[b[c],d] e"):
        pv = order_relations(parse_forest(text))
        for rel in ("<", "<<"):
            exts = list(iter_linear_extensions(pv, rel))
            assert len(exts) == linear_extensions(pv, rel)
            assert len(set(exts)) == len(exts)
    assert linear_extensions(order_relations(EMPTY_FOREST), "<<") == 1


@pytest.mark.parametrize(
    "text,value",
    [("a", 1), ("a[b,c]", 6), ("a b", 2), ("a[b] c", 6), ("c a[b]", 3)],
)
def test_planar_factorial_examples(text, value):
    assert planar_factorial(parse_forest(text)) == value


def test_factorial_oracles_to_degree_seven():
    for n in range(0, 8):
        for f in enumerate_forests(n, 1, force=True):
            assert planar_factorial(f) == planar_factorial_via_extensions(f)
            nf = forget_planarity(f)
            assert nonplanar_factorial(nf) == nonplanar_factorial_via_extensions(nf)
            # rec-fac-one consistency
            if not f.is_empty():
                head, _, tail = decompose(f)
                assert (
                    planar_factorial(f)
                    == f.degree * planar_factorial(head) * planar_factorial(tail)
                )


def test_nonplanar_factorial_examples():
    assert nonplanar_factorial(forget_planarity(parse_forest("a[b,c]"))) == 3
    assert nonplanar_factorial(forget_planarity(parse_forest("a[b[c[d]]]"))) == 24
    assert nonplanar_factorial(forget_planarity(parse_forest("a b"))) == 1


def _brute_symmetry(f):
    """Count sibling orderings of the non-planar forest mapping to f."""
    target = f
    nf = forget_planarity(f)

    def orderings(trees):
        for perm in itertools.permutations(range(len(trees))):
            for kids in itertools.product(
                *(orderings(trees[i].children) for i in perm)
            ):
                yield tuple(
                    type(f.trees[0])(trees[i].root, kids[slot])
                    for slot, i in enumerate(perm)
                )

    rep = nf.planar_representative()
    count = 0
    for trees in orderings(rep.trees):
        if type(f)(trees) == target:
            count += 1
    return count


@pytest.mark.parametrize("text,value", [("a[b,b]", 2), ("a[b,c]", 1), ("a a", 2)])
def test_symmetry_factor_examples(text, value):
    assert symmetry_factor(parse_forest(text)) == value


def test_symmetry_factor_brute_force():
    for n in range(1, 6):
        for f in enumerate_forests(n, 2)[::7]:
            assert symmetry_factor(f) == _brute_symmetry(f)


def test_planar_representative_identity():
    seen = set()
    for n in range(1, 7):
        for f in enumerate_forests(n, 1):
            nf = forget_planarity(f)
            if nf in seen:
                continue
            seen.add(nf)
            total = sum(
                Fraction(symmetry_factor(r), planar_factorial(r))
                for r in planar_representatives(nf)
            )
            assert total == Fraction(1, nonplanar_factorial(nf))


def test_forget_planarity_semantics():
    assert forget_planarity(parse_forest("a[b,c]")) == forget_planarity(
        parse_forest("a[c,b]")
    )
    assert forget_planarity(parse_forest("a b")) == forget_planarity(
        parse_forest("b a")
    )
    ladder = parse_forest("i[j[k]]")
    assert forget_planarity(ladder).planar_representative() == ladder


def test_monte_carlo_volume_examples():
    est, se = monte_carlo_volume(parse_forest("a[b,c]"), "<<", 1_000_000, seed=1)
    assert abs(est - 1.0 / 6.0) <= 3.0 * se
    est, se = monte_carlo_volume(
        forget_planarity(parse_forest("a[b,c]")), "<", 1_000_000, seed=2
    )
    assert abs(est - 1.0 / 3.0) <= 3.0 * se
    est, se = monte_carlo_volume(parse_forest("a"), "<<", 10, seed=3)
    assert est == 1.0 and se == 0.0
    with pytest.raises(ForestError):
        monte_carlo_volume(parse_forest("a"), "<<", 0)
