"""Planar decorated rooted forests: grammar, orders, factorials, enumeration.

Conventions used throughout the package:

* A forest is an ordered (left-to-right) sequence of planar trees; the text
  grammar is ``letter`` or ``letter[child,child,...]`` per tree, trees joined
  by single spaces, children left-to-right in planar order.
* Vertices are addressed by their rank in the total exploration order <<<,
  which walks the forest from the *rightmost* root, each tree depth-first
  with children visited right-to-left.
* Partial orders on the vertex set: ``<`` is the forest (ancestor) order,
  roots minimal; ``<<`` refines it by ordering siblings right-before-left and
  roots right-before-left (the rightmost root is the unique <<-minimum of its
  tree-suffix); ``<<<`` is the total exploration order.  As relations,
  ``<``  is contained in ``<<`` is contained in ``<<<``.
* Factorials: the planar factorial uses <<, the non-planar one uses <; both
  equal |V|! divided by the number of linear extensions of the order.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .algebra import Letter, check_letter, render_letter

DEFAULT_DEGREE_CAP = int(os.environ.get("ROUGHFOREST_MAX_DEGREE", "10"))


class ForestError(ValueError):
    pass


class ResourceCapError(ForestError):
    """Raised when an enumeration would exceed the configured degree cap."""


class PlanarTree:
    __slots__ = ("root", "children", "degree", "_str", "_hash")

    def __init__(self, root: Letter, children: Sequence["PlanarTree"] = ()):
        self.root = root
        self.children = tuple(children)
        self.degree = 1 + sum(c.degree for c in self.children)
        if self.children:
            self._str = (
                render_letter(root)
                + "["
                + ",".join(c._str for c in self.children)
                + "]"
            )
        else:
            self._str = render_letter(root)
        self._hash = hash(("PT", root, self.children))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlanarTree)
            and self._hash == other._hash
            and self.root == other.root
            and self.children == other.children
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._str

    def __repr__(self) -> str:
        return f"PlanarTree({self._str})"

    def as_forest(self) -> "PlanarForest":
        return PlanarForest((self,))


class PlanarForest:
    __slots__ = ("trees", "degree", "_str", "_hash")

    def __init__(self, trees: Sequence[PlanarTree] = ()):
        self.trees = tuple(trees)
        self.degree = sum(t.degree for t in self.trees)
        self._str = " ".join(t._str for t in self.trees) if self.trees else "1"
        self._hash = hash(("PF", self.trees))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PlanarForest)
            and self._hash == other._hash
            and self.trees == other.trees
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._str

    def __repr__(self) -> str:
        return f"PlanarForest({self._str})"

    def __mul__(self, other: "PlanarForest") -> "PlanarForest":
        return PlanarForest(self.trees + other.trees)

    def is_empty(self) -> bool:
        return not self.trees

    def is_tree(self) -> bool:
        return len(self.trees) == 1


EMPTY_FOREST = PlanarForest()


def b_plus(a: Letter, forest: PlanarForest) -> PlanarTree:
    """Graft the trees of `forest` (in order) onto a new common root `a`."""
    return PlanarTree(a, forest.trees)


def decompose(forest: PlanarForest) -> tuple[PlanarForest, Letter, PlanarForest]:
    """Split f = f' x_a f'': all trees but the last, its root, its children."""
    if forest.is_empty():
        raise ForestError("cannot decompose the empty forest")
    last = forest.trees[-1]
    return PlanarForest(forest.trees[:-1]), last.root, PlanarForest(last.children)


# --- grammar ---------------------------------------------------------------


def parse_forest(text: str, d: int = 26) -> PlanarForest:
    """Parse the forest grammar; raises ForestError with a position on errors."""
    pos = 0
    n = len(text)

    def skip_spaces():
        nonlocal pos
        while pos < n and text[pos] == " ":
            pos += 1

    def parse_tree() -> PlanarTree:
        nonlocal pos
        if pos >= n:
            raise ForestError(f"unexpected end of input at position {pos}")
        c = text[pos]
        if not ("a" <= c <= "z"):
            raise ForestError(f"expected letter at position {pos}, got {c!r}")
        letter = ord(c) - ord("a")
        try:
            check_letter(letter, d)
        except Exception:
            raise ForestError(f"unknown letter {c!r} at position {pos}") from None
        pos += 1
        children: list[PlanarTree] = []
        if pos < n and text[pos] == "[":
            pos += 1
            if pos < n and text[pos] == "]":
                raise ForestError(f"empty bracket at position {pos}")
            while True:
                children.append(parse_tree())
                if pos >= n:
                    raise ForestError(f"unbalanced '[' at position {pos}")
                if text[pos] == ",":
                    pos += 1
                    continue
                if text[pos] == "]":
                    pos += 1
                    break
                raise ForestError(f"expected ',' or ']' at position {pos}")
        return PlanarTree(letter, children)

    trees: list[PlanarTree] = []
    skip_spaces()
    if pos < n and text[pos] == "1" and text.strip() == "1":
        return EMPTY_FOREST
    while pos < n:
        trees.append(parse_tree())
        if pos < n:
            if text[pos] != " ":
                raise ForestError(f"expected space between trees at position {pos}")
            skip_spaces()
    if not trees:
        raise ForestError("empty input (use '1' for the unit forest)")
    return PlanarForest(trees)


def render_forest(forest: PlanarForest) -> str:
    return str(forest)


def forest(text: str, d: int = 26) -> PlanarForest:
    return parse_forest(text, d)


# --- enumeration -----------------------------------------------------------


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


@lru_cache(maxsize=None)
def _tree_shapes(n: int) -> tuple:
    """All planar tree shapes with n vertices (decoration-free, letter 0)."""
    if n == 1:
        return (PlanarTree(0),)
    shapes = []
    for f in _forest_shapes(n - 1):
        shapes.append(PlanarTree(0, f.trees))
    return tuple(shapes)


@lru_cache(maxsize=None)
def _forest_shapes(n: int) -> tuple:
    """All planar forest shapes with n vertices."""
    if n == 0:
        return (EMPTY_FOREST,)
    out = []
    for k in range(1, n + 1):  # size of the first tree
        for t in _tree_shapes(k):
            for rest in _forest_shapes(n - k):
                out.append(PlanarForest((t,) + rest.trees))
    return tuple(out)


def _decorate(shape: PlanarForest, letters: Sequence[int]) -> PlanarForest:
    """Assign letters to vertices of a shape in <<<-rank order."""
    it = iter(letters)

    def deco_tree(t: PlanarTree) -> PlanarTree:
        # <<< visits the root first, then children right-to-left
        root_letter = next(it)
        rev_children = [deco_tree(c) for c in reversed(t.children)]
        return PlanarTree(root_letter, tuple(reversed(rev_children)))

    trees_rl = [deco_tree(t) for t in reversed(shape.trees)]
    return PlanarForest(tuple(reversed(trees_rl)))


def enumerate_forests(
    n: int, d: int, cap: int = DEFAULT_DEGREE_CAP, force: bool = False
) -> list[PlanarForest]:
    """All A-decorated planar forests of degree n, sorted by grammar string."""
    if n < 0:
        raise ForestError("degree must be >= 0")
    if n > cap and not force:
        raise ResourceCapError(
            f"degree {n} exceeds cap {cap} (Catalan(n)*d^n blowup); pass force=True"
        )
    out = []
    for shape in _forest_shapes(n):
        for letters in itertools.product(range(d), repeat=n):
            out.append(_decorate(shape, letters))
    out.sort(key=str)
    return out


def enumerate_trees(n: int, d: int, cap: int = DEFAULT_DEGREE_CAP) -> list[PlanarTree]:
    return [f.trees[0] for f in enumerate_forests(n, d, cap) if f.is_tree()]


# --- vertex orders ----------------------------------------------------------


class PosetView:
    """The three vertex orders of a forest, indexed by <<<-rank.

    `lt` / `ll` are tuples of frozensets: `lt[v]` is the set of vertices
    strictly above v in the ancestor order `<` (i.e. v < w), `ll[v]` the same
    for `<<`.  The <<<-order is the index order itself.
    """

    __slots__ = ("letters", "lt", "ll")

    def __init__(self, letters, lt, ll):
        self.letters = letters
        self.lt = lt
        self.ll = ll

    @property
    def size(self) -> int:
        return len(self.letters)

    def relation(self, name: str):
        if name == "<":
            return self.lt
        if name == "<<":
            return self.ll
        raise ForestError(f"unknown relation {name!r} (use '<' or '<<')")

    def to_json_dict(self) -> dict:
        return {
            "vertices": [
                {"rank": i, "letter": render_letter(a)}
                for i, a in enumerate(self.letters)
            ],
            "lt": sorted([i, j] for i in range(self.size) for j in self.lt[i]),
            "ll": sorted([i, j] for i in range(self.size) for j in self.ll[i]),
        }


def _explore(forest: PlanarForest):
    """<<<-ranked vertices: (letter, parent_rank, child ranks right-to-left)."""
    letters: list[Letter] = []
    parents: list[int | None] = []
    children_of: list[list[int]] = []

    def walk(t: PlanarTree, parent: int | None) -> int:
        rank = len(letters)
        letters.append(t.root)
        parents.append(parent)
        children_of.append([])
        if parent is not None:
            children_of[parent].append(rank)
        for c in reversed(t.children):
            walk(c, rank)
        return rank

    roots = [walk(t, None) for t in reversed(forest.trees)]
    return letters, parents, children_of, roots


def order_relations(f: PlanarForest) -> PosetView:
    n = f.degree
    letters, parents, children_of, roots = _explore(f)

    above_lt: list[set[int]] = [set() for _ in range(n)]  # v < w
    for w in range(n):
        p = parents[w]
        while p is not None:
            above_lt[p].add(w)
            p = parents[p]

    # << = transitive closure of: ancestor order; right sibling before left
    # sibling; right root before left root.  children_of holds children in
    # right-to-left planar order, roots likewise, so "earlier in the list"
    # means "further right".
    succ: list[set[int]] = [set(above_lt[v]) for v in range(n)]
    for kids in children_of + [roots]:
        for i, right in enumerate(kids):
            for left in kids[i + 1 :]:
                succ[right].add(left)
    # Warshall-style closure (n <= degree cap, tiny)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            add = set()
            for w in succ[v]:
                add |= succ[w] - succ[v]
            if add:
                succ[v] |= add
                changed = True

    lt = tuple(frozenset(s) for s in above_lt)
    ll = tuple(frozenset(s) for s in succ)
    for v in range(n):
        if not lt[v] <= ll[v]:
            raise AssertionError("order containment < in << violated")
        if not ll[v] <= frozenset(range(v + 1, n)):
            raise AssertionError("<< not contained in <<<")
    return PosetView(tuple(letters), lt, ll)


# --- linear extensions ------------------------------------------------------


def _below_sets(above: Sequence[frozenset[int]]) -> list[frozenset[int]]:
    n = len(above)
    below: list[set[int]] = [set() for _ in range(n)]
    for v in range(n):
        for w in above[v]:
            below[w].add(v)
    return [frozenset(b) for b in below]


def iter_linear_extensions(
    poset: PosetView, relation: str = "<<"
) -> Iterator[tuple[int, ...]]:
    """Yield the total orders extending the relation, as rank sequences."""
    above = poset.relation(relation)
    below = _below_sets(above)
    n = poset.size

    def rec(placed: list[int], remaining: set[int]):
        if not remaining:
            yield tuple(placed)
            return
        placed_set = set(placed)
        for v in sorted(remaining):
            if below[v] <= placed_set:
                placed.append(v)
                remaining.remove(v)
                yield from rec(placed, remaining)
                remaining.add(v)
                placed.pop()

    yield from rec([], set(range(n)))


def linear_extensions(poset: PosetView, relation: str = "<<") -> int:
    """Count of linear extensions (memoized over down-set states)."""
    above = poset.relation(relation)
    below = _below_sets(above)
    n = poset.size

    @lru_cache(maxsize=None)
    def count(remaining: frozenset[int]) -> int:
        if not remaining:
            return 1
        placed = frozenset(range(n)) - remaining
        total = 0
        for v in remaining:
            if below[v] <= placed:
                total += count(remaining - {v})
        return total

    return count(frozenset(range(n)))


# --- factorials -------------------------------------------------------------


@lru_cache(maxsize=None)
def planar_factorial(f: PlanarForest) -> int:
    """Planar forest factorial via |sigma|! = |sigma| * sigma'! * sigma''!."""
    if f.is_empty():
        return 1
    head, _, tail = decompose(f)
    return f.degree * planar_factorial(head) * planar_factorial(tail)


def planar_factorial_via_extensions(f: PlanarForest) -> Fraction:
    """Independent oracle: |f|! / #extensions(<<)."""
    if f.is_empty():
        return Fraction(1)
    return Fraction(
        math.factorial(f.degree), linear_extensions(order_relations(f), "<<")
    )


class NonplanarTree:
    __slots__ = ("root", "children", "degree", "_key", "_str", "_hash")

    def __init__(self, root: Letter, children: Sequence["NonplanarTree"] = ()):
        kids = tuple(sorted(children, key=lambda c: c._key))
        self.root = root
        self.children = kids
        self.degree = 1 + sum(c.degree for c in kids)
        self._key = (render_letter(root), tuple(c._key for c in kids))
        if kids:
            self._str = (
                render_letter(root) + "[" + ",".join(c._str for c in kids) + "]"
            )
        else:
            self._str = render_letter(root)
        self._hash = hash(("NT", self._key))

    def __eq__(self, other) -> bool:
        return isinstance(other, NonplanarTree) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._str


class NonplanarForest:
    """Decorated rooted forest up to isomorphism: a sorted multiset of trees."""

    __slots__ = ("trees", "degree", "_str", "_hash")

    def __init__(self, trees: Sequence[NonplanarTree] = ()):
        kids = tuple(sorted(trees, key=lambda c: c._key))
        self.trees = kids
        self.degree = sum(t.degree for t in kids)
        self._str = " ".join(t._str for t in kids) if kids else "1"
        self._hash = hash(("NF", tuple(t._key for t in kids)))

    def __eq__(self, other) -> bool:
        return isinstance(other, NonplanarForest) and self.trees == other.trees

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._str

    def __repr__(self) -> str:
        return f"NonplanarForest({self._str})"

    def __mul__(self, other: "NonplanarForest") -> "NonplanarForest":
        return NonplanarForest(self.trees + other.trees)

    def is_empty(self) -> bool:
        return not self.trees

    def planar_representative(self) -> PlanarForest:
        """The canonical planar embedding (children in canonical sort order)."""

        def rep(t: NonplanarTree) -> PlanarTree:
            return PlanarTree(t.root, tuple(rep(c) for c in t.children))

        return PlanarForest(tuple(rep(t) for t in self.trees))


EMPTY_NONPLANAR = NonplanarForest()


def forget_planarity(f: PlanarForest) -> NonplanarForest:
    def conv(t: PlanarTree) -> NonplanarTree:
        return NonplanarTree(t.root, tuple(conv(c) for c in t.children))

    return NonplanarForest(tuple(conv(t) for t in f.trees))


def parse_nonplanar(text: str, d: int = 26) -> NonplanarForest:
    return forget_planarity(parse_forest(text, d))


@lru_cache(maxsize=None)
def nonplanar_factorial(f: NonplanarForest) -> int:
    """Forest factorial = product over vertices of their subtree sizes."""

    def hooks(t: NonplanarTree) -> int:
        h = t.degree
        for c in t.children:
            h *= hooks(c)
        return h

    out = 1
    for t in f.trees:
        out *= hooks(t)
    return out


def nonplanar_factorial_via_extensions(f: NonplanarForest) -> Fraction:
    """Independent oracle: |f|! / #extensions(<)."""
    if f.is_empty():
        return Fraction(1)
    rep = f.planar_representative()
    return Fraction(
        math.factorial(f.degree), linear_extensions(order_relations(rep), "<")
    )


@lru_cache(maxsize=None)
def symmetry_factor(f: PlanarForest) -> int:
    """Number of sibling orderings of the non-planar forest collapsing to f.

    Product over vertices of m! for each multiplicity m of equal planar child
    subtrees; root level included.
    """

    def multiplicities(kids: tuple[PlanarTree, ...]) -> int:
        counts: dict[PlanarTree, int] = {}
        for c in kids:
            counts[c] = counts.get(c, 0) + 1
        out = 1
        for m in counts.values():
            out *= math.factorial(m)
        return out

    def sym_tree(t: PlanarTree) -> int:
        out = multiplicities(t.children)
        for c in t.children:
            out *= sym_tree(c)
        return out

    out = multiplicities(f.trees)
    for t in f.trees:
        out *= sym_tree(t)
    return out


def planar_representatives(f: NonplanarForest) -> list[PlanarForest]:
    """All distinct planar forests whose planarity-forgetting map hits f."""

    def reps_tree(t: NonplanarTree) -> list[PlanarTree]:
        child_reps = [reps_tree(c) for c in t.children]
        out = set()
        for perm in itertools.permutations(range(len(t.children))):
            for choice in itertools.product(*(child_reps[i] for i in perm)):
                out.add(PlanarTree(t.root, choice))
        return sorted(out, key=str)

    tree_reps = [reps_tree(t) for t in f.trees]
    out = set()
    for perm in itertools.permutations(range(len(f.trees))):
        for choice in itertools.product(*(tree_reps[i] for i in perm)):
            out.add(PlanarForest(choice))
    return sorted(out, key=str)


# --- Monte-Carlo volumes ----------------------------------------------------


def monte_carlo_volume(
    f: PlanarForest | NonplanarForest,
    relation: str = "<<",
    samples: int = 100_000,
    seed: int = 0,
) -> tuple[float, float]:
    """Estimate the order-polytope volume {t_v >= t_w for v rel w} in [0,1]^n.

    Returns (estimate, standard error); unbiased for 1/factorial of the
    corresponding order.
    """
    if samples < 1:
        raise ForestError("samples must be >= 1")
    if isinstance(f, NonplanarForest):
        poset = order_relations(f.planar_representative())
        if relation == "<<":
            relation = "<"
    else:
        poset = order_relations(f)
    n = poset.size
    if n == 0:
        return 1.0, 0.0
    above = poset.relation(relation)
    pairs = [(v, w) for v in range(n) for w in above[v]]
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 200_000
    remaining = samples
    while remaining > 0:
        m = min(chunk, remaining)
        pts = rng.random((m, n))
        ok = np.ones(m, dtype=bool)
        for v, w in pairs:
            ok &= pts[:, v] >= pts[:, w]
        hits += int(ok.sum())
        remaining -= m
    p = hits / samples
    stderr = math.sqrt(max(p * (1.0 - p), 1e-300) / samples)
    return p, stderr
