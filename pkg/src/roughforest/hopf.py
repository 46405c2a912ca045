"""The four Hopf algebras: shuffle, quasi-shuffle, BCK and MKW.

Each is packaged as a `HopfStructure` (product, coproduct, unit, basis
enumerator) over `GradedSeries`.  The Grossman-Larson product on planar
forest series is provided both through duality with the MKW coproduct and
through the D-algebra recursion; the two are required to agree and the test
suite enforces it.

Orientation conventions (load-bearing, see also `morphisms`):

* The MKW coproduct puts the <<-down-set in the *right* tensor slot; the
  left slot carries the shuffle product of the connected components of the
  complement under the restricted <<.
* The rightmost root is <<-minimal; with this choice the coproduct is dual
  to the Grossman-Larson product with its factors in the written order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
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
    EMPTY_FOREST,
    EMPTY_NONPLANAR,
    NonplanarForest,
    PlanarForest,
    PlanarTree,
    _explore,
    enumerate_forests,
    forget_planarity,
    order_relations,
)


class HopfError(ValueError):
    pass


# --- shuffle-type products ---------------------------------------------------


@lru_cache(maxsize=None)
def _shuffle_seq(xs: tuple, ys: tuple) -> tuple:
    """Interleavings of two sequences with multiplicities, as (seq, mult)."""
    if not xs:
        return ((ys, 1),)
    if not ys:
        return ((xs, 1),)
    out: dict[tuple, int] = {}
    for seq, m in _shuffle_seq(xs[1:], ys):
        key = (xs[0],) + seq
        out[key] = out.get(key, 0) + m
    for seq, m in _shuffle_seq(xs, ys[1:]):
        key = (ys[0],) + seq
        out[key] = out.get(key, 0) + m
    return tuple(out.items())


def shuffle(v: Word, w: Word) -> GradedSeries:
    out = GradedSeries()
    for seq, m in _shuffle_seq(v.letters, w.letters):
        out = out.add_term(Word(seq), m)
    return out


def quasi_shuffle(v: Word, w: Word, semigroup: Semigroup | None = None) -> GradedSeries:
    """Shuffle with contraction terms [a+b] from the semigroup sum."""
    sg = semigroup or FreeSemigroup()

    def rec(a: tuple, b: tuple) -> dict[tuple, int]:
        if not a:
            return {b: 1}
        if not b:
            return {a: 1}
        out: dict[tuple, int] = {}
        for seq, m in rec(a[1:], b).items():
            key = (a[0],) + seq
            out[key] = out.get(key, 0) + m
        for seq, m in rec(a, b[1:]).items():
            key = (b[0],) + seq
            out[key] = out.get(key, 0) + m
        merged = sg.add(a[0], b[0])
        for seq, m in rec(a[1:], b[1:]).items():
            key = (merged,) + seq
            out[key] = out.get(key, 0) + m
        return out

    out = GradedSeries()
    for seq, m in rec(v.letters, w.letters).items():
        out = out.add_term(Word(seq), m)
    return out


def deconcat(w: Word) -> TensorSeries:
    out = TensorSeries()
    for k in range(len(w) + 1):
        out = out + TensorSeries.term(Word(w.letters[:k]), Word(w.letters[k:]))
    return out


# --- planar forest structure helpers -----------------------------------------


def _nodes(f: PlanarForest):
    """(letters, children ranks left-to-right, root ranks left-to-right),
    all indexed by <<<-rank."""
    letters, _parents, children_rl, roots_rl = _explore(f)
    children_lr = [list(reversed(ch)) for ch in children_rl]
    roots_lr = list(reversed(roots_rl))
    return letters, children_lr, roots_lr


def _rebuild(letters, children_lr, roots_lr) -> PlanarForest:
    def build(v: int) -> PlanarTree:
        return PlanarTree(letters[v], tuple(build(c) for c in children_lr[v]))

    return PlanarForest(tuple(build(r) for r in roots_lr))


def induced_subforest(f: PlanarForest, keep: frozenset[int]) -> PlanarForest:
    """Planar forest induced on a set of <<<-ranks; orphaned subtrees bubble
    up to the closest kept ancestor, preserving left-to-right order."""
    letters, children_lr, roots_lr = _nodes(f)

    def collect(v: int) -> list[PlanarTree]:
        kids: list[PlanarTree] = []
        for c in children_lr[v]:
            kids.extend(collect(c))
        if v in keep:
            return [PlanarTree(letters[v], tuple(kids))]
        return kids

    trees: list[PlanarTree] = []
    for r in roots_lr:
        trees.extend(collect(r))
    return PlanarForest(tuple(trees))


def mkw_product(f: PlanarForest, g: PlanarForest) -> GradedSeries:
    """Shuffle product of forests, the trees acting as letters."""
    out = GradedSeries()
    for seq, m in _shuffle_seq(f.trees, g.trees):
        out = out.add_term(PlanarForest(seq), m)
    return out


def _mkw_product_series(u: GradedSeries, v: GradedSeries) -> GradedSeries:
    out = GradedSeries()
    for x, cx in u.coeffs.items():
        for y, cy in v.coeffs.items():
            out = out + mkw_product(x, y).scale(cx * cy)
    return out


def _downsets(below: list[frozenset[int]]) -> list[frozenset[int]]:
    n = len(below)
    out = []
    for mask in range(1 << n):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        if all(below[v] <= s for v in s):
            out.append(s)
    return out


@lru_cache(maxsize=None)
def mkw_coproduct(f: PlanarForest) -> TensorSeries:
    """Left-admissible-cut coproduct: sum over <<-down-sets V'' of
    (shuffle of components of V' under <<|_{V'}) tensor (induced forest on V'')."""
    if f.is_empty():
        return TensorSeries.term(EMPTY_FOREST, EMPTY_FOREST)
    poset = order_relations(f)
    n = poset.size
    below = [
        frozenset(w for w in range(n) if v in poset.ll[w]) for v in range(n)
    ]
    out = TensorSeries()
    for down in _downsets(below):
        right = induced_subforest(f, down)
        rest = [v for v in range(n) if v not in down]
        # connected components of the comparability graph of <<|_{V'}
        comps: list[set[int]] = []
        unseen = set(rest)
        while unseen:
            v = unseen.pop()
            comp = {v}
            frontier = [v]
            while frontier:
                x = frontier.pop()
                for y in list(unseen):
                    if y in poset.ll[x] or x in poset.ll[y]:
                        unseen.remove(y)
                        comp.add(y)
                        frontier.append(y)
            comps.append(comp)
        left = GradedSeries.term(EMPTY_FOREST)
        for comp in sorted(comps, key=min):
            left = _mkw_product_series(
                left, GradedSeries.term(induced_subforest(f, frozenset(comp)))
            )
        for x, c in left.coeffs.items():
            out = out + TensorSeries.term(x, right, c)
    return out


# --- BCK ---------------------------------------------------------------------


def bck_product(f: NonplanarForest, g: NonplanarForest) -> GradedSeries:
    """Commutative product: disjoint union of forests (multiset merge)."""
    return GradedSeries.term(f * g)


@lru_cache(maxsize=None)
def bck_coproduct(f: NonplanarForest) -> TensorSeries:
    """Admissible cuts: sum over <-down-sets, pruned part left, trunk right."""
    if f.is_empty():
        return TensorSeries.term(EMPTY_NONPLANAR, EMPTY_NONPLANAR)
    rep = f.planar_representative()
    poset = order_relations(rep)
    n = poset.size
    below = [
        frozenset(w for w in range(n) if v in poset.lt[w]) for v in range(n)
    ]
    out = TensorSeries()
    for down in _downsets(below):
        trunk = forget_planarity(induced_subforest(rep, down))
        pruned = forget_planarity(
            induced_subforest(rep, frozenset(range(n)) - down)
        )
        out = out + TensorSeries.term(pruned, trunk)
    return out


# --- grafting and the Grossman-Larson product --------------------------------


def graft_at(sigma: PlanarTree, tau: PlanarForest, v: int) -> PlanarForest:
    """Graft sigma as the new leftmost branch at <<<-rank v of tau."""
    letters, children_lr, roots_lr = _nodes(tau)

    def build(r: int) -> PlanarTree:
        kids = tuple(build(c) for c in children_lr[r])
        if r == v:
            kids = (sigma,) + kids
        return PlanarTree(letters[r], kids)

    return PlanarForest(tuple(build(r) for r in roots_lr))


def left_graft(sigma: PlanarTree, tau: PlanarForest) -> GradedSeries:
    """sigma |> tau = sum over vertices of tau of leftmost grafting."""
    out = GradedSeries()
    for v in range(tau.degree):
        out = out.add_term(graft_at(sigma, tau, v), 1)
    return out


@lru_cache(maxsize=None)
def _forest_rhd(u: PlanarForest, v: PlanarForest) -> GradedSeries:
    """u |> v for forests, via (tau.w) |> v = tau |> (w |> v) - (tau |> w) |> v."""
    if u.is_empty():
        return GradedSeries.term(v)
    if u.is_tree():
        return left_graft(u.trees[0], v)
    tau = PlanarForest(u.trees[:1])
    w = PlanarForest(u.trees[1:])
    first = _series_rhd(GradedSeries.term(tau), _forest_rhd(w, v))
    second = _series_rhd(_forest_rhd(tau, w), GradedSeries.term(v))
    return first - second


def _series_rhd(u: GradedSeries, v: GradedSeries) -> GradedSeries:
    out = GradedSeries()
    for x, cx in u.coeffs.items():
        for y, cy in v.coeffs.items():
            out = out + _forest_rhd(x, y).scale(cx * cy)
    return out


@lru_cache(maxsize=None)
def _gl_basis(x: PlanarForest, y: PlanarForest) -> GradedSeries:
    """x * y = sum over subsequence splits x_S . (x_{S^c} |> y)."""
    k = len(x.trees)
    out = GradedSeries()
    for mask in range(1 << k):
        left = tuple(x.trees[i] for i in range(k) if mask >> i & 1)
        rest = tuple(x.trees[i] for i in range(k) if not mask >> i & 1)
        grafted = _forest_rhd(PlanarForest(rest), y)
        for rho, c in grafted.coeffs.items():
            out = out.add_term(PlanarForest(left + rho.trees), c)
    return out


def gl_product(
    u: GradedSeries | PlanarForest,
    v: GradedSeries | PlanarForest,
    via: str = "recursion",
    d: int | None = None,
) -> GradedSeries:
    """Grossman-Larson product of planar forest series.

    `via="recursion"` uses the D-algebra expansion; `via="duality"` reads the
    structure constants off the MKW coproduct (requires the alphabet size to
    enumerate candidate forests).  Both must agree.
    """
    if isinstance(u, PlanarForest):
        u = GradedSeries.term(u)
    if isinstance(v, PlanarForest):
        v = GradedSeries.term(v)
    if via == "recursion":
        out = GradedSeries()
        for x, cx in u.coeffs.items():
            for y, cy in v.coeffs.items():
                out = out + _gl_basis(x, y).scale(cx * cy)
        return out
    if via == "duality":
        if d is None:
            d = _infer_alphabet(u, v)
        out = GradedSeries()
        degrees = {
            x.degree + y.degree for x in u.coeffs for y in v.coeffs
        }
        for n in degrees:
            for rho in enumerate_forests(n, d):
                coeff = Fraction(0)
                for (l, r), c in mkw_coproduct(rho).coeffs.items():
                    cl = u.coeff(l)
                    if cl:
                        cr = v.coeff(r)
                        if cr:
                            coeff += c * cl * cr
                if coeff:
                    out = out.add_term(rho, coeff)
        return out
    raise HopfError(f"unknown gl_product mode {via!r}")


def _infer_alphabet(*series: GradedSeries) -> int:
    top = 0
    for s in series:
        for f in s.coeffs:
            letters, _, _ = _nodes(f)
            for a in letters:
                idx = a if isinstance(a, int) else max(a)
                top = max(top, idx + 1)
    return max(top, 1)


def iterated_gl_word(w: Word) -> GradedSeries:
    """The product .(i_n) * ... * .(i_1) for w = a(i_1)...a(i_n).

    Expands into n! terms counted with multiplicity; the forest sigma appears
    once for each <<-linear extension whose rank-j vertex carries a(i_j).
    """
    if len(w) == 0:
        return GradedSeries.term(EMPTY_FOREST)
    singles = [PlanarForest((PlanarTree(a),)) for a in w.letters]
    acc = GradedSeries.term(singles[-1])
    for j in range(len(singles) - 2, -1, -1):
        acc = gl_product(acc, GradedSeries.term(singles[j]))
    return acc


# --- Hopf structure wrapper ---------------------------------------------------


@dataclass
class HopfStructure:
    """A combinatorial Hopf algebra: product/coproduct on a graded basis."""

    name: str
    d: int
    unit: object
    product: Callable[[object, object], GradedSeries]
    coproduct: Callable[[object], TensorSeries]
    basis: Callable[[int], list]
    is_commutative: bool = True
    parse: Callable[[str], object] | None = None
    _antipode_memo: dict = field(default_factory=dict, repr=False)

    def counit(self, x) -> Fraction:
        return Fraction(1) if x == self.unit else Fraction(0)

    def counit_functional(self, cap: int = 10**9) -> LinearFunctional:
        return LinearFunctional(self.counit, cap, name=f"counit[{self.name}]")

    def reduced_coproduct(self, x) -> TensorSeries:
        out = self.coproduct(x)
        if x == self.unit:
            return TensorSeries()
        return (
            out
            - TensorSeries.term(x, self.unit)
            - TensorSeries.term(self.unit, x)
        )

    def product_series(self, u: GradedSeries, v: GradedSeries) -> GradedSeries:
        out = GradedSeries()
        for x, cx in u.coeffs.items():
            for y, cy in v.coeffs.items():
                out = out + self.product(x, y).scale(cx * cy)
        return out

    def coproduct_series(self, u: GradedSeries) -> TensorSeries:
        out = TensorSeries()
        for x, cx in u.coeffs.items():
            out = out + self.coproduct(x).scale(cx)
        return out


def shuffle_hopf(d: int) -> HopfStructure:
    def basis(n: int) -> list[Word]:
        import itertools

        return sorted(
            (Word(t) for t in itertools.product(range(d), repeat=n)), key=str
        )

    return HopfStructure(
        name="shuffle",
        d=d,
        unit=Word(),
        product=shuffle,
        coproduct=deconcat,
        basis=basis,
        parse=lambda s: Word.parse(s if s != "1" else "", d),
    )


def quasi_shuffle_hopf(d: int, semigroup: Semigroup | None = None) -> HopfStructure:
    sg = semigroup or FreeSemigroup()

    def letters_of_weight(w: int) -> list[Letter]:
        import itertools

        if w == 1:
            return list(range(d))
        return [
            tuple(sorted(c))
            for c in itertools.combinations_with_replacement(range(d), w)
        ]

    def basis(n: int) -> list[Word]:
        def rec(m: int) -> list[tuple[Letter, ...]]:
            if m == 0:
                return [()]
            out = []
            for w in range(1, m + 1):
                for a in letters_of_weight(w):
                    for rest in rec(m - w):
                        out.append((a,) + rest)
            return out

        return sorted((Word(t) for t in rec(n)), key=str)

    return HopfStructure(
        name="quasi-shuffle",
        d=d,
        unit=Word(),
        product=lambda v, w: quasi_shuffle(v, w, sg),
        coproduct=deconcat,
        basis=basis,
        parse=lambda s: Word.parse(s if s != "1" else "", d),
    )


def bck_hopf(d: int) -> HopfStructure:
    @lru_cache(maxsize=None)
    def basis(n: int) -> tuple:
        seen = sorted(
            {forget_planarity(f) for f in enumerate_forests(n, d)}, key=str
        )
        return tuple(seen)

    from .forests import parse_nonplanar

    return HopfStructure(
        name="bck",
        d=d,
        unit=EMPTY_NONPLANAR,
        product=bck_product,
        coproduct=bck_coproduct,
        basis=lambda n: list(basis(n)),
        parse=lambda s: parse_nonplanar(s, d),
    )


def mkw_hopf(d: int) -> HopfStructure:
    from .forests import parse_forest

    return HopfStructure(
        name="mkw",
        d=d,
        unit=EMPTY_FOREST,
        product=mkw_product,
        coproduct=mkw_coproduct,
        basis=lambda n: enumerate_forests(n, d),
        parse=lambda s: parse_forest(s, d),
    )


# --- antipode, convolution, axiom checks --------------------------------------


def antipode(h: HopfStructure, x) -> GradedSeries:
    """Connected-graded recursion S(x) = -x - sum S(x') x''."""
    if x == h.unit:
        return GradedSeries.term(h.unit)
    memo = h._antipode_memo
    if x in memo:
        return memo[x]
    acc = GradedSeries.term(x, -1)
    for (l, r), c in h.reduced_coproduct(x).coeffs.items():
        acc = acc - h.product_series(antipode(h, l), GradedSeries.term(r)).scale(c)
    memo[x] = acc
    return acc


def convolution(
    phi: LinearFunctional, psi: LinearFunctional, h: HopfStructure
) -> LinearFunctional:
    """(phi * psi)(x) = sum phi(x_1) psi(x_2) over the full coproduct."""
    cap = min(phi.cap, psi.cap)

    def fn(x):
        total = 0
        for (l, r), c in h.coproduct(x).coeffs.items():
            total = total + c * phi(l) * psi(r)
        return total

    return LinearFunctional(fn, cap, name=f"({phi.name})*({psi.name})")


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: str = ""


@dataclass
class Report:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witness: str = "") -> None:
        self.checks.append(CheckResult(name, ok, witness))

    def first_failure(self) -> CheckResult | None:
        for c in self.checks:
            if not c.ok:
                return c
        return None

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "ok": c.ok, "witness": c.witness}
                for c in self.checks
            ],
        }

    def __str__(self) -> str:
        lines = [
            f"[{'PASS' if c.ok else 'FAIL'}] {c.name}"
            + (f"  ({c.witness})" if c.witness and not c.ok else "")
            for c in self.checks
        ]
        return "\n".join(lines)


def _tensor_product_series(
    h: HopfStructure, a: TensorSeries, b: TensorSeries
) -> TensorSeries:
    """(x1 (x) x2) . (y1 (x) y2) summed with coefficients, slotwise products."""
    out = TensorSeries()
    for (x1, x2), cx in a.coeffs.items():
        for (y1, y2), cy in b.coeffs.items():
            left = h.product(x1, y1)
            right = h.product(x2, y2)
            for l, cl in left.coeffs.items():
                for r, cr in right.coeffs.items():
                    out = out + TensorSeries.term(l, r, cx * cy * cl * cr)
    return out


def check_hopf_axioms(h: HopfStructure, max_degree: int) -> Report:
    """Exhaustive axiom sweep on the enumerated basis up to max_degree.

    Verifies grading and non-negative integer structure constants, product
    associativity (and commutativity when claimed), coassociativity, counit
    laws, and multiplicativity of the coproduct.  Stops recording a given
    check at its first violation.
    """
    rep = Report()
    basis_by_deg = {n: h.basis(n) for n in range(0, max_degree + 1)}

    ok, wit = True, ""
    for n, elems in basis_by_deg.items():
        for x in elems:
            if x.degree != n:
                ok, wit = False, f"{x} graded {x.degree} != {n}"
                break
        if not ok:
            break
    rep.add("basis grading", ok, wit)

    ok, wit = True, ""
    for p in range(1, max_degree):
        for q in range(1, max_degree - p + 1):
            for x in basis_by_deg[p]:
                for y in basis_by_deg[q]:
                    s = h.product(x, y)
                    for z, c in s.coeffs.items():
                        if z.degree != p + q or c != int(c) or c < 0:
                            ok, wit = False, f"{x}.{y} -> {c}*{z}"
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("product grading & nonneg integer structure constants", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for x in basis_by_deg[n]:
            for (l, r), c in h.coproduct(x).coeffs.items():
                if l.degree + r.degree != n or c != int(c) or c < 0:
                    ok, wit = False, f"D({x}) -> {c}*{l}(x){r}"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("coproduct grading & nonneg integer structure constants", ok, wit)

    ok, wit = True, ""
    for p in range(1, max_degree - 1):
        for q in range(1, max_degree - p):
            for r in range(1, max_degree - p - q + 1):
                for x in basis_by_deg[p]:
                    for y in basis_by_deg[q]:
                        for z in basis_by_deg[r]:
                            lhs = h.product_series(
                                h.product(x, y), GradedSeries.term(z)
                            )
                            rhs = h.product_series(
                                GradedSeries.term(x), h.product(y, z)
                            )
                            if lhs != rhs:
                                ok, wit = False, f"({x}.{y}).{z} != {x}.({y}.{z})"
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("product associativity", ok, wit)

    if h.is_commutative:
        ok, wit = True, ""
        for p in range(1, max_degree):
            for q in range(p, max_degree - p + 1):
                for x in basis_by_deg[p]:
                    for y in basis_by_deg[q]:
                        if h.product(x, y) != h.product(y, x):
                            ok, wit = False, f"{x}.{y} != {y}.{x}"
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if not ok:
                break
        rep.add("product commutativity", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for x in basis_by_deg[n]:
            dx = h.coproduct(x)
            lhs = TensorSeries()  # ((l1,l2), r) flattened as ((l1,l2),r) keys
            rhs = TensorSeries()
            l3: dict[tuple, Fraction] = {}
            r3: dict[tuple, Fraction] = {}
            for (l, r), c in dx.coeffs.items():
                for (a, b), c2 in h.coproduct(l).coeffs.items():
                    key = (a, b, r)
                    l3[key] = l3.get(key, Fraction(0)) + c * c2
                for (a, b), c2 in h.coproduct(r).coeffs.items():
                    key = (l, a, b)
                    r3[key] = r3.get(key, Fraction(0)) + c * c2
            l3 = {k: v for k, v in l3.items() if v}
            r3 = {k: v for k, v in r3.items() if v}
            if l3 != r3:
                ok, wit = False, f"coassociativity fails on {x}"
                break
        if not ok:
            break
    rep.add("coassociativity", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for x in basis_by_deg[n]:
            left = GradedSeries()
            right = GradedSeries()
            for (l, r), c in h.coproduct(x).coeffs.items():
                left = left.add_term(r, c * h.counit(l))
                right = right.add_term(l, c * h.counit(r))
            if left != GradedSeries.term(x) or right != GradedSeries.term(x):
                ok, wit = False, f"counit law fails on {x}"
                break
        if not ok:
            break
    rep.add("counit laws", ok, wit)

    ok, wit = True, ""
    for p in range(1, max_degree):
        for q in range(1, max_degree - p + 1):
            for x in basis_by_deg[p]:
                for y in basis_by_deg[q]:
                    lhs = h.coproduct_series(h.product(x, y))
                    rhs = _tensor_product_series(h, h.coproduct(x), h.coproduct(y))
                    if lhs != rhs:
                        ok, wit = False, f"D({x}.{y}) != D({x})D({y})"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("coproduct multiplicativity", ok, wit)

    ok, wit = True, ""
    for n in range(0, max_degree + 1):
        for x in basis_by_deg[n]:
            s = antipode(h, x)
            acc = GradedSeries()
            for (l, r), c in h.coproduct(x).coeffs.items():
                acc = acc + h.product_series(
                    antipode(h, l), GradedSeries.term(r)
                ).scale(c)
            expected = (
                GradedSeries.term(h.unit) if x == h.unit else GradedSeries()
            )
            if acc != expected:
                ok, wit = False, f"antipode identity fails on {x}"
                break
            del s
        if not ok:
            break
    rep.add("antipode m(S(x)id)D = unit.counit", ok, wit)

    return rep
