"""Homogeneous-space models, elementary differentials, Lie-Butcher stepping.

A `ChartModel` holds polynomial data: generator fields #E_beta = sum_alpha
eps[beta][alpha] d_alpha and coefficient maps f_i = sum_beta ftilde[i][beta]
E_beta.  Elementary differentials are computed exactly by the post-Lie
recursion; operator words are kept free (no PBW reordering) and evaluated
with frozen coefficients: phi . E_{b1}...E_{bk} acts on a test function as
phi(y) * (#E_{b1} o ... o #E_{bk}), rightmost generator first.

The flow expansion pairs the elementary differential of a forest with the
word evaluation <X_st, reverse(arborify(sigma))> (the increasing-extension
reading); this is the pairing under which the truncated step reproduces the
Picard expansion of the driven equation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import GradedSeries, Word
from .forests import PlanarForest, PlanarTree, enumerate_forests
from .morphisms import arborify_planar
from .roughpath import PiecewisePolyPath, signature


class ModelError(ValueError):
    pass


# --- multivariate polynomials over Q ------------------------------------------


class Poly:
    """Multivariate polynomial: exponent tuple -> Fraction coefficient."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(e) != nvars:
                        raise ModelError(f"exponent tuple {e} needs {nvars} slots")
                    clean[tuple(int(k) for k in e)] = c
        self.terms = clean
        self._hash = hash((nvars, frozenset(clean.items())))

    @staticmethod
    def constant(nvars: int, c) -> "Poly":
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def coordinate(nvars: int, alpha: int) -> "Poly":
        e = [0] * nvars
        e[alpha] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, Fraction(0)) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, Fraction(0)) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        p = Poly(self.nvars)
        if c:
            p.terms = {e: c * v for e, v in self.terms.items()}
        return p

    def diff(self, alpha: int) -> "Poly":
        out: dict = {}
        for e, c in self.terms.items():
            k = e[alpha]
            if k:
                e2 = list(e)
                e2[alpha] = k - 1
                out[tuple(e2)] = c * k
        p = Poly(self.nvars)
        p.terms = out
        return p

    def eval(self, y: Sequence):
        total = 0
        for e, c in self.terms.items():
            v = c if isinstance(y[0], Fraction) else float(c)
            for yi, k in zip(y, e):
                for _ in range(k):
                    v = v * yi
            total = total + v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(
                f"y{alpha}" + (f"^{k}" if k > 1 else "")
                for alpha, k in enumerate(e)
                if k
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json_terms(self) -> list[dict]:
        return [
            {"exponents": list(e), "num": str(c.numerator), "den": str(c.denominator)}
            for e, c in sorted(self.terms.items())
        ]

    @staticmethod
    def from_json_terms(nvars: int, terms: list[dict]) -> "Poly":
        out: dict = {}
        for t in terms:
            e = tuple(int(k) for k in t["exponents"])
            out[e] = out.get(e, Fraction(0)) + Fraction(int(t["num"]), int(t["den"]))
        return Poly(nvars, out)


def _as_poly(nvars: int, value) -> Poly:
    if isinstance(value, Poly):
        if value.nvars != nvars:
            raise ModelError("polynomial has wrong number of variables")
        return value
    return Poly.constant(nvars, value)


# --- chart models ---------------------------------------------------------------


@dataclass(frozen=True)
class ChartModel:
    """Homogeneous-space data in one chart; all entries polynomial over Q."""

    n: int
    N: int
    d: int
    epsilon: tuple  # epsilon[beta][alpha]: Poly
    f: tuple  # f[i][beta]: Poly
    invariant: Poly | None = None
    name: str = "model"

    def __post_init__(self):
        if min(self.n, self.N, self.d) < 1:
            raise ModelError("n, N, d must all be >= 1")
        if len(self.epsilon) != self.N or any(len(row) != self.n for row in self.epsilon):
            raise ModelError("epsilon must be N x n")
        if len(self.f) != self.d or any(len(row) != self.N for row in self.f):
            raise ModelError("f must be d x N")

    def generator_apply(self, beta: int, psi: Poly) -> Poly:
        """#E_beta acting on a polynomial test function."""
        out = Poly(self.n)
        for alpha in range(self.n):
            g = self.epsilon[beta][alpha]
            if not g.is_zero():
                out = out + g * psi.diff(alpha)
        return out

    def vector_field(self, i: int) -> list[Poly]:
        """#f_i as an n-vector of polynomials."""
        out = [Poly(self.n) for _ in range(self.n)]
        for beta in range(self.N):
            coeff = self.f[i][beta]
            if coeff.is_zero():
                continue
            for alpha in range(self.n):
                out[alpha] = out[alpha] + coeff * self.epsilon[beta][alpha]
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "N": self.N,
                "d": self.d,
                "epsilon": [
                    [p.to_json_terms() for p in row] for row in self.epsilon
                ],
                "f": [[p.to_json_terms() for p in row] for row in self.f],
                "invariant": None
                if self.invariant is None
                else self.invariant.to_json_terms(),
            }
        )

    @staticmethod
    def from_json(text: str) -> "ChartModel":
        data = json.loads(text)
        n = int(data["n"])
        eps = tuple(
            tuple(Poly.from_json_terms(n, p) for p in row) for row in data["epsilon"]
        )
        f = tuple(
            tuple(Poly.from_json_terms(n, p) for p in row) for row in data["f"]
        )
        inv = (
            None
            if data.get("invariant") is None
            else Poly.from_json_terms(n, data["invariant"])
        )
        return ChartModel(n, int(data["N"]), int(data["d"]), eps, f, inv)


def translation_model(field_components: Sequence[Sequence], n: int | None = None) -> ChartModel:
    """R^n with #E_beta = d_beta; f_i are ordinary vector fields.

    `field_components[i][beta]` is the beta-component of f_i (Poly or constant).
    """
    d = len(field_components)
    if n is None:
        n = len(field_components[0])
    eps = tuple(
        tuple(
            Poly.constant(n, 1) if alpha == beta else Poly(n)
            for alpha in range(n)
        )
        for beta in range(n)
    )
    f = tuple(
        tuple(_as_poly(n, field_components[i][beta]) for beta in range(n))
        for i in range(d)
    )
    return ChartModel(n, n, d, eps, f, None, name="translation")


def so3_sphere_model(f_vectors: Sequence[Sequence]) -> ChartModel:
    """S^2 inside R^3 under SO(3): #E_beta(y) = e_beta x y, invariant |y|^2 - 1.

    `f_vectors[i]` is the so(3)-valued map of the i-th field, as a 3-vector.
    """
    n = 3
    y0, y1, y2 = (Poly.coordinate(n, a) for a in range(3))
    zero = Poly(n)
    eps = (
        (zero, y2.scale(-1), y1),  # e_0 x y = (0, -y2, y1) with 0-indexing
        (y2, zero, y0.scale(-1)),
        (y1.scale(-1), y0, zero),
    )
    d = len(f_vectors)
    f = tuple(
        tuple(_as_poly(n, f_vectors[i][beta]) for beta in range(3)) for i in range(d)
    )
    inv = y0 * y0 + y1 * y1 + y2 * y2 - Poly.constant(n, 1)
    return ChartModel(n, 3, d, eps, f, inv, name="so3-sphere")


# --- elementary differentials ----------------------------------------------------


@dataclass(frozen=True)
class OperatorSeries:
    """Sum of (polynomial coefficient) x (word in abstract generators)."""

    nvars: int
    terms: tuple  # of (Poly, tuple[int, ...])

    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        merged: dict[tuple, Poly] = {}
        for p, w in self.terms + other.terms:
            merged[w] = merged.get(w, Poly(self.nvars)) + p
        return OperatorSeries(
            self.nvars,
            tuple((p, w) for w, p in sorted(merged.items()) if not p.is_zero()),
        )

    def concat(self, other: "OperatorSeries") -> "OperatorSeries":
        """Pointwise product: coefficients multiply, generator words concatenate."""
        out: dict[tuple, Poly] = {}
        for p1, w1 in self.terms:
            for p2, w2 in other.terms:
                w = w1 + w2
                out[w] = out.get(w, Poly(self.nvars)) + p1 * p2
        return OperatorSeries(
            self.nvars, tuple((p, w) for w, p in sorted(out.items()) if not p.is_zero())
        )

    def scale(self, c) -> "OperatorSeries":
        return OperatorSeries(
            self.nvars,
            tuple(
                (p.scale(c), w)
                for p, w in self.terms
                if not p.scale(c).is_zero()
            ),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({p})" + "".join(f" E{b}" for b in w) for p, w in self.terms
        )


def zero_operator(nvars: int) -> OperatorSeries:
    return OperatorSeries(nvars, ())


def identity_operator(nvars: int) -> OperatorSeries:
    return OperatorSeries(nvars, ((Poly.constant(nvars, 1), ()),))


def operator_apply_poly(model: ChartModel, op: OperatorSeries, psi: Poly) -> Poly:
    """#op acting on psi: each word right-to-left, frozen coefficients."""
    out = Poly(model.n)
    for coeff, word_betas in op.terms:
        g = psi
        for beta in reversed(word_betas):
            g = model.generator_apply(beta, g)
        out = out + coeff * g
    return out


def apply_operator(model: ChartModel, op: OperatorSeries, psi: Poly, y: Sequence):
    """(#op . psi)(y); exact for Fraction points."""
    return operator_apply_poly(model, op, psi).eval(y)


def operator_rhd(model: ChartModel, a: OperatorSeries, b: OperatorSeries) -> OperatorSeries:
    """a |> b = #a applied to the coefficients of the g-valued series b.

    Requires every word of b to have length one (b takes values in the Lie
    algebra); the result is again g-valued.
    """
    out = zero_operator(model.n)
    for coeff, word_betas in b.terms:
        if len(word_betas) != 1:
            raise ModelError("operator_rhd needs a g-valued right factor")
        new_coeff = operator_apply_poly(model, a, coeff)
        if not new_coeff.is_zero():
            out = out + OperatorSeries(model.n, ((new_coeff, word_betas),))
    return out


def field_operator(model: ChartModel, i: int) -> OperatorSeries:
    """f_i as a g-valued operator series (its elementary differential)."""
    return elementary_differential(
        model, PlanarForest((PlanarTree(i),))
    )


@lru_cache(maxsize=None)
def elementary_differential(model: ChartModel, f: PlanarForest) -> OperatorSeries:
    """The post-Lie morphism F with F(.i) = f_i, extended to planar forests.

    Trees stay length-one in the generator word: F(B_a(tau)) has coefficients
    (#F_tau applied to ftilde_a^beta); forests concatenate componentwise.
    """
    if f.is_empty():
        return identity_operator(model.n)
    if f.is_tree():
        tree = f.trees[0]
        a = tree.root
        if not isinstance(a, int) or not 0 <= a < model.d:
            raise ModelError(f"decoration {a!r} outside the model's alphabet")
        if not tree.children:
            return OperatorSeries(
                model.n,
                tuple(
                    (model.f[a][beta], (beta,))
                    for beta in range(model.N)
                    if not model.f[a][beta].is_zero()
                ),
            )
        inner = elementary_differential(model, PlanarForest(tree.children))
        terms = []
        for beta in range(model.N):
            coeff = operator_apply_poly(model, inner, model.f[a][beta])
            if not coeff.is_zero():
                terms.append((coeff, (beta,)))
        return OperatorSeries(model.n, tuple(terms))
    out = identity_operator(model.n)
    for tree in f.trees:
        out = out.concat(elementary_differential(model, tree.as_forest()))
    return out


# --- flow weights and Lie-Butcher stepping ---------------------------------------


@lru_cache(maxsize=None)
def flow_words(f: PlanarForest) -> tuple:
    """Reversed-arborification word coefficients pairing F_sigma in the flow."""
    return tuple(
        (w.reverse(), c) for w, c in arborify_planar(f).items()
    )


def flow_weight(path: PiecewisePolyPath, s, t, f: PlanarForest) -> Fraction:
    """<X_st, reverse(arborify(f))>: the coefficient of F_f in the solution."""
    total = Fraction(0)
    for w, c in flow_words(f):
        total += c * signature(path, s, t, w)
    return total


class LieButcherIntegrator:
    """Truncated planar-forest expansion of the flow, one chart step at a time."""

    def __init__(self, model: ChartModel, order: int):
        if order < 0:
            raise ModelError("truncation order must be >= 0")
        self.model = model
        self.order = order
        self.forests: list[PlanarForest] = []
        for k in range(1, order + 1):
            self.forests.extend(enumerate_forests(k, model.d))
        coords = [Poly.coordinate(model.n, a) for a in range(model.n)]
        self.applied: list[list[Poly]] = []
        for f in self.forests:
            op = elementary_differential(model, f)
            self.applied.append([operator_apply_poly(model, op, psi) for psi in coords])

    def step(self, weights: Sequence, y: Sequence) -> list:
        """One step given the per-forest weights (order matches self.forests)."""
        out = list(y)
        for w, polys in zip(weights, self.applied):
            if not w:
                continue
            for alpha in range(self.model.n):
                out[alpha] = out[alpha] + w * polys[alpha].eval(y)
        return out

    def weights_from_path(self, path: PiecewisePolyPath, s, t, exact: bool = False):
        vals = [flow_weight(path, s, t, f) for f in self.forests]
        return vals if exact else [float(v) for v in vals]


def lb_step(
    model: ChartModel,
    path: PiecewisePolyPath,
    s,
    t,
    y: Sequence,
    order: int,
    exact: bool = False,
) -> list:
    """One Lie-Butcher step from y over [s,t] at the given truncation order."""
    integ = _integrator(model, order)
    return integ.step(integ.weights_from_path(path, s, t, exact=exact), list(y))


@lru_cache(maxsize=None)
def _integrator(model: ChartModel, order: int) -> LieButcherIntegrator:
    return LieButcherIntegrator(model, order)


@dataclass
class Trajectory:
    times: list
    points: list
    drifts: list  # invariant(y_k) - invariant(y_0), [] if no invariant

    @property
    def endpoint(self):
        return self.points[-1]

    def max_drift(self) -> float:
        return max((abs(float(v)) for v in self.drifts), default=0.0)

    def to_csv(self) -> str:
        n = len(self.points[0])
        header = "t," + ",".join(f"y{a}" for a in range(n))
        if self.drifts:
            header += ",invariant_drift"
        lines = [header]
        for k, t in enumerate(self.times):
            row = [str(float(t))] + [repr(float(v)) for v in self.points[k]]
            if self.drifts:
                row.append(repr(float(self.drifts[k])))
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def solve(
    model: ChartModel,
    path: PiecewisePolyPath,
    grid: Sequence,
    y0: Sequence,
    order: int,
    exact: bool = False,
) -> Trajectory:
    """Compose one-step flows over the grid; records invariant drift."""
    grid = [Fraction(g) for g in grid]
    if any(grid[i] >= grid[i + 1] for i in range(len(grid) - 1)):
        raise ModelError("grid must be strictly increasing")
    integ = _integrator(model, order)
    y = list(y0)
    points = [list(y)]
    inv0 = model.invariant.eval(y) if model.invariant is not None else None
    drifts = [0 * inv0] if inv0 is not None else []
    for k in range(len(grid) - 1):
        w = integ.weights_from_path(path, grid[k], grid[k + 1], exact=exact)
        y = integ.step(w, y)
        points.append(list(y))
        if inv0 is not None:
            drifts.append(model.invariant.eval(y) - inv0)
    return Trajectory(list(grid), points, drifts)


# --- classical reference integrator ----------------------------------------------

_SQ21 = math.sqrt(21.0)
_CV_C = [
    0.0,
    0.5,
    0.5,
    (7.0 + _SQ21) / 14.0,
    (7.0 + _SQ21) / 14.0,
    0.5,
    (7.0 - _SQ21) / 14.0,
    (7.0 - _SQ21) / 14.0,
    0.5,
    (7.0 + _SQ21) / 14.0,
    1.0,
]
_CV_A = [
    [],
    [0.5],
    [0.25, 0.25],
    [1.0 / 7.0, (-7.0 - 3.0 * _SQ21) / 98.0, (21.0 + 5.0 * _SQ21) / 49.0],
    [(11.0 + _SQ21) / 84.0, 0.0, (18.0 + 4.0 * _SQ21) / 63.0, (21.0 - _SQ21) / 252.0],
    [
        (5.0 + _SQ21) / 48.0,
        0.0,
        (9.0 + _SQ21) / 36.0,
        (-231.0 + 14.0 * _SQ21) / 360.0,
        (63.0 - 7.0 * _SQ21) / 80.0,
    ],
    [
        (10.0 - _SQ21) / 42.0,
        0.0,
        (-432.0 + 92.0 * _SQ21) / 315.0,
        (633.0 - 145.0 * _SQ21) / 90.0,
        (-504.0 + 115.0 * _SQ21) / 70.0,
        (63.0 - 13.0 * _SQ21) / 35.0,
    ],
    [
        1.0 / 14.0,
        0.0,
        0.0,
        0.0,
        (14.0 - 3.0 * _SQ21) / 126.0,
        (13.0 - 3.0 * _SQ21) / 63.0,
        1.0 / 9.0,
    ],
    [
        1.0 / 32.0,
        0.0,
        0.0,
        0.0,
        (91.0 - 21.0 * _SQ21) / 576.0,
        11.0 / 72.0,
        (-385.0 - 75.0 * _SQ21) / 1152.0,
        (63.0 + 13.0 * _SQ21) / 128.0,
    ],
    [
        1.0 / 14.0,
        0.0,
        0.0,
        0.0,
        1.0 / 9.0,
        (-733.0 - 147.0 * _SQ21) / 2205.0,
        (515.0 + 111.0 * _SQ21) / 504.0,
        (-51.0 - 11.0 * _SQ21) / 56.0,
        (132.0 + 28.0 * _SQ21) / 245.0,
    ],
    [
        0.0,
        0.0,
        0.0,
        0.0,
        (-42.0 + 7.0 * _SQ21) / 18.0,
        (-18.0 + 28.0 * _SQ21) / 45.0,
        (-273.0 - 53.0 * _SQ21) / 72.0,
        (301.0 + 53.0 * _SQ21) / 72.0,
        (28.0 - 28.0 * _SQ21) / 45.0,
        (49.0 - 7.0 * _SQ21) / 18.0,
    ],
]
_CV_B = [
    1.0 / 20.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    49.0 / 180.0, 16.0 / 45.0, 49.0 / 180.0, 1.0 / 20.0,
]


def _pulled_back_rhs(model: ChartModel, path: PiecewisePolyPath) -> Callable:
    dXdt = []
    for piece in path.pieces:
        dXdt.append(
            [
                tuple(float(c * (i + 1)) for i, c in enumerate(comp[1:]))
                for comp in piece
            ]
        )
    bps = [float(b) for b in path.breakpoints]

    def rhs(t: float, y: list) -> list:
        i = 0
        for k in range(len(bps) - 1):
            if t <= bps[k + 1]:
                i = k
                break
        else:
            i = len(bps) - 2
        out = [0.0] * model.n
        for comp in range(path.dim):
            p = dXdt[i][comp]
            xdot = 0.0
            for c in reversed(p):
                xdot = xdot * t + c
            if xdot == 0.0:
                continue
            for beta in range(model.N):
                coeff = model.f[comp][beta].eval(y)
                if coeff == 0.0:
                    continue
                w = xdot * coeff
                for alpha in range(model.n):
                    g = model.epsilon[beta][alpha]
                    if not g.is_zero():
                        out[alpha] += w * g.eval(y)
        return out

    return rhs


def reference_solve(
    model: ChartModel,
    path: PiecewisePolyPath,
    t0,
    t1,
    n_steps: int,
    y0: Sequence,
) -> list:
    """Fixed-step Cooper-Verner RK8 on the pulled-back ODE; returns endpoint."""
    rhs = _pulled_back_rhs(model, path)
    t0f, t1f = float(t0), float(t1)
    h = (t1f - t0f) / n_steps
    y = [float(v) for v in y0]
    t = t0f
    for _ in range(n_steps):
        ks = []
        for i in range(11):
            yi = list(y)
            for j, a in enumerate(_CV_A[i]):
                if a:
                    for alpha in range(len(y)):
                        yi[alpha] += h * a * ks[j][alpha]
            ks.append(rhs(t + _CV_C[i] * h, yi))
        for alpha in range(len(y)):
            acc = 0.0
            for i in range(11):
                if _CV_B[i]:
                    acc += _CV_B[i] * ks[i][alpha]
            y[alpha] += h * acc
        t += h
    return y


# --- order studies ----------------------------------------------------------------


@dataclass
class OrderStudy:
    rows: list  # dicts: N, h, error, max_drift
    slopes: dict  # N -> fitted slope
    reference: list

    def to_csv(self) -> str:
        lines = ["N,h,error,max_invariant_drift"]
        for r in self.rows:
            lines.append(
                f"{r['N']},{r['h']},{r['error']!r},{r['max_drift']!r}"
            )
        return "\n".join(lines) + "\n"


def _fit_slope(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def order_study(
    model: ChartModel,
    path: PiecewisePolyPath,
    orders: Sequence[int],
    steps: Sequence,
    y0: Sequence,
    t0=0,
    t1=1,
    ref_factor: int = 64,
) -> OrderStudy:
    """Endpoint error against the order-8 reference at a >= ref_factor finer mesh."""
    t0, t1 = Fraction(t0), Fraction(t1)
    hs = [Fraction(h) for h in steps]
    n_ref = ref_factor * int(math.ceil(float((t1 - t0) / min(hs))))
    ref = reference_solve(model, path, t0, t1, n_ref, y0)
    rows = []
    slopes = {}
    for N in orders:
        errs = []
        for h in hs:
            m = int((t1 - t0) / h)
            if m * h != t1 - t0:
                raise ModelError(f"step {h} does not divide [{t0},{t1}]")
            grid = [t0 + k * h for k in range(m + 1)]
            traj = solve(model, path, grid, y0, N)
            err = max(
                abs(float(a) - b) for a, b in zip(traj.endpoint, ref)
            )
            errs.append(err)
            rows.append(
                {"N": N, "h": float(h), "error": err, "max_drift": traj.max_drift()}
            )
        slopes[N] = _fit_slope(
            [math.log(float(h)) for h in hs], [math.log(max(e, 1e-300)) for e in errs]
        )
    return OrderStudy(rows, slopes, ref)
