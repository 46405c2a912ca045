"""Inverse-factorial characters q, convolution powers, and q_gamma.

`q` is the unique character with value 1 on 1 and on every degree-one basis
element satisfying (q*q)(x) = 2^|x| q(x); on the shuffle algebra it is
1/|w|!, on MKW 1/(planar factorial), on BCK 1/(forest factorial).  The
gamma-deformed functional q_gamma replaces 2^|x| by 2^(gamma |x|) above the
truncation level N = floor(1/gamma); it is computed in configurable-precision
reals (exact rationals when gamma = 1).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from .algebra import GradedSeries, LinearFunctional
from .hopf import HopfStructure, convolution


class CharacterError(ValueError):
    pass


class InverseFactorialChar:
    """Memoized inverse-factorial character of a connected graded Hopf algebra."""

    def __init__(self, h: HopfStructure, cap: int = 64):
        self.h = h
        self.cap = cap
        self.memo: dict = {}

    def __call__(self, x) -> Fraction:
        if x == self.h.unit:
            return Fraction(1)
        if x.degree == 1:
            return Fraction(1)
        if x in self.memo:
            return self.memo[x]
        total = Fraction(0)
        for (l, r), c in self.h.reduced_coproduct(x).coeffs.items():
            total += c * self(l) * self(r)
        val = total / (2 ** x.degree - 2)
        self.memo[x] = val
        return val

    def functional(self) -> LinearFunctional:
        return LinearFunctional(self, self.cap, name=f"q[{self.h.name}]")


_q_chars: dict[tuple, InverseFactorialChar] = {}


def q_char(h: HopfStructure) -> InverseFactorialChar:
    key = (h.name, h.d)
    if key not in _q_chars:
        _q_chars[key] = InverseFactorialChar(h)
    return _q_chars[key]


def q_value(h: HopfStructure, x) -> Fraction:
    return q_char(h)(x)


def generalized_factorial(h: HopfStructure, x) -> Fraction:
    """x! = 1/q(x); raises on degenerate elements with q(x) = 0."""
    v = q_value(h, x)
    if v == 0:
        raise CharacterError(f"{x} is degenerate: q = 0, factorial undefined")
    return 1 / v


def _binomial(t: Fraction, p: int) -> Fraction:
    out = Fraction(1)
    for i in range(p):
        out *= t - i
    return out / math.factorial(p)


def q_power_pair(h: HopfStructure, x, t) -> tuple[Fraction, Fraction]:
    """(closed form, convolution sum) for q^{*t}(x)."""
    t = Fraction(t)
    q = q_char(h)
    closed = t ** x.degree * q(x)

    # phi = q - counit is zero on the unit; phi^{*p}(x) is a finite sum over
    # iterated reduced coproducts with p factors.
    def phi_powers(x) -> list[Fraction]:
        """[phi^{*0}(x), phi^{*1}(x), ..., phi^{*deg}(x)] exactly."""
        n = x.degree
        out = [h.counit(x)]
        if n == 0:
            return out
        # tensors[p] maps length-p tuples of non-unit elements to coefficients
        current = {(x,): Fraction(1)}
        out.append(q(x))
        for p in range(2, n + 1):
            nxt: dict[tuple, Fraction] = {}
            for tup, c in current.items():
                last = tup[-1]
                for (l, r), c2 in h.reduced_coproduct(last).coeffs.items():
                    key = tup[:-1] + (l, r)
                    nxt[key] = nxt.get(key, Fraction(0)) + c * c2
            current = nxt
            val = Fraction(0)
            for tup, c in current.items():
                prod = c
                for elem in tup:
                    prod *= q(elem)
                val += prod
            out.append(val)
        return out

    powers = phi_powers(x)
    via_sum = sum(
        (_binomial(t, p) * powers[p] for p in range(len(powers))), Fraction(0)
    )
    return closed, via_sum


def q_power(h: HopfStructure, x, t) -> Fraction:
    """q^{*t}(x) = t^|x| q(x), cross-checked against the binomial
    convolution sum over iterated reduced coproducts; raises on mismatch."""
    closed, via_sum = q_power_pair(h, x, t)
    if closed != via_sum:
        raise CharacterError(
            f"q^(*{t})({x}): closed form {closed} != convolution sum {via_sum}"
        )
    return closed


def q_power_functional(h: HopfStructure, t, cap: int = 32) -> LinearFunctional:
    t = Fraction(t)
    q = q_char(h)
    return LinearFunctional(
        lambda x: t ** x.degree * q(x), cap, name=f"q^*{t}[{h.name}]"
    )


def hopf_binomial_residual(h: HopfStructure, x, a, b) -> Fraction:
    """q(x)(a+b)^|x| - sum q(x1) q(x2) a^|x1| b^|x2|; zero when the
    Hopf-algebraic binomial identity holds (always, for exact q)."""
    a, b = Fraction(a), Fraction(b)
    q = q_char(h)
    lhs = q(x) * (a + b) ** x.degree
    rhs = Fraction(0)
    for (l, r), c in h.coproduct(x).coeffs.items():
        rhs += c * q(l) * q(r) * a ** l.degree * b ** r.degree
    return lhs - rhs


class QGammaFunctional:
    """q_gamma: equals q up to degree N = floor(1/gamma), then uses the
    recursion with prefactor 1/(2^(gamma n) - 2) in high-precision reals."""

    def __init__(self, h: HopfStructure, gamma, precision_bits: int = 128):
        gamma = Fraction(gamma)
        if not 0 < gamma <= 1:
            raise CharacterError(f"gamma must lie in (0, 1], got {gamma}")
        self.h = h
        self.gamma = gamma
        self.N = int(Fraction(1) / gamma)
        self.precision_bits = precision_bits
        self.memo: dict = {}
        self._q = q_char(h)

    @property
    def exact(self) -> bool:
        return self.gamma == 1

    def __call__(self, x):
        if self.exact:
            return self._q(x)
        if x.degree <= self.N:
            return self._q(x)
        if x in self.memo:
            return self.memo[x]
        with mpmath.workprec(self.precision_bits):
            total = mpmath.mpf(0)
            for (l, r), c in self.h.reduced_coproduct(x).coeffs.items():
                total += int(c) * mpmath.mpf(1) * self._as_mpf(self(l)) * self._as_mpf(
                    self(r)
                )
            denom = mpmath.power(2, mpmath.mpf(self.gamma.numerator)
                                 / self.gamma.denominator * x.degree) - 2
            val = total / denom
        self.memo[x] = val
        return val

    @staticmethod
    def _as_mpf(v):
        if isinstance(v, Fraction):
            return mpmath.mpf(v.numerator) / v.denominator
        return v

    def functional(self, cap: int = 32) -> LinearFunctional:
        return LinearFunctional(
            self, cap, name=f"q_gamma[{self.h.name},{self.gamma}]"
        )


def q_gamma(h: HopfStructure, gamma, x, precision_bits: int = 128):
    return QGammaFunctional(h, gamma, precision_bits)(x)


def gamma_decay_table(
    h: HopfStructure, gamma, max_degree: int, precision_bits: int = 128
) -> list[dict]:
    """Per-element decay data for the bound |q_gamma| <= C^(n-1) (n!)^(1-gamma)/x!.

    Reports the minimal per-element constant C making the bound an equality;
    nothing is asserted about monotonicity (the bound's constant comes from
    an inequality we do not reprove).
    """
    gamma = Fraction(gamma)
    qg = QGammaFunctional(h, gamma, precision_bits)
    q = q_char(h)
    rows: list[dict] = []
    with mpmath.workprec(precision_bits):
        for n in range(1, max_degree + 1):
            for x in h.basis(n):
                qx = q(x)
                qgx = qg(x)
                qg_f = QGammaFunctional._as_mpf(qgx)
                if qx == 0:
                    ratio = mpmath.inf
                    c_min = mpmath.inf
                else:
                    fact = mpmath.mpf((1 / qx).numerator) / (1 / qx).denominator
                    ratio = abs(qg_f) * fact / mpmath.power(
                        mpmath.factorial(n), 1 - float(gamma)
                    )
                    c_min = (
                        mpmath.power(ratio, mpmath.mpf(1) / (n - 1))
                        if n >= 2
                        else mpmath.mpf(1)
                    )
                rows.append(
                    {
                        "degree": n,
                        "elem": str(x),
                        "q": qx,
                        "q_gamma": qgx,
                        "bound_ratio": ratio,
                        "c_min": c_min,
                    }
                )
    return rows


def fitted_decay_constant(rows: list[dict]) -> float:
    """The max of per-element minimal constants: the smallest uniform C."""
    best = 0.0
    for r in rows:
        if r["degree"] >= 2 and mpmath.isfinite(r["c_min"]):
            best = max(best, float(r["c_min"]))
    return best


def decay_table_csv(rows: list[dict]) -> str:
    lines = ["degree,elem,q,q_gamma,bound_ratio"]
    for r in rows:
        qg = r["q_gamma"]
        qg_str = str(qg) if isinstance(qg, Fraction) else mpmath.nstr(qg, 25)
        br = r["bound_ratio"]
        br_str = mpmath.nstr(br, 17) if not isinstance(br, Fraction) else str(br)
        lines.append(f"{r['degree']},{r['elem']},{r['q']},{qg_str},{br_str}")
    return "\n".join(lines) + "\n"


def check_q_convolution_identity(h: HopfStructure, max_degree: int) -> bool:
    """(q*q)(x) = 2^|x| q(x) exhaustively on the basis."""
    q = q_char(h).functional()
    qq = convolution(q, q, h)
    for n in range(0, max_degree + 1):
        for x in h.basis(n):
            if qq(x) != 2 ** x.degree * q(x):
                return False
    return True
