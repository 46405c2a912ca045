"""The acceptance suite: one callable per criterion, shared by tests and CLI.

Each criterion returns a `Report` whose sub-checks carry witnesses.  Known
mathematically-unattainable sub-checks (see the contracting-arborification
morphism) are still executed faithfully and reported as failures; the
corresponding tests pin them as strict expected failures.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

from .algebra import GradedSeries, Word, word
from .characters import (
    hopf_binomial_residual,
    q_char,
    q_power_pair,
    q_value,
)
from .forests import (
    enumerate_forests,
    forget_planarity,
    linear_extensions,
    monte_carlo_volume,
    nonplanar_factorial,
    order_relations,
    parse_forest,
    planar_factorial,
    planar_representatives,
    symmetry_factor,
)
from .hopf import (
    Report,
    bck_hopf,
    check_hopf_axioms,
    gl_product,
    iterated_gl_word,
    mkw_hopf,
    quasi_shuffle_hopf,
    shuffle_hopf,
)
from .morphisms import (
    arborification_morphism,
    arborify_nonplanar,
    arborify_planar,
    arborify_planar_contracting,
    contracting_arborification_morphism,
    omega,
    omega_morphism,
    verify_morphism,
)
from .rde import (
    Poly,
    elementary_differential,
    field_operator,
    flow_weight,
    operator_rhd,
    order_study,
    so3_sphere_model,
    solve,
    translation_model,
    zero_operator,
)
from .roughpath import (
    PiecewisePolyPath,
    check_chen,
    check_character,
    extend,
    lift_planar,
    signature,
    signature_lift,
    truncate_lift,
)


def criterion_1_hopf_axioms(degree: int = 5) -> Report:
    """Shuffle, quasi-shuffle (3-letter semigroup), BCK, MKW axiom sweeps."""
    rep = Report()
    for h in (
        shuffle_hopf(2),
        quasi_shuffle_hopf(3),
        bck_hopf(2),
        mkw_hopf(2),
    ):
        sub = check_hopf_axioms(h, degree)
        bad = sub.first_failure()
        rep.add(
            f"axioms[{h.name}] to degree {degree}",
            sub.passed,
            "" if sub.passed else f"{bad.name}: {bad.witness}",
        )
    return rep


def criterion_2_factorials(degree: int = 6, mc_samples: int = 1_000_000) -> Report:
    rep = Report()

    ok, wit = True, ""
    for n in range(0, degree + 1):
        for f in enumerate_forests(n, 1):
            pf = planar_factorial(f)
            if n > 0 and pf * linear_extensions(order_relations(f), "<<") != math.factorial(n):
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add(f"planar_factorial * extensions(<<) = n! to degree {degree}", ok, wit)

    ok, wit = True, ""
    for n in range(0, degree + 1):
        for f in enumerate_forests(n, 1):
            nf = forget_planarity(f)
            hook = nonplanar_factorial(nf)
            if n > 0:
                ext = linear_extensions(order_relations(f), "<")
                if hook * ext != math.factorial(n):
                    ok, wit = False, str(f)
                    break
        if not ok:
            break
    rep.add(f"hook product = n!/extensions(<) to degree {degree}", ok, wit)

    ok, wit = True, ""
    seen = set()
    for n in range(1, degree + 1):
        for f in enumerate_forests(n, 1):
            nf = forget_planarity(f)
            if nf in seen:
                continue
            seen.add(nf)
            total = Fraction(0)
            for rep_f in planar_representatives(nf):
                total += Fraction(symmetry_factor(rep_f), planar_factorial(rep_f))
            if total != Fraction(1, nonplanar_factorial(nf)):
                ok, wit = False, f"{nf}: sum {total}"
                break
        if not ok:
            break
    rep.add(f"sum Sym(s)/s! = 1/f~! to degree {degree}", ok, wit)

    suite = [
        (parse_forest("a[b,c]"), "<<", Fraction(1, 6), 11),
        (parse_forest("a[b,c]"), "<", Fraction(1, 3), 12),
        (parse_forest("c a[b]"), "<<", Fraction(1, 3), 13),
        (parse_forest("a[b[c],d] e"), "<<", None, 14),
        (parse_forest("a"), "<<", Fraction(1), 15),
    ]
    ok, wit = True, ""
    for f, relation, expected, seed in suite:
        if expected is None:
            expected = Fraction(1, planar_factorial(f)) if relation == "<<" else None
        est, se = monte_carlo_volume(f, relation, mc_samples, seed)
        target = (
            float(expected)
            if expected is not None
            else 1.0 / nonplanar_factorial(forget_planarity(f))
        )
        if abs(est - target) > 4.0 * max(se, 1e-12):
            ok, wit = False, f"{f} rel {relation}: est {est} target {target} se {se}"
            break
    rep.add(f"Monte-Carlo volumes within 4 sigma ({mc_samples} samples)", ok, wit)
    return rep


def criterion_3_characters(degree: int = 6) -> Report:
    rep = Report()
    sh1, mkw1, bck1 = shuffle_hopf(1), mkw_hopf(1), bck_hopf(1)
    sh2, mkw2, bck2 = shuffle_hopf(2), mkw_hopf(2), bck_hopf(2)
    sweeps = [
        (sh1, degree), (mkw1, degree), (bck1, degree),
        (sh2, 4), (mkw2, 4), (bck2, 4),
    ]

    ok, wit = True, ""
    for h, cap in sweeps:
        q = q_char(h)
        for n in range(0, cap + 1):
            for x in h.basis(n):
                closed, via = q_power_pair(h, x, 2)
                if closed != via or closed != 2 ** x.degree * q(x):
                    ok, wit = False, f"{h.name}:{x}"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("q*q = 2^|x| q (shuffle, MKW, BCK)", ok, wit)

    ok, wit = True, ""
    for h, cap in sweeps:
        for n in range(0, cap + 1):
            for x in h.basis(n):
                for a, b in ((1, 1), (2, 3)):
                    if hopf_binomial_residual(h, x, a, b) != 0:
                        ok, wit = False, f"{h.name}:{x} (a,b)=({a},{b})"
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("Hopf binomial residual 0 for (1,1) and (2,3)", ok, wit)

    ok, wit = True, ""
    for mkw, sh, cap in ((mkw1, sh1, degree), (mkw2, sh2, 4)):
        qs = q_char(sh)
        qm = q_char(mkw)
        for n in range(0, cap + 1):
            for f in mkw.basis(n):
                pulled = sum(
                    (c * qs(w) for w, c in arborify_planar(f).coeffs.items()),
                    Fraction(0),
                )
                if pulled != qm(f):
                    ok, wit = False, f"d={mkw.d}: {f}"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("q_MKW = q_shuffle o a_<<", ok, wit)

    ok, wit = True, ""
    for bck, mkw, cap in ((bck1, mkw1, degree), (bck2, mkw2, 4)):
        qb = q_char(bck)
        qm = q_char(mkw)
        for n in range(0, cap + 1):
            for f in bck.basis(n):
                pulled = sum(
                    (c * qm(p) for p, c in omega(f).coeffs.items()), Fraction(0)
                )
                if pulled != qb(f):
                    ok, wit = False, f"d={bck.d}: {f}"
                    break
            if not ok:
                break
        if not ok:
            break
    rep.add("q_BCK = q_MKW o Omega", ok, wit)

    ok, wit = True, ""
    for n in range(2, degree + 1):
        for f in mkw1.basis(n):
            if q_value(mkw1, f) == 0:
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add("non-degeneracy: q != 0 on MKW basis degrees 2..6", ok, wit)
    return rep


def criterion_4_morphisms(degree: int = 5) -> Report:
    rep = Report()
    mkw, sh = mkw_hopf(2), shuffle_hopf(2)
    bck = bck_hopf(2)
    qsh = quasi_shuffle_hopf(2)

    sub = verify_morphism(arborification_morphism(mkw, sh), degree)
    bad = sub.first_failure()
    rep.add(
        f"a_<< Hopf morphism to degree {degree}",
        sub.passed,
        "" if sub.passed else f"{bad.name}: {bad.witness}",
    )

    sub = verify_morphism(omega_morphism(bck, mkw), degree)
    bad = sub.first_failure()
    rep.add(
        f"Omega Hopf morphism to degree {degree}",
        sub.passed,
        "" if sub.passed else f"{bad.name}: {bad.witness}",
    )

    # Known spec/paper defect: the contracting map cannot be multiplicative
    # (witness a (x) a); executed faithfully, reported honestly.
    sub = verify_morphism(contracting_arborification_morphism(mkw, qsh), degree)
    bad = sub.first_failure()
    rep.add(
        f"a^c_<< Hopf morphism to degree {degree} (known defect)",
        sub.passed,
        "" if sub.passed else f"{bad.name}: {bad.witness}",
    )

    ok, wit = True, ""
    for n in range(0, degree + 1):
        for f in bck.basis(n):
            lhs = omega(f).map_basis(arborify_planar)
            if lhs != arborify_nonplanar(f):
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add(f"diagram a_<< o Omega = a to degree {degree}", ok, wit)

    ok, wit = True, ""
    cases = [
        (str(arborify_planar(parse_forest("a[b] c"))), "bac"),
        (str(arborify_planar(parse_forest("c a[b]"))), "bca + cba"),
        (
            str(arborify_planar_contracting(parse_forest("c a[b]"))),
            "[b+c]a + bca + cba",
        ),
    ]
    for got, expected in cases:
        if got != expected:
            ok, wit = False, f"got {got!r}, expected {expected!r}"
            break
    rep.add("worked examples byte-exact", ok, wit)
    return rep


def criterion_5_signatures(degree: int = 5, volume_degree: int = 6) -> Report:
    rep = Report()
    path = PiecewisePolyPath.monomials([1, 2, 3])
    lift = signature_lift(path, cap=degree + 1)
    s, t = Fraction(0), Fraction(1)

    sub = check_character(lift, s, t, degree)
    rep.add(
        f"shuffle identity exact to degree {degree} on (t,t^2,t^3)",
        sub.passed,
        "" if sub.passed else sub.checks[0].witness,
    )

    sub = check_chen(lift, Fraction(0), Fraction(1, 3), Fraction(3, 4), degree)
    rep.add(
        f"Chen identity exact to degree {degree} on (t,t^2,t^3)",
        sub.passed,
        "" if sub.passed else sub.checks[0].witness,
    )

    ok, wit = True, ""
    diag = PiecewisePolyPath.monomials([1])
    for n in range(1, volume_degree + 1):
        for f in enumerate_forests(n, 1):
            got = lift_planar(diag, Fraction(0), Fraction(1), f)
            if got != Fraction(1, planar_factorial(f)):
                ok, wit = False, str(f)
                break
        if not ok:
            break
    rep.add(
        f"volume law <X~,s> = (t-s)^|s|/s! to degree {volume_degree}", ok, wit
    )
    return rep


def criterion_6_extension(depth: int = 12) -> Report:
    rep = Report()
    path = PiecewisePolyPath.monomials([1, 2])
    lift = signature_lift(path, cap=4)
    trunc = truncate_lift(lift, 1)
    words2 = [word(t, 2) for t in ("aa", "ab", "ba", "bb")]
    coarse = [Fraction(k, 16) for k in range(17)]

    def max_err(res) -> float:
        worst = 0.0
        for i in range(len(coarse)):
            for j in range(i + 1, len(coarse)):
                for w in words2:
                    approx = res.lift.eval(coarse[i], coarse[j], w)
                    exact = signature(path, coarse[i], coarse[j], w)
                    worst = max(worst, abs(float(approx - exact)))
        return worst

    errs = {}
    final = None
    for n in range(4, depth + 1):
        res = extend(trunc, 1, (0, 1), n)
        errs[n] = max_err(res)
        if n == depth:
            final = res

    ok = errs[depth] <= 1e-3
    rep.add(
        f"degree-2 extension at depth {depth} within 1e-3 (max err {errs[depth]:.2e})",
        ok,
        "" if ok else str(errs),
    )

    ns = sorted(errs)
    slope = _fit(ns, [math.log2(max(errs[n], 1e-300)) for n in ns])
    eps = 1.0
    ok = abs(slope + eps) <= 0.1 * eps
    rep.add(
        f"dyadic convergence slope {slope:.3f} within 10% of -eps = -1", ok,
        "" if ok else f"errors {errs}",
    )

    sub = final.chen_report
    rep.add(
        "Chen residual identity at degree N+1 (grid triples, tol 1e-3)",
        sub.passed,
        "" if sub.passed else sub.checks[0].witness,
    )

    # same construction on the MKW basis reproduces the exact planar lift
    from .roughpath import planar_lift

    pl = planar_lift(path, cap=3)
    res = extend(truncate_lift(pl, 1), 1, (0, 1), 10)
    ok, wit, worst = True, "", 0.0
    for f in mkw_hopf(2).basis(2):
        for i in (0, 4, 8):
            for j in (8, 12, 16):
                if coarse[i] >= coarse[j]:
                    continue
                approx = res.lift.eval(coarse[i], coarse[j], f)
                exact = lift_planar(path, coarse[i], coarse[j], f)
                worst = max(worst, abs(float(approx - exact)))
    ok = worst <= 2e-3
    rep.add(
        f"MKW-basis extension matches exact planar lift (depth 10, max err {worst:.2e})",
        ok,
        wit,
    )
    return rep


def _fit(xs, ys) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum(
        (x - mx) ** 2 for x in xs
    )


def criterion_7_gl(mass_max: int = 6, eval_degree: int = 4) -> Report:
    rep = Report()

    k, j, i = (GradedSeries.term(parse_forest(c)) for c in "kji")
    six = gl_product(gl_product(k, j), i)
    expected = "i[j[k]] + i[k,j] + j i[k] + j[k] i + k i[j] + k j i"
    ok = str(six) == expected
    rep.add("k*j*i reproduces the six-term display", ok, "" if ok else str(six))

    ok, wit = True, ""
    for n in range(1, mass_max + 1):
        for text in ("abcdef"[:n], "a" * n, ("ab" * n)[:n]):
            mass = iterated_gl_word(word(text)).total_mass()
            if mass != math.factorial(n):
                ok, wit = False, f"{text}: mass {mass}"
                break
        if not ok:
            break
    rep.add(f"iterated GL word mass = n! for n <= {mass_max}", ok, wit)

    # two-sided evaluation: word sum of GL images == forest sum with flow weights
    model = translation_model(
        [[Poly.coordinate(1, 0)], [Poly.coordinate(1, 0) * Poly.coordinate(1, 0)]]
    )
    path = PiecewisePolyPath.from_polynomials([(0, 1), (0, 0, Fraction(1, 2))])
    s, t = Fraction(0), Fraction(1, 2)
    lhs = zero_operator(1)
    import itertools

    for n in range(1, eval_degree + 1):
        for letters in itertools.product(range(2), repeat=n):
            w = Word(letters)
            coeff = signature(path, s, t, w)
            if not coeff:
                continue
            for f, c in iterated_gl_word(w).coeffs.items():
                lhs = lhs + elementary_differential(model, f).scale(coeff * c)
    rhs = zero_operator(1)
    for n in range(1, eval_degree + 1):
        for f in enumerate_forests(n, 2):
            wgt = flow_weight(path, s, t, f)
            if wgt:
                rhs = rhs + elementary_differential(model, f).scale(wgt)
    ok = lhs == rhs
    rep.add(
        f"two-sided evaluation agreement exact to degree {eval_degree}",
        ok,
        "" if ok else f"lhs {lhs} rhs {rhs}",
    )
    return rep


def criterion_8_order_study(fast: bool = False) -> Report:
    rep = Report()
    t_start = time.time()
    hs = [Fraction(1, 2**k) for k in range(4, 10 if not fast else 8)]

    model1 = translation_model([[Poly.coordinate(1, 0)]])
    line = PiecewisePolyPath.monomials([1])
    study1 = order_study(model1, line, [1, 2, 3], hs, [1.0])
    ok, wit = True, ""
    for N, slope in study1.slopes.items():
        if abs(slope - N) > 0.2:
            ok, wit = False, f"N={N}: slope {slope:.3f}"
            break
    rep.add(f"translation-model slopes {_fmt_slopes(study1.slopes)}", ok, wit)

    model2 = so3_sphere_model([[0, 0, 1], [1, 0, 0]])
    path2 = PiecewisePolyPath.from_polynomials([(0, 1), (0, 0, Fraction(1, 2))])
    y0 = [1.0, 0.0, 0.0]
    study2 = order_study(model2, path2, [1, 2, 3], hs, y0)
    ok, wit = True, ""
    for N, slope in study2.slopes.items():
        if abs(slope - N) > 0.2:
            ok, wit = False, f"N={N}: slope {slope:.3f}"
            break
    rep.add(f"sphere-model slopes {_fmt_slopes(study2.slopes)}", ok, wit)

    ok, wit = True, ""
    for r in study2.rows:
        if r["max_drift"] > 10.0 * r["h"] ** r["N"]:
            ok, wit = False, f"N={r['N']}, h={r['h']}: drift {r['max_drift']:.2e}"
            break
    rep.add("sphere invariant drift <= 10 h^N per unit time", ok, wit)

    model3 = so3_sphere_model([[0, 0, 1]])
    h = Fraction(1, 64)
    grid = [k * h for k in range(65)]
    traj = solve(model3, line, grid, y0, 3)
    rz = [math.cos(1.0), math.sin(1.0), 0.0]
    err = max(abs(float(a) - b) for a, b in zip(traj.endpoint, rz))
    bound = 10.0 * float(h) ** 3
    ok = err <= bound
    rep.add(
        f"endpoint matches R_z(1) y0 within N=3 bound (err {err:.2e} <= {bound:.2e})",
        ok,
        "",
    )

    elapsed = time.time() - t_start
    rep.add(f"order studies ran in {elapsed:.1f}s (< 120s)", elapsed < 120.0, "")
    return rep


def _fmt_slopes(slopes: dict) -> str:
    return ", ".join(f"N={n}: {s:.2f}" for n, s in sorted(slopes.items()))


def criterion_9_intro_expansion() -> Report:
    """Degree-3 coefficients of the formal solution match the five-forest
    regrouping of the six-term display, symbolically, on a translation model."""
    rep = Report()
    y = Poly.coordinate(1, 0)
    model = translation_model([[y], [Poly.constant(1, 1) + y * y]])
    path = PiecewisePolyPath.from_polynomials([(0, 1), (0, 0, Fraction(1, 2))])
    s, t = Fraction(0), Fraction(1, 3)

    f_op = [field_operator(model, i) for i in range(2)]

    def rhd(a, b):
        return operator_rhd(model, a, b)

    def sig(letters) -> Fraction:
        return signature(path, s, t, Word(letters))

    # six-term word side at degree 3
    lhs = zero_operator(1)
    import itertools

    for i, j, k in itertools.product(range(2), repeat=3):
        c = sig((i, j, k))
        if not c:
            continue
        fi, fj, fk = f_op[i], f_op[j], f_op[k]
        six = (
            fk.concat(fj).concat(fi)
            + rhd(fk, fj).concat(fi)
            + fk.concat(rhd(fj, fi))
            + fj.concat(rhd(fk, fi))
            + rhd(fk.concat(fj), fi)
            + rhd(rhd(fk, fj), fi)
        )
        lhs = lhs + six.scale(c)

    # five-forest regrouping
    mid = zero_operator(1)
    for i, j, k in itertools.product(range(2), repeat=3):
        c = sig((i, j, k))
        c2 = c + sig((i, k, j))
        fi, fj, fk = f_op[i], f_op[j], f_op[k]
        four = (
            fk.concat(fj).concat(fi)
            + rhd(fk, fj).concat(fi)
            + rhd(fk.concat(fj), fi)
            + rhd(rhd(fk, fj), fi)
        )
        mid = mid + four.scale(c) + fj.concat(rhd(fk, fi)).scale(c2)

    ok = lhs == mid
    rep.add("six-term display == five-forest regrouping (symbolic)", ok, "")

    # forest side: flow weights times elementary differentials, degree 3
    rhs = zero_operator(1)
    for f in enumerate_forests(3, 2):
        wgt = flow_weight(path, s, t, f)
        if wgt:
            rhs = rhs + elementary_differential(model, f).scale(wgt)
    ok = mid == rhs
    rep.add("five-forest regrouping == forest expansion coefficients", ok, "")
    return rep


CRITERIA = {
    1: ("Hopf axiom suite", criterion_1_hopf_axioms),
    2: ("factorial identities", criterion_2_factorials),
    3: ("character identities", criterion_3_characters),
    4: ("morphism suite", criterion_4_morphisms),
    5: ("signature/lift suite", criterion_5_signatures),
    6: ("extension theorem at desk scale", criterion_6_extension),
    7: ("GL/expansion consistency", criterion_7_gl),
    8: ("RDE order study", criterion_8_order_study),
    9: ("intro-expansion check", criterion_9_intro_expansion),
}

#: Sub-checks that are mathematically unattainable as specified; the checks
#: run faithfully and report FAIL, with the analysis in the project notes.
KNOWN_DEFECTS = {"a^c_<< Hopf morphism to degree 5 (known defect)"}


def run_all(skip: set[int] | None = None) -> dict:
    """Run every criterion; returns {number: (title, Report, seconds)}."""
    out = {}
    for num, (title, fn) in CRITERIA.items():
        if skip and num in skip:
            continue
        t0 = time.time()
        rep = fn()
        out[num] = (title, rep, time.time() - t0)
    return out
