"""Planar decorated forests, their combinatorial Hopf algebras, exact path
signatures and planarly branched rough paths, and Lie-Butcher integrators on
homogeneous spaces."""

from .algebra import (
    FreeSemigroup,
    GradedSeries,
    LinearFunctional,
    Rational,
    TableSemigroup,
    TensorSeries,
    Word,
    pair,
    word,
)
from .forests import (
    NonplanarForest,
    PlanarForest,
    PlanarTree,
    PosetView,
    b_plus,
    decompose,
    enumerate_forests,
    forget_planarity,
    iter_linear_extensions,
    linear_extensions,
    monte_carlo_volume,
    nonplanar_factorial,
    order_relations,
    parse_forest,
    planar_factorial,
    render_forest,
    symmetry_factor,
)
from .hopf import (
    HopfStructure,
    antipode,
    bck_coproduct,
    bck_hopf,
    bck_product,
    check_hopf_axioms,
    convolution,
    deconcat,
    gl_product,
    iterated_gl_word,
    left_graft,
    mkw_coproduct,
    mkw_hopf,
    mkw_product,
    quasi_shuffle,
    quasi_shuffle_hopf,
    shuffle,
    shuffle_hopf,
)
from .characters import (
    InverseFactorialChar,
    QGammaFunctional,
    gamma_decay_table,
    hopf_binomial_residual,
    q_char,
    q_gamma,
    q_power,
    q_value,
)
from .morphisms import (
    HopfMorphism,
    arborify_nonplanar,
    arborify_nonplanar_contracting,
    arborify_planar,
    arborify_planar_contracting,
    omega,
    pullback,
    verify_morphism,
)
from .roughpath import (
    PiecewisePolyPath,
    RoughPathLift,
    branched_lift,
    check_character,
    check_chen,
    extend,
    holder_table,
    lift_branched,
    lift_planar,
    planar_lift,
    sew,
    signature,
    signature_lift,
    truncate_lift,
)
from .rde import (
    ChartModel,
    LieButcherIntegrator,
    OperatorSeries,
    Poly,
    Trajectory,
    apply_operator,
    elementary_differential,
    flow_weight,
    lb_step,
    order_study,
    reference_solve,
    so3_sphere_model,
    solve,
    translation_model,
)

__version__ = "0.1.0"
