"""Exact computation of the rooted-tree series Omega, its q-deformation Omega_q,
and their images in the free dendriform algebra."""

from .arith import (
    BigRational,
    DivergenceError,
    PoleError,
    QPolynomial,
    RationalFunction,
    bernoulli,
    cyclotomic,
    eval_at,
    infinity_limit,
    infinity_valuation,
    q_binomial,
    q_integer,
)
from .dendriform import (
    DendriformUnitError,
    DendSeries,
    PlanarBinaryTree,
    dend_prec,
    dend_prelie,
    dend_star,
    dend_succ,
    descent_set,
    left_combs,
    major_index,
    omega_q_dend_explicit,
    omega_q_dend_recursive,
    planar_trees,
    right_combs,
    verify_EB,
)
from .omega import (
    OmegaClassical,
    OmegaQ,
    carlitz_oracle,
    denominator_check,
    exp_forest,
    exp_star_action,
    extract_carlitz,
    extract_qlog,
    omega_classical,
    omega_infinity,
    omega_q,
    omega_q_via_forks,
    specialize,
    vector_field_image,
)
from .series import ForestSeries, TreeSeries, q_shift, suspension
from .trees import (
    DOT,
    Forest,
    RootedTree,
    aut_count,
    corolla,
    enumerate_trees,
    fork_substitute,
    graft,
    linear_tree,
    multi_node_graft,
    project_pi,
    star_product,
)

__version__ = "0.1.0"
