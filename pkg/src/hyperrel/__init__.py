"""Exact composition of equivariant linear canonical relations, with excess classes."""

from .grouprep import (
    CIRCLE,
    TRIVIAL,
    CircleAction,
    CircleWeights,
    FiniteAction,
    FiniteChar,
    FiniteGroup,
    GroupError,
    TrivialAction,
    TrivialDim,
    UnsupportedModel,
    class_add,
    class_equal,
    class_is_zero,
    close_group,
    invariant_complement,
    invariant_lagrangian_complement,
    is_invariant,
    iso_class,
)
from .linalg import Mat, Rat, Subspace, complement_extend, intersect, kernel, rref_canonical, sum_spaces
from .relations import (
    CanRel,
    CompositionError,
    RelationError,
    compose_set,
    delta,
    epsilon,
    factor,
    graph,
    identity,
    is_congenial,
    is_coreduction,
    is_reduction,
    make_relation,
    pair_excess,
    product_rel,
    transpose,
)
from .symplectic import SympGSpace, classify, dual, product, standard_space, symp_orthogonal, unit_space
from .wwcat import (
    HyperLagrangianForm,
    IndexedRel,
    Word,
    hyper_normal_form,
    lemma4_normal_form,
    normalize,
    shadow,
    shift_action,
    trajectory_space,
    word_excess,
    ww_compose,
    ww_equal,
    ww_tensor,
    ww_trace,
)

__version__ = "0.1.0"
