"""Hyper-distribution algebra."""

from hyperqif.hyper.algebra import (
    collapse,
    decompose,
    from_joint,
    joint_matrix,
    point_hyper,
    prior_of,
    reduce,
    vulnerability_n,
)
from hyperqif.hyper.model import (
    HigherHyper,
    Hyper,
    Leaf,
    Node,
    as_higher,
    hyper_from_matrix,
    make_hyper,
    make_node,
)

__all__ = [
    "Hyper",
    "HigherHyper",
    "Leaf",
    "Node",
    "make_hyper",
    "make_node",
    "hyper_from_matrix",
    "as_higher",
    "prior_of",
    "point_hyper",
    "joint_matrix",
    "from_joint",
    "decompose",
    "reduce",
    "collapse",
    "vulnerability_n",
]
