"""Aggregation matrices and abstractions of hypers."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np

from hyperqif.config import EPS_NORM
from hyperqif.core.channel import Channel, make_channel, make_joint
from hyperqif.core.distribution import SecretSpace
from hyperqif.errors import DimensionMismatch
from hyperqif.hyper.algebra import from_joint, joint_matrix
from hyperqif.hyper.model import Hyper

# Rows index the concrete hyper's inners, columns the abstract hyper's inners;
# entry (i, j) is p(abstract j | concrete i).
AggregationMatrix = Channel


def deterministic_aggregation(
    inputs: SecretSpace | Sequence[str],
    outputs: SecretSpace | Sequence[str],
    mapping: Mapping[str, str] | Sequence[str],
) -> AggregationMatrix:
    """Aggregation sending each input strategy to exactly one output strategy.

    Args:
        inputs: Labels of the concrete inners
        outputs: Labels of the abstract inners
        mapping: Output label per input, as a dict or a sequence aligned with inputs
    """
    ins = inputs if isinstance(inputs, SecretSpace) else SecretSpace.of(inputs)
    outs = outputs if isinstance(outputs, SecretSpace) else SecretSpace.of(outputs)
    targets = [mapping[label] for label in ins] if isinstance(mapping, Mapping) else list(mapping)
    if len(targets) != len(ins):
        raise DimensionMismatch(f"{len(targets)} targets for {len(ins)} input strategies")
    matrix = np.zeros((len(ins), len(outs)))
    for i, target in enumerate(targets):
        matrix[i, outs.index(target)] = 1.0
    return make_channel(ins, outs, matrix)


def as_aggregation(
    hyper: Hyper, aggregation: AggregationMatrix | np.ndarray, tol: float = EPS_NORM
) -> AggregationMatrix:
    """Coerce a raw matrix into an aggregation for hyper, validating it.

    Raises:
        DimensionMismatch: If the row count differs from the number of inners
        NotStochastic: If a row is not a distribution
    """
    if isinstance(aggregation, Channel):
        if len(aggregation.input_space) != len(hyper):
            raise DimensionMismatch(
                f"aggregation has {len(aggregation.input_space)} rows "
                f"for a hyper of {len(hyper)} inners"
            )
        return aggregation
    arr = np.asarray(aggregation, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != len(hyper):
        raise DimensionMismatch(
            f"aggregation has shape {arr.shape} for a hyper of {len(hyper)} inners"
        )
    return make_channel(hyper.strategies, SecretSpace.indexed(arr.shape[1], "m"), arr, tol=tol)


def apply_aggregation(
    hyper: Hyper, aggregation: AggregationMatrix | np.ndarray, tol: float = EPS_NORM
) -> Hyper:
    """The abstraction H.A, computed as from_joint([[H]] x A).

    Abstract inners that receive no mass are dropped; the prior is preserved.

    Raises:
        DimensionMismatch: If A's row count differs from the number of inners of H
        NotStochastic: If A is not row-stochastic
    """
    agg = as_aggregation(hyper, aggregation, tol)
    product = joint_matrix(hyper).matrix @ agg.matrix
    return from_joint(make_joint(hyper.space, agg.output_space, product, tol=tol), tol=tol)
