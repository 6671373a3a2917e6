"""Labeled distributions, channels and joints."""

from hyperqif.core.channel import (
    Channel,
    JointBreakdown,
    JointDistribution,
    identity_channel,
    joint_from,
    make_channel,
    make_joint,
    marginals_and_conditionals,
    noninterferent_channel,
    push_through,
)
from hyperqif.core.distribution import (
    Distribution,
    SecretSpace,
    make_distribution,
    point_distribution,
    uniform_distribution,
)

__all__ = [
    "SecretSpace",
    "Distribution",
    "make_distribution",
    "point_distribution",
    "uniform_distribution",
    "Channel",
    "JointDistribution",
    "JointBreakdown",
    "make_channel",
    "make_joint",
    "identity_channel",
    "noninterferent_channel",
    "joint_from",
    "marginals_and_conditionals",
    "push_through",
]
