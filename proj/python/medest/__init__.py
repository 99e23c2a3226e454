"""Median-based robust estimators for means and pairwise expectations."""

from ._core import (
    InfeasiblePlan,
    InsufficientData,
    complete_ustat,
    draw,
    estimate_components,
    median,
    moiu,
    mom,
    mom_split_pairs,
    morm,
    moru,
    mou,
    plan_moiu,
    plan_mom,
    plan_mom_split_pairs,
    plan_morm,
    plan_moru,
    plan_mou,
    split_pairs_estimate,
)

__all__ = [
    "InfeasiblePlan",
    "InsufficientData",
    "complete_ustat",
    "draw",
    "estimate_components",
    "median",
    "moiu",
    "mom",
    "mom_split_pairs",
    "morm",
    "moru",
    "mou",
    "plan_moiu",
    "plan_mom",
    "plan_mom_split_pairs",
    "plan_morm",
    "plan_moru",
    "plan_mou",
    "split_pairs_estimate",
]
