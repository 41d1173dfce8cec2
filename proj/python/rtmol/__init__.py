#
# rtmol - Copyright 2026 The rtmol Authors.
# SPDX-License-Identifier: Apache-2.0
#
"""Python bindings for the rtmol round-trip molecule/text toolkit."""

from ._rtmol import (
    RtmolError,
    bleu,
    canonical_smiles,
    check_random_bound,
    fingerprint,
    group_advantages,
    is_valid,
    kl_estimate,
    meteor_lite,
    ppo_clip,
    random_smiles,
    score,
    similarity,
    validity_failures,
)

__all__ = [
    "RtmolError",
    "bleu",
    "canonical_smiles",
    "check_random_bound",
    "fingerprint",
    "group_advantages",
    "is_valid",
    "kl_estimate",
    "meteor_lite",
    "ppo_clip",
    "random_smiles",
    "score",
    "similarity",
    "validity_failures",
]
__version__ = "0.1.0"
