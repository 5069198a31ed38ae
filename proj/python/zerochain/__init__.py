# Copyright 2026 The zerochain Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the zerochain hard instance."""

import json as _json

from ._core import (
    Instance,
    InstanceParams,
    bounds_json,
    kappa_A,
    kappa_joint,
    run_alm,
    run_criterion,
    run_ladmm,
    run_penalty,
    run_random_generic,
)


def bounds(instance):
    """Bounds table of an instance as a dict."""
    return _json.loads(bounds_json(instance))


__all__ = [
    "Instance",
    "InstanceParams",
    "bounds",
    "bounds_json",
    "kappa_A",
    "kappa_joint",
    "run_alm",
    "run_criterion",
    "run_ladmm",
    "run_penalty",
    "run_random_generic",
]
