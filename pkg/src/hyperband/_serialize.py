"""Shared JSON helpers: complex scalars as [re, im], matrices row-major."""

from __future__ import annotations

import json

import numpy as np

__all__ = [
    "complex_to_json",
    "complex_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "canonical_dumps",
]


def complex_to_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if len(pair) != 2:
        raise ValueError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_json(m) -> list:
    """Row-major nested lists of [re, im] pairs."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    return [[complex_to_json(z) for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    data = [[complex_from_json(z) for z in row] for row in rows]
    m = np.array(data, dtype=complex)
    if m.ndim != 2:
        raise ValueError("expected a matrix (nested lists)")
    return m


def canonical_dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, repr floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)
