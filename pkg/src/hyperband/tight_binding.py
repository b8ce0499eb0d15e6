"""Tight-binding models on genus-g translation groups and their Bloch Hamiltonians.

A model is a finite cell of d states with a Hermitian on-site matrix M and one
d x d hop matrix J_gamma per group generator (hops along single generators
only; longer-range couplings belong to a larger cell).  Evaluating at an
abelian momentum chi gives

    H(chi) = M + sum_i  chi_i J_i + chi_i^{-1} J_i^dagger

and at a rank-n nonabelian momentum rho

    H(rho) = M (x) I_n + sum_i  J_i (x) rho_i + J_i^dagger (x) rho_i^{-1}

with Kronecker factors ordered (cell state) (x) (representation space).

Floating-point contract: assembly accumulates one generator pair
chi_i J_i + chi_i^{-1} J_i^dagger per addition step, and the reciprocals
chi_i^{-1} are the ones stored on the momentum.  Together these make
`adjoint_momentum` an exact involution on Hamiltonians: H(adjoint(chi)) equals
H(chi)^dagger entry-for-entry in floating point, not merely up to rounding.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from ._serialize import canonical_dumps, matrix_from_json, matrix_to_json
from .momenta import AbelianMomentum, NonabelianMomentum
from .surface_group import SurfaceGroup, make_surface_group

__all__ = [
    "TightBindingModel",
    "BlochHamiltonian",
    "bloch_abelian",
    "bloch_nonabelian",
    "adjoint_momentum",
    "model_to_json",
    "model_from_json",
    "read_model",
    "write_model",
]

#: largest tolerated anti-Hermitian part of a supplied on-site matrix
TOL_HERMITIAN = 1e-8

FORMAT_KEY = "hyperband_model"
FORMAT_VERSION = 1


class TightBindingModel:
    """Cell data (on-site matrix + one hop matrix per generator) over a group."""

    def __init__(self, group: SurfaceGroup, onsite, hops, tol: float = TOL_HERMITIAN):
        if not isinstance(group, SurfaceGroup):
            group = make_surface_group(int(group))
        onsite = np.array(onsite, dtype=complex)
        if onsite.ndim != 2 or onsite.shape[0] != onsite.shape[1]:
            raise ValueError("onsite matrix must be square")
        d = onsite.shape[0]
        hops = tuple(np.array(h, dtype=complex) for h in hops)
        if len(hops) != 2 * group.genus:
            raise ValueError(
                f"need {2 * group.genus} hop matrices for genus {group.genus}, got {len(hops)}"
            )
        for h in hops:
            if h.shape != (d, d):
                raise ValueError("hop matrices must match the onsite matrix shape")
            if not np.all(np.isfinite(h)):
                raise ValueError("hop matrices must be finite")
        if not np.all(np.isfinite(onsite)):
            raise ValueError("onsite matrix must be finite")
        residual = float(np.linalg.norm(onsite - onsite.conj().T))
        scale = max(1.0, float(np.linalg.norm(onsite)))
        if residual > tol * scale:
            raise ValueError(
                f"onsite matrix is not Hermitian (residual {residual:.3e}); "
                "symmetrization only absorbs residuals below "
                f"{tol:.0e} relative"
            )
        symmetrized = (onsite + onsite.conj().T) / 2.0
        symmetrized.setflags(write=False)
        self.group = group
        self.dim = d
        self.onsite = symmetrized
        self.onsite_residual = residual
        self.hops = hops
        self.hops_dagger = tuple(h.conj().T for h in hops)
        for h in self.hops + self.hops_dagger:
            h.setflags(write=False)

    @property
    def genus(self) -> int:
        return self.group.genus

    def canonical_json(self) -> dict:
        return model_to_json(self)

    @property
    def content_hash(self) -> str:
        """First 16 hex digits of the sha256 of the canonical JSON text."""
        text = canonical_dumps(model_to_json(self))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    def __repr__(self):
        return (
            f"TightBindingModel(genus={self.genus}, dim={self.dim}, "
            f"hash={self.content_hash})"
        )


@dataclass(frozen=True)
class BlochHamiltonian:
    """An assembled Hamiltonian together with the momentum that produced it."""

    matrix: np.ndarray
    momentum: object
    hermitian: bool

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def bloch_abelian(model: TightBindingModel, momentum: AbelianMomentum) -> BlochHamiltonian:
    """H(chi) = M + sum_i chi_i J_i + chi_i^{-1} J_i^dagger."""
    if not isinstance(momentum, AbelianMomentum):
        raise TypeError("bloch_abelian expects an AbelianMomentum")
    if momentum.genus != model.genus:
        raise ValueError(f"genus mismatch: model {model.genus}, momentum {momentum.genus}")
    chi, chi_inv = momentum.chi, momentum.chi_inv
    H = np.array(model.onsite, dtype=complex)
    for i in range(2 * model.genus):
        H += chi[i] * model.hops[i] + chi_inv[i] * model.hops_dagger[i]
    return BlochHamiltonian(H, momentum, momentum.unitary)


def bloch_nonabelian(model: TightBindingModel, momentum: NonabelianMomentum) -> BlochHamiltonian:
    """H(rho) = M (x) I + sum_i J_i (x) rho_i + J_i^dagger (x) rho_i^{-1}."""
    if isinstance(momentum, AbelianMomentum):
        raise TypeError("bloch_nonabelian expects a NonabelianMomentum; use bloch_abelian")
    if momentum.genus != model.genus:
        raise ValueError(f"genus mismatch: model {model.genus}, momentum {momentum.genus}")
    n = momentum.rank
    H = np.kron(model.onsite, np.eye(n, dtype=complex))
    for i in range(2 * model.genus):
        H += np.kron(model.hops[i], momentum.rho[i]) + np.kron(
            model.hops_dagger[i], momentum.rho_inv[i]
        )
    return BlochHamiltonian(H, momentum, momentum.unitary)


def adjoint_momentum(momentum: AbelianMomentum) -> AbelianMomentum:
    """The momentum chi' with H(chi') = H(chi)^dagger, exactly.

    chi'_i = conj(chi_i)^{-1}.  Both the entries and their reciprocals are
    formed by conjugating the stored arrays (conjugation is exact in IEEE
    arithmetic), so assembling at chi' reproduces H(chi)^dagger bit-for-bit
    up to the sign of zeros.  Involution: adjoint(adjoint(chi)) == chi.
    """
    return AbelianMomentum(np.conj(momentum.chi_inv), np.conj(momentum.chi))


def model_to_json(model: TightBindingModel) -> dict:
    return {
        FORMAT_KEY: FORMAT_VERSION,
        "genus": model.genus,
        "dim": model.dim,
        "onsite": matrix_to_json(model.onsite),
        "hops": [matrix_to_json(h) for h in model.hops],
    }


def model_from_json(data: dict) -> TightBindingModel:
    if data.get(FORMAT_KEY) != FORMAT_VERSION:
        raise ValueError(
            f"not a model document (missing or unsupported {FORMAT_KEY!r} marker)"
        )
    genus = int(data["genus"])
    dim = int(data["dim"])
    onsite = matrix_from_json(data["onsite"])
    hops = [matrix_from_json(h) for h in data["hops"]]
    if onsite.shape != (dim, dim):
        raise ValueError(f"onsite shape {onsite.shape} does not match dim={dim}")
    return TightBindingModel(make_surface_group(genus), onsite, hops)


def read_model(path) -> TightBindingModel:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return model_from_json(data)


def write_model(model: TightBindingModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
