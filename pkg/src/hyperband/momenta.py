"""Momenta for genus-g translation groups.

Abelian momenta are points of the complexified Brillouin torus (C*)^{2g}: one
nonzero complex number per generator.  Nonabelian momenta assign an invertible
n x n matrix to each generator such that the surface relator maps to the
identity.  Unitarity is a property, not a requirement: non-unitary momenta are
first-class citizens (that is the point of complexifying).

An AbelianMomentum stores the reciprocals of its entries alongside the entries
themselves.  Downstream Hamiltonian assembly always uses the stored
reciprocals, which is what makes the adjoint-momentum identity hold exactly in
floating point (see `tight_binding.adjoint_momentum`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._serialize import complex_from_json, complex_to_json, matrix_from_json, matrix_to_json
from .surface_group import SurfaceGroup, evaluate_word, make_surface_group

__all__ = [
    "AbelianMomentum",
    "NonabelianMomentum",
    "MomentumReport",
    "euclidean_character",
    "validate",
    "direct_sum",
    "split_complex",
    "abelian_to_nonabelian",
    "momentum_to_json",
    "momentum_from_json",
]

#: residual threshold for "the relator maps to the identity"
TOL_RELATOR = 1e-9
#: residual threshold for "this momentum is unitary"
TOL_UNITARY = 1e-9
#: relative singular-value cutoff for commutant dimension counts
COMMUTANT_CUTOFF = 1e-8


@dataclass(frozen=True)
class AbelianMomentum:
    """A point of (C*)^{2g}: one nonzero complex entry per generator."""

    chi: np.ndarray
    chi_inv: np.ndarray = None

    def __post_init__(self):
        chi = np.array(self.chi, dtype=complex).reshape(-1)
        if chi.size == 0 or chi.size % 2 != 0:
            raise ValueError(f"need 2g entries for some g >= 1, got {chi.size}")
        if not np.all(np.isfinite(chi)):
            raise ValueError("momentum entries must be finite")
        if np.any(chi == 0):
            raise ValueError("momentum entries must be nonzero (points of (C*)^{2g})")
        if self.chi_inv is None:
            chi_inv = 1.0 / chi
        else:
            chi_inv = np.array(self.chi_inv, dtype=complex).reshape(-1)
            if chi_inv.shape != chi.shape:
                raise ValueError("chi_inv must match chi in length")
            if np.max(np.abs(chi * chi_inv - 1.0)) > 1e-9:
                raise ValueError("chi_inv entries are not reciprocals of chi")
        chi.setflags(write=False)
        chi_inv.setflags(write=False)
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "chi_inv", chi_inv)

    @property
    def genus(self) -> int:
        return self.chi.size // 2

    @property
    def unitary(self) -> bool:
        return bool(np.max(np.abs(np.abs(self.chi) - 1.0)) <= TOL_UNITARY)

    def group(self) -> SurfaceGroup:
        return make_surface_group(self.genus)


@dataclass(frozen=True)
class NonabelianMomentum:
    """Invertible n x n matrices, one per generator, with the relator -> identity.

    `rho_inv` may be supplied by constructors that know exact inverses (for
    example monomial induced representations); otherwise inverses are computed
    numerically.  Hamiltonian assembly always uses the stored inverses.
    """

    rho: tuple
    rho_inv: tuple = None

    def __post_init__(self):
        mats = tuple(np.array(m, dtype=complex) for m in self.rho)
        if len(mats) == 0 or len(mats) % 2 != 0:
            raise ValueError(f"need 2g matrices for some g >= 1, got {len(mats)}")
        n = mats[0].shape[0] if mats[0].ndim == 2 else -1
        for m in mats:
            if m.ndim != 2 or m.shape != (n, n):
                raise ValueError("all generator matrices must be square of one size")
            if not np.all(np.isfinite(m)):
                raise ValueError("generator matrices must be finite")
        if self.rho_inv is None:
            invs = []
            for idx, m in enumerate(mats):
                try:
                    invs.append(np.linalg.inv(m))
                except np.linalg.LinAlgError as exc:
                    raise ValueError(f"generator matrix {idx + 1} is singular") from exc
            invs = tuple(invs)
        else:
            invs = tuple(np.array(m, dtype=complex) for m in self.rho_inv)
            if len(invs) != len(mats):
                raise ValueError("rho_inv must match rho in length")
        for idx, (m, inv) in enumerate(zip(mats, invs)):
            if inv.shape != (n, n):
                raise ValueError("inverse matrices must match the generator shape")
            if not np.all(np.isfinite(inv)) or np.linalg.norm(inv @ m - np.eye(n)) > 1e-6:
                raise ValueError(f"generator matrix {idx + 1} is numerically singular")
        for m in mats + invs:
            m.setflags(write=False)
        object.__setattr__(self, "rho", mats)
        object.__setattr__(self, "rho_inv", invs)
        res = relator_residual(self)
        if res > TOL_RELATOR:
            raise ValueError(
                f"the surface relator does not map to the identity "
                f"(residual {res:.3e} > {TOL_RELATOR:.0e})"
            )

    @property
    def genus(self) -> int:
        return len(self.rho) // 2

    @property
    def rank(self) -> int:
        return self.rho[0].shape[0]

    @property
    def unitary(self) -> bool:
        n = self.rank
        res = max(np.linalg.norm(m @ m.conj().T - np.eye(n)) for m in self.rho)
        return bool(res <= TOL_UNITARY)

    def group(self) -> SurfaceGroup:
        return make_surface_group(self.genus)


@dataclass(frozen=True)
class MomentumReport:
    """Diagnostics from `validate`."""

    genus: int
    rank: int
    relator_residual: float
    unitarity_residual: float
    unitary: bool
    commutant_dimension: int
    irreducible: bool


def _as_matrices(momentum):
    if isinstance(momentum, AbelianMomentum):
        return [np.array([[z]]) for z in momentum.chi]
    return list(momentum.rho)


def relator_residual(momentum) -> float:
    """Frobenius distance of the relator's image from the identity."""
    mats = _as_matrices(momentum)
    group = make_surface_group(len(mats) // 2)
    image = evaluate_word(group.relator(), mats)
    return float(np.linalg.norm(image - np.eye(image.shape[0])))


def _unitarity_residual(momentum) -> float:
    if isinstance(momentum, AbelianMomentum):
        return float(np.max(np.abs(np.abs(momentum.chi) - 1.0)))
    n = momentum.rank
    return float(max(np.linalg.norm(m @ m.conj().T - np.eye(n)) for m in momentum.rho))


def commutant_dimension(momentum) -> int:
    """dim of {X : X rho(gamma_i) = rho(gamma_i) X for all i}, via SVD nullspace.

    Stacks the linear maps X -> [X, rho_i] in vectorized form
    (rho_i^T (x) I - I (x) rho_i) and counts singular values below
    COMMUTANT_CUTOFF relative to the largest.  A momentum is irreducible
    exactly when the commutant is the scalars (dimension 1).
    """
    mats = _as_matrices(momentum)
    n = mats[0].shape[0]
    eye = np.eye(n)
    blocks = [np.kron(m.T, eye) - np.kron(eye, m) for m in mats]
    stacked = np.vstack(blocks)
    svals = np.linalg.svd(stacked, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return n * n
    return int(np.sum(svals <= COMMUTANT_CUTOFF * svals[0]))


def validate(momentum) -> MomentumReport:
    """Check the relator, measure unitarity, and compute the commutant."""
    if isinstance(momentum, AbelianMomentum):
        genus, rank = momentum.genus, 1
    elif isinstance(momentum, NonabelianMomentum):
        genus, rank = momentum.genus, momentum.rank
    else:
        raise TypeError(f"not a momentum: {type(momentum).__name__}")
    rel = relator_residual(momentum)
    uni = _unitarity_residual(momentum)
    cdim = commutant_dimension(momentum)
    return MomentumReport(
        genus=genus,
        rank=rank,
        relator_residual=rel,
        unitarity_residual=uni,
        unitary=uni <= TOL_UNITARY,
        commutant_dimension=cdim,
        irreducible=cdim == 1,
    )


def euclidean_character(k, tau) -> AbelianMomentum:
    """The genus-1 character of wave vector k on the torus with periods (1, tau).

    `k` is either a single complex number, read as the real wave vector
    (Re k, Im k), or a pair (k_x, k_y) whose components may themselves be
    complex (complexified momenta).  The character value on a lattice vector
    gamma = (g_x, g_y) is exp(2 pi i (k_x g_x + k_y g_y)), extended bilinearly,
    and the two generators are gamma_1 = (1, 0), gamma_2 = (Re tau, Im tau).
    """
    tau = complex(tau)
    if tau.imag == 0:
        raise ValueError("tau must have nonzero imaginary part")
    if isinstance(k, (tuple, list, np.ndarray)):
        if len(k) != 2:
            raise ValueError("k must be a complex number or a pair (k_x, k_y)")
        kx, ky = complex(k[0]), complex(k[1])
    else:
        k = complex(k)
        kx, ky = complex(k.real), complex(k.imag)
    two_pi_i = 2j * np.pi
    chi1 = np.exp(two_pi_i * kx)
    chi2 = np.exp(two_pi_i * (kx * tau.real + ky * tau.imag))
    return AbelianMomentum(np.array([chi1, chi2]))


def direct_sum(first, second) -> NonabelianMomentum:
    """Block-diagonal sum of two momenta on the same group."""
    a = abelian_to_nonabelian(first) if isinstance(first, AbelianMomentum) else first
    b = abelian_to_nonabelian(second) if isinstance(second, AbelianMomentum) else second
    if not isinstance(a, NonabelianMomentum) or not isinstance(b, NonabelianMomentum):
        raise TypeError("direct_sum expects momenta")
    if a.genus != b.genus:
        raise ValueError(f"genus mismatch: {a.genus} vs {b.genus}")
    na, nb = a.rank, b.rank

    def block(ma, mb):
        m = np.zeros((na + nb, na + nb), dtype=complex)
        m[:na, :na] = ma
        m[na:, na:] = mb
        return m

    mats = tuple(block(ma, mb) for ma, mb in zip(a.rho, b.rho))
    invs = tuple(block(ma, mb) for ma, mb in zip(a.rho_inv, b.rho_inv))
    return NonabelianMomentum(mats, invs)


def abelian_to_nonabelian(momentum: AbelianMomentum) -> NonabelianMomentum:
    """View a character as a rank-1 matrix momentum."""
    return NonabelianMomentum(
        tuple(np.array([[z]]) for z in momentum.chi),
        tuple(np.array([[w]]) for w in momentum.chi_inv),
    )


def split_complex(momentum: AbelianMomentum):
    """Polar split chi = (unitary part) * (positive moduli).

    Returns (AbelianMomentum with unit-modulus entries, ndarray of moduli).
    The product of the parts recovers chi to a couple of ulp.
    """
    moduli = np.abs(momentum.chi)
    phases = momentum.chi / moduli
    return AbelianMomentum(phases), moduli


def momentum_to_json(momentum) -> dict:
    if isinstance(momentum, AbelianMomentum):
        return {"momentum": "abelian", "chi": [complex_to_json(z) for z in momentum.chi]}
    if isinstance(momentum, NonabelianMomentum):
        return {"momentum": "nonabelian", "rho": [matrix_to_json(m) for m in momentum.rho]}
    raise TypeError(f"not a momentum: {type(momentum).__name__}")


def momentum_from_json(data: dict):
    kind = data.get("momentum")
    if kind == "abelian":
        return AbelianMomentum(np.array([complex_from_json(z) for z in data["chi"]]))
    if kind == "nonabelian":
        return NonabelianMomentum(tuple(matrix_from_json(m) for m in data["rho"]))
    raise ValueError(f"unknown momentum kind: {kind!r}")
