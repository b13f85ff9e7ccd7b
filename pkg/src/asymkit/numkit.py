"""Numerical substrate: validated complex matrices, spectral helpers, tensor
powers with a hard dimension cap, and state distances.

Everything downstream funnels its linear algebra through this module so that
tolerance handling and kernel classification stay consistent across the
package.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import ResourceCapError, ValidationError

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "tensor_cap",
    "require_within_cap",
    "as_cmatrix",
    "as_vector",
    "check_hermitian",
    "check_state",
    "check_density",
    "herm_eig",
    "pinv",
    "psd_sqrt",
    "psd_inv_sqrt",
    "kernel_split",
    "exp_i_herm",
    "tensor_product",
    "tensor_power",
    "vec_tensor_power",
    "state_distance",
    "vn_entropy",
    "binary_entropy",
    "max_abs",
]

DEFAULT_TENSOR_CAP = 4096
_CAP_ENV = "ASYMKIT_TENSOR_CAP"


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances used across the package.

    tol_kernel is relative to the largest eigenvalue of the matrix being
    split; the others are absolute on unit-scale data.
    """

    tol_herm: float = 1e-10
    tol_norm: float = 1e-10
    tol_psd: float = 1e-9
    tol_kernel: float = 1e-9
    tol_residual: float = 1e-8

    def with_overrides(self, **kw: float) -> "ToleranceConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


DEFAULT_TOL = ToleranceConfig()


def tensor_cap() -> int:
    """Active tensor-dimension cap; ASYMKIT_TENSOR_CAP overrides the default."""
    raw = os.environ.get(_CAP_ENV)
    if raw is None:
        return DEFAULT_TENSOR_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"{_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValidationError(f"{_CAP_ENV} must be positive, got {cap}")
    return cap


def require_within_cap(dim: int, label: str = "tensor power") -> None:
    cap = tensor_cap()
    if dim > cap:
        raise ResourceCapError(
            f"{label} needs dimension {dim}, above the cap {cap} "
            f"(raise {_CAP_ENV} to override)"
        )


def as_cmatrix(m: object, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex128 square-or-rectangular 2d array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def as_vector(v: object, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.size == 0:
        raise ValidationError(f"{name} is empty")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def check_hermitian(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within tol_herm (relative to scale) and return the
    Hermitian part, which kills roundoff-level asymmetry without masking real
    violations."""
    arr = as_cmatrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    gap = max_abs(arr - arr.conj().T)
    if gap > tol.tol_herm * (1.0 + max_abs(arr)):
        raise ValidationError(f"{name} is not Hermitian (defect {gap:.3e})")
    return 0.5 * (arr + arr.conj().T)


def check_state(v: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "state") -> np.ndarray:
    """Validate a pure-state vector: finite, norm 1 within tol_norm."""
    arr = as_vector(v, name)
    nrm = float(np.linalg.norm(arr))
    if abs(nrm - 1.0) > tol.tol_norm:
        raise ValidationError(f"{name} is not normalized (norm {nrm:.12f})")
    return arr / nrm


def check_density(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "density matrix") -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -tol_psd."""
    arr = check_hermitian(m, tol, name)
    tr = float(arr.trace().real)
    if abs(tr - 1.0) > tol.tol_norm:
        raise ValidationError(f"{name} trace is {tr:.12f}, expected 1")
    w = np.linalg.eigvalsh(arr)
    if w[0] < -tol.tol_psd:
        raise ValidationError(f"{name} has negative eigenvalue {w[0]:.3e}")
    return arr


def herm_eig(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "matrix") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a validated Hermitian matrix, eigenvalues ascending."""
    arr = check_hermitian(m, tol, name)
    w, v = np.linalg.eigh(arr)
    return w, v


def pinv(m: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse with the package-wide relative kernel cutoff."""
    return np.linalg.pinv(as_cmatrix(m), rcond=tol.tol_kernel)


def _psd_eig(m: object, tol: ToleranceConfig, name: str) -> tuple[np.ndarray, np.ndarray]:
    # shared PSD gate: validate, then clip kernel-level negatives to zero
    w, v = herm_eig(m, tol, name)
    scale = max(float(w[-1]), 0.0)
    if w[0] < -tol.tol_psd * max(scale, 1.0):
        raise ValidationError(f"{name} is not PSD (eigenvalue {w[0]:.3e})")
    return np.clip(w, 0.0, None), v


def psd_sqrt(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    w, v = _psd_eig(m, tol, name)
    return (v * np.sqrt(w)) @ v.conj().T


def psd_inv_sqrt(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    """Inverse square root on the support, zero on the kernel."""
    w, v = _psd_eig(m, tol, name)
    cut = tol.tol_kernel * max(float(w[-1]), 0.0)
    inv = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
    return (v * inv) @ v.conj().T


def _kernel_split_eigs(m: object, tol: ToleranceConfig, name: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w, v = _psd_eig(m, tol, name)
    cut = tol.tol_kernel * float(w[-1]) if w.size else 0.0
    keep = w > cut
    return v[:, keep], v[:, ~keep], w[~keep]


def kernel_split(m: object, tol: ToleranceConfig = DEFAULT_TOL, name: str = "matrix") -> tuple[np.ndarray, np.ndarray]:
    """Split a PSD matrix into support/kernel eigenbases.

    Returns (support_basis, kernel_basis); columns are orthonormal, and
    eigenvalues below tol_kernel * lambda_max are classified as kernel.
    """
    supp, kern, _ = _kernel_split_eigs(m, tol, name)
    return supp, kern


def exp_i_herm(h: object, scale: float = 1.0, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """exp(i * scale * H) for Hermitian H via eigendecomposition."""
    w, v = herm_eig(h, tol, "generator")
    return (v * np.exp(1j * scale * w)) @ v.conj().T


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_power(m: object, n: int, label: str = "tensor power") -> np.ndarray:
    """n-fold Kronecker power of a matrix, guarded by the dimension cap."""
    arr = as_cmatrix(m)
    if n < 1:
        raise ValidationError(f"tensor power needs n >= 1, got {n}")
    require_within_cap(arr.shape[0] ** n, label)
    require_within_cap(arr.shape[1] ** n, label)
    out = arr
    for _ in range(n - 1):
        out = np.kron(out, arr)
    return out


def vec_tensor_power(v: object, n: int, label: str = "tensor power") -> np.ndarray:
    arr = as_vector(v)
    if n < 1:
        raise ValidationError(f"tensor power needs n >= 1, got {n}")
    require_within_cap(arr.size ** n, label)
    out = arr
    for _ in range(n - 1):
        out = np.kron(out, arr)
    return out


def state_distance(a: object, b: object, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[float, float]:
    """Trace distance and fidelity between two density matrices.

    Fidelity uses the (Tr sqrt(sqrt(a) b sqrt(a)))^2 convention, so it equals
    |<a|b>|^2 on pure states.
    """
    ra = check_density(a, tol, "first state")
    rb = check_density(b, tol, "second state")
    if ra.shape != rb.shape:
        raise ValidationError(f"state shapes differ: {ra.shape} vs {rb.shape}")
    diff = np.linalg.eigvalsh(ra - rb)
    tdist = 0.5 * float(np.sum(np.abs(diff)))
    sq = psd_sqrt(ra, tol, "first state")
    inner = sq @ rb @ sq
    w = np.clip(np.linalg.eigvalsh(0.5 * (inner + inner.conj().T)), 0.0, None)
    fid = float(np.sum(np.sqrt(w)) ** 2)
    return tdist, min(fid, 1.0)


def vn_entropy(rho: object, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Von Neumann entropy in nats."""
    w, _ = _psd_eig(check_density(rho, tol), tol, "density matrix")
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w))) if w.size else 0.0


def binary_entropy(p: float) -> float:
    """H(p) in nats; 0 at the endpoints."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)
