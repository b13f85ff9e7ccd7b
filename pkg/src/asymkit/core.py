"""Asymmetry tensors and scalar asymmetry measures.

A pure state's sensitivity to the group action is captured by the quantum
geometric tensor over the generators; two mixed-state extensions (the kernel
form S and the metric-weighted family S_q) reduce to it on pure states and
shrink under covariant channels. The U(1) relative entropy of asymmetry gives
an independent entropic yardstick.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .numkit import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_cmatrix,
    check_density,
    check_hermitian,
    check_state,
    herm_eig,
    max_abs,
    vn_entropy,
)
from .repkit import GroupPoint, Representation, U1Spec, transport

__all__ = [
    "AsymmetryTensor",
    "MetricSpec",
    "qgt",
    "generalized_variance",
    "petz_norm",
    "s_matrix",
    "s_q_matrix",
    "skew_information",
    "u1_relative_entropy_asymmetry",
]


@dataclass(frozen=True, eq=False)
class AsymmetryTensor:
    """A dimG x dimG Hermitian PSD tensor tagged with its origin.

    kind is one of "QGT", "S", "S_q"; group_point records which component
    representative the state was transported by before evaluation.
    """

    kind: str
    matrix: np.ndarray
    group_point: GroupPoint = field(default_factory=GroupPoint)
    q: float | None = None
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        if self.kind not in ("QGT", "S", "S_q"):
            raise ValidationError(f"unknown tensor kind {self.kind!r}")
        m = check_hermitian(self.matrix, self.tol, f"{self.kind} tensor")
        w = np.linalg.eigvalsh(m)
        scale = max(float(w[-1]), 1.0)
        if w[0] < -self.tol.tol_psd * scale:
            raise ValidationError(f"{self.kind} tensor is not PSD (eigenvalue {w[0]:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def dim_g(self) -> int:
        return self.matrix.shape[0]

    def real_part(self) -> np.ndarray:
        """Information part (symmetric); for QGT this is the Fisher metric."""
        return self.matrix.real.copy()

    def imag_part(self) -> np.ndarray:
        """Curvature part (antisymmetric)."""
        return self.matrix.imag.copy()


@dataclass(frozen=True)
class MetricSpec:
    """Member of the interpolating metric family, parametrized by q in (0, 1)."""

    q: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.q < 1.0:
            raise ValidationError(f"metric parameter q must lie in (0, 1), got {self.q}")

    def f_at_zero(self) -> float:
        # only this boundary value and the eigenvalue weights in
        # _metric_weights enter any computation; q = 1/2 is the self-dual case
        return 1.0 - self.q


def qgt(
    rep: Representation,
    psi: object,
    group_point: GroupPoint = GroupPoint(),
    tol: ToleranceConfig | None = None,
) -> AsymmetryTensor:
    """Quantum geometric tensor Q_{mu nu} = <X_mu X_nu> - <X_mu><X_nu>.

    The state is transported by the group_point's representative first, so
    per-component tensors come from the same call. Computed in Gram form
    Y†(1-P)Y with Y holding the columns X_mu psi, which is Hermitian PSD by
    construction.
    """
    tol = tol or rep.tol
    v = check_state(psi, tol, "state")
    if v.size != rep.dim:
        raise ValidationError(f"state dim {v.size} does not match representation dim {rep.dim}")
    u = transport(rep, group_point)
    v = u @ v
    y = np.stack([x @ v for x in rep.generators], axis=1)
    overlaps = v.conj() @ y
    y_perp = y - np.outer(v, overlaps)
    mat = y_perp.conj().T @ y_perp
    return AsymmetryTensor("QGT", mat, group_point, tol=tol)


def generalized_variance(psi: object, o: object, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """V(psi, O) = <psi| O (1 - |psi><psi|) O† |psi>, real and >= 0 for any O."""
    v = check_state(psi, tol, "state")
    op = as_cmatrix(o, "observable")
    if op.shape != (v.size, v.size):
        raise ValidationError(f"observable shape {op.shape} does not match state dim {v.size}")
    w = op.conj().T @ v
    w_perp = w - v * (v.conj() @ w)
    return float(np.real(w_perp.conj() @ w_perp))


def _metric_weights(p: np.ndarray, q: float, tol: ToleranceConfig) -> np.ndarray:
    """Weight matrix w[l, k] = (p_l - p_k)^2 / ((1-q) p_l + q p_k).

    Pairs whose denominator falls at or below tol_kernel are excluded (set to
    zero): both eigenvalues vanish there and the true contribution is zero.
    """
    den = (1.0 - q) * p[:, None] + q * p[None, :]
    num = (p[:, None] - p[None, :]) ** 2
    mask = den > tol.tol_kernel
    out = np.zeros_like(den)
    out[mask] = num[mask] / den[mask]
    return out


def petz_norm(
    rho: object,
    o: object,
    spec: MetricSpec = MetricSpec(),
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Squared metric norm of i[rho, O] in the q-weighted eigenvalue form.

    Equals sum_{kl} (p_l - p_k)^2 / ((1-q) p_l + q p_k) |<l|O|k>|^2 over the
    eigendecomposition of rho; always real and >= 0.
    """
    r = check_density(rho, tol)
    op = as_cmatrix(o, "observable")
    if op.shape != r.shape:
        raise ValidationError(f"observable shape {op.shape} does not match state shape {r.shape}")
    p, basis = herm_eig(r, tol, "state")
    p = np.clip(p, 0.0, None)
    ob = basis.conj().T @ op @ basis
    w = _metric_weights(p, spec.q, tol)
    return float(np.real(np.sum(w * np.abs(ob) ** 2)))


def s_matrix(
    rep: Representation,
    rho: object,
    group_point: GroupPoint = GroupPoint(),
    tol: ToleranceConfig | None = None,
) -> AsymmetryTensor:
    """Kernel-form mixed-state tensor S_{mu nu} = Tr(rho X_mu (1 - P) X_nu).

    P projects onto the support of rho, so S vanishes exactly on full-rank
    states and reduces to the QGT on pure ones. Assembled as a Gram matrix of
    the operators (1-P) X_mu sqrt(rho), which keeps it PSD to roundoff.
    """
    tol = tol or rep.tol
    r = check_density(rho, tol)
    if r.shape != (rep.dim, rep.dim):
        raise ValidationError(f"state shape {r.shape} does not match representation dim {rep.dim}")
    u = transport(rep, group_point)
    r = u @ r @ u.conj().T
    p, basis = herm_eig(r, tol, "state")
    p = np.clip(p, 0.0, None)
    cut = tol.tol_kernel * max(float(p[-1]), 0.0)
    support = basis[:, p > cut]
    if support.shape[1] == rep.dim:
        # full support: 1 - P is identically zero, skip the roundoff residue
        zero = np.zeros((rep.dim_g, rep.dim_g), dtype=complex)
        return AsymmetryTensor("S", zero, group_point, tol=tol)
    proj_perp = np.eye(rep.dim) - support @ support.conj().T
    sqrt_rho = (basis * np.sqrt(p)) @ basis.conj().T
    blocks = [(proj_perp @ x @ sqrt_rho).reshape(-1) for x in rep.generators]
    b = np.stack(blocks, axis=1)
    return AsymmetryTensor("S", b.conj().T @ b, group_point, tol=tol)


def s_q_matrix(
    rep: Representation,
    rho: object,
    spec: MetricSpec = MetricSpec(),
    group_point: GroupPoint = GroupPoint(),
    tol: ToleranceConfig | None = None,
) -> AsymmetryTensor:
    """Metric-family tensor with entries built from the q-weighted eigenform.

    (S_q)_{mu nu} = f_q(0) * sum_{kl} w_q(p_l, p_k) <l|X_mu|k><k|X_nu|l>.
    On pure states this equals Q + ((1-q)/q) conj(Q); as q -> 1 it approaches
    the kernel form S.
    """
    tol = tol or rep.tol
    r = check_density(rho, tol)
    if r.shape != (rep.dim, rep.dim):
        raise ValidationError(f"state shape {r.shape} does not match representation dim {rep.dim}")
    u = transport(rep, group_point)
    r = u @ r @ u.conj().T
    p, basis = herm_eig(r, tol, "state")
    p = np.clip(p, 0.0, None)
    w = _metric_weights(p, spec.q, tol) * spec.f_at_zero()
    l_idx, k_idx = np.nonzero(w > 0.0)
    if l_idx.size == 0:
        mat = np.zeros((rep.dim_g, rep.dim_g), dtype=complex)
        return AsymmetryTensor("S_q", mat, group_point, q=spec.q, tol=tol)
    # rows of amp: sqrt(weight) * <l|X_mu|k> per surviving (l, k) pair
    amp = np.empty((l_idx.size, rep.dim_g), dtype=complex)
    root = np.sqrt(w[l_idx, k_idx])
    for mu, x in enumerate(rep.generators):
        xb = basis.conj().T @ x @ basis
        amp[:, mu] = root * xb[l_idx, k_idx]
    mat = np.einsum("pm,pn->mn", amp, amp.conj())
    return AsymmetryTensor("S_q", mat, group_point, q=spec.q, tol=tol)


def skew_information(
    rho: object,
    h: object,
    spec: MetricSpec = MetricSpec(),
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Scalar coherence measure (f_q(0)/2) * ||i[rho, H]||^2 in the q-metric.

    Equals the generalized variance V(rho, H) when rho is pure and q = 1/2.
    """
    hh = check_hermitian(h, tol, "observable")
    return 0.5 * spec.f_at_zero() * petz_norm(rho, hh, spec, tol)


def u1_relative_entropy_asymmetry(
    spec: U1Spec,
    rho: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Relative entropy of U(1) asymmetry: S(D(rho)) - S(rho) in nats.

    D dephases in the eigenspaces of the spec's Hamiltonian (exact degenerate
    grouping over the integer spectrum), which is the same as averaging the
    state over the circle action.
    """
    r = check_density(rho, tol)
    if r.shape != (spec.dim, spec.dim):
        raise ValidationError(f"state shape {r.shape} does not match U1 spec dim {spec.dim}")
    m = spec.basis.conj().T @ r @ spec.basis
    eigs = np.asarray(spec.eigenvalues)
    same = eigs[:, None] == eigs[None, :]
    dephased_eig = np.where(same, m, 0.0)
    dephased = spec.basis @ dephased_eig @ spec.basis.conj().T
    value = vn_entropy(dephased, tol) - vn_entropy(r, tol)
    return max(value, 0.0) if value > -1e-12 else value
