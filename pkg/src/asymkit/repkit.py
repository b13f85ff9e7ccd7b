"""Group representations as generator lists plus component representatives.

A compact group enters the library through the Hermitian generators of its
identity component and one unitary representative per connected component
(identity first). U(1) actions additionally carry an integer-spectrum
Hamiltonian, which unlocks exact twirls and complete symmetry-subgroup
comparisons downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .numkit import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_cmatrix,
    check_hermitian,
    check_state,
    exp_i_herm,
    max_abs,
    require_within_cap,
    tensor_power,
)

__all__ = [
    "Representation",
    "RepPair",
    "U1Spec",
    "GroupPoint",
    "unitary_at",
    "lift_projective",
    "congruence_matrix",
    "projected_generators",
    "iid_generators",
    "u1_symmetry_divisor",
]


def _check_unitary(u: object, dim: int, tol: ToleranceConfig, name: str) -> np.ndarray:
    arr = as_cmatrix(u, name)
    if arr.shape != (dim, dim):
        raise ValidationError(f"{name} must be {dim}x{dim}, got {arr.shape}")
    defect = max_abs(arr.conj().T @ arr - np.eye(dim))
    if defect > tol.tol_residual:
        raise ValidationError(f"{name} is not unitary (defect {defect:.3e})")
    return arr


@dataclass(frozen=True, eq=False)
class Representation:
    """Unitary representation data: Hermitian generators and component reps.

    component_reps[0] must be the identity; the remaining entries pick out the
    other connected components. A finite group is the special case of an empty
    or trivial generator span plus an exhaustive component list.
    """

    dim: int
    generators: tuple[np.ndarray, ...]
    component_reps: tuple[np.ndarray, ...] = ()
    label: str = ""
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValidationError(f"representation dim must be positive, got {self.dim}")
        gens = tuple(
            check_hermitian(g, self.tol, f"generator {i}") for i, g in enumerate(self.generators)
        )
        if not gens:
            raise ValidationError("representation needs at least one generator")
        for i, g in enumerate(gens):
            if g.shape != (self.dim, self.dim):
                raise ValidationError(f"generator {i} has shape {g.shape}, expected ({self.dim}, {self.dim})")
        comps = self.component_reps or (np.eye(self.dim, dtype=complex),)
        comps = tuple(_check_unitary(u, self.dim, self.tol, f"component rep {i}") for i, u in enumerate(comps))
        if max_abs(comps[0] - np.eye(self.dim)) > self.tol.tol_residual:
            raise ValidationError("component_reps[0] must be the identity")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "component_reps", comps)

    @property
    def dim_g(self) -> int:
        return len(self.generators)

    @property
    def n_components(self) -> int:
        return len(self.component_reps)


@dataclass(frozen=True, eq=False)
class RepPair:
    """Input/output representations of the same group, with matched components.

    component_pairs lists (U_in, U_out) for each connected component, identity
    pair first; when omitted only the identity component is declared.
    """

    rep_in: Representation
    rep_out: Representation
    component_pairs: tuple[tuple[np.ndarray, np.ndarray], ...] = ()

    def __post_init__(self) -> None:
        if self.rep_in.dim_g != self.rep_out.dim_g:
            raise ValidationError(
                f"generator counts differ: {self.rep_in.dim_g} vs {self.rep_out.dim_g}"
            )
        pairs = self.component_pairs
        if not pairs:
            pairs = tuple(
                (uin, uout)
                for uin, uout in zip(self.rep_in.component_reps, self.rep_out.component_reps)
            )
            if len(self.rep_in.component_reps) != len(self.rep_out.component_reps):
                raise ValidationError("component counts differ between the two representations")
        checked = []
        for i, (uin, uout) in enumerate(pairs):
            checked.append(
                (
                    _check_unitary(uin, self.rep_in.dim, self.rep_in.tol, f"component pair {i} (in)"),
                    _check_unitary(uout, self.rep_out.dim, self.rep_out.tol, f"component pair {i} (out)"),
                )
            )
        tol = self.rep_in.tol
        if max_abs(checked[0][0] - np.eye(self.rep_in.dim)) > tol.tol_residual or max_abs(
            checked[0][1] - np.eye(self.rep_out.dim)
        ) > tol.tol_residual:
            raise ValidationError("component_pairs[0] must be the identity pair")
        object.__setattr__(self, "component_pairs", tuple(checked))

    @property
    def dim_g(self) -> int:
        return self.rep_in.dim_g

    @property
    def n_components(self) -> int:
        return len(self.component_pairs)


@dataclass(frozen=True, eq=False)
class U1Spec:
    """Integer-spectrum U(1) action: H = basis @ diag(eigenvalues) @ basis†."""

    eigenvalues: tuple[int, ...]
    basis: np.ndarray | None = None

    def __post_init__(self) -> None:
        for n in self.eigenvalues:
            if float(n) != int(n):
                raise ValidationError(f"U1 spectrum must be integer, got {n}")
        eigs = tuple(int(n) for n in self.eigenvalues)
        if not eigs:
            raise ValidationError("U1Spec needs at least one eigenvalue")
        object.__setattr__(self, "eigenvalues", eigs)
        d = len(eigs)
        basis = np.eye(d, dtype=complex) if self.basis is None else as_cmatrix(self.basis, "U1 basis")
        _check_unitary(basis, d, DEFAULT_TOL, "U1 basis")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def hamiltonian(self) -> np.ndarray:
        return (self.basis * np.asarray(self.eigenvalues, dtype=float)) @ self.basis.conj().T

    @property
    def spectral_range(self) -> int:
        return max(self.eigenvalues) - min(self.eigenvalues)


@dataclass(frozen=True)
class GroupPoint:
    """A group element: Lie parameters theta plus a component index."""

    theta: tuple[float, ...] = ()
    component: int = 0


def unitary_at(
    rep: Representation,
    theta: object = (),
    component: int = 0,
    tol: ToleranceConfig | None = None,
) -> np.ndarray:
    """U(theta, component) = exp(i sum_mu theta_mu X_mu) @ component_rep.

    Hermitian generators make the eigendecomposition route exact to roundoff,
    so no series or Pade approximation is involved.
    """
    tol = tol or rep.tol
    th = np.asarray(theta, dtype=float).reshape(-1)
    if th.size == 0:
        th = np.zeros(rep.dim_g)
    if th.size != rep.dim_g:
        raise ValidationError(f"theta has {th.size} entries, expected {rep.dim_g}")
    if not 0 <= component < rep.n_components:
        raise ValidationError(f"component index {component} out of range")
    h = sum(t * g for t, g in zip(th, rep.generators))
    u = exp_i_herm(h, 1.0, tol) if np.any(th) else np.eye(rep.dim, dtype=complex)
    return u @ rep.component_reps[component]


def transport(rep: Representation, point: GroupPoint) -> np.ndarray:
    return unitary_at(rep, point.theta, point.component)


def lift_projective(rep: Representation) -> Representation:
    """Trivialize a projective phase by tensoring d copies and dividing by det.

    The lifted generators are sum_n (1 x .. X .. x 1) - Tr(X) * 1 on the
    d^dim-dimensional power space; component representatives map to
    U^{(x)d} / det(U). Raises the cap error when d^d exceeds the tensor cap.
    """
    d = rep.dim
    require_within_cap(d**d, "projective lift")
    eye = np.eye(d, dtype=complex)
    lifted_gens = []
    for x in rep.generators:
        total = np.zeros((d**d, d**d), dtype=complex)
        for n in range(d):
            factors = [eye] * d
            factors[n] = x
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            total += term
        total -= float(x.trace().real) * np.eye(d**d)
        lifted_gens.append(total)
    lifted_comps = []
    for u in rep.component_reps:
        det = np.linalg.det(u)
        lifted_comps.append(tensor_power(u, d, "projective lift") / det)
    return Representation(
        dim=d**d,
        generators=tuple(lifted_gens),
        component_reps=tuple(lifted_comps),
        label=f"{rep.label}^lift" if rep.label else "lifted",
        tol=rep.tol,
    )


def congruence_matrix(rep: Representation, u: object, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Real matrix V with u† X_mu u = sum_nu V[nu, mu] X_nu.

    Solved by least squares over the real span of the generators; raises if
    the conjugated generators leave that span (residual above tol_residual) or
    if V is singular, since a group element must act invertibly on its Lie
    algebra.
    """
    tol = tol or rep.tol
    uu = _check_unitary(u, rep.dim, tol, "group element")
    cols_src = []
    cols_dst = []
    for x in rep.generators:
        cols_src.append(x.reshape(-1))
        cols_dst.append((uu.conj().T @ x @ uu).reshape(-1))
    m = np.stack(cols_src, axis=1)
    t = np.stack(cols_dst, axis=1)
    m_re = np.concatenate([m.real, m.imag], axis=0)
    t_re = np.concatenate([t.real, t.imag], axis=0)
    v, _, _, _ = np.linalg.lstsq(m_re, t_re, rcond=None)
    scale = max(1.0, max(max_abs(x) for x in rep.generators))
    resid = max_abs(m_re @ v - t_re)
    if resid > tol.tol_residual * scale:
        raise ValidationError(
            f"conjugated generators leave the generator span (residual {resid:.3e})"
        )
    if abs(np.linalg.det(v)) < 1e-12:
        raise ValidationError("congruence matrix is singular")
    return v


def projected_generators(rep: Representation, phi: object, tol: ToleranceConfig | None = None) -> tuple[np.ndarray, ...]:
    """Off-diagonal parts P X (1-P) + (1-P) X P relative to the line through phi.

    These generate the flow that matters for first-order state changes around
    phi; the block-diagonal remainder only moves the global phase and the
    complement internally.
    """
    tol = tol or rep.tol
    v = check_state(phi, tol, "reference state")
    p = np.outer(v, v.conj())
    q = np.eye(rep.dim) - p
    return tuple(p @ x @ q + q @ x @ p for x in rep.generators)


def iid_generators(rep: Representation, n: int) -> Representation:
    """n-copy representation: generators sum_k 1 x .. X .. x 1, components U^{(x)n}."""
    if n < 1:
        raise ValidationError(f"copy count must be >= 1, got {n}")
    d = rep.dim
    require_within_cap(d**n, "iid representation")
    eye = np.eye(d, dtype=complex)
    gens = []
    for x in rep.generators:
        total = np.zeros((d**n, d**n), dtype=complex)
        for k in range(n):
            factors = [eye] * n
            factors[k] = x
            term = factors[0]
            for f in factors[1:]:
                term = np.kron(term, f)
            total += term
        gens.append(total)
    comps = tuple(tensor_power(u, n, "iid representation") for u in rep.component_reps)
    return Representation(
        dim=d**n,
        generators=tuple(gens),
        component_reps=comps,
        label=f"{rep.label}^{n}" if rep.label else f"iid^{n}",
        tol=rep.tol,
    )


def u1_symmetry_divisor(spec: U1Spec, rho: object, tol: ToleranceConfig = DEFAULT_TOL) -> int | str:
    """Largest d with exp(i 2 pi H / d) rho exp(-i 2 pi H / d) = rho, or "full".

    Works in the spec's eigenbasis: the state couples eigenvalues n_j, n_k
    whenever the corresponding matrix element is nonzero; the stabilizer is
    cyclic of order gcd over the coupled differences, and "full" when every
    coupled pair is degenerate.
    """
    arr = as_cmatrix(rho, "state")
    if arr.shape != (spec.dim, spec.dim):
        raise ValidationError(f"state shape {arr.shape} does not match U1 spec dim {spec.dim}")
    m = spec.basis.conj().T @ arr @ spec.basis
    cut = tol.tol_kernel * max(max_abs(m), 1e-300)
    eigs = spec.eigenvalues
    g = 0
    for j in range(spec.dim):
        for k in range(spec.dim):
            if abs(m[j, k]) > cut:
                g = math.gcd(g, abs(eigs[j] - eigs[k]))
    return "full" if g == 0 else g
