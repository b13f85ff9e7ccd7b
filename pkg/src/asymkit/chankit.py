"""Explicit conversion channels and covariance tooling.

When the tensor inequality Q_psi >= Q_phi holds, a channel that maps psi to
phi exactly and commutes with the group action to the relevant order can be
written down in closed form from first-order data alone. This module builds
it, twirls arbitrary channels toward covariance, measures covariance defects,
and runs the estimate-then-convert protocol for unknown frames.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, ValidationError
from .numkit import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_cmatrix,
    check_density,
    check_state,
    max_abs,
    psd_sqrt,
    require_within_cap,
    state_distance,
    tensor_power,
    vec_tensor_power,
)
from .repkit import GroupPoint, RepPair, Representation, U1Spec, iid_generators, unitary_at

__all__ = [
    "KrausChannel",
    "ChannelBuildArtifacts",
    "TwirlResult",
    "MonteCarloTwirl",
    "EstimateConvertReport",
    "build_conversion_channel",
    "apply_channel",
    "twirl",
    "covariance_defect",
    "estimate_group_element",
    "estimate_and_convert",
]


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A CPTP map given by Kraus operators, completeness-checked on build."""

    kraus_ops: tuple[np.ndarray, ...]
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self) -> None:
        ops = tuple(as_cmatrix(k, "Kraus operator") for k in self.kraus_ops)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        for k in ops:
            if k.shape != shape:
                raise ValidationError("Kraus operators must share one shape")
        total = sum(k.conj().T @ k for k in ops)
        defect = max_abs(total - np.eye(shape[1]))
        if defect > self.tol.tol_residual:
            raise ValidationError(f"Kraus completeness fails (defect {defect:.3e})")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def in_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops[0].shape[0]


@dataclass(frozen=True, eq=False)
class ChannelBuildArtifacts:
    """Intermediate objects of the closed-form construction, for audit."""

    c_in: np.ndarray
    c_out: np.ndarray
    z: np.ndarray
    gamma: np.ndarray
    basis_in: np.ndarray
    basis_out: np.ndarray


@dataclass(frozen=True, eq=False)
class TwirlResult:
    channel: KrausChannel
    covariance_defect: float
    points_used: int
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True)
class MonteCarloTwirl:
    """Sampled group averaging; count and spread are the accuracy knobs.

    Each sample point is a product of ``spread`` independent uniform-parameter
    draws.  Convolving draws pushes the sampling law toward the invariant
    measure on non-abelian groups, where a single exponential-map draw stays
    measurably biased no matter how large count gets.
    """

    count: int = 64
    seed: int = 0
    spread: int = 4


@dataclass(frozen=True, eq=False)
class EstimateConvertReport:
    output: np.ndarray
    target: np.ndarray
    distance_to_target: float
    fidelity_to_target: float
    estimate_theta: tuple[float, ...]
    true_theta: tuple[float, ...]
    n_est: int
    n_conv: int
    caveats: tuple[str, ...] = ()


def _complement_basis(v: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Deterministic orthonormal basis of the complement of the line through v:
    canonical basis vectors projected off v, Gram-Schmidt in index order."""
    d = v.size
    cols = []
    for i in range(d):
        w = np.zeros(d, dtype=complex)
        w[i] = 1.0
        w = w - v * np.vdot(v, w)
        for c in cols:
            w = w - c * np.vdot(c, w)
        nrm = float(np.linalg.norm(w))
        if nrm > 1e-10:
            cols.append(w / nrm)
        if len(cols) == d - 1:
            break
    if len(cols) != d - 1:
        raise ValidationError("failed to build a complement basis")
    return np.stack(cols, axis=1)


def build_conversion_channel(
    pair: RepPair,
    psi: object,
    phi: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[KrausChannel, ChannelBuildArtifacts]:
    """Closed-form channel with E(psi) = phi, covariant to leading order.

    The construction matches first-order responses: C collects the complement
    components of the generator flows at each state, Z = C_out C_in^+ carries
    input responses to output responses, and the slack Gamma = 1 - Z†Z must be
    PSD, which is exactly the tensor inequality Q_psi >= Q_phi. Raises
    PreconditionError when that fails.
    """
    vin = check_state(psi, tol, "input state")
    vout = check_state(phi, tol, "output state")
    if vin.size != pair.rep_in.dim or vout.size != pair.rep_out.dim:
        raise ValidationError("state dimensions do not match the representation pair")
    b_in = _complement_basis(vin, tol)
    b_out = _complement_basis(vout, tol)
    c_in = np.array(
        [[-1j * np.vdot(b_in[:, k], x @ vin) for x in pair.rep_in.generators] for k in range(vin.size - 1)]
    )
    c_out = np.array(
        [[-1j * np.vdot(b_out[:, k], x @ vout) for x in pair.rep_out.generators] for k in range(vout.size - 1)]
    )
    z = c_out @ np.linalg.pinv(c_in, rcond=tol.tol_kernel)
    carry_defect = max_abs(c_out - z @ c_in)
    scale = max(max_abs(c_out), 1.0)
    if carry_defect > tol.tol_residual * scale:
        raise PreconditionError(
            "output responses are not reachable from input responses "
            f"(carry defect {carry_defect:.3e}); the tensor inequality fails"
        )
    gamma = np.eye(vin.size - 1) - z.conj().T @ z
    w = np.linalg.eigvalsh(0.5 * (gamma + gamma.conj().T))
    if w.size and w[0] < -tol.tol_psd * max(float(w[-1]), 1.0):
        raise PreconditionError(
            f"covariance condition violated: slack matrix has eigenvalue {w[0]:.3e}"
        )
    sq_gamma = psd_sqrt(gamma, tol, "slack matrix")
    k0 = np.outer(vout, vin.conj()) + b_out @ z @ b_in.conj().T
    ops = [k0]
    for k in range(vin.size - 1):
        op = np.zeros((vout.size, vin.size), dtype=complex)
        for l in range(vin.size - 1):
            op += sq_gamma[k, l] * np.outer(vout, b_in[:, l].conj())
        ops.append(op)
    # drop identically-zero operators (full slack rank is rare)
    ops = [op for op in ops if max_abs(op) > 1e-14] or [k0]
    channel = KrausChannel(tuple(ops), tol)
    artifacts = ChannelBuildArtifacts(c_in, c_out, z, gamma, b_in, b_out)
    return channel, artifacts


def apply_channel(channel: KrausChannel, rho: object, tol: ToleranceConfig | None = None) -> np.ndarray:
    tol = tol or channel.tol
    r = check_density(rho, tol, "input state")
    if r.shape != (channel.in_dim, channel.in_dim):
        raise ValidationError(f"state shape {r.shape} does not match channel input dim {channel.in_dim}")
    out = np.zeros((channel.out_dim, channel.out_dim), dtype=complex)
    for k in channel.kraus_ops:
        out += k @ r @ k.conj().T
    return 0.5 * (out + out.conj().T)


def _twirl_points(
    pair: RepPair,
    sampling: object,
) -> tuple[list[tuple[np.ndarray, np.ndarray]], float, list[str]]:
    """Resolve a sampling spec into (U_in, U_out) pairs with equal weights."""
    caveats: list[str] = []
    if isinstance(sampling, MonteCarloTwirl):
        if sampling.count < 1 or sampling.spread < 1:
            raise ValidationError("MonteCarloTwirl count and spread must be positive")
        rng = np.random.default_rng(sampling.seed)
        pts = []
        for _ in range(sampling.count):
            uin = np.eye(pair.rep_in.dim, dtype=complex)
            uout = np.eye(pair.rep_out.dim, dtype=complex)
            # Same abstract word in both representations: shared theta and
            # component index per factor.
            for _ in range(sampling.spread):
                theta = rng.uniform(-math.pi, math.pi, size=pair.dim_g)
                comp = int(rng.integers(pair.n_components))
                uin = uin @ unitary_at(pair.rep_in, theta, 0) @ pair.component_pairs[comp][0]
                uout = uout @ unitary_at(pair.rep_out, theta, 0) @ pair.component_pairs[comp][1]
            pts.append((uin, uout))
        caveats.append(
            "Monte-Carlo twirl: sampled averaging approximates the invariant "
            "measure; residual covariance defect shrinks with count and spread"
        )
        return pts, 1.0 / len(pts), caveats
    if (
        isinstance(sampling, tuple)
        and len(sampling) == 2
        and isinstance(sampling[0], U1Spec)
        and isinstance(sampling[1], U1Spec)
    ):
        spec_in, spec_out = sampling
        m = spec_in.spectral_range + spec_out.spectral_range + 1
        h_in = spec_in.hamiltonian()
        h_out = spec_out.hamiltonian()
        rep_in = Representation(spec_in.dim, (h_in,))
        rep_out = Representation(spec_out.dim, (h_out,))
        pts = []
        for k in range(m):
            theta = 2.0 * math.pi * k / m
            pts.append((unitary_at(rep_in, (theta,)), unitary_at(rep_out, (theta,))))
        # cyclic averaging at m points kills every surviving harmonic exactly
        return pts, 1.0 / m, caveats
    pts = [(as_cmatrix(a, "twirl element (in)"), as_cmatrix(b, "twirl element (out)")) for a, b in sampling]
    if not pts:
        raise ValidationError("twirl needs at least one group element")
    return pts, 1.0 / len(pts), caveats


def twirl(
    channel: KrausChannel,
    pair: RepPair,
    sampling: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> TwirlResult:
    """Average U_out(g)† E(U_in(g) . U_in(g)†) U_out(g) over group points.

    Exact for a finite element list covering the group and for integer-
    spectrum U(1) data (cyclic averaging with range_in + range_out + 1
    points); Monte-Carlo otherwise. Each point contributes Kraus operators
    scaled by the square-rooted weight, so the result is CPTP regardless of
    the sampling measure.
    """
    points, weight, caveats = _twirl_points(pair, sampling)
    root = math.sqrt(weight)
    ops = []
    for uin, uout in points:
        for k in channel.kraus_ops:
            ops.append(root * (uout.conj().T @ k @ uin))
    twirled = KrausChannel(tuple(ops), tol)
    defect = covariance_defect(twirled, pair, None, tol=tol)
    return TwirlResult(twirled, defect, len(points), tuple(caveats))


def covariance_defect(
    channel: KrausChannel,
    pair: RepPair,
    probes: object = None,
    samples: int = 8,
    seed: int = 11,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> float:
    """Max trace distance between E(U rho U†) and U' E(rho) U'† over probes.

    probes may supply (states, points); by default seeded random pure states
    and group points are used. Zero (to tolerance) certifies covariance on the
    probe set only.
    """
    rng = np.random.default_rng(seed)
    if probes is None:
        states = []
        for _ in range(samples):
            v = rng.standard_normal(channel.in_dim) + 1j * rng.standard_normal(channel.in_dim)
            v = v / np.linalg.norm(v)
            states.append(np.outer(v, v.conj()))
        points = [
            (rng.uniform(-math.pi, math.pi, size=pair.dim_g), int(rng.integers(pair.n_components)))
            for _ in range(samples)
        ]
    else:
        raw_states, raw_points = probes
        states = [check_density(s, tol, "probe state") for s in raw_states]
        points = [(np.asarray(th, dtype=float).reshape(-1), int(c)) for th, c in raw_points]
    worst = 0.0
    for rho in states:
        out_ref = apply_channel(channel, rho, tol)
        for theta, comp in points:
            uin = unitary_at(pair.rep_in, theta, 0) @ pair.component_pairs[comp][0]
            uout = unitary_at(pair.rep_out, theta, 0) @ pair.component_pairs[comp][1]
            lhs = apply_channel(channel, uin @ rho @ uin.conj().T, tol)
            rhs = uout @ out_ref @ uout.conj().T
            tdist, _ = state_distance(lhs, rhs, tol)
            worst = max(worst, tdist)
    return worst


def _as_group_point(entry: object) -> GroupPoint:
    if isinstance(entry, GroupPoint):
        return entry
    try:
        theta, component = entry
    except (TypeError, ValueError):
        raise ValidationError(
            "grid entries must be GroupPoint values or (theta, component) pairs"
        ) from None
    th = np.asarray(theta, dtype=float).reshape(-1)
    return GroupPoint(tuple(float(t) for t in th), int(component))


def estimate_group_element(
    rep: Representation,
    template: object,
    observed: object,
    grid: object,
    refine_span: float = 0.0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[GroupPoint, float]:
    """Grid point whose transported template best overlaps the observed state.

    Grid entries are GroupPoint values or (theta, component) pairs. Strict
    improvement wins, so ties resolve to the earliest grid point. With
    refine_span > 0 the winning theta is polished coordinate-wise by
    golden-section search within +/- refine_span (the component index stays
    fixed). Returns (best point, fidelity there).
    """
    v = check_state(template, tol, "template state")
    obs = check_density(observed, tol, "observed state")

    def fid_at(th: np.ndarray, component: int) -> float:
        moved = unitary_at(rep, tuple(th), component) @ v
        return float(np.real(moved.conj() @ obs @ moved))

    best: GroupPoint | None = None
    best_fid = -1.0
    for entry in grid:
        point = _as_group_point(entry)
        fid = fid_at(np.asarray(point.theta, dtype=float), point.component)
        if fid > best_fid:
            best_fid = fid
            best = point
    if best is None:
        raise ValidationError("estimation grid is empty")
    if refine_span > 0.0:
        comp = best.component
        theta = np.asarray(best.theta, dtype=float)
        golden = (math.sqrt(5.0) - 1.0) / 2.0
        for _ in range(3):  # coordinate passes
            for axis in range(theta.size):
                lo = theta[axis] - refine_span
                hi = theta[axis] + refine_span
                x1 = hi - golden * (hi - lo)
                x2 = lo + golden * (hi - lo)
                t1, t2 = theta.copy(), theta.copy()
                t1[axis], t2[axis] = x1, x2
                f1, f2 = fid_at(t1, comp), fid_at(t2, comp)
                for _ in range(48):
                    if f1 < f2:
                        lo, x1, f1 = x1, x2, f2
                        x2 = lo + golden * (hi - lo)
                        t2 = theta.copy()
                        t2[axis] = x2
                        f2 = fid_at(t2, comp)
                    else:
                        hi, x2, f2 = x2, x1, f1
                        x1 = hi - golden * (hi - lo)
                        t1 = theta.copy()
                        t1[axis] = x1
                        f1 = fid_at(t1, comp)
                theta[axis] = 0.5 * (lo + hi)
        best = GroupPoint(tuple(float(t) for t in theta), comp)
        best_fid = fid_at(theta, comp)
    return best, best_fid


def _product_target(rep: Representation, v: np.ndarray, theta: np.ndarray, shift: np.ndarray, n: int) -> np.ndarray:
    shifted = unitary_at(rep, tuple(shift)) @ v if np.any(shift) else v
    moved = unitary_at(rep, tuple(theta)) @ shifted
    return vec_tensor_power(moved, n, "conversion target")


def estimate_and_convert(
    pair: RepPair,
    psi: object,
    phi: object,
    n: int,
    split_exponent: float = 0.3,
    u: object = None,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> EstimateConvertReport:
    """Frame-estimation protocol: spend ~n^{1-eps} copies estimating the
    unknown group element, then convert the rest with the re-aligned channel.

    The unknown element is drawn (seeded) from the identity component; the
    estimate comes from a seeded lattice over the parameter box, so accuracy
    is a calibration knob, not a guarantee. Copies may carry a 1/sqrt(n)
    parameter shift u, the regime where the conversion channel is exact to
    leading order.
    """
    if n < 2:
        raise ValidationError(f"need at least 2 copies, got {n}")
    if not 0.0 < split_exponent < 1.0:
        raise ValidationError(f"split exponent must lie in (0, 1), got {split_exponent}")
    vin = check_state(psi, tol, "input state")
    vout = check_state(phi, tol, "output state")
    dim_g = pair.dim_g
    shift = np.zeros(dim_g) if u is None else np.asarray(u, dtype=float).reshape(-1)
    if shift.size != dim_g:
        raise ValidationError(f"shift has {shift.size} entries, expected {dim_g}")
    n_est = min(max(1, math.ceil(n ** (1.0 - split_exponent))), n - 1)
    n_conv = n - n_est

    rng = np.random.default_rng(seed)
    true_theta = rng.uniform(-math.pi, math.pi, size=dim_g)
    per_copy_shift = shift / math.sqrt(n)
    template = unitary_at(pair.rep_in, tuple(per_copy_shift)) @ vin if np.any(shift) else vin
    observed_vec = unitary_at(pair.rep_in, tuple(true_theta)) @ template
    observed = np.outer(observed_vec, observed_vec.conj())

    points_per_dim = max(9, math.ceil(math.sqrt(n_est)) + 1)
    require_within_cap(points_per_dim**dim_g, "estimation grid")
    jitter = rng.uniform(0.0, 2.0 * math.pi / points_per_dim)
    axis = -math.pi + jitter + 2.0 * math.pi * np.arange(points_per_dim) / points_per_dim
    mesh = np.meshgrid(*([axis] * dim_g), indexing="ij")
    grid = [GroupPoint(tuple(row), 0) for row in np.stack([m.reshape(-1) for m in mesh], axis=1)]
    span = math.pi / points_per_dim
    rep_est = iid_generators(pair.rep_in, n_est)
    template_block = vec_tensor_power(template, n_est, "estimation block")
    observed_block_vec = vec_tensor_power(observed_vec, n_est, "estimation block")
    observed_block = np.outer(observed_block_vec, observed_block_vec.conj())
    est_point, est_fid = estimate_group_element(rep_est, template_block, observed_block, grid, span, tol)
    est_theta = est_point.theta

    channel, _ = build_conversion_channel(pair, vin, vout, tol)
    u_in = unitary_at(pair.rep_in, est_theta)
    u_out = unitary_at(pair.rep_out, est_theta)
    realigned = KrausChannel(tuple(u_out @ k @ u_in.conj().T for k in channel.kraus_ops), tol)

    out_single = apply_channel(realigned, observed, tol)
    require_within_cap(pair.rep_out.dim**n_conv, "conversion output")
    output = tensor_power(out_single, n_conv, "conversion output")
    target_vec = _product_target(pair.rep_out, vout, true_theta, per_copy_shift, n_conv)
    target = np.outer(target_vec, target_vec.conj())
    tdist, fid = state_distance(output, target, tol)
    caveats = [
        f"estimation grid: {points_per_dim} points per dimension with seeded jitter, "
        "golden-section polish (calibration choices; measurement statistics idealized)",
        "unknown element drawn from the identity component only",
        f"estimation-block overlap at chosen angle: {est_fid:.6f}",
    ]
    return EstimateConvertReport(
        output=output,
        target=target,
        distance_to_target=tdist,
        fidelity_to_target=fid,
        estimate_theta=tuple(float(t) for t in est_theta),
        true_theta=tuple(float(t) for t in true_theta),
        n_est=n_est,
        n_conv=n_conv,
        caveats=tuple(caveats),
    )
