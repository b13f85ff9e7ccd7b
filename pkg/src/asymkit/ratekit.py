"""Optimal conversion rates between pure states under covariant operations.

The central object is the PSD matrix pencil: the per-copy rate from psi to phi
is the largest r with Q_psi - r Q_phi >= 0, minimized over connected
components, and it is gated by an inclusion of symmetry subgroups. A
max-divergence D_max between tensors gives the dual description and the
asymmetry-cost bound; entropic and thermodynamic corollaries live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    AsymmetryTensor,
    MetricSpec,
    generalized_variance,
    qgt,
    s_matrix,
    s_q_matrix,
    skew_information,
)
from .errors import PreconditionError, ValidationError
from .numkit import (
    _kernel_split_eigs,
    DEFAULT_TOL,
    ToleranceConfig,
    check_density,
    check_hermitian,
    check_state,
    kernel_split,
    max_abs,
    pinv,
    state_distance,
)
from .repkit import GroupPoint, RepPair, Representation, U1Spec, u1_symmetry_divisor, unitary_at

__all__ = [
    "PencilResult",
    "SymVerdict",
    "SymCheckOptions",
    "RateReport",
    "ReversibilityReport",
    "CostBoundReport",
    "ThermoBounds",
    "sup_ratio",
    "sup_ratio_oracle",
    "sup_ratio_sample_bound",
    "dmax",
    "sym_check",
    "conversion_rate",
    "reversibility_check",
    "distillable_bound",
    "vanishing_distillable_check",
    "cost_bound",
    "thermo_bounds",
    "min_entropy_rate",
]

# eigenvalues of the whitened pencil below this relative level are numerical
# dust: without the snap, -log2 of ~1e-16 would masquerade as a finite D_max
_VALUE_SNAP_REL = 1e-12


@dataclass(frozen=True, eq=False)
class PencilResult:
    """Outcome of one PSD pencil solve, with kernel classification for audit."""

    value: float
    minimizing_direction: np.ndarray | None
    method: str
    kernel_eigenvalues: tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class SymVerdict:
    """Three-valued symmetry-subgroup inclusion verdict with witnesses."""

    verdict: str  # "holds" | "violated" | "inconclusive"
    witnesses: tuple[tuple[str, object], ...] = ()
    detail: str = ""


@dataclass(frozen=True, eq=False)
class SymCheckOptions:
    """Extra structure the symmetry gate may exploit.

    u1 supplies integer-spectrum data for both sides (complete comparison);
    exhaustive declares that the pair's component list plus extra_elements
    exhaust the group; samples/seed control the fallback screening draws.
    """

    u1: tuple[U1Spec, U1Spec] | None = None
    extra_elements: tuple[tuple[np.ndarray, np.ndarray], ...] = ()
    exhaustive: bool = False
    samples: int = 16
    seed: int = 7

    def swapped(self) -> "SymCheckOptions":
        u1 = (self.u1[1], self.u1[0]) if self.u1 else None
        extras = tuple((b, a) for a, b in self.extra_elements)
        return replace(self, u1=u1, extra_elements=extras)


@dataclass(frozen=True, eq=False)
class RateReport:
    """Conversion-rate result: the rate, labeled per-component pencils, the dual."""

    rate: float
    per_component: tuple[tuple[str, PencilResult], ...]
    dmax_bits: float
    sym_verdict: SymVerdict | None
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class ReversibilityReport:
    reversible: bool
    r: float | None
    r_reverse: float | None
    sym_forward: SymVerdict
    sym_backward: SymVerdict
    proportionality_gap: float
    caveats: tuple[str, ...] = ()

    @property
    def condition_a(self) -> tuple[SymVerdict, SymVerdict]:
        return (self.sym_forward, self.sym_backward)

    @property
    def condition_b(self) -> float:
        return self.proportionality_gap


@dataclass(frozen=True, eq=False)
class CostBoundReport:
    total: float
    per_state: tuple[float, ...]
    weights: tuple[float, ...]
    p_sym: float


@dataclass(frozen=True, eq=False)
class ThermoBounds:
    variance_rate_required: float
    s_bound_matrix: np.ndarray
    skew_bound: float


def _tensor_matrix(t: object, tol: ToleranceConfig, name: str) -> np.ndarray:
    m = t.matrix if isinstance(t, AsymmetryTensor) else t
    m = check_hermitian(m, tol, name)
    w = np.linalg.eigvalsh(m)
    if w.size and w[0] < -tol.tol_psd * max(float(w[-1]), 1.0):
        raise PreconditionError(f"{name} must be PSD (eigenvalue {w[0]:.3e})")
    return m


def sup_ratio(a: object, b: object, tol: ToleranceConfig = DEFAULT_TOL) -> PencilResult:
    """Largest r >= 0 with a - r b PSD, for PSD a, b.

    Split b into support and kernel; on the kernel block feasibility is free
    (a is PSD there), and eliminating the cross terms by a Schur complement is
    exact for PSD matrices. The answer is the smallest eigenvalue of the
    whitened complement, +inf when b vanishes, with sub-roundoff eigenvalues
    snapped to exactly zero.
    """
    am = _tensor_matrix(a, tol, "pencil numerator")
    bm = _tensor_matrix(b, tol, "pencil denominator")
    if am.shape != bm.shape:
        raise ValidationError(f"pencil shapes differ: {am.shape} vs {bm.shape}")
    supp, kern, kern_eigs = _kernel_split_eigs(bm, tol, "pencil denominator")
    if supp.shape[1] == 0:
        return PencilResult(math.inf, None, "schur_geig", tuple(float(x) for x in kern_eigs))
    a_ss = supp.conj().T @ am @ supp
    if kern.shape[1]:
        a_sk = supp.conj().T @ am @ kern
        a_kk_inv = pinv(kern.conj().T @ am @ kern, tol)
        a_tilde = a_ss - a_sk @ a_kk_inv @ a_sk.conj().T
    else:
        a_tilde = a_ss
    b_ss = supp.conj().T @ bm @ supp
    wb, vb = np.linalg.eigh(0.5 * (b_ss + b_ss.conj().T))
    isq = (vb / np.sqrt(wb)) @ vb.conj().T
    white = isq @ a_tilde @ isq
    w, v = np.linalg.eigh(0.5 * (white + white.conj().T))
    value = float(w[0])
    top = max(float(w[-1]), 0.0)
    if value <= _VALUE_SNAP_REL * top:
        value = max(value, 0.0)
        if value <= _VALUE_SNAP_REL * top:
            value = 0.0
    gs = isq @ v[:, 0]
    direction = supp @ gs
    if kern.shape[1]:
        # the Schur complement already minimized over the kernel coordinate;
        # restore that component so the direction actually binds the pencil
        direction = direction - kern @ (a_kk_inv @ (a_sk.conj().T @ gs))
    nrm = np.linalg.norm(direction)
    if nrm > 0:
        direction = direction / nrm
    return PencilResult(value, direction, "schur_geig", tuple(float(x) for x in kern_eigs))


def sup_ratio_oracle(
    a: object,
    b: object,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_iter: int = 200,
    psd_slack_rel: float = 1e-11,
) -> float:
    """Independent bisection route for sup_ratio, for cross-checking.

    Feasibility of r is tested as lambda_min(a - r b) >= -slack with slack
    relative to the pencil scale. Deliberately shares no code with the Schur
    solver beyond input validation.
    """
    am = _tensor_matrix(a, tol, "pencil numerator")
    bm = _tensor_matrix(b, tol, "pencil denominator")
    if am.shape != bm.shape:
        raise ValidationError(f"pencil shapes differ: {am.shape} vs {bm.shape}")
    scale_a = max(max_abs(am), 0.0)
    scale_b = max(max_abs(bm), 0.0)

    def feasible(r: float) -> bool:
        slack = psd_slack_rel * max(scale_a, r * scale_b, 1.0)
        w = np.linalg.eigvalsh(am - r * bm)
        return bool(w[0] >= -slack)

    hi = 1.0
    grow = 0
    while feasible(hi):
        hi *= 4.0
        grow += 1
        if grow > 60:
            return math.inf
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    return lo


def sup_ratio_sample_bound(a: object, b: object, count: int = 64, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Monte-Carlo upper bound: min of Rayleigh ratios over random directions.

    Any direction with v†bv > 0 certifies sup_ratio <= (v†av)/(v†bv), so the
    sampled minimum always upper-bounds the true pencil value.
    """
    am = _tensor_matrix(a, tol, "pencil numerator")
    bm = _tensor_matrix(b, tol, "pencil denominator")
    rng = np.random.default_rng(seed)
    n = am.shape[0]
    cut = max(max_abs(bm), 0.0) * 1e-12
    best = math.inf
    for _ in range(count):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        den = float(np.real(v.conj() @ bm @ v))
        if den <= cut:
            continue
        num = float(np.real(v.conj() @ am @ v))
        best = min(best, max(num, 0.0) / den)
    return best


def dmax(a: object, b: object, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Max-divergence in bits: log2 of the smallest lambda with a <= lambda b.

    Computed directly from the whitened pencil's top eigenvalue after a
    support-inclusion check, so it is an independent route from sup_ratio and
    the rate duality is a real cross-check downstream. Returns -inf when a
    vanishes and +inf when a has weight outside the support of b.
    """
    am = _tensor_matrix(a, tol, "dmax numerator")
    bm = _tensor_matrix(b, tol, "dmax denominator")
    if am.shape != bm.shape:
        raise ValidationError(f"dmax shapes differ: {am.shape} vs {bm.shape}")
    wa = np.linalg.eigvalsh(am)
    a_top = max(float(wa[-1]), 0.0)
    if a_top == 0.0:
        return -math.inf
    supp, kern = kernel_split(bm, tol, "dmax denominator")
    if kern.shape[1]:
        leak = kern.conj().T @ am @ kern
        leak_top = max(float(np.linalg.eigvalsh(leak)[-1]), 0.0)
        if leak_top > tol.tol_kernel * a_top:
            return math.inf
    if supp.shape[1] == 0:
        return math.inf
    b_ss = supp.conj().T @ bm @ supp
    wb, vb = np.linalg.eigh(0.5 * (b_ss + b_ss.conj().T))
    isq = (vb / np.sqrt(wb)) @ vb.conj().T
    a_ss = supp.conj().T @ am @ supp
    white = isq @ a_ss @ isq
    top = float(np.linalg.eigvalsh(0.5 * (white + white.conj().T))[-1])
    if top <= 0.0:
        return -math.inf
    return math.log2(top)


def _stabilizer_basis(rep: Representation, rho: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Real basis of directions u with [sum_mu u_mu X_mu, rho] = 0."""
    cols = []
    for x in rep.generators:
        c = (x @ rho - rho @ x).reshape(-1)
        cols.append(np.concatenate([c.real, c.imag]))
    m = np.stack(cols, axis=1)
    u_, s, vt = np.linalg.svd(m, full_matrices=True)
    scale = max(max(max_abs(x) for x in rep.generators), float(s[0]) if s.size else 0.0, 1e-300)
    rank = int(np.sum(s > tol.tol_kernel * scale))
    return vt[rank:].T  # (dimG, k) real


def _fixes(rep: Representation, u: np.ndarray, rho: np.ndarray, tol: ToleranceConfig) -> bool:
    moved = u @ rho @ u.conj().T
    tdist, _ = state_distance(moved, rho, tol)
    return tdist <= tol.tol_residual


def sym_check(
    pair: RepPair,
    rho_in: object,
    rho_out: object,
    options: SymCheckOptions | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> SymVerdict:
    """Decide whether the input state's symmetry subgroup sits inside the
    output state's, as far as the supplied structure allows.

    Screens that can only refute: the Lie-stabilizer kernel of the input must
    be annihilated by the output commutators, and every supplied or sampled
    group element fixing the input must fix the output. Complete positive
    answers come only from integer-spectrum U(1) data (divisor comparison) or
    an exhaustive element list; otherwise the verdict is inconclusive.
    """
    opts = options or SymCheckOptions()
    rin = check_density(rho_in, tol, "input state")
    rout = check_density(rho_out, tol, "output state")
    if rin.shape != (pair.rep_in.dim,) * 2 or rout.shape != (pair.rep_out.dim,) * 2:
        raise ValidationError("state dimensions do not match the representation pair")

    stab = _stabilizer_basis(pair.rep_in, rin, tol)
    out_scale = max(max(max_abs(x) for x in pair.rep_out.generators), 1.0)
    for j in range(stab.shape[1]):
        u = stab[:, j]
        gen_out = sum(float(c) * x for c, x in zip(u, pair.rep_out.generators))
        resid = max_abs(gen_out @ rout - rout @ gen_out)
        if resid > tol.tol_residual * out_scale:
            return SymVerdict(
                "violated",
                (("stabilizer_direction", u.copy()),),
                "input Lie-stabilizer direction moves the output state",
            )

    elements: list[tuple[str, np.ndarray, np.ndarray]] = []
    for i, (uin, uout) in enumerate(pair.component_pairs[1:], start=1):
        elements.append((f"component {i}", uin, uout))
    for i, (uin, uout) in enumerate(opts.extra_elements):
        elements.append((f"extra element {i}", uin, uout))
    rng = np.random.default_rng(opts.seed)
    for i in range(opts.samples):
        theta = rng.uniform(-math.pi, math.pi, size=pair.dim_g)
        comp = int(rng.integers(pair.n_components))
        uin = unitary_at(pair.rep_in, theta, 0) @ pair.component_pairs[comp][0]
        uout = unitary_at(pair.rep_out, theta, 0) @ pair.component_pairs[comp][1]
        elements.append((f"sample {i}", uin, uout))
    for label, uin, uout in elements:
        if _fixes(pair.rep_in, uin, rin, tol) and not _fixes(pair.rep_out, uout, rout, tol):
            return SymVerdict(
                "violated",
                (("group_element", label),),
                f"{label} fixes the input state but moves the output state",
            )

    determinations: list[str] = []
    if opts.u1 is not None:
        spec_in, spec_out = opts.u1
        d_in = u1_symmetry_divisor(spec_in, rin, tol)
        d_out = u1_symmetry_divisor(spec_out, rout, tol)
        if d_out == "full":
            ok = True
        elif d_in == "full":
            ok = False
            witness_theta = math.pi / int(d_out)
        else:
            ok = int(d_out) % int(d_in) == 0
            witness_theta = 2.0 * math.pi / int(d_in)
        if not ok:
            return SymVerdict(
                "violated",
                (("circle_angle", witness_theta),),
                f"U(1) divisor comparison fails: input divisor {d_in}, output divisor {d_out}",
            )
        determinations.append(f"u1 divisors {d_in} | {d_out}")
    if opts.exhaustive:
        determinations.append("exhaustive element list")
    if determinations:
        return SymVerdict("holds", (), "; ".join(determinations))
    return SymVerdict(
        "inconclusive",
        (),
        "no complete symmetry test available; screening found no violation",
    )


def conversion_rate(
    pair: RepPair,
    psi: object,
    phi: object,
    sym_options: SymCheckOptions | None = None,
    catalyst: bool = False,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RateReport:
    """Optimal i.i.d. conversion rate from psi to phi under covariant maps.

    Zero when the symmetry gate refutes inclusion (unless catalyst mode lifts
    the gate); otherwise the minimum over connected components of the pencil
    value between the transported tensors. dmax_bits reports the dual
    max-divergence (max over components), computed by the independent route.
    """
    vin = check_state(psi, tol, "input state")
    vout = check_state(phi, tol, "output state")
    caveats: list[str] = []
    verdict = sym_check(
        pair,
        np.outer(vin, vin.conj()),
        np.outer(vout, vout.conj()),
        sym_options,
        tol,
    )
    pencils = []
    bits = -math.inf
    for i in range(pair.n_components):
        q_in = _component_qgt(pair.rep_in, vin, pair.component_pairs[i][0], tol)
        q_out = _component_qgt(pair.rep_out, vout, pair.component_pairs[i][1], tol)
        pencils.append((f"g{i}", sup_ratio(q_in, q_out, tol)))
        bits = max(bits, dmax(q_out, q_in, tol))
    rate = min(p.value for _, p in pencils)
    if verdict.verdict == "violated" and not catalyst:
        rate = 0.0
        bits = math.inf
        caveats.append("symmetry gate refuted subgroup inclusion; rate forced to zero")
    if catalyst:
        caveats.append("symmetry gate skipped (sublinear catalyst mode)")
    if verdict.verdict == "inconclusive" and not catalyst:
        caveats.append(
            "symmetry inclusion not certified; rate assumes the input symmetry "
            "subgroup embeds in the output one"
        )
    return RateReport(rate, tuple(pencils), bits, verdict, tuple(caveats))


def _component_qgt(rep: Representation, v: np.ndarray, comp_u: np.ndarray, tol: ToleranceConfig) -> AsymmetryTensor:
    # transport by an explicit component representative (the pair's, which may
    # be richer than the rep's own component list)
    moved = comp_u @ v
    shifted = Representation(rep.dim, rep.generators, (np.eye(rep.dim, dtype=complex),), rep.label, rep.tol)
    return qgt(shifted, moved, GroupPoint(), tol)


def reversibility_check(
    pair: RepPair,
    psi: object,
    phi: object,
    sym_options: SymCheckOptions | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> ReversibilityReport:
    """Certify rate-1/r reversible interconversion.

    Needs the symmetry subgroups to match in both directions (condition A)
    and the tensors to be proportional, Q_psi = r Q_phi (condition B). With a
    three-valued gate, reversibility is only affirmed when both directions
    certify "holds"; inconclusive gates leave reversible = False with a
    caveat.
    """
    vin = check_state(psi, tol, "input state")
    vout = check_state(phi, tol, "output state")
    rho_in = np.outer(vin, vin.conj())
    rho_out = np.outer(vout, vout.conj())
    opts = sym_options or SymCheckOptions()
    fwd = sym_check(pair, rho_in, rho_out, opts, tol)
    swapped_pair = RepPair(
        pair.rep_out,
        pair.rep_in,
        tuple((b, a) for a, b in pair.component_pairs),
    )
    bwd = sym_check(swapped_pair, rho_out, rho_in, opts.swapped(), tol)

    caveats: list[str] = []
    gaps = []
    r_fwd: float | None = None
    r_bwd: float | None = None
    for i in range(pair.n_components):
        q_in = _component_qgt(pair.rep_in, vin, pair.component_pairs[i][0], tol).matrix
        q_out = _component_qgt(pair.rep_out, vout, pair.component_pairs[i][1], tol).matrix
        n_in = float(np.linalg.norm(q_in))
        n_out = float(np.linalg.norm(q_out))
        if n_in == 0.0 and n_out == 0.0:
            gaps.append(0.0)
            if i == 0:
                r_fwd, r_bwd = 1.0, 1.0
                caveats.append("both tensors vanish; proportionality holds trivially with r = 1")
            continue
        r_i = sup_ratio(q_in, q_out, tol).value
        if not (0.0 < r_i < math.inf):
            gaps.append(math.inf)
            continue
        gaps.append(float(np.linalg.norm(q_in - r_i * q_out)) / max(n_in, 1e-300))
        if i == 0:
            r_fwd = r_i
            rev = sup_ratio(q_out, q_in, tol).value
            r_bwd = rev if rev < math.inf else None
    gap = max(gaps) if gaps else math.inf
    prop_ok = gap <= tol.tol_residual
    sym_ok = fwd.verdict == "holds" and bwd.verdict == "holds"
    if not sym_ok and (fwd.verdict != "violated" and bwd.verdict != "violated"):
        caveats.append("symmetry equality not certified; reversibility not affirmed")
    return ReversibilityReport(
        reversible=bool(sym_ok and prop_ok),
        r=r_fwd if prop_ok else None,
        r_reverse=r_bwd if prop_ok else None,
        sym_forward=fwd,
        sym_backward=bwd,
        proportionality_gap=gap,
        caveats=tuple(caveats),
    )


def distillable_bound(
    pair: RepPair,
    rho: object,
    phi: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> RateReport:
    """Upper bound on pure-target distillation from a mixed input.

    Uses the kernel-form tensor of the input against the target QGT, pencil
    per component; vanishes for any full-rank (hence for any symmetric) input.
    """
    rin = check_density(rho, tol, "input state")
    vout = check_state(phi, tol, "target state")
    pencils = []
    bits = -math.inf
    for i in range(pair.n_components):
        uin, uout = pair.component_pairs[i]
        moved_in = uin @ rin @ uin.conj().T
        base_in = Representation(
            pair.rep_in.dim, pair.rep_in.generators, (np.eye(pair.rep_in.dim, dtype=complex),), tol=tol
        )
        s_in = s_matrix(base_in, moved_in, GroupPoint(), tol)
        q_out = _component_qgt(pair.rep_out, vout, uout, tol)
        pencils.append((f"g{i}", sup_ratio(s_in, q_out, tol)))
        bits = max(bits, dmax(q_out, s_in, tol))
    rate = min(p.value for _, p in pencils)
    return RateReport(
        rate,
        tuple(pencils),
        bits,
        None,
        ("upper bound on the distillation rate, not an achievability claim",),
    )


def vanishing_distillable_check(
    rep: Representation,
    rho: object,
    phi: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[bool, np.ndarray | None]:
    """Sufficient condition for zero distillable asymmetry: a direction gamma
    with [P_rho, gamma†X] = 0 and gamma†Q_phi gamma > 0.

    Such a gamma pins a kernel direction of the input's support tensor that
    the target needs, so no copies of phi can be distilled. Returns
    (True, gamma) when one is found, (False, None) when the criterion cannot
    conclude (it is sufficient, not necessary).
    """
    rin = check_density(rho, tol, "input state")
    vout = check_state(phi, tol, "target state")
    if rin.shape != (rep.dim, rep.dim) or vout.size != rep.dim:
        raise ValidationError("state dimensions do not match the representation")
    supp, _ = kernel_split(rin, tol, "input state")
    proj = supp @ supp.conj().T
    cols = [((proj @ x - x @ proj).reshape(-1)) for x in rep.generators]
    m = np.stack(cols, axis=1)  # complex, linear in c = conj(gamma)
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    scale = max(float(s[0]) if s.size else 0.0, max(max_abs(x) for x in rep.generators), 1e-300)
    rank = int(np.sum(s > tol.tol_kernel * scale))
    null = vt[rank:].conj().T  # (dimG, k)
    if null.shape[1] == 0:
        return False, None
    q_phi = qgt(rep, vout, GroupPoint(), tol).matrix
    # gamma = conj(c) turns gamma† Q gamma into c† Q^T c
    restricted = null.conj().T @ q_phi.T @ null
    w, u = np.linalg.eigh(0.5 * (restricted + restricted.conj().T))
    top = float(w[-1])
    if top <= tol.tol_psd * max(1.0, float(np.linalg.eigvalsh(q_phi)[-1])):
        return False, None
    c = null @ u[:, -1]
    gamma = c.conj()
    return True, gamma / np.linalg.norm(gamma)


def cost_bound(
    pair: RepPair,
    ensemble: object,
    p_sym: float,
    phi: object,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> CostBoundReport:
    """Asymmetry cost of preparing an ensemble-averaged state from copies of phi.

    Each pure member costs the max over components of 2^{D_max}; the symmetric
    remainder weight p_sym is free. Total is the weighted sum, +inf as soon as
    one member with positive weight is unreachable.
    """
    members = [(float(p), check_state(v, tol, "ensemble member")) for p, v in ensemble]
    if any(p < -tol.tol_norm for p, _ in members):
        raise ValidationError("ensemble weights must be nonnegative")
    if not -tol.tol_norm <= p_sym <= 1.0 + tol.tol_norm:
        raise ValidationError(f"p_sym must lie in [0, 1], got {p_sym}")
    total_w = sum(p for p, _ in members) + p_sym
    if abs(total_w - 1.0) > math.sqrt(tol.tol_norm):
        raise ValidationError(f"ensemble weights plus p_sym must sum to 1, got {total_w}")
    vout = check_state(phi, tol, "resource state")
    per_state = []
    total = 0.0
    for p, v in members:
        bits = -math.inf
        for i in range(pair.n_components):
            q_in = _component_qgt(pair.rep_in, v, pair.component_pairs[i][0], tol)
            q_out = _component_qgt(pair.rep_out, vout, pair.component_pairs[i][1], tol)
            bits = max(bits, dmax(q_in, q_out, tol))
        cost = 2.0**bits if bits > -math.inf else 0.0
        per_state.append(cost)
        if p > 0.0:
            total += p * cost
    return CostBoundReport(
        total=total,
        per_state=tuple(per_state),
        weights=tuple(p for p, _ in members),
        p_sym=float(p_sym),
    )


def thermo_bounds(
    rep: Representation,
    rho: object,
    psi_target: object,
    h_target: object,
    r: float,
    spec: MetricSpec = MetricSpec(),
    tol: ToleranceConfig = DEFAULT_TOL,
) -> ThermoBounds:
    """Resource requirements on an external battery for time-covariant
    conversion of rho toward r copies per use of a pure target.

    Single-generator (time-translation) case only: the representation must
    carry exactly one generator, the input Hamiltonian. The q-metric bound
    uses the caller's spec; the skew-information bound is evaluated at the
    self-dual point q = 1/2, the only member of the family for which that
    bound is valid.
    """
    if rep.dim_g != 1:
        raise ValidationError("thermo bounds are defined for a single-generator (time-translation) action")
    if r < 0:
        raise ValidationError(f"rate r must be nonnegative, got {r}")
    rin = check_density(rho, tol, "input state")
    vt = check_state(psi_target, tol, "target state")
    ht = check_hermitian(h_target, tol, "target Hamiltonian")
    if ht.shape != (vt.size, vt.size):
        raise ValidationError("target Hamiltonian does not match the target state dimension")
    v_target = generalized_variance(vt, ht, tol)
    s_in = s_matrix(rep, rin, GroupPoint(), tol).matrix
    variance_required = max(0.0, r * v_target - float(s_in[0, 0].real))
    sq_in = s_q_matrix(rep, rin, spec, GroupPoint(), tol).matrix
    s_bound = r * np.array([[v_target]], dtype=complex) - sq_in
    skew_in = skew_information(rin, rep.generators[0], MetricSpec(0.5), tol)
    skew = max(0.0, r * v_target - skew_in)
    return ThermoBounds(
        variance_rate_required=variance_required,
        s_bound_matrix=s_bound,
        skew_bound=skew,
    )


def min_entropy_rate(q_phi: object, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Conversion rate from the maximally spread reference state to a target
    with tensor q_phi: the reference tensor is the identity, so the pencil
    reduces to 1 / lambda_max(q_phi). +inf for a symmetric target.

    The identity-source premise is about how q_phi was produced (a reference
    construction with unit tensor) and is not checkable here.
    """
    m = _tensor_matrix(q_phi, tol, "target tensor")
    top = float(np.linalg.eigvalsh(m)[-1])
    if top <= 0.0:
        return math.inf
    return 1.0 / top
