"""Small-scale simulations that exercise the package's inequalities.

Nothing here proves anything: these are seeded, budgeted probes that check
convergence trends of the explicit channels, monotonicity of the mixed-state
tensors under covariant maps, the near-pure metric lower bound, the
finite-copy variance bound, and the algebraic properties of the S_q family,
including the decomposition-average incomparability example.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chankit import (
    KrausChannel,
    MonteCarloTwirl,
    _twirl_points,
    apply_channel,
    build_conversion_channel,
    twirl,
)
from .core import MetricSpec, generalized_variance, petz_norm, qgt, s_matrix, s_q_matrix
from .errors import PreconditionError, ValidationError
from .numkit import (
    DEFAULT_TOL,
    ToleranceConfig,
    check_density,
    check_hermitian,
    check_state,
    max_abs,
    state_distance,
    tensor_power,
    vec_tensor_power,
)
from .ratekit import sup_ratio
from .repkit import GroupPoint, RepPair, Representation, U1Spec, iid_generators, unitary_at

__all__ = [
    "ScanConfig",
    "ScanRow",
    "ScanTable",
    "MonotonicityReport",
    "LargestEvReport",
    "FiniteNRow",
    "FiniteNReport",
    "SqSuiteReport",
    "shifted_iid_state",
    "convergence_scan",
    "monotonicity_probe",
    "largest_ev_check",
    "finite_n_lemma2_probe",
    "s_q_property_suite",
]


@dataclass(frozen=True, eq=False)
class ScanConfig:
    """Copy counts and per-copy parameter shifts for a convergence scan."""

    copies: tuple[int, ...] = (1, 2, 4, 8)
    shifts: tuple[tuple[float, ...], ...] = ((0.0,),)
    seed: int = 0

    def __post_init__(self) -> None:
        copies = tuple(int(n) for n in self.copies)
        if not copies or any(n < 1 for n in copies):
            raise ValidationError("copy counts must be positive")
        if list(copies) != sorted(copies):
            raise ValidationError("copy counts must be ascending")
        object.__setattr__(self, "copies", copies)
        object.__setattr__(
            self, "shifts", tuple(tuple(float(x) for x in np.atleast_1d(s)) for s in self.shifts)
        )


@dataclass(frozen=True)
class ScanRow:
    n: int
    shift_norm: float
    trace_distance: float
    fidelity: float
    per_copy_infidelity: float


@dataclass(frozen=True, eq=False)
class ScanTable:
    rows: tuple[ScanRow, ...]
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class MonotonicityReport:
    count: int
    worst_s_gap: float
    worst_sq_gap: float
    worst_petz_gap: float
    worst_strong_gap: float
    twirl_defect_max: float
    negative_control_violation: float
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class LargestEvReport:
    count_checked: int
    skipped: int
    metric_violations: int
    max_deficit: float


@dataclass(frozen=True)
class FiniteNRow:
    n: int
    distance: float
    ratio: float
    reference: float
    slack: float
    holds: bool


@dataclass(frozen=True, eq=False)
class FiniteNReport:
    rows: tuple[FiniteNRow, ...]
    caveats: tuple[str, ...] = ()


@dataclass(frozen=True, eq=False)
class SqSuiteReport:
    draws: int
    worst_positivity_gap: float
    worst_additivity_gap: float
    worst_convexity_gap: float
    worst_monotonicity_gap: float
    worst_strong_monotonicity_gap: float
    decomposition_incomparable: bool
    decomposition_difference_eigs: tuple[float, ...]
    caveats: tuple[str, ...] = ()


def shifted_iid_state(
    rep: Representation,
    psi: object,
    u: object,
    n: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> np.ndarray:
    """n copies of exp(i (u/sqrt(n)) . X) psi, as one product vector."""
    v = check_state(psi, tol, "state")
    shift = np.asarray(u, dtype=float).reshape(-1)
    if shift.size != rep.dim_g:
        raise ValidationError(f"shift has {shift.size} entries, expected {rep.dim_g}")
    if n < 1:
        raise ValidationError(f"copy count must be >= 1, got {n}")
    single = unitary_at(rep, tuple(shift / math.sqrt(n))) @ v if np.any(shift) else v
    return vec_tensor_power(single, n, "shifted iid state")


def convergence_scan(
    pair: RepPair,
    psi: object,
    phi: object,
    config: ScanConfig = ScanConfig(),
    tol: ToleranceConfig = DEFAULT_TOL,
) -> ScanTable:
    """Apply the rate-1 conversion channel copy-wise and table the error.

    The channel acts independently on each copy, so the n-copy output of the
    product input is exactly the n-fold power of the single-copy output; the
    trace distance is still evaluated honestly on the full product space
    (hence the dimension cap). Requires the pencil value to be at least 1.
    """
    vin = check_state(psi, tol, "input state")
    vout = check_state(phi, tol, "output state")
    q_in = qgt(pair.rep_in, vin, GroupPoint(), tol)
    q_out = qgt(pair.rep_out, vout, GroupPoint(), tol)
    r = sup_ratio(q_in, q_out, tol).value
    if r < 1.0 - 1e-9:
        raise PreconditionError(f"pencil value {r:.6f} is below 1; the single-copy channel does not exist")
    channel, _ = build_conversion_channel(pair, vin, vout, tol)
    rows = []
    for n in config.copies:
        for shift in config.shifts:
            sh = np.asarray(shift, dtype=float)
            if sh.size != pair.dim_g:
                raise ValidationError(f"shift has {sh.size} entries, expected {pair.dim_g}")
            per_shift = sh / math.sqrt(n)
            in_single = unitary_at(pair.rep_in, tuple(per_shift)) @ vin if np.any(sh) else vin
            target_single = unitary_at(pair.rep_out, tuple(per_shift)) @ vout if np.any(sh) else vout
            out_single = apply_channel(channel, np.outer(in_single, in_single.conj()), tol)
            per_copy_fid = float(np.real(target_single.conj() @ out_single @ target_single))
            per_copy_fid = min(per_copy_fid, 1.0)
            big_out = tensor_power(out_single, n, "scan output")
            big_target_vec = vec_tensor_power(target_single, n, "scan target")
            big_target = np.outer(big_target_vec, big_target_vec.conj())
            tdist, fid = state_distance(big_out, big_target, tol)
            rows.append(
                ScanRow(
                    n=n,
                    shift_norm=float(np.linalg.norm(sh)),
                    trace_distance=tdist,
                    fidelity=fid,
                    per_copy_infidelity=max(1.0 - per_copy_fid, 0.0),
                )
            )
    return ScanTable(
        tuple(rows),
        ("channel acts copy-wise; product structure of the output is exact",),
    )


def _random_channel(rng: np.random.Generator, d_out: int, d_in: int, tol: ToleranceConfig) -> KrausChannel:
    n_ops = int(rng.integers(2, 5))
    raw = [rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in)) for _ in range(n_ops)]
    total = sum(k.conj().T @ k for k in raw)
    w, v = np.linalg.eigh(0.5 * (total + total.conj().T))
    isq = (v / np.sqrt(w)) @ v.conj().T
    return KrausChannel(tuple(k @ isq for k in raw), tol)


def _integer_u1_specs(pair: RepPair, tol: ToleranceConfig) -> tuple[U1Spec, U1Spec] | None:
    """Integer-spectrum single-generator data for exact twirls, if available."""
    if pair.dim_g != 1:
        return None
    specs = []
    for rep in (pair.rep_in, pair.rep_out):
        w, v = np.linalg.eigh(rep.generators[0])
        rounded = np.round(w)
        if max_abs(w - rounded) > 1e-9:
            return None
        specs.append(U1Spec(tuple(int(x) for x in rounded), v))
    return specs[0], specs[1]


def _random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    r = rank or d
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    return m / m.trace().real


def monotonicity_probe(
    pair: RepPair,
    rho: object,
    count: int = 50,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MonotonicityReport:
    """Random twirled channels must shrink the mixed-state tensors.

    Each draw twirls a random CPTP map to covariance (exactly when the pair
    carries an integer-spectrum circle action, Monte-Carlo otherwise), then
    measures the most negative eigenvalue of S^rho - S^{E(rho)}, the S_q
    analogue at a random q, the metric-norm contraction along random
    directions, and the strong (selective) version over a two-branch
    covariant instrument. A deliberately non-covariant channel closes the
    loop: its violation is reported and should be far from zero.
    """
    rin = check_density(rho, tol, "probe state")
    rng = np.random.default_rng(seed)
    d_in, d_out = pair.rep_in.dim, pair.rep_out.dim
    sampling = _integer_u1_specs(pair, tol)
    caveats: list[str] = []
    if sampling is None:
        sampling = MonteCarloTwirl(count=48, seed=seed + 1)
        caveats.append("Monte-Carlo twirl in use; covariance only approximate")
    base_in = Representation(d_in, pair.rep_in.generators, tol=tol)
    base_out = Representation(d_out, pair.rep_out.generators, tol=tol)
    worst_s = 0.0
    worst_sq = 0.0
    worst_petz = 0.0
    worst_strong = 0.0
    defect_max = 0.0
    s_in = s_matrix(base_in, rin, GroupPoint(), tol).matrix
    for _ in range(count):
        q = float(rng.uniform(0.05, 0.95))
        spec = MetricSpec(q)
        raw = _random_channel(rng, d_out, d_in, tol)
        half = max(1, len(raw.kraus_ops) // 2)
        branch_a = raw.kraus_ops[:half]
        branch_b = raw.kraus_ops[half:]
        result = twirl(raw, pair, sampling, tol)
        defect_max = max(defect_max, result.covariance_defect)
        out = apply_channel(result.channel, rin, tol)
        s_out = s_matrix(base_out, out, GroupPoint(), tol).matrix
        worst_s = min(worst_s, float(np.linalg.eigvalsh(s_in - s_out)[0]))
        sq_in = s_q_matrix(base_in, rin, spec, GroupPoint(), tol).matrix
        sq_out = s_q_matrix(base_out, out, spec, GroupPoint(), tol).matrix
        worst_sq = min(worst_sq, float(np.linalg.eigvalsh(sq_in - sq_out)[0]))
        for _ in range(2):
            gamma = rng.standard_normal(pair.dim_g) + 1j * rng.standard_normal(pair.dim_g)
            o_in = sum(c.conjugate() * x for c, x in zip(gamma, pair.rep_in.generators))
            o_out = sum(c.conjugate() * x for c, x in zip(gamma, pair.rep_out.generators))
            gap = petz_norm(rin, o_in, spec, tol) - petz_norm(out, o_out, spec, tol)
            scale = max(petz_norm(rin, o_in, spec, tol), 1.0)
            worst_petz = min(worst_petz, gap / scale)
        if branch_b:
            # covariant instrument: twirl each CP branch separately; the twirls
            # of jointly-TP branches stay jointly TP
            points, weight, _ = _twirl_points(pair, sampling)
            root = math.sqrt(weight)
            branch_states = []
            sq_mix = np.zeros((pair.dim_g, pair.dim_g), dtype=complex)
            ok = True
            for branch in (branch_a, branch_b):
                ops = [root * (uout.conj().T @ k @ uin) for uin, uout in points for k in branch]
                sub = np.zeros((d_out, d_out), dtype=complex)
                for k in ops:
                    sub += k @ rin @ k.conj().T
                p_k = float(sub.trace().real)
                if p_k < 1e-8:
                    ok = False
                    break
                branch_states.append((p_k, sub / p_k))
            if ok:
                for p_k, state in branch_states:
                    sq_mix += p_k * s_q_matrix(base_out, state, spec, GroupPoint(), tol).matrix
                worst_strong = min(worst_strong, float(np.linalg.eigvalsh(sq_in - sq_mix)[0]))
    # negative control: replace-with-fixed-state map, deliberately not
    # covariant. Probed on the given state and on a ground eigenstate of the
    # first generator; the latter guards against the degenerate case where the
    # input already equals the replacement state.
    chi = np.ones(d_out, dtype=complex) / math.sqrt(d_out)
    control_ops = tuple(np.outer(chi, e) for e in np.eye(d_in, dtype=complex))
    control = KrausChannel(control_ops, tol)
    x0 = pair.rep_in.generators[0]
    ground = np.linalg.eigh(0.5 * (x0 + x0.conj().T))[1][:, 0]
    control_violation = 0.0
    for probe in (rin, np.outer(ground, ground.conj())):
        s_probe = s_matrix(base_in, probe, GroupPoint(), tol).matrix
        control_out = apply_channel(control, probe, tol)
        s_control = s_matrix(base_out, control_out, GroupPoint(), tol).matrix
        gap = -float(np.linalg.eigvalsh(s_probe - s_control)[0])
        control_violation = max(control_violation, gap)
    control_violation = max(0.0, control_violation)
    return MonotonicityReport(
        count=count,
        worst_s_gap=worst_s,
        worst_sq_gap=worst_sq,
        worst_petz_gap=worst_petz,
        worst_strong_gap=worst_strong,
        twirl_defect_max=defect_max,
        negative_control_violation=control_violation,
        caveats=tuple(caveats),
    )


def largest_ev_check(count: int = 200, seed: int = 0, tol: ToleranceConfig = DEFAULT_TOL) -> LargestEvReport:
    """Near-pure metric lower bound on random draws.

    Draws a pure reference phi and a state sigma with infidelity
    delta = 1 - <phi|sigma|phi> < 1/2, then asserts (a) the top eigenvector
    Phi of sigma keeps overlap |<phi|Phi>|^2 >= 1 - 2 delta and (b) the
    squared metric norm of i[sigma, O] dominates
    (1 - 2 delta)^2 / f_q(delta / (1 - delta)) times the pure-state variance
    of O at phi, with f_q(x) = (1 - q) + q x. Reports violations (expected:
    none) and the worst margin deficit seen.
    """
    rng = np.random.default_rng(seed)
    checked = 0
    skipped = 0
    violations = 0
    max_deficit = math.inf
    for _ in range(count):
        d = int(rng.integers(2, 5))
        pure = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        pure = pure / np.linalg.norm(pure)
        eps = float(rng.uniform(0.01, 0.5))
        sigma = (1.0 - eps) * np.outer(pure, pure.conj()) + eps * _random_density(rng, d)
        sigma = 0.5 * (sigma + sigma.conj().T)
        delta = 1.0 - float(np.real(pure.conj() @ sigma @ pure))
        if delta >= 0.45:
            skipped += 1
            continue
        _, v = np.linalg.eigh(sigma)
        overlap = float(np.abs(pure.conj() @ v[:, -1]) ** 2)
        if overlap < 1.0 - 2.0 * delta - 1e-10:
            violations += 1
        o = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        q = float(rng.uniform(0.1, 0.9))
        lhs = petz_norm(sigma, o, MetricSpec(q), tol)
        t = delta / (1.0 - delta)
        f_val = (1.0 - q) + q * t
        rhs = (1.0 - 2.0 * delta) ** 2 / f_val * generalized_variance(pure, o, tol)
        margin = lhs - rhs
        scale = max(lhs, rhs, 1.0)
        if margin < -1e-10 * scale:
            violations += 1
        max_deficit = min(max_deficit, margin / scale)
        checked += 1
    return LargestEvReport(
        count_checked=checked,
        skipped=skipped,
        metric_violations=violations,
        max_deficit=max_deficit if checked else math.nan,
    )


def finite_n_lemma2_probe(
    rep: Representation,
    phi: object,
    o: object,
    sigmas: object,
    spec: MetricSpec = MetricSpec(),
    tol: ToleranceConfig = DEFAULT_TOL,
) -> FiniteNReport:
    """Finite-copy variance lower bound along a sequence approaching iid.

    For each (n, sigma_n) the probe tables the per-copy metric quantity
    f_q(0) ||i[sigma_n, O_n]||^2 / n against the single-copy variance
    V(phi, O), where O_n is the copy-wise extension of O, and asserts only the
    inequality direction once sigma_n is within trace distance 0.05 of the
    product target, with an explicit slack in the report. Trend probe, not a
    proof.
    """
    vout = check_state(phi, tol, "target state")
    op = check_hermitian(o, tol, "observable")
    if op.shape != (rep.dim, rep.dim):
        raise ValidationError("observable does not match the representation dimension")
    reference = generalized_variance(vout, op, tol)
    op_norm = float(np.linalg.norm(op, 2))
    rows = []
    for n, sigma in sigmas:
        n = int(n)
        sig = check_density(sigma, tol, f"sigma at n={n}")
        target_vec = vec_tensor_power(vout, n, "probe target")
        target = np.outer(target_vec, target_vec.conj())
        if sig.shape != target.shape:
            raise ValidationError(f"sigma at n={n} has shape {sig.shape}, expected {target.shape}")
        dist, _ = state_distance(sig, target, tol)
        big_rep = iid_generators(Representation(rep.dim, (op,), tol=tol), n)
        o_n = big_rep.generators[0]
        ratio = spec.f_at_zero() * petz_norm(sig, o_n, spec, tol) / n
        slack = 8.0 * op_norm**2 * math.sqrt(max(dist, 0.0)) / (spec.q * (1.0 - spec.q))
        holds = True
        if dist < 0.05:
            holds = ratio >= reference - slack
        rows.append(FiniteNRow(n=n, distance=dist, ratio=ratio, reference=reference, slack=slack, holds=holds))
    return FiniteNReport(
        tuple(rows),
        ("trend probe, not a proof; slack is a calibration choice recorded per row",),
    )


def _pauli_rep(tol: ToleranceConfig) -> Representation:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return Representation(2, (sx, sy, sz), tol=tol)


def _decomposition_check(tol: ToleranceConfig) -> tuple[bool, tuple[float, ...]]:
    """Two decompositions of one qubit state whose average tensors are
    incomparable: neither dominates, so no decomposition-wise bound can close.
    """
    angle = 0.8
    rep = _pauli_rep(tol)
    eps = math.cos(angle)
    zero = np.array([1.0, 0.0], dtype=complex)
    plus_minus = []
    for sign in (+1.0, -1.0):
        vec = np.array([math.cos(angle / 2.0), sign * math.sin(angle / 2.0)], dtype=complex)
        plus_minus.append(vec)
    q_zero = qgt(rep, zero, GroupPoint(), tol).matrix
    avg_one = eps * q_zero
    avg_two = 0.5 * (
        qgt(rep, plus_minus[0], GroupPoint(), tol).matrix
        + qgt(rep, plus_minus[1], GroupPoint(), tol).matrix
    )
    eigs = np.linalg.eigvalsh(0.5 * ((avg_one - avg_two) + (avg_one - avg_two).conj().T))
    incomparable = bool(eigs[0] < -1e-9 and eigs[-1] > 1e-9)
    return incomparable, tuple(float(x) for x in eigs)


def s_q_property_suite(
    rep: Representation,
    count: int = 30,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> SqSuiteReport:
    """Property battery for the S_q family on random states over one rep.

    Positivity, additivity over independent copies, convexity, monotonicity
    under twirled random channels (exact twirl when the rep supports it), and
    the strong selective version; plus the fixed two-decomposition
    incomparability example on the qubit, which is rep-independent.
    """
    rng = np.random.default_rng(seed)
    d = rep.dim
    pair = RepPair(rep, rep)
    sampling = _integer_u1_specs(pair, tol)
    caveats: list[str] = []
    if sampling is None:
        sampling = MonteCarloTwirl(count=48, seed=seed + 1)
        caveats.append("Monte-Carlo twirl in use; monotonicity gaps only approximate")
    worst_pos = 0.0
    worst_add = 0.0
    worst_convex = 0.0
    worst_mono = 0.0
    worst_strong = 0.0
    big = iid_generators(rep, 2)
    for _ in range(count):
        q = float(rng.uniform(0.05, 0.95))
        spec = MetricSpec(q)
        rho = _random_density(rng, d, rank=int(rng.integers(1, d + 1)))
        sigma = _random_density(rng, d)
        sq_rho = s_q_matrix(rep, rho, spec, GroupPoint(), tol).matrix
        sq_sigma = s_q_matrix(rep, sigma, spec, GroupPoint(), tol).matrix
        worst_pos = min(worst_pos, float(np.linalg.eigvalsh(sq_rho)[0]))
        joint = s_q_matrix(big, np.kron(rho, sigma), spec, GroupPoint(), tol).matrix
        worst_add = min(worst_add, -max_abs(joint - sq_rho - sq_sigma))
        lam = float(rng.uniform(0.2, 0.8))
        mix = lam * rho + (1.0 - lam) * sigma
        sq_mix = s_q_matrix(rep, mix, spec, GroupPoint(), tol).matrix
        gap = lam * sq_rho + (1.0 - lam) * sq_sigma - sq_mix
        worst_convex = min(worst_convex, float(np.linalg.eigvalsh(gap)[0]))
        raw = _random_channel(rng, d, d, tol)
        twirled = twirl(raw, pair, sampling, tol).channel
        out = apply_channel(twirled, rho, tol)
        sq_out = s_q_matrix(rep, out, spec, GroupPoint(), tol).matrix
        worst_mono = min(worst_mono, float(np.linalg.eigvalsh(sq_rho - sq_out)[0]))
        half = max(1, len(raw.kraus_ops) // 2)
        points, weight, _ = _twirl_points(pair, sampling)
        root = math.sqrt(weight)
        mix_branch = np.zeros_like(sq_rho)
        ok = True
        for branch in (raw.kraus_ops[:half], raw.kraus_ops[half:]):
            if not branch:
                ok = False
                break
            ops = [root * (uout.conj().T @ k @ uin) for uin, uout in points for k in branch]
            sub = np.zeros((d, d), dtype=complex)
            for k in ops:
                sub += k @ rho @ k.conj().T
            p_k = float(sub.trace().real)
            if p_k < 1e-8:
                ok = False
                break
            mix_branch = mix_branch + p_k * s_q_matrix(rep, sub / p_k, spec, GroupPoint(), tol).matrix
        if ok:
            worst_strong = min(worst_strong, float(np.linalg.eigvalsh(sq_rho - mix_branch)[0]))
    incomparable, eigs = _decomposition_check(tol)
    return SqSuiteReport(
        draws=count,
        worst_positivity_gap=worst_pos,
        worst_additivity_gap=worst_add,
        worst_convexity_gap=worst_convex,
        worst_monotonicity_gap=worst_mono,
        worst_strong_monotonicity_gap=worst_strong,
        decomposition_incomparable=incomparable,
        decomposition_difference_eigs=eigs,
        caveats=tuple(caveats),
    )
