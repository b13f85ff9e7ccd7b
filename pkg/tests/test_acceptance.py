"""Acceptance gate: one test per release criterion, tolerances pinned.

Run `pytest tests/test_acceptance.py -v` for the one-line-per-criterion
verdict. Each criterion is self-contained: fixtures come from the shipped
problem files or are built inline, and every tolerance and runtime cap is
written out literally so the gate cannot drift.
"""

import json
import math
import time

import numpy as np
import pytest
from click.testing import CliRunner

from asymkit.chankit import apply_channel, build_conversion_channel
from asymkit.cli import main
from asymkit.core import MetricSpec, qgt, s_matrix, u1_relative_entropy_asymmetry
from asymkit.numkit import binary_entropy, state_distance
from asymkit.problemfile import load_problem, shipped_path
from asymkit.ratekit import (
    SymCheckOptions,
    conversion_rate,
    distillable_bound,
    reversibility_check,
    sup_ratio,
    sup_ratio_oracle,
)
from asymkit.repkit import (
    GroupPoint,
    RepPair,
    Representation,
    U1Spec,
    iid_generators,
    lift_projective,
    unitary_at,
)
from asymkit.simkit import ScanConfig, convergence_scan, monotonicity_probe, s_q_property_suite


def _problem(name):
    return load_problem(shipped_path(name))


def _rand_psd(rng, d, rank=None):
    k = d if rank is None else rank
    m = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    return m @ m.conj().T


def test_criterion_01_qgt_fixtures():
    start = time.perf_counter()
    appg = _problem("appendix_g_counterexample")
    rep = appg.pair.rep_in
    zero = np.array([1.0, 0.0], dtype=complex)
    plus = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
    q_zero = qgt(rep, zero, GroupPoint(), appg.tol).matrix
    q_plus = qgt(rep, plus, GroupPoint(), appg.tol).matrix
    # Curvature signs follow the literal non-symmetrized covariance; the
    # finite-difference oracle in tests/oracles.py is the arbiter of record.
    expected_zero = np.array([[1, 1j, 0], [-1j, 1, 0], [0, 0, 0]], dtype=complex)
    expected_plus = np.array([[0, 0, 0], [0, 1, 1j], [0, -1j, 1]], dtype=complex)
    assert np.max(np.abs(q_zero - expected_zero)) <= 1e-12
    assert np.max(np.abs(q_plus - expected_plus)) <= 1e-12
    so3 = _problem("so3_reference_J1")
    q_ref = qgt(so3.pair.rep_in, so3.state_in_vector, GroupPoint(), so3.tol).matrix
    assert np.max(np.abs(q_ref - np.eye(3))) <= 1e-10
    assert time.perf_counter() - start < 1.0


def test_criterion_02_pencil_vs_bisection_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(20240801)
    for trial in range(200):
        d = int(rng.integers(1, 7))
        a = _rand_psd(rng, d)
        rank = int(rng.integers(1, d + 1)) if trial % 3 == 0 else d
        b = _rand_psd(rng, d, rank)
        result = sup_ratio(a, b)
        oracle = sup_ratio_oracle(a, b)
        if math.isinf(result.value):
            assert math.isinf(oracle)
            continue
        assert abs(result.value - oracle) <= 1e-6
        scale = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1.0)
        low = np.linalg.eigvalsh(a - (result.value - 1e-6) * b)[0]
        high = np.linalg.eigvalsh(a - (result.value + 1e-6) * b)[0]
        assert low >= -1e-9 * scale
        assert high < 1e-9 * scale
    assert time.perf_counter() - start < 10.0


def test_criterion_03_rate_formula_fixtures():
    start = time.perf_counter()
    # (a) equal-period U(1): variance ratio
    u1 = _problem("u1_coherence_bit")
    report = conversion_rate(u1.pair, u1.state_in_vector, u1.state_out_vector, u1.sym_options, False, u1.tol)
    h = u1.pair.rep_in.generators[0]

    def variance(vec):
        return float(np.real(vec.conj() @ h @ h @ vec - (vec.conj() @ h @ vec) ** 2))

    expected = variance(u1.state_in_vector) / variance(u1.state_out_vector)
    assert abs(report.rate - expected) <= 1e-10

    # (b) SU(2) highest weight: min of transverse M-ratio and longitudinal V-ratio,
    # both recomputed from QGT entries
    su2 = _problem("su2_highest_weight")
    q_in = qgt(su2.pair.rep_in, su2.state_in_vector, GroupPoint(), su2.tol).matrix
    q_out = qgt(su2.pair.rep_out, su2.state_out_vector, GroupPoint(), su2.tol).matrix
    m_ratio = q_in[0, 1].imag / q_out[0, 1].imag
    v_ratio = q_in[2, 2].real / q_out[2, 2].real
    su2_report = conversion_rate(su2.pair, su2.state_in_vector, su2.state_out_vector, su2.sym_options, False, su2.tol)
    assert abs(su2_report.rate - min(m_ratio, v_ratio)) <= 1e-10

    # (c) |0> -> |+> under the full Pauli action: rate 0 with a kernel witness
    pauli = _problem("pauli_zero_vs_plus")
    zero_report = conversion_rate(pauli.pair, pauli.state_in_vector, pauli.state_out_vector, pauli.sym_options, False, pauli.tol)
    assert zero_report.rate == 0.0
    _, pencil = zero_report.per_component[0]
    gamma = pencil.minimizing_direction
    assert gamma is not None
    q_in = qgt(pauli.pair.rep_in, pauli.state_in_vector, GroupPoint(), pauli.tol).matrix
    q_out = qgt(pauli.pair.rep_out, pauli.state_out_vector, GroupPoint(), pauli.tol).matrix
    assert float(np.real(gamma.conj() @ q_in @ gamma)) <= 1e-10
    assert float(np.real(gamma.conj() @ q_out @ gamma)) >= 1e-6

    # (d) finite group through the projective lift: unconstrained direction, +inf
    zero_gen = np.zeros((2, 2), dtype=complex)
    flip = np.array([[0, 1], [1, 0]], dtype=complex)
    lifted = lift_projective(Representation(2, (zero_gen,), (np.eye(2, dtype=complex), flip)))
    plus2 = np.ones(lifted.dim, dtype=complex) / math.sqrt(lifted.dim)
    finite_report = conversion_rate(
        RepPair(lifted, lifted), plus2, plus2, SymCheckOptions(exhaustive=True), False
    )
    assert math.isinf(finite_report.rate) and finite_report.rate > 0
    assert finite_report.sym_verdict.verdict == "holds"
    assert time.perf_counter() - start < 2.0


def test_criterion_04_dmax_duality():
    fixtures = ("u1_coherence_bit", "su2_highest_weight", "so3_reference_J1", "pauli_zero_vs_plus")
    checked = 0
    for name in fixtures:
        p = _problem(name)
        report = conversion_rate(p.pair, p.state_in_vector, p.state_out_vector, p.sym_options, False, p.tol)
        if report.sym_verdict.verdict != "holds":
            continue
        dual = 2.0 ** (-report.dmax_bits)
        assert abs(report.rate - dual) <= 1e-10
        checked += 1
    assert checked >= 1


def test_criterion_05_reversibility():
    u1 = _problem("u1_coherence_bit")
    fwd = reversibility_check(u1.pair, u1.state_in_vector, u1.state_out_vector, u1.sym_options, u1.tol)
    assert fwd.reversible is True
    assert abs(fwd.r * fwd.r_reverse - 1.0) <= 1e-9
    su2 = _problem("su2_highest_weight")
    rev = reversibility_check(su2.pair, su2.state_in_vector, su2.state_out_vector, su2.sym_options, su2.tol)
    assert rev.reversible is False


def test_criterion_06_channel_construction():
    start = time.perf_counter()
    half = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
    half_y = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
    half_z = 0.5 * np.array([[1, 0], [0, -1]], dtype=complex)
    spin = Representation(2, (half, half_y, half_z))
    two = iid_generators(spin, 2)
    rng = np.random.default_rng(12)

    def rand_state(d):
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        return v / np.linalg.norm(v)

    psi1 = rand_state(2)
    psi2 = rand_state(2)
    psi = np.kron(psi1, psi2)
    pair = RepPair(two, spin)
    channel, artifacts = build_conversion_channel(pair, psi, psi1)
    total = sum(k.conj().T @ k for k in channel.kraus_ops)
    assert np.max(np.abs(total - np.eye(4))) <= 1e-12
    out = apply_channel(channel, np.outer(psi, psi.conj()))
    _, fid = state_distance(out, np.outer(psi1, psi1.conj()))
    assert fid >= 1.0 - 1e-12
    assert np.max(np.abs(artifacts.c_out - artifacts.z @ artifacts.c_in)) <= 1e-10

    # covariance to leading order: fidelity deficit on group-shifted inputs
    # falls off at least cubically in the shift angle
    direction = np.array([0.3, 0.5, 0.8])
    direction /= np.linalg.norm(direction)
    thetas = np.logspace(-3.0, -1.0, 7)
    points = []
    for theta in thetas:
        u_in = unitary_at(two, tuple(theta * direction), 0)
        u_out = unitary_at(spin, tuple(theta * direction), 0)
        rho = np.outer(u_in @ psi, (u_in @ psi).conj())
        target = np.outer(u_out @ psi1, (u_out @ psi1).conj())
        _, f = state_distance(apply_channel(channel, rho), target)
        deficit = 1.0 - f
        # deficits below the double-precision noise floor carry no slope
        # information and are excluded from the fit
        if deficit > 1e-12:
            points.append((math.log(theta), math.log(deficit)))
    assert len(points) >= 3
    xs = np.array([p[0] for p in points])
    ys = np.array([p[1] for p in points])
    slope = float(np.polyfit(xs, ys, 1)[0])
    assert slope >= 2.9
    assert time.perf_counter() - start < 5.0


def test_criterion_07_convergence_scan():
    start = time.perf_counter()
    u1 = _problem("u1_coherence_bit")
    config = ScanConfig(copies=tuple(range(1, 9)), shifts=((0.0,), (0.5,)), seed=0)
    table = convergence_scan(u1.pair, u1.state_in_vector, u1.state_out_vector, config, u1.tol)
    shifted = [r for r in table.rows if r.shift_norm > 0]
    shifted.sort(key=lambda r: r.n)
    assert [r.n for r in shifted] == list(range(1, 9))
    for earlier, later in zip(shifted, shifted[1:]):
        assert later.per_copy_infidelity <= earlier.per_copy_infidelity + 1e-15
    for row in table.rows:
        if row.shift_norm == 0.0:
            assert row.trace_distance <= 1e-10
    assert time.perf_counter() - start < 30.0


def test_criterion_08_monotonicity_suite():
    start = time.perf_counter()
    u1 = _problem("u1_coherence_bit")
    report = monotonicity_probe(u1.pair, u1.state_in, 200, 0, u1.tol)
    assert report.count == 200
    assert report.worst_petz_gap >= -1e-9
    assert report.worst_s_gap >= -1e-9
    assert report.worst_sq_gap >= -1e-9
    assert report.worst_strong_gap >= -1e-9
    assert report.negative_control_violation >= 1e-3
    assert time.perf_counter() - start < 60.0


def test_criterion_09_mixed_state_fixtures():
    u1 = _problem("u1_coherence_bit")
    rep = u1.pair.rep_in
    q, q_prime, eps = 0.3, 0.7, 2.0 / 3.0
    psi_q = np.array([math.sqrt(q), math.sqrt(1.0 - q)], dtype=complex)
    psi_qp = np.array([math.sqrt(q_prime), math.sqrt(1.0 - q_prime)], dtype=complex)
    rho = (1.0 - eps) * np.outer(psi_q, psi_q.conj()) + eps * np.eye(2) / 2.0

    # full-rank fixtures carry no distillable asymmetry: S vanishes identically
    appg = _problem("appendix_g_counterexample")
    for full_rank_rep, state in ((rep, rho), (appg.pair.rep_in, appg.state_in)):
        s = s_matrix(full_rank_rep, state, GroupPoint(), u1.tol)
        assert np.max(np.abs(s.matrix)) <= 1e-12

    bound = distillable_bound(u1.pair, rho, psi_qp, u1.tol)
    assert bound.rate == 0.0

    # closed forms for the dephasing relative entropy, in nats
    spec = U1Spec((0, 1))
    pure_value = u1_relative_entropy_asymmetry(spec, np.outer(psi_q, psi_q.conj()), u1.tol)
    assert abs(pure_value - binary_entropy(q)) <= 1e-10
    mixed_value = u1_relative_entropy_asymmetry(spec, rho, u1.tol)
    # at eps = 2/3 the subtracted term H(eps) equals the spectral entropy
    # H(eps/2), making the printed closed form exact
    expected = binary_entropy(q * (1.0 - eps) + eps / 2.0) - binary_entropy(eps)
    assert abs(mixed_value - expected) <= 1e-10


def test_criterion_10_average_qgt_incomparability():
    appg = _problem("appendix_g_counterexample")
    rep = appg.pair.rep_in
    phi = 0.8
    zero = np.array([1.0, 0.0], dtype=complex)
    avg_one = math.cos(phi) * qgt(rep, zero, GroupPoint(), appg.tol).matrix
    avg_two = np.zeros((3, 3), dtype=complex)
    for weight, vec in appg.ensemble:
        avg_two = avg_two + weight * qgt(rep, vec, GroupPoint(), appg.tol).matrix
    c, s = math.cos(phi), math.sin(phi)
    published_one = np.array([[c, 1j * c, 0], [-1j * c, c, 0], [0, 0, 0]], dtype=complex)
    published_two = np.array([[c * c, 1j * c, 0], [-1j * c, 1, 0], [0, 0, s * s]], dtype=complex)
    assert np.max(np.abs(avg_one - published_one)) <= 1e-10
    assert np.max(np.abs(avg_two - published_two)) <= 1e-10
    eigs = np.linalg.eigvalsh(avg_one - avg_two)
    assert eigs[0] < -1e-6 and eigs[-1] > 1e-6


def test_criterion_11_s_q_property_suite():
    u1 = _problem("u1_coherence_bit")
    report = s_q_property_suite(u1.pair.rep_in, count=100, seed=0, tol=u1.tol)
    assert report.draws == 100
    assert not report.caveats
    assert report.worst_positivity_gap >= -1e-9
    assert report.worst_additivity_gap >= -1e-9
    assert report.worst_convexity_gap >= -1e-9
    assert report.worst_monotonicity_gap >= -1e-9
    assert report.worst_strong_monotonicity_gap >= -1e-9
    assert report.decomposition_incomparable


def test_criterion_12_byte_identical_reruns(tmp_path):
    runner = CliRunner()
    u1 = str(shipped_path("u1_coherence_bit"))
    pauli = str(shipped_path("pauli_zero_vs_plus"))
    appg = str(shipped_path("appendix_g_counterexample"))
    shift = tmp_path / "u.json"
    shift.write_text("[[0.4]]")
    commands = [
        ["problems"],
        ["measure", "qgt", "--problem", pauli],
        ["measure", "smatrix", "--problem", u1],
        ["measure", "sq", "--problem", u1, "--q", "0.4"],
        ["measure", "ag", "--problem", u1],
        ["rate", "rate", "--problem", u1],
        ["rate", "rate", "--problem", pauli, "--catalyst"],
        ["rate", "reversible", "--problem", u1],
        ["rate", "distill-bound", "--problem", u1],
        ["rate", "cost-bound", "--problem", appg],
        ["rate", "thermo-bound", "--problem", u1],
        ["rate", "refrate", "--problem", u1],
        ["channel", "--problem", u1, "--seed", "5"],
        ["simulate", "scan", "--problem", u1, "--copies", "1:4", "--seed", "7"],
        ["simulate", "scan", "--problem", u1, "--copies", "1:4", "--seed", "7", "--format", "csv"],
        ["simulate", "estimate", "--problem", u1, "--copies", "4,6", "--shift-file", str(shift), "--seed", "3"],
        ["simulate", "check", "--problem", u1, "--suite", "all", "--count", "10", "--seed", "2"],
    ]
    for args in commands:
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == 0, (args, first.output, first.stderr)
        assert second.exit_code == 0
        assert first.output == second.output, args
