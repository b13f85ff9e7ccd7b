from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymkit.errors import ResourceCapError, ValidationError
from asymkit.numkit import (
    DEFAULT_TOL,
    ToleranceConfig,
    binary_entropy,
    check_density,
    check_hermitian,
    check_state,
    exp_i_herm,
    herm_eig,
    kernel_split,
    psd_inv_sqrt,
    psd_sqrt,
    state_distance,
    tensor_cap,
    tensor_power,
    require_within_cap,
    vec_tensor_power,
    vn_entropy,
)
from oracles import (
    expm_series,
    pure_trace_distance,
    random_density,
    random_psd,
    random_state,
    vn_entropy_ref,
)


def test_tolerance_defaults():
    t = ToleranceConfig()
    assert t.tol_herm == 1e-10
    assert t.tol_norm == 1e-10
    assert t.tol_psd == 1e-9
    assert t.tol_kernel == 1e-9
    assert t.tol_residual == 1e-8


def test_tensor_cap_env_override(monkeypatch):
    assert tensor_cap() == 4096
    monkeypatch.setenv("ASYMKIT_TENSOR_CAP", "128")
    assert tensor_cap() == 128
    require_within_cap(128)
    with pytest.raises(ResourceCapError):
        require_within_cap(129)


def test_check_hermitian_rejects_nonhermitian():
    with pytest.raises(ValidationError):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_check_state_norm():
    check_state([1.0, 0.0])
    with pytest.raises(ValidationError):
        check_state([1.0, 1.0])


def test_check_density_rejects_bad_trace_and_negativity():
    with pytest.raises(ValidationError):
        check_density(np.eye(2))  # trace 2
    with pytest.raises(ValidationError):
        check_density(np.diag([1.5, -0.5]))


def test_herm_eig_ascending():
    w, v = herm_eig(np.diag([3.0, -1.0, 2.0]))
    assert list(w) == sorted(w)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, np.diag([3.0, -1.0, 2.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_psd_sqrt_squares_back(seed, d):
    rng = np.random.default_rng(seed)
    m = random_psd(rng, d)
    root = psd_sqrt(m)
    assert np.max(np.abs(root @ root - m)) < 1e-9 * max(np.max(np.abs(m)), 1.0)


def test_psd_inv_sqrt_on_support():
    m = np.diag([4.0, 1.0, 0.0])
    isq = psd_inv_sqrt(m)
    assert np.allclose(isq, np.diag([0.5, 1.0, 0.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.integers(0, 5))
def test_kernel_split_classifies(seed, d, rank):
    rank = min(rank, d)
    rng = np.random.default_rng(seed)
    m = random_psd(rng, d, rank=rank)
    supp, kern = kernel_split(m)
    assert supp.shape[1] + kern.shape[1] == d
    assert supp.shape[1] == rank
    joined = np.concatenate([supp, kern], axis=1)
    assert np.max(np.abs(joined.conj().T @ joined - np.eye(d))) < 1e-10
    if kern.shape[1]:
        assert np.max(np.abs(m @ kern)) < 1e-7 * max(np.max(np.abs(m)), 1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 5))
def test_exp_i_herm_matches_series(seed, d):
    rng = np.random.default_rng(seed)
    h = random_psd(rng, d) - random_psd(rng, d)
    u = exp_i_herm(h)
    assert np.max(np.abs(u - expm_series(1j * h))) < 1e-11
    assert np.max(np.abs(u @ u.conj().T - np.eye(d))) < 1e-12


def test_tensor_power_cap(monkeypatch):
    monkeypatch.setenv("ASYMKIT_TENSOR_CAP", "8")
    tensor_power(np.eye(2), 3)
    with pytest.raises(ResourceCapError):
        tensor_power(np.eye(2), 4)


def test_vec_tensor_power_is_kron():
    v = np.array([1.0, 2.0]) / math.sqrt(5.0)
    got = vec_tensor_power(v, 3)
    want = np.kron(np.kron(v, v), v)
    assert np.allclose(got, want)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_state_distance_pure_closed_form(seed, d):
    rng = np.random.default_rng(seed)
    a = random_state(rng, d)
    b = random_state(rng, d)
    tdist, fid = state_distance(np.outer(a, a.conj()), np.outer(b, b.conj()))
    assert abs(tdist - pure_trace_distance(a, b)) < 1e-10
    # squared convention: equals |<a|b>|^2 on pure states; the Uhlmann route
    # picks up sqrt(eps)-level noise from clipped zero eigenvalues
    assert abs(fid - abs(np.vdot(a, b)) ** 2) < 5e-8


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6))
def test_vn_entropy_matches_reference(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, d)
    assert abs(vn_entropy(rho) - vn_entropy_ref(rho)) < 1e-10


def test_binary_entropy_values():
    assert binary_entropy(0.5) == pytest.approx(math.log(2.0), abs=1e-14)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0


def test_state_distance_triangle_zero():
    rho = np.diag([0.25, 0.75]).astype(complex)
    tdist, fid = state_distance(rho, rho)
    assert tdist <= 1e-12
    assert fid == pytest.approx(1.0, abs=1e-12)
