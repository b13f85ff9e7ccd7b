"""Regenerate the shipped problem files under src/asymkit/problems/.

Deterministic: running it twice produces byte-identical JSON. Each fixture is
a self-contained conversion question; see the README for what each one pins
down.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "asymkit" / "problems"


def enc_scalar(x: complex) -> object:
    x = complex(x)
    if x.imag == 0.0:
        return x.real
    return [x.real, x.imag]


def enc_matrix(m: np.ndarray) -> list:
    return [[enc_scalar(x) for x in row] for row in np.asarray(m, dtype=complex)]


def enc_vector(v: np.ndarray) -> list:
    return [enc_scalar(x) for x in np.asarray(v, dtype=complex)]


def spin_matrices(j: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Standard angular momentum matrices in the basis m = j, j-1, ..., -j."""
    dim = int(round(2 * j)) + 1
    m_vals = [j - k for k in range(dim)]
    jz = np.diag(np.array(m_vals, dtype=complex))
    jp = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        m = m_vals[k]
        jp[k - 1, k] = math.sqrt(j * (j + 1) - m * (m + 1))
    jx = 0.5 * (jp + jp.conj().T)
    jy = -0.5j * (jp - jp.conj().T)
    return jx, jy, jz


def pauli() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return sx, sy, sz


def u1_coherence_bit() -> dict:
    h = np.diag([0.0, 1.0]).astype(complex)
    alpha = 0.9
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    target = np.array([math.cos(alpha), math.sin(alpha)])
    return {
        "label": "u1_coherence_bit",
        "rep_in": {"dim": 2, "generators": [enc_matrix(h)], "label": "number"},
        "rep_out": {"dim": 2, "generators": [enc_matrix(h)], "label": "number"},
        "state_in": {"type": "pure", "vector": enc_vector(plus)},
        "state_out": {"type": "pure", "vector": enc_vector(target)},
        "u1": {"in": {"eigenvalues": [0, 1]}, "out": {"eigenvalues": [0, 1]}},
        "thermo": {"h_target": enc_matrix(h), "r": 2.0, "q": 0.5},
    }


def su2_highest_weight() -> dict:
    blocks = [spin_matrices(0.5), spin_matrices(1.5)]
    gens = []
    for axis in range(3):
        g = np.zeros((6, 6), dtype=complex)
        g[:2, :2] = blocks[0][axis]
        g[2:, 2:] = blocks[1][axis]
        gens.append(g)
    psi = np.zeros(6)
    psi[0] = math.sqrt(0.3)
    psi[2] = math.sqrt(0.7)
    phi = np.zeros(6)
    phi[0] = math.sqrt(0.6)
    phi[2] = math.sqrt(0.4)
    return {
        "label": "su2_highest_weight",
        "rep_in": {"dim": 6, "generators": [enc_matrix(g) for g in gens], "label": "spin-1/2 + spin-3/2"},
        "rep_out": {"dim": 6, "generators": [enc_matrix(g) for g in gens], "label": "spin-1/2 + spin-3/2"},
        "state_in": {"type": "pure", "vector": enc_vector(psi)},
        "state_out": {"type": "pure", "vector": enc_vector(phi)},
    }


def so3_reference_j1() -> dict:
    jx, jy, jz = spin_matrices(1.0)
    scale = math.sqrt(3.0 / 2.0)  # sqrt(3 / (J (J+1))) at J = 1
    eye = np.eye(3, dtype=complex)
    gens = [scale * np.kron(j, eye) for j in (jx, jy, jz)]
    psi = np.zeros(9)
    for m in range(3):
        psi[3 * m + m] = 1.0 / math.sqrt(3.0)
    phi = np.zeros(9)
    phi[0] = 1.0  # highest-weight state times a fixed ancilla level
    return {
        "label": "so3_reference_J1",
        "rep_in": {"dim": 9, "generators": [enc_matrix(g) for g in gens], "label": "normalized spin-1 x ancilla"},
        "rep_out": {"dim": 9, "generators": [enc_matrix(g) for g in gens], "label": "normalized spin-1 x ancilla"},
        "state_in": {"type": "pure", "vector": enc_vector(psi)},
        "state_out": {"type": "pure", "vector": enc_vector(phi)},
    }


def pauli_zero_vs_plus() -> dict:
    sx, sy, sz = pauli()
    zero = np.array([1.0, 0.0])
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    return {
        "label": "pauli_zero_vs_plus",
        "rep_in": {"dim": 2, "generators": [enc_matrix(m) for m in (sx, sy, sz)], "label": "pauli"},
        "rep_out": {"dim": 2, "generators": [enc_matrix(m) for m in (sx, sy, sz)], "label": "pauli"},
        "state_in": {"type": "pure", "vector": enc_vector(zero)},
        "state_out": {"type": "pure", "vector": enc_vector(plus)},
    }


def appendix_g_counterexample() -> dict:
    sx, sy, sz = pauli()
    angle = 0.8
    eps = math.cos(angle)
    rho = 0.5 * (np.eye(2, dtype=complex) + eps * sz)
    psi_plus = np.array([math.cos(angle / 2.0), math.sin(angle / 2.0)])
    psi_minus = np.array([math.cos(angle / 2.0), -math.sin(angle / 2.0)])
    return {
        "label": "appendix_g_counterexample",
        "rep_in": {"dim": 2, "generators": [enc_matrix(m) for m in (sx, sy, sz)], "label": "pauli"},
        "rep_out": {"dim": 2, "generators": [enc_matrix(m) for m in (sx, sy, sz)], "label": "pauli"},
        "state_in": {"type": "mixed", "matrix": enc_matrix(rho)},
        "state_out": {"type": "pure", "vector": enc_vector(psi_plus)},
        "ensemble": {
            "members": [
                {"weight": 0.5, "vector": enc_vector(psi_plus)},
                {"weight": 0.5, "vector": enc_vector(psi_minus)},
            ],
            "p_sym": 0.0,
        },
    }


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    fixtures = {
        "u1_coherence_bit": u1_coherence_bit(),
        "su2_highest_weight": su2_highest_weight(),
        "so3_reference_J1": so3_reference_j1(),
        "pauli_zero_vs_plus": pauli_zero_vs_plus(),
        "appendix_g_counterexample": appendix_g_counterexample(),
    }
    for name, data in fixtures.items():
        path = OUT_DIR / f"{name}.json"
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
