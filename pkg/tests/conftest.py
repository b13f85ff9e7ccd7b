from __future__ import annotations

import numpy as np
import pytest

from asymkit.problemfile import Problem, load_problem, shipped_problems


@pytest.fixture(scope="session")
def problems() -> dict[str, Problem]:
    return {name: load_problem(path) for name, path in shipped_problems().items()}


@pytest.fixture(scope="session")
def pauli() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return sx, sy, sz
