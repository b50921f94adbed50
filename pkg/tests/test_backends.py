import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rmtlab import _kernels as K
from rmtlab.rng import RngState, normals


@pytest.fixture(scope="module")
def gen():
    return RngState(77).generator()


def test_householder_agrees(gen):
    a = normals(gen, (40, 40))
    a = 0.5 * (a + a.T)
    d1, e1 = K.householder_tridiagonal_jit(a.copy())
    d2, e2 = K.householder_tridiagonal_numpy(a.copy())
    # the tridiagonal form is unique up to signs of the off-diagonal
    assert np.allclose(d1, d2, atol=1e-12)
    assert np.allclose(np.abs(e1), np.abs(e2), atol=1e-12)


def test_tql_agrees(gen):
    d = normals(gen, 60)
    e = np.zeros(60)
    e[:59] = normals(gen, 59)
    w1 = np.sort(K.tql_jit(d.copy(), e.copy(), 1800)[0])
    w2 = np.sort(K.tql_numpy(d.copy(), e.copy(), 1800)[0])
    assert np.max(np.abs(w1 - w2)) < 1e-12


def test_lu_agrees(gen):
    a = normals(gen, (30, 30))
    r1, r2 = K.lu_jit(a.copy()), K.lu_numpy(a.copy())
    assert np.allclose(r1[0], r2[0], atol=1e-12)
    assert np.array_equal(r1[1], r2[1])


def test_dyson_block_agrees(gen):
    lam = np.linspace(-1.5, 1.5, 12)
    xi = normals(gen, (300, 12))
    o1 = K.dyson_block_jit(lam.copy(), xi, 1e-3, 0.0, 0.2, 2.0, 1.0, 20)
    o2 = K.dyson_block_numpy(lam.copy(), xi, 1e-3, 0.0, 0.2, 2.0, 1.0, 20)
    assert np.allclose(o1[0], o2[0], atol=1e-12)
    assert o1[2:4] == o2[2:4]
    assert math.isclose(o1[1], o2[1], abs_tol=1e-12)


def test_lpp_agrees(gen):
    w = np.floor(-np.log(1.0 - gen.random((25, 31))) / math.log(3.0)).astype(np.int64)
    assert np.array_equal(K.lpp_jit(w), K.lpp_numpy(w))


@pytest.mark.parametrize("n,k", [(3, 4), (4, 5), (2, 7)])
def test_word_signatures_agree(n, k):
    c1, n1 = K.word_signatures_jit(n, k)
    c2, n2 = K.word_signatures_numpy(n, k)
    assert dict(zip(c1.tolist(), n1.tolist())) == dict(zip(c2.tolist(), n2.tolist()))
    assert int(n1.sum()) == n**k


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, RMTLAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from rmtlab import _kernels as K; print(K.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_path_end_to_end():
    code = ("import numpy as np; from rmtlab import symmetric_eigenvalues;"
            "a = np.arange(16.0).reshape(4, 4); a = a + a.T;"
            "print(np.max(np.abs(symmetric_eigenvalues(a) - np.linalg.eigvalsh(a))))")
    env = dict(os.environ, RMTLAB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert float(out.stdout) < 1e-11
