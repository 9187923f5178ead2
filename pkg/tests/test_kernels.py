import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from descentkit import kernels

from conftest import brute_dim

PRIMES = [2, 3, 5, 7, 2147483629]

try:
    CY = kernels.backend("cython")
except ImportError:  # pragma: no cover - only without a build
    CY = None
PY = kernels.backend("python")
needs_cython = pytest.mark.skipif(CY is None, reason="compiled kernels not built")


@st.composite
def matrices(draw, max_side=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    a = draw(arrays(np.int64, (r, c), elements=st.integers(-10**6, 10**6)))
    return a, p


@needs_cython
@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_backends_agree(data):
    a, p = data
    wc, pc = CY.rref_modp(a, p)
    wp, pp = PY.rref_modp(a, p)
    assert np.array_equal(np.asarray(wc), wp) and list(pc) == list(pp)
    assert CY.rank_modp(a, p) == PY.rank_modp(a, p) == len(pp)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3]), arrays(np.int64, (3, 4), elements=st.integers(0, 2)))
def test_rank_against_brute_span(p, a):
    a = a % p
    assert kernels.rank_modp(a, p) == brute_dim(p, list(a), 4)


def brute_first(basis, p, target, start, count):
    h = basis.shape[0]
    for t in range(start, min(start + count, p ** h)):
        digits = [(t // p ** d) % p for d in range(h)]
        m = sum(c * basis[d] for d, c in enumerate(digits)) % p
        if brute_dim(p, list(m), m.shape[1]) == target:
            return t
    return -1


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3]),
    arrays(np.int64, (3, 2, 2), elements=st.integers(0, 2)),
    st.integers(0, 2),
    st.integers(0, 20),
    st.integers(1, 30),
)
def test_first_rank_combination(p, basis, target, start, count):
    basis = basis % p
    want = brute_first(basis, p, target, start, count)
    assert PY.first_rank_combination(basis, p, target, start, count) == want
    if CY is not None:
        assert CY.first_rank_combination(basis, p, target, start, count) == want


def test_reduced_form():
    w, piv = kernels.rref_modp(np.array([[2, 4, 1], [1, 2, 0]]), 3)
    assert list(piv) == [0, 2]
    assert np.asarray(w).tolist() == [[1, 2, 0], [0, 0, 1]]


def test_pure_fallback_selected_by_environment():
    env = dict(os.environ, DESCENTKIT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "import descentkit; print(descentkit.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
