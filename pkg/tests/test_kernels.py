import os
import subprocess
import sys

import numpy as np
import pytest

from lsboundary import _kernels_py, kernels


def random_walk(rng, n):
    codes = rng.integers(0, 2, n).astype(np.int8)
    vals = np.where(codes == 0, rng.uniform(-40, 40, n), rng.uniform(-np.pi, np.pi, n))
    return codes, vals


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@pytest.mark.parametrize("seed", range(10))
def test_cython_matches_python(seed):
    from lsboundary import _kernels
    rng = np.random.default_rng(seed)
    codes, vals = random_walk(rng, 300)
    a = np.array(_kernels.walk_product(codes, vals))
    b = np.array(_kernels_py.walk_product(codes, vals))
    # compare the products themselves, independent of how the scale is split
    ma = a[:4] * np.exp(a[4] - b[4])
    assert np.allclose(ma, b[:4], rtol=1e-10, atol=1e-10 * np.abs(b[:4]).max())


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
def test_batched_parity():
    from lsboundary import _kernels
    rng = np.random.default_rng(3)
    parts = [random_walk(rng, int(n)) for n in rng.integers(1, 40, 50)]
    codes = np.concatenate([p[0] for p in parts])
    vals = np.concatenate([p[1] for p in parts])
    offsets = np.cumsum([0] + [len(p[0]) for p in parts]).astype(np.int64)
    ca = np.asarray(_kernels.walk_products(codes, vals, offsets))
    pa = np.asarray(_kernels_py.walk_products(codes, vals, offsets))
    for x, y in zip(ca, pa):
        tx = np.log(abs(x[0] + x[3])) + x[4]
        ty = np.log(abs(y[0] + y[3])) + y[4]
        assert tx == pytest.approx(ty, abs=1e-9)


def test_long_translation_does_not_overflow():
    a, b, c, d, s = kernels.walk_product([0, 0, 0], [900.0, 800.0, -100.0])
    assert np.isfinite([a, b, c, d, s]).all()
    assert np.log(abs(a + d)) + s == pytest.approx(800.0, rel=1e-14)


def test_twisted_traces_vectorised():
    l = np.array([1.0, 2.0])
    m = np.array([0.0, 3.0])
    out = kernels.twisted_traces(l, m, np.array([-1.0, -2.0]), np.array([1.0, 5.0]))
    assert out.shape == (2,)
    assert out[0] == pytest.approx(2 * np.cosh(0.5))


def test_pure_python_fallback_selected_by_env():
    env = dict(os.environ, LSBOUNDARY_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from lsboundary import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def random_crossings(rng, n):
    lsh = rng.uniform(-30, 30, n)
    lch = 0.5 * np.logaddexp(0.0, 2.0 * lsh)
    return rng.uniform(-200, 200, n), lsh, lch


def crossing_matrix_mp(D, lsh, lch):
    import mpmath as mp
    mp.mp.dps = 80
    m = mp.eye(2)
    for d, s, c in zip(D, lsh, lch):
        e, sh, ch = mp.e ** (mp.mpf(d) / 2), mp.e ** mp.mpf(s), mp.e ** mp.mpf(c)
        m = m * mp.matrix([[-e * ch, -e * sh], [-sh / e, -ch / e]])
    return m


@pytest.mark.parametrize("seed", range(5))
def test_crossing_product_against_mpmath(seed):
    import mpmath as mp
    rng = np.random.default_rng(seed)
    D, lsh, lch = random_crossings(rng, 12)
    m = crossing_matrix_mp(D, lsh, lch)
    sign = (-1) ** len(D)
    for impl in (None, _kernels_py):
        logs = kernels.crossing_product(D, lsh, lch, impl=impl)
        for x, (i, j) in zip(logs, [(0, 0), (0, 1), (1, 0), (1, 1)]):
            assert x == pytest.approx(float(mp.log(sign * m[i, j])), rel=1e-12, abs=1e-9)


def test_crossing_traces_batched_matches_single():
    rng = np.random.default_rng(11)
    sizes = rng.integers(1, 20, 40)
    parts = [random_crossings(rng, int(n)) for n in sizes]
    D, lsh, lch = (np.concatenate([p[k] for p in parts]) for k in range(3))
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    for impl in (None, _kernels_py):
        lam = kernels.crossing_log_traces(D, lsh, lch, offsets, impl=impl)
        for p, x in zip(parts, lam):
            l11, _, _, l22 = kernels.crossing_product(*p, impl=_kernels_py)
            assert x == pytest.approx(np.logaddexp(l11, l22), rel=1e-13)


def test_crossing_kernel_handles_infinite_logs():
    # sinh(h/2) underflowing to zero must not produce nan
    D = np.array([1.0, -1.0])
    lsh = np.array([-np.inf, 0.0])
    lch = np.array([0.0, 0.5 * np.log1p(np.e ** 2)])
    logs = kernels.crossing_product(D, lsh, lch)
    assert not any(np.isnan(logs))
