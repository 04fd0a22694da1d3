"""The compiled kernels and the pure-Python fallback must agree exactly
on integer outputs and to rounding on floating-point ones."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

import switchstab as st
from switchstab import _kernels_py

try:
    from switchstab import _kernels_cy

    HAVE_CY = True
except ImportError:
    HAVE_CY = False

needs_cy = pytest.mark.skipif(not HAVE_CY, reason="compiled kernels not built")


def test_backend_name_valid():
    assert st.backend_name() in ("cython", "python")


@needs_cy
def test_active_backend_is_compiled():
    # the build in this repo compiles the extension, so it should win
    assert st.backend_name() == "cython"


@needs_cy
class TestKernelEquivalence:
    def test_sample_modes(self):
        rng = np.random.default_rng(0)
        P = rng.random((4, 4)) + 0.05
        P /= P.sum(axis=1, keepdims=True)
        cum = np.cumsum(P, axis=1)
        cum[:, -1] = 1.0
        u = rng.random(500)
        a = _kernels_py.sample_modes(cum, 2, u)
        b = np.asarray(_kernels_cy.sample_modes(cum, 2, u))
        np.testing.assert_array_equal(a, b)

    def test_sample_gaps(self):
        rng = np.random.default_rng(1)
        probs = np.array([0.2, 0.5, 0.3])
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        support = np.array([1, 3, 7])
        u = rng.random(200)
        a = _kernels_py.sample_gaps(cum, support, u)
        b = np.asarray(_kernels_cy.sample_gaps(cum, support, u))
        np.testing.assert_array_equal(a, b)

    def test_fill_sigma(self):
        r = np.array([1, 2, 2, 1, 1, 2, 1, 1, 2, 1, 2])
        times = np.array([0, 3, 4, 8, 15])
        a = _kernels_py.fill_sigma(r, times, 10)
        b = np.asarray(_kernels_cy.fill_sigma(r, times, 10))
        np.testing.assert_array_equal(a, b)

    def test_closed_loop(self):
        rng = np.random.default_rng(2)
        F = rng.standard_normal((2, 2, 3, 3)) * 0.4
        r = rng.integers(0, 2, size=60)
        sigma = rng.integers(0, 2, size=60)
        x0 = rng.standard_normal(3)
        a, fa = _kernels_py.closed_loop(F, r, sigma, x0, 1e12)
        b, fb = _kernels_cy.closed_loop(F, r, sigma, x0, 1e12)
        assert fa == fb
        np.testing.assert_allclose(np.asarray(a), np.asarray(b), atol=1e-12)

    def test_closed_loop_clamp_agrees(self):
        # explosive dynamics exercise the rescaling branch in both kernels
        F = np.full((1, 1, 2, 2), 0.0)
        F[0, 0] = [[3.0, 0.1], [0.0, 3.0]]
        r = np.zeros(400, dtype=np.int64)
        sigma = np.zeros(400, dtype=np.int64)
        x0 = np.array([1.0, 1.0])
        a, fa = _kernels_py.closed_loop(F, r, sigma, x0, 1e12)
        b, fb = _kernels_cy.closed_loop(F, r, sigma, x0, 1e12)
        assert fa == fb > 0
        np.testing.assert_allclose(np.asarray(a), np.asarray(b), rtol=1e-12)


@needs_cy
def test_trajectory_identical_across_backends(ex1, ex1_gains, tmp_path):
    """A run in a forced-fallback subprocess matches the compiled run:
    integer sequences bit for bit, states to accumulation rounding."""
    traj = st.closed_loop_run(
        ex1.system, ex1.chain, ex1.dist, ex1_gains, ex1.x0,
        horizon=150, seed=42,
    )
    script = tmp_path / "run_py.py"
    script.write_text(
        "import json, sys\n"
        "import numpy as np\n"
        "import switchstab as st\n"
        "assert st.backend_name() == 'python'\n"
        "p = st.builtin_problem(1)\n"
        "g = st.gains_from(p.certificate.R_tilde, p.certificate.L)\n"
        "t = st.closed_loop_run(p.system, p.chain, p.dist, g, p.x0,\n"
        "                       horizon=150, seed=42)\n"
        "json.dump({'x': t.x.tolist(), 'r': t.r.tolist(),\n"
        "           'sigma': t.sigma.tolist(),\n"
        "           'times': t.obs_times.times.tolist()}, sys.stdout)\n"
    )
    env = dict(os.environ, SWITCHSTAB_BACKEND="python")
    out = subprocess.run(
        [sys.executable, str(script)], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0, out.stderr
    got = json.loads(out.stdout)
    np.testing.assert_array_equal(np.array(got["r"]), traj.r)
    np.testing.assert_array_equal(np.array(got["sigma"]), traj.sigma)
    np.testing.assert_array_equal(np.array(got["times"]), traj.obs_times.times)
    np.testing.assert_allclose(np.array(got["x"]), traj.x, atol=1e-12)


def test_env_override_rejects_unknown(tmp_path):
    script = tmp_path / "bad_backend.py"
    script.write_text("import switchstab\n")
    env = dict(os.environ, SWITCHSTAB_BACKEND="fortran")
    out = subprocess.run(
        [sys.executable, str(script)], env=env, capture_output=True, text=True
    )
    assert out.returncode != 0
    assert "SWITCHSTAB_BACKEND" in out.stderr
