import numpy as np
import pytest

import switchstab as st


@pytest.fixture(scope="session")
def ex1() -> st.Problem:
    return st.builtin_problem(1)


@pytest.fixture(scope="session")
def ex2() -> st.Problem:
    return st.builtin_problem(2)


@pytest.fixture(scope="session")
def ex1_gains(ex1) -> st.GainSet:
    c = ex1.certificate
    return st.gains_from(c.R_tilde, c.L, zeta=c.zeta)


@pytest.fixture
def two_mode_chain() -> st.ModeChain:
    return st.new_mode_chain([[0.7, 0.3], [0.3, 0.7]], r0=1)


def random_chain(rng: np.random.Generator, M: int) -> st.ModeChain:
    """Dense random chain; the +0.05 floor keeps it irreducible and aperiodic."""
    P = rng.random((M, M)) + 0.05
    P /= P.sum(axis=1, keepdims=True)
    return st.new_mode_chain(P, r0=1)
