import numpy as np
import pytest

from parabolica import _kernels
from parabolica.circle import CharacteristicPair, validate_marked_set


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the JIT kernels once so timed tests measure steady state."""
    _kernels.warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


@pytest.fixture
def pair_2x2():
    """Standard exact K=M=2 fixture: tau table {0.9, 0.4, 0.2, 0.7}."""
    return CharacteristicPair(
        plus=validate_marked_set(["1/10", "2/5"], [[1], [2]]),
        minus=validate_marked_set(["1/5", "7/10"], [[1], [2]]),
    )


@pytest.fixture
def fig8_pairs():
    """Two non-synchronized pairs whose difference tables are ordered
    differently for every shift (cyclic words of cell labels differ)."""
    pair_a = CharacteristicPair(
        plus=validate_marked_set(["1/20", "3/20"], [[1], [2]]),
        minus=validate_marked_set(["0", "11/20"], [[1], [2]]),
    )
    pair_b = CharacteristicPair(
        plus=validate_marked_set(["1/20", "11/20"], [[1], [2]]),
        minus=validate_marked_set(["0", "4/5"], [[1], [2]]),
    )
    return pair_a, pair_b
