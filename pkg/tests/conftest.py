import numpy as np
import pytest

from rifs import (AffineSpec, BernoulliMeasure, MarkovMeasure, MatrixFamily,
                  SimilaritySpec)


@pytest.fixture
def uniform2():
    return BernoulliMeasure([0.5, 0.5])


@pytest.fixture
def skew2():
    return BernoulliMeasure([0.8, 0.2])


@pytest.fixture
def markov2():
    return MarkovMeasure([4.0 / 7.0, 3.0 / 7.0], [[0.7, 0.3], [0.4, 0.6]])


@pytest.fixture
def line_family():
    """Two positive similarities on the line, scalars uniform on [0.5, 0.9]."""
    return MatrixFamily(1, [SimilaritySpec(0.5, 0.9)] * 2, [[0.0], [0.5]])


@pytest.fixture
def plane_family():
    return MatrixFamily(2, [SimilaritySpec(0.7, 0.9)] * 2, [[0.0, 0.0], [1.0, 0.0]])


@pytest.fixture
def affine_family():
    bases = [np.diag([0.9, 0.7]).tolist(), np.diag([0.8, 0.95]).tolist()]
    spec = AffineSpec(0.45, 0.49, bases, [0.5, 0.5])
    t = [[1.0, 0.0], [0.0, 1.0]]
    return MatrixFamily(2, [spec, spec], t, declared_nonsingular="full")
