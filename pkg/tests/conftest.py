import random

import pytest

from temporal_clustering import (euclidean_metric, make_sampling, matrix_metric)
from temporal_clustering.generators import SetCoverInstance, gen_setcover_metric

# Set system with 6 elements and 5 sets; its covering metric doubles as the
# standard single-level dominating-set fixture (optimum cover size 3).
SETCOVER_5x6 = SetCoverInstance(
    universe=6,
    sets=((0, 1), (1, 2, 3, 5), (1, 2, 4), (4,), (4, 5)))

# Point ids in the covering metric: sets first, then elements.
S1, S2, S3, S4, S5 = range(5)
U1, U2, U3, U4, U5, U6 = range(5, 11)


@pytest.fixture(scope="session")
def covering_instance():
    return gen_setcover_metric(SETCOVER_5x6)


def line_metric(xs):
    return euclidean_metric([[float(x)] for x in xs], dim=1)


def line_sampling(xs, levels):
    return make_sampling(line_metric(xs), levels)


def collinear_two_levels(spacing=2.0):
    """Five evenly spaced collinear points repeated in two identical levels."""
    m = line_metric([i * spacing for i in range(5)])
    return make_sampling(m, [[0, 1, 2, 3, 4], [0, 1, 2, 3, 4]])


def dyadic(rng: random.Random, lo_eighths=0, hi_eighths=16) -> float:
    """Multiples of 1/8 so that sums like 2r + delta stay exact in floats."""
    return rng.randint(lo_eighths, hi_eighths) / 8.0


def dyadic_matrix_metric(rng: random.Random, n: int):
    """Random valid metric: dyadic entries repaired by shortest-path closure."""
    d = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d[i][j] = d[j][i] = rng.randint(4, 16) / 8.0
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            row = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < row[j]:
                    row[j] = alt
    return matrix_metric(d)


def random_instance(rng: random.Random, max_t=4, max_pts=3, min_size=2):
    """Small random sampling over a random dyadic matrix metric."""
    while True:
        t = rng.randint(1, max_t)
        sizes = [rng.randint(1, max_pts) for _ in range(t)]
        if sum(sizes) >= min_size:
            break
    n = rng.randint(max(sizes), min(sum(sizes), 2 * max_pts))
    metric = dyadic_matrix_metric(rng, n)
    levels = [rng.sample(range(n), size) for size in sizes]
    return make_sampling(metric, levels)
