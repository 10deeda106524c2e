import math
import random

from temporal_clustering import (CoverageState, best_new_tube, check_solution,
                                 clustering_stats, enumerate_trajectories, leq,
                                 oracle_feasible, oracle_opt_k, solve_bicriteria,
                                 solve_exact_k, solve_rds_greedy)

from conftest import S1, S2, S3, dyadic, line_sampling, random_instance


def exhaustive_best_count(p, r, delta, state):
    best = 0
    for tau in enumerate_trajectories(p, delta):
        count = sum(
            1 for i, level in enumerate(p.levels) for a, q in enumerate(level)
            if not state.covered[i][a] and leq(p.metric.distance(q, tau[i]), r))
        best = max(best, count)
    return best


def test_exact_k_singleton_chain():
    p = line_sampling([0.0, 0.5, 1.0], [[0], [1], [2]])
    out = solve_exact_k(p, 1, 0.0, 0.5)
    assert out.feasible
    stats = clustering_stats(p, out.clustering)
    assert stats.rad_inf == 0.0 and stats.k == 1


def test_exact_k_net_size_certificate():
    p = line_sampling([0, 10, 20], [[0, 1, 2]])
    out = solve_exact_k(p, 2, 1.0, 0.0)
    assert not out.feasible
    assert out.certificate.kind == "net-size"
    assert out.certificate.message == "net-size 3 > k at level 0"


def test_exact_k_flow_infeasible_certificate():
    p = line_sampling([0, 9], [[0], [1]])
    out = solve_exact_k(p, 1, 0.5, 1.0)
    assert not out.feasible
    assert out.certificate.kind == "flow-infeasible"


def test_exact_k_guarantee_on_feasible_instances():
    rng = random.Random(61)
    solved = 0
    while solved < 60:
        p = random_instance(rng)
        k = rng.randint(1, 3)
        r, delta = dyadic(rng), dyadic(rng)
        ok, _ = oracle_feasible(p, k, r, delta, "center")
        if not ok:
            continue
        out = solve_exact_k(p, k, r, delta)
        assert out.feasible, f"false infeasibility: {out.certificate}"
        assert check_solution(p, out.clustering, k, 2 * r, 2 * r + delta, "center").passed
        solved += 1


def test_best_new_tube_all_covered():
    p = line_sampling([0, 1], [[0, 1]])
    state = CoverageState(p)
    state.cover_tube((0,), 1.0)
    assert state.uncovered == 0
    tau, count = best_new_tube(p, 1.0, 0.0, state)
    assert tau is not None and count == 0


def test_best_new_tube_single_level_argmax():
    p = line_sampling([0, 1, 2, 10], [[0, 1, 2, 3]])
    tau, count = best_new_tube(p, 1.0, 0.0, CoverageState(p))
    assert tau == (1,) and count == 3


def test_best_new_tube_covering_instance(covering_instance):
    tau, count = best_new_tube(covering_instance, 1.0, 0.0,
                               CoverageState(covering_instance))
    assert tau == (S2,) and count == 9


def test_best_new_tube_no_path():
    p = line_sampling([0, 9], [[0], [1]])
    tau, count = best_new_tube(p, 1.0, 1.0, CoverageState(p))
    assert tau is None and count == 0


def test_best_new_tube_matches_exhaustive():
    rng = random.Random(62)
    for _ in range(120):
        p = random_instance(rng)
        r, delta = dyadic(rng), dyadic(rng)
        state = CoverageState(p)
        for _ in range(rng.randint(0, 2)):
            tau = [rng.choice(level) for level in p.levels]
            state.cover_tube(tuple(tau), r)
        trajectories = enumerate_trajectories(p, delta)
        if not trajectories:
            continue
        _, count = best_new_tube(p, r, delta, state)
        assert count == exhaustive_best_count(p, r, delta, state)


def test_rds_greedy_single_tube():
    p = line_sampling([0.0, 0.5, 1.0], [[0, 1, 2]])
    out = solve_rds_greedy(p, 1.0, 0.0)
    assert out.feasible and out.clustering.k == 1


def test_rds_greedy_covering_instance(covering_instance):
    out = solve_rds_greedy(covering_instance, 1.0, 0.0)
    assert out.feasible
    assert out.clustering.trajectories == ((S2,), (S1,), (S3,))
    assert oracle_opt_k(covering_instance, 1.0, 0.0, "center")[0] == 3


def test_rds_greedy_stalls_without_paths():
    p = line_sampling([0, 9], [[0], [1]])
    out = solve_rds_greedy(p, 1.0, 1.0)
    assert not out.feasible
    assert out.certificate.kind == "greedy-stalled"


def test_rds_greedy_exact_bounds_and_ln_factor():
    rng = random.Random(63)
    solved = 0
    while solved < 50:
        p = random_instance(rng)
        r, delta = dyadic(rng), dyadic(rng)
        out = solve_rds_greedy(p, r, delta)
        opt = oracle_opt_k(p, r, delta, "center")
        if not out.feasible:
            assert opt is None
            continue
        solved += 1
        assert opt is not None
        report = check_solution(p, out.clustering, out.clustering.k, r, delta, "center")
        assert report.passed
        assert out.clustering.k <= max(1, math.ceil(math.log(p.size))) * opt[0]


def test_rds_greedy_gains_non_increasing():
    rng = random.Random(64)
    for _ in range(60):
        p = random_instance(rng)
        out = solve_rds_greedy(p, dyadic(rng), dyadic(rng))
        if out.feasible:
            gains = out.diagnostics["gains"]
            assert all(a >= b for a, b in zip(gains, gains[1:]))


def test_bicriteria_trivial_instance():
    p = line_sampling([0.0, 0.5], [[0], [1]])
    out = solve_bicriteria(p, 1, 0.0, 0.5)
    assert out.feasible
    stats = clustering_stats(p, out.clustering)
    assert stats.k <= 2 and stats.rad_inf == 0.0


def test_bicriteria_guarantee_on_feasible_instances():
    rng = random.Random(65)
    solved = 0
    while solved < 60:
        p = random_instance(rng)
        k = rng.randint(1, 3)
        r, delta = dyadic(rng), dyadic(rng)
        ok, _ = oracle_feasible(p, k, r, delta, "center")
        if not ok:
            continue
        out = solve_bicriteria(p, k, r, delta)
        assert out.feasible, f"false infeasibility: {out.certificate}"
        assert check_solution(p, out.clustering, 2 * k, 2 * r, r + delta, "center").passed
        solved += 1


def test_bicriteria_infeasible_consistent_with_oracle():
    rng = random.Random(66)
    seen = 0
    while seen < 20:
        p = random_instance(rng)
        k = rng.randint(1, 2)
        r, delta = dyadic(rng, 0, 6), dyadic(rng, 0, 6)
        out = solve_bicriteria(p, k, r, delta)
        if out.feasible:
            continue
        seen += 1
        ok, _ = oracle_feasible(p, k, r, delta, "center")
        assert not ok
