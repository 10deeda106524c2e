"""Temporal clustering of unlabeled point-set sequences.

Given a sequence of point sets from one metric space, the solvers here
compute sets of trajectories (one point per snapshot) trading off cluster
count, per-snapshot spatial cost, and per-step center displacement, with
provable relaxation factors.  A brute-force oracle and hardness-gadget
instance generators support end-to-end correctness testing.
"""

from .metric import (DegenerateSpreadError, FiniteMetric, InvalidPointError,
                     MetricValidationError, euclidean_metric, leq, matrix_metric)
from .instance import (CheckReport, Clustering, ClusteringStats, EmptyClusteringError,
                       InstanceFormatError, StructuralError, TemporalSampling,
                       Trajectory, check_solution, clustering_displacement,
                       clustering_stats, displacement, load_clustering,
                       load_instance, make_clustering, make_sampling,
                       save_clustering, save_instance, spatial_cost)
from .level_graph import LevelGraph, build_level_graph, trajectory_is_path
from .nets import NetResult, greedy_net
from .flow import (CenterError, FlowConsistencyError, FlowNetwork, IntegralFlow,
                   build_network, decompose_paths, min_feasible_flow, verify_flow)
from .kcenter import (CoverageState, InfeasibilityCertificate, SolveOutcome,
                      best_new_tube, solve_bicriteria, solve_exact_k,
                      solve_rds_greedy)
from .median import (PotentialState, best_w_trajectory, potential_w,
                     solve_median_greedy, solve_median_r0)
from .oracle import (OracleBudget, OracleBudgetError, enumerate_trajectories,
                     oracle_feasible, oracle_opt_k, oracle_opt_r)
from .generators import (Cnf3, CnfError, GadgetParamError, GadgetParams,
                         SetCoverInstance, all_sign_patterns_cnf, format_dimacs,
                         gen_random_walkers, gen_sat3, gen_setcover_metric,
                         parse_dimacs, parse_setcover_json)

__version__ = "0.1.0"
