"""Integer program construction and the interchangeable aggregation oracles."""

import logging

from core.base_config import DEFAULT_BRUTE_FORCE_LIMIT, DEFAULT_STATE_LIMIT
from core.errors import InvalidInput, StateExplosion

from .base import BaseSolver, Selection
from .bruteforce import BruteForceSolver, solve_bruteforce
from .dp import BoundedDpSolver, DpSolver, solve_dp, solve_dp_bounded
from .greedy import GreedySolver, solve_greedy
from .ilp import IlpInstance, Solution, SolverStats, build_ilp
from .reduction import ReducedInstance, subset_sum_reduce

logger = logging.getLogger(__name__)

# Registry of available oracles
SOLVERS: dict[str, type[BaseSolver]] = {
    "brute": BruteForceSolver,
    "dp": DpSolver,
    "dp-bounded": BoundedDpSolver,
    "greedy": GreedySolver,
}


def make_solver(
    choice: str,
    radius: int | None = None,
    state_limit: int = DEFAULT_STATE_LIMIT,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
) -> BaseSolver:
    """Instantiate an oracle by name.

    Raises:
        InvalidInput: If the name is unknown or dp-bounded lacks a radius
    """
    if choice not in SOLVERS:
        raise InvalidInput(f"Unknown solver: {choice}. Available: {', '.join(SOLVERS)}")
    solver_class = SOLVERS[choice]
    if solver_class is BruteForceSolver:
        return BruteForceSolver(brute_force_limit)
    if solver_class is BoundedDpSolver:
        if radius is None:
            raise InvalidInput("dp-bounded requires a radius")
        return BoundedDpSolver(radius, state_limit)
    if solver_class is DpSolver:
        return DpSolver(state_limit)
    return solver_class()


def solve(
    inst: IlpInstance,
    choice: str,
    radius: int | None = None,
    fallback: str | None = None,
    state_limit: int = DEFAULT_STATE_LIMIT,
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
) -> Solution:
    """Solve with the named oracle, retrying with fallback on StateExplosion."""
    solver = make_solver(choice, radius, state_limit, brute_force_limit)
    try:
        return solver.solve(inst)
    except StateExplosion as e:
        if fallback is None:
            raise
        logger.warning(f"{choice} gave up ({e}); falling back to {fallback}")
        return make_solver(fallback, radius, state_limit, brute_force_limit).solve(inst)


__all__ = [
    "SOLVERS",
    "BaseSolver",
    "BoundedDpSolver",
    "BruteForceSolver",
    "DpSolver",
    "GreedySolver",
    "IlpInstance",
    "ReducedInstance",
    "Selection",
    "Solution",
    "SolverStats",
    "build_ilp",
    "make_solver",
    "solve",
    "solve_bruteforce",
    "solve_dp",
    "solve_dp_bounded",
    "solve_greedy",
    "subset_sum_reduce",
]
