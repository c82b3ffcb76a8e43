"""Fast heuristics: largest-first greedy and the peeling lower bound."""

import logging

from .base import BaseSolver, Selection
from .ilp import IlpInstance, Solution

logger = logging.getLogger(__name__)


def _column(inst: IlpInstance, j: int) -> list[int]:
    return [int(v) for v in inst.matrix[:, j]]


def greedy_columns(inst: IlpInstance) -> list[int]:
    """Columns picked largest amount first (ties by id), skipping misfits."""
    order = sorted(range(inst.num_txns), key=lambda j: (-inst.weights[j], inst.transactions[j].id))
    load = [0] * inst.num_hubs
    picked = []
    for j in order:
        column = _column(inst, j)
        trial = [a + b for a, b in zip(load, column, strict=True)]
        if all(v <= c for v, c in zip(trial, inst.cover, strict=True)):
            load = trial
            picked.append(j)
    return picked


def peel_columns(inst: IlpInstance, columns: list[int]) -> list[int]:
    """Start from every column and drop senders at overloaded hubs until feasible.

    At the first overloaded hub the smallest transaction it sends that covers
    the excess is dropped, or its largest if none does; ties go to the
    smaller id.
    """
    selected = set(columns)
    load = [0] * inst.num_hubs
    for j in selected:
        load = [a + b for a, b in zip(load, _column(inst, j), strict=True)]
    while True:
        over = [i for i, (v, c) in enumerate(zip(load, inst.cover, strict=True)) if v > c]
        if not over:
            return sorted(selected)
        hub = over[0]
        excess = load[hub] - inst.cover[hub]
        sent = [j for j in selected if inst.matrix[hub, j] > 0]
        covering = [j for j in sent if inst.weights[j] >= excess]
        if covering:
            drop = min(covering, key=lambda j: (inst.weights[j], inst.transactions[j].id))
        else:
            drop = min(sent, key=lambda j: (-inst.weights[j], inst.transactions[j].id))
        selected.discard(drop)
        load = [a - b for a, b in zip(load, _column(inst, drop), strict=True)]


class GreedySolver(BaseSolver):
    """Largest-first greedy; always feasible, not always optimal."""

    name = "greedy"

    def _select(self, inst: IlpInstance) -> Selection:
        picked = set(greedy_columns(inst))
        indicator = tuple(int(j in picked) for j in range(inst.num_txns))
        return Selection(indicator, states_explored=inst.num_txns)


def solve_greedy(inst: IlpInstance) -> Solution:
    """Greedy solution, sorted by amount descending then id ascending."""
    return GreedySolver().solve(inst)
