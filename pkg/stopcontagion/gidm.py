"""Generalized influence diffusion minimization on a nice tree decomposition.

Given thresholds ``t``, an immunizable set ``A``, a counted set ``B`` and a
budget ``l``, find at most ``l`` vertices of ``A`` to immunize so that the
fewest ``B`` vertices end up infected.

The table ranges over *closed* infected sets rather than infection orders.
A set ``C`` is closed when it holds every non-immunized seed and no vertex
outside ``C`` (and not immunized) has ``t(v)`` neighbours in ``C``. The
closure of the seeds is the smallest closed set, so minimising over closed
sets gives the same optimum and no vertex ever needs a justification for
being infected.

Bag vertices carry one of three states. A safe vertex also carries how many
infected neighbours it has among already forgotten vertices; it must stay
below ``t(v)``. Every edge is accounted once, at the Forget node of whichever
endpoint is forgotten first, and every vertex is charged (budget or ``B``
count) once, at its own Forget node, so Join nodes simply add.
"""
import enum
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from .decomposition import NiceDecomposition, NodeKind, check_nice
from .errors import IllegalState, InvalidDecomposition, InvalidInstance, TooLarge
from .graph_core import Graph, VertexSet
from .percolation import IMMUNIZED, ThresholdMap, percolate

logger = logging.getLogger(__name__)

INF = math.inf

# key entries: a safe vertex stores its infected-neighbour count (>= 0)
INFECTED = -1
IMMUNE = -2

Key = Tuple[int, ...]
Value = Union[int, float]


class State(str, enum.Enum):
    INFECTED = "n"
    SAFE = "s"
    IMMUNIZED = "m"


@dataclass(frozen=True)
class GidmInstance:
    graph: Graph
    thresholds: ThresholdMap
    immunizable: VertexSet
    counted: VertexSet
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise InvalidInstance(f"budget must be non-negative, got {self.budget}")
        if len(self.thresholds) != self.graph.n:
            raise InvalidInstance(f"threshold map covers {len(self.thresholds)} vertices, graph has {self.graph.n}")
        for name, vertices in (("immunizable", self.immunizable), ("counted", self.counted)):
            bad = [v for v in vertices if not 0 <= v < self.graph.n]
            if bad:
                raise InvalidInstance(f"{name} vertex {bad[0]} outside 0..{self.graph.n - 1}")

    def with_budget(self, budget: int) -> "GidmInstance":
        return GidmInstance(self.graph, self.thresholds, self.immunizable, self.counted, budget)

    def infected_count(self, immunized: VertexSet) -> int:
        closure = percolate(self.graph, self.thresholds.immunize(immunized)).closure
        return len(closure & self.counted)


@dataclass(frozen=True)
class GidmSolution:
    optimum: int
    immunized: VertexSet
    budget: int


def decode_key(bag: Tuple[int, ...], key: Key, thresholds: ThresholdMap) -> Tuple[Dict[int, State], Dict[int, int]]:
    """State mapping and residual thresholds (infected neighbours still tolerated + 1)."""
    states: Dict[int, State] = {}
    residual: Dict[int, int] = {}
    for v, entry in zip(bag, key):
        if entry == INFECTED:
            states[v], residual[v] = State.INFECTED, 0
        elif entry == IMMUNE:
            states[v], residual[v] = State.IMMUNIZED, 0
        else:
            states[v], residual[v] = State.SAFE, thresholds[v] - entry
    return states, residual


@dataclass
class DpTable:
    bags: List[Tuple[int, ...]]
    values: List[Dict[Key, List[Value]]]
    pointers: List[dict]

    def cell_count(self, node: int) -> int:
        return len(self.values[node])


class GidmSolver:
    """Fills the table once for budgets ``0..instance.budget``."""

    def __init__(self, instance: GidmInstance, nice: NiceDecomposition, check: bool = True):
        if check:
            report = check_nice(instance.graph, nice)
            if not report.ok:
                raise InvalidDecomposition(f"not a nice decomposition of the instance graph: {report.detail}")
        self.instance = instance
        self.nice = nice
        self.budget = instance.budget
        t = instance.thresholds
        self._preimmune = [t.is_immunized(v) for v in range(instance.graph.n)]
        # largest infected-neighbour count a safe vertex may reach
        self._cap = [-1 if self._preimmune[v] else t[v] - 1 for v in range(instance.graph.n)]
        self.table = DpTable([], [], [])
        self._fill()

    def _fill(self) -> None:
        for i, node in enumerate(self.nice.nodes):
            bag = tuple(sorted(node.bag))
            self.table.bags.append(bag)
            if node.kind is NodeKind.LEAF:
                values, pointers = {(): [0] * (self.budget + 1)}, {(): None}
            elif node.kind is NodeKind.INTRODUCE:
                values, pointers = self._introduce(bag, node.vertex, node.children[0])
            elif node.kind is NodeKind.FORGET:
                values, pointers = self._forget(bag, node.vertex, node.children[0])
            else:
                values, pointers = self._join(node.children[0], node.children[1])
            self.table.values.append(values)
            self.table.pointers.append(pointers)
            logger.debug(f"node {i} ({node.kind.value}, bag {len(bag)}): {self.table.cell_count(i)} cells")

    def _options(self, u: int) -> List[int]:
        if self._preimmune[u]:
            return [IMMUNE]
        options = [INFECTED]
        if self._cap[u] >= 0:
            options.append(0)
        if u in self.instance.immunizable:
            options.append(IMMUNE)
        return options

    def _introduce(self, bag: Tuple[int, ...], u: int, child: int):
        pos = bag.index(u)
        values: Dict[Key, List[Value]] = {}
        pointers: Dict[Key, Key] = {}
        options = self._options(u)
        for key, row in self.table.values[child].items():
            for option in options:
                new_key = key[:pos] + (option,) + key[pos:]
                values[new_key] = list(row)
                pointers[new_key] = key
        return values, pointers

    def _forget(self, bag: Tuple[int, ...], u: int, child: int):
        child_bag = self.table.bags[child]
        pos = child_bag.index(u)
        graph = self.instance.graph
        near = [q for q, v in enumerate(child_bag) if q != pos and graph.has_edge(u, v)]
        charged = u in self.instance.immunizable and not self._preimmune[u]
        counted = u in self.instance.counted
        cap = self._cap
        values: Dict[Key, List[Value]] = {}
        pointers: Dict[Key, List[Optional[Tuple[Key, int]]]] = {}
        for key, row in self.table.values[child].items():
            state = key[pos]
            entries = list(key)
            infected_near = 0
            feasible = True
            for q in near:
                other = key[q]
                if other == INFECTED:
                    infected_near += 1
                elif other >= 0 and state == INFECTED:
                    entries[q] = other + 1
                    if entries[q] > cap[child_bag[q]]:
                        feasible = False
                        break
            if not feasible or (state >= 0 and state + infected_near > cap[u]):
                continue
            del entries[pos]
            new_key = tuple(entries)
            shift = 1 if state == IMMUNE and charged else 0
            gain = 1 if state == INFECTED and counted else 0
            target = values.get(new_key)
            if target is None:
                target = values[new_key] = [INF] * (self.budget + 1)
                pointers[new_key] = [None] * (self.budget + 1)
            back = pointers[new_key]
            for p in range(shift, self.budget + 1):
                candidate = row[p - shift] + gain
                if candidate < target[p]:
                    target[p] = candidate
                    back[p] = (key, p - shift)
        return values, pointers

    def _join(self, left: int, right: int):
        bag = self.table.bags[left]
        cap = [self._cap[v] for v in bag]
        groups: Dict[Key, List[Key]] = {}
        for key in self.table.values[right]:
            groups.setdefault(tuple(e if e < 0 else 0 for e in key), []).append(key)
        right_values = self.table.values[right]
        values: Dict[Key, List[Value]] = {}
        pointers: Dict[Key, List[Optional[Tuple[Key, int, Key, int]]]] = {}
        budget = self.budget
        for lkey, lrow in self.table.values[left].items():
            signature = tuple(e if e < 0 else 0 for e in lkey)
            for rkey in groups.get(signature, ()):
                merged = []
                for q, (a, b) in enumerate(zip(lkey, rkey)):
                    if a >= 0:
                        a += b
                        if a > cap[q]:
                            break
                    merged.append(a)
                else:
                    new_key = tuple(merged)
                    rrow = right_values[rkey]
                    target = values.get(new_key)
                    if target is None:
                        target = values[new_key] = [INF] * (budget + 1)
                        pointers[new_key] = [None] * (budget + 1)
                    back = pointers[new_key]
                    for p in range(budget + 1):
                        for a in range(p + 1):
                            candidate = lrow[a] + rrow[p - a]
                            if candidate < target[p]:
                                target[p] = candidate
                                back[p] = (lkey, a, rkey, p - a)
        return values, pointers

    def profile(self) -> Tuple[Value, ...]:
        """Optimum for every budget ``0..budget``; non-increasing."""
        return tuple(self.table.values[self.nice.root][()])

    def certificate(self, p: Optional[int] = None) -> VertexSet:
        """Immunized set achieving the optimum for budget ``p`` (default: full budget)."""
        p = self.budget if p is None else p
        if not 0 <= p <= self.budget:
            raise InvalidInstance(f"budget {p} outside 0..{self.budget}")
        if self.profile()[p] == INF:
            raise IllegalState(f"no finite table value at the root for budget {p}")
        immunized = set()
        stack = [(self.nice.root, (), p)]
        while stack:
            i, key, budget = stack.pop()
            node = self.nice.nodes[i]
            back = self.table.pointers[i][key]
            if node.kind is NodeKind.LEAF:
                continue
            if node.kind is NodeKind.INTRODUCE:
                stack.append((node.children[0], back, budget))
            elif node.kind is NodeKind.FORGET:
                child_key, child_budget = back[budget]
                if child_budget != budget:
                    immunized.add(node.vertex)
                stack.append((node.children[0], child_key, child_budget))
            else:
                lkey, lp, rkey, rp = back[budget]
                stack.append((node.children[0], lkey, lp))
                stack.append((node.children[1], rkey, rp))
        return frozenset(immunized)

    def solve(self, p: Optional[int] = None) -> GidmSolution:
        """Optimum and certificate for budget ``p``, checked by forward percolation."""
        p = self.budget if p is None else p
        optimum = self.profile()[p]
        immunized = self.certificate(p)
        if len(immunized) > p:
            raise IllegalState(f"certificate immunizes {len(immunized)} vertices with budget {p}")
        infected = self.instance.infected_count(immunized)
        if infected != optimum:
            raise IllegalState(f"certificate infects {infected} counted vertices, table says {optimum}")
        return GidmSolution(int(optimum), immunized, p)


def solve_gidm(instance: GidmInstance, nice: NiceDecomposition) -> GidmSolution:
    return GidmSolver(instance, nice).solve()


def gidm_bruteforce(instance: GidmInstance, max_immunizable: int = 20, max_budget: int = 6) -> GidmSolution:
    """Try every immunization set; ties go to the lexicographically smallest set."""
    candidates = sorted(v for v in instance.immunizable if instance.thresholds[v] is not IMMUNIZED)
    budget = min(instance.budget, len(candidates))
    if len(candidates) > max_immunizable or budget > max_budget:
        raise TooLarge(
            f"brute force over {len(candidates)} immunizable vertices with budget {budget} "
            f"exceeds limits ({max_immunizable}, {max_budget})"
        )
    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    for size in range(budget + 1):
        for chosen in itertools.combinations(candidates, size):
            outcome = (instance.infected_count(frozenset(chosen)), chosen)
            if best is None or outcome < best:
                best = outcome
    return GidmSolution(best[0], frozenset(best[1]), instance.budget)
