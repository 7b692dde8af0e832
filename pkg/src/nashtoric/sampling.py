"""Reproducible random sampling runs over the Nash digraphs.

Cones and semigroups are drawn by rejection sampling of uniform integer
generator matrices; each accepted object is explored to completion or
budget, sharing one store so repeated descendants are not recomputed.
"""

import random
import time
from dataclasses import dataclass, field

from .canonical import canonical_cone, canonical_semigroup
from .cones import Cone
from .errors import InputError
from .linalg import check_characteristic, rank
from .semigroups import AffineSemigroup, minimal_generators
from .digraph import BudgetExhausted, Complete, DigraphStore, find_cycles, resolution_subgraph

DISTRIBUTION = "uniform entries with rejection (pointed, full rank)"


@dataclass
class SampleSummary:
    mode: str
    characteristic: int
    rank: int
    count: int
    seed: int
    entry_bound: int
    distribution: str = DISTRIBUTION
    max_vertices: int = 0
    max_seconds: float = 0.0
    resolved: int = 0
    budget_exhausted: int = 0
    cycles_found: int = 0
    store_vertices: int = 0
    elapsed_seconds: float = 0.0
    items: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d.pop("items")
        return d


def _random_cone(rng: random.Random, n: int, entry_bound: int) -> Cone:
    while True:
        m = rng.randint(n, n + 2)
        cols = [
            tuple(rng.randint(-entry_bound, entry_bound) for _ in range(n))
            for _ in range(m)
        ]
        if any(not any(c) for c in cols):
            continue
        C = Cone(cols)
        if C.is_pointed() and C.is_full_dimensional():
            return C


def _random_semigroup(rng: random.Random, n: int, entry_bound: int) -> AffineSemigroup:
    while True:
        m = rng.randint(n, n + 2)
        cols = [
            tuple(rng.randint(-entry_bound, entry_bound) for _ in range(n))
            for _ in range(m)
        ]
        cols = [c for c in cols if any(c)]
        if len(cols) < n or rank(cols) < n:
            continue
        C = Cone(cols)
        if not (C.is_pointed() and C.is_full_dimensional()):
            continue
        S = minimal_generators(cols)
        if S.is_full_lattice():
            return S


def sample_random(
    rank_: int,
    mode: str,
    count: int,
    seed: int,
    entry_bound: int,
    *,
    characteristic: int = 0,
    max_vertices: int = 50_000,
    max_seconds: float = 600.0,
    threads: int = 1,
    store: DigraphStore | None = None,
) -> SampleSummary:
    """Explore `count` random rank-n cones (normalized mode) or semigroups
    (nash mode); fully reproducible from the seed."""
    if rank_ not in (2, 3, 4, 5):
        raise InputError("rank must be one of 2, 3, 4, 5")
    if entry_bound < 1:
        raise InputError("entry_bound must be >= 1")
    if count < 0:
        raise InputError("count must be nonnegative")
    characteristic = check_characteristic(characteristic)
    summary = SampleSummary(
        mode=mode,
        characteristic=characteristic,
        rank=rank_,
        count=count,
        seed=seed,
        entry_bound=entry_bound,
        max_vertices=max_vertices,
        max_seconds=max_seconds,
    )
    if count == 0:
        return summary
    rng = random.Random(seed)
    if store is None:
        store = DigraphStore(mode, characteristic, rank_)
    start = time.monotonic()
    for _ in range(count):
        if mode == "nash":
            obj = _random_semigroup(rng, rank_, entry_bound)
            key = canonical_semigroup(obj).serialization
        else:
            obj = _random_cone(rng, rank_, entry_bound)
            key = canonical_cone(obj)[0].serialization
        status = resolution_subgraph(
            store,
            obj,
            max_vertices=max_vertices,
            max_seconds=max_seconds,
            threads=threads,
        )
        if isinstance(status, Complete):
            summary.resolved += 1
            summary.items.append((key, "resolved"))
        else:
            summary.budget_exhausted += 1
            summary.items.append((key, "budget-exhausted"))
    summary.cycles_found = len(find_cycles(store))
    summary.store_vertices = store.vertex_count()
    summary.elapsed_seconds = round(time.monotonic() - start, 3)
    return summary
