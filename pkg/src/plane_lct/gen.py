"""Constructing curves: branches from maximal contact values, seeded random
curve specs for the property suite, and the 17-point worked example."""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd
from typing import Optional

from .constellation import (
    Branch,
    CurveSpec,
    PointRecord,
    build_constellation,
    check_minimality,
    trim_to_minimal,
)
from .errors import BadOrder, GenerationFailed, NotCoprime, ValidationError


@dataclass(frozen=True)
class BranchRecipe:
    """One characteristic pair ``(beta0, beta1)``, or a smooth branch through
    ``length`` free points (``beta0 = 1``)."""

    beta0: int = 1
    beta1: int = 1
    length: Optional[int] = None

    @classmethod
    def smooth(cls, length: int) -> "BranchRecipe":
        return cls(1, length, length)


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_points: int = 40
    max_branches: int = 6
    min_branches: int = 1


def euclid_blocks(beta0: int, beta1: int) -> list[tuple[int, int]]:
    """``[(quotient, multiplicity), ...]`` from the Euclidean algorithm on
    ``(beta1, beta0)``: each division ``y = q x + r`` contributes ``q`` points of
    multiplicity ``x``."""
    blocks = []
    y, x = beta1, beta0
    while x:
        q, r = divmod(y, x)
        blocks.append((q, x))
        y, x = x, r
    return blocks


def multiplicity_sequence(beta0: int, beta1: int) -> list[int]:
    return [x for q, x in euclid_blocks(beta0, beta1) for _ in range(q)]


def chain_records(blocks: list[tuple[int, int]], start: int = 1,
                  root_parent: Optional[int] = None) -> list[PointRecord]:
    """Proximity records of the staircase chain: every point of block ``k + 1``
    is proximate to the last point of block ``k``, and the first point of block
    ``k + 1`` (``k >= 2``) is also proximate to the last point of block ``k - 1``."""
    records = []
    last_of_block: list[int] = []
    j = start
    for k, (q, _) in enumerate(blocks):
        for idx in range(q):
            parent = root_parent if j == start else j - 1
            sat = None
            if k >= 1:
                if idx == 0:
                    sat = last_of_block[k - 2] if k >= 2 else None
                else:
                    sat = last_of_block[k - 1]
            records.append(PointRecord(j, parent, sat))
            j += 1
        last_of_block.append(j - 1)
    return records


def branch_from_beta(recipe: BranchRecipe, name: str = "f") -> tuple[CurveSpec, Branch]:
    if recipe.length is not None or recipe.beta0 == 1:
        length = recipe.length if recipe.length is not None else recipe.beta1
        if length < 1:
            raise BadOrder("a smooth branch needs at least one point")
        records = [PointRecord(1)] + [PointRecord(j, j - 1) for j in range(2, length + 1)]
    else:
        b0, b1 = recipe.beta0, recipe.beta1
        if not 2 <= b0 < b1:
            raise BadOrder(f"need 2 <= beta0 < beta1, got ({b0}, {b1})")
        if gcd(b0, b1) != 1:
            raise NotCoprime(f"gcd({b0}, {b1}) = {gcd(b0, b1)}")
        records = chain_records(euclid_blocks(b0, b1))
    c = build_constellation(records)
    branch = Branch(name, c.m)
    return CurveSpec(c, (branch,)), branch


def cusp() -> CurveSpec:
    return branch_from_beta(BranchRecipe(2, 3), "cusp")[0]


def example_figure1() -> CurveSpec:
    """The 17-point, 8-branch worked example.

    P15 is free: both branches through it are smooth.
    """
    rows = [
        (1, None, None), (2, 1, None), (3, 2, None), (4, 3, None),
        (5, 4, 3), (6, 5, 3), (7, 6, 5), (8, 5, 4),
        (9, 4, None), (10, 9, None), (11, 10, 9), (12, 10, None),
        (13, 12, 10), (14, 4, None), (15, 14, None), (16, 2, None),
        (17, 16, 2),
    ]
    c = build_constellation(PointRecord(*row) for row in rows)
    ats = [7, 8, 11, 13, 17, 15, 15, 16]
    branches = tuple(Branch(f"f{i}", at) for i, at in enumerate(ats, start=1))
    return CurveSpec(c, branches)


# -- random generation ------------------------------------------------------------

class _Builder:
    def __init__(self):
        self.records: list[PointRecord] = [PointRecord(1)]
        self.sat_children: set[tuple[int, int]] = set()

    @property
    def m(self) -> int:
        return len(self.records)

    def satellite_options(self, p: int) -> list[int]:
        r = self.records[p - 1]
        return [q for q in (r.parent, r.satellite_of)
                if q is not None and (p, q) not in self.sat_children]

    def add(self, parent: int, sat: Optional[int]) -> int:
        j = self.m + 1
        self.records.append(PointRecord(j, parent, sat))
        if sat is not None:
            self.sat_children.add((parent, sat))
        return j

    def existing_child(self, parent: int, sat: int) -> int:
        for r in self.records:
            if r.parent == parent and r.satellite_of == sat:
                return r.id
        raise KeyError((parent, sat))


def _grow(builder: _Builder, rng: random.Random, start: int, steps: int, p_sat: float) -> int:
    """Extend a branch from ``start`` by ``steps`` new infinitely near points."""
    at = start
    for _ in range(steps):
        opts = builder.satellite_options(at)
        if opts and rng.random() < p_sat:
            at = builder.add(at, rng.choice(opts))
        else:
            at = builder.add(at, None)
    return at


def _draw(rng: random.Random, config: GenConfig) -> CurveSpec:
    builder = _Builder()
    r = rng.randint(max(1, config.min_branches), config.max_branches)
    p_sat = rng.choice((0.0, 0.25, 0.45, 0.65))
    budget = config.max_points - 1
    chains: list[list[int]] = []
    ats: list[int] = []
    for k in range(r):
        if k == 0 or not chains:
            start = 1
        else:
            chain = rng.choice(chains)
            start = chain[rng.randrange(len(chain))]
        room = max(0, min(budget, config.max_points - builder.m))
        steps = rng.randint(0, min(room, rng.choice((2, 4, 7, 10))))
        if k == 0 and steps == 0 and room:
            steps = 1
        at = _grow(builder, rng, start, steps, p_sat)
        budget -= steps
        chains.append(list(_chain_of(builder, at)))
        ats.append(at)
    c = build_constellation(builder.records)
    branches = tuple(Branch(f"f{i}", at) for i, at in enumerate(ats, start=1))
    return CurveSpec(c, branches)


def _chain_of(builder: _Builder, j: int) -> list[int]:
    out = [j]
    while (p := builder.records[out[-1] - 1].parent) is not None:
        out.append(p)
    return out[::-1]


def random_spec(config: GenConfig, attempts: int = 200) -> CurveSpec:
    """A minimal, singular, non-excluded curve spec, deterministic in ``config``."""
    rng = random.Random(config.seed)
    for _ in range(attempts):
        try:
            spec = _draw(rng, config)
        except ValidationError:
            continue
        spec, _ = trim_to_minimal(spec)
        report = check_minimality(spec)
        if not report.minimal or report.excluded is not None:
            continue
        if spec.r < config.min_branches:
            continue
        return spec
    raise GenerationFailed(f"no valid spec for {config} after {attempts} draws")


def glue(records_a: list[PointRecord], records_b: list[PointRecord], k: int) -> tuple[list[PointRecord], int, int]:
    """Union of two chains identified along their first ``k`` points.

    Returns the records and the ids of the two chain ends. The first ``k``
    records must agree.
    """
    if records_a[:k] != records_b[:k]:
        raise ValueError(f"chains differ within the first {k} points")
    out = list(records_a)
    shift = len(records_a) - k

    def moved(x):
        return None if x is None else (x if x <= k else x + shift)

    for r in records_b[k:]:
        out.append(PointRecord(r.id + shift, moved(r.parent), moved(r.satellite_of)))
    end_b = len(records_b) + shift if len(records_b) > k else len(records_b)
    return out, len(records_a), end_b


def _recipe(rng: random.Random, max_points: int) -> BranchRecipe:
    if rng.random() < 0.35:
        return BranchRecipe.smooth(rng.randint(1, min(8, max_points)))
    while True:
        b0 = rng.randint(2, 9)
        b1 = rng.randint(b0 + 1, 3 * b0 + 5)
        if gcd(b0, b1) == 1 and sum(q for q, _ in euclid_blocks(b0, b1)) <= max_points:
            return BranchRecipe(b0, b1)


def _recipe_records(recipe: BranchRecipe) -> list[PointRecord]:
    spec, _ = branch_from_beta(recipe)
    return list(spec.constellation.points)


def random_pair_spec(config: GenConfig, attempts: int = 200) -> CurveSpec:
    """Two Euclid-built branches glued along a random common prefix; a minimal,
    non-excluded two-branch spec, deterministic in ``config``."""
    rng = random.Random(config.seed)
    for _ in range(attempts):
        a = _recipe_records(_recipe(rng, config.max_points))
        b = _recipe_records(_recipe(rng, config.max_points))
        lcp = 0
        while lcp < min(len(a), len(b)) and a[lcp] == b[lcp]:
            lcp += 1
        k = rng.randint(1, max(1, lcp))
        if len(a) + len(b) - k > config.max_points:
            continue
        try:
            records, end_a, end_b = glue(a, b, k)
            spec = CurveSpec(build_constellation(records), (Branch("f1", end_a), Branch("f2", end_b)))
        except ValidationError:
            continue
        spec, _ = trim_to_minimal(spec)
        report = check_minimality(spec)
        if report.minimal and report.excluded is None:
            return spec
    raise GenerationFailed(f"no valid two-branch spec for {config} after {attempts} draws")

