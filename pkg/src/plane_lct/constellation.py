"""Constellations of infinitely near points and their proximity arithmetic.

Points are numbered ``1..m`` in blowup order and branches ``1..r``; every
public function uses these 1-based ids. Integer vectors indexed by points are
plain tuples whose entry ``j - 1`` belongs to ``P_j``.

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    DanglingParent,
    EmptyBranches,
    InvalidPoint,
    InvalidSatellite,
    MissingRoot,
    OrderViolation,
    SameBranch,
    UncoveredPoint,
    ValidationError,
)

IntVector = tuple[int, ...]


@dataclass(frozen=True)
class PointRecord:
    id: int
    parent: Optional[int] = None
    satellite_of: Optional[int] = None


def validation_errors(records: Sequence[PointRecord]) -> list[ValidationError]:
    """All violations of the proximity axioms found in ``records``."""
    errors: list[ValidationError] = []
    if not records:
        return [MissingRoot("empty constellation")]
    ids = [r.id for r in records]
    if ids != list(range(1, len(records) + 1)):
        errors.append(InvalidPoint(f"ids must be exactly 1..{len(records)} in order, got {ids}"))
        return errors
    if records[0].parent is not None or records[0].satellite_of is not None:
        errors.append(MissingRoot("P1 must have neither parent nor satellite_of"))
    by_id = {r.id: r for r in records}
    seen_satellites: set[tuple[int, int]] = set()
    for r in records[1:]:
        j = r.id
        if r.parent is None:
            errors.append(DanglingParent(f"P{j} has no parent (only P1 may be a root)"))
            continue
        if not isinstance(r.parent, int) or r.parent < 1 or r.parent > len(records):
            errors.append(DanglingParent(f"P{j} refers to unknown parent {r.parent!r}"))
            continue
        if r.parent >= j:
            errors.append(OrderViolation(f"P{j} has parent P{r.parent} which is not earlier"))
            continue
        q = r.satellite_of
        if q is None:
            continue
        p = by_id[r.parent]
        allowed = {x for x in (p.parent, p.satellite_of) if x is not None}
        if q not in allowed:
            errors.append(InvalidSatellite(
                f"P{j}: satellite_of=P{q} must be one of {sorted(allowed)} "
                f"(exceptional curves through P{r.parent} other than its own)"))
        elif (r.parent, q) in seen_satellites:
            errors.append(InvalidSatellite(
                f"P{j} duplicates the satellite point E{r.parent} ∩ E{q}"))
        else:
            seen_satellites.add((r.parent, q))
    return errors


@dataclass(frozen=True)
class Constellation:
    points: tuple[PointRecord, ...]

    @property
    def m(self) -> int:
        return len(self.points)

    def ids(self) -> range:
        return range(1, self.m + 1)

    def check_id(self, j: int) -> None:
        if not isinstance(j, int) or not 1 <= j <= self.m:
            raise InvalidPoint(f"no point P{j!r} in a constellation of {self.m} points")

    def parent(self, j: int) -> Optional[int]:
        return self.points[j - 1].parent

    def satellite_of(self, j: int) -> Optional[int]:
        return self.points[j - 1].satellite_of

    def is_satellite(self, j: int) -> bool:
        return self.points[j - 1].satellite_of is not None

    def is_free(self, j: int) -> bool:
        return self.points[j - 1].satellite_of is None

    def proximate_points(self, j: int) -> tuple[int, ...]:
        """The points ``P_q`` with ``P_j -> P_q``."""
        r = self.points[j - 1]
        return tuple(q for q in (r.parent, r.satellite_of) if q is not None)

    @cached_property
    def _proximate_to(self) -> tuple[tuple[int, ...], ...]:
        inv: list[list[int]] = [[] for _ in range(self.m)]
        for j in self.ids():
            for q in self.proximate_points(j):
                inv[q - 1].append(j)
        return tuple(tuple(x) for x in inv)

    def points_proximate_to(self, j: int) -> tuple[int, ...]:
        """The points ``P_k`` with ``P_k -> P_j``, ascending."""
        return self._proximate_to[j - 1]

    @cached_property
    def _children(self) -> tuple[tuple[int, ...], ...]:
        ch: list[list[int]] = [[] for _ in range(self.m)]
        for j in self.ids():
            p = self.parent(j)
            if p is not None:
                ch[p - 1].append(j)
        return tuple(tuple(x) for x in ch)

    def children(self, j: int) -> tuple[int, ...]:
        return self._children[j - 1]

    def chain(self, j: int) -> tuple[int, ...]:
        """Parent chain ``P_1 < ... < P_j`` (the points ``P_j`` is infinitely near to)."""
        self.check_id(j)
        out = [j]
        while (p := self.parent(out[-1])) is not None:
            out.append(p)
        return tuple(reversed(out))

    def is_infinitely_near(self, k: int, j: int) -> bool:
        """``P_k >= P_j`` in the infinitely-near order."""
        while k is not None and k > j:
            k = self.parent(k)
        return k == j

    def proximity_matrix(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for k in self.ids():
            row = [0] * self.m
            row[k - 1] = 1
            for q in self.proximate_points(k):
                row[q - 1] = -1
            rows.append(tuple(row))
        return tuple(rows)


def build_constellation(records: Iterable[PointRecord]) -> Constellation:
    records = tuple(records)
    errors = validation_errors(records)
    if errors:
        raise errors[0]
    return Constellation(records)


def constellation_from_tuples(rows: Iterable[tuple]) -> Constellation:
    """Shorthand: ``[(1, None, None), (2, 1, None), (3, 2, 1)]``."""
    return build_constellation(PointRecord(*row) for row in rows)


@dataclass(frozen=True)
class Branch:
    name: str
    at: int
    multiplicity: int = 1


@dataclass(frozen=True)
class CurveSpec:
    constellation: Constellation
    branches: tuple[Branch, ...]

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        c = self.constellation
        if not self.branches:
            raise EmptyBranches("a curve needs at least one branch")
        covered: set[int] = set()
        for b in self.branches:
            c.check_id(b.at)
            if not isinstance(b.multiplicity, int) or b.multiplicity < 1:
                raise ValidationError(f"branch {b.name!r}: multiplicity must be a positive integer")
            covered.update(c.chain(b.at))
        missing = sorted(set(c.ids()) - covered)
        if missing:
            raise UncoveredPoint(f"points {missing} lie on no branch")

    @property
    def r(self) -> int:
        return len(self.branches)

    @property
    def m(self) -> int:
        return self.constellation.m

    def branch_ids(self) -> range:
        return range(1, self.r + 1)

    def branch(self, i: int) -> Branch:
        if not isinstance(i, int) or not 1 <= i <= self.r:
            raise InvalidPoint(f"no branch {i!r} (have {self.r})")
        return self.branches[i - 1]

    def chain(self, i: int) -> tuple[int, ...]:
        return self._chains[i - 1]

    @cached_property
    def _chains(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.constellation.chain(b.at) for b in self.branches)

    @cached_property
    def _multiplicities(self) -> tuple[IntVector, ...]:
        return tuple(curvette_multiplicities(self.constellation, b.at) for b in self.branches)

    def multiplicities(self, i: int) -> IntVector:
        self.branch(i)
        return self._multiplicities[i - 1]

    @property
    def is_reduced(self) -> bool:
        return all(b.multiplicity == 1 for b in self.branches)

    def branches_through(self, j: int) -> tuple[int, ...]:
        return tuple(i for i in self.branch_ids() if j in self.chain(i))


def branch_chain(c: Constellation, b: Branch) -> tuple[int, ...]:
    return c.chain(b.at)


def curvette_multiplicities(c: Constellation, j: int) -> IntVector:
    """Multiplicities at every point of a curvette at ``P_j`` (row ``j`` of the inverse
    proximity matrix).

    The entry at ``P_j`` is 1; going down the chain, each point receives the sum
    of the multiplicities of the chain points proximate to it.
    """
    chain = c.chain(j)
    on_chain = set(chain)
    n = [0] * c.m
    n[j - 1] = 1
    for k in reversed(chain[:-1]):
        n[k - 1] = sum(n[x - 1] for x in c.points_proximate_to(k) if x in on_chain)
    return tuple(n)


def branch_multiplicities(c: Constellation, b: Branch) -> IntVector:
    return curvette_multiplicities(c, b.at)


def apply_p_inverse(c: Constellation, v: Sequence[int]) -> IntVector:
    """Solve ``P w = v`` by forward substitution: ``w_j = v_j + sum_{P_j -> P_q} w_q``."""
    if len(v) != c.m:
        raise ValueError(f"vector of length {len(v)} for {c.m} points")
    w = [0] * c.m
    for j in c.ids():
        w[j - 1] = v[j - 1] + sum(w[q - 1] for q in c.proximate_points(j))
    return tuple(w)


def apply_p(c: Constellation, w: Sequence[int]) -> IntVector:
    return tuple(
        w[j - 1] - sum(w[q - 1] for q in c.proximate_points(j)) for j in c.ids()
    )


def log_discrepancies(c: Constellation) -> IntVector:
    return apply_p_inverse(c, (1,) * c.m)


def total_multiplicities(spec: CurveSpec) -> IntVector:
    """``sum_i mult_i * n^(i)``: multiplicities of the (possibly non-reduced) curve."""
    total = [0] * spec.m
    for i, b in enumerate(spec.branches, start=1):
        for k, x in enumerate(spec.multiplicities(i)):
            total[k] += b.multiplicity * x
    return tuple(total)


def curve_valuations(spec: CurveSpec) -> IntVector:
    return apply_p_inverse(spec.constellation, total_multiplicities(spec))


def intersection_number(spec: CurveSpec, i: int, s: int) -> int:
    """Noether's formula: sum of products of multiplicities over shared points."""
    if i == s:
        raise SameBranch(f"intersection of branch {i} with itself")
    return sum(a * b for a, b in zip(spec.multiplicities(i), spec.multiplicities(s)))


def intersection_matrix(spec: CurveSpec) -> dict[tuple[int, int], int]:
    return {
        (i, s): intersection_number(spec, i, s)
        for i in spec.branch_ids() for s in spec.branch_ids() if i != s
    }


# -- minimality ---------------------------------------------------------------

@dataclass(frozen=True)
class PointVerdict:
    point: int
    necessary: bool
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    verdicts: tuple[PointVerdict, ...]
    excluded: Optional[str] = None  # "SmoothInput" | "ExcludedCase"

    @property
    def unnecessary(self) -> tuple[int, ...]:
        return tuple(v.point for v in self.verdicts if not v.necessary)


def _next_on_chain(chain: tuple[int, ...], j: int) -> Optional[int]:
    k = chain.index(j)
    return chain[k + 1] if k + 1 < len(chain) else None


def point_verdict(spec: CurveSpec, j: int) -> PointVerdict:
    """Whether blowing up ``P_j`` is forced, i.e. the total transform is not
    simple normal crossing there."""
    c = spec.constellation
    through = spec.branches_through(j)
    exceptional = 0 if j == 1 else (2 if c.is_satellite(j) else 1)
    reasons = []
    if any(spec.multiplicities(i)[j - 1] >= 2 for i in through):
        reasons.append("singular_branch")
    if len(through) + exceptional >= 3:
        reasons.append("three_germs")
    nexts = [_next_on_chain(spec.chain(i), j) for i in through]
    if len(through) == 2 and nexts[0] is not None and nexts[0] == nexts[1]:
        reasons.append("tangent_branches")
    curves_here = set(c.proximate_points(j))
    for q in nexts:
        if q is not None and curves_here & set(c.proximate_points(q)):
            reasons.append("tangent_to_exceptional")
            break
    return PointVerdict(j, bool(reasons), tuple(reasons))


def excluded_case(spec: CurveSpec) -> Optional[str]:
    """The globally excluded inputs: a non-singular curve, or two smooth
    transversal branches."""
    smooth = [spec.multiplicities(i)[0] == 1 for i in spec.branch_ids()]
    if spec.r == 1 and smooth[0]:
        return "SmoothInput"
    if spec.r == 2 and all(smooth):
        common = set(spec.chain(1)) & set(spec.chain(2))
        if common == {1}:
            return "ExcludedCase"
    return None


def check_minimality(spec: CurveSpec) -> MinimalityReport:
    verdicts = tuple(point_verdict(spec, j) for j in spec.constellation.ids())
    return MinimalityReport(
        minimal=all(v.necessary for v in verdicts),
        verdicts=verdicts,
        excluded=excluded_case(spec),
    )


def sub_constellation(c: Constellation, keep: Iterable[int]) -> tuple[Constellation, dict[int, int]]:
    """The down-closed subset ``keep`` renumbered in order, with the map from
    old ids to new ones."""
    keep = sorted(set(keep))
    new_id = {old: new for new, old in enumerate(keep, start=1)}
    records = []
    for old in keep:
        r = c.points[old - 1]
        records.append(PointRecord(
            new_id[old],
            None if r.parent is None else new_id[r.parent],
            None if r.satellite_of is None else new_id[r.satellite_of],
        ))
    return build_constellation(records), new_id


def restrict(spec: CurveSpec, keep: Iterable[int]) -> CurveSpec:
    """Sub-constellation on the down-closed set ``keep``; each branch is moved
    to the deepest kept point of its chain."""
    sub, new_id = sub_constellation(spec.constellation, keep)
    branches = []
    for i, b in enumerate(spec.branches, start=1):
        last = max(x for x in spec.chain(i) if x in new_id)
        branches.append(Branch(b.name, new_id[last], b.multiplicity))
    return CurveSpec(sub, tuple(branches))


def trim_to_minimal(spec: CurveSpec) -> tuple[CurveSpec, tuple[int, ...]]:
    """Drop unnecessary points (with their descendants' branch endpoints pulled
    back). Returns the trimmed spec and the removed original ids. Inputs whose
    root is unnecessary are returned unchanged."""
    removed: list[int] = []
    current = spec
    ids = list(spec.constellation.ids())  # original id of each current point
    while True:
        report = check_minimality(current)
        if report.minimal or 1 in report.unnecessary:
            return current, tuple(sorted(removed))
        c = current.constellation
        need = {v.point for v in report.verdicts if v.necessary}
        keep = set()
        for j in need:
            keep.update(c.chain(j))
        dropped = [j for j in c.ids() if j not in keep]
        if not dropped:
            return current, tuple(sorted(removed))
        removed.extend(ids[j - 1] for j in dropped)
        ids = [ids[j - 1] for j in sorted(keep)]
        current = restrict(current, keep)
