"""Branch invariants read off the constellation: terminal satellite points,
``l0``, the first two maximal contact values, contact pairs, separation, and
the point sets T (first terminal satellites), S (initial separating points)
and F.

Most functions come in two flavours: one on a bare chain of points (so that
curvettes at arbitrary points can be treated like branches) and a thin
wrapper taking ``(spec, i)`` with a 1-based branch index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional

from .constellation import Constellation, CurveSpec, curvette_multiplicities
from .errors import NonIntegralBeta, PointNotInF, SameBranch

Chain = tuple[int, ...]


@dataclass(frozen=True)
class BranchInvariants:
    beta0: int
    beta1: int
    e1: int
    l0: int
    terminal_satellites: tuple[int, ...]
    t_min: Optional[int]

    @property
    def smooth(self) -> bool:
        return self.beta0 == 1

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.beta1, self.beta0)


@dataclass(frozen=True)
class ContactPair:
    q: int
    c: int


@dataclass(frozen=True)
class Separation:
    point: int
    freely: bool


@dataclass(frozen=True)
class PointSets:
    T: frozenset[int]
    S: frozenset[int]
    F: frozenset[int]


# -- chain level ----------------------------------------------------------------

def chain_terminal_satellites(c: Constellation, chain: Chain) -> tuple[int, ...]:
    out = []
    for k, j in enumerate(chain):
        if not c.is_satellite(j):
            continue
        if k + 1 == len(chain) or c.is_free(chain[k + 1]):
            out.append(j)
    return tuple(out)


def chain_l0(c: Constellation, chain: Chain) -> int:
    if not any(c.is_satellite(j) for j in chain):
        return len(chain)
    run = 0
    for j in chain:
        if not c.is_free(j):
            break
        run += 1
    return run - 1


def chain_beta(c: Constellation, chain: Chain) -> tuple[int, int]:
    n = curvette_multiplicities(c, chain[-1])
    beta0 = n[0]
    if beta0 == 1:
        return 1, len(chain)
    t = chain_terminal_satellites(c, chain)[0]
    phi = curvette_multiplicities(c, t)
    value = sum(a * b for a, b in zip(n, phi))
    beta1, rem = divmod(value, phi[0])
    if rem:
        raise NonIntegralBeta(f"I(f, curvette at P{t}) = {value} not divisible by {phi[0]}")
    return beta0, beta1


def chain_invariants(c: Constellation, chain: Chain) -> BranchInvariants:
    beta0, beta1 = chain_beta(c, chain)
    ts = chain_terminal_satellites(c, chain)
    return BranchInvariants(
        beta0=beta0,
        beta1=beta1,
        e1=gcd(beta0, beta1),
        l0=chain_l0(c, chain),
        terminal_satellites=ts,
        t_min=ts[0] if ts else None,
    )


def common_prefix(a: Chain, b: Chain) -> Chain:
    k = 0
    while k < len(a) and k < len(b) and a[k] == b[k]:
        k += 1
    return a[:k]


def chain_contact_pair(c: Constellation, a: Chain, b: Chain) -> ContactPair:
    common = common_prefix(a, b)
    tb = set(chain_terminal_satellites(c, b))
    shared = [x for x in chain_terminal_satellites(c, a) if x in tb]
    tail = common
    if shared:
        tail = common[common.index(shared[-1]) + 1:]
    return ContactPair(len(shared), sum(1 for j in tail if c.is_free(j)))


def free_count(c: Constellation, j: int) -> int:
    """Number of free points ``P_i <= P_j`` (the curvette at a free point
    passes through exactly these)."""
    return sum(1 for x in c.chain(j) if c.is_free(x))


# -- branch level ---------------------------------------------------------------

def terminal_satellites(spec: CurveSpec, i: int) -> tuple[int, ...]:
    return chain_terminal_satellites(spec.constellation, spec.chain(i))


def l0(spec: CurveSpec, i: int) -> int:
    return chain_l0(spec.constellation, spec.chain(i))


def beta(spec: CurveSpec, i: int) -> tuple[int, int]:
    return chain_beta(spec.constellation, spec.chain(i))


def branch_invariants(spec: CurveSpec, i: int) -> BranchInvariants:
    return chain_invariants(spec.constellation, spec.chain(i))


def all_branch_invariants(spec: CurveSpec) -> tuple[BranchInvariants, ...]:
    return tuple(branch_invariants(spec, i) for i in spec.branch_ids())


def curvette_invariants(spec: CurveSpec, j: int) -> BranchInvariants:
    return chain_invariants(spec.constellation, spec.constellation.chain(j))


def contact_pair(spec: CurveSpec, i: int, s: int) -> ContactPair:
    if i == s:
        raise SameBranch(f"contact pair of branch {i} with itself")
    return chain_contact_pair(spec.constellation, spec.chain(i), spec.chain(s))


def _freely(c: Constellation, a: Chain, b: Chain) -> bool:
    cp = chain_contact_pair(c, a, b)
    return cp.q == 0 and cp.c <= min(chain_l0(c, a), chain_l0(c, b))


def separation(spec: CurveSpec, i1: int, i2: int) -> Separation:
    """Where two branches separate, and whether freely.

    Branches with the same maximal point are distinct curvettes there, so they
    separate at that point.
    """
    if i1 == i2:
        raise SameBranch(f"separation of branch {i1} from itself")
    a, b = spec.chain(i1), spec.chain(i2)
    return Separation(common_prefix(a, b)[-1], _freely(spec.constellation, a, b))


def freely_separated_pairs(spec: CurveSpec, j: int) -> list[tuple[int, int]]:
    """Pairs ``i1 < i2`` of branches freely separated at ``P_j``."""
    out = []
    for i1, i2 in combinations(spec.branch_ids(), 2):
        sep = separation(spec, i1, i2)
        if sep.point == j and sep.freely:
            out.append((i1, i2))
    return out


def point_sets(spec: CurveSpec) -> PointSets:
    c = spec.constellation
    T, S, F = set(), set(), set()
    for i in spec.branch_ids():
        inv = branch_invariants(spec, i)
        if inv.smooth:
            F.update(spec.chain(i))
        else:
            T.add(inv.t_min)
            F.update(c.chain(inv.t_min))
    for i1, i2 in combinations(spec.branch_ids(), 2):
        sep = separation(spec, i1, i2)
        if sep.freely:
            S.add(sep.point)
    return PointSets(frozenset(T), frozenset(S), frozenset(F))


# -- J-partitions -----------------------------------------------------------------

@dataclass(frozen=True)
class JPartition:
    J1: frozenset[int]
    J2: frozenset[int]
    J3: frozenset[int]
    J4: frozenset[int]
    J41: Optional[frozenset[int]] = None
    J42: Optional[frozenset[int]] = None

    def blocks(self) -> tuple[frozenset[int], ...]:
        return (self.J1, self.J2, self.J3, self.J4)


def j_partition(spec: CurveSpec, j: int, sets: PointSets | None = None) -> JPartition:
    """Partition of the branch indices by their contact with a curvette at ``P_j``."""
    sets = sets or point_sets(spec)
    if j not in sets.F:
        raise PointNotInF(f"P{j} is not in F")
    c = spec.constellation
    phi = c.chain(j)
    inv_phi = chain_invariants(c, phi)
    J = {key: set() for key in ("J1", "J2", "J3", "J4", "J41", "J42")}
    for s in spec.branch_ids():
        inv_s = branch_invariants(spec, s)
        cp = chain_contact_pair(c, phi, spec.chain(s))
        if cp.q >= 1:
            J["J3"].add(s)
        elif cp.c <= min(inv_phi.l0, inv_s.l0):
            J["J4"].add(s)
            if inv_phi.smooth:
                J["J41" if cp.c < inv_phi.l0 else "J42"].add(s)
        elif cp.c == min(inv_phi.l0, inv_s.l0) + 1:
            if inv_s.ratio < inv_phi.ratio:
                J["J1"].add(s)
            elif inv_s.ratio > inv_phi.ratio:
                J["J2"].add(s)
    frozen = {k: frozenset(v) for k, v in J.items()}
    if not inv_phi.smooth:
        frozen["J41"] = frozen["J42"] = None
    return JPartition(**frozen)
