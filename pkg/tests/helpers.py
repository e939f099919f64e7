"""Independent oracles and per-instance property checks shared by the tests."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from plane_lct.constellation import CurveSpec, curvette_multiplicities, intersection_number
from plane_lct.dualgraph import (
    arrow_split,
    build_dual_graph,
    distinguished_vertex,
    satisfies_sign_conditions,
    sigma,
    sigma_table,
    vertices_by_adapted_degree,
)
from plane_lct.gen import GenConfig, random_pair_spec, random_spec
from plane_lct.invariants import (
    chain_invariants,
    contact_pair,
    j_partition,
)
from plane_lct.lct import candidate_table, delta_table, lct_divisorial, lct_formula


# -- oracles ---------------------------------------------------------------------

def inverse_by_elimination(matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals; knows nothing about proximity."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == k)) for k in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def oracle_lct(spec: CurveSpec) -> Fraction:
    """Minimum of ``(a_j + 1) / b_j`` using a matrix inverse computed by
    elimination, with ``b = P^-1 (sum of branch multiplicity rows)`` where the
    branch rows are rows of that same inverse."""
    c = spec.constellation
    inv = inverse_by_elimination(c.proximity_matrix())
    m = c.m
    a = [sum(inv[j]) for j in range(m)]
    total = [Fraction(0)] * m
    for b in spec.branches:
        for k in range(m):
            total[k] += b.multiplicity * inv[b.at - 1][k]
    bvals = [sum(inv[j][k] * total[k] for k in range(m)) for j in range(m)]
    return min((a[j] + 1) / bvals[j] for j in range(m))


# -- corpora ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def random_corpus(n: int = 1000, max_points: int = 40, max_branches: int = 6) -> tuple[CurveSpec, ...]:
    return tuple(random_spec(GenConfig(seed=s, max_points=max_points, max_branches=max_branches))
                 for s in range(n))


@lru_cache(maxsize=None)
def two_branch_corpus(n: int = 400) -> tuple[CurveSpec, ...]:
    grown = [random_spec(GenConfig(seed=s, min_branches=2, max_branches=2)) for s in range(n)]
    glued = [random_pair_spec(GenConfig(seed=s)) for s in range(n)]
    return tuple(grown + glued)


# -- properties ------------------------------------------------------------------

def check_contact_intersections(spec: CurveSpec) -> list[str]:
    out = []
    g = build_dual_graph(spec)
    inv = g.invariants
    for i, s in combinations(spec.branch_ids(), 2):
        a, b = inv[i - 1], inv[s - 1]
        I = intersection_number(spec, i, s)
        cp = contact_pair(spec, i, s)
        prop = a.beta0 * b.beta1 == a.beta1 * b.beta0 and a.beta0 * b.beta1 <= I
        if (cp.q >= 1) != prop and not (a.smooth and b.smooth and I == a.beta0 * b.beta1):
            out.append(f"contact case (a) {i},{s}")
        if cp.q == 1 and cp.c == 0 and not I == a.beta0 * b.beta1 == a.beta1 * b.beta0:
            out.append(f"contact case (b) {i},{s}")
        if cp.q == 0 and cp.c <= min(a.l0, b.l0) and I != cp.c * a.beta0 * b.beta0:
            out.append(f"contact case (c) {i},{s}")
        if cp.q == 0 and cp.c == min(a.l0, b.l0) + 1 and I != min(a.beta0 * b.beta1, a.beta1 * b.beta0):
            out.append(f"contact case (d) {i},{s}")
    return out


def check_candidate_identities(spec: CurveSpec) -> list[str]:
    """Candidates against curvette data (every point of F) and against the
    delta table (first terminal satellites)."""
    out = []
    g = build_dual_graph(spec)
    c = spec.constellation
    table = candidate_table(spec)
    for j in g.sets.F:
        phi = chain_invariants(c, c.chain(j))
        n_phi = curvette_multiplicities(c, j)
        inter = sum(sum(x * y for x, y in zip(n_phi, spec.multiplicities(i))) for i in spec.branch_ids())
        if table[j] != Fraction(phi.beta0 + phi.beta1, inter):
            out.append(f"curvette identity at P{j}")
    deltas = delta_table(spec, g)
    for i in spec.branch_ids():
        t = g.invariants[i - 1]
        if t.smooth:
            continue
        expected = Fraction(t.beta0 + t.beta1, sum(deltas[i, s] for s in spec.branch_ids()))
        if table[t.t_min] != expected:
            out.append(f"terminal satellite identity for branch {i}")
    return out


def check_partitions(spec: CurveSpec) -> list[str]:
    """Arrow split versus J-partitions of a curvette at each relevant point."""
    out = []
    g = build_dual_graph(spec)
    c = spec.constellation
    for j in sorted(g.sets.F):
        J = j_partition(spec, j, g.sets)
        less, geq = arrow_split(g, j)
        blocks = J.blocks()
        union = frozenset().union(*blocks)
        if union != frozenset(spec.branch_ids()) or sum(map(len, blocks)) != spec.r:
            out.append(f"J blocks at P{j} do not partition the branches")
        if j in g.sets.T:
            if less != J.J1 | J.J4 or geq != J.J2 | J.J3:
                out.append(f"arrow split vs J at terminal satellite P{j}")
        elif c.is_free(j):
            if J.J2 or J.J3:
                out.append(f"J2/J3 non-empty at free P{j}")
            if less != J.J1 | J.J41 or geq != J.J42:
                out.append(f"arrow split vs J at free P{j}")
    return out


def check_sigma(spec: CurveSpec) -> list[str]:
    out = []
    g = build_dual_graph(spec)
    F = sorted(g.sets.F)
    sig = sigma_table(spec, g)
    splits = {v: arrow_split(g, v) for v in F}
    for u in F:
        for v in F:
            if u != v and g.leq(u, v):
                if sig[u] > sig[v]:
                    out.append(f"sigma decreases from v{u} to v{v}")
                if not (splits[u][0] <= splits[v][0] and splits[v][1] <= splits[u][1]):
                    out.append(f"arrow split not nested between v{u} and v{v}")
    V = g.sets.T | g.sets.S
    for k1, k2 in consecutive_pairs(g, V | ends(g)):
        path = g.root_path(k2)
        seg = path[path.index(k1) + 1:]
        if len({sigma(spec, g, v) for v in seg}) > 1:
            out.append(f"sigma not constant on ]v{k1}, v{k2}]")
    if vertices_by_adapted_degree(g) != V:
        out.append("adapted-degree vertices differ from T u S")
    k = distinguished_vertex(spec, g, sig)
    if not satisfies_sign_conditions(g, V, sig, k):
        out.append(f"v{k} fails the sign conditions")
    return out


def ends(g) -> frozenset[int]:
    return frozenset(v for v in g.sets.F if g.degree(v) == 1)


def consecutive_pairs(g, marked) -> list[tuple[int, int]]:
    """``(k1, k2)`` with ``k1 < k2`` in ``marked`` and nothing marked strictly
    between them on the root path."""
    pairs = []
    for k2 in sorted(marked):
        for v in reversed(g.root_path(k2)[:-1]):
            if v in marked:
                pairs.append((v, k2))
                break
    return pairs


def check_segments(spec: CurveSpec) -> list[str]:
    """Candidates along a segment between consecutive marked vertices are
    bounded below by the candidate at one end, chosen by the sign of sigma."""
    out = []
    g = build_dual_graph(spec)
    table = candidate_table(spec)
    marked = g.sets.T | g.sets.S | ends(g)
    for k1, k2 in consecutive_pairs(g, marked):
        path = g.root_path(k2)
        seg = path[path.index(k1):]
        s2 = sigma(spec, g, k2)
        if s2 <= 0 and any(table[j] < table[k2] for j in seg):
            out.append(f"segment v{k1}..v{k2}: candidate below the far end")
        if s2 >= 0 and any(table[j] < table[k1] for j in seg):
            out.append(f"segment v{k1}..v{k2}: candidate below the near end")
    return out


def check_engines(spec: CurveSpec) -> list[str]:
    out = []
    report = lct_formula(spec)
    value, argmin = lct_divisorial(spec)
    g = build_dual_graph(spec)
    restricted, _ = lct_divisorial(spec, g.sets.F)
    if not report.lct == value == restricted:
        out.append(f"formula {report.lct}, divisorial {value}, restricted {restricted}")
    if report.distinguished_vertex not in argmin:
        out.append(f"v{report.distinguished_vertex} not in argmin {sorted(argmin)}")
    if not 0 < value <= 1:
        out.append(f"lct {value} out of (0, 1]")
    return out


PROPERTY_CHECKS = {
    "intersection by contact type": check_contact_intersections,
    "candidate identities": check_candidate_identities,
    "arrow split / J-partitions": check_partitions,
    "sigma structure": check_sigma,
    "segment comparison": check_segments,
    "engines and argmin": check_engines,
}
