"""Log-canonical threshold by several independent routes.

``lct_divisorial`` is the oracle: the minimum of ``(a_j + 1) / b_j`` over all
exceptional divisors. ``lct_formula`` locates the distinguished vertex of the
dual graph and evaluates a closed form in branch invariants and intersection
numbers. ``lct_two_branch`` is the piecewise closed form for two branches.
``reconcile`` runs everything applicable and insists on exact agreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .constellation import (
    Branch,
    Constellation,
    CurveSpec,
    apply_p_inverse,
    check_minimality,
    curve_valuations,
    curvette_multiplicities,
    intersection_matrix,
    intersection_number,
    log_discrepancies,
    sub_constellation,
    trim_to_minimal,
)
from .dualgraph import (
    DualGraph,
    arrow_split,
    build_dual_graph,
    c_coefficient,
    distinguished_vertex,
    sigma_table,
)
from .errors import (
    EmptyIdeal,
    ExcludedInput,
    LctError,
    MethodDisagreement,
    NotTwoBranches,
    ZeroValuation,
)
from .invariants import (
    BranchInvariants,
    contact_pair,
    free_count,
    freely_separated_pairs,
    separation,
)

TERMINAL_SATELLITE = "terminal_satellite"
INITIAL_SEPARATING = "initial_separating"


# -- divisorial oracle ------------------------------------------------------------

def candidate(spec: CurveSpec, j: int, a=None, b=None) -> Fraction:
    a = a if a is not None else log_discrepancies(spec.constellation)
    b = b if b is not None else curve_valuations(spec)
    if b[j - 1] == 0:
        raise ZeroValuation(f"b_{j} = 0: no branch passes through P{j}")
    return Fraction(a[j - 1] + 1, b[j - 1])


def candidate_table(spec: CurveSpec, points: Optional[Iterable[int]] = None) -> dict[int, Fraction]:
    a = log_discrepancies(spec.constellation)
    b = curve_valuations(spec)
    pts = spec.constellation.ids() if points is None else sorted(points)
    return {j: candidate(spec, j, a, b) for j in pts}


def lct_divisorial(spec: CurveSpec, points: Optional[Iterable[int]] = None
                   ) -> tuple[Fraction, frozenset[int]]:
    """Minimum candidate over ``points`` (default: every point) and where it is
    attained."""
    table = candidate_table(spec, points)
    best = min(table.values())
    return best, frozenset(j for j, v in table.items() if v == best)


# -- closed forms -----------------------------------------------------------------

def _proportional_and_bounded(inv_i: BranchInvariants, inv_s: BranchInvariants, I: int) -> bool:
    lhs = inv_i.beta0 * inv_s.beta1
    return lhs == inv_i.beta1 * inv_s.beta0 and lhs <= I


def delta_table(spec: CurveSpec, g: Optional[DualGraph] = None) -> dict[tuple[int, int], int]:
    """``delta[i, s]``, decided twice: by proportional maximal contact values
    and by a shared terminal satellite point.

    The two case labels can differ (two smooth branches along the same free
    points are proportional with equality but share no satellite point), but
    then both cases give the same number, so the values must agree.
    """
    g = g or build_dual_graph(spec)
    inv = g.invariants
    out = {}
    for i in spec.branch_ids():
        for s in spec.branch_ids():
            a, b = inv[i - 1], inv[s - 1]
            if s == i:
                out[i, s] = a.beta0 * b.beta1
                continue
            I = intersection_number(spec, i, s)
            by_values = a.beta0 * b.beta1 if _proportional_and_bounded(a, b, I) else I
            by_contact = a.beta0 * b.beta1 if contact_pair(spec, i, s).q >= 1 else I
            if by_contact != by_values:
                raise LctError(f"delta[{i}, {s}] is {by_values} by contact values "
                               f"but {by_contact} by shared terminal satellites")
            out[i, s] = by_values
    return out


def terminal_satellite_value(spec: CurveSpec, i: int, g: Optional[DualGraph] = None) -> Fraction:
    """Closed form at the first terminal satellite point of branch ``i``."""
    g = g or build_dual_graph(spec)
    inv = g.invariants[i - 1]
    deltas = delta_table(spec, g)
    return Fraction(inv.beta0 + inv.beta1, sum(deltas[i, s] for s in spec.branch_ids()))


def separating_value(spec: CurveSpec, g: DualGraph, k: int) -> Fraction:
    """Closed form at a free separating point ``P_k``.

    With ``d`` the number of points up to ``P_k`` (all free), a curvette there
    has ``a + 1 = d + 1`` and meets each branch ``s`` with multiplicity
    ``c_ks * beta0_s`` if its arrow does not pass through ``v_k`` and
    ``d * beta0_s`` if it does.
    """
    d = free_count(spec.constellation, k)
    less, geq = arrow_split(g, k)
    inv = g.invariants
    denom = sum((c_coefficient(spec, g, k, s) * inv[s - 1].beta0 for s in less), Fraction(0))
    denom += d * sum(inv[s - 1].beta0 for s in geq)
    return Fraction(d + 1) / denom


def separating_value_by_pair(spec: CurveSpec, i1: int, i2: int) -> Fraction:
    """The pair-based expression for the separating case, kept as a diagnostic.

    It agrees with :func:`separating_value` when every branch meets ``C_i1``
    in a way that a curvette at the separating point does, which is not true
    in general (e.g. branches tangent to ``C_i1`` beyond the separating point).
    """
    inv1 = build_dual_graph(spec).invariants
    b1, b2 = inv1[i1 - 1].beta0, inv1[i2 - 1].beta0
    I12 = intersection_number(spec, i1, i2)
    rest = sum(intersection_number(spec, i1, s) for s in spec.branch_ids() if s != i1)
    return Fraction(b1 * b2 + I12, b1 * I12 + b2 * rest)


@dataclass(frozen=True)
class LctReport:
    lct: Fraction
    distinguished_vertex: Optional[int] = None
    vertex_kind: Optional[str] = None
    method: str = "formula"
    candidate_table: Mapping[int, Fraction] = field(default_factory=dict)
    sigma_table: Mapping[int, Fraction] = field(default_factory=dict)
    branch_invariants: tuple[BranchInvariants, ...] = ()
    intersection_matrix: Mapping[tuple[int, int], int] = field(default_factory=dict)
    values: Mapping[str, Fraction] = field(default_factory=dict)
    argmin: frozenset[int] = frozenset()
    corollary_case: Optional[str] = None
    pair_diagnostic: Optional[dict] = None
    warnings: tuple[str, ...] = ()
    spec: Optional[CurveSpec] = field(default=None, compare=False, repr=False)


def _require_standard(spec: CurveSpec) -> None:
    if not spec.is_reduced:
        raise ExcludedInput("the closed form needs a reduced curve")
    report = check_minimality(spec)
    if report.excluded is not None:
        raise ExcludedInput(f"{report.excluded}: outside the closed form's hypotheses")
    if not report.minimal:
        raise ExcludedInput(f"constellation is not minimal: unnecessary {list(report.unnecessary)}")


def lct_formula(spec: CurveSpec) -> LctReport:
    _require_standard(spec)
    g = build_dual_graph(spec)
    sigmas = sigma_table(spec, g)
    k = distinguished_vertex(spec, g, sigmas)
    inv = g.invariants
    diag = None
    if k in g.sets.T:
        kind = TERMINAL_SATELLITE
        i = min(i for i in spec.branch_ids() if inv[i - 1].t_min == k)
        value = terminal_satellite_value(spec, i, g)
    else:
        kind = INITIAL_SEPARATING
        value = separating_value(spec, g, k)
        pairs = freely_separated_pairs(spec, k)
        by_pair = {f"{i1},{i2}": separating_value_by_pair(spec, i1, i2) for i1, i2 in pairs}
        by_pair.update({f"{i2},{i1}": separating_value_by_pair(spec, i2, i1) for i1, i2 in pairs})
        diag = {"pairs": by_pair, "all_agree": all(v == value for v in by_pair.values())}
    V = g.sets.T | g.sets.S
    return LctReport(
        lct=value,
        distinguished_vertex=k,
        vertex_kind=kind,
        method="formula",
        candidate_table=candidate_table(spec, g.sets.F),
        sigma_table={v: sigmas[v] for v in sorted(V)},
        branch_invariants=inv,
        intersection_matrix=intersection_matrix(spec),
        values={"formula": value},
        pair_diagnostic=diag,
        spec=spec,
    )


def corollary_case(spec: CurveSpec) -> tuple[str, int, int]:
    """Sub-case label ``a1 | a2 | b1 | b2 | b3`` and the branch order used
    (smaller ratio ``beta1 / beta0`` first)."""
    if spec.r != 2:
        raise NotTwoBranches(f"expected 2 branches, got {spec.r}")
    g = build_dual_graph(spec)
    inv = g.invariants
    one, two = (1, 2) if inv[0].ratio <= inv[1].ratio else (2, 1)
    f1, f2 = inv[one - 1], inv[two - 1]
    if not separation(spec, one, two).freely:
        return ("a1" if f1.beta1 >= f2.beta0 else "a2"), one, two
    c = contact_pair(spec, one, two).c
    q = Fraction(f2.beta0, f1.beta0)
    if Fraction(1, c) <= q <= c:
        return "b1", one, two
    return ("b2" if q < Fraction(1, c) else "b3"), one, two


def lct_two_branch(spec: CurveSpec) -> tuple[Fraction, str]:
    label, one, two = corollary_case(spec)
    inv = build_dual_graph(spec).invariants
    b01, b11 = inv[one - 1].beta0, inv[one - 1].beta1
    b02, b12 = inv[two - 1].beta0, inv[two - 1].beta1
    I = intersection_number(spec, one, two)
    value = {
        "a1": lambda: Fraction(b11 + b01, b11 * (b01 + b02)),
        "a2": lambda: Fraction(b12 + b02, b02 * (b11 + b12)),
        "b1": lambda: Fraction(b01 * b02 + I, (b01 + b02) * I),
        "b2": lambda: Fraction(b11 + b01, b01 * b11 + I),
        "b3": lambda: Fraction(b12 + b02, b02 * b12 + I),
    }[label]()
    return value, label


# -- non-reduced curves and complete ideals ---------------------------------------

def expand_multiplicities(spec: CurveSpec) -> CurveSpec:
    """Replace a component of multiplicity ``n`` by ``n`` reduced curvettes at
    its maximal point, meeting the last exceptional curve at distinct points."""
    branches = []
    for b in spec.branches:
        if b.multiplicity == 1:
            branches.append(b)
        else:
            branches.extend(Branch(f"{b.name}#{k}", b.at) for k in range(1, b.multiplicity + 1))
    return CurveSpec(spec.constellation, tuple(branches))


def lct_nonreduced(spec: CurveSpec) -> Fraction:
    """``min(1/n_i, lct(C'))`` with ``C'`` the reduced expansion."""
    reduced = reconcile(expand_multiplicities(spec)).lct
    return min([Fraction(1, b.multiplicity) for b in spec.branches] + [reduced])


def lct_nonreduced_oracle(spec: CurveSpec) -> Fraction:
    """Divisorial minimum with weighted valuations, also counting the
    components themselves (coefficient ``n_i``, discrepancy 0)."""
    value, _ = lct_divisorial(spec)
    return min([Fraction(1, b.multiplicity) for b in spec.branches] + [value])


def ideal_curve(c: Constellation, exponents: Mapping[int, int]) -> CurveSpec:
    """Reduced sum of ``n`` general curves per marked point, on the
    sub-constellation below the marked points."""
    marks = {j: n for j, n in exponents.items() if n}
    if not marks:
        raise EmptyIdeal("no marked points")
    for j, n in marks.items():
        c.check_id(j)
        if n < 0:
            raise EmptyIdeal(f"negative exponent {n} at P{j}")
    keep = set()
    for j in marks:
        keep.update(c.chain(j))
    sub, new_id = sub_constellation(c, keep)
    branches = tuple(Branch(f"p{j}#{k}", new_id[j])
                     for j in sorted(marks) for k in range(1, marks[j] + 1))
    return CurveSpec(sub, branches)


def ideal_threshold_oracle(c: Constellation, exponents: Mapping[int, int]) -> Fraction:
    """lct of the ideal itself: ``min_j (a_j + 1) / v_j``, where ``v_j`` sums the
    valuations of the simple ideals (not capped at 1)."""
    total = [0] * c.m
    for j, n in exponents.items():
        for k, x in enumerate(curvette_multiplicities(c, j)):
            total[k] += n * x
    v = apply_p_inverse(c, total)
    a = log_discrepancies(c)
    return min(Fraction(a[j] + 1, v[j]) for j in range(c.m) if v[j])


def lct_complete_ideal(c: Constellation, exponents: Mapping[int, int]) -> LctReport:
    return reconcile(ideal_curve(c, exponents))


# -- reconciliation ---------------------------------------------------------------

METHODS = ("formula", "divisorial", "corollary", "all")


def _smooth_report(spec: CurveSpec, flag: str, warnings: list[str]) -> LctReport:
    return LctReport(lct=Fraction(1), method=flag, values={flag: Fraction(1)},
                     warnings=tuple(warnings + [flag]), spec=spec,
                     intersection_matrix=intersection_matrix(spec),
                     branch_invariants=build_dual_graph(spec).invariants)


def reconcile(spec: CurveSpec, method: str = "all") -> LctReport:
    """Run the requested engines (``all`` = every applicable one) and demand
    exact agreement."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    warnings: list[str] = []
    if not spec.is_reduced:
        value = lct_nonreduced(spec)
        oracle = lct_nonreduced_oracle(spec)
        if value != oracle:
            raise MethodDisagreement("non-reduced routes disagree",
                                     {"nonreduced": value, "divisorial": oracle})
        return LctReport(lct=value, method="nonreduced",
                         values={"nonreduced": value, "divisorial": oracle},
                         warnings=("NonReduced",), spec=spec)

    report = check_minimality(spec)
    if report.excluded is None and not report.minimal:
        spec, removed = trim_to_minimal(spec)
        warnings.append(f"trimmed non-minimal points {list(removed)}")
        report = check_minimality(spec)
    if report.excluded is not None:
        return _smooth_report(spec, report.excluded, warnings)
    if not report.minimal:
        raise ExcludedInput(f"could not trim to a minimal constellation: {list(report.unnecessary)}")

    values: dict[str, Fraction] = {}
    base: Optional[LctReport] = None
    argmin: frozenset[int] = frozenset()
    case = None
    if method in ("formula", "all"):
        base = lct_formula(spec)
        values["formula"] = base.lct
    if method in ("divisorial", "all"):
        values["divisorial"], argmin = lct_divisorial(spec)
        if base is None:
            g = build_dual_graph(spec)
            values["restricted"] = lct_divisorial(spec, g.sets.F)[0]
        else:
            values["restricted"] = min(base.candidate_table.values())
    if method in ("corollary", "all") and spec.r == 2:
        values["corollary"], case = lct_two_branch(spec)
    elif method == "corollary":
        raise NotTwoBranches(f"expected 2 branches, got {spec.r}")

    if len(set(values.values())) != 1:
        raise MethodDisagreement("lct engines disagree", values)
    if base is not None and argmin and base.distinguished_vertex not in argmin:
        raise MethodDisagreement(
            f"distinguished vertex v{base.distinguished_vertex} does not attain the minimum",
            {**values, "argmin": sorted(argmin)})
    value = next(iter(values.values()))
    if base is None:
        base = LctReport(lct=value, intersection_matrix=intersection_matrix(spec),
                         branch_invariants=build_dual_graph(spec).invariants, spec=spec)
    return replace(
        base,
        method="all_agree" if len(values) > 1 else next(iter(values)),
        values=values,
        argmin=argmin,
        corollary_case=case,
        warnings=tuple(warnings),
    )
