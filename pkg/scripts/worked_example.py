"""Print every table for the 17-point, 8-branch worked example: invariants,
intersection numbers, point sets, sigma along V, candidates and the result."""

from plane_lct.constellation import intersection_number
from plane_lct.dualgraph import build_dual_graph, sigma_table
from plane_lct.gen import example_figure1
from plane_lct.invariants import contact_pair, j_partition
from plane_lct.lct import reconcile


def main():
    spec = example_figure1()
    g = build_dual_graph(spec)
    print("branch  at  beta0 beta1  l0  t")
    for b, inv in zip(spec.branches, g.invariants):
        print(f"{b.name:>6} {b.at:>3} {inv.beta0:>6} {inv.beta1:>5} {inv.l0:>3}  {inv.t_min}")

    print("\nI(f_i, f_s) / contact pair")
    for i in spec.branch_ids():
        cells = []
        for s in spec.branch_ids():
            if i == s:
                cells.append("      -     ")
            else:
                cp = contact_pair(spec, i, s)
                cells.append(f"{intersection_number(spec, i, s):>4} ({cp.q},{cp.c}) ")
        print(f"f{i}: " + "".join(cells))

    print(f"\nT = {sorted(g.sets.T)}  S = {sorted(g.sets.S)}  |F| = {len(g.sets.F)}")
    sig = sigma_table(spec, g)
    V = sorted(g.sets.T | g.sets.S)
    print("sigma on V: " + ", ".join(f"v{v}={sig[v]}" for v in V))
    for j in V:
        J = j_partition(spec, j, g.sets)
        blocks = [J.J1, J.J2, J.J3] + ([J.J41, J.J42] if J.J41 is not None else [J.J4])
        print(f"  J at P{j}: " + " | ".join(str(sorted(x)) for x in blocks))

    report = reconcile(spec)
    print(f"\nlct = {report.lct} at v{report.distinguished_vertex} ({report.vertex_kind}); "
          f"methods {dict((k, str(v)) for k, v in report.values.items())}")


if __name__ == "__main__":
    main()
