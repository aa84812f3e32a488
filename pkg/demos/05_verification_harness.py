"""The verification harness: identity suite, inequality suite, ratio report.

Run all three on the golden triple plus a seeded random instance and print a
compact table.  The `corpus` CLI subcommand runs the same suites over the whole
frozen corpus.
"""

from energylab import run_identity_suite, run_inequality_suite, run_ratio_report
from energylab.constructors import golden_z7_triple, random_set
from energylab.group import make_group
from energylab.setfun import GSet


def show(title, results):
    print(f"\n== {title} ==")
    for r in results:
        ratio = "" if r.ratio is None else f" ratio={r.ratio:.4g}"
        print(f"  [{r.status:^6}] {r.name}{ratio}")


A = golden_z7_triple()
B = GSet.from_indices(A.group, [0, 3])
show("identity suite on the golden triple", run_identity_suite(A, B))
show("inequality suite (theorem-backed, must all pass)", run_inequality_suite(A, B))
show("ratio report (record-only health signals)", run_ratio_report(A))

R = random_set(make_group([101]), 0.16, 3)
bad = [r for r in run_identity_suite(R) + run_inequality_suite(R) if r.status == "fail"]
print(f"\nseeded random instance |A|={R.card}: {'no failures' if not bad else bad}")
