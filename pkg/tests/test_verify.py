import json

import numpy as np
import pytest

from energylab.constructors import (arithmetic_progression, golden_hplusl, random_set,
                                    subspace)
from energylab.energy import energy_k, t_k
from energylab.group import make_group
from energylab.setfun import GSet, difference_set, sumset
from energylab.verify import (CheckResult, VerifyConfig, frozen_corpus,
                              random_family_acceptance_instance, results_to_json,
                              run_algorithm_audits, run_identity_suite,
                              run_inequality_suite, run_ratio_report)


def _by_tag(results):
    return {r.tag: r for r in results}


def test_identity_suite_golden(triple):
    B = GSet.from_indices(triple.group, [0, 3])
    res = run_identity_suite(triple, B)
    tags = _by_tag(res)
    assert all(r.status == "pass" for r in res), [r.tag for r in res if r.status != "pass"]
    assert tags["identity.e3_slice_sum"].lhs == "45"
    assert tags["identity.delta_minus_paths"].lhs == "19"
    assert tags["identity.delta_plus_paths"].lhs == "19"
    assert tags["identity.u2_energy"].lhs == "19"
    assert tags["identity.pair_energy_spectrum"].lhs == "6"


def test_identity_suite_subgroup():
    H = subspace(4, 2)
    res = run_identity_suite(H)
    assert all(r.status == "pass" for r in res)
    tags = _by_tag(res)
    assert tags["identity.e3_slice_sum"].lhs == str(4 ** 4)
    assert tags["identity.e4_slice_pair_sum"].lhs == str(4 ** 5)


def test_identity_suite_seeded_random():
    for factors, density in (([101], 0.16), ([2] * 8, 0.11)):
        g = make_group(factors)
        for seed in range(5):
            A = random_set(g, density, seed)
            res = run_identity_suite(A)
            bad = [r for r in res if r.status == "fail"]
            assert not bad, [(r.tag, r.lhs, r.rhs) for r in bad]


def test_inequality_suite_golden_values(triple):
    res = run_inequality_suite(triple)
    tags = _by_tag(res)
    assert all(r.status != "fail" for r in res)
    # worked slice-size sum: 9/5 + 1 + 1/3 + 1/3 + 1 vs 45/9
    assert float(tags["ineq.e3_weight_minus"].lhs) == pytest.approx(4.4666666667)
    assert float(tags["ineq.e3_weight_minus"].rhs) == pytest.approx(5.0)


def test_inequality_suite_ap_plunnecke():
    A = arithmetic_progression(101, 0, 1, 8)
    S = sumset(A, A)
    assert S.card == 15
    twoAminusA = difference_set(sumset(A, A), A)
    assert twoAminusA.card == 22
    res = run_inequality_suite(A)
    tags = _by_tag(res)
    r = tags["ineq.plunnecke_2_1"]
    assert r.status == "pass"
    assert int(r.lhs) == 22 * 8 ** 2 and int(r.rhs) == 15 ** 3


def test_inequality_suite_subgroup_equalities():
    H = subspace(4, 2)
    res = run_inequality_suite(H)
    tags = _by_tag(res)
    assert all(r.status != "fail" for r in res)
    # eighth-power bound is met with equality on a subgroup
    r = tags["ineq.lev_minus"]
    assert int(r.lhs) == 4 ** 8
    assert int(r.rhs) == int(energy_k(H, 4).value) * t_k(H, 2) == 4 ** 5 * 4 ** 3


def test_inequality_suite_pair(triple):
    B = GSet.from_indices(triple.group, [0, 3])
    res = run_inequality_suite(triple, B)
    assert all(r.status != "fail" for r in res)


def test_inequality_suite_random_instances():
    for factors, density, seeds in (([101], 0.16, 6), ([2] * 8, 0.11, 4), ([256], 0.11, 3)):
        g = make_group(factors)
        for seed in range(seeds):
            A = random_set(g, density, seed)
            res = run_inequality_suite(A)
            bad = [r for r in res if r.status == "fail"]
            assert not bad, [(r.tag, r.lhs, r.rhs, r.note) for r in bad]


def test_skip_reason_recorded():
    g = make_group([2] * 10)
    A = random_set(g, 0.05, 0)  # around 50 members: over the gamma cap
    res = run_inequality_suite(A)
    tags = _by_tag(res)
    assert tags["ineq.connected_energy"].status == "skip"
    assert "cap" in tags["ineq.connected_energy"].note


def test_ratio_report_golden_hplusl():
    A = golden_hplusl()
    res = run_ratio_report(A)
    tags = _by_tag(res)
    assert all(r.status in ("report", "skip") for r in res)
    crit = tags["ratio.critical_e3"]
    assert crit.ratio == pytest.approx(28672 / (16 * 2560))
    assert crit.ratio == pytest.approx(0.7)


def test_ratio_report_subgroup_unit_ratio():
    H = subspace(4, 2)
    tags = _by_tag(run_ratio_report(H))
    assert tags["ratio.e3_diffset_74"].ratio == pytest.approx(1.0)
    assert tags["ratio.selfdual"].ratio == pytest.approx(1.0)


def test_ratio_report_reproducible_digits():
    g = make_group([101])
    A = random_set(g, 0.2, 9)
    a = results_to_json(run_ratio_report(A))
    b = results_to_json(run_ratio_report(A))
    assert a == b
    for r in run_ratio_report(A):
        if r.status == "report" and r.ratio is not None:
            assert np.isfinite(r.ratio)


def test_inequality_reproducible_digits():
    g = make_group([101])
    A = random_set(g, 0.2, 10)
    assert results_to_json(run_inequality_suite(A)) == results_to_json(run_inequality_suite(A))


def test_checkresult_serialization(triple):
    res = run_identity_suite(triple)
    payload = json.loads(results_to_json(res))
    assert isinstance(payload, list)
    assert set(payload[0]) == {"name", "tag", "lhs", "rhs", "status", "ratio", "note"}
    # canonical ordering by entry name
    names = [p["name"] for p in payload]
    assert names == sorted(names)


def test_frozen_corpus_composition():
    items = frozen_corpus(seeds=2)
    names = [it.name for it in items]
    assert "golden_z7" in names and "hplusl_10_4_6" in names
    assert sum(1 for n in names if n.startswith("z101_seed")) == 2
    assert sum(1 for n in names if n.startswith("f2_10_seed")) == 2
    # deterministic regeneration
    again = frozen_corpus(seeds=2)
    for a, b in zip(items, again):
        assert a.name == b.name and np.array_equal(a.A.mask, b.A.mask)


def test_algorithm_audits_on_corpus_sample():
    for item in frozen_corpus(seeds=2):
        res = run_algorithm_audits(item)
        assert all(r.status == "pass" for r in res), item.name


def test_random_family_acceptance_instance():
    out = random_family_acceptance_instance(seed=7)
    assert out["count"] >= out["bound"]
