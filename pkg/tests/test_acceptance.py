"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Runnable standalone (python tests/test_acceptance.py) or under pytest
(pytest -s shows the lines).  Every tolerance is exact; the only numeric
guards are the stated runtime caps.
"""

import itertools
import sys
import time

from confstrata import checks
from confstrata.confcat import Stratum, stratum_codim, stratum_intersect
from confstrata.finchains import FiniteSet
from confstrata.forests import (
    Forest,
    enumerate_forests,
    from_poset,
    is_forest,
    poset_violations,
    to_poset,
)
from confstrata.koszul import (
    exterior_presentation,
    genus_one_presentation,
    koszul_criterion,
    symmetric_presentation,
)
from confstrata.weights import (
    HypothesisRefusal,
    VarietyDescriptor,
    WeightMultiset,
    affine_line,
    conf2_purity_report,
    elliptic_curve,
    hilbert_series,
    presentation,
    purity_theorem_check,
    thom_relative,
)
from confstrata.wonderful import (
    BlowUpSchedule,
    default_order,
    diagonal,
    diagonal_building_set,
    first_invalid_prefix,
    nest_count,
    validate_li_order,
)


def _verdict(number, name, ok, detail=""):
    line = f"ACCEPTANCE {number} [{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


def test_criterion_1_forest_nest_bijection():
    start = time.monotonic()
    ok = True
    counts = []
    for n in range(1, 6):
        forests = len(enumerate_forests(n))
        nests = nest_count(n)
        counts.append(forests)
        ok = ok and forests == nests == 1 + (nests - 1)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 60
    _verdict(1, "forest/nest bijection n=1..5", ok,
             f"counts {counts}, {elapsed:.1f}s")


def test_criterion_2_poset_round_trip():
    start = time.monotonic()
    ok = True
    checked = 0
    for n in range(1, 5):
        for phi in enumerate_forests(n):
            poset = to_poset(phi)
            ok = ok and not poset_violations(poset.elements, poset.less)
            ok = ok and from_poset(poset) == phi
            checked += 1
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 10
    _verdict(2, "poset characterization round-trip, forests on <=4 elements", ok,
             f"{checked} forests, {elapsed:.1f}s")


def test_criterion_3_functoriality():
    start = time.monotonic()
    identities = checks.check_simplicial_identities(3, 3, samples=200, sample_size=4, seed=1)
    functor = checks.check_level_functor(3, 3, pair_samples=1000, seed=1)
    elapsed = time.monotonic() - start
    ok = identities.ok and functor.ok and elapsed < 120
    _verdict(3, "simplicial identities + F/con composition, k<=3 |S|<=3", ok,
             f"{identities.checked}+{functor.checked} checks, {elapsed:.1f}s")


def test_criterion_4_stratum_calculus():
    ok = True
    for n in range(1, 6):
        for phi in enumerate_forests(n):
            ok = ok and stratum_codim(phi) == sum(1 for b in phi.blocks if len(b) > 1)
    pairs = 0
    for n in range(1, 5):
        ground = FiniteSet(range(1, n + 1))
        for phi, psi in itertools.product(enumerate_forests(n), repeat=2):
            pairs += 1
            union = set(phi.blocks) | set(psi.blocks)
            expected = (Stratum(Forest(ground, union))
                        if is_forest(ground, union) else None)
            ok = ok and stratum_intersect(phi, psi) == expected
    _verdict(4, "stratum codimension and intersection law", ok, f"{pairs} pairs")


def test_criterion_5_li_ordering():
    ok = True
    for n in range(2, 6):
        schedule = default_order(diagonal_building_set(n, 1))
        ok = ok and validate_li_order(schedule)
    bad = BlowUpSchedule(
        diagonal_building_set(3, 1),
        [diagonal([1, 2]), diagonal([1, 3]), diagonal([2, 3]), diagonal([1, 2, 3])])
    ok = ok and not validate_li_order(bad)
    ok = ok and first_invalid_prefix(bad) == 3
    _verdict(5, "increasing-dimension blow-up orders prefix-validate, n<=5", ok)


def test_criterion_6_thom_purity_ledger():
    e = elliptic_curve()
    betti = {0: 1, 1: 2, 2: 1}
    ok = True
    for k in range(2, 7):
        expected = (WeightMultiset({k: betti[k - 2]}) if k - 2 in betti
                    else WeightMultiset.empty())
        ok = ok and thom_relative(e, k) == expected
    report = conf2_purity_report(e)
    ok = ok and report.pure and report.weight == 2
    ok = ok and report.relative[2] == WeightMultiset({2: 1})
    ok = ok and report.relative[3] == WeightMultiset({3: 2})
    ok = ok and report.ker_alpha == WeightMultiset({2: 6})
    _verdict(6, "Thom multiplicities and two-point purity ledger (elliptic)", ok)


def test_criterion_7_hilbert_oracle():
    start = time.monotonic()

    def oracle(n, max_deg):
        dims = [0] * (max_deg + 1)
        for r in range(n):
            for combo in itertools.combinations(range(2, n + 1), r):
                count = 1
                for j in combo:
                    count *= j - 1
                if 2 * r <= max_deg:
                    dims[2 * r] += count
        return dims

    line = affine_line()
    ok = hilbert_series(presentation(line, 2), 2).dims() == [1, 0, 1]
    ok = ok and hilbert_series(presentation(line, 3), 4).dims() == [1, 0, 3, 0, 2]
    for n in (2, 3, 4):
        ok = ok and hilbert_series(presentation(line, n), 8).dims() == oracle(n, 8)
    elapsed = time.monotonic() - start
    ok = ok and elapsed < 120
    _verdict(7, "Hilbert oracle vs distinct-second-index count, n<=4 deg<=8", ok,
             f"{elapsed:.1f}s")


def test_criterion_8_purity_theorem():
    ok = True
    e = elliptic_curve()
    for n in (1, 2, 3):
        ok = ok and purity_theorem_check(e, n, 8).pure
    line = affine_line()
    for n in (1, 2, 3, 4):
        ok = ok and purity_theorem_check(line, n, 8).pure
    corrupted = VarietyDescriptor(
        "corrupted", 1, {0: {0: 1}, 1: {0: 2}, 2: {2: 1}}, True)
    refused = False
    try:
        purity_theorem_check(corrupted, 2, 8)
    except HypothesisRefusal as exc:
        refused = bool(exc.violations)
    ok = ok and refused
    _verdict(8, "purity theorem check (elliptic n<=3, affine n<=4, deg<=8) + refusal", ok)


def test_criterion_9_koszul_criterion():
    ok = True
    genus1 = koszul_criterion(genus_one_presentation(), 10)
    ok = ok and genus1.passed and genus1.product == (1,) + (0,) * 10
    for g in range(1, 5):
        ok = ok and koszul_criterion(symmetric_presentation(g), 10).passed
        ok = ok and koszul_criterion(exterior_presentation(g), 10).passed
    _verdict(9, "Koszul criterion: genus-1 through t^10, symmetric/exterior g<=4", ok)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
