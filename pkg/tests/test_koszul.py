import itertools
import random
from fractions import Fraction

import pytest

from confstrata.koszul import (
    QuadraticPresentation,
    TruncatedSeries,
    exterior_presentation,
    genus_one_presentation,
    hilbert_of_quadratic,
    koszul_criterion,
    presentation_from_json,
    presentation_to_json,
    quadratic_dual,
    symmetric_presentation,
)
from confstrata.linalg import Echelon

# found by seeded random search; both series verified against the dense oracle below
NON_KOSZUL_RELATIONS = [
    [-1, 0, 1, -1, -1, 1, -1, 0, 1],
    [-1, 1, -1, -1, -1, 0, 0, -1, -1],
    [-1, 1, 0, -1, 1, -1, -1, 1, 1],
]


def non_koszul_presentation():
    return QuadraticPresentation(3, NON_KOSZUL_RELATIONS, "free")


def dense_dims(g, relations, N):
    """Independent oracle: rank over all words, no normal-form bookkeeping."""
    rel = [{(i // g, i % g): Fraction(v) for i, v in enumerate(vec) if v} for vec in relations]
    dims = [1, g]
    for n in range(2, N + 1):
        words = list(itertools.product(range(g), repeat=n))
        index = {w: i for i, w in enumerate(words)}
        ech = Echelon()
        for pos in range(n - 1):
            for prefix in itertools.product(range(g), repeat=pos):
                for suffix in itertools.product(range(g), repeat=n - 2 - pos):
                    for r in rel:
                        row = {}
                        for (i, j), c in r.items():
                            w = prefix + (i, j) + suffix
                            row[index[w]] = row.get(index[w], 0) + c
                        ech.add(row)
        dims.append(len(words) - ech.rank)
    return dims


# -- duals -----------------------------------------------------------------------

def test_dual_of_square_zero_is_polynomial():
    p = QuadraticPresentation(1, [[1]], "free")  # x^2 = 0
    dual = quadratic_dual(p)
    assert dual.relations == ()
    assert hilbert_of_quadratic(dual, 5).coefficients == (1, 1, 1, 1, 1, 1)


def test_dual_of_free_line_is_square_zero():
    p = QuadraticPresentation(1, [], "free")
    dual = quadratic_dual(p)
    assert len(dual.relations) == 1
    assert hilbert_of_quadratic(dual, 4).coefficients == (1, 1, 0, 0, 0)


def test_dual_dimension_count():
    rng = random.Random(17)
    for _ in range(20):
        g = rng.randint(1, 3)
        vecs = []
        for _ in range(rng.randint(0, g * g)):
            vecs.append([rng.choice([-1, 0, 1]) for _ in range(g * g)])
        try:
            p = QuadraticPresentation(g, vecs, rng.choice(["free", "graded-commutative"]))
        except ValueError:
            continue
        dual = quadratic_dual(p)
        assert len(p.effective_relations()) + len(dual.relations) == g * g


def test_double_dual_dimensions():
    rng = random.Random(23)
    for _ in range(15):
        g = rng.randint(1, 3)
        vecs = [[rng.choice([-1, 0, 1]) for _ in range(g * g)] for _ in range(rng.randint(0, 2))]
        try:
            p = QuadraticPresentation(g, vecs, "free")
        except ValueError:
            continue
        double = quadratic_dual(quadratic_dual(p))
        assert len(double.relations) == len(p.effective_relations())


def test_dependent_relations_rejected():
    with pytest.raises(ValueError):
        QuadraticPresentation(2, [[1, 0, 0, 0], [2, 0, 0, 0]], "free")


# -- Hilbert series ------------------------------------------------------------------

def test_exterior_two_generators():
    series = hilbert_of_quadratic(exterior_presentation(2), 5)
    assert series.coefficients == (1, 2, 1, 0, 0, 0)


def test_symmetric_one_generator():
    series = hilbert_of_quadratic(QuadraticPresentation(1, [], "free"), 6)
    assert series.coefficients == (1,) * 7


def test_genus_one_series():
    series = hilbert_of_quadratic(genus_one_presentation(), 5)
    assert series.coefficients == (1, 2, 1, 0, 0, 0)


def test_symmetric_series_binomials():
    for g in (2, 3):
        series = hilbert_of_quadratic(symmetric_presentation(g), 6)
        expected = tuple(
            len(list(itertools.combinations_with_replacement(range(g), n))) for n in range(7))
        assert series.coefficients == expected


def test_engine_matches_dense_oracle():
    series = hilbert_of_quadratic(non_koszul_presentation(), 6)
    assert list(series.coefficients) == dense_dims(3, NON_KOSZUL_RELATIONS, 6)
    dual = quadratic_dual(non_koszul_presentation())
    dual_series = hilbert_of_quadratic(dual, 6)
    assert list(dual_series.coefficients) == dense_dims(3, dual.relations, 6)


def test_engine_matches_dense_oracle_randomized():
    rng = random.Random(41)
    tried = 0
    while tried < 10:
        g = rng.randint(2, 3)
        vecs = [[rng.choice([-1, 0, 1]) for _ in range(g * g)]
                for _ in range(rng.randint(1, 3))]
        try:
            p = QuadraticPresentation(g, vecs, "free")
        except ValueError:
            continue
        tried += 1
        series = hilbert_of_quadratic(p, 4)
        assert list(series.coefficients) == dense_dims(g, p.relations, 4)


def test_hilbert_cap():
    with pytest.raises(ValueError):
        hilbert_of_quadratic(exterior_presentation(2), 40)


# -- the criterion --------------------------------------------------------------------

def test_criterion_symmetric_one_generator():
    verdict = koszul_criterion(QuadraticPresentation(1, [], "free"), 6)
    assert verdict.passed
    assert verdict.dual_series.coefficients == (1, 1, 0, 0, 0, 0, 0)


def test_criterion_genus_one_to_order_ten():
    verdict = koszul_criterion(genus_one_presentation(), 10)
    assert verdict.passed
    assert verdict.product == (1,) + (0,) * 10
    # the dual is a polynomial algebra on two generators
    assert verdict.dual_series.coefficients == tuple(n + 1 for n in range(11))


def test_criterion_symmetric_exterior_pairs():
    for g in range(1, 5):
        assert koszul_criterion(symmetric_presentation(g), 10).passed
        assert koszul_criterion(exterior_presentation(g), 10).passed


def test_criterion_fail_fixture():
    verdict = koszul_criterion(non_koszul_presentation(), 6)
    assert not verdict.passed
    assert verdict.first_discrepancy == (6, 27)
    assert "FAIL" in verdict.note


def test_criterion_needs_order_two():
    with pytest.raises(ValueError):
        koszul_criterion(exterior_presentation(2), 1)


def test_pass_wording_is_guarded():
    verdict = koszul_criterion(exterior_presentation(2), 6)
    assert "necessary condition" in verdict.note
    assert "consistent" in verdict.note


# -- misc ------------------------------------------------------------------------------

def test_truncated_series_requires_unit():
    with pytest.raises(ValueError):
        TruncatedSeries((2, 1))


def test_presentation_json_round_trip():
    p = non_koszul_presentation()
    back = presentation_from_json(presentation_to_json(p))
    assert back.generator_count == p.generator_count
    assert back.relations == p.relations
    assert back.convention == "free"


def test_regrading_note_carried():
    p = genus_one_presentation()
    assert p.regraded_from == 1
    assert quadratic_dual(p).regraded_from == 1
