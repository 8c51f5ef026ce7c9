import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from src.analogy.analogy import AnalogyModel, analogical_constraint
from src.boolfun.boolfun import MinorMap, TruthTable, apply_minor, named
from src.boolfun.families import FAMILIES, FamilyName
from src.classifier.classifier import (
    affine_function,
    ap_check,
    aip_predict,
    error_rate,
    nearest_affine,
    predict_unknown,
    walsh_spectrum,
    write_report,
)
from src.classifier.dataset import Dataset, Record, dataset_from_function
from src.galois.galois import pol
from src.relations.relations import Relation, solutions
from src.utils.errors import CapabilityError, InputError, TieError
from tests.conftest import ALL_PAIRS, all_functions

AFFINE_PAIRS = [("R4", "R1"), ("R4", "R4"), ("R4", "R5"), ("R5", "R1"), ("R5", "R4"), ("R5", "R5")]


def brute_force_counts(f, src, dst):
    """Selections, solvable images and errors, straight from the definitions."""
    total = n_solvable = n_errors = 0
    for columns in product(src.relation.tuples(), repeat=f.arity):
        a, b, c, d = (tuple(col[i] for col in columns) for i in range(4))
        total += 1
        answers = solutions(dst.relation, f(*a), f(*b), f(*c))
        if answers:
            n_solvable += 1
            n_errors += f(*d) not in answers
    return total, n_solvable, n_errors


class TestApCheck:
    def test_affine_functions_are_sound_for_affine_pairs(self, models):
        for src, dst in AFFINE_PAIRS:
            for n in range(1, 4):
                for f in FAMILIES[FamilyName.L].enumerate(n):
                    assert ap_check(f, models[src], models[dst]).holds

    def test_and_fails_minimal_model(self, models):
        verdict = ap_check(named("and"), models["R4"], models["R4"])
        assert not verdict.holds
        a, b, c, d = verdict.quadruple
        image = (named("and")(*a), named("and")(*b), named("and")(*c), named("and")(*d))
        assert image == verdict.witness.image

    def test_holds_has_no_witness(self, models):
        verdict = ap_check(named("xor"), models["R4"], models["R4"])
        assert verdict.holds and verdict.quadruple is None

    @pytest.mark.parametrize("n", [1, 2, pytest.param(3, marks=pytest.mark.slow)])
    @pytest.mark.parametrize("src, dst", ALL_PAIRS)
    def test_agrees_with_pol(self, models, src, dst, n):
        members = pol([analogical_constraint(models[src], models[dst])], n)
        for f in all_functions(n):
            assert ap_check(f, models[src], models[dst]).holds == (f in members)


class TestErrorRate:
    @pytest.mark.parametrize("src, dst", AFFINE_PAIRS)
    def test_affine_functions_never_err(self, models, src, dst):
        for f in FAMILIES[FamilyName.L].enumerate(3):
            report = error_rate(f, models[src], models[dst])
            assert report.violations == 0
            assert report.distance == 0

    @pytest.mark.parametrize("src, dst", ALL_PAIRS)
    def test_constants_never_err(self, models, src, dst):
        for f in FAMILIES[FamilyName.C].enumerate(2):
            report = error_rate(f, models[src], models[dst])
            assert report.violations == 0
            assert not report.degenerate

    @pytest.mark.parametrize("src, dst", ALL_PAIRS)
    def test_zero_rate_iff_analogy_preserving(self, models, src, dst):
        for f in all_functions(2):
            report = error_rate(f, models[src], models[dst])
            assert (report.violations == 0) == ap_check(f, models[src], models[dst]).holds

    @pytest.mark.parametrize("src, dst", [("R4", "R4"), ("R1", "R2"), ("R5", "R3")])
    @pytest.mark.parametrize("fn", ["and", "imp", "median", "xor3"])
    def test_matches_brute_force(self, models, src, dst, fn):
        f = named(fn)
        report = error_rate(f, models[src], models[dst])
        assert (report.quadruples, report.solvable, report.violations) == \
            brute_force_counts(f, models[src], models[dst])
        assert report.fraction() == Fraction(report.violations, report.solvable)

    def test_and_report(self, models):
        report = error_rate(named("and"), models["R4"], models["R4"])
        assert report.quadruples == 36
        assert report.violations > 0
        assert report.nearest_affine == "2:0"
        assert report.epsilon == 0.25 and report.bound == 1.0
        a, b, c, d = report.witness
        image = [named("and")(*v) for v in (a, b, c, d)]
        assert image == report.witness_image
        assert image[3] not in solutions(models["R4"].relation, *image[:3])

    @pytest.mark.parametrize("src, dst", [("R4", "R4"), ("R1", "R2"), ("R5", "R3"), ("R2", "R1")])
    def test_invariant_under_argument_permutation(self, models, src, dst):
        rng = np.random.default_rng(5)
        for _ in range(10):
            f = TruthTable(3, int(rng.integers(256)))
            g = apply_minor(f, MinorMap(3, tuple(int(i) for i in rng.permutation(3))))
            a = error_rate(f, models[src], models[dst])
            b = error_rate(g, models[src], models[dst])
            assert (a.quadruples, a.solvable, a.violations, a.rate_exact, a.distance) == \
                (b.quadruples, b.solvable, b.violations, b.rate_exact, b.distance)

    def test_worker_count_does_not_change_report(self, models, monkeypatch):
        reports = []
        for workers in ("1", "0"):
            monkeypatch.setenv("ANALOGY_WORKERS", workers)
            reports.append([error_rate(named(fn), models["R4"], models["R1"]) for fn in ("and", "median", "xor3")])
        assert reports[0] == reports[1]

    def test_four_epsilon_bound(self, models):
        rng = np.random.default_rng(2024)
        affine = FAMILIES[FamilyName.L].enumerate(4)
        for trial in range(100):
            g = affine[int(rng.integers(len(affine)))]
            k = trial % 4 + 1
            code = g.code
            for point in rng.choice(16, size=k, replace=False):
                code ^= 1 << int(point)
            f = TruthTable(4, code)
            report = error_rate(f, models["R4"], models["R4"])
            assert report.distance == k
            assert report.rate <= report.bound, (report.function, report.witness)

    def test_degenerate_source(self, models):
        empty = AnalogyModel("EMPTY", Relation.empty(4))
        report = error_rate(named("and"), empty, models["R4"])
        assert report.degenerate
        assert report.quadruples == 0
        assert report.rate == 0.0

    def test_arity_cap(self, models):
        with pytest.raises(CapabilityError):
            error_rate(TruthTable(5, 0), models["R4"], models["R4"])

    def test_sampled_is_reproducible(self, models):
        f = named("median")
        first = error_rate(f, models["R4"], models["R4"], mode="sampled", seed=5, samples=5000)
        second = error_rate(f, models["R4"], models["R4"], mode="sampled", seed=5, samples=5000)
        assert first == second
        assert first.sample_size == 5000 and first.seed == 5
        assert first.violations <= first.solvable <= 5000

    def test_sampled_affine_is_clean(self, models):
        report = error_rate(named("xor3"), models["R4"], models["R4"], mode="sampled", seed=1, samples=2000)
        assert report.violations == 0

    def test_bad_modes(self, models):
        with pytest.raises(InputError):
            error_rate(named("and"), models["R4"], models["R4"], mode="sampled")
        with pytest.raises(InputError):
            error_rate(named("and"), models["R4"], models["R4"], mode="guess")
        with pytest.raises(InputError):
            error_rate(named("and"), models["R4"], models["R4"], mode="sampled", seed=1, samples=0)


class TestNearestAffine:
    def test_and(self):
        assert nearest_affine(named("and")) == (TruthTable(2, 0), 1, 0.25)

    def test_median(self):
        assert nearest_affine(named("median")) == (TruthTable(3, 0x69), 2, 0.25)

    def test_affine_is_its_own_nearest(self):
        for f in FAMILIES[FamilyName.L].enumerate(3):
            assert nearest_affine(f) == (f, 0, 0.0)

    def test_distance_matches_exhaustive_search(self):
        affine = FAMILIES[FamilyName.L].enumerate(3)
        for f in all_functions(3):
            distances = {g: bin(f.code ^ g.code).count("1") for g in affine}
            best = min(distances.values())
            g, distance, _ = nearest_affine(f)
            assert distance == best
            assert g == min((h for h in affine if distances[h] == best), key=lambda h: h.code)

    def test_walsh_spectrum_of_median(self):
        w = walsh_spectrum(named("median"))
        assert w.tolist() == [0, 4, 4, 0, 4, 0, 0, -4]

    def test_affine_function(self):
        assert affine_function(2, 0b11, 0) == named("xor")
        assert affine_function(2, 0b11, 1) == named("iff")
        assert affine_function(3, 0, 1) == TruthTable(3, 0xFF)


def tie_dataset():
    return Dataset(2, (Record((0, 0), 1), Record((0, 1), 0), Record((1, 1), None)))


class TestPrediction:
    def test_xor3_missing_point(self, models):
        ds = dataset_from_function(named("xor3"), unknown=[(0, 0, 0)])
        prediction = aip_predict(ds, (0, 0, 0), models["R4"], models["R4"])
        assert prediction.outcome == "label"
        assert prediction.label == 0
        assert prediction.applicable_triples > 0
        assert prediction.votes == {"0": prediction.applicable_triples}

    def test_known_triple_is_applicable(self, models):
        ds = dataset_from_function(named("xor3"), unknown=[(0, 0, 0)])
        prediction = aip_predict(ds, (0, 0, 0), models["R4"], models["R4"], strategy="first")
        a, b, c = (ds.records[i].x for i in prediction.provenance)
        for column in zip(a, b, c, (0, 0, 0)):
            assert models["R4"].holds(*column)
        assert prediction.label == 0

    def test_affine_target_is_recovered(self, models):
        f = named("xor3")
        for point in product((0, 1), repeat=3):
            ds = dataset_from_function(f, unknown=[point])
            prediction = aip_predict(ds, point, models["R4"], models["R4"])
            assert prediction.label == f(*point)

    def test_tie(self, models):
        full = AnalogyModel("FULL", Relation.full(4))
        with pytest.raises(TieError) as e:
            aip_predict(tie_dataset(), (1, 1), full, models["R1"])
        assert e.value.votes == {"0": 6, "1": 6}
        assert e.value.applicable_triples == 8

    def test_first_strategy_breaks_tie(self, models):
        full = AnalogyModel("FULL", Relation.full(4))
        prediction = aip_predict(tie_dataset(), (1, 1), full, models["R1"], strategy="first")
        assert prediction.outcome == "label"
        assert prediction.votes == {"0": 6, "1": 6}
        # first triple is (record 0, record 0, record 0) with labels 1, 1, 1
        assert prediction.provenance == [0, 0, 0]
        assert prediction.label == 1

    def test_abstain(self, models):
        ds = Dataset(1, (Record((1,), 1),))
        prediction = aip_predict(ds, (0,), models["R4"], models["R4"])
        assert prediction.abstained
        assert prediction.label is None
        assert prediction.applicable_triples == 0

    def test_known_query(self, models):
        ds = Dataset(1, (Record((0,), 1),))
        with pytest.raises(InputError):
            aip_predict(ds, (0,), models["R4"], models["R4"])
        prediction = aip_predict(ds, (0,), models["R4"], models["R4"], allow_known=True)
        assert prediction.label == 1

    @pytest.mark.parametrize("query, strategy", [((0, 1, 0), "majority"), ((0, 2), "majority"),
                                                 ((0, 1), "vote")])
    def test_invalid_input(self, models, query, strategy):
        with pytest.raises(InputError):
            aip_predict(tie_dataset(), query, models["R4"], models["R4"], strategy=strategy)

    def test_predict_unknown_records_ties(self, models):
        full = AnalogyModel("FULL", Relation.full(4))
        batch = predict_unknown(tie_dataset(), full, models["R1"])
        assert [p.outcome for p in batch.predictions] == ["tie"]
        tie = batch.predictions[0]
        assert tie.votes == {"0": 6, "1": 6}
        assert tie.applicable_triples == 8
        assert batch.src == "FULL" and batch.dst == "R1"

    def test_predict_unknown_labels(self, models):
        ds = dataset_from_function(named("xor"), unknown=[(1, 1)])
        batch = predict_unknown(ds, models["R5"], models["R5"])
        assert [(p.query, p.label) for p in batch.predictions] == [([1, 1], 0)]

    def test_write_report(self, models):
        batch = predict_unknown(tie_dataset(), AnalogyModel("FULL", Relation.full(4)), models["R1"])
        data = json.loads(write_report(batch))
        assert data["predictions"][0]["outcome"] == "tie"
        report = json.loads(write_report(error_rate(named("and"), models["R4"], models["R4"])))
        assert report["function"] == "2:8"
        assert "rate_exact" in report
