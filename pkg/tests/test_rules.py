import random
from itertools import combinations

import pytest

from conftest import SHORTAGE, TICKET, random_database
from cyclemine.constraints import ConstraintSet
from cyclemine.cycles import Cycle
from cyclemine.mining import ItemsetRecord, MiningParams, pcar
from cyclemine.rules import (
    CyclicRule,
    UndefinedConfidenceError,
    candidate_splits,
    confidence,
    generate_rules,
    rule_cycles,
)
from cyclemine.temporal_db import parse_transactions


class TestConfidence:
    def test_worked_values(self, failures_db):
        assert confidence({SHORTAGE}, {TICKET}, failures_db) == pytest.approx(4 / 7)
        assert confidence({TICKET}, {SHORTAGE}, failures_db) == 1.0
        assert confidence(set(), {SHORTAGE}, failures_db) == 0.875

    def test_zero_support_premise(self, failures_db):
        with pytest.raises(UndefinedConfidenceError):
            confidence({TICKET, 2, 3}, {SHORTAGE}, failures_db)

    def test_empty_conclusion_rejected(self, failures_db):
        with pytest.raises(ValueError):
            confidence({TICKET}, set(), failures_db)


class TestRuleCycles:
    def test_worked_record(self, failures_db):
        rec = ItemsetRecord(
            frozenset({TICKET, SHORTAGE}), 4, frozenset({1, 3, 5, 7}), frozenset()
        )
        assert rule_cycles(rec, 2, 8) == {Cycle(2, 1)}

    def test_saturated_record(self):
        rec = ItemsetRecord(frozenset({0}), 8, frozenset(range(8)), frozenset())
        assert rule_cycles(rec, 2, 8) == {Cycle(2, 0), Cycle(2, 1)}

    def test_non_cyclic_record(self):
        rec = ItemsetRecord(frozenset({0}), 2, frozenset({2, 3}), frozenset())
        assert rule_cycles(rec, 2, 8) == set()


class TestCandidateSplits:
    def test_pair_gives_two_directed_rules(self):
        got = candidate_splits(frozenset({1, 2}))
        assert set(got) == {
            (frozenset({1}), frozenset({2})),
            (frozenset({2}), frozenset({1})),
        }

    def test_empty_premise_only_for_singletons(self):
        assert candidate_splits(frozenset({5}), allow_empty_premise=True) == [
            (frozenset(), frozenset({5}))
        ]
        pair = candidate_splits(frozenset({1, 2}), allow_empty_premise=True)
        assert (frozenset(), frozenset({1, 2})) not in pair
        assert len(pair) == 2

    def test_singleton_without_flag_has_no_rules(self):
        assert candidate_splits(frozenset({5})) == []

    def test_triple(self):
        got = candidate_splits(frozenset({1, 2, 3}))
        assert len(got) == 6  # 3 singleton premises + 3 pair premises


def worked_records(db):
    params = MiningParams(minsupp=0.5, minconf=0.5, partitions=2, cycle_length=2)
    return pcar(db, params).records


class TestGenerateRules:
    def test_worked_constrained(self, failures_db):
        cs = ConstraintSet(conclusion_items=frozenset({SHORTAGE}))
        rules = generate_rules(worked_records(failures_db), failures_db, 0.5, cs)
        assert [(r.premise, r.conclusion) for r in rules] == [((TICKET,), (SHORTAGE,))]

    def test_worked_wildcard_with_empty_premises(self, failures_db):
        rules = generate_rules(
            worked_records(failures_db), failures_db, 0.5,
            ConstraintSet.unconstrained(), allow_empty_premise=True,
        )
        assert [(r.premise, r.conclusion, r.support, round(r.confidence, 4)) for r in rules] == [
            ((), (TICKET,), 0.5, 0.5),
            ((), (SHORTAGE,), 0.875, 0.875),
            ((TICKET,), (SHORTAGE,), 0.5, 1.0),
            ((SHORTAGE,), (TICKET,), 0.5, 0.5714),
        ]

    def test_empty_input(self, failures_db):
        assert generate_rules([], failures_db, 0.5, ConstraintSet.unconstrained()) == []

    def test_canonical_order(self, failures_db):
        rules = generate_rules(
            worked_records(failures_db), failures_db, 0.4,
            ConstraintSet.unconstrained(), allow_empty_premise=True,
        )
        keys = [(r.premise, r.conclusion) for r in rules]
        assert keys == sorted(keys)

    def test_matches_bruteforce_enumeration(self):
        rng = random.Random(71)
        checked = 0
        while checked < 40:
            db = random_database(rng)
            if db is None:
                continue
            checked += 1
            L = rng.randint(1, db.unit_count // 2)
            minconf = rng.choice([0.3, 0.5, 0.7])
            params = MiningParams(minsupp=0.3, minconf=minconf, partitions=1, cycle_length=L)
            out = pcar(db, params)
            got = {(r.premise, r.conclusion, r.support, r.confidence) for r in out.rules}
            # independent oracle: enumerate proper non-empty subsets directly
            expected = set()
            n = len(db)
            for rec in out.records:
                items = sorted(rec.itemset)
                for size in range(1, len(items)):
                    for prem in combinations(items, size):
                        concl = tuple(sorted(rec.itemset - set(prem)))
                        supp = db.count_support(rec.itemset) / n
                        conf = db.count_support(rec.itemset) / db.count_support(
                            frozenset(prem)
                        )
                        if conf >= minconf:
                            expected.add((tuple(prem), concl, supp, conf))
            assert got == expected

    def test_support_recomputes_exactly(self, failures_db):
        rules = generate_rules(
            worked_records(failures_db), failures_db, 0.5,
            ConstraintSet.unconstrained(), allow_empty_premise=True,
        )
        n = len(failures_db)
        for r in rules:
            assert r.support == failures_db.count_support(r.joint) / n
            assert r.confidence >= r.support


class TestCyclicRuleModel:
    def test_invariants(self):
        with pytest.raises(ValueError):
            CyclicRule((1,), (), 0.5, 0.5, (Cycle(2, 0),))
        with pytest.raises(ValueError):
            CyclicRule((1,), (1,), 0.5, 0.5, (Cycle(2, 0),))
        with pytest.raises(ValueError):
            CyclicRule((1,), (2,), 0.5, 0.5, ())

    def test_render(self):
        rule = CyclicRule((), (3,), 0.25, 0.25, (Cycle(2, 1),))
        assert "-> 3" in str(rule)
        assert "(l=2, o=1)" in str(rule)
