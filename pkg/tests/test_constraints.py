import random

import pytest

from conftest import SHORTAGE, TICKET, random_database
from cyclemine.constraints import (
    AggregateConstraint,
    ConstraintSet,
    aggregate_satisfied,
    parse_aggregate,
    rule_form_allows,
    universe_allows,
)
from cyclemine.temporal_db import parse_transactions


class TestConstraintSet:
    def test_wildcards(self):
        cs = ConstraintSet.unconstrained()
        assert cs.is_unconstrained
        assert cs.universe is None

    def test_universe_union(self):
        cs = ConstraintSet(premise_items=frozenset({0}), conclusion_items=frozenset({1, 2}))
        assert cs.universe == {0, 1, 2}

    def test_non_wildcard_must_be_non_empty(self):
        with pytest.raises(ValueError):
            ConstraintSet(premise_items=frozenset())

    def test_overlapping_pools_allowed(self):
        cs = ConstraintSet(premise_items=frozenset({1}), conclusion_items=frozenset({1}))
        assert cs.universe == {1}


class TestUniverseAllows:
    def test_wildcard_absorbs(self):
        cs = ConstraintSet(conclusion_items=frozenset({SHORTAGE}))
        assert universe_allows({TICKET, SHORTAGE}, cs)

    def test_item_outside_pools(self):
        cs = ConstraintSet(
            premise_items=frozenset({TICKET}), conclusion_items=frozenset({SHORTAGE})
        )
        assert not universe_allows({2}, cs)

    def test_both_wildcard(self):
        assert universe_allows({5, 6, 7}, ConstraintSet.unconstrained())

    def test_anti_monotone(self):
        rng = random.Random(13)
        for _ in range(100):
            prm = frozenset(rng.sample(range(8), rng.randint(1, 4)))
            cl = frozenset(rng.sample(range(8), rng.randint(1, 4)))
            cs = ConstraintSet(premise_items=prm, conclusion_items=cl)
            base = frozenset(rng.sample(range(8), rng.randint(1, 5)))
            if not universe_allows(base, cs):
                extra = rng.randrange(8)
                assert not universe_allows(base | {extra}, cs)


class TestRuleFormAllows:
    def test_worked_constraint(self):
        cs = ConstraintSet(conclusion_items=frozenset({SHORTAGE}))
        assert rule_form_allows({TICKET}, {SHORTAGE}, cs)
        assert not rule_form_allows({SHORTAGE}, {TICKET}, cs)

    def test_wildcards_allow_all(self):
        cs = ConstraintSet.unconstrained()
        assert rule_form_allows({1, 2}, {3}, cs)

    def test_implies_universe(self):
        rng = random.Random(29)
        for _ in range(100):
            prm = frozenset(rng.sample(range(8), rng.randint(1, 4)))
            cl = frozenset(rng.sample(range(8), rng.randint(1, 4)))
            cs = ConstraintSet(premise_items=prm, conclusion_items=cl)
            premise = frozenset(rng.sample(range(8), rng.randint(1, 3)))
            conclusion = frozenset(rng.sample(range(8), rng.randint(1, 3))) - premise
            if conclusion and rule_form_allows(premise, conclusion, cs):
                assert universe_allows(premise | conclusion, cs)


class TestAggregates:
    def test_parse_grammar(self):
        ac = parse_aggregate("SUM(0)>=1")
        assert ac == AggregateConstraint("SUM", 0, ">=", 1.0)
        assert parse_aggregate(" avg( 3 ) < 2.5 ") == AggregateConstraint("AVG", 3, "<", 2.5)

    @pytest.mark.parametrize("bad", ["SUM(0)", "COUNT(1)>=1", "SUM(x)>=1", "SUM(1)=>2"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_aggregate(bad)

    def test_str_roundtrip(self):
        ac = parse_aggregate("MAX(7)<=3")
        assert parse_aggregate(str(ac)) == ac

    def test_sum_over_rule_support(self, failures_db):
        ac = parse_aggregate("SUM(0)>=1")
        assert aggregate_satisfied({TICKET}, {SHORTAGE}, failures_db, ac)
        assert not aggregate_satisfied(
            {TICKET}, {SHORTAGE}, failures_db, parse_aggregate("SUM(0)>=5")
        )
        # the four supporting transactions each carry one ticket
        assert aggregate_satisfied({TICKET}, {SHORTAGE}, failures_db, parse_aggregate("SUM(0)=4"))

    def test_missing_item_contributes_zero_to_sum(self):
        db = parse_transactions("0:3 1\n1\n1\n", "fimi_quantified")
        # supporting set of {1} is all three transactions; only one has item 0
        assert aggregate_satisfied({1}, set(), db, parse_aggregate("SUM(0)=3"))
        assert aggregate_satisfied({1}, set(), db, parse_aggregate("AVG(0)=1"))

    def test_min_max_skip_missing(self):
        db = parse_transactions("0:3 1\n1\n0:7 1\n", "fimi_quantified")
        assert aggregate_satisfied(set(), {1}, db, parse_aggregate("MIN(0)=3"))
        assert aggregate_satisfied(set(), {1}, db, parse_aggregate("MAX(0)=7"))

    def test_empty_support_set(self, failures_db):
        # newsprint and hard drive co-occur only in transaction 3; pair with
        # ticket they never co-occur
        assert not aggregate_satisfied(
            {TICKET}, {2, 3}, failures_db, parse_aggregate("MIN(0)>=0")
        )
        assert aggregate_satisfied({TICKET}, {2, 3}, failures_db, parse_aggregate("SUM(0)=0"))
        assert aggregate_satisfied({TICKET}, {2, 3}, failures_db, parse_aggregate("AVG(0)=0"))

    def test_unknown_target_item(self, failures_db):
        with pytest.raises(ValueError, match="target item"):
            aggregate_satisfied({TICKET}, {SHORTAGE}, failures_db, parse_aggregate("SUM(9)>=1"))

    def test_tiny_threshold_accepts_any_nonempty_support(self):
        rng = random.Random(43)
        for _ in range(30):
            db = random_database(rng)
            if db is None:
                continue
            items = sorted(db.item_ids)
            target = rng.choice(items)
            joint = {rng.choice(items)}
            if db.count_support(frozenset(joint)) == 0:
                continue
            ac = AggregateConstraint("SUM", target, ">=", -1e9)
            assert aggregate_satisfied(joint, set(), db, ac)
