import random

import pytest

from cyclemine.cycles import (
    Cycle,
    CycleCandidateSet,
    OccurrenceSequence,
    cyclic_offsets,
    detect_cycles_exhaustive,
    eliminate,
    eliminate_sweep,
    is_cyclic,
    minimal_cycles,
    prune_candidates,
    units_to_scan,
)

SHORTAGE_BITS = (1, 1, 1, 1, 0, 1, 1, 1)  # absent only in unit 4


def seq(bits) -> OccurrenceSequence:
    return OccurrenceSequence(tuple(bits))


class TestCycle:
    def test_offset_bounds(self):
        Cycle(3, 2)
        with pytest.raises(ValueError):
            Cycle(3, 3)
        with pytest.raises(ValueError):
            Cycle(0, 0)
        with pytest.raises(ValueError):
            Cycle(2, -1)

    def test_render(self):
        assert str(Cycle(2, 1)) == "(l=2, o=1)"

    def test_units(self):
        assert list(Cycle(3, 1).units(10)) == [1, 4, 7]


class TestDetectExhaustive:
    def test_all_ones_saturates(self):
        found = detect_cycles_exhaustive(seq([1] * 8), 1, 4)
        assert len(found) == 1 + 2 + 3 + 4

    def test_shortage_sequence(self):
        found = detect_cycles_exhaustive(seq(SHORTAGE_BITS), 1, 4)
        assert Cycle(2, 1) in found
        assert Cycle(2, 0) not in found
        assert Cycle(1, 0) not in found

    def test_all_zeros(self):
        assert detect_cycles_exhaustive(seq([0] * 8), 1, 4) == set()

    def test_l_max_limit(self):
        with pytest.raises(ValueError, match="repeat at least twice"):
            detect_cycles_exhaustive(seq([1] * 8), 1, 5)
        with pytest.raises(ValueError):
            detect_cycles_exhaustive(seq([1] * 8), 3, 2)


class TestMinimalCycles:
    def test_drops_residue_classes_of_shorter_cycle(self):
        got = minimal_cycles({Cycle(2, 1), Cycle(4, 1), Cycle(4, 3)})
        assert got == {Cycle(2, 1)}

    def test_keeps_incomparable(self):
        cycles = {Cycle(2, 0), Cycle(3, 0)}
        assert minimal_cycles(cycles) == cycles

    def test_empty(self):
        assert minimal_cycles(set()) == set()

    def test_idempotent_and_same_cover(self):
        rng = random.Random(17)
        for _ in range(200):
            cycles = {
                Cycle(l, rng.randrange(l))
                for l in (rng.randint(1, 8) for _ in range(rng.randint(0, 6)))
            }
            reduced = minimal_cycles(cycles)
            assert minimal_cycles(reduced) == reduced
            for window in (16, 24):
                cover = lambda cs: {u for c in cs for u in c.units(window)}
                assert cover(cycles) == cover(reduced)


class TestEliminate:
    def test_zero_bit_kills_covering(self):
        cands = CycleCandidateSet(frozenset({Cycle(2, 0), Cycle(2, 1)}), 2)
        got = eliminate(cands, unit=4, bit=0)
        assert got.live == {Cycle(2, 1)}

    def test_one_bit_keeps_everything(self):
        cands = CycleCandidateSet(frozenset({Cycle(2, 0), Cycle(2, 1)}), 2)
        assert eliminate(cands, unit=4, bit=1) is cands

    def test_empty_stays_empty(self):
        cands = CycleCandidateSet(frozenset(), 4)
        assert eliminate(cands, 0, 0).live == frozenset()


class TestPruneCandidates:
    def test_intersection(self):
        got = prune_candidates([{Cycle(2, 1), Cycle(3, 0)}, {Cycle(2, 1)}], 4)
        assert got.live == {Cycle(2, 1)}

    def test_idempotent(self):
        s = {Cycle(2, 1), Cycle(4, 0)}
        assert prune_candidates([s, s], 4).live == frozenset(s)

    def test_disjoint(self):
        assert prune_candidates([{Cycle(2, 0)}, {Cycle(2, 1)}], 4).live == frozenset()

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            prune_candidates([], 4)

    def test_l_max_filter(self):
        got = prune_candidates([{Cycle(2, 1), Cycle(6, 0)}], 4)
        assert got.live == {Cycle(2, 1)}


class TestUnitsToScan:
    def test_residue_expansion(self):
        cands = CycleCandidateSet(frozenset({Cycle(2, 1)}), 4)
        assert units_to_scan(cands, 8) == [1, 3, 5, 7]

    def test_length_one_covers_everything(self):
        cands = CycleCandidateSet(frozenset({Cycle(1, 0)}), 1)
        assert units_to_scan(cands, 5) == [0, 1, 2, 3, 4]

    def test_empty(self):
        assert units_to_scan(CycleCandidateSet(frozenset(), 4), 8) == []


class TestIsCyclic:
    def test_worked_occurrences(self):
        assert is_cyclic({1, 3, 5, 7}, 2, 8)

    def test_newsprint_style_rejected(self):
        assert not is_cyclic({2, 3}, 2, 8)

    def test_all_units(self):
        assert is_cyclic(set(range(8)), 3, 8)

    def test_prefix_possibility_semantics(self):
        # unobserved residue classes stay possible without the repeat requirement
        assert not is_cyclic({0}, 2, 1)
        assert is_cyclic({0}, 2, 1, require_repeats=False)
        assert is_cyclic(set(), 3, 2, require_repeats=False)
        assert not is_cyclic(set(), 3, 2)

    def test_matches_exhaustive_detection(self):
        rng = random.Random(23)
        for _ in range(300):
            units = rng.randint(2, 40)
            length = rng.randint(1, units // 2)
            occ = {u for u in range(units) if rng.random() < 0.6}
            sequence = OccurrenceSequence.from_units(occ, units)
            expected = bool(detect_cycles_exhaustive(sequence, length, length))
            assert is_cyclic(occ, length, units) == expected

    def test_cyclic_offsets_values(self):
        assert cyclic_offsets({1, 3, 5, 7}, 2, 8) == {1}
        assert cyclic_offsets(set(range(8)), 2, 8) == {0, 1}


class TestEliminateSweepOracle:
    def test_small_corpus_equivalence(self):
        rng = random.Random(31)
        for _ in range(300):
            units = rng.randint(2, 64)
            l_max = max(1, min(16, units // 2))
            bits = tuple(rng.randint(0, 1) for _ in range(units))
            s = seq(bits)
            assert eliminate_sweep(s, 1, l_max) == detect_cycles_exhaustive(s, 1, l_max)

    def test_skipping_is_sound(self):
        # bits at skipped units never matter: flipping them leaves the result alone
        rng = random.Random(37)
        for _ in range(100):
            units = rng.randint(4, 32)
            l_min = rng.randint(1, max(1, units // 4))
            l_max = rng.randint(l_min, units // 2)
            bits = [rng.randint(0, 1) for _ in range(units)]
            baseline = eliminate_sweep(seq(bits), l_min, l_max)
            scanned = set(
                units_to_scan(CycleCandidateSet.full_range(l_min, l_max), units)
            )
            flipped = [
                b if u in scanned else 1 - b for u, b in enumerate(bits)
            ]
            assert eliminate_sweep(seq(flipped), l_min, l_max) == baseline

    def test_subset_cycles_contain_superset_cycles(self):
        # AND-ing two occurrence sequences can only lose cycles
        rng = random.Random(41)
        for _ in range(100):
            units = rng.randint(4, 40)
            a = [rng.randint(0, 1) for _ in range(units)]
            b = [rng.randint(0, 1) for _ in range(units)]
            both = [x & y for x, y in zip(a, b)]
            l_max = units // 2
            joint = detect_cycles_exhaustive(seq(both), 1, l_max)
            assert joint <= detect_cycles_exhaustive(seq(a), 1, l_max)
            assert joint <= detect_cycles_exhaustive(seq(b), 1, l_max)


class TestOccurrenceSequence:
    def test_from_units_roundtrip(self):
        s = OccurrenceSequence.from_units({0, 2}, 4)
        assert s.bits == (1, 0, 1, 0)
        assert s.units() == {0, 2}

    def test_bad_units(self):
        with pytest.raises(ValueError):
            OccurrenceSequence.from_units({4}, 4)

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            OccurrenceSequence((0, 2))
        with pytest.raises(ValueError):
            OccurrenceSequence(())
