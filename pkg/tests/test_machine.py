import json
from fractions import Fraction

import pytest

from nibbletape import machine
from nibbletape.machine import (EXACT_BIT3, LITERAL_EQ3, CapacityError, Genome,
                                TmConfig, TuringSpec, arithmetize_spec,
                                cell_color, cell_motion, cell_state, correction,
                                expand_rule, fixed_point_ratio, is_usable,
                                pack_cell, run_direct, step_direct,
                                wolfram23_spec)

TABLE1 = (0, 1, 13, 13, 6, 6, 4, 4, 8, 9, 6, 6, 15, 15, 3, 3)


class TestSpec:
    def test_rule_lookups(self, spec):
        assert spec.rules[("A", 0)] == ("B", 1, "R")
        assert spec.rules[("C", 1)] == ("A", 0, "R")
        assert spec.rules[("B", 0)] == ("C", 0, "L")

    def test_total(self):
        rules = dict(wolfram23_spec().rules)
        del rules[("B", 1)]
        with pytest.raises(ValueError):
            TuringSpec(("A", "B", "C"), (0, 1), rules)

    def test_no_stay_moves(self):
        rules = dict(wolfram23_spec().rules)
        rules[("B", 1)] = ("C", 1, "S")
        with pytest.raises(ValueError):
            TuringSpec(("A", "B", "C"), (0, 1), rules)


class TestCellPacking:
    def test_pack_roundtrip(self):
        for v in range(16):
            assert pack_cell(cell_motion(v), cell_color(v), cell_state(v)) == v

    def test_usable_partition(self):
        assert sorted(machine.IDLE_VALUES) == [0, 1, 8, 9]
        assert len(machine.USABLE_VALUES) == 12
        for v in machine.IDLE_VALUES:
            assert not is_usable(v)
        for v in machine.USABLE_VALUES:
            assert is_usable(v)


class TestGenome:
    def test_table1_exact(self, genome):
        assert genome.entries == TABLE1

    def test_specific_rows(self, genome):
        assert genome.entries[2] == genome.entries[3] == 13
        assert genome.entries[8] == 8

    def test_motion_indifference(self, genome):
        for k in range(8):
            if 2 * k in machine.IDLE_VALUES:
                continue
            assert genome.entries[2 * k] == genome.entries[2 * k + 1]

    def test_usable_closure(self, genome):
        for v in machine.USABLE_VALUES:
            assert is_usable(genome.entries[v])

    def test_invariant_validation(self):
        bad = list(TABLE1)
        bad[0] = 5  # idle row must stay fixed
        with pytest.raises(ValueError):
            Genome(tuple(bad))
        bad = list(TABLE1)
        bad[2] = 15  # breaks the (2,3) pairing
        with pytest.raises(ValueError):
            Genome(tuple(bad))
        bad = list(TABLE1)
        bad[2] = bad[3] = 8  # usable input may not go idle
        with pytest.raises(ValueError):
            Genome(tuple(bad))

    def test_capacity_error(self):
        rules = {}
        for color in "ABCD":
            for state in (0, 1):
                rules[(color, state)] = ("A", 0, "L")
        with pytest.raises(CapacityError):
            arithmetize_spec(TuringSpec(tuple("ABCD"), (0, 1), rules))

    def test_two_color_machine_arithmetizes(self):
        rules = {
            ("A", 0): ("B", 1, "R"),
            ("B", 0): ("A", 0, "L"),
            ("A", 1): ("A", 1, "R"),
            ("B", 1): ("B", 0, "L"),
        }
        genome = arithmetize_spec(TuringSpec(("A", "B"), (0, 1), rules))
        # color-3 inputs have no rule row and stay inert
        assert genome.entries[6] == genome.entries[7] == 6
        assert genome.entries[14] == genome.entries[15] == 14


class TestCorrection:
    def test_examples(self):
        assert correction(3, 12, EXACT_BIT3) == 1
        assert correction(3, 12, LITERAL_EQ3) == 1
        assert correction(5, 5, EXACT_BIT3) == 0
        assert correction(5, 5, LITERAL_EQ3) == 0
        assert correction(7, 10, EXACT_BIT3) == 1
        assert correction(7, 10, LITERAL_EQ3) == 0

    def test_divergence_set(self):
        diverging = {
            (x, y)
            for x in range(16) for y in range(16)
            if correction(x, y, EXACT_BIT3) != correction(x, y, LITERAL_EQ3)
        }
        expected = {
            (x, y)
            for x in range(16) for y in range(16)
            if cell_state(x) != cell_state(y) and abs(x - y) <= 7
        }
        assert diverging == expected
        assert len(diverging) == 56

    def test_exact_transfers_control_bit(self):
        for x in range(16):
            for y in range(16):
                shifted = x + 8 * correction(x, y, EXACT_BIT3)
                assert cell_state(shifted) == cell_state(y)
                assert cell_color(shifted) == cell_color(x)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            correction(1, 2, "nope")


class TestExpandedRule:
    def test_identity_law_both_modes(self, genome):
        for mode in (EXACT_BIT3, LITERAL_EQ3):
            rule = expand_rule(genome, mode)
            for x in range(16):
                assert rule.entries[x + 16 * x] == genome.entries[x]

    def test_examples(self, rule):
        assert rule.entries[2 + 16 * 2] == 13
        assert rule.entries[2 + 16 * 10] == 6
        assert rule.entries[13 + 16 * 6] == 6

    def test_usable_closure_exact(self, rule):
        for x in machine.USABLE_VALUES:
            for y in range(16):
                assert is_usable(rule.entries[x + 16 * y])

    def test_no_clamping_either_mode(self, rule, rule_literal):
        assert rule.clamp_events == 0
        assert rule_literal.clamp_events == 0

    def test_table_bytes(self, rule):
        assert rule.table_bytes() == bytes(rule.entries)


class TestFixedPointRatio:
    def test_wolfram(self, genome):
        assert fixed_point_ratio(genome) == Fraction(1, 4)

    def test_identity_map(self):
        assert fixed_point_ratio(range(16)) == 1

    def test_lower_bound(self, genome):
        assert fixed_point_ratio(genome) >= Fraction(1, 4)


class TestSerialization:
    def test_genome_doc(self, genome):
        doc = machine.genome_to_doc(genome)
        assert doc == {"base": 16, "entries": list(TABLE1), "mode": None}
        assert machine.genome_from_doc(doc).entries == genome.entries

    def test_rule_doc_roundtrip(self, rule):
        doc = json.loads(machine.doc_to_json(machine.rule_to_doc(rule)))
        back = machine.rule_from_doc(doc)
        assert back.entries == rule.entries and back.mode == rule.mode

    def test_byte_stable(self, genome):
        a = machine.doc_to_json(machine.genome_to_doc(genome))
        b = machine.doc_to_json(machine.genome_to_doc(genome))
        assert a == b and a.endswith("\n")

    def test_doc_validation(self):
        with pytest.raises(ValueError):
            machine.genome_from_doc({"base": 10, "entries": list(TABLE1)})


class TestDirectSimulation:
    def test_step_examples(self, spec):
        cfg = TmConfig(head_state=0, head_index=0, colors={0: "A"})
        nxt = step_direct(cfg, spec)
        assert (nxt.colors[0], nxt.head_state, nxt.head_index) == ("B", 1, 1)
        cfg = TmConfig(head_state=1, head_index=5, colors={5: "C"})
        nxt = step_direct(cfg, spec)
        assert (nxt.colors[5], nxt.head_state, nxt.head_index) == ("A", 0, 6)

    def test_blank_default(self, spec):
        cfg = TmConfig(head_state=0, head_index=3)
        nxt = step_direct(cfg, spec)
        assert nxt.colors[3] == "B"  # read the blank A

    def test_run_direct(self, spec):
        cfg = TmConfig(head_state=0, head_index=0)
        out = run_direct(cfg, spec, 50)
        assert len(out.colors) >= 1

    def test_packed_runner_matches_step_direct(self, spec):
        colors = [1, 1, 1]  # A A A, periodic length 3
        out = bytearray(4 * 7)
        state, head = machine.run_direct_packed(colors, 0, 0, spec, 7, out)
        # same run through step_direct, folding the head onto the ring
        # before every step so writes always land in 0..2
        cfg = TmConfig(head_state=0, head_index=0,
                       colors={0: "A", 1: "A", 2: "A"})
        number = {"A": 1, "B": 2, "C": 3}
        for k in range(7):
            nxt = step_direct(cfg, spec)
            assert out[4 * k] == cfg.head_index
            assert out[4 * k + 1] == number[nxt.colors[cfg.head_index]]
            assert out[4 * k + 2] == nxt.head_state
            cfg = TmConfig(nxt.head_state, nxt.head_index % 3, nxt.colors)
            assert out[4 * k + 3] == cfg.head_index
        assert colors == [number[cfg.colors[i]] for i in range(3)]
        assert state == cfg.head_state
        assert head == cfg.head_index
