"""
Unit Tests for end-structure oracle runs, projections and family invariants
"""

import pytest

EXAMPLE_ES_BLOCKS = [
    {"c1", "c4", "s13", "s21", "s52"},
    {"c2", "c5", "s12", "s32"},
    {"c3", "c6", "s11", "s14", "s22", "s23"},
    {"s31", "s42", "s43", "s44"},
    {"s41", "s51", "s53"},
]


class TestEndStructurePartition:
    """Tests for the oracle-updated initial partition."""

    @pytest.mark.parametrize("k", [3, 4, 5])
    def test_bisplitter_has_four_blocks(self, k):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import end_structure_partition

        n = 2 ** k
        half = n // 2
        expected = Partition.from_blocks(
            [[0], range(1, half), [half], range(half + 1, n)], n
        )
        assert end_structure_partition(gen_bisplitter(k)) == expected

    def test_roberts_example_five_blocks(self):
        from bisim_lab.modules.families.service import gen_roberts_example
        from bisim_lab.modules.oracle_es.service import end_structure_partition

        lts = gen_roberts_example()
        pi = end_structure_partition(lts)
        got = sorted(sorted(lts.state_name(s) for s in block) for block in pi.members)
        assert got == sorted(sorted(block) for block in EXAMPLE_ES_BLOCKS)

    def test_roberts_example_meet_of_initial_and_es_classes(self):
        """The initial partition refined by the cycle classes gives the same five blocks."""
        from bisim_lab.modules.families.service import gen_roberts_example
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.lts_core.service import bisimilarity_oracle, common_refinement
        from bisim_lab.modules.oracle_es.service import end_structure_partition

        lts = gen_roberts_example()
        oracle = bisimilarity_oracle(lts)
        cycle = {lts.state_by_name(f"c{i}") for i in range(1, 7)}
        cycle_classes = {int(oracle.block_of[s]) for s in cycle}
        labels = [int(oracle.block_of[s]) if int(oracle.block_of[s]) in cycle_classes else -1
                  for s in range(lts.state_count)]
        es = Partition.from_labels(labels)
        assert common_refinement(lts.initial_partition, es) == end_structure_partition(lts, oracle)

    def test_all_states_in_end_structures(self):
        """A pure cycle gives the full bisimilarity partition."""
        from bisim_lab.modules.lts_core.models import Lts, Partition
        from bisim_lab.modules.lts_core.service import bisimilarity_oracle
        from bisim_lab.modules.oracle_es.service import end_structure_partition

        lts = Lts(4, ["a"], [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 0)], Partition([0, 1, 0, 1]))
        assert end_structure_partition(lts) == bisimilarity_oracle(lts)


class TestOracleRuns:
    """Tests for run_with_oracle."""

    @pytest.mark.parametrize("k", range(4, 9))
    def test_bisplitter_oracle_bound(self, k):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.refinement.service import oracle_bisplitter_bound, verify_trace
        from bisim_lab.modules.oracle_es.service import run_with_oracle

        lts = gen_bisplitter(k)
        run = run_with_oracle(lts)
        assert run.updated_partition.block_count == 4
        assert run.trace.total_irc >= oracle_bisplitter_bound(k)
        assert verify_trace(lts, run.trace, expect_start=run.updated_partition).ok

    @pytest.mark.slow
    @pytest.mark.parametrize("k", [9, 10])
    def test_bisplitter_oracle_bound_large(self, k):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.refinement.service import oracle_bisplitter_bound
        from bisim_lab.modules.oracle_es.service import run_with_oracle

        run = run_with_oracle(gen_bisplitter(k))
        assert run.trace.total_irc >= oracle_bisplitter_bound(k)

    def test_layered_oracle_bound(self):
        """An oracle run on C_5 costs at least the layered bound of C_3."""
        from bisim_lab.modules.families.service import gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.service import run_with_oracle
        from bisim_lab.modules.refinement.service import layered_bound, trace_costs, verify_trace

        lts = gen_layered_bisplitter(5)
        run = run_with_oracle(lts)
        assert verify_trace(lts, run.trace, expect_start=run.updated_partition).ok
        report = trace_costs(lts, run.trace, oracle=True)
        [check] = report.bound_checks
        assert check.name == "layered-oracle-lower-bound"
        assert check.theoretical == layered_bound(3) == 64
        assert check.measured == run.trace.total_irc
        assert check.passed

    def test_small_layered_oracle_run_reports_no_bound(self):
        from bisim_lab.modules.families.service import gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.service import run_with_oracle
        from bisim_lab.modules.refinement.service import trace_costs

        lts = gen_layered_bisplitter(4)
        assert trace_costs(lts, run_with_oracle(lts).trace, oracle=True).bound_checks == []

    def test_oracle_classes_counted_separately(self):
        from bisim_lab.modules.families.service import gen_roberts_example
        from bisim_lab.modules.oracle_es.service import run_with_oracle

        run = run_with_oracle(gen_roberts_example())
        assert run.oracle_classes == 3
        assert run.updated_partition.block_count == 5


class TestProjections:
    """Tests for the prefix-11 and level projections."""

    def test_prefix11_of_singletons(self):
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import project_prefix11

        assert project_prefix11(Partition.singletons(32), 5) == Partition.singletons(8)

    def test_prefix11_block_becomes_unit(self):
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import project_prefix11

        pi = Partition([0] * 16 + [1] * 8 + [2] * 8)
        assert project_prefix11(pi, 5) == Partition.unit(8)

    def test_prefix11_needs_k_above_two(self):
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import project_prefix11
        from bisim_lab.shared.exceptions import InputError

        with pytest.raises(InputError):
            project_prefix11(Partition.unit(4), 2)

    @pytest.mark.parametrize("strategy", ["single-splitter", "full-signature"])
    @pytest.mark.parametrize("k", [4, 5])
    def test_oracle_trace_projects_to_valid_bisplitter_sequence(self, k, strategy):
        """The projection of an oracle run on B_k is a costed valid run on B_(k-2)."""
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.lts_core.service import trace_from_partitions
        from bisim_lab.modules.oracle_es.service import project_trace_prefix11, run_with_oracle
        from bisim_lab.modules.refinement.service import bisplitter_cost, verify_trace

        run = run_with_oracle(gen_bisplitter(k), strategy)
        projected = project_trace_prefix11(run.trace, k)
        smaller = gen_bisplitter(k - 2)
        assert projected.initial == Partition.unit(1 << (k - 2))
        assert projected.partitions[1] == smaller.initial_partition
        tail = trace_from_partitions(projected.partitions[1:])
        assert verify_trace(smaller, tail).ok
        assert run.trace.total_irc >= projected.total_irc >= tail.total_irc == bisplitter_cost(k - 2)

    def test_level_projection_of_initial_partition(self):
        from bisim_lab.modules.families.service import gen_bisplitter, gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.service import project_level

        lts = gen_layered_bisplitter(3)
        for level in (1, 4, 8):
            assert project_level(lts.initial_partition, level) == gen_bisplitter(3).initial_partition

    def test_level_out_of_range(self):
        from bisim_lab.modules.families.service import gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.service import project_level
        from bisim_lab.shared.exceptions import InputError

        lts = gen_layered_bisplitter(3)
        with pytest.raises(InputError):
            project_level(lts.initial_partition, 9)

    def test_layered_trace_projects_to_valid_bisplitter_sequence(self):
        from bisim_lab.modules.families.service import gen_bisplitter, gen_layered_bisplitter
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import project_trace_level
        from bisim_lab.modules.refinement.service import run_to_stable, verify_trace

        lts = gen_layered_bisplitter(3)
        trace = run_to_stable(lts)
        b3 = gen_bisplitter(3)
        for level in range(1, 9):
            projected = project_trace_level(trace, level, 3)
            assert projected.final == Partition.singletons(8)
            assert trace.total_irc >= projected.total_irc
        assert verify_trace(b3, project_trace_level(trace, 1, 3)).ok

    @pytest.mark.parametrize("strategy", ["single-splitter", "full-signature"])
    def test_level_projections_fit_inside_the_layered_cost(self, strategy):
        """Every level projects to a valid B_3 run and the level costs sum to at most the C_3 cost."""
        from bisim_lab.modules.families.service import gen_bisplitter, gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.service import project_trace_level
        from bisim_lab.modules.refinement.service import bisplitter_cost, run_to_stable, verify_trace

        trace = run_to_stable(gen_layered_bisplitter(3), strategy)
        b3 = gen_bisplitter(3)
        projections = [project_trace_level(trace, level, 3) for level in range(1, 9)]
        for projected in projections:
            assert verify_trace(b3, projected).ok
            assert projected.total_irc == bisplitter_cost(3)
        assert sum(p.total_irc for p in projections) <= trace.total_irc

    def test_dedupe(self):
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.service import dedupe_partitions

        a, b = Partition.unit(2), Partition.singletons(2)
        assert dedupe_partitions([a, a, b, b]) == [a, b]


class TestFamilyInvariants:
    """Tests for the runtime family laws."""

    @pytest.mark.parametrize("strategy", ["single-splitter", "full-signature"])
    @pytest.mark.parametrize("k", range(2, 9))
    def test_bisplitter_traces_keep_prefix_blocks(self, k, strategy):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.oracle_es.invariants import check_family_invariants
        from bisim_lab.modules.refinement.service import run_to_stable

        lts = gen_bisplitter(k)
        assert check_family_invariants(lts, run_to_stable(lts, strategy)) == []

    @pytest.mark.parametrize("strategy", ["single-splitter", "full-signature"])
    @pytest.mark.parametrize("k", [3, 4])
    def test_layered_traces_separate_downwards(self, k, strategy):
        from bisim_lab.modules.families.service import gen_layered_bisplitter
        from bisim_lab.modules.oracle_es.invariants import check_family_invariants
        from bisim_lab.modules.refinement.service import run_to_stable

        lts = gen_layered_bisplitter(k)
        assert check_family_invariants(lts, run_to_stable(lts, strategy)) == []

    @pytest.mark.parametrize("strategy", ["single-splitter", "full-signature"])
    def test_sequential_trace_is_canonical(self, strategy):
        from bisim_lab.modules.families.service import generate
        from bisim_lab.modules.oracle_es.invariants import check_family_invariants
        from bisim_lab.modules.refinement.service import run_to_stable

        lts = generate("seqsplit", n=9)
        assert check_family_invariants(lts, run_to_stable(lts, strategy)) == []

    def test_non_binary_split_is_flagged(self):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.lts_core.service import trace_from_partitions
        from bisim_lab.modules.oracle_es.invariants import check_family_invariants

        lts = gen_bisplitter(3)
        bad = trace_from_partitions([lts.initial_partition, Partition([0, 1, 2, 2, 3, 3, 3, 3])])
        assert check_family_invariants(lts, bad)

    def test_sequential_canonical_sequence(self):
        from bisim_lab.modules.lts_core.models import Partition
        from bisim_lab.modules.oracle_es.invariants import sequential_canonical

        seq = sequential_canonical(4)
        assert seq == [Partition([0, 0, 0, 1]), Partition([0, 0, 1, 2]), Partition.singletons(4)]

    def test_unrecognized_lts_has_no_laws(self):
        from bisim_lab.modules.lts_core.models import Lts, Partition
        from bisim_lab.modules.oracle_es.invariants import check_family_invariants
        from bisim_lab.modules.refinement.service import run_to_stable

        lts = Lts(3, ["a"], [(0, 0, 1)], Partition.unit(3))
        assert check_family_invariants(lts, run_to_stable(lts)) == []


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
