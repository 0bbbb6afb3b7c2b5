"""
Unit Tests for the family generators
"""

import pytest


def _edge(lts, src, action, dst):
    return (lts.state_by_name(src), lts.action_index(action), lts.state_by_name(dst)) in lts.transitions


class TestBitString:
    """Tests for 1-indexed bitstring helpers."""

    def test_indexing_and_value(self):
        from bisim_lab.modules.families.models import BitString

        s = BitString.parse("0110")
        assert s[1] == 0 and s[2] == 1
        assert s.value == 6
        assert str(s.sub(2, 3)) == "11"
        assert str(s.sub(3, 2)) == ""
        assert BitString.from_int(6, 4) == s

    def test_prefix_and_concat(self):
        from bisim_lab.modules.families.models import BitString

        assert BitString.parse("01").is_prefix_of(BitString.parse("0110"))
        assert str(BitString.parse("01") + BitString.parse("1")) == "011"

    def test_rejects_non_bits(self):
        from pydantic import ValidationError

        from bisim_lab.modules.families.models import BitString

        with pytest.raises(ValidationError):
            BitString(bits=(0, 2))


class TestTreeAddress:
    def test_bin_and_bfs_index(self):
        from bisim_lab.modules.families.models import TreeAddress

        assert TreeAddress(word="").bfs_index == 0
        assert TreeAddress(word="b").bfs_index == 2
        assert TreeAddress(word="ab").bin == 1
        assert TreeAddress(word="ab").bfs_index == 4


class TestBisplitter:
    """Tests for B_k."""

    def test_counts(self):
        from bisim_lab.modules.families.service import gen_bisplitter

        for k in range(1, 7):
            lts = gen_bisplitter(k)
            assert lts.state_count == 2 ** k
            assert lts.transition_count == (k - 1) * 2 ** k
            assert lts.deterministic or k == 1

    def test_documented_edges(self):
        """101 loops on a1 and moves to 110 on a2; 011 goes to 100 and 000."""
        from bisim_lab.modules.families.service import gen_bisplitter

        lts = gen_bisplitter(3)
        assert _edge(lts, "101", "a1", "101")
        assert _edge(lts, "101", "a2", "110")
        assert _edge(lts, "011", "a1", "100")
        assert _edge(lts, "011", "a2", "000")

    def test_initial_partition_is_first_bit(self):
        from bisim_lab.modules.families.service import gen_bisplitter

        lts = gen_bisplitter(3)
        assert lts.initial_partition.members == ((0, 1, 2, 3), (4, 5, 6, 7))

    def test_k_zero_is_rejected(self):
        from bisim_lab.modules.families.service import gen_bisplitter
        from bisim_lab.shared.exceptions import InputError

        with pytest.raises(InputError, match="k must be ≥ 1"):
            gen_bisplitter(0)


class TestLayeredBisplitter:
    """Tests for C_k."""

    @pytest.mark.parametrize("k,n", [(3, 72), (4, 304), (5, 1120), (6, 4544)])
    def test_sizes(self, k, n):
        """n = 2^k (2^k + 2^ceil(log(k-1)) - 1) and m = 2n."""
        from bisim_lab.modules.families.service import gen_layered_bisplitter, layered_state_count

        assert layered_state_count(k) == n
        if k <= 4:
            lts = gen_layered_bisplitter(k)
            assert lts.state_count == n
            assert lts.transition_count == 2 * n
            assert lts.deterministic

    def test_leaf_edges_k3(self):
        from bisim_lab.modules.families.service import gen_layered_bisplitter

        lts = gen_layered_bisplitter(3)
        assert _edge(lts, "<101,>", "a", "[101,1]")
        assert _edge(lts, "<101,>", "b", "[110,1]")

    def test_leaf_edges_k6(self):
        from bisim_lab.modules.families.service import gen_layered_bisplitter

        lts = gen_layered_bisplitter(6)
        assert _edge(lts, "<011010,aa>", "a", "[100000,1]")
        assert _edge(lts, "<011010,ab>", "b", "[011100,1]")
        assert _edge(lts, "<011010,bb>", "b", "[011010,1]")

    def test_initial_blocks(self):
        """Two blocks per level split by first bit, plus one block of tree states."""
        from bisim_lab.modules.families.service import gen_layered_bisplitter

        lts = gen_layered_bisplitter(3)
        assert lts.initial_partition.block_count == 2 * 8 + 1

    def test_lbl(self):
        from bisim_lab.modules.families.service import lbl
        from bisim_lab.shared.exceptions import InputError

        assert lbl("aab", 6) == 2
        assert lbl("bbb", 6) == 5
        with pytest.raises(InputError):
            lbl("aaaa", 6)

    def test_k_one_is_rejected(self):
        from bisim_lab.modules.families.service import gen_layered_bisplitter
        from bisim_lab.shared.exceptions import InputError

        with pytest.raises(InputError, match="k must be ≥ 2"):
            gen_layered_bisplitter(1)


class TestSequentialAndFanin:
    """Tests for D_n and the fan-in family."""

    def test_smallest_sequential(self):
        from bisim_lab.modules.families.service import gen_sequential_splitter

        lts = gen_sequential_splitter(3)
        assert lts.transitions == ((0, 0, 1), (1, 0, 2), (2, 0, 2))
        assert lts.initial_partition.members == ((0, 1), (2,))

    def test_sequential_rejects_small_n(self):
        from bisim_lab.modules.families.service import gen_sequential_splitter
        from bisim_lab.shared.exceptions import InputError

        with pytest.raises(InputError, match="n must be > 2"):
            gen_sequential_splitter(2)

    def test_fanin_k1(self):
        """a_0 has no edge, a_1 -> b_0."""
        from bisim_lab.modules.families.service import gen_fanin_splitter

        lts = gen_fanin_splitter(1)
        assert lts.state_count == 3
        assert lts.transitions == ((2, 0, 0),)

    def test_fanin_k3(self):
        from bisim_lab.modules.families.service import gen_fanin_splitter

        lts = gen_fanin_splitter(3)
        assert lts.state_count == 11
        assert lts.initial_partition.block_count == 4
        assert _edge(lts, "a5", "a", "b0") and _edge(lts, "a5", "a", "b2")
        assert not _edge(lts, "a5", "a", "b1")


class TestRobertsExample:
    def test_fixture_shape(self):
        from bisim_lab.modules.families.service import gen_roberts_example

        lts = gen_roberts_example()
        assert lts.state_count == 22
        assert lts.deterministic
        assert _edge(lts, "c6", "a", "c1")
        for src, dst in [("s14", "s13"), ("s13", "s12"), ("s12", "s11"), ("s11", "c1")]:
            assert _edge(lts, src, "a", dst)
        assert lts.block_labels == ("A", "N")


class TestDispatch:
    """Tests for generate and recognize_family."""

    def test_generators_are_deterministic(self):
        from bisim_lab.modules.families.service import generate

        assert generate("layered", k=3) == generate("layered", k=3)

    def test_unknown_family(self):
        from bisim_lab.modules.families.service import generate
        from bisim_lab.shared.exceptions import InputError

        with pytest.raises(InputError, match="unknown family"):
            generate("spiral", k=3)
        with pytest.raises(InputError, match="requires --k"):
            generate("bisplitter")

    @pytest.mark.parametrize("family,k,n", [
        ("bisplitter", 4, None),
        ("layered", 3, None),
        ("seqsplit", None, 6),
        ("fanin", 3, None),
        ("roberts-example", None, None),
    ])
    def test_recognition(self, family, k, n):
        from bisim_lab.modules.families.service import generate, recognize_family

        tag = recognize_family(generate(family, k=k, n=n))
        assert tag is not None
        assert tag.name == family
        assert tag.param == (k if k is not None else n)

    def test_unrelated_lts_is_not_recognized(self):
        from bisim_lab.modules.families.service import recognize_family
        from bisim_lab.modules.lts_core.models import Lts, Partition

        lts = Lts(4, ["a"], [(0, 0, 1)], Partition.unit(4))
        assert recognize_family(lts) is None

    def test_prefix_of_block(self):
        from bisim_lab.modules.families.service import prefix_of_block

        assert str(prefix_of_block([4, 5], 3)) == "10"
        assert prefix_of_block([1, 2], 3) is None
        assert prefix_of_block([0, 1, 2], 3) is None
        assert str(prefix_of_block(range(8), 3)) == ""


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
