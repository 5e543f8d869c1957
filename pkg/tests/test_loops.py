"""Loop engine: verification, translations, closures, subloops, quotients."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rccloops as rl
from rccloops.loops import ClosureCapError, Perm, PermGroup, perm_closure
from tests.conftest import TABLE1, TABLE1_CYCLES, cyclic_table


def table1_array():
    return np.array(TABLE1, dtype=np.int16) - 1


class TestVerifyLoop:
    def test_cyclic_group(self):
        assert rl.verify_loop(cyclic_table(3)).ok

    def test_table1(self):
        assert rl.verify_loop(table1_array(), identity=0).ok

    def test_swapped_entries_rejected(self):
        # swapping the (3,3) and (3,4) entries breaks columns 3 and 4
        arr = table1_array()
        arr[2, 2], arr[2, 3] = arr[2, 3], arr[2, 2]
        verdict = rl.verify_loop(arr, identity=0)
        assert not verdict.ok
        assert not verdict.latin_ok

    def test_no_identity(self):
        arr = np.array([[1, 0], [0, 1]], dtype=np.int16)
        verdict = rl.verify_loop(arr)
        assert not verdict.ok
        assert not verdict.identity_ok

    def test_malformed_raises(self):
        with pytest.raises(rl.MalformedTableError):
            rl.verify_loop(np.zeros((2, 3), dtype=np.int16))
        with pytest.raises(rl.MalformedTableError):
            rl.verify_loop(np.array([[0, 5], [5, 0]], dtype=np.int16))

    def test_checked_constructor_rejects_non_loop(self):
        arr = table1_array()
        arr[2, 2], arr[2, 3] = arr[2, 3], arr[2, 2]
        with pytest.raises(rl.InvalidLoopError):
            rl.LoopTable(arr, identity=0, check=True)

    @given(
        i=st.integers(0, 7),
        j=st.integers(0, 7),
        v=st.integers(0, 7),
    )
    def test_single_entry_mutations_always_detected(self, i, j, v):
        arr = table1_array()
        if arr[i, j] == v:
            return
        arr[i, j] = v
        # the two criteria must also agree on broken tables
        assert not rl.verify_loop(arr, identity=0).ok


class TestTranslations:
    def test_identity_translations(self, table1_loop):
        lt = table1_loop.table
        assert lt.right_translation(0).is_identity()
        assert lt.left_translation(0).is_identity()

    def test_published_cycle_at_8(self, table1_loop):
        perm = table1_loop.table.right_translation(7)
        assert perm.cycle_string() == "(1,8,6,5,2,4,3,7)"

    def test_all_published_cycles(self, table1_loop):
        for x_1based, cycles in TABLE1_CYCLES.items():
            expected = Perm.from_cycles(8, cycles, one_based=True)
            assert table1_loop.table.right_translation(x_1based - 1) == expected

    def test_left_division_example(self, table1_loop):
        # 3 \ 1 = 4 in 1-based labels, because 3 * 4 = 1
        lt = table1_loop.table
        assert lt.left_divide(2, 0) == 3
        assert lt.mul(2, 3) == 0

    def test_division_identities(self, table1_loop):
        lt = table1_loop.table
        for x in range(lt.order):
            for y in range(lt.order):
                assert lt.mul(x, lt.left_divide(x, y)) == y
                assert lt.mul(lt.right_divide(y, x), x) == y

    def test_translation_at_e_maps_e_to_x(self, table1_loop):
        lt = table1_loop.table
        for x in range(lt.order):
            assert lt.right_translation(x)(lt.identity) == x


class TestPerm:
    def test_compose_is_right_action(self):
        p = Perm([1, 2, 0])
        q = Perm([0, 2, 1])
        # (p * q)(x) = q(p(x))
        assert (p * q).images.tolist() == [2, 1, 0]

    def test_inverse(self):
        p = Perm([2, 0, 3, 1])
        assert (p * p.inverse()).is_identity()

    def test_cycle_round_trip(self):
        p = Perm.from_cycles(8, [(1, 8, 6, 5, 2, 4, 3, 7)], one_based=True)
        assert p.cycle_string() == "(1,8,6,5,2,4,3,7)"

    def test_cycle_type(self):
        p = Perm.from_cycles(8, [(1, 2), (3, 6), (4, 8), (5, 7)], one_based=True)
        assert p.cycle_type() == (2, 2, 2, 2)

    @given(st.permutations(list(range(6))))
    def test_inverse_identity_property(self, images):
        p = Perm(images)
        assert (p.inverse() * p).is_identity()
        assert p.inverse().inverse() == p


class TestPermClosure:
    def test_identity_only(self):
        group = perm_closure([Perm.identity(4)])
        assert group.order == 1

    def test_regular_representation_of_cyclic_group(self):
        lt = cyclic_table(8)
        group = perm_closure(lt.right_section())
        assert group.order == 8

    def test_table1_closure_is_gl23(self, table1_loop):
        # |GL(2,3)| = (9-1)(9-3) = 48
        group = perm_closure(table1_loop.table.right_section())
        assert group.order == 48
        assert group.stabilizer_size(table1_loop.identity) == 6

    def test_contains_and_stabilizer(self, table1_loop):
        group = perm_closure(table1_loop.table.right_section())
        for perm in table1_loop.table.right_section():
            assert group.contains(perm)
        stab = group.stabilizer_elements(0)
        assert stab.shape[0] == 6
        assert group.order == 8 * 6

    def test_cap_exceeded(self, table1_loop):
        with pytest.raises(ClosureCapError):
            perm_closure(table1_loop.table.right_section(), cap=10)

    def test_symmetric_group(self):
        gens = [Perm([1, 0, 2, 3]), Perm([1, 2, 3, 0])]
        assert perm_closure(gens).order == 24


class TestSubloops:
    def test_generated_by_identity(self, table1_loop):
        assert rl.subloop_generated(table1_loop.table, ()) == (0,)

    def test_generated_whole(self, table1_loop):
        assert len(rl.subloop_generated(table1_loop.table, (2,))) == 8

    def test_cyclic_subgroups(self):
        lt = cyclic_table(8)
        assert rl.subloop_generated(lt, (4,)) == (0, 4)
        assert rl.subloop_generated(lt, (2,)) == (0, 2, 4, 6)

    def test_trivial_and_whole_always_normal(self, table1_loop):
        lt = table1_loop.table
        assert rl.is_normal(lt, (0,))
        assert rl.is_normal(lt, tuple(range(8)))

    def test_normal_enumeration_vs_brute_force_q8(self, q8_loop):
        lt = q8_loop.table
        brute = []
        for size in range(1, 9):
            for subset in itertools.combinations(range(8), size):
                if 0 in subset and rl.is_normal(lt, subset):
                    brute.append(tuple(subset))
        brute.sort(key=lambda s: (len(s), s))
        assert rl.enumerate_normal_subloops(lt) == brute
        # this associative instance has three subloops of order 4
        assert [len(s) for s in brute] == [1, 2, 4, 4, 4, 8]

    def test_table1_loop_is_simple(self, table1_loop):
        norms = rl.enumerate_normal_subloops(table1_loop.table)
        assert [len(s) for s in norms] == [1, 8]

    def test_cyclic_group_normal_subgroups(self):
        # oracle: in an abelian group the normal subloops are exactly the
        # subgroups, i.e. one cyclic subgroup per divisor of the order
        norms = rl.enumerate_normal_subloops(cyclic_table(8))
        assert [len(s) for s in norms] == [1, 2, 4, 8]
        assert (0, 4) in norms
        assert (0, 2, 4, 6) in norms


class TestQuotient:
    def test_by_trivial_is_copy(self, table1_loop):
        lt = table1_loop.table
        quotient, cosets = rl.quotient_loop(lt, (0,))
        assert np.array_equal(quotient.table, lt.table)
        assert cosets == [(i,) for i in range(8)]

    def test_by_whole_is_trivial(self, table1_loop):
        quotient, _ = rl.quotient_loop(table1_loop.table, tuple(range(8)))
        assert quotient.order == 1

    def test_non_normal_rejected(self, table1_loop):
        with pytest.raises(ValueError, match="not a normal subloop"):
            rl.quotient_loop(table1_loop.table, (0, 1, 2))

    def test_q5_central_quotient_is_simple_order_12(self):
        # r = 0, s = 2 over F_5: quotient by the center {[0,1],[0,4]}
        f5 = rl.field_create(5)
        loop = rl.build_loop(f5, rl.quadratic_from_codes(f5, 0, 2))
        center = (0, loop.element_index((0, 4)))
        quotient, _ = rl.quotient_loop(loop.table, center)
        assert quotient.order == 12
        assert rl.verify_loop(quotient).ok
        norms = rl.enumerate_normal_subloops(quotient)
        assert [len(s) for s in norms] == [1, 12]

    def test_quotients_by_all_normals_are_loops(self, q8_loop):
        lt = q8_loop.table
        for members in rl.enumerate_normal_subloops(lt):
            quotient, _ = rl.quotient_loop(lt, members)
            assert rl.verify_loop(quotient).ok


class TestTextFormat:
    def test_dump_format(self, table1_loop):
        text = rl.dump_table(table1_loop.table)
        lines = text.strip().splitlines()
        assert lines[0] == "order 8 identity 1"
        assert lines[1] == "1 2 3 4 5 6 7 8"
        assert len(lines) == 9

    def test_round_trip_stable(self, table1_loop):
        text = rl.dump_table(table1_loop.table)
        parsed = rl.parse_table(text)
        assert np.array_equal(parsed.table, table1_loop.table.table)
        assert rl.dump_table(parsed) == text

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "order 2 identity 3\n1 2\n2 1\n",
            "order 2 identity 1\n1 2\n",
            "order 2 identity 1\n1 2 3\n2 1 3\n",
            "order 2 identity 1\n1 9\n9 1\n",
            "size 2 identity 1\n1 2\n2 1\n",
            "order 2 identity 1\n1 x\n2 1\n",
        ],
    )
    def test_malformed_inputs(self, text):
        with pytest.raises(rl.MalformedTableError):
            rl.parse_table(text)

    def test_parse_unchecked_allows_broken(self):
        text = "order 2 identity 1\n1 1\n1 1\n"
        loop = rl.parse_table(text, check=False)
        assert not rl.verify_loop(loop).ok
