from itertools import product

import numpy as np
import pytest

from src.boolfun.boolfun import (
    AnfPolynomial,
    Const,
    MinorMap,
    TruthTable,
    anf,
    anf_inverse,
    apply_minor,
    compose,
    degree,
    deserialize,
    dual,
    evaluate,
    find_minor_map,
    has_i_minor_in,
    i_minors,
    inner_negation,
    is_affine,
    is_minor,
    minor_equivalent,
    minors,
    named,
    nonaffine_reduction,
    outer_negation,
    parse_function,
    serialize,
    table_bits,
)
from src.boolfun.families import FAMILIES, FamilyName
from src.utils.errors import InputError, ParseError
from tests.conftest import all_functions

AND, OR, NAND, NOR = named("and"), named("or"), named("nand"), named("nor")
IMP, NIMP, XOR, IFF = named("imp"), named("nimp"), named("xor"), named("iff")
ID, NOT = named("id"), named("not")
XOR3, MEDIAN = named("xor3"), named("median")


def small_functions(max_arity=3):
    return [f for n in range(max_arity + 1) for f in all_functions(n)]


class TestEvaluation:
    def test_named_values(self):
        assert AND(1, 1) == 1
        assert AND(1, 0) == 0
        assert XOR3(1, 1, 1) == 1
        assert MEDIAN(1, 0, 1) == 1
        assert MEDIAN(1, 0, 0) == 0

    def test_coordinate_one_is_least_significant(self):
        # x1 and not x2: true only at x1 = 1, x2 = 0, which is table index 1
        assert NIMP.table == (0, 1, 0, 0)
        assert NIMP(1, 0) == 1

    def test_arity_mismatch(self):
        with pytest.raises(InputError):
            evaluate(AND, (1,))
        with pytest.raises(InputError):
            AND(1, 2)

    def test_from_table_and_callable(self):
        assert TruthTable.from_table([0, 0, 0, 1]) == AND
        assert TruthTable.from_callable(3, lambda a, b, c: (a & b) | (a & c) | (b & c)) == MEDIAN
        with pytest.raises(InputError):
            TruthTable.from_table([0, 1, 1])

    def test_no_arity_normalization(self):
        assert TruthTable(1, 0) != TruthTable(2, 0)

    def test_invalid_code(self):
        with pytest.raises(InputError):
            TruthTable(1, 4)

    def test_table_bits(self):
        assert table_bits(AND).tolist() == [0, 0, 0, 1]
        assert table_bits(TruthTable(0, 1)).tolist() == [1]


class TestSerialization:
    @pytest.mark.parametrize("f, text", [
        (AND, "2:8"),
        (XOR3, "3:96"),
        (MEDIAN, "3:e8"),
        (ID, "1:2"),
        (TruthTable(0, 1), "0:1"),
        (TruthTable(4, 0x00ff), "4:00ff"),
    ])
    def test_serialize(self, f, text):
        assert serialize(f) == text
        assert deserialize(text) == f

    def test_round_trip_all_binary(self):
        for f in all_functions(2):
            assert deserialize(serialize(f)) == f

    def test_extra_leading_digits_accepted(self):
        assert deserialize("2:0008") == AND

    @pytest.mark.parametrize("text", ["2:zz", "x", "2:", ":8", "1:8", "a:1", "²:8"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            deserialize(text)

    def test_parse_function_accepts_names(self):
        assert parse_function("and") == AND
        assert parse_function("3:e8") == MEDIAN
        with pytest.raises(InputError):
            named("implies")


class TestAnf:
    def test_examples(self):
        assert anf(AND).monomials() == ((0, 1),)
        assert anf(IFF).monomials() == ((), (0,), (1,))
        assert str(anf(IFF)) == "1 + x1 + x2"
        assert anf(MEDIAN).monomials() == ((0, 1), (0, 2), (1, 2))
        assert str(anf(TruthTable(2, 0))) == "0"

    def test_round_trip_exhaustive(self):
        for f in small_functions(3):
            assert anf_inverse(anf(f)) == f
            p = anf(f)
            assert anf(anf_inverse(p)) == p

    def test_degree(self):
        assert degree(XOR3) == 1 and is_affine(XOR3)
        assert degree(MEDIAN) == 2 and not is_affine(MEDIAN)
        assert degree(TruthTable(3, 0xFF)) == 0 and is_affine(TruthTable(3, 0xFF))

    def test_degree_matches_monomials(self):
        for f in all_functions(3):
            p = anf(f)
            assert p.degree == max((len(m) for m in p.monomials()), default=0)

    def test_from_coefficients(self):
        # x1x2 + x1 is x1 and not x2
        assert anf_inverse(AnfPolynomial(2, 0b1010)) == NIMP


class TestNegations:
    def test_examples(self):
        assert dual(AND) == OR
        assert dual(MEDIAN) == MEDIAN
        assert inner_negation(ID) == NOT
        assert outer_negation(AND) == NAND

    def test_pointwise_definitions(self):
        for f in all_functions(3):
            for x in product((0, 1), repeat=3):
                flipped = tuple(1 - v for v in x)
                assert inner_negation(f)(*x) == f(*flipped)
                assert outer_negation(f)(*x) == 1 - f(*x)
                assert dual(f)(*x) == 1 - f(*flipped)

    def test_dual_is_involution(self):
        for f in small_functions(3):
            assert dual(dual(f)) == f

    def test_dual_commutes_with_pure_minors(self):
        for n in range(1, 4):
            for f in all_functions(n):
                for t in range(1, 3):
                    for assignment in product(range(t), repeat=n):
                        m = MinorMap(t, assignment)
                        assert dual(apply_minor(f, m)) == apply_minor(dual(f), m)


class TestMinors:
    def test_constant_substitutions(self):
        assert apply_minor(XOR, MinorMap(1, (0, Const.ZERO))) == ID
        assert apply_minor(IMP, MinorMap(1, (0, Const.ZERO))) == NOT
        assert apply_minor(XOR, MinorMap(1, (0, 0))) == TruthTable(1, 0)

    def test_permutation_minor(self):
        swapped = apply_minor(NIMP, MinorMap(2, (1, 0)))
        assert swapped == TruthTable(2, 4)

    def test_invalid_maps(self):
        with pytest.raises(InputError):
            MinorMap(1, (0, 1))
        with pytest.raises(InputError):
            MinorMap(2, (True, 0))
        with pytest.raises(InputError):
            apply_minor(AND, MinorMap(1, (0,)))

    def test_compose_matches_pointwise(self):
        f = compose(AND, [XOR, OR])
        for x in product((0, 1), repeat=2):
            assert f(*x) == AND(XOR(*x), OR(*x))
        with pytest.raises(InputError):
            compose(AND, [XOR])
        with pytest.raises(InputError):
            compose(AND, [XOR, MEDIAN])

    def test_compose_nullary(self):
        assert compose(TruthTable(0, 1), [], arity=2) == TruthTable(2, 0xF)

    def test_i_minors_of_nor(self):
        found = i_minors(NOR, 2)
        assert NOR in found
        assert TruthTable(2, 0b0101) in found  # not x1

    def test_i_minors_of_and(self):
        assert i_minors(AND, 1) == {TruthTable(1, 0), TruthTable(1, 3), ID}

    def test_i_minors_of_projection(self):
        p = TruthTable.projection(3, 1)
        for t in range(1, 3):
            allowed = FAMILIES[FamilyName.I].codes(t)
            assert {g.code for g in i_minors(p, t)} <= allowed

    def test_minor_relation_reflexive_and_transitive(self):
        functions = all_functions(1) + all_functions(2)
        below = {g: minors(g, 1) | minors(g, 2) for g in functions}
        for f in functions:
            assert f in below[f]
        for f, g, h in product(functions, repeat=3):
            if f in below[g] and g in below[h]:
                assert f in below[h]

    def test_find_minor_map_reproduces_minor(self):
        m = find_minor_map(MEDIAN, AND, with_constants=True)
        assert m is not None
        assert apply_minor(MEDIAN, m) == AND
        assert find_minor_map(AND, XOR) is None

    def test_nimp_and_imp_are_distinct_classes(self):
        assert minor_equivalent(NIMP, TruthTable(2, 4))
        assert minor_equivalent(IMP, TruthTable(2, 11))
        assert not minor_equivalent(NIMP, IMP)
        assert is_minor(ID, AND)


class TestReductions:
    TARGETS = [AND, OR, NAND, NOR, NIMP, IMP]

    @pytest.mark.parametrize("arity", [2, 3, 4])
    def test_nonaffine_functions_have_binary_nonaffine_i_minor(self, arity):
        codes = np.arange(1 << (1 << arity), dtype=np.int64)
        found = has_i_minor_in(codes, arity, self.TARGETS)
        affine = FAMILIES[FamilyName.L].codes(arity)
        expected = np.array([int(c) not in affine for c in codes])
        assert np.array_equal(found, expected)

    @pytest.mark.parametrize("arity", [1, 2, 3])
    def test_functions_without_id_or_not_minor_are_constant(self, arity):
        codes = np.arange(1 << (1 << arity), dtype=np.int64)
        found = has_i_minor_in(codes, arity, [ID, NOT])
        constants = {0, (1 << (1 << arity)) - 1}
        for code, hit in zip(codes, found):
            assert hit == (int(code) not in constants)

    def test_nonaffine_reduction(self):
        for n in range(2, 4):
            for f in all_functions(n):
                if is_affine(f):
                    continue
                m, g = nonaffine_reduction(f)
                assert g.arity == 2 and not is_affine(g)
                assert apply_minor(f, m) == g
                assert g in i_minors(f, 2)

    def test_reduction_of_x1x2_plus_x1(self):
        f = anf_inverse(AnfPolynomial(2, 0b1010))
        _, g = nonaffine_reduction(f)
        assert g == NIMP
        assert not minor_equivalent(g, IMP)

    def test_reduction_rejects_affine(self):
        with pytest.raises(InputError):
            nonaffine_reduction(XOR3)
