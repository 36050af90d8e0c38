import random

import pytest
from hypothesis import given, settings

from conftest import formula_strategy
from fo2small.errors import FormatError
from fo2small.formula import (
    TRUE,
    Atom,
    Vocabulary,
    parse_formula,
    to_scott_normal_form,
)
from fo2small.satengine import random_structure
from fo2small.typespace import (
    Structure,
    TwoType,
    check_snf,
    diag_truth_table,
    evaluate,
    invert,
    one_type_count,
    one_type_of,
    pair_truth_table,
    parse_structure,
    project_x,
    project_y,
    realized_one_types,
    realized_two_types,
    structure_to_text,
    two_type_count,
    two_type_of,
)

V11 = Vocabulary(("P",), ("r",))


def all_two_types(vocab):
    return [TwoType(vocab, c) for c in range(two_type_count(vocab))]


class TestOneType:
    def test_read_off(self):
        S = Structure.build(V11, 2, {"P": [0]}, {"r": []})
        t0 = one_type_of(S, 0)
        assert t0.holds(0) and not t0.holds(1)  # P(x) true, r(x,x) false
        t1 = one_type_of(S, 1)
        assert not t1.holds(0) and not t1.holds(1)

    def test_out_of_range(self):
        S = Structure.build(V11, 1)
        with pytest.raises(ValueError):
            one_type_of(S, 1)

    def test_classes_partition_domain(self):
        for seed in range(20):
            size = seed % 7
            S = random_structure(V11, size, seed)
            classes = {}
            for a in range(size):
                classes.setdefault(one_type_of(S, a), []).append(a)
            assert sum(len(v) for v in classes.values()) == size

    def test_counts(self):
        assert one_type_count(V11) == 4 == 2 ** (V11.n + V11.m)
        assert two_type_count(V11) == 64 == 2 ** (2 * V11.n + 4 * V11.m)


class TestTwoType:
    def test_read_off(self):
        S = Structure.build(V11, 2, {}, {"r": [(0, 1)]})
        t = two_type_of(S, 0, 1)
        # atom order: P(x) P(y) r(x,x) r(y,y) r(x,y) r(y,x)
        assert t.holds(4) and not t.holds(5) and not t.holds(2) and not t.holds(3)

    def test_diagonal_rejected(self):
        S = Structure.build(V11, 2)
        with pytest.raises(ValueError):
            two_type_of(S, 1, 1)

    def test_projections_match_one_types(self):
        for seed in range(15):
            S = random_structure(V11, 5, 100 + seed)
            for a in range(5):
                for b in range(5):
                    if a == b:
                        continue
                    t = two_type_of(S, a, b)
                    assert project_x(t) == one_type_of(S, a)
                    assert project_y(t) == one_type_of(S, b)
                    assert two_type_of(S, b, a) == invert(t)

    def test_invert_is_involution_exhaustive(self):
        for t in all_two_types(V11):
            assert invert(invert(t)) == t

    def test_invert_fixed_point_and_swap(self):
        # fully symmetric: P(x)=P(y)=true, r(x,y)=r(y,x)=true, loops false
        sym = TwoType(V11, 0b110011)
        assert invert(sym) == sym
        only_xy = TwoType(V11, 0b010000)
        only_yx = TwoType(V11, 0b100000)
        assert invert(only_xy) == only_yx

    def test_projection_commutes_with_invert_exhaustive(self):
        for t in all_two_types(V11):
            assert project_y(t) == project_x(invert(t))

    def test_fiber_size_over_fixed_projection(self):
        # 2^(n+3m) two-types share any given x-projection; 16 when n=m=1
        for pi in range(one_type_count(V11)):
            fiber = [t for t in all_two_types(V11) if project_x(t).code == pi]
            assert len(fiber) == 16

    def test_invert_involution_random_larger(self):
        rng = random.Random(5)
        for _ in range(1000):
            n, m = rng.randint(0, 3), rng.randint(0, 2)
            if n + m == 0:
                continue
            vocab = Vocabulary(
                tuple(f"P{i}" for i in range(n)), tuple(f"R{i}" for i in range(m))
            )
            t = TwoType(vocab, rng.randrange(two_type_count(vocab)))
            assert invert(invert(t)) == t
            assert project_y(t) == project_x(invert(t))


class TestEvaluate:
    def test_constants(self):
        S = Structure.build(V11, 3)
        assert evaluate(TRUE, S)

    def test_hand_checkable(self):
        S = Structure.build(V11, 2, {}, {"r": [(0, 1), (1, 0)]})
        assert evaluate(parse_formula("A x. E y. r(x,y)", V11), S)
        assert not evaluate(parse_formula("A x. r(x,x)", V11), S)

    def test_empty_domain_semantics(self):
        S = Structure.build(V11, 0)
        assert evaluate(parse_formula("A x. P(x)", V11), S)
        assert not evaluate(parse_formula("E x. true", V11), S)

    def test_unbound_variable(self):
        S = Structure.build(V11, 1)
        with pytest.raises(ValueError, match="unbound"):
            evaluate(Atom("P", ("x",)), S)

    @settings(max_examples=120, derandomize=True)
    @given(formula_strategy(V11, quantifiers=False, max_leaves=10))
    def test_two_type_determines_quantifier_free_truth(self, phi):
        table = pair_truth_table(phi, V11)
        diag = diag_truth_table(phi, V11)
        S = random_structure(V11, 4, 7)
        for a in range(4):
            assert evaluate(phi, S, {"x": a, "y": a}) == bool(diag[one_type_of(S, a).code])
            for b in range(4):
                if a != b:
                    code = two_type_of(S, a, b).code
                    assert evaluate(phi, S, {"x": a, "y": b}) == bool(table[code])


class TestCheckSnf:
    def test_trivial_always_true(self):
        snf = to_scott_normal_form(parse_formula("A x. A y. true", V11), V11)
        for seed in range(5):
            assert check_snf(random_structure(V11, seed, seed), snf).ok

    def test_missing_witness_certificate(self):
        vocab = Vocabulary((), ("r",))
        snf = to_scott_normal_form(parse_formula("A x. E y. r(x,y)", vocab), vocab)
        S = Structure.build(vocab, 1)
        result = check_snf(S, snf)
        assert not result.ok
        assert result.beta_violation == (0, 0)

    def test_alpha_certificate_is_first_violation(self):
        vocab = Vocabulary((), ("r",))
        snf = to_scott_normal_form(parse_formula("A x. A y. r(x,y)", vocab), vocab)
        S = Structure.build(vocab, 2, {}, {"r": [(0, 0), (0, 1)]})
        result = check_snf(S, snf)
        assert result.alpha_violation == (1, 0)

    def test_vocabulary_mismatch(self):
        snf = to_scott_normal_form(parse_formula("A x. true", V11), V11)
        S = Structure.build(Vocabulary(("P",), ()), 1)
        with pytest.raises(ValueError, match="mismatch"):
            check_snf(S, snf)

    def test_agrees_with_sentence_evaluation(self):
        vocab = Vocabulary(("P",), ("r",))
        texts = (
            "A x. E y. (r(x,y) & !P(y))",
            "A x. A y. (r(x,y) -> r(y,x))",
            "(A x. E y. r(y,x)) & (A x. A y. !r(x,x))",
        )
        for text in texts:
            snf = to_scott_normal_form(parse_formula(text, vocab), vocab)
            for seed in range(12):
                S = random_structure(snf.vocabulary, 1 + seed % 4, 50 + seed)
                assert check_snf(S, snf).ok == evaluate(snf.sentence(), S)


class TestRealized:
    def test_empty_structure(self):
        S = Structure.build(V11, 0)
        assert realized_one_types(S) == frozenset()
        assert realized_two_types(S) == frozenset()

    def test_realized_count_bounds(self):
        for seed in range(10):
            size = 1 + seed % 6
            S = random_structure(V11, size, 900 + seed)
            assert len(realized_one_types(S)) <= min(size, one_type_count(V11))
            assert len(realized_two_types(S)) <= min(size * (size - 1), two_type_count(V11))

    def test_realized_closed_under_invert(self):
        for seed in range(10):
            S = random_structure(V11, 5, 300 + seed)
            realized = realized_two_types(S)
            assert {invert(t) for t in realized} == realized


class TestStructureFiles:
    def test_round_trip_is_byte_identical(self):
        S = random_structure(Vocabulary(("P", "Q"), ("r",)), 5, 8)
        text = structure_to_text(S)
        assert parse_structure(text) == S
        assert structure_to_text(parse_structure(text)) == text

    def test_unknown_line_rejected(self):
        with pytest.raises(FormatError, match="unknown"):
            parse_structure("vocab unary P\nvocab binary\ndomain 2\nbogus 1\n")

    def test_out_of_range_fact(self):
        with pytest.raises(FormatError, match="out of range"):
            parse_structure("vocab unary P\nvocab binary\ndomain 2\nP 5\n")

    def test_empty_domain_file(self):
        S = parse_structure("vocab unary P\nvocab binary\ndomain 0\n")
        assert S.size == 0

    def test_reduct(self):
        S = random_structure(Vocabulary(("P", "Q"), ("r",)), 4, 11)
        R = S.reduct(Vocabulary(("Q",), ("r",)))
        assert R.unary[0] == S.unary[1]
        assert R.binary[0] == S.binary[0]
