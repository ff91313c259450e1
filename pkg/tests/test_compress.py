import itertools
import random

import pytest

from residueseq.errors import InvalidInputError
from residueseq.ringcore import RingContext, UnivariateFn, interpolate
from residueseq.polyring import RingPolynomial
from residueseq.sequences import generate, level
from residueseq.compress import (
    CompressingMap,
    MultivariatePoly,
    compress_sequence,
    constant_poly,
    eval_map,
    format_multipoly,
    from_table,
    full_monomial_coefficient,
    image_set,
    is_permutation,
    multipoly_from_json,
    multipoly_to_json,
    parse_multipoly,
    psi_zW,
    psi_zw,
    value_table,
    zero_poly,
)

Z9 = RingContext(3, 2)
FIB9 = RingPolynomial(Z9, (8, 8, 1))


def test_canonical_reduction():
    # x0^3 folds to x0, matching coefficients combine, zeros vanish
    m = MultivariatePoly(3, 2, {(3, 0): 1, (1, 0): 2, (0, 2): 0})
    assert m.coeffs == {}
    m = MultivariatePoly(3, 1, {(4,): 1})
    assert m.coeffs == {(2,): 1}


def test_from_table_reproduces_table():
    rng = random.Random(1)
    for p, arity in ((3, 1), (3, 2), (3, 3), (5, 1), (5, 2)):
        for _ in range(5):
            table = [rng.randrange(p) for _ in range(p**arity)]
            poly = from_table(p, arity, table)
            assert list(poly.table()) == table
            assert all(max(e) <= p - 1 for e in poly.coeffs) or not poly.coeffs


def test_from_table_exhaustive_arity1():
    seen = set()
    for table in itertools.product(range(3), repeat=3):
        poly = from_table(3, 1, table)
        assert poly.table() == table
        seen.add(tuple(sorted(poly.coeffs.items())))
    assert len(seen) == 27


def test_psi_zw_examples():
    assert psi_zw(3, 2, 2, 2) == constant_poly(3, 1, 2)
    m = psi_zw(3, 2, 1, 2)
    assert m.coeffs == {(0,): 1, (2,): 1}  # x0^2 + 1
    assert m.table() == (1, 2, 2)
    m = psi_zw(3, 3, 0, 1)
    assert [pt for pt in itertools.product(range(3), repeat=2) if m(pt) == 0] == [(0, 0)]


def test_psi_zw_matches_interpolated_table():
    for p, e in ((3, 2), (3, 3), (5, 2)):
        for z in range(p):
            for w in range(p):
                direct = psi_zw(p, e, z, w)
                table = [
                    z if all(c == 0 for c in pt) else w
                    for pt in itertools.product(range(p), repeat=e - 1)
                ]
                assert direct == from_table(p, e - 1, table)


def test_psi_zW():
    # singleton W forces the two-valued map
    assert psi_zW(3, 2, 1, {2}, 2) == psi_zw(3, 2, 1, 2)
    m = psi_zW(3, 2, 0, {1, 2}, {(1,): 1, (2,): 2})
    assert m.coeffs == {(1,): 1}  # the identity function x0
    with pytest.raises(InvalidInputError):
        psi_zW(3, 2, 0, {1}, {(1,): 1, (2,): 2})
    with pytest.raises(InvalidInputError):
        psi_zW(3, 2, 0, {1, 2}, {(1,): 1})
    with pytest.raises(InvalidInputError):
        psi_zW(3, 2, 0, set(), 1)


def test_image_and_permutation():
    assert image_set(UnivariateFn(5, (0, 1))) == {0, 1, 2, 3, 4}
    assert is_permutation(UnivariateFn(5, (0, 1)))
    assert image_set(UnivariateFn(7, (0, 0, 1))) == {0, 1, 2, 4}
    assert image_set(UnivariateFn(5, (0, 0, 1))) == {0, 1, 4}
    assert not is_permutation(UnivariateFn(5, (0, 0, 1)))


def test_full_monomial_coefficient():
    assert full_monomial_coefficient(psi_zw(3, 2, 1, 2)) == 1  # w - z
    assert full_monomial_coefficient(zero_poly(3, 1)) == 0
    # the uniformity threshold value for p = 3, e = 2
    assert (-1) ** 2 * (3 + 1) // 2 % 3 == 2


def test_eval_map():
    g = UnivariateFn(3, (0, 1))
    m = CompressingMap(g=g, eta=zero_poly(3, 1), e=2)
    assert eval_map(m, (2, 1)) == 1
    g2 = UnivariateFn(3, (0, 0, 1))
    m2 = CompressingMap(g=g2, eta=zero_poly(3, 1), e=2)
    assert eval_map(m2, (0, 2)) == 1
    m3 = CompressingMap(g=g, eta=psi_zw(3, 2, 1, 2), e=2)
    assert eval_map(m3, (0, 2)) == 0  # g(2) + z = 2 + 1
    with pytest.raises(InvalidInputError):
        eval_map(m, (1, 1, 1))
    with pytest.raises(InvalidInputError):
        eval_map(m, (1, 3))


def test_map_validation():
    with pytest.raises(InvalidInputError):
        CompressingMap(g=UnivariateFn(3, (5,)), eta=zero_poly(3, 1), e=2)
    with pytest.raises(InvalidInputError):
        CompressingMap(g=UnivariateFn(3, (0, 1)), eta=zero_poly(3, 2), e=2)
    with pytest.raises(InvalidInputError):
        CompressingMap(g=UnivariateFn(5, (0, 1)), eta=zero_poly(3, 1), e=2)


def test_compress_sequence():
    s = generate(FIB9, (0, 1))
    g = UnivariateFn(3, (0, 1))
    m = CompressingMap(g=g, eta=zero_poly(3, 1), e=2)
    assert compress_sequence(m, s) == level(s, 1)

    zero = generate(FIB9, (0, 0))
    m17 = CompressingMap(g=g, eta=psi_zw(3, 2, 1, 2), e=2)
    assert compress_sequence(m17, zero).terms == (1,)  # phi(0, 0) = z

    eta_sq = from_table(3, 1, [x * x % 3 for x in range(3)])
    msq = CompressingMap(g=g, eta=eta_sq, e=2)
    got = compress_sequence(msq, s)
    a0, a1 = level(s, 0), level(s, 1)
    assert all(got.at(t) == (a1.at(t) + a0.at(t) ** 2) % 3 for t in range(24))


def test_top_digit_degree_matches_g():
    # freezing the lower digits leaves a shifted copy of g in the top one
    g = UnivariateFn(5, (1, 3, 0, 2))
    eta = from_table(5, 1, [2, 0, 1, 4, 4])
    m = CompressingMap(g=g, eta=eta, e=2)
    for lower in range(5):
        table = [eval_map(m, (lower, top)) for top in range(5)]
        assert interpolate(table, 5).degree == g.degree


def test_value_table_matches_eval():
    m = CompressingMap(g=UnivariateFn(3, (0, 0, 1)), eta=psi_zw(3, 2, 0, 1), e=2)
    table = value_table(m, Z9)
    for v in range(9):
        assert table[v] == eval_map(m, (v % 3, v // 3))
    with pytest.raises(InvalidInputError):
        value_table(m, RingContext(3, 3))


def test_text_format_roundtrip():
    m = MultivariatePoly(3, 2, {(2, 0): 2, (0, 0): 1})
    text = format_multipoly(m)
    assert text == "p=3 vars=2; 2:(2,0) 1:(0,0)"
    assert parse_multipoly(text) == m
    zero = zero_poly(3, 2)
    assert format_multipoly(zero) == "p=3 vars=2; 0"
    assert parse_multipoly(format_multipoly(zero)) == zero
    with pytest.raises(InvalidInputError):
        parse_multipoly("p=3 vars=2; 2:2,0")


def test_json_table_roundtrip():
    m = psi_zw(3, 3, 1, 2)
    text = multipoly_to_json(m)
    assert multipoly_from_json(text) == m
    assert multipoly_to_json(multipoly_from_json(text)) == text
