import pytest

from flagclass import CapExceeded, NotPrime, NotPrimePower, field_for_order, make_field

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16]


def test_prime_field_basics():
    F5 = make_field(5, 1)
    assert F5.inv(2) == 3  # 2*3 = 6 = 1 mod 5
    F3 = make_field(3, 1)
    assert F3.add(2, 2) == 1


def test_gf4_multiplication_under_lex_modulus():
    F4 = make_field(2, 2)
    assert F4.modulus == (1, 1, 1)  # only monic irreducible of degree 2
    assert F4.mul(2, 2) == 3  # x*x = x + 1


def test_lex_smallest_moduli():
    # lex order on (c_0, ..., c_{k-1}), low degree first
    assert make_field(2, 3).modulus == (1, 0, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)


def test_make_field_rejects_bad_input():
    with pytest.raises(NotPrime):
        make_field(6, 1)
    with pytest.raises(CapExceeded):
        make_field(2, 17)
    with pytest.raises(ValueError):
        make_field(2, 0)


def test_field_for_order():
    F = field_for_order(49)
    assert (F.p, F.k, F.q) == (7, 2, 49)
    assert field_for_order(8).q == 8
    for bad in (1, 6, 12, 100):
        with pytest.raises(NotPrimePower):
            field_for_order(bad)


def test_primitive_elements():
    expected = {2: 1, 5: 2, 7: 3, 4: 2, 9: 4}
    for q, prim in expected.items():
        F = field_for_order(q)
        assert F.primitive_element() == prim
        if q > 2:
            assert F.order(prim) == q - 1


def test_field_laws_exhaustive():
    for q in SMALL_Q:
        F = field_for_order(q)
        els = list(F.elements())
        for a in els:
            assert F.add(a, 0) == a
            assert F.mul(a, 1) == a
            assert F.add(a, F.neg(a)) == 0
            if a:
                assert F.mul(a, F.inv(a)) == 1
            for b in els:
                assert F.add(a, b) == F.add(b, a)
                assert F.mul(a, b) == F.mul(b, a)
                # Frobenius is additive
                assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
                for c in els[:: max(1, q // 4)]:
                    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
                    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_encoding_roundtrip():
    for q in (4, 8, 9):
        F = field_for_order(q)
        for a in F.elements():
            assert F.from_coeffs(F.coeffs(a)) == a


def test_pow_and_order():
    F = field_for_order(9)
    g = F.primitive_element()
    seen = {F.pow(g, e) for e in range(8)}
    assert seen == set(range(1, 9))
    assert F.pow(0, 0) == 1
    assert F.pow(0, 5) == 0


def test_json_shape():
    F = make_field(3, 2)
    js = F.to_json()
    assert js == {"p": 3, "k": 2, "modulus": [1, 0, 1]}
