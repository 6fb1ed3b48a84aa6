import random
from math import gcd

import pytest

from siegeleis.characters import (DirichletCharacter, LocalCharacter,
                                  enumerate_characters, legendre_epsilon,
                                  smallest_primitive_root)
from siegeleis.cyclotomic import CycNum


def test_make_examples():
    triv = DirichletCharacter.make(1)
    assert triv.order == 1 and triv(5) == 1
    quad3 = DirichletCharacter.make(3, [(3, 1)])
    assert quad3.order == 2  # (3-1)/gcd(2,1)
    chi5 = DirichletCharacter.make(5, [(5, 1)])
    assert chi5.order == 4
    assert smallest_primitive_root(5) == 2
    assert chi5(2) == CycNum.root_of_unity(4)


def test_make_errors():
    with pytest.raises(ValueError):
        DirichletCharacter.make(12)  # not square-free
    with pytest.raises(ValueError):
        DirichletCharacter.make(15, [(7, 1)])  # 7 does not divide 15
    with pytest.raises(ValueError):
        DirichletCharacter.make(5, [(5, 4)])  # exponent out of range
    with pytest.raises(ValueError):
        LocalCharacter(2, 1)  # the group mod 2 is trivial
    with pytest.raises(ValueError):
        DirichletCharacter.make(10, [(5, 1), (5, 2)])


def test_eval_examples():
    quad3 = DirichletCharacter.make(3, [(3, 1)])
    # Euler criterion: 2 is a non-residue mod 3
    assert pow(2, 1, 3) == 3 - 1
    assert quad3(2) == -1
    chi6 = DirichletCharacter.make(6, [(3, 1)])
    assert chi6(3).is_zero()
    chi5 = DirichletCharacter.make(5, [(5, 1)])
    assert chi5(4) == -1  # 4 = 2^2, so chi(4) = i^2


def test_eval_matches_euler_criterion():
    # for quadratic local characters the value agrees with p^((q-1)/2)
    for q in (3, 5, 7, 11, 13):
        chi = DirichletCharacter.make(q, [(q, (q - 1) // 2)])
        for n in range(1, q):
            e = pow(n, (q - 1) // 2, q)
            want = 1 if e == 1 else -1
            assert chi(n) == want, (q, n)


def test_restrict():
    chi = DirichletCharacter.make(15, [(3, 1), (5, 2)])
    part3 = chi.restrict(3)
    assert part3.modulus == 3 and part3(2) == -1
    assert chi.restrict(1).modulus == 1
    assert chi.restrict(15) == chi
    with pytest.raises(ValueError):
        chi.restrict(2)


def test_props_examples():
    triv2 = DirichletCharacter.make(2)
    p = triv2.props(k=4)
    assert p["parity"] == 1 and p["valid_space"]
    quad3 = DirichletCharacter.make(3, [(3, 1)])
    assert quad3.parity() == -1
    assert not quad3.valid_for_weight(4) and quad3.valid_for_weight(5)
    chi5 = DirichletCharacter.make(5, [(5, 1)])
    assert chi5.props()["is_real_at"][5] is False
    assert DirichletCharacter.make(1).parity() == 1


def test_legendre_epsilon():
    assert legendre_epsilon(5) == 1
    assert legendre_epsilon(3) == -1
    assert legendre_epsilon(13) == 1
    for q in (3, 5, 7, 11, 13, 17, 19, 23):
        eps = legendre_epsilon(q)
        assert eps * eps == 1
        assert (q % 4 == 1) == (eps == 1)
    with pytest.raises(ValueError):
        legendre_epsilon(2)
    with pytest.raises(ValueError):
        legendre_epsilon(15)


def test_multiplicativity_property():
    rng = random.Random(99)
    chars = [
        DirichletCharacter.make(15, [(3, 1), (5, 1)]),
        DirichletCharacter.make(21, [(3, 1), (7, 2)]),
        DirichletCharacter.make(10, [(5, 3)]),
    ]
    for chi in chars:
        N = chi.modulus
        for _ in range(300):
            m = rng.randint(1, 500)
            n = rng.randint(1, 500)
            if gcd(m * n, N) != 1:
                assert chi(m * n).is_zero() or gcd(m * n, N) == 1
                continue
            assert chi(m * n) == chi(m) * chi(n)
            assert chi(m) ** chi.order == 1


def test_restriction_reassembles():
    chi = DirichletCharacter.make(30, [(3, 1), (5, 2)])
    parts = [chi.restrict(q) for q in (2, 3, 5)]
    for n in range(1, 31):
        prod = CycNum.one()
        for part in parts:
            prod = prod * part(n)
        assert chi(n) == prod


def test_enumerate_characters():
    out = enumerate_characters(15, {1, 2})
    assert len(out) == 4  # two real choices at 3, two at 5
    out = enumerate_characters(5, {1, 2, 4})
    assert len(out) == 4  # trivial, quadratic, two of order 4
    assert len(enumerate_characters(2, {1, 2, 4})) == 1
    specs = [c.spec_string() for c in out]
    assert specs == sorted(specs, key=lambda s: s != "1") or len(set(specs)) == 4


def test_parse_and_spec_string():
    chi = DirichletCharacter.parse(15, "3:1,5:2")
    assert chi.spec_string() == "3:1,5:2"
    assert DirichletCharacter.parse(15, "1").order == 1
    with pytest.raises(ValueError):
        DirichletCharacter.parse(15, "3")
