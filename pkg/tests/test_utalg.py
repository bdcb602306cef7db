import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from utcompat.classify3 import LambdaVector, lambda_to_product
from utcompat.families import make_family
from utcompat.idspace import IdentityKind, residual
from utcompat.scalars import QQ
from utcompat.utalg import (DimensionError, Element, LinearMap, Product, UnitizedElement,
                            annihilator_structure, associator, basis, canonical_product,
                            evaluate, generators, involution_map, is_associative,
                            linear_combination, mutation_product, opposite_pushforward,
                            pushforward)

from conftest import F5, F7, elements, products, random_element


def E(n, i, j, field=QQ):
    return Element.unit(n, field, i, j)


class TestBasis:
    def test_lexicographic(self):
        assert basis(3) == ((1, 2), (1, 3), (2, 3))
        assert basis(4)[:3] == ((1, 2), (1, 3), (1, 4))

    @pytest.mark.parametrize("n", range(3, 9))
    def test_size(self, n):
        assert len(basis(n)) == n * (n - 1) // 2
        assert len(generators(n)) == n - 1

    @pytest.mark.parametrize("idx", [(2, 2), (3, 1), (0, 2), (1, 4), "ab", (1,)])
    def test_bad_index(self, idx):
        with pytest.raises(DimensionError):
            Element(3, QQ, {idx: 1})


class TestCanonicalProduct:
    def test_examples(self):
        dot = canonical_product(3, QQ)
        assert dot.value((1, 2), (2, 3)) == E(3, 1, 3)
        assert dot.value((1, 2), (1, 2)).is_zero()
        assert canonical_product(4, QQ).value((1, 3), (3, 4)) == E(4, 1, 4)

    @pytest.mark.parametrize("n", range(3, 9))
    def test_exact_entries(self, n):
        dot = canonical_product(n, QQ)
        want = {((i, j), (j, l)) for (i, j) in basis(n) for l in range(j + 1, n + 1)}
        assert set(dot.table) == want

    @pytest.mark.parametrize("n", range(3, 9))
    def test_associative(self, n):
        assert is_associative(canonical_product(n, F5)).associative


class TestEvaluate:
    def test_examples(self):
        dot = canonical_product(3, QQ)
        assert evaluate(dot, E(3, 1, 2) + E(3, 2, 3), E(3, 2, 3)) == E(3, 1, 3)
        P = make_family("Mid4[3,1]", 3, QQ)
        assert evaluate(P, E(3, 2, 3), E(3, 1, 2)) == E(3, 1, 3)

    @given(P=products(3, QQ), y=elements(3, QQ))
    def test_zero_left(self, P, y):
        assert evaluate(P, Element.zero(3, QQ), y).is_zero()

    @given(P=products(3, F7), x=elements(3, F7), y=elements(3, F7), z=elements(3, F7),
           c=st.integers(0, 6))
    def test_bilinear(self, P, x, y, z, c):
        assert evaluate(P, x + y.scale(c), z) == evaluate(P, x, z) + evaluate(P, y, z).scale(c)
        assert evaluate(P, z, x + y.scale(c)) == evaluate(P, z, x) + evaluate(P, z, y).scale(c)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            evaluate(canonical_product(3, QQ), E(4, 1, 2), E(3, 1, 2))
        with pytest.raises(DimensionError):
            evaluate(canonical_product(3, QQ), E(3, 1, 2, F5), E(3, 1, 2, F5))

    def test_element_matmul_matches_canonical(self, rng):
        for n in (3, 4, 5):
            dot = canonical_product(n, QQ)
            for _ in range(20):
                x, y = random_element(n, QQ, rng), random_element(n, QQ, rng)
                assert x * y == evaluate(dot, x, y)


class TestAssociator:
    def test_canonical(self):
        assert associator(canonical_product(4, QQ), E(4, 1, 2), E(4, 2, 3), E(4, 3, 4)).is_zero()

    def test_id_form_examples(self):
        P = lambda_to_product(LambdaVector.of("IdForm8", QQ, l5=1, l7=1))
        assert associator(P, E(3, 1, 2), E(3, 1, 2), E(3, 2, 3)) == E(3, 1, 3)
        Q = lambda_to_product(LambdaVector.of("IdForm8", QQ, l3=1, l7=1))
        assert associator(Q, E(3, 2, 3), E(3, 2, 3), E(3, 2, 3)).is_zero()

    def test_is_associative_reports_first_failure(self):
        P = lambda_to_product(LambdaVector.of("IdForm8", QQ, l5=1, l7=1))
        rep = is_associative(P)
        assert not rep.associative
        assert rep.triple == ((1, 2), (1, 2), (2, 3))
        assert rep.value == E(3, 1, 3)

    def test_structure_one_associative(self):
        P = lambda_to_product(LambdaVector.of("IdForm8", QQ, l3=1, l7=1))
        assert is_associative(P).associative

    @given(P=products(3, F5))
    def test_is_associative_agrees_with_all_triples(self, P):
        units = [Element.unit(3, F5, *e) for e in basis(3)]
        brute = all(associator(P, a, b, c).is_zero() for a in units for b in units for c in units)
        assert is_associative(P).associative == brute


class TestConstructions:
    def test_mutation_examples(self):
        assert mutation_product(4, E(4, 2, 3)).value((1, 2), (3, 4)) == E(4, 1, 4)
        assert mutation_product(3, Element.zero(3, QQ)).is_zero()
        # a . e12 . b needs a to end in 1: impossible
        assert mutation_product(3, E(3, 1, 2)).is_zero()

    def test_mutation_definition(self, rng):
        for n in (3, 4, 5):
            x = random_element(n, QQ, rng)
            M = mutation_product(n, x)
            for a in basis(n):
                for b in basis(n):
                    ea, eb = Element.unit(n, QQ, *a), Element.unit(n, QQ, *b)
                    assert M.value(a, b) == ea * x * eb

    def test_annihilator_examples(self):
        mu = [[0] * 3 for _ in range(3)]
        mu[1][0] = 1
        assert annihilator_structure(4, QQ, mu) == make_family("T1[3,1]", 4, QQ)
        assert annihilator_structure(4, QQ, [[0] * 3] * 3).is_zero()
        P = annihilator_structure(3, QQ, [[1, 1], [1, 1]])
        for a in ((1, 2), (2, 3)):
            for b in ((1, 2), (2, 3)):
                assert P.value(a, b) == E(3, 1, 3)
        assert len(P.table) == 4

    def test_annihilator_shape(self):
        with pytest.raises(DimensionError):
            annihilator_structure(4, QQ, [[1, 2], [3, 4]])

    def test_involution_examples(self):
        phi = involution_map(3, QQ)
        assert phi(E(3, 1, 2)) == E(3, 2, 3)
        assert phi(E(3, 1, 3)) == E(3, 1, 3)
        assert involution_map(5, QQ)(E(5, 2, 4)) == E(5, 2, 4)

    @pytest.mark.parametrize("n", range(3, 8))
    def test_involution_laws(self, n):
        phi = involution_map(n, QQ)
        assert phi.compose(phi) == LinearMap.identity(n, QQ)
        for a in basis(n):
            for b in basis(n):
                ea, eb = Element.unit(n, QQ, *a), Element.unit(n, QQ, *b)
                assert phi(ea * eb) == phi(eb) * phi(ea)

    def test_unitized(self):
        u = UnitizedElement(QQ.one, E(3, 1, 2))
        assert u.lmul(E(3, 2, 3)) == E(3, 2, 3) + E(3, 1, 3)
        assert u.rmul(E(3, 1, 2)) == E(3, 1, 2)


class TestPushforward:
    def test_identity(self, rng):
        P = mutation_product(4, random_element(4, QQ, rng))
        assert pushforward(P, LinearMap.identity(4, QQ)) == P

    def test_opposite_involution_fixes_dot(self):
        for n in (3, 4, 5):
            dot = canonical_product(n, QQ)
            assert opposite_pushforward(dot, involution_map(n, QQ)) == dot
            assert opposite_pushforward(Product.zero(n, QQ), involution_map(n, QQ)).is_zero()

    def test_opposite_of_m12_2(self):
        # derived by hand from a # b = phi(phi(b) * phi(a))
        P = make_family("M12_2[1]", 4, QQ)
        Q = opposite_pushforward(P, involution_map(4, QQ))
        assert Q == Product.from_rules(4, QQ, [((1, 2), (3, 4), (1, 3)),
                                               ((3, 4), (3, 4), (2, 4))])
        assert residual(IdentityKind.MATCH_TWELVE, Q).holds

    def test_singular(self):
        zero = LinearMap(3, QQ, [[0] * 3] * 3)
        assert not zero.is_invertible()
        with pytest.raises(ValueError):
            pushforward(canonical_product(3, QQ), zero)

    def test_inverse(self, rng):
        for _ in range(10):
            mat = [[QQ.random(rng) for _ in range(6)] for _ in range(6)]
            L = LinearMap(4, QQ, mat)
            if L.is_invertible():
                assert L.compose(L.inverse()) == LinearMap.identity(4, QQ)

    def test_random_linear_map_preserves_associativity_status(self, rng):
        for _ in range(20):
            P = lambda_to_product(LambdaVector("IdForm8", F7, [F7.random(rng) for _ in range(8)]))
            mat = [[F7.random(rng) for _ in range(3)] for _ in range(3)]
            L = LinearMap(3, F7, mat)
            if not L.is_invertible():
                continue
            Q = pushforward(P, L)
            assert is_associative(Q).associative == is_associative(P).associative
            assert pushforward(Q, L.inverse()) == P


class TestJson:
    @given(P=products(4, QQ))
    def test_roundtrip_q(self, P):
        text = P.dumps()
        Q = Product.loads(text)
        assert Q == P and Q.dumps() == text

    @given(P=products(3, F7))
    def test_roundtrip_fp(self, P):
        assert Product.from_json(json.loads(P.dumps())) == P

    def test_schema(self):
        P = make_family("Mid1[2,1]", 3, QQ).scale(QQ(-1) / 2)
        data = P.to_json()
        assert data == {"n": 3, "field": "Q", "entries": [
            {"a": [1, 2], "b": [1, 2], "out": [[[1, 2], "-1/2"]]},
            {"a": [1, 2], "b": [1, 3], "out": [[[1, 3], "-1/2"]]},
        ]}

    @pytest.mark.parametrize("data, where", [
        ({"n": 3, "field": "Q"}, "entries"),
        ({"n": 3, "field": "R", "entries": []}, "field"),
        ({"n": 3, "field": "Q", "entries": [{"a": [1, 2], "b": [2, 4], "out": []}]}, "entries[0]"),
        ({"n": 3, "field": "Q", "entries": [{"a": [1, 2], "b": [2, 3],
                                             "out": [[[1, 3], "x"]]}]}, "entries[0]"),
        ({"n": 3, "field": "Q", "entries": [{"a": [1, 2], "b": [2, 3], "out": []},
                                            {"a": [1, 2], "b": [2, 3], "out": []}]}, "entries[1]"),
    ])
    def test_errors_name_the_path(self, data, where):
        with pytest.raises(ValueError, match=r"product JSON"):
            try:
                Product.from_json(data)
            except ValueError as exc:
                if where.startswith("entries["):
                    assert where in str(exc)
                raise


def test_linear_combination_and_arithmetic():
    A = make_family("T1[2,2]", 3, QQ)
    B = make_family("T1[3,1]", 3, QQ)
    C = linear_combination(3, QQ, [2, -1], [A, B])
    assert C == A.scale(2) - B
    assert (C - C).is_zero()
    assert C + B == A + A
