import json
import random
from fractions import Fraction

import pytest

from conftest import random_tree
from lietool import trees
from lietool.fields import (PolyVectorField, SystemDef, eval_bracket,
                            eval_lie, system_from_json_dict,
                            system_to_json_dict, vf_bracket)
from lietool.hall import decompose
from lietool.polynomials import SparsePoly
from lietool.trees import M, P, W, X0, X1, ad
from lietool.zoo import zoo


def _field(dim, comps):
    return PolyVectorField(dim, [SparsePoly(dim, t) for t in comps])


class TestBracket:
    def test_constant_vs_linear(self):
        # f = e1, g = x1 e2 -> [f, g] = e2
        f = PolyVectorField.constant(2, (1, 0))
        g = _field(2, [{}, {(1, 0): Fraction(1)}])
        assert vf_bracket(f, g).value_at_zero() == (0, 1)
        assert vf_bracket(f, g).components[1].is_constant()

    def test_self_bracket_vanishes(self):
        g = _field(2, [{(0, 1): Fraction(2)}, {(1, 1): Fraction(1)}])
        assert not vf_bracket(g, g)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            vf_bracket(PolyVectorField.constant(2, (1, 0)),
                       PolyVectorField.constant(3, (1, 0, 0)))

    def test_double_input_bracket_on_benchmark(self):
        # [f1,[f1,f0]](0) is the order-2 square bracket value
        easy = zoo("easy")
        inner = vf_bracket(easy.f1, easy.f0)
        outer = vf_bracket(easy.f1, inner)
        assert outer.value_at_zero() == (0, 0, 2)
        assert eval_bracket(easy, W(1, 0)) == (0, 0, 2)


class TestEval:
    def test_easy_cubic(self):
        assert eval_bracket(zoo("easy"), P(1, 1, 0)) == (0, 0, -6)

    def test_jakubczyk_values(self):
        sys = zoo("jakubczyk")
        assert eval_bracket(sys, P(1, 1, 0)) == (0, 0, 6)
        assert eval_bracket(sys, W(2, 0)) == (0, 0, 2)

    def test_sextic_values(self):
        sys = zoo("sextic", p=8)
        assert eval_bracket(sys, trees.D()) == (0, 0, 0, 72)
        import math
        assert eval_bracket(sys, ad(M(1), 8, X0)) == (0, 0, 0, -math.factorial(8))

    def test_homomorphism_on_random_trees(self, rng):
        systems = [zoo("easy"), zoo("no_zm_pure"), zoo("w3_vs_q111"),
                   zoo("sextic", p=7)]
        for _ in range(25):
            tree = random_tree(rng, rng.randint(1, 7))
            element = decompose(tree)
            for sys in systems:
                assert eval_lie(sys, element) == eval_bracket(sys, tree)

    def test_h0_stability(self, rng):
        # f_{b 0^nu}(0) = H0^nu f_b(0), via the full symbolic route
        for sys in [zoo("easy"), zoo("w3_vs_qb10"), zoo("w3_time")]:
            for base in (X1, M(1), W(1, 0), P(1, 1, 0)):
                value = sys.bracket_field(base).value_at_zero()
                for nu in range(1, 6):
                    tree = trees.zeros(base, nu)
                    symbolic = sys.bracket_field(tree).value_at_zero()
                    value = sys.h0_apply(value)
                    assert symbolic == value
                    assert eval_bracket(sys, tree) == value


class TestSystemDef:
    def test_f0_must_vanish_at_zero(self):
        bad = PolyVectorField.constant(2, (1, 0))
        with pytest.raises(ValueError):
            SystemDef(dim=2, f0=bad, f1=bad)

    def test_json_round_trip(self):
        sys = zoo("w2_vs_q111")
        payload = json.loads(json.dumps(system_to_json_dict(sys)))
        again = system_from_json_dict(payload)
        assert again.dim == sys.dim
        assert again.f0 == sys.f0 and again.f1 == sys.f1
        assert eval_bracket(again, W(2, 0)) == (0, 0, 2)
