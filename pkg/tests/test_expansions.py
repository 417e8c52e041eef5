import random
from fractions import Fraction

import pytest

from conftest import random_pc_control
from lietool import trees
from lietool.controls import PiecewisePolyControl, primitive
from lietool.coord import chen_coefficient, xi
from lietool.expansions import (cross_coefficient_element, cross_term_check,
                                formal_state, interaction_log, magnus_log,
                                ordered_product, verify_expansions)
from lietool.hall import HallElement, decompose
from lietool.trees import M, W, X0, X1, node
from lietool.words import all_words

ZERO = PiecewisePolyControl.constant(0, 1)
UNIT = PiecewisePolyControl.constant(1, 1)


class TestFormalState:
    def test_zero_control_is_exp_tx0(self):
        state = formal_state(PiecewisePolyControl.constant(0, Fraction(1, 2)), 4)
        t = Fraction(1, 2)
        for k in range(5):
            word = (0,) * k
            assert state.series[word] == t ** k / _fact(k)
        assert sum(1 for c in state.series.coeffs.values() if c) == 5

    def test_single_piece_is_matrix_exponential(self):
        c = Fraction(2, 3)
        state = formal_state(PiecewisePolyControl.constant(c, 1), 3)
        # coefficient of a word in exp(X0 + c X1) is c^(ones)/3!-ish
        for word in all_words(3):
            k = len(word)
            ones = sum(word)
            assert state.series[word] == c ** ones / _fact(k)

    def test_coefficients_match_iterated_integrals(self, rng):
        for _ in range(5):
            u = random_pc_control(rng)
            state = formal_state(u, 4)
            for word in all_words(4):
                assert state.series[word] == chen_coefficient(word, u).exact

    def test_requires_piecewise_constant(self):
        ramp = PiecewisePolyControl((0, 1), ([0, 1],))
        with pytest.raises(ValueError):
            formal_state(ramp, 3)


def _fact(k):
    import math
    return math.factorial(k)


class TestOrderedProduct:
    def test_zero_control(self):
        u = PiecewisePolyControl.constant(0, Fraction(3, 4))
        assert ordered_product(u, 4) == formal_state(u, 4).series

    def test_matches_formal_state(self, rng):
        for _ in range(6):
            u = random_pc_control(rng)
            assert ordered_product(u, 5) == formal_state(u, 5).series

    def test_degree_one_coefficients(self, rng):
        u = random_pc_control(rng)
        series = ordered_product(u, 3)
        assert series[(0,)] == u.horizon
        assert series[(1,)] == primitive(u, 1).end_value()


class TestInteractionLog:
    def test_eta_x0_vanishes(self, rng):
        for _ in range(5):
            eta = interaction_log(random_pc_control(rng), 4)
            assert eta[X0] == 0

    def test_eta_x1_is_first_primitive(self, rng):
        u = random_pc_control(rng)
        eta = interaction_log(u, 4)
        assert eta[X1] == primitive(u, 1).end_value()

    def test_eta_m1_no_cross_terms(self, rng):
        u = random_pc_control(rng)
        eta = interaction_log(u, 4)
        assert eta[M(1)] == primitive(u, 2).end_value()
        assert eta[M(1)] == xi(M(1), u).exact

    def test_lie_residual_is_zero_by_construction(self, rng):
        # would raise InternalConsistencyError otherwise
        interaction_log(random_pc_control(rng), 5)


class TestMagnusUsual:
    def test_degree_one_coordinates(self, rng):
        u = random_pc_control(rng)
        zeta = magnus_log(u, 4)
        assert zeta[X0] == u.horizon
        assert zeta[X1] == primitive(u, 1).end_value()


class TestCrossCoefficients:
    def test_two_factor_anchor(self):
        m1 = HallElement.of(M(1))
        x1 = HallElement.of(X1)
        got = cross_coefficient_element([m1, x1], [1, 1])
        # (1/2)[M1, X1] = -(1/2) W(1,0)
        assert got == {W(1, 0).text: Fraction(-1, 2)}

    def test_two_factor_higher_anchor(self):
        m1 = HallElement.of(M(1))
        x1 = HallElement.of(X1)
        got = cross_coefficient_element([m1, x1], [2, 1])
        want = {e.tree.text: c / 12 for e, c in
                decompose(node(M(1), node(M(1), X1))).coeffs.items()}
        assert got == want

    def test_three_factor_value(self):
        # brute-force-verified trilinear term of the iterated product log:
        # (1/3)[Y1,[Y2,Y3]] - (1/6)[Y2,[Y1,Y3]]
        w1 = HallElement.of(W(1, 0))
        m1 = HallElement.of(M(1))
        x1 = HallElement.of(X1)
        got = cross_coefficient_element([w1, m1, x1], [1, 1, 1])
        first = decompose(node(W(1, 0), node(M(1), X1)))
        second = decompose(node(M(1), node(W(1, 0), X1)))
        want = (first.scale(Fraction(1, 3)) - second.scale(Fraction(1, 6)))
        assert got == {e.tree.text: c for e, c in want.coeffs.items()}


class TestCrossTermCheck:
    def test_all_elements_match_up_to_length_four(self, rng):
        for _ in range(4):
            u = random_pc_control(rng)
            reports = cross_term_check(u, cutoff=4)
            assert reports and all(r.matched for r in reports)

    def test_single_control_layer_has_no_cross_terms(self, rng):
        u = random_pc_control(rng)
        for report in cross_term_check(u, cutoff=4):
            if report.element.n1 == 1:
                assert report.cross_sum == 0
                assert report.eta == report.xi

    def test_zero_control_trivial(self):
        for report in cross_term_check(ZERO, cutoff=4):
            assert report.eta == 0 and report.xi == 0

    def test_w1_cross_term_is_product_of_lower_coordinates(self, rng):
        u = random_pc_control(rng)
        reports = {r.element: r for r in cross_term_check(u, cutoff=3)}
        w1 = HallElement.of(W(1, 0))
        # eta - xi = -(1/2) xi_{M1} xi_{X1} (single CBH pair M1 > X1)
        expected = -Fraction(1, 2) * xi(M(1), u).exact * xi(X1, u).exact
        assert reports[w1].eta - reports[w1].xi == expected


def test_verify_expansions_all_pass():
    outcomes = verify_expansions(degree=4, trials=6, seed=11)
    assert all(passed for _, passed in outcomes)
