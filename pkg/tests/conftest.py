import random
from fractions import Fraction

import pytest

from lietool.controls import PiecewisePolyControl, Poly
from lietool.trees import X0, X1, BracketTree, node


def random_tree(rng: random.Random, length: int) -> BracketTree:
    """Uniform-ish random bracket tree with exactly `length` leaves."""
    if length == 1:
        return X1 if rng.random() < 0.5 else X0
    split = rng.randint(1, length - 1)
    return node(random_tree(rng, split), random_tree(rng, length - split))


def random_carrier_tree(rng: random.Random, length: int,
                        allow_x0: bool = True) -> BracketTree:
    """Random tree in which X0 never occurs as a left factor."""
    if length == 1:
        return X0 if allow_x0 and rng.random() < 0.4 else X1
    split = rng.randint(1, length - 1)
    return node(random_carrier_tree(rng, split, allow_x0=False),
                random_carrier_tree(rng, length - split))


def random_poly_control(rng: random.Random, horizon=Fraction(1),
                        max_pieces: int = 3, max_degree: int = 2,
                        denominator: int = 4) -> PiecewisePolyControl:
    """Random exact control: few pieces, low degree, small rationals."""
    pieces = rng.randint(1, max_pieces)
    grid = 12
    cuts = sorted(rng.sample(range(1, grid), pieces - 1)) if pieces > 1 else []
    breakpoints = [Fraction(0)]
    breakpoints += [Fraction(c, grid) * horizon for c in cuts]
    breakpoints.append(Fraction(horizon))
    polys = []
    for _ in range(pieces):
        degree = rng.randint(0, max_degree)
        coeffs = [Fraction(rng.randint(-denominator, denominator), denominator)
                  for _ in range(degree + 1)]
        polys.append(Poly(coeffs))
    return PiecewisePolyControl(breakpoints, polys)


def random_pc_control(rng: random.Random, horizon=Fraction(1),
                      pieces: int = 3) -> PiecewisePolyControl:
    """Random piecewise-constant control with rational data."""
    grid = 12
    cuts = sorted(rng.sample(range(1, grid), pieces - 1)) if pieces > 1 else []
    breakpoints = [Fraction(0)]
    breakpoints += [Fraction(c, grid) * horizon for c in cuts]
    breakpoints.append(Fraction(horizon))
    values = [Fraction(rng.randint(-6, 6), rng.randint(1, 4))
              for _ in range(pieces)]
    return PiecewisePolyControl.piecewise_constant(breakpoints, values)


@pytest.fixture
def rng():
    return random.Random(20240831)
