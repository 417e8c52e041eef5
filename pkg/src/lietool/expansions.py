"""Truncated state expansions for piecewise-constant controls.

Four exact views of the same word series, all computed at a degree cutoff:

* :func:`formal_state` - the state as an ordered product of piece
  exponentials exp(dt (X0 + u X1)) (the exact flow of the right-invariant
  formal ODE for piecewise-constant inputs);
* the letter-by-letter iterated-integral coefficients from
  :mod:`lietool.coord` (cross-checked in tests rather than recomputed here);
* :func:`ordered_product` - the infinite ordered product of Hall-element
  exponentials exp(xi_b E(b)), made finite by keeping |b| <= cutoff, factors
  decreasing from left to right (X0 leftmost, X1 rightmost);
* :func:`interaction_log` - the logarithm after factoring exp(t X0) out on
  the left, whose coefficients on the Hall basis are the coordinates of the
  pseudo-first kind eta_b.

The eta-vs-xi cross terms come from the multivariate
Campbell-Baker-Hausdorff-Dynkin expansion of the ordered product; the
coefficient elements are extracted symbolically in
:func:`cross_coefficient_element` by running the same machinery with
polynomial indeterminates as magnitudes, and the per-element identity is
verified by :func:`cross_term_check`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .controls import PiecewisePolyControl
from .coord import xi
from .hall import (HallElement, InternalConsistencyError,
                   basis_up_to_length, decompose_series)
from .polynomials import SparsePoly
from .trees import X0, X1
from .words import TensorSeries, expand_to_words, word_bidegree


@dataclass
class FormalState:
    """Truncated word series of the state with its provenance."""

    series: TensorSeries
    horizon: Fraction
    control: PiecewisePolyControl

    def coefficient(self, word):
        return self.series[word]


def _require_piecewise_constant(u: PiecewisePolyControl) -> None:
    if not isinstance(u, PiecewisePolyControl) or not u.is_piecewise_constant():
        raise ValueError("the formal layer needs a piecewise-constant control "
                         "with rational breakpoints and values")


def formal_state(u: PiecewisePolyControl, cutoff: int) -> FormalState:
    """Exact truncated solution of the formal ODE at the horizon."""
    _require_piecewise_constant(u)
    state = TensorSeries.unit(cutoff)
    for i, piece in enumerate(u.pieces):
        dt = u.breakpoints[i + 1] - u.breakpoints[i]
        value = piece.eval(Fraction(0))
        generator = (TensorSeries.from_word((0,), cutoff, dt)
                     + TensorSeries.from_word((1,), cutoff, dt * value))
        state = state * generator.exp()
    return FormalState(series=state, horizon=u.horizon, control=u)


def ordered_product(u: PiecewisePolyControl, cutoff: int) -> TensorSeries:
    """Product of exp(xi_b E(b)) over Hall elements with |b| <= cutoff.

    Factors are ordered decreasing left to right (X0 leftmost, X1 rightmost);
    omitted factors only touch degrees beyond the cutoff, so the result is
    exactly the truncated state.
    """
    _require_piecewise_constant(u)
    elements = basis_up_to_length(cutoff)
    out = TensorSeries.unit(cutoff)
    for element in sorted(elements, reverse=True):
        value = xi(element, u).exact
        if not value:
            continue
        factor = expand_to_words(element.tree, cutoff).scale(value)
        out = out * factor.exp()
    return out


@dataclass
class EtaTable:
    """Coordinates of the pseudo-first kind for |b| <= cutoff."""

    cutoff: int
    horizon: Fraction
    values: dict[HallElement, Fraction] = field(default_factory=dict)

    def __getitem__(self, element) -> Fraction:
        return self.values.get(HallElement.of(element), Fraction(0))

    def items_sorted(self):
        return sorted(self.values.items(), key=lambda kv: kv[0])


def _log_after_factoring_x0(series: TensorSeries, t: Fraction,
                            cutoff: int) -> TensorSeries:
    minus_tx0 = TensorSeries.from_word((0,), cutoff, -Fraction(t))
    return (minus_tx0.exp() * series).log()


def series_to_eta(log_series: TensorSeries, cutoff: int, horizon: Fraction) -> EtaTable:
    """Decompose a Lie word-series onto the Hall basis, bidegree by bidegree."""
    table = EtaTable(cutoff=cutoff, horizon=horizon)
    buckets: dict[tuple[int, int], dict] = {}
    for w, c in log_series.coeffs.items():
        if not c:
            continue
        buckets.setdefault(word_bidegree(w), {})[w] = c
    for (p, q), coeffs in sorted(buckets.items()):
        part = TensorSeries(cutoff, coeffs)
        element = decompose_series(part, p, q)
        for k, v in element.coeffs.items():
            table.values[k] = v
    return table


def interaction_log(u: PiecewisePolyControl, cutoff: int) -> EtaTable:
    """eta_b table from log(exp(-t X0) * state); exact, residual-checked.

    The X0-only components must cancel identically (eta_{X0} = 0); any
    surviving (0, q) word triggers an internal-consistency failure inside the
    bidegree decomposition.
    """
    _require_piecewise_constant(u)
    state = formal_state(u, cutoff)
    log_series = _log_after_factoring_x0(state.series, u.horizon, cutoff)
    for w, c in log_series.coeffs.items():
        if c and word_bidegree(w)[0] == 0:
            raise InternalConsistencyError(
                "factoring exp(t X0) left a pure-X0 term")
    return series_to_eta(log_series, cutoff, u.horizon)


def magnus_log(u: PiecewisePolyControl, cutoff: int) -> EtaTable:
    """Coordinates of the first kind: log of the full state on the basis."""
    _require_piecewise_constant(u)
    state = formal_state(u, cutoff)
    return series_to_eta(state.series.log(), cutoff, u.horizon)


# ---------------------------------------------------------------------------
# cross-term coefficient elements

_CROSS_CACHE: dict[tuple, dict[str, Fraction]] = {}


def cross_coefficient_element(elements: Sequence[HallElement],
                              powers: Sequence[int]) -> dict[str, Fraction]:
    """Hall coefficients of the CBHD cross term for a factor pattern.

    For Hall elements b_1 > ... > b_q (that order) and multiplicities h,
    returns the Hall-basis expansion of the coefficient of
    x_1^{h_1} ... x_q^{h_q} in log(prod_i exp(x_i E(b_i))) with the product
    ordered decreasing left to right.  Keys are canonical tree texts.
    """
    key = tuple((e.tree.text, h) for e, h in zip(elements, powers))
    cached = _CROSS_CACHE.get(key)
    if cached is not None:
        return cached
    q = len(elements)
    degree = sum(e.length * h for e, h in zip(elements, powers))
    one = SparsePoly.constant(q, 1)
    product = TensorSeries.unit(degree, one)
    for i, element in enumerate(elements):
        xi_var = SparsePoly.variable(q, i)
        factor = TensorSeries(
            degree,
            {w: xi_var * c
             for w, c in expand_to_words(element.tree, degree).coeffs.items()})
        product = product * factor.exp()
    log_series = product.log()
    target = tuple(powers)
    word_coeffs = {}
    for w, poly in log_series.coeffs.items():
        c = poly.coefficient(target)
        if c:
            word_coeffs[w] = c
    if not word_coeffs:
        result: dict[str, Fraction] = {}
    else:
        bidegrees = {word_bidegree(w) for w in word_coeffs}
        result = {}
        for (p, qq) in bidegrees:
            part = TensorSeries(
                degree, {w: c for w, c in word_coeffs.items()
                         if word_bidegree(w) == (p, qq)})
            for elem, val in decompose_series(part, p, qq).coeffs.items():
                result[elem.tree.text] = val
    return _CROSS_CACHE.setdefault(key, result)


def _factor_patterns(target: HallElement, pool: Sequence[HallElement]):
    """All (b_1 > ... > b_q, h) with q >= 2 matching the target bidegree."""
    n1_t, n0_t = target.bidegree
    usable = [e for e in pool
              if e.tree is not X0
              and e.n1 <= n1_t and e.n0 <= n0_t and e.length < target.length]
    usable.sort(reverse=True)

    def recurse(start: int, n1_left: int, n0_left: int, chosen):
        if n1_left == 0 and n0_left == 0:
            if len(chosen) >= 2 or (len(chosen) == 1 and chosen[0][1] >= 2):
                if sum(h for _, h in chosen) >= 2:
                    yield tuple(chosen)
            return
        for i in range(start, len(usable)):
            e = usable[i]
            if e.n1 > n1_left or e.n0 > n0_left:
                continue
            max_h = target.length // e.length
            for h in range(1, max_h + 1):
                if e.n1 * h > n1_left or e.n0 * h > n0_left:
                    break
                chosen.append((e, h))
                yield from recurse(i + 1, n1_left - e.n1 * h,
                                   n0_left - e.n0 * h, chosen)
                chosen.pop()

    yield from recurse(0, n1_t, n0_t, [])


@dataclass
class CrossTermReport:
    element: HallElement
    eta: Fraction
    xi: Fraction
    cross_sum: Fraction
    matched: bool

    def line(self) -> str:
        status = "ok" if self.matched else "MISMATCH"
        return (f"{self.element!r}: eta={self.eta} xi={self.xi} "
                f"cross={self.cross_sum} [{status}]")


def cross_term_check(u: PiecewisePolyControl, cutoff: int = 4) -> list[CrossTermReport]:
    """Verify eta_b - xi_b against the explicit CBHD cross-term sum.

    Checked for every Hall element with length <= cutoff.  Cross terms run
    over decreasing tuples b_1 > ... > b_q (X0 excluded) whose weighted
    bidegrees sum to the target's.
    """
    _require_piecewise_constant(u)
    eta = interaction_log(u, cutoff)
    pool = [e for e in basis_up_to_length(cutoff - 1) if e.tree is not X0]
    xi_cache: dict[str, Fraction] = {}

    def xi_of(element: HallElement) -> Fraction:
        key = element.tree.text
        if key not in xi_cache:
            xi_cache[key] = xi(element, u).exact
        return xi_cache[key]

    reports = []
    for target in basis_up_to_length(cutoff):
        if target.tree is X0:
            continue
        total = Fraction(0)
        for pattern in _factor_patterns(target, pool):
            elements = [e for e, _ in pattern]
            powers = [h for _, h in pattern]
            coeff = cross_coefficient_element(elements, powers).get(
                target.tree.text)
            if not coeff:
                continue
            prod = coeff
            for e, h in pattern:
                prod *= xi_of(e) ** h
            total += prod
        eta_val = eta[target]
        xi_val = xi_of(target)
        reports.append(CrossTermReport(
            element=target, eta=eta_val, xi=xi_val, cross_sum=total,
            matched=(eta_val - xi_val == total)))
    return reports


def verify_expansions(degree: int, trials: int, seed: int = 0) -> list[tuple[str, bool]]:
    """Randomized identity checks between the four state views.

    Returns (identity name, passed) pairs; all exact comparisons.
    """
    import random

    from .coord import chen_coefficient

    rng = random.Random(seed)
    outcomes = {
        "formal_state == chen coefficients": True,
        "formal_state == ordered_product": True,
        "interaction_log: eta_X0 = 0, eta_X1 = u1(t)": True,
        "magnus_log: zeta_X0 = t, zeta_X1 = u1(t)": True,
        "interaction_log is a Lie series (zero residual)": True,
    }
    for _ in range(trials):
        pieces = rng.randint(1, 3)
        cuts = sorted(rng.sample(range(1, 12), pieces - 1))
        breakpoints = [Fraction(0)]
        breakpoints += [Fraction(c, 12) for c in cuts]
        breakpoints.append(Fraction(1))
        values = [Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                  for _ in range(pieces)]
        u = PiecewisePolyControl.piecewise_constant(breakpoints, values)
        state = formal_state(u, degree)
        for w, c in state.series.coeffs.items():
            if chen_coefficient(w, u).exact != c:
                outcomes["formal_state == chen coefficients"] = False
        if ordered_product(u, degree) != state.series:
            outcomes["formal_state == ordered_product"] = False
        try:
            eta = interaction_log(u, degree)
        except InternalConsistencyError:
            outcomes["interaction_log is a Lie series (zero residual)"] = False
            continue
        u1t = u.antiderivative().end_value()
        if eta[X0] != 0 or eta[X1] != u1t:
            outcomes["interaction_log: eta_X0 = 0, eta_X1 = u1(t)"] = False
        zeta = magnus_log(u, degree)
        if zeta[X0] != u.horizon or zeta[X1] != u1t:
            outcomes["magnus_log: zeta_X0 = t, zeta_X1 = u1(t)"] = False
    return list(outcomes.items())
