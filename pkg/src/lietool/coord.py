"""Iterated-integral functionals of a control attached to Hall elements.

The coordinate of the second kind of a Hall element b is defined recursively:
xi_{X0}(t,u) = t, xi_{X1}(t,u) = u_1(t), and, factoring b = ad_{b1}^m(b2)
with m maximal,

    xi_b(t,u) = (1/m!) int_0^t xi_{b1}(s,u)^m  d xi_{b2}(s,u).

For exact piecewise-polynomial controls every xi_b(s, .) is itself an exact
piecewise polynomial in s, so values are exact rationals.  For sampled
controls the same recursion runs through cumulative trapezoid sums and the
result carries a Richardson error estimate.

Closed forms exist for every element whose germ lies in the eight named
families (M, W, P, Q, Qs, Qf, R, Rs); `xi_closed_form` evaluates them with
the combinatorial prefactors alpha/beta/gamma and is an independent path
cross-checked against the recursion in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import trees
from .controls import (ControlSignal, PiecewisePolyControl, Poly,
                       SampledControl, primitive)
from .hall import HallElement, hall_factor
from .trees import BracketTree, X0, X1, strip_trailing_zeros
from .words import Word


@dataclass(frozen=True)
class XiValue:
    """Exact rational (piecewise-polynomial path) or float with error bar."""

    exact: Optional[Fraction] = None
    approx: Optional[float] = None
    error_estimate: Optional[float] = None

    def __float__(self) -> float:
        return float(self.exact) if self.exact is not None else self.approx

    def __repr__(self) -> str:
        if self.exact is not None:
            return f"XiValue({self.exact})"
        return f"XiValue(~{self.approx:.6g} +- {self.error_estimate:.2g})"


def _as_tree(b) -> BracketTree:
    if isinstance(b, HallElement):
        return b.tree
    if isinstance(b, str):
        return trees.parse_tree(b)
    return b


# ---------------------------------------------------------------------------
# exact path

# memo tables die with their control: weak keys avoid stale-id collisions
_XI_CACHE: "weakref.WeakKeyDictionary[PiecewisePolyControl, dict]" = None


def _control_cache(u: PiecewisePolyControl) -> dict:
    global _XI_CACHE
    if _XI_CACHE is None:
        import weakref
        _XI_CACHE = weakref.WeakKeyDictionary()
    cache = _XI_CACHE.get(u)
    if cache is None:
        cache = {}
        _XI_CACHE[u] = cache
    return cache


def xi_path(b, u: PiecewisePolyControl) -> PiecewisePolyControl:
    """The function s -> xi_b(s, u) on [0, t], exact."""
    tree = _as_tree(b)
    cache = _control_cache(u)
    cached = cache.get(tree.text)
    if cached is not None:
        return cached
    if tree is X0:
        out = PiecewisePolyControl((0, u.horizon), (Poly((0, 1)),))
    elif tree is X1:
        out = u.antiderivative()
    else:
        b1, m, b2 = hall_factor(tree)
        base = xi_path(b1, u).power(m)
        dxi2 = _xi_derivative(b2, u)
        out = (base * dxi2).antiderivative().scale(
            Fraction(1, math.factorial(m)))
    return cache.setdefault(tree.text, out)


def _xi_derivative(b: BracketTree, u: PiecewisePolyControl) -> PiecewisePolyControl:
    """d/ds xi_b(s, u) as a piecewise polynomial (a.e.)."""
    if b is X0:
        return PiecewisePolyControl.constant(1, u.horizon)
    if b is X1:
        return u
    b1, m, b2 = hall_factor(b)
    return (xi_path(b1, u).power(m) * _xi_derivative(b2, u)).scale(
        Fraction(1, math.factorial(m)))


# ---------------------------------------------------------------------------
# sampled path

def _xi_dot_sampled(b: BracketTree, u: SampledControl) -> SampledControl:
    if b is X0:
        return SampledControl(u.horizon, [1.0] * u.values.size)
    if b is X1:
        return u
    b1, m, b2 = hall_factor(b)
    base = _xi_sampled(b1, u).values ** m
    dot2 = _xi_dot_sampled(b2, u).values
    return SampledControl(u.horizon, base * dot2 / math.factorial(m))


def _xi_sampled(b: BracketTree, u: SampledControl) -> SampledControl:
    return _xi_dot_sampled(b, u).cumulative()


def xi(b, u: ControlSignal) -> XiValue:
    """xi_b(t, u): exact for piecewise-polynomial u, estimated for samples."""
    tree = _as_tree(b)
    if isinstance(u, PiecewisePolyControl):
        return XiValue(exact=xi_path(tree, u).end_value())
    fine = float(_xi_sampled(tree, u).values[-1])
    coarse = float(_xi_sampled(tree, u.coarsened()).values[-1])
    return XiValue(approx=fine, error_estimate=abs(fine - coarse))


# ---------------------------------------------------------------------------
# closed forms for the named families

def alpha_coeff(j: int, k: int) -> Fraction:
    return Fraction(1, 2) if j < k else Fraction(1, 6)


def beta_coeff(j: int, k: int, l: int) -> Fraction:
    if k < l:
        return alpha_coeff(j, k)
    if j < k == l:
        return Fraction(1, 4)
    return Fraction(1, 24)  # j == k == l


def gamma_coeff(j: int, k: int, l: int, m: int) -> Fraction:
    if l < m:
        return beta_coeff(j, k, l)
    if j == k == l == m:
        return Fraction(1, 120)
    if j < k < l == m:
        return Fraction(1, 4)
    return Fraction(1, 12)  # j < k == l == m or j == k < l == m


@dataclass(frozen=True)
class FamilyPattern:
    family: str
    indices: tuple[int, ...]
    nu: int


def match_named_family(b) -> Optional[FamilyPattern]:
    """Structural match of a Hall element against the eight named families."""
    tree = _as_tree(b)
    core, nu = strip_trailing_zeros(tree)
    m = trees._match_M(tree)
    if m is not None:
        return FamilyPattern("M", (), m)
    w = trees._match_W(tree)
    if w is not None:
        return FamilyPattern("W", (w[0],), w[1])
    p = trees._match_P_germ(core)
    if p is not None:
        return FamilyPattern("P", p, nu)
    q = trees._match_Q_germ(core)
    if q is not None:
        return FamilyPattern("Q", q, nu)
    if not core.is_leaf:
        wl = trees._match_W(core.left)
        if wl is not None:
            j, mu = wl
            wr = trees._match_W(core.right)
            if wr is not None:
                k, nur = wr
                if nur == 0 and k != j:
                    return FamilyPattern("Qs", (j, mu, k), nu)
                if k == j and nur == mu + 1:
                    return FamilyPattern("Qf", (j, mu), nu)
            pr = trees._match_P_germ(core.right)
            if pr is not None:
                return FamilyPattern("Rs", (pr[0], pr[1], j, mu), nu)
        ml = trees._match_M(core.left)
        if ml is not None:
            qr = trees._match_Q_germ(core.right)
            if qr is not None:
                return FamilyPattern("R", (*qr, ml + 1), nu)
    return None


def _kernel_primitive(f: PiecewisePolyControl, order: int) -> PiecewisePolyControl:
    """s -> int_0^s (s-r)^order/order! f(r) dr as a piecewise polynomial."""
    out = f
    for _ in range(order + 1):
        out = out.antiderivative()
    return out


def xi_closed_form(b, u: PiecewisePolyControl) -> XiValue:
    """Closed-form xi for elements of the eight named families, exact."""
    if not isinstance(u, PiecewisePolyControl):
        raise TypeError("closed forms are evaluated on exact controls")
    pattern = match_named_family(b)
    if pattern is None:
        raise ValueError(
            f"{_as_tree(b).text} is outside the named families")
    fam, idx, nu = pattern.family, pattern.indices, pattern.nu
    uj = [None]  # 1-based: uj[j] = j-th primitive path
    max_primitive = 1 + max([1, *idx]) if fam != "M" else nu + 1

    def prim(j: int) -> PiecewisePolyControl:
        while len(uj) <= j:
            uj.append((uj[-1] if len(uj) > 1 else u).antiderivative())
        return uj[j]

    if fam == "M":
        return XiValue(exact=prim(nu + 1).end_value())
    if fam == "W":
        (j,) = idx
        integrand = prim(j).power(2).scale(Fraction(1, 2))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "P":
        j, k = idx
        integrand = (prim(k) * prim(j).power(2)).scale(alpha_coeff(j, k))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "Q":
        j, k, l = idx
        integrand = (prim(l) * prim(k) * prim(j).power(2)).scale(
            beta_coeff(j, k, l))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "Qf":
        j, mu = idx
        inner = _kernel_primitive(prim(j).power(2), mu)
        integrand = inner.power(2).scale(Fraction(1, 8))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "Qs":
        j, mu, k = idx
        inner = _kernel_primitive(prim(j).power(2), mu)
        integrand = (inner * prim(k).power(2)).scale(Fraction(1, 4))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "R":
        j, k, l, m = idx
        integrand = (prim(m) * prim(l) * prim(k) * prim(j).power(2)).scale(
            gamma_coeff(j, k, l, m))
        return XiValue(exact=integrand.kernel_integral(nu))
    if fam == "Rs":
        j, k, l, mu = idx
        inner = _kernel_primitive(prim(l).power(2), mu)
        integrand = (inner * prim(k) * prim(j).power(2)).scale(
            alpha_coeff(j, k) / 2)
        return XiValue(exact=integrand.kernel_integral(nu))
    raise AssertionError(fam)


# ---------------------------------------------------------------------------
# Chen coefficients

def chen_coefficient_path(word: Word, u: PiecewisePolyControl) -> PiecewisePolyControl:
    """s -> coefficient of `word` in the word-series state at time s.

    Convention: the LAST letter of the word is the outermost integral.
    """
    path = PiecewisePolyControl.constant(1, u.horizon)
    for letter in word:
        v = PiecewisePolyControl.constant(1, u.horizon) if letter == 0 else u
        path = (path * v).antiderivative()
    return path


def chen_coefficient(word: Word, u: ControlSignal) -> XiValue:
    if isinstance(u, PiecewisePolyControl):
        return XiValue(exact=chen_coefficient_path(word, u).end_value())

    def run(signal: SampledControl) -> float:
        ones = SampledControl(signal.horizon, [1.0] * signal.values.size)
        path = ones
        for letter in word:
            v = ones if letter == 0 else signal
            path = SampledControl(signal.horizon,
                                  path.values * v.values).cumulative()
        return float(path.values[-1])

    fine = run(u)
    coarse = run(u.coarsened())
    return XiValue(approx=fine, error_estimate=abs(fine - coarse))


# ---------------------------------------------------------------------------
# constant-explicit inequality suite

def rough_bound_constant(k: int) -> Fraction:
    """The explicit chain c(1)=4, c(k) = 2^(k+2) c(k-1)."""
    c = Fraction(4)
    for i in range(2, k + 1):
        c *= 2 ** (i + 2)
    return c


@dataclass
class InequalityResult:
    name: str
    applicable: bool
    lhs: Optional[float]
    rhs: Optional[float]
    passed: Optional[bool]
    note: str = ""

    def line(self) -> str:
        if not self.applicable:
            return f"{self.name}: not applicable ({self.note})"
        status = "pass" if self.passed else "FAIL"
        return f"{self.name}: {status} (lhs={self.lhs:.6g} <= rhs={self.rhs:.6g})"


_REL_TOL = 1e-9
_ABS_TOL = 1e-12


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs * (1 + _REL_TOL) + _ABS_TOL


def check_inequalities(u: PiecewisePolyControl,
                       stefani_orders: tuple[int, ...] = (1, 2, 3),
                       primitive_norm_cases: tuple[tuple[int, int, float], ...]
                       = ((2, 1, 2.0), (3, 1, float("inf")), (3, 2, 1.0)),
                       rough_cases: tuple[str, ...] =
                       ("M(2)", "W(1,0)", "W(2,1)", "P(1,1,0)"),
                       ) -> list[InequalityResult]:
    """Evaluate every constant-explicit inequality on one control.

    Returns one result per inequality with both side values; the inequality
    requiring u_1(t) = 0 is reported not-applicable when the precondition
    fails.
    """
    results: list[InequalityResult] = []
    t = float(u.horizon)
    u1 = u.antiderivative()
    u1_sup = u1.sup_norm()

    # interpolation: ||u1||_{2k+1}^{2k+1} <= ||u1||_inf ||u1||_{2k}^{2k}
    for k in stefani_orders:
        lhs = u1.abs_power_integral(2 * k + 1)
        rhs = u1_sup * float(u1.even_power_integral(2 * k))
        results.append(InequalityResult(
            f"odd-power interpolation k={k}", True, lhs, rhs, _leq(lhs, rhs)))

    # |xi_{P(1,1,1)}|^2 <= 2 t xi_D  (Cauchy-Schwarz, exact rationals)
    lhs_exact = xi(trees.parse_tree("P(1,1,1)"), u).exact ** 2
    rhs_exact = 2 * Fraction(u.horizon) * xi(trees.parse_tree("D"), u).exact
    results.append(InequalityResult(
        "squared-P(1,1,1) vs D", True, float(lhs_exact), float(rhs_exact),
        lhs_exact <= rhs_exact))

    # int |u1|^5 <= 3 ||u||_inf (int u1^2)^2, requires u1(t) = 0
    if u1.end_value() != 0:
        results.append(InequalityResult(
            "quintic vs squared-quadratic", False, None, None, None,
            note="requires u1(t) = 0"))
    else:
        lhs = u1.abs_power_integral(5)
        rhs = 3 * u.sup_norm() * float(u1.even_power_integral(2)) ** 2
        results.append(InequalityResult(
            "quintic vs squared-quadratic", True, lhs, rhs, _leq(lhs, rhs)))

    # ||u_j||_p <= t^(j-j0)/(j-j0)! ||u_j0||_p
    for j, j0, p in primitive_norm_cases:
        upj = primitive(u, j)
        upj0 = primitive(u, j0)
        lhs = upj.lp_norm(p)
        rhs = t ** (j - j0) / math.factorial(j - j0) * upj0.lp_norm(p)
        results.append(InequalityResult(
            f"primitive norm j={j} j0={j0} p={p}", True, lhs, rhs,
            _leq(lhs, rhs)))

    # rough bound |xi_b| <= (c(k) t)^|b| / |b|! t^-(1+k) ||u1||_k^k
    for text in rough_cases:
        tree = trees.parse_tree(text)
        k = tree.n1
        c = float(rough_bound_constant(k))
        lhs = abs(float(xi(tree, u).exact))
        norm_k = u1.abs_power_integral(k)
        rhs = ((c * t) ** tree.length / math.factorial(tree.length)
               * t ** (-(1 + k)) * norm_k)
        results.append(InequalityResult(
            f"rough bound {text}", True, lhs, rhs, _leq(lhs, rhs)))

    return results
