"""The Hall set over {X0, X1} adapted to trailing-X0 brackets.

The carrier order lives on the subset G of trees in which X0 never appears as
a left factor.  Writing b = g 0^nu with g the germ of b (the core left after
peeling trailing right X0 factors), the order compares, lexicographically,

    (n1(germ), left factor of germ, right factor of germ, nu),

with X0 the maximal element and X1 the minimal one.  The associated Hall set
(written `basis` throughout) has the crucial closure property that b in the
basis implies b 0^nu in the basis, and its layers with a fixed number of X1
factors are spanned by a handful of named families (M, W, P, Q, Qs, Qf, R,
Rs); the enumeration below reproduces them.

`decompose` expands arbitrary bracket trees on the basis by exact linear
algebra in the word space of the matching bidegree, which is unconditionally
correct because the evaluated Hall set is a basis of the free Lie algebra.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Union

from . import trees
from .exact_linalg import independent_rows, invert_square
from .trees import BracketTree, X0, X1, node, strip_trailing_zeros
from .words import TensorSeries, expand_to_words, words_of_bidegree

MAX_DECOMPOSE_LENGTH = 16


class NotInCarrierError(ValueError):
    """Comparison requested outside G (X0 used as a left factor)."""


class InternalConsistencyError(RuntimeError):
    """An exact identity that must hold failed; signals a library bug."""


_IN_G_CACHE: dict[str, bool] = {}


def in_carrier(b: BracketTree) -> bool:
    """True iff X0 is never the left factor of any sub-bracket of b."""
    cached = _IN_G_CACHE.get(b.text)
    if cached is not None:
        return cached
    if b.is_leaf:
        result = True
    else:
        result = (b.left is not X0 and in_carrier(b.left)
                  and in_carrier(b.right))
    return _IN_G_CACHE.setdefault(b.text, result)


def germ_split(b: BracketTree) -> tuple[BracketTree, int]:
    """Unique factorization b = germ 0^nu for b in G, X0 excluded."""
    if b is X0:
        raise NotInCarrierError("X0 has no germ")
    if not in_carrier(b):
        raise NotInCarrierError(f"{b.text} is not in the carrier set G")
    return strip_trailing_zeros(b)


_COMPARE_CACHE: dict[tuple[str, str], int] = {}


def hall_compare(a: BracketTree, b: BracketTree) -> int:
    """Total order on G: -1, 0 or +1.  X0 maximal, X1 minimal."""
    if a is b or a.text == b.text:
        return 0
    key = (a.text, b.text)
    cached = _COMPARE_CACHE.get(key)
    if cached is not None:
        return cached
    if not in_carrier(a):
        raise NotInCarrierError(f"{a.text} is not in the carrier set G")
    if not in_carrier(b):
        raise NotInCarrierError(f"{b.text} is not in the carrier set G")
    if a is X0:
        result = 1
    elif b is X0:
        result = -1
    else:
        ga, nua = strip_trailing_zeros(a)
        gb, nub = strip_trailing_zeros(b)
        if ga.text == gb.text:
            result = -1 if nua < nub else 1
        elif ga.n1 != gb.n1:
            result = -1 if ga.n1 < gb.n1 else 1
        else:
            # equal n1 >= 2: both germs are proper nodes
            result = hall_compare(ga.left, gb.left)
            if result == 0:
                result = hall_compare(ga.right, gb.right)
            if result == 0:
                raise InternalConsistencyError(
                    f"distinct germs compare equal: {ga.text} / {gb.text}")
    _COMPARE_CACHE[key] = result
    _COMPARE_CACHE[(b.text, a.text)] = -result
    return result


_IS_HALL_CACHE: dict[str, bool] = {}


def is_hall(b: BracketTree) -> bool:
    """Membership in the Hall set (leaves included)."""
    cached = _IS_HALL_CACHE.get(b.text)
    if cached is not None:
        return cached
    if b.is_leaf:
        result = True
    elif not in_carrier(b):
        result = False
    else:
        b1, b2 = b.left, b.right
        result = (is_hall(b1) and is_hall(b2)
                  and hall_compare(b1, b2) < 0
                  and (b2.is_leaf or hall_compare(b2.left, b1) <= 0))
    return _IS_HALL_CACHE.setdefault(b.text, result)


@functools.total_ordering
class HallElement:
    """A validated Hall-set member with its germ/trailing-zeros split."""

    __slots__ = ("tree", "germ", "trailing_zeros")

    _cache: dict[str, "HallElement"] = {}

    def __init__(self, tree: BracketTree):
        if not is_hall(tree):
            raise ValueError(f"{tree.text} is not a Hall-set element")
        object.__setattr__(self, "tree", tree)
        if tree is X0:
            object.__setattr__(self, "germ", tree)
            object.__setattr__(self, "trailing_zeros", 0)
        else:
            germ, nu = germ_split(tree)
            object.__setattr__(self, "germ", germ)
            object.__setattr__(self, "trailing_zeros", nu)

    def __setattr__(self, name, value):  # pragma: no cover
        raise AttributeError("HallElement is immutable")

    @classmethod
    def of(cls, tree: Union[BracketTree, "HallElement", str]) -> "HallElement":
        if isinstance(tree, HallElement):
            return tree
        if isinstance(tree, str):
            tree = trees.parse_tree(tree)
        cached = cls._cache.get(tree.text)
        if cached is None:
            cached = cls._cache.setdefault(tree.text, cls(tree))
        return cached

    @property
    def n0(self) -> int:
        return self.tree.n0

    @property
    def n1(self) -> int:
        return self.tree.n1

    @property
    def length(self) -> int:
        return self.tree.length

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.tree.bidegree

    def __eq__(self, other) -> bool:
        return isinstance(other, HallElement) and self.tree == other.tree

    def __lt__(self, other: "HallElement") -> bool:
        return hall_compare(self.tree, other.tree) < 0

    def __hash__(self) -> int:
        return hash(self.tree.text)

    def __repr__(self) -> str:
        return trees.display_form(self.tree)


_BIDEGREE_CACHE: dict[tuple[int, int], tuple[HallElement, ...]] = {}


def basis_of_bidegree(n1: int, n0: int) -> tuple[HallElement, ...]:
    """All Hall elements of exact bidegree (n1, n0), sorted ascending."""
    key = (n1, n0)
    cached = _BIDEGREE_CACHE.get(key)
    if cached is not None:
        return cached
    found: set[BracketTree] = set()
    if (n1, n0) == (0, 1):
        found.add(X0)
    elif (n1, n0) == (1, 0):
        found.add(X1)
    elif n1 + n0 >= 2 and n1 >= 1:
        # both factors of a Hall node are Hall; sweep factor bidegrees
        for p1 in range(n1 + 1):
            for q1 in range(n0 + 1):
                if (p1, q1) in ((0, 0), (n1, n0)):
                    continue
                left = basis_of_bidegree(p1, q1)
                right = basis_of_bidegree(n1 - p1, n0 - q1)
                for a in left:
                    if a.tree is X0:
                        continue
                    for b in right:
                        if hall_compare(a.tree, b.tree) >= 0:
                            continue
                        if not (b.tree.is_leaf
                                or hall_compare(b.tree.left, a.tree) <= 0):
                            continue
                        found.add(node(a.tree, b.tree))
    result = tuple(sorted((HallElement.of(t) for t in found)))
    return _BIDEGREE_CACHE.setdefault(key, result)


def enumerate_basis(n1_max: int, n0_max: int) -> list[HallElement]:
    """All Hall elements with n1 <= n1_max and n0 <= n0_max, sorted."""
    if n1_max < 0 or n0_max < 0:
        raise ValueError("bounds must be >= 0")
    out: list[HallElement] = []
    for p in range(n1_max + 1):
        for q in range(n0_max + 1):
            out.extend(basis_of_bidegree(p, q))
    out.sort()
    return out


def basis_up_to_length(max_length: int) -> list[HallElement]:
    out: list[HallElement] = []
    for p in range(max_length + 1):
        for q in range(max_length + 1 - p):
            out.extend(basis_of_bidegree(p, q))
    out.sort()
    return out


class LieElement:
    """Finite rational combination of Hall elements."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict[HallElement, Fraction] | None = None):
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[k] = v

    @classmethod
    def single(cls, element, coeff=1) -> "LieElement":
        return cls({HallElement.of(element): Fraction(coeff)})

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.coeffs == other.coeffs

    def __add__(self, other: "LieElement") -> "LieElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k, Fraction(0)) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LieElement(out)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + other.scale(-1)

    def scale(self, factor) -> "LieElement":
        factor = Fraction(factor)
        if not factor:
            return LieElement()
        return LieElement({k: v * factor for k, v in self.coeffs.items()})

    def support(self) -> set[HallElement]:
        return set(self.coeffs)

    def expand_to_words(self, cutoff: int) -> TensorSeries:
        out = TensorSeries(cutoff)
        for element, coeff in self.coeffs.items():
            out = out + expand_to_words(element.tree, cutoff).scale(coeff)
        return out

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: kv[0])

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({v})*{k!r}" for k, v in self.items_sorted())


# Cached per-bidegree exact solvers: the expansion matrix of the Hall
# elements at that bidegree, pre-reduced so each decomposition is a solve
# plus a residual check.
_SOLVER_CACHE: dict[tuple[int, int], tuple] = {}


def _bidegree_solver(n1: int, n0: int):
    key = (n1, n0)
    cached = _SOLVER_CACHE.get(key)
    if cached is not None:
        return cached
    elements = basis_of_bidegree(n1, n0)
    words = words_of_bidegree(n1, n0)
    word_index = {w: i for i, w in enumerate(words)}
    columns = []
    for element in elements:
        series = expand_to_words(element.tree, n1 + n0)
        col = [Fraction(0)] * len(words)
        for w, c in series.coeffs.items():
            col[word_index[w]] = c
        columns.append(col)
    if columns:
        rows = independent_rows(columns)
        square = [[columns[j][i] for j in range(len(columns))] for i in rows]
        inverse = invert_square(square)
    else:
        rows, inverse = [], []
    cached = (elements, words, word_index, columns, rows, inverse)
    return _SOLVER_CACHE.setdefault(key, cached)


def decompose_series(series: TensorSeries, n1: int, n0: int) -> LieElement:
    """Write a bidegree-homogeneous word polynomial over the Hall basis.

    The residual must vanish identically, otherwise the input was not a Lie
    element of that bidegree (or the library is inconsistent).
    """
    elements, words, word_index, columns, rows, inverse = _bidegree_solver(n1, n0)
    target = [Fraction(0)] * len(words)
    for w, c in series.coeffs.items():
        if not c:
            continue
        i = word_index.get(w)
        if i is None:
            raise ValueError(
                f"word {w} is not of bidegree (n1={n1}, n0={n0})")
        target[i] = Fraction(c)
    if not elements:
        if any(target):
            raise InternalConsistencyError(
                f"nonzero series at bidegree ({n1},{n0}) with empty basis")
        return LieElement()
    m = len(elements)
    picked = [target[i] for i in rows]
    coeffs = [sum((inverse[j][i] * picked[i] for i in range(m)), Fraction(0))
              for j in range(m)]
    residual = list(target)
    for j, c in enumerate(coeffs):
        if not c:
            continue
        col = columns[j]
        for i in range(len(words)):
            residual[i] -= c * col[i]
    if any(residual):
        raise InternalConsistencyError(
            "nonzero residual: the input is not a Lie element of bidegree "
            f"({n1},{n0})")
    return LieElement({e: c for e, c in zip(elements, coeffs) if c})


def decompose(b: Union[BracketTree, str, LieElement]) -> LieElement:
    """Coordinates of a bracket tree (or Lie element) on the Hall basis."""
    if isinstance(b, str):
        b = trees.parse_tree(b)
    if isinstance(b, LieElement):
        out = LieElement()
        by_bidegree: dict[tuple[int, int], TensorSeries] = {}
        for element, coeff in b.coeffs.items():
            series = expand_to_words(element.tree, element.length).scale(coeff)
            bd = element.bidegree
            by_bidegree[bd] = (by_bidegree[bd] + series if bd in by_bidegree
                               else series)
        for (p, q), series in by_bidegree.items():
            out = out + decompose_series(series, p, q)
        return out
    if b.length > MAX_DECOMPOSE_LENGTH:
        raise ValueError(
            f"tree length {b.length} exceeds the decomposition cutoff "
            f"{MAX_DECOMPOSE_LENGTH}")
    if is_hall(b):
        return LieElement.single(b)
    series = expand_to_words(b, b.length)
    if not series:
        return LieElement()
    return decompose_series(series, b.n1, b.n0)


def lie_bracket(a: Union[BracketTree, LieElement, str],
                b: Union[BracketTree, LieElement, str]) -> LieElement:
    """Bracket re-expanded on the Hall basis (bilinear in both slots)."""
    if isinstance(a, str):
        a = trees.parse_tree(a)
    if isinstance(b, str):
        b = trees.parse_tree(b)
    if isinstance(a, BracketTree):
        a = LieElement.single(HallElement.of(a)) if is_hall(a) else decompose(a)
    if isinstance(b, BracketTree):
        b = LieElement.single(HallElement.of(b)) if is_hall(b) else decompose(b)
    out = LieElement()
    for ea, ca in a.coeffs.items():
        for eb, cb in b.coeffs.items():
            if ea.length + eb.length > MAX_DECOMPOSE_LENGTH:
                raise ValueError(
                    "bracket bidegree exceeds the decomposition cutoff "
                    f"{MAX_DECOMPOSE_LENGTH}")
            pair = node(ea.tree, eb.tree)
            out = out + decompose(pair).scale(ca * cb)
    return out


def coefficient_of(a: Union[BracketTree, LieElement, str],
                   b: Union[BracketTree, HallElement, str]) -> Fraction:
    """The coefficient of the Hall element b in the basis expansion of a."""
    target = HallElement.of(b)
    if not isinstance(a, LieElement):
        a = decompose(a)
    return a.coeffs.get(target, Fraction(0))


def hall_factor(b: Union[BracketTree, HallElement]) -> tuple[BracketTree, int, BracketTree]:
    """Factor a non-leaf Hall element as ad_{b1}^m(b2) with maximal m.

    Returns (b1, m, b2) with b1 < b2 in the Hall order and b2 not of the form
    (b1, c).
    """
    tree = b.tree if isinstance(b, HallElement) else b
    if tree.is_leaf:
        raise ValueError("leaves have no factorization")
    if not is_hall(tree):
        raise ValueError(f"{tree.text} is not a Hall-set element")
    b1 = tree.left
    m = 1
    rest = tree.right
    while not rest.is_leaf and rest.left is b1:
        m += 1
        rest = rest.right
    return b1, m, rest
