"""Formal iterated brackets over the two indeterminates X0 and X1.

A :class:`BracketTree` is an element of the free magma over {X0, X1}: either a
leaf, or an ordered pair of two subtrees.  Trees are immutable, interned, and
carry cached counts of each generator, so equality / hashing / comparison of
large trees stays cheap.

The ASCII grammar accepted by :func:`parse_tree`::

    TREE  := "X0" | "X1" | "(" TREE "," TREE ")" | NAMED
    NAMED := "M(" nu ")" | "W(" j "," nu ")" | "P(" j "," k "," nu ")"
           | "Q(" j "," k "," l "," nu ")" | "Qs(" j "," mu "," k "," nu ")"
           | "Qf(" j "," mu "," nu ")" | "R(" j "," k "," l "," m "," nu ")"
           | "Rs(" j "," k "," l "," mu "," nu ")" | "D"

with j, k, l, m >= 1 and mu, nu >= 0.  Whitespace is insignificant.  The named
shortcuts expand to the standard families built from right-iterated brackets
with X0 (`M`), their squares (`W`), and the higher layers (`P`, `Q`, `Qs`,
`Qf`, `R`, `Rs`, `D`); see the module functions of the same names.
"""

from __future__ import annotations

from typing import Iterator, Optional


class TreeSyntaxError(ValueError):
    """Raised on malformed tree text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BracketTree:
    """An iterated formal bracket: a leaf X0/X1 or an ordered pair (left, right).

    Instances are immutable and interned by their canonical text, so `is`
    comparison agrees with structural equality.
    """

    __slots__ = ("left", "right", "generator", "n0", "n1", "text")

    _interned: dict[str, "BracketTree"] = {}

    def __init__(self, generator: Optional[int], left: Optional["BracketTree"],
                 right: Optional["BracketTree"], text: str):
        object.__setattr__(self, "generator", generator)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "text", text)
        if generator is not None:
            object.__setattr__(self, "n0", 1 if generator == 0 else 0)
            object.__setattr__(self, "n1", 1 if generator == 1 else 0)
        else:
            object.__setattr__(self, "n0", left.n0 + right.n0)
            object.__setattr__(self, "n1", left.n1 + right.n1)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("BracketTree is immutable")

    @property
    def is_leaf(self) -> bool:
        return self.generator is not None

    @property
    def length(self) -> int:
        return self.n0 + self.n1

    @property
    def bidegree(self) -> tuple[int, int]:
        """(n1, n0): control order first, as everywhere in this package."""
        return (self.n1, self.n0)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, BracketTree) and self.text == other.text

    def __hash__(self) -> int:
        return hash(self.text)

    def __repr__(self) -> str:
        return self.text

    def leaves(self) -> Iterator[int]:
        if self.is_leaf:
            yield self.generator
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()


def _intern(generator, left, right, text) -> BracketTree:
    tree = BracketTree._interned.get(text)
    if tree is None:
        tree = BracketTree(generator, left, right, text)
        # idempotent insert: a concurrent duplicate is structurally identical
        tree = BracketTree._interned.setdefault(text, tree)
    return tree


X0 = _intern(0, None, None, "X0")
X1 = _intern(1, None, None, "X1")


def leaf(generator: int) -> BracketTree:
    return X0 if generator == 0 else X1


def node(left: BracketTree, right: BracketTree) -> BracketTree:
    """The ordered pair (left, right) in the free magma."""
    return _intern(None, left, right, f"({left.text},{right.text})")


def zeros(b: BracketTree, nu: int) -> BracketTree:
    """Right-iterated bracketing with X0: b 0^nu = (...((b, X0), X0)..., X0)."""
    for _ in range(nu):
        b = node(b, X0)
    return b


def strip_trailing_zeros(b: BracketTree) -> tuple[BracketTree, int]:
    """Peel all trailing right X0 factors; returns (core, count)."""
    nu = 0
    while not b.is_leaf and b.right is X0:
        b = b.left
        nu += 1
    return b, nu


def ad(a: BracketTree, m: int, b: BracketTree) -> BracketTree:
    """The m-fold left bracketing ad_a^m(b) = (a, (a, ... (a, b)...))."""
    for _ in range(m):
        b = node(a, b)
    return b


# ---------------------------------------------------------------------------
# Named families

def M(nu: int) -> BracketTree:
    return zeros(X1, nu)


def W(j: int, nu: int = 0) -> BracketTree:
    if j < 1:
        raise ValueError(f"W requires j >= 1, got j={j}")
    return zeros(node(M(j - 1), M(j)), nu)


def P(j: int, k: int, nu: int = 0) -> BracketTree:
    if j < 1 or k < 1:
        raise ValueError(f"P requires j,k >= 1, got j={j}, k={k}")
    return zeros(node(M(k - 1), W(j, 0)), nu)


def Q(j: int, k: int, l: int, nu: int = 0) -> BracketTree:
    if min(j, k, l) < 1:
        raise ValueError(f"Q requires j,k,l >= 1, got ({j},{k},{l})")
    return zeros(node(M(l - 1), P(j, k, 0)), nu)


def Q_sharp(j: int, mu: int, k: int, nu: int = 0) -> BracketTree:
    if j < 1 or k < 1:
        raise ValueError(f"Qs requires j,k >= 1, got j={j}, k={k}")
    return zeros(node(W(j, mu), W(k, 0)), nu)


def Q_flat(j: int, mu: int, nu: int = 0) -> BracketTree:
    if j < 1:
        raise ValueError(f"Qf requires j >= 1, got j={j}")
    return zeros(node(W(j, mu), W(j, mu + 1)), nu)


def R(j: int, k: int, l: int, m: int, nu: int = 0) -> BracketTree:
    if min(j, k, l, m) < 1:
        raise ValueError(f"R requires j,k,l,m >= 1, got ({j},{k},{l},{m})")
    return zeros(node(M(m - 1), Q(j, k, l, 0)), nu)


def R_sharp(j: int, k: int, l: int, mu: int, nu: int = 0) -> BracketTree:
    if min(j, k, l) < 1:
        raise ValueError(f"Rs requires j,k,l >= 1, got ({j},{k},{l})")
    return zeros(node(W(l, mu), P(j, k, 0)), nu)


def D() -> BracketTree:
    """The order-6 germ ad^2 of X0 by P(1,1,0)."""
    return ad(P(1, 1, 0), 2, X0)


_D_TREE = D()


def _match_M(b: BracketTree) -> Optional[int]:
    core, nu = strip_trailing_zeros(b)
    return nu if core is X1 else None


def _match_W_germ(b: BracketTree) -> Optional[int]:
    """j such that b == (M(j-1), M(j)), else None."""
    if b.is_leaf:
        return None
    jl = _match_M(b.left)
    jr = _match_M(b.right)
    if jl is not None and jr == jl + 1:
        return jl + 1
    return None


def _match_W(b: BracketTree) -> Optional[tuple[int, int]]:
    core, nu = strip_trailing_zeros(b)
    j = _match_W_germ(core)
    return (j, nu) if j is not None else None


def _match_P_germ(b: BracketTree) -> Optional[tuple[int, int]]:
    """(j, k) such that b == (M(k-1), W(j, 0)), else None."""
    if b.is_leaf:
        return None
    k = _match_M(b.left)
    j = _match_W_germ(b.right)
    if k is not None and j is not None:
        return (j, k + 1)
    return None


def _match_Q_germ(b: BracketTree) -> Optional[tuple[int, int, int]]:
    if b.is_leaf:
        return None
    l = _match_M(b.left)
    jk = _match_P_germ(b.right)
    if l is not None and jk is not None:
        return (jk[0], jk[1], l + 1)
    return None


def named_form(b: BracketTree) -> Optional[str]:
    """Render a tree via the named-family shortcuts if it structurally matches.

    Purely structural: no Hall-set membership is implied (e.g. "P(3,1,0)"
    names the tree (M(0), W(3,0)) even though it is not a basis element).
    """
    if b is X0 or b is X1:
        return b.text
    if b == _D_TREE:
        return "D"
    core, nu = strip_trailing_zeros(b)
    m = _match_M(b)
    if m is not None:
        return f"M({m})"
    w = _match_W(b)
    if w is not None:
        return f"W({w[0]},{w[1]})"
    p = _match_P_germ(core)
    if p is not None:
        return f"P({p[0]},{p[1]},{nu})"
    q = _match_Q_germ(core)
    if q is not None:
        return f"Q({q[0]},{q[1]},{q[2]},{nu})"
    if not core.is_leaf:
        wl = _match_W(core.left)
        if wl is not None:
            j, mu = wl
            wr = _match_W(core.right)
            if wr is not None:
                k, nur = wr
                if nur == 0 and k != j:
                    return f"Qs({j},{mu},{k},{nu})"
                if k == j and nur == mu + 1:
                    return f"Qf({j},{mu},{nu})"
            pr = _match_P_germ(core.right)
            if pr is not None:
                return f"Rs({pr[0]},{pr[1]},{j},{mu},{nu})"
        ml = _match_M(core.left)
        if ml is not None:
            qr = _match_Q_germ(core.right)
            if qr is not None:
                return f"R({qr[0]},{qr[1]},{qr[2]},{ml + 1},{nu})"
    return None


def display_form(b: BracketTree) -> str:
    """Named form when available, canonical text otherwise."""
    return named_form(b) or b.text


# ---------------------------------------------------------------------------
# Parser

_NAMED_ARITY = {"M": 1, "W": 2, "P": 3, "Q": 4, "Qs": 4, "Qf": 3, "R": 5, "Rs": 5}

# positions of indices that must be >= 1 (the others only >= 0)
_NAMED_POSITIVE = {
    "M": (),
    "W": (0,),
    "P": (0, 1),
    "Q": (0, 1, 2),
    "Qs": (0, 2),
    "Qf": (0,),
    "R": (0, 1, 2, 3),
    "Rs": (0, 1, 2),
}

_NAMED_BUILDERS = {
    "M": M, "W": W, "P": P, "Q": Q, "Qs": Q_sharp, "Qf": Q_flat,
    "R": R, "Rs": R_sharp,
}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> TreeSyntaxError:
        return TreeSyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a decimal integer")
        return int(self.text[start:self.pos])

    def parse_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a tree")
        return self.text[start:self.pos]

    def parse_tree(self) -> BracketTree:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            left = self.parse_tree()
            self.expect(",")
            right = self.parse_tree()
            self.expect(")")
            return node(left, right)
        name = self.parse_name()
        if name == "X0":
            return X0
        if name == "X1":
            return X1
        if name == "D":
            return _D_TREE
        if name in _NAMED_ARITY:
            args_start = self.pos
            self.expect("(")
            args = [self.parse_int()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.parse_int())
            self.expect(")")
            if len(args) != _NAMED_ARITY[name]:
                self.pos = args_start
                raise self.error(
                    f"{name} takes {_NAMED_ARITY[name]} indices, got {len(args)}")
            for i in _NAMED_POSITIVE[name]:
                if args[i] < 1:
                    self.pos = args_start
                    raise self.error(
                        f"invalid family index: {name} argument {i + 1} must be >= 1")
            return _NAMED_BUILDERS[name](*args)
        raise self.error(f"unknown symbol {name!r}")


def parse_tree(text: str) -> BracketTree:
    """Parse the ASCII tree grammar; round-trips with the canonical printer."""
    parser = _Parser(text)
    tree = parser.parse_tree()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("trailing input after tree")
    return tree
