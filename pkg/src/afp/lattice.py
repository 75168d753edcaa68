"""Finite complete lattices, their products and duals, monotone maps, Kleene fixed points.

Elements of an explicit :class:`FiniteLattice` are the integers ``0..n-1``;
names are only for display and I/O. Points of a :class:`ProductShape` are
tuples with one element per factor, enumerated lexicographically by factor.
Everything downstream (morphisms, the fixpoint engine) talks to lattices
through the small duck-typed interface shared by ``FiniteLattice``,
``PowersetLattice`` and ``ProductShape``: ``size``, ``elements()``,
``bottom``, ``top``, ``leq``, ``join``, ``meet``, ``height``, ``level``,
``upper_covers``, ``lower_covers``, ``name``, ``random_element``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import CapExceeded, FixpointError, LatticeError

DEFAULT_CAP = 4096
# exhaustive law checking costs O(n^3); bigger lattices built by the
# structural constructors are trusted by construction
VERIFY_LIMIT = 256


class FiniteLattice:
    """An explicit finite lattice given by its order matrix.

    ``matrix[i, j]`` is True iff element ``i`` is below element ``j``.
    Join and meet tables are derived on first use unless supplied by a
    structural constructor. Pass ``check=False`` to build a raw candidate
    for :func:`verify_lattice`.
    """

    def __init__(self, names, leq, *, join=None, meet=None, check=True, label=None):
        self.names = tuple(str(x) for x in names)
        n = len(self.names)
        m = np.array(leq, dtype=bool).reshape(n, n) if n else np.zeros((0, 0), bool)
        m.setflags(write=False)
        self.matrix = m
        self.label = label
        self._join = join
        self._meet = meet
        self._index = {name: i for i, name in enumerate(self.names)}
        self._covers: dict = {}
        if check:
            if len(self._index) != n:
                raise LatticeError("duplicate element names")
            violation = verify_lattice(self)
            if violation is not None:
                raise LatticeError(violation)

    @classmethod
    def from_relation(cls, names, pairs, *, check=True, label=None):
        """Build from a literal list of ``(i, j)`` index pairs meaning ``i <= j``."""
        n = len(names)
        m = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise LatticeError(f"pair ({i},{j}) out of range")
            m[i, j] = True
        return cls(names, m, check=check, label=label)

    @classmethod
    def from_covers(cls, names, covers, *, label=None):
        """Build from cover pairs ``(i, j)``; takes the reflexive-transitive closure."""
        n = len(names)
        m = np.eye(n, dtype=bool)
        for i, j in covers:
            m[i, j] = True
        for k in range(n):
            m |= m[:, [k]] & m[[k], :]
        return cls(names, m, label=label)

    # -- interface -------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.names)

    def elements(self):
        return range(self.size)

    @cached_property
    def _leq(self):
        return tuple(tuple(bool(v) for v in row) for row in self.matrix)

    def leq(self, a, b) -> bool:
        return self._leq[a][b]

    @cached_property
    def bottom(self) -> int:
        rows = np.flatnonzero(self.matrix.all(axis=1))
        if rows.size != 1:
            raise LatticeError("no bottom")
        return int(rows[0])

    @cached_property
    def top(self) -> int:
        cols = np.flatnonzero(self.matrix.all(axis=0))
        if cols.size != 1:
            raise LatticeError("no top")
        return int(cols[0])

    @cached_property
    def join_table(self):
        if self._join is None:
            self._join = _least_upper_bounds(self.matrix)
        return tuple(tuple(int(v) for v in row) for row in self._join)

    @cached_property
    def meet_table(self):
        if self._meet is None:
            self._meet = _least_upper_bounds(self.matrix.T)
        return tuple(tuple(int(v) for v in row) for row in self._meet)

    def join(self, a, b) -> int:
        j = self.join_table[a][b]
        if j < 0:
            raise LatticeError(f"no join({self.names[a]},{self.names[b]})")
        return j

    def meet(self, a, b) -> int:
        j = self.meet_table[a][b]
        if j < 0:
            raise LatticeError(f"no meet({self.names[a]},{self.names[b]})")
        return j

    @cached_property
    def _levels(self):
        # longest chain from bottom; process in order of down-set size
        m = self.matrix
        order = np.argsort(m.sum(axis=0), kind="stable")
        lv = np.zeros(self.size, dtype=int)
        for u in order:
            below = m[:, u].copy()
            below[u] = False
            if below.any():
                lv[u] = lv[below].max() + 1
        return tuple(int(v) for v in lv)

    def level(self, a) -> int:
        return self._levels[a]

    @cached_property
    def height(self) -> int:
        return self._levels[self.top] if self.size else 0

    def upper_covers(self, a):
        key = ("up", a)
        if key not in self._covers:
            self._covers[key] = _minimal_strict(self.matrix, a)
        return self._covers[key]

    def lower_covers(self, a):
        key = ("down", a)
        if key not in self._covers:
            self._covers[key] = _minimal_strict(self.matrix.T, a)
        return self._covers[key]

    def name(self, a) -> str:
        return self.names[a]

    def index(self, name) -> int:
        return self._index[str(name)]

    def random_element(self, rng):
        return rng.randrange(self.size)

    # -- structure -------------------------------------------------------

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.names == other.names and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.names, self.matrix.tobytes()))

    def __repr__(self):
        return f"FiniteLattice({self.label or self.size})"

    def __str__(self):
        return self.label or f"L{self.size}"


def _least_upper_bounds(m):
    """Join table of the order ``m`` (``-1`` where no least upper bound exists)."""
    n = m.shape[0]
    down = m.sum(axis=0)
    big = n + 1
    table = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        ub = m[a][None, :] & m
        cand = np.where(ub, down[None, :], big).argmin(axis=1)
        ok = ub.any(axis=1) & ~(ub & ~m[cand]).any(axis=1)
        table[a] = np.where(ok, cand, -1)
    return table


def _minimal_strict(m, a):
    ups = np.flatnonzero(m[a])
    ups = ups[ups != a]
    if ups.size == 0:
        return ()
    sub = m[np.ix_(ups, ups)].copy()
    np.fill_diagonal(sub, False)
    return tuple(int(u) for u in ups[~sub.any(axis=0)])


def verify_lattice(candidate: FiniteLattice) -> Optional[str]:
    """Check every lattice law exhaustively; return the first violation or ``None``.

    Violations read like ``"reflexivity(1)"``, ``"antisymmetry(a,b)"``,
    ``"transitivity(a,b,c)"`` or ``"no join(a,b)"`` with element names.
    """
    names = candidate.names
    m = candidate.matrix
    n = len(names)
    if n == 0:
        return "empty"
    if len(set(names)) != n:
        return "duplicate element names"
    bad = np.flatnonzero(~np.diagonal(m))
    if bad.size:
        return f"reflexivity({names[bad[0]]})"
    anti = m & m.T
    np.fill_diagonal(anti, False)
    if anti.any():
        i, j = np.argwhere(anti)[0]
        return f"antisymmetry({names[i]},{names[j]})"
    mf = m.astype(np.float32)
    comp = (mf @ mf) > 0
    trans = comp & ~m
    if trans.any():
        i, k = np.argwhere(trans)[0]
        j = int(np.flatnonzero(m[i] & m[:, k])[0])
        return f"transitivity({names[i]},{names[j]},{names[k]})"
    for label, rel in (("join", m), ("meet", m.T)):
        table = _least_upper_bounds(rel)
        missing = np.argwhere(table < 0)
        if missing.size:
            i, j = missing[0]
            return f"no {label}({names[i]},{names[j]})"
    return None


# -- constructors ----------------------------------------------------------


def _guard(n, cap):
    if cap is not None and n > cap:
        raise CapExceeded(f"lattice would have {n} elements (cap {cap})")


def chain(n: int, *, cap=DEFAULT_CAP, label=None) -> FiniteLattice:
    """The chain ``0 < 1 < ... < n-1``."""
    if n < 1:
        raise ValueError("chain needs n >= 1")
    _guard(n, cap)
    idx = np.arange(n)
    return FiniteLattice(
        [str(i) for i in range(n)],
        idx[:, None] <= idx[None, :],
        join=np.maximum.outer(idx, idx),
        meet=np.minimum.outer(idx, idx),
        check=n <= VERIFY_LIMIT,
        label=label or f"chain:{n}",
    )


def two() -> FiniteLattice:
    """The two-element lattice ``{0 <= 1}``."""
    return chain(2, label="2")


def _set_name(mask, labels):
    return "{" + ",".join(lab for i, lab in enumerate(labels) if mask >> i & 1) + "}"


def powerset(n: int, labels=None, *, cap=DEFAULT_CAP) -> FiniteLattice:
    """Subsets of an ``n``-element set ordered by inclusion; element index = bitmask."""
    if n < 0:
        raise ValueError("powerset needs n >= 0")
    _guard(1 << n, cap)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    idx = np.arange(1 << n)
    return FiniteLattice(
        [_set_name(i, labels) for i in idx],
        (idx[:, None] & ~idx[None, :]) == 0,
        join=idx[:, None] | idx[None, :],
        meet=idx[:, None] & idx[None, :],
        check=(1 << n) <= VERIFY_LIMIT,
        label=f"pow:{n}",
    )


def product(*lattices: FiniteLattice, cap=DEFAULT_CAP) -> FiniteLattice:
    """Direct product with the pointwise order, elements in lexicographic order."""
    lattices = [lat if isinstance(lat, FiniteLattice) else materialize(lat) for lat in lattices]
    size = math.prod(lat.size for lat in lattices)
    _guard(size, cap)
    m = np.ones((1, 1), dtype=bool)
    jt = np.zeros((1, 1), dtype=np.int64)
    mt = np.zeros((1, 1), dtype=np.int64)
    k = 1
    for lat in lattices:
        s = lat.size
        m = (m[:, None, :, None] & lat.matrix[None, :, None, :]).reshape(k * s, k * s)
        lj = np.array(lat.join_table)
        lm = np.array(lat.meet_table)
        jt = (jt[:, None, :, None] * s + lj[None, :, None, :]).reshape(k * s, k * s)
        mt = (mt[:, None, :, None] * s + lm[None, :, None, :]).reshape(k * s, k * s)
        k *= s
    names = ["(" + ",".join(parts) + ")" for parts in itertools.product(*(lat.names for lat in lattices))]
    return FiniteLattice(
        names, m, join=jt, meet=mt, check=size <= VERIFY_LIMIT,
        label="x".join(str(lat) for lat in lattices) or "T",
    )


def dual(lat: FiniteLattice) -> FiniteLattice:
    """Reverse the order; bottom and top swap, join and meet swap."""
    if not isinstance(lat, FiniteLattice):
        lat = materialize(lat)
    return FiniteLattice(
        lat.names, lat.matrix.T,
        join=np.array(lat.meet_table), meet=np.array(lat.join_table),
        check=lat.size <= VERIFY_LIMIT, label=f"dual:{lat}",
    )


def terminal() -> FiniteLattice:
    return FiniteLattice(["*"], [[True]], label="T")


_TERM = re.compile(r"^(?:(?P<two>2)|(?P<t>T)|chain:(?P<chain>\d+)|pow:(?P<pow>\d+))$")


def build_lattice(spec: str, *, cap=DEFAULT_CAP) -> FiniteLattice:
    """Parse a lattice spec string and build the verified lattice.

    Terms are ``2``, ``T`` (one element), ``chain:N``, ``pow:N`` and
    ``dual:TERM``; terms joined by ``x`` form a product, e.g. ``2x2`` or
    ``chain:3xdual:pow:2``.
    """
    parts = spec.strip().split("x")
    if len(parts) > 1:
        return product(*(build_lattice(p, cap=cap) for p in parts), cap=cap)
    term = parts[0]
    if term.startswith("dual:"):
        return dual(build_lattice(term[5:], cap=cap))
    match = _TERM.match(term)
    if not match:
        raise ValueError(f"unknown lattice spec {spec!r}")
    if match["two"]:
        return two()
    if match["t"]:
        return terminal()
    if match["chain"]:
        return chain(int(match["chain"]), cap=cap)
    return powerset(int(match["pow"]), cap=cap)


class PowersetLattice:
    """The subsets of ``labels`` as bitmasks, never tabulated.

    Used where the explicit element table would be too large, e.g. the
    interpretations of a logic program.
    """

    def __init__(self, n: int, labels=None):
        self.n = n
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise ValueError("need one label per generator")
        self.label = f"pow:{n}"

    size = property(lambda self: 1 << self.n)
    bottom = 0
    top = property(lambda self: (1 << self.n) - 1)
    height = property(lambda self: self.n)

    def elements(self):
        return range(1 << self.n)

    def leq(self, a, b):
        return a & ~b == 0

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def level(self, a):
        return bin(a).count("1")

    def upper_covers(self, a):
        return tuple(a | 1 << i for i in range(self.n) if not a >> i & 1)

    def lower_covers(self, a):
        return tuple(a & ~(1 << i) for i in range(self.n) if a >> i & 1)

    def name(self, a):
        return _set_name(a, self.labels)

    def members(self, a):
        return frozenset(lab for i, lab in enumerate(self.labels) if a >> i & 1)

    def mask(self, members) -> int:
        pos = {lab: i for i, lab in enumerate(self.labels)}
        out = 0
        for m in members:
            out |= 1 << pos[m]
        return out

    def random_element(self, rng):
        return rng.getrandbits(self.n) if self.n else 0

    def materialize(self, cap=DEFAULT_CAP) -> FiniteLattice:
        return powerset(self.n, self.labels, cap=cap)

    def __eq__(self, other):
        if not isinstance(other, PowersetLattice):
            return NotImplemented
        return self.n == other.n and self.labels == other.labels

    def __hash__(self):
        return hash(("pow", self.labels))

    def __repr__(self):
        return f"PowersetLattice({self.n})"

    def __str__(self):
        return self.label


def materialize(lat, cap=DEFAULT_CAP) -> FiniteLattice:
    if isinstance(lat, FiniteLattice):
        return lat
    if isinstance(lat, PowersetLattice):
        return lat.materialize(cap)
    if isinstance(lat, ProductShape):
        return product(*lat.factors, cap=cap)
    raise TypeError(f"cannot materialize {lat!r}")


class ProductShape:
    """An ordered list of factor lattices; the carrier ``A1 x ... x An``.

    Points are tuples in lexicographic order by factor. The empty shape is
    the terminal object with the single point ``()``.
    """

    def __init__(self, factors=()):
        self.factors = tuple(factors)
        self.arity = len(self.factors)
        for f in self.factors:
            if isinstance(f, ProductShape):
                raise TypeError("nest shapes with ProductShape.concat")

    @staticmethod
    def concat(*parts) -> "ProductShape":
        factors = ()
        for p in parts:
            factors += (p if type(p) is ProductShape else as_shape(p)).factors
        return ProductShape(factors)

    @cached_property
    def size(self) -> int:
        return math.prod(f.size for f in self.factors)

    @cached_property
    def bottom(self):
        return tuple(f.bottom for f in self.factors)

    @cached_property
    def top(self):
        return tuple(f.top for f in self.factors)

    @cached_property
    def height(self) -> int:
        return sum(f.height for f in self.factors)

    def elements(self):
        return itertools.product(*(f.elements() for f in self.factors))

    def leq(self, x, y) -> bool:
        return all(f.leq(a, b) for f, a, b in zip(self.factors, x, y))

    def join(self, x, y):
        return tuple(f.join(a, b) for f, a, b in zip(self.factors, x, y))

    def meet(self, x, y):
        return tuple(f.meet(a, b) for f, a, b in zip(self.factors, x, y))

    def level(self, x) -> int:
        return sum(f.level(a) for f, a in zip(self.factors, x))

    def upper_covers(self, x):
        out = []
        for i, f in enumerate(self.factors):
            for c in f.upper_covers(x[i]):
                out.append(x[:i] + (c,) + x[i + 1:])
        return out

    def lower_covers(self, x):
        out = []
        for i, f in enumerate(self.factors):
            for c in f.lower_covers(x[i]):
                out.append(x[:i] + (c,) + x[i + 1:])
        return out

    def random_element(self, rng):
        return tuple(f.random_element(rng) for f in self.factors)

    def name(self, x) -> str:
        return "(" + ",".join(f.name(a) for f, a in zip(self.factors, x)) + ")"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ProductShape):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"ProductShape({self})"

    def __str__(self):
        return "x".join(str(f) for f in self.factors) or "T"


TERMINAL = ProductShape(())


def as_shape(obj) -> ProductShape:
    """Coerce a lattice, shape, or sequence of either into a ProductShape."""
    if type(obj) is ProductShape or isinstance(obj, ProductShape):
        return obj
    if isinstance(obj, (FiniteLattice, PowersetLattice)):
        return ProductShape((obj,))
    if isinstance(obj, Sequence):
        return ProductShape.concat(*obj)
    raise TypeError(f"not a lattice or shape: {obj!r}")


def power(lat, n: int) -> ProductShape:
    """``A^n`` as a shape (``A`` may itself be a multi-factor shape)."""
    return ProductShape.concat(*([as_shape(lat)] * n))


# -- monotone maps and fixed points -----------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A tabulated map from ``domain`` (lattice or shape) to ``codomain``.

    ``polarity`` holds ``+1`` (monotone) or ``-1`` (anti-monotone) per domain
    factor; the default is monotone everywhere.
    """

    domain: object
    codomain: object
    table: Mapping
    polarity: Optional[tuple] = None

    @classmethod
    def from_function(cls, domain, codomain, fn, polarity=None):
        return cls(domain, codomain, {x: fn(x) for x in domain.elements()}, polarity)

    def __call__(self, x):
        return self.table[x]


def is_monotone(fmap: MonotoneMap):
    """Return ``None`` if ``fmap`` respects its polarity flags, else a witness pair.

    The witness ``(x, y)`` satisfies ``x <= y`` in the polarity-adjusted
    order while ``fmap(x) <= fmap(y)`` fails. Checking covers suffices.
    """
    dom, cod = fmap.domain, fmap.codomain
    single = not isinstance(dom, ProductShape)
    factors = (dom,) if single else dom.factors
    polarity = fmap.polarity or (1,) * len(factors)
    if len(polarity) != len(factors):
        raise ValueError("one polarity flag per domain factor")
    for x in dom.elements():
        pt = (x,) if single else x
        for i, fac in enumerate(factors):
            for c in fac.upper_covers(pt[i]):
                y = pt[:i] + (c,) + pt[i + 1:]
                y = y[0] if single else y
                lo, hi = (x, y) if polarity[i] > 0 else (y, x)
                if not cod.leq(fmap(lo), fmap(hi)):
                    return (lo, hi)
    return None


def lfp(f, space=None):
    """Least fixed point by Kleene iteration from bottom.

    ``f`` is either a :class:`MonotoneMap` endofunction or a plain callable
    together with the lattice (or shape) it acts on.
    """
    if isinstance(f, MonotoneMap):
        if f.domain != f.codomain:
            raise ValueError("lfp needs an endofunction")
        if f.polarity and any(p < 0 for p in f.polarity):
            raise ValueError("lfp needs a monotone map")
        space = f.codomain
    x = space.bottom
    for _ in range(space.height + 1):
        y = f(x)
        if y == x:
            return x
        x = y
    raise FixpointError("iteration exceeded lattice height; map is not monotone")


def gfp(f, space=None):
    """Greatest fixed point by iteration from top."""
    if isinstance(f, MonotoneMap):
        space = f.codomain
    x = space.top
    for _ in range(space.height + 1):
        y = f(x)
        if y == x:
            return x
        x = y
    raise FixpointError("iteration exceeded lattice height; map is not monotone")
