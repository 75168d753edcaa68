"""Approximation morphisms: precision-monotone pair functions and their category.

A morphism ``f: A -o B`` is a map ``A x A -> B x B`` that is monotone for
the precision order ``(x, x') <=_p (y, y')  iff  x <= y and x' >= y'``.
Points are *flat* tuples: for ``A = A1 x ... x An`` the input is
``(x1, ..., xn, x'1, ..., x'n)``, all lower coordinates first. Products,
tupling and base morphisms keep that layout, so ``(0, 0, 1, 1)`` on
``2 x 2`` means lower ``(0, 0)`` and upper ``(1, 1)``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .errors import CapExceeded, NotPMonotone, ShapeMismatch
from .lattice import ProductShape, as_shape

EXHAUSTIVE = "exhaustive"
BY_CONSTRUCTION = "by-construction"

# bilattice points above which exhaustive scans refuse to run
POINT_CAP = 1 << 16


def spot_checked(seed, k):
    return f"spot-checked(seed={seed},k={k})"


# -- bilattice points ------------------------------------------------------


def bilattice_points(shape) -> Iterator[tuple]:
    """All flat points ``x + x'`` of ``shape x shape`` in lexicographic order."""
    shape = as_shape(shape)
    elems = list(shape.elements())
    for x in elems:
        for xp in elems:
            yield x + xp


def split(p):
    k = len(p) // 2
    return p[:k], p[k:]


def swap(p):
    k = len(p) // 2
    return p[k:] + p[:k]


def leq_p(shape, p, q) -> bool:
    """Precision order: lower bound rises, upper bound falls."""
    k = len(p) // 2
    return shape.leq(p[:k], q[:k]) and shape.leq(q[k:], p[k:])


def leq_t(shape, p, q) -> bool:
    """Truth order: both coordinates rise."""
    k = len(p) // 2
    return shape.leq(p[:k], q[:k]) and shape.leq(p[k:], q[k:])


def is_consistent(shape, p) -> bool:
    k = len(p) // 2
    return shape.leq(p[:k], p[k:])


def bottom_p(shape):
    shape = as_shape(shape)
    return shape.bottom + shape.top


def p_upper_covers(shape, p):
    """Covers of ``p`` in the precision order."""
    x, xp = split(p)
    return [y + xp for y in shape.upper_covers(x)] + [x + y for y in shape.lower_covers(xp)]


def p_lower_covers(shape, p):
    x, xp = split(p)
    return [y + xp for y in shape.lower_covers(x)] + [x + y for y in shape.upper_covers(xp)]


def p_level(shape, p):
    x, xp = split(p)
    return shape.level(x) - shape.level(xp)


# -- the morphism type -----------------------------------------------------


def _memoized(rule, cache):
    def get(p):
        try:
            return cache[p]
        except KeyError:
            v = cache[p] = rule(p)
            return v
    return get


class ApproxMorphism:
    """A morphism ``domain -o codomain`` backed by a table or by a rule.

    Rule-backed morphisms memoise their values (the domain is finite), so
    derived morphisms such as well-founded fixed points are computed at
    most once per input point. ``certificate`` records how monotonicity is
    known: ``"exhaustive"``, ``"by-construction"`` or ``"spot-checked(...)"``.
    """

    def __init__(self, domain, codomain, rule: Callable, *, certificate=BY_CONSTRUCTION,
                 memo=True, name=None):
        self.domain = domain if type(domain) is ProductShape else as_shape(domain)
        self.codomain = codomain if type(codomain) is ProductShape else as_shape(codomain)
        self.certificate = certificate
        self.name = name
        self._rule = rule
        self._table = None
        self._cache = {} if memo else None
        self._get = _memoized(rule, self._cache) if memo else rule

    @classmethod
    def from_table(cls, domain, codomain, table, *, certificate=EXHAUSTIVE, name=None):
        """Wrap a complete table without re-verifying it (see :func:`make_morphism`)."""
        f = cls(domain, codomain, None, certificate=certificate, memo=False, name=name)
        f._table = dict(table)
        f._get = f._table.__getitem__
        return f

    @property
    def backing(self):
        return "table" if self._table is not None else "rule"

    def __call__(self, p):
        return self._get(p)

    def points(self):
        return bilattice_points(self.domain)

    def tabulate(self, cap=POINT_CAP) -> dict:
        if self._table is not None:
            return dict(self._table)
        if self.domain.size ** 2 > cap:
            raise CapExceeded(f"{self.domain.size ** 2} input points exceed cap {cap}")
        return {p: self(p) for p in self.points()}

    def materialized(self, cap=POINT_CAP) -> "ApproxMorphism":
        return ApproxMorphism.from_table(self.domain, self.codomain, self.tabulate(cap),
                                         certificate=self.certificate, name=self.name)

    def lower(self, p):
        return self(p)[: self.codomain.arity]

    def upper(self, p):
        return self(p)[self.codomain.arity:]

    def point(self):
        """The value of a morphism out of the terminal object."""
        if self.domain.arity:
            raise ShapeMismatch(f"{self!r} is not a point (domain {self.domain})")
        return self(())

    def __eq__(self, other):
        if not isinstance(other, ApproxMorphism):
            return NotImplemented
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return all(self(p) == other(p) for p in self.points())

    def __hash__(self):
        return hash((self.domain, self.codomain, tuple(self(p) for p in self.points())))

    def __repr__(self):
        label = self.name or self.backing
        return f"ApproxMorphism({self.domain} -o {self.codomain}, {label})"


def p_monotonicity_witness(f: ApproxMorphism, cap=POINT_CAP):
    """First cover pair ``p <=_p q`` with ``f(p) <=_p f(q)`` failing, or ``None``."""
    dom, cod = f.domain, f.codomain
    if dom.size ** 2 > cap:
        raise CapExceeded("domain too large for an exhaustive monotonicity check")
    for p in bilattice_points(dom):
        fp = f(p)
        for q in p_upper_covers(dom, p):
            if not leq_p(cod, fp, f(q)):
                return p, q
    return None


def _check_values(shape, v):
    if len(v) != 2 * shape.arity:
        return False
    factors = shape.factors * 2
    return all(isinstance(e, int) and 0 <= e < fac.size for fac, e in zip(factors, v))


def make_morphism(domain, codomain, table, *, name=None) -> ApproxMorphism:
    """Certify a tabulated pair function exhaustively.

    ``table`` maps every flat input point to a flat output point. Raises
    :class:`NotPMonotone` with a witness pair if the precision order is
    not preserved.
    """
    domain, codomain = as_shape(domain), as_shape(codomain)
    table = {tuple(k): tuple(v) for k, v in dict(table).items()}
    for p in bilattice_points(domain):
        if p not in table:
            raise ShapeMismatch(f"table is missing input {p}")
        if not _check_values(codomain, table[p]):
            raise ShapeMismatch(f"output {table[p]} at {p} is not a point of {codomain} x {codomain}")
    if len(table) != domain.size ** 2:
        raise ShapeMismatch("table has inputs outside the domain")
    f = ApproxMorphism.from_table(domain, codomain, table, certificate=EXHAUSTIVE, name=name)
    witness = p_monotonicity_witness(f)
    if witness is not None:
        p, q = witness
        raise NotPMonotone(witness, (f(p), f(q)))
    return f


def from_function(domain, codomain, fn, *, name=None) -> ApproxMorphism:
    """Tabulate ``fn`` over all flat inputs and certify it."""
    domain = as_shape(domain)
    return make_morphism(domain, codomain, {p: tuple(fn(*p)) for p in bilattice_points(domain)},
                         name=name)


def spot_check(f: ApproxMorphism, seed=0, k=64):
    """Seeded random cover-pair test for rule-backed morphisms; witness or ``None``."""
    rng = random.Random(seed)
    dom, cod = f.domain, f.codomain
    for _ in range(k):
        p = dom.random_element(rng) + dom.random_element(rng)
        covers = p_upper_covers(dom, p)
        if not covers:
            continue
        q = rng.choice(covers)
        if not leq_p(cod, f(p), f(q)):
            return p, q
    return None


# -- category structure ----------------------------------------------------


def identity(shape) -> ApproxMorphism:
    shape = as_shape(shape)
    return ApproxMorphism(shape, shape, lambda p: p, memo=False, name="id")


def constant(domain, codomain, value) -> ApproxMorphism:
    value = tuple(value)
    return ApproxMorphism(domain, codomain, lambda p: value, memo=False, name=f"const{value}")


def compose(g: ApproxMorphism, f: ApproxMorphism) -> ApproxMorphism:
    """``g o f`` (apply ``f`` first)."""
    if f.codomain != g.domain:
        raise ShapeMismatch(f"cannot compose {g!r} after {f!r}")
    return ApproxMorphism(f.domain, g.codomain, lambda p: g(f(p)), certificate=_weakest(f, g))


def _weakest(*fs):
    certs = {f.certificate for f in fs}
    if certs <= {EXHAUSTIVE}:
        return BY_CONSTRUCTION
    spot = sorted(c for c in certs if c.startswith("spot"))
    return spot[0] if spot else BY_CONSTRUCTION


def tupling(*fs: ApproxMorphism) -> ApproxMorphism:
    """Target tupling: lower parts of all outputs first, then upper parts."""
    if not fs:
        raise ShapeMismatch("tupling needs at least one morphism")
    dom = fs[0].domain
    for f in fs:
        if f.domain != dom:
            raise ShapeMismatch(f"tupling needs a common domain, got {f.domain} and {dom}")
    arities = [f.codomain.arity for f in fs]

    def rule(p):
        lo, up = (), ()
        for f, m in zip(fs, arities):
            v = f(p)
            lo += v[:m]
            up += v[m:]
        return lo + up

    return ApproxMorphism(dom, ProductShape.concat(*(f.codomain for f in fs)), rule,
                          certificate=_weakest(*fs))


def _blocks(blocks):
    if isinstance(blocks, ProductShape):
        return [ProductShape((f,)) for f in blocks.factors]
    return [as_shape(b) for b in blocks]


def base_morphism(rho: Sequence[int], blocks) -> ApproxMorphism:
    """Reindexing morphism of ``rho: [m] -> [n]`` (0-based) over ``n`` blocks.

    Output block ``k`` is input block ``rho[k]``, in both coordinates.
    ``blocks`` is a sequence of lattices/shapes, or a ProductShape whose
    factors are taken as the blocks.
    """
    blocks = _blocks(blocks)
    offsets = list(itertools.accumulate([0] + [b.arity for b in blocks]))
    rho = tuple(rho)
    for r in rho:
        if not 0 <= r < len(blocks):
            raise ShapeMismatch(f"rho value {r} outside [0, {len(blocks)})")
    idx = tuple(i for r in rho for i in range(offsets[r], offsets[r + 1]))
    n = offsets[-1]
    domain = ProductShape.concat(*blocks)
    codomain = ProductShape.concat(*(blocks[r] for r in rho))

    def rule(p):
        return tuple(p[i] for i in idx) + tuple(p[n + i] for i in idx)

    return ApproxMorphism(domain, codomain, rule, memo=False, name=f"base{rho}")


def projection(blocks, i: int) -> ApproxMorphism:
    """``pi_i`` onto block ``i`` (0-based)."""
    return base_morphism((i,), blocks)


def diagonal(shape, n: int) -> ApproxMorphism:
    """``Delta_n: A -o A^n``."""
    return base_morphism((0,) * n, [as_shape(shape)])


def invert_permutation(rho):
    inv = [0] * len(rho)
    for i, r in enumerate(rho):
        inv[r] = i
    if sorted(rho) != list(range(len(rho))):
        raise ValueError(f"{rho} is not a permutation")
    return tuple(inv)


def product_morphism(*fs: ApproxMorphism) -> ApproxMorphism:
    """``f1 x ... x fk``, interleaving blocks so the flat layout is kept."""
    dom_ar = [f.domain.arity for f in fs]
    cod_ar = [f.codomain.arity for f in fs]
    n = sum(dom_ar)
    offs = list(itertools.accumulate([0] + dom_ar))

    def rule(p):
        lo, up = (), ()
        for f, s, e, m in zip(fs, offs, offs[1:], cod_ar):
            v = f(p[s:e] + p[n + s:n + e])
            lo += v[:m]
            up += v[m:]
        return lo + up

    return ApproxMorphism(ProductShape.concat(*(f.domain for f in fs)),
                          ProductShape.concat(*(f.codomain for f in fs)), rule,
                          certificate=_weakest(*fs))


# -- subcategories ----------------------------------------------------------


@dataclass(frozen=True)
class SubcategoryProfile:
    consistent: bool
    symmetric: bool
    a_class: bool
    as_class: bool

    def to_dict(self):
        return asdict(self)


def classify(f: ApproxMorphism, cap=POINT_CAP) -> SubcategoryProfile:
    """Decide membership in the consistent, symmetric, A and As subcategories exhaustively."""
    dom, cod = f.domain, f.codomain
    if dom.size ** 2 > cap:
        raise CapExceeded(f"classification needs {dom.size ** 2} evaluations (cap {cap})")
    m = cod.arity
    consistent = symmetric = True
    for p in bilattice_points(dom):
        v = f(p)
        if consistent and is_consistent(dom, p) and not cod.leq(v[:m], v[m:]):
            consistent = False
        if symmetric and v[m:] != f(swap(p))[:m]:
            symmetric = False
    a_class = as_class = True
    for x in dom.elements():
        v = f(x + x)
        a_class = a_class and cod.leq(v[:m], v[m:])
        as_class = as_class and v[:m] == v[m:]
    return SubcategoryProfile(consistent, symmetric, a_class, as_class)


def op_transform(component: Callable) -> Callable:
    """``c^op``: the same component with its two coordinate blocks swapped."""
    return lambda p: component(swap(p))


def symmetric_morphism(domain, codomain, lower: Callable, *, name=None) -> ApproxMorphism:
    """``<f1, f1^op>`` from a lower component (monotone in x, anti-monotone in x')."""
    upper = op_transform(lower)
    domain = as_shape(domain)
    table = {p: tuple(lower(p)) + tuple(upper(p)) for p in bilattice_points(domain)}
    return make_morphism(domain, codomain, table, name=name)


# -- enumeration and sampling -------------------------------------------------


def monotone_maps(points, leq, codomain) -> Iterator[tuple]:
    """Every monotone map from the finite poset ``(points, leq)`` to ``codomain``.

    Maps are value vectors indexed like ``points``; they come out in
    lexicographic order of those vectors, values compared by the
    codomain's canonical element order.
    """
    vals = list(codomain.elements())
    cleq = codomain.leq
    n = len(points)
    below = [[j for j in range(i) if leq(points[j], points[i])] for i in range(n)]
    above = [[j for j in range(i) if leq(points[i], points[j])] for i in range(n)]
    out = [None] * n

    def rec(i):
        if i == n:
            yield tuple(out)
            return
        for v in vals:
            if all(cleq(out[j], v) for j in below[i]) and all(cleq(v, out[j]) for j in above[i]):
                out[i] = v
                yield from rec(i + 1)

    yield from rec(0)


@lru_cache(maxsize=64)
def _components(domain: ProductShape, codomain: ProductShape):
    points = list(bilattice_points(domain))
    lowers = list(monotone_maps(points, lambda p, q: leq_p(domain, p, q), codomain))
    uppers = list(monotone_maps(points, lambda p, q: leq_p(domain, q, p), codomain))
    return points, lowers, uppers


def _check_enum_cap(domain, cap):
    if domain.size ** 2 > cap:
        raise CapExceeded(f"enumeration over {domain.size ** 2} input points exceeds cap {cap}")


def component_lists(domain, codomain, cap=64):
    """``(points, lower components, upper components)`` for ``domain -o codomain``."""
    domain, codomain = as_shape(domain), as_shape(codomain)
    _check_enum_cap(domain, cap)
    return _components(domain, codomain)


def morphism_from_components(domain, codomain, points, lower, upper, name=None) -> ApproxMorphism:
    table = {p: lo + up for p, lo, up in zip(points, lower, upper)}
    return ApproxMorphism.from_table(domain, codomain, table, certificate=EXHAUSTIVE, name=name)


def count_morphisms(domain, codomain, cap=64) -> int:
    _, lowers, uppers = component_lists(domain, codomain, cap)
    return len(lowers) * len(uppers)


def enumerate_morphisms(domain, codomain, cap=64) -> Iterator[ApproxMorphism]:
    """Every morphism ``domain -o codomain`` exactly once, in canonical order.

    The order is lexicographic in (lower component vector, upper component
    vector); each vector lists values at the bilattice points in canonical
    order. For ``2 -o 2`` the first morphism is the constant ``(0, 0)``.
    ``cap`` bounds the number of bilattice points of the domain.
    """
    domain, codomain = as_shape(domain), as_shape(codomain)
    points, lowers, uppers = component_lists(domain, codomain, cap)
    for lo in lowers:
        for up in uppers:
            yield morphism_from_components(domain, codomain, points, lo, up)


def _greedy_component(domain, codomain, rng, antitone):
    # visit points along a linear extension; each value only has to sit
    # above the values already chosen at its cover predecessors
    points = sorted(bilattice_points(domain), key=lambda p: p_level(domain, p), reverse=antitone)
    vals = list(codomain.elements())
    preds = p_upper_covers if antitone else p_lower_covers
    out = {}
    for p in points:
        low = codomain.bottom
        for q in preds(domain, p):
            low = codomain.join(low, out[q])
        out[p] = rng.choice([v for v in vals if codomain.leq(low, v)])
    return out


def random_morphism(domain, codomain, rng: random.Random) -> ApproxMorphism:
    """A random morphism; uniform when the component spaces are small enough to list.

    Larger spaces use a greedy sampler along a linear extension of the
    precision order, which always yields a valid (not uniform) morphism.
    """
    domain, codomain = as_shape(domain), as_shape(codomain)
    if domain.size ** 2 * codomain.size <= 64:
        points, lowers, uppers = _components(domain, codomain)
        return morphism_from_components(domain, codomain, points, rng.choice(lowers),
                                        rng.choice(uppers))
    lo = _greedy_component(domain, codomain, rng, antitone=False)
    up = _greedy_component(domain, codomain, rng, antitone=True)
    table = {p: lo[p] + up[p] for p in bilattice_points(domain)}
    return ApproxMorphism.from_table(domain, codomain, table, certificate=BY_CONSTRUCTION)
