"""Identity schemas for the well-founded dagger, instance checks and counterexample search.

Each schema turns concrete morphisms into two morphisms of the same shape
(left and right side) built from the category combinators and
:func:`~afp.fixpoint.well_founded`; :func:`check` compares them at every
input point and reports the first difference in canonical order.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import CapExceeded, ShapeMismatch
from .fixpoint import dagger_split, double_wf, well_founded
from .io import morphism_to_json, point_to_json, shape_to_json
from .lattice import TERMINAL, ProductShape, as_shape, power
from .morphism import (
    ApproxMorphism,
    base_morphism,
    component_lists,
    compose,
    diagonal,
    identity,
    invert_permutation,
    morphism_from_components,
    product_morphism,
    projection,
    random_morphism,
    tupling,
)

DEFAULT_SEED = 0
DEFAULT_SAMPLES = 1000
# "auto" mode searches exhaustively up to this many point evaluations
EXHAUSTIVE_LIMIT = 10 ** 7


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    ``holds`` is ``None`` when a quasi-identity's premise is not satisfied;
    the instance is then inapplicable rather than a counterexample.
    """

    schema: str
    holds: Optional[bool]
    witness: Optional[tuple] = None
    lhs: Optional[tuple] = None
    rhs: Optional[tuple] = None
    instance: dict = field(default_factory=dict)
    note: str = ""

    @property
    def status(self):
        if self.holds is None:
            return "premise not satisfied"
        return "holds" if self.holds else "fails"

    def to_dict(self):
        inst = {}
        for key, val in self.instance.items():
            inst[key] = morphism_to_json(val) if isinstance(val, ApproxMorphism) else val
        return {
            "schema": self.schema,
            "holds": self.holds,
            "status": self.status,
            "witness": None if self.witness is None else point_to_json(self.witness),
            "lhs": None if self.lhs is None else point_to_json(self.lhs),
            "rhs": None if self.rhs is None else point_to_json(self.rhs),
            "instance": inst,
            "note": self.note,
        }


def first_difference(lhs: ApproxMorphism, rhs: ApproxMorphism):
    """``(point, lhs value, rhs value)`` at the first disagreement, or ``None``."""
    if lhs.domain != rhs.domain or lhs.codomain != rhs.codomain:
        raise ShapeMismatch(f"sides differ in shape: {lhs!r} vs {rhs!r}")
    for p in lhs.points():
        a, b = lhs(p), rhs(p)
        if a != b:
            return p, a, b
    return None


# -- the schemas -------------------------------------------------------------


def fixed_point_sides(f):
    _, B = dagger_split(f)
    fw = well_founded(f)
    return compose(f, tupling(fw, identity(B))), fw


def parameter_sides(f, g):
    A, B = dagger_split(f)
    if g.codomain != B:
        raise ShapeMismatch(f"g must land in the parameter object {B}")
    return well_founded(compose(f, product_morphism(identity(A), g))), compose(well_founded(f), g)


def permutation_sides(f, rho):
    A, B = dagger_split(f)
    rho = tuple(rho)
    if len(rho) != A.arity:
        raise ShapeMismatch(f"rho must permute the {A.arity} factors of {A}")
    b_rho = base_morphism(rho, A)
    permuted = b_rho.codomain
    b_inv = base_morphism(invert_permutation(rho), permuted)
    lhs = well_founded(compose(b_rho, compose(f, product_morphism(b_inv, identity(B)))))
    return lhs, compose(b_rho, well_founded(f))


def composition_sides(f, g):
    """``f: B x C -o A`` and ``g: A x C -o B``."""
    A, B = f.codomain, g.codomain
    nB = B.arity
    if f.domain.factors[:nB] != B.factors:
        raise ShapeMismatch("f must have domain B x C")
    C = ProductShape(f.domain.factors[nB:])
    if g.domain != ProductShape.concat(A, C):
        raise ShapeMismatch("g must have domain A x C")
    lhs = well_founded(compose(f, tupling(g, projection([A, C], 1))))
    inner = well_founded(compose(g, tupling(f, projection([B, C], 1))))
    return lhs, compose(f, tupling(inner, identity(C)))


def composition_simple_sides(f):
    ff = well_founded(compose(f, f))
    return compose(f, ff), ff


def squaring_sides(f):
    return well_founded(compose(f, f)), well_founded(f)


def double_dagger_sides(f):
    A = f.codomain
    B = ProductShape(f.domain.factors[2 * A.arity:])
    rhs = well_founded(compose(f, product_morphism(diagonal(A, 2), identity(B))))
    return double_wf(f), rhs


def _pairing_split(f, g):
    A, B = f.codomain, g.codomain
    if f.domain != g.domain or f.domain.factors[:A.arity + B.arity] != A.factors + B.factors:
        raise ShapeMismatch("pairing needs f, g with common domain A x B x C")
    return A, B, ProductShape(f.domain.factors[A.arity + B.arity:])


def pairing_intermediate(f, g):
    """``h = g o <<f‡, id_{BxC}>>`` from the pairing identity."""
    _, B, C = _pairing_split(f, g)
    return compose(g, tupling(well_founded(f), identity(ProductShape.concat(B, C))))


def pairing_sides(f, g):
    _, _, C = _pairing_split(f, g)
    hw = well_founded(pairing_intermediate(f, g))
    rhs = tupling(compose(well_founded(f), tupling(hw, identity(C))), hw)
    return well_founded(tupling(f, g)), rhs


def pairing_special_sides(f, g):
    """``f: A x B x C -o A`` and ``g: B x C -o B``."""
    A, B = f.codomain, g.codomain
    C = ProductShape(g.domain.factors[B.arity:])
    if f.domain != ProductShape.concat(A, B, C):
        raise ShapeMismatch("f must have domain A x B x C")
    g_lift = compose(g, product_morphism(projection([A, B], 1), identity(C)))
    gw = well_founded(g)
    rhs = tupling(compose(well_founded(f), tupling(gw, identity(C))), gw)
    return well_founded(tupling(f, g_lift)), rhs


def cyclic_group(n):
    return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))


def _check_group_table(cayley):
    n = len(cayley)
    rows = [tuple(r) for r in cayley]
    elems = set(range(n))
    if any(set(r) != elems or len(r) != n for r in rows):
        raise ValueError("cayley table rows must be permutations of [n]")
    if any(set(col) != elems for col in zip(*rows)):
        raise ValueError("cayley table columns must be permutations of [n]")
    for a, b, c in itertools.product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise ValueError("cayley table is not associative")
    return rows


def group_sides(f, cayley):
    """``f: A^n x B -o A`` with ``cayley`` a group table on ``0..n-1``."""
    rows = _check_group_table(cayley)
    n = len(rows)
    A = f.codomain
    if f.domain.factors[:n * A.arity] != power(A, n).factors:
        raise ShapeMismatch("f must have domain A^n x B")
    B = ProductShape(f.domain.factors[n * A.arity:])
    blocks = [A] * n
    lhs = well_founded(tupling(*(
        compose(f, product_morphism(base_morphism(rows[i], blocks), identity(B))) for i in range(n)
    )))
    rhs = compose(diagonal(A, n),
                  well_founded(compose(f, product_morphism(diagonal(A, n), identity(B)))))
    return lhs, rhs


def _weak_functorial_shapes(f, g):
    A = g.codomain
    if f.codomain.arity % A.arity or f.codomain.factors != A.factors * (f.codomain.arity // A.arity):
        raise ShapeMismatch("f must land in A^n")
    n = f.codomain.arity // A.arity
    B = ProductShape(g.domain.factors[A.arity:])
    if f.domain != ProductShape.concat(power(A, n), B):
        raise ShapeMismatch("f must have domain A^n x B")
    return A, B, n


def weak_functorial_premise(f, g):
    A, B, n = _weak_functorial_shapes(f, g)
    return (compose(f, product_morphism(diagonal(A, n), identity(B))),
            compose(diagonal(A, n), g))


def weak_functorial_sides(f, g):
    A, _, n = _weak_functorial_shapes(f, g)
    return well_founded(f), compose(diagonal(A, n), well_founded(g))


@dataclass(frozen=True)
class Schema:
    name: str
    slots: tuple
    sides: Callable
    valid: bool
    premise: Optional[Callable] = None
    params: tuple = ()


SCHEMAS = {s.name: s for s in [
    Schema("fixed_point", ("f",), fixed_point_sides, True),
    Schema("parameter", ("f", "g"), parameter_sides, True),
    Schema("permutation", ("f",), permutation_sides, True, params=("rho",)),
    Schema("composition", ("f", "g"), composition_sides, False),
    Schema("composition_simple", ("f",), composition_simple_sides, False),
    Schema("squaring", ("f",), squaring_sides, False),
    Schema("double_dagger", ("f",), double_dagger_sides, False),
    Schema("pairing", ("f", "g"), pairing_sides, False),
    Schema("pairing_special", ("f", "g"), pairing_special_sides, True),
    Schema("group", ("f",), group_sides, True, params=("cayley",)),
    Schema("weak_functorial", ("f", "g"), weak_functorial_sides, True,
           premise=weak_functorial_premise),
]}


def check(schema: str, *morphisms, **params) -> IdentityReport:
    """Build both sides of ``schema`` for the given instance and compare them."""
    try:
        sch = SCHEMAS[schema]
    except KeyError:
        raise ValueError(f"unknown identity schema {schema!r}") from None
    if len(morphisms) != len(sch.slots):
        raise ShapeMismatch(f"{schema} takes morphisms {sch.slots}")
    instance = dict(zip(sch.slots, morphisms))
    for key in sch.params:
        instance[key] = [list(r) for r in params[key]] if key == "cayley" else list(params[key])
    if sch.premise is not None:
        diff = first_difference(*sch.premise(*morphisms))
        if diff is not None:
            p, a, b = diff
            return IdentityReport(schema, None, instance=instance,
                                  note=f"premise not satisfied at {p}: {a} != {b}")
    lhs, rhs = sch.sides(*morphisms, **params)
    diff = first_difference(lhs, rhs)
    if diff is None:
        return IdentityReport(schema, True, instance=instance)
    p, a, b = diff
    return IdentityReport(schema, False, p, a, b, instance)


def check_parameter(f, g):
    return check("parameter", f, g)


def check_permutation(f, rho):
    return check("permutation", f, rho=rho)


def check_pairing(f, g):
    return check("pairing", f, g)


def check_double_dagger(f):
    return check("double_dagger", f)


def check_group(f, cayley):
    return check("group", f, cayley=cayley)


def check_weak_functorial(f, g):
    return check("weak_functorial", f, g)


# -- instance spaces and search ----------------------------------------------


def collapses(A, n):
    """Morphisms ``c: A^n -o A`` with ``c o Delta_n = id``: projections and lattice folds."""
    A = as_shape(A)
    k = A.arity
    out = [projection([A] * n, j) for j in range(n)]

    def fold(lo_op, up_op):
        def rule(p):
            xs = [p[i * k:(i + 1) * k] for i in range(n)]
            xps = [p[(n + i) * k:(n + i + 1) * k] for i in range(n)]
            lo, up = xs[0], xps[0]
            for x, xp in zip(xs[1:], xps[1:]):
                lo, up = lo_op(lo, x), up_op(up, xp)
            return lo + up
        return rule

    for lo_name, lo_op in (("meet", A.meet), ("join", A.join)):
        for up_name, up_op in (("meet", A.meet), ("join", A.join)):
            out.append(ApproxMorphism(power(A, n), A, fold(lo_op, up_op), memo=False,
                                      name=f"{lo_name}/{up_name}"))
    return out


def lift_along_diagonal(g, cs):
    """``f = <<g o (c_1 x id), ..., g o (c_n x id)>>``; satisfies the weak functorial premise."""
    A = g.codomain
    B = ProductShape(g.domain.factors[A.arity:])
    return tupling(*(compose(g, product_morphism(c, identity(B))) for c in cs))


class _Slot:
    """One morphism slot ``domain -o codomain`` of an instance space."""

    def __init__(self, domain, codomain):
        self.domain, self.codomain = as_shape(domain), as_shape(codomain)

    def enumerable(self):
        return self.domain.size ** 2 * self.codomain.size <= 64

    def count(self):
        if not self.enumerable():
            return None
        _, lo, up = component_lists(self.domain, self.codomain)
        return len(lo) * len(up)

    def __iter__(self):
        points, lowers, uppers = component_lists(self.domain, self.codomain)
        for lo in lowers:
            for up in uppers:
                yield morphism_from_components(self.domain, self.codomain, points, lo, up)

    def sample(self, rng):
        return random_morphism(self.domain, self.codomain, rng)


@dataclass
class InstanceSpace:
    """Instances of one schema at a fixed shape.

    ``build`` turns the tuple of drawn components into ``(morphisms, params)``.
    """

    schema: str
    slots: list
    build: Callable
    extra: list = field(default_factory=list)
    points: int = 1

    def count(self):
        counts = [s.count() for s in self.slots]
        if None in counts:
            return None
        total = 1
        for c in counts:
            total *= c
        return total * max(1, len(self.extra))

    def exhaustive(self):
        inner = [list(s) for s in self.slots[1:]]
        extra = self.extra or [None]
        for first in self.slots[0]:
            for rest in itertools.product(*inner):
                for e in extra:
                    yield self.build((first, *rest), e)

    def sample(self, rng):
        parts = tuple(s.sample(rng) for s in self.slots)
        e = rng.choice(self.extra) if self.extra else None
        return self.build(parts, e)


def instance_space(schema, lattice, *, n=2, cayley=None) -> InstanceSpace:
    """The instance space of ``schema`` at its minimal shape over ``lattice``.

    The parameter object is terminal except where the schema needs one
    (``parameter``); ``n`` is the number of blocks for ``permutation``,
    ``group`` (ignored when ``cayley`` is given) and ``weak_functorial``.
    """
    A = as_shape(lattice)
    T = TERMINAL
    A2 = ProductShape.concat(A, A)
    pts = A.size ** 2

    def plain(parts, _):
        return parts, {}

    if schema in ("fixed_point", "composition_simple", "squaring"):
        return InstanceSpace(schema, [_Slot(A, A)], plain, points=1)
    if schema == "parameter":
        return InstanceSpace(schema, [_Slot(A2, A), _Slot(A, A)], plain, points=pts)
    if schema == "composition":
        return InstanceSpace(schema, [_Slot(A, A), _Slot(A, A)], plain)
    if schema == "double_dagger":
        return InstanceSpace(schema, [_Slot(A2, A)], plain)
    if schema == "pairing":
        return InstanceSpace(schema, [_Slot(A2, A), _Slot(A2, A)], plain)
    if schema == "pairing_special":
        return InstanceSpace(schema, [_Slot(A2, A), _Slot(A, A)], plain)
    if schema == "permutation":
        rho = tuple(range(1, n)) + (0,)
        An = power(A, n)
        return InstanceSpace(schema, [_Slot(An, An)], lambda parts, _: (parts, {"rho": rho}))
    if schema == "group":
        table = tuple(tuple(r) for r in (cayley or cyclic_group(n)))
        k = len(table)
        return InstanceSpace(schema, [_Slot(power(A, k), A)],
                             lambda parts, _: (parts, {"cayley": table}))
    if schema == "weak_functorial":
        cs = collapses(A, n)
        choices = list(itertools.product(range(len(cs)), repeat=n))

        def build(parts, choice):
            (g,) = parts
            return (lift_along_diagonal(g, [cs[i] for i in choice]), g), {}

        return InstanceSpace(schema, [_Slot(A, A)], build, extra=choices)
    raise ValueError(f"unknown identity schema {schema!r}")


@dataclass
class SearchOutcome:
    schema: str
    lattice: str
    mode: str
    seed: Optional[int]
    checked: int
    space: Optional[int]
    inapplicable: int = 0
    counterexample: Optional[IdentityReport] = None

    @property
    def found(self):
        return self.counterexample is not None

    def to_dict(self):
        if self.counterexample is not None:
            out = self.counterexample.to_dict()
        else:
            out = {"schema": self.schema, "holds": True, "status": "none found",
                   "witness": None, "lhs": None, "rhs": None, "instance": {}, "note": ""}
        out.update(lattice=self.lattice, mode=self.mode, seed=self.seed,
                   checked=self.checked, space=self.space, inapplicable=self.inapplicable)
        return out


def search_counterexample(schema, lattice, *, mode="auto", samples=DEFAULT_SAMPLES,
                          seed=DEFAULT_SEED, limit=EXHAUSTIVE_LIMIT, n=2, cayley=None,
                          space=None) -> SearchOutcome:
    """First failing instance of ``schema`` over ``lattice``, or none found.

    ``mode="exhaustive"`` walks the instance space in canonical order;
    ``"sample"`` draws ``samples`` instances from ``random.Random(seed)``;
    ``"auto"`` is exhaustive when the space needs at most ``limit`` point
    evaluations and the components can be listed, sampling otherwise.
    """
    space = space or instance_space(schema, lattice, n=n, cayley=cayley)
    total = space.count()
    if mode == "auto":
        mode = "exhaustive" if total is not None and total * space.points <= limit else "sample"
    if mode == "exhaustive":
        if total is None:
            raise CapExceeded(f"{schema} over {lattice} is too large to enumerate")
        instances = space.exhaustive()
        used_seed = None
    elif mode == "sample":
        rng = random.Random(seed)
        instances = (space.sample(rng) for _ in range(samples))
        used_seed = seed
    else:
        raise ValueError(f"unknown mode {mode!r}")
    outcome = SearchOutcome(schema, str(lattice), mode, used_seed, 0, total)
    for morphisms, params in instances:
        report = check(schema, *morphisms, **params)
        outcome.checked += 1
        if report.holds is None:
            outcome.inapplicable += 1
        elif not report.holds:
            outcome.counterexample = report
            break
    return outcome
