"""Stable functions, stable fixed points and the (parametric) well-founded fixed point.

For ``f: A x B -o A`` with flat input ``(x, y, x', y')``::

    s1(x', y, y') = mu x.  f1(x, y, x', y')
    s2(x,  y, y') = mu x'. f2(x, y, x', y')
    S(f)(x, y, x', y') = (s1(x', y, y'), s2(x, y, y'))

The well-founded fixed point ``f‡(y, y')`` is the precision-least fixed
point of ``(x, x') -> S(f)(x, y, x', y')``, reached by Kleene iteration
from ``(bottom_A, top_A)``. It is computed lazily per parameter point.
"""
from __future__ import annotations

from .errors import CapExceeded, FixpointError, ShapeMismatch
from .lattice import ProductShape
from .morphism import POINT_CAP, ApproxMorphism, bilattice_points


def dagger_split(f: ApproxMorphism):
    """Return ``(A, B)`` for ``f: A x B -o A``."""
    k = f.codomain.arity
    dom = f.domain.factors
    if dom[:k] != f.codomain.factors:
        raise ShapeMismatch(f"{f!r} is not of the form A x B -o A")
    return f.codomain, ProductShape(dom[k:])


def stable_function(f: ApproxMorphism) -> ApproxMorphism:
    """``S(f)`` as a morphism with the same shapes as ``f``."""
    A, B = dagger_split(f)
    k, m = A.arity, B.arity
    bottom = A.bottom
    steps = range(A.height + 1)

    # both inner loops are lfp() from lattice, inlined: this is the hot path
    def rule(p):
        x, y, xp, yp = p[:k], p[k:k + m], p[k + m:2 * k + m], p[2 * k + m:]
        tail = y + xp + yp
        s1 = bottom
        for _ in steps:
            v = f(s1 + tail)[:k]
            if v == s1:
                break
            s1 = v
        else:
            raise FixpointError("inner iteration exceeded lattice height")
        head = x + y
        s2 = bottom
        for _ in steps:
            v = f(head + s2 + yp)[k:]
            if v == s2:
                break
            s2 = v
        else:
            raise FixpointError("inner iteration exceeded lattice height")
        return s1 + s2

    return ApproxMorphism(f.domain, f.codomain, rule, name="S")


def well_founded(f: ApproxMorphism) -> ApproxMorphism:
    """``f‡: B -o A``, the precision-least stable fixed point at each parameter."""
    A, B = dagger_split(f)
    S = stable_function(f)
    k, m = A.arity, B.arity
    start = A.bottom + A.top
    limit = 2 * A.height + 1

    def rule(q):
        y, yp = q[:m], q[m:]
        x, xp = start[:k], start[k:]
        for _ in range(limit + 1):
            v = S(x + y + xp + yp)
            if v[:k] == x and v[k:] == xp:
                return v
            x, xp = v[:k], v[k:]
        raise FixpointError("stable iteration exceeded bilattice height")

    return ApproxMorphism(B, A, rule, name="wf")


def stable_set(f: ApproxMorphism, param=(), cap=POINT_CAP) -> list:
    """All stable fixed points at parameter ``param = y + y'``, in canonical order."""
    A, B = dagger_split(f)
    if len(param) != 2 * B.arity:
        raise ShapeMismatch(f"parameter {param} does not fit {B}")
    if A.size ** 2 > cap:
        raise CapExceeded(f"stable-set scan over {A.size ** 2} points exceeds cap {cap}")
    S = stable_function(f)
    k, m = A.arity, B.arity
    y, yp = param[:m], param[m:]
    out = []
    for p in bilattice_points(A):
        if S(p[:k] + y + p[k:] + yp) == p:
            out.append(p)
    return out


def stable_fixed_point_function(f: ApproxMorphism) -> dict:
    """``f△`` tabulated: parameter point -> list of stable fixed points."""
    _, B = dagger_split(f)
    return {q: stable_set(f, q) for q in bilattice_points(B)}


def double_wf(f: ApproxMorphism) -> ApproxMorphism:
    """``f‡‡`` for ``f: A x A x B -o A``: dagger over the first block, then the next."""
    A = f.codomain
    if f.domain.factors[A.arity:2 * A.arity] != A.factors:
        raise ShapeMismatch(f"{f!r} is not of the form A x A x B -o A")
    return well_founded(well_founded(f))
