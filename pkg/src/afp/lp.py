"""Propositional normal logic programs on top of the fixpoint engine.

A program's interpretations are subsets of its atoms, encoded as bitmasks
over a :class:`~afp.lattice.PowersetLattice`. The approximator is the
four-valued immediate-consequence operator; its well-founded fixed point
is the well-founded model and its exact stable fixed points are the
stable models. :func:`gl_oracle` recomputes stable models independently
via the reduct, without touching the lattice machinery.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .errors import CapExceeded, ProgramSyntaxError
from .fixpoint import stable_function, well_founded
from .lattice import PowersetLattice, ProductShape
from .morphism import ApproxMorphism, spot_check, spot_checked

# exhaustive stable-model scans and the oracle refuse larger programs
ATOM_CAP = 20


@dataclass(frozen=True, order=True)
class Rule:
    head: str
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __str__(self):
        body = sorted(self.pos) + [f"not {a}" for a in sorted(self.neg)]
        return f"{self.head} :- {', '.join(body)}." if body else f"{self.head}."


@dataclass(frozen=True)
class LogicProgram:
    atoms: tuple
    rules: tuple

    def __post_init__(self):
        known = set(self.atoms)
        for r in self.rules:
            missing = ({r.head} | r.pos | r.neg) - known
            if missing:
                raise ValueError(f"rule {r} uses undeclared atoms {sorted(missing)}")

    @classmethod
    def from_rules(cls, rules, atoms=()):
        """Normalise: drop duplicate rules, order atoms by first occurrence."""
        order = dict.fromkeys(atoms)
        seen, kept = set(), []
        for r in rules:
            for a in (r.head, *sorted(r.pos), *sorted(r.neg)):
                order.setdefault(a)
            if r not in seen:
                seen.add(r)
                kept.append(r)
        return cls(tuple(order), tuple(kept))

    def __str__(self):
        return "\n".join(str(r) for r in self.rules)


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s+|%[^\n]*|(?P<atom>[a-z][a-zA-Z0-9_]*)|(?P<sym>:-|[.,])|(?P<bad>.)")


def _tokens(text):
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        col = m.start() - line_start + 1
        if m["bad"] is not None:
            raise ProgramSyntaxError(f"unexpected character {m['bad']!r}", line, col)
        if m["atom"] is not None:
            yield "atom", m["atom"], line, col
        elif m["sym"] is not None:
            yield m["sym"], m["sym"], line, col
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + m.group().rindex("\n") + 1
    yield "eof", "", line, len(text) - line_start + 1


def parse_program(text: str, *, cap=None) -> LogicProgram:
    """Parse facts ``a.`` and rules ``h :- b, not c.``; ``%`` starts a comment.

    ``not`` is a keyword, so it cannot be used as an atom in a body.

    Errors carry the 1-based line and column of the offending token. With
    ``cap`` set, programs over that many atoms raise :class:`CapExceeded`.
    """
    toks = _tokens(text)
    rules = []
    tok = next(toks)

    def expect(kind):
        nonlocal tok
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ProgramSyntaxError(f"expected {kind}, found {what}", tok[2], tok[3])
        val = tok[1]
        tok = next(toks)
        return val

    while tok[0] != "eof":
        head = expect("atom")
        pos, neg = set(), set()
        if tok[0] == ":-":
            tok = next(toks)
            while True:
                if tok[0] == "atom" and tok[1] == "not":
                    tok = next(toks)
                    neg.add(expect("atom"))
                else:
                    pos.add(expect("atom"))
                if tok[0] != ",":
                    break
                tok = next(toks)
        expect(".")
        rules.append(Rule(head, frozenset(pos), frozenset(neg)))
    prog = LogicProgram.from_rules(rules)
    if cap is not None and len(prog.atoms) > cap:
        raise CapExceeded(f"program has {len(prog.atoms)} atoms (cap {cap})")
    return prog


# -- the approximator ------------------------------------------------------------


def _compiled(prog):
    bit = {a: 1 << i for i, a in enumerate(prog.atoms)}

    def mask(atoms):
        m = 0
        for a in atoms:
            m |= bit[a]
        return m

    return [(bit[r.head], mask(r.pos), mask(r.neg)) for r in prog.rules]


def powerset_of(prog) -> PowersetLattice:
    return PowersetLattice(len(prog.atoms), prog.atoms)


def approximator(prog: LogicProgram, *, seed=0, k=64) -> ApproxMorphism:
    """``Psi(I, I') = (L, U)`` over the powerset of atoms, evaluated on bitmasks.

    ``L`` collects heads whose positive body lies in ``I`` and whose negated
    atoms avoid ``I'``; ``U`` is the same with ``I`` and ``I'`` exchanged.
    Monotone by construction; a seeded cover-pair spot check is run as well.
    """
    rules = _compiled(prog)

    def rule(p):
        lo, up = p
        low = upp = 0
        for h, pos, neg in rules:
            if pos & ~lo == 0 and neg & up == 0:
                low |= h
            if pos & ~up == 0 and neg & lo == 0:
                upp |= h
        return low, upp

    shape = ProductShape((powerset_of(prog),))
    f = ApproxMorphism(shape, shape, rule, memo=False, name="psi")
    witness = spot_check(f, seed, k)
    if witness is not None:  # pragma: no cover - would be a bug in rule()
        raise AssertionError(f"approximator not monotone at {witness}")
    f.certificate = spot_checked(seed, k)
    return f


# -- semantics -------------------------------------------------------------------


@dataclass(frozen=True)
class FourValuedInterpretation:
    """``lower`` holds the atoms known true, ``upper`` those not known false."""

    lower: frozenset
    upper: frozenset

    @property
    def consistent(self):
        return self.lower <= self.upper

    @property
    def exact(self):
        return self.lower == self.upper

    def value(self, atom):
        t, nf = atom in self.lower, atom in self.upper
        if t and nf:
            return "true"
        if not t and not nf:
            return "false"
        return "undefined" if nf else "inconsistent"

    def leq_p(self, other) -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def classify(self, atoms):
        out = {"true": [], "false": [], "undefined": [], "inconsistent": []}
        for a in atoms:
            out[self.value(a)].append(a)
        return {k: sorted(v) for k, v in out.items()}


def _members(prog, m):
    return frozenset(a for i, a in enumerate(prog.atoms) if m >> i & 1)


def wf_model(prog: LogicProgram) -> FourValuedInterpretation:
    lo, up = well_founded(approximator(prog)).point()
    return FourValuedInterpretation(_members(prog, lo), _members(prog, up))


def _check_cap(prog, cap):
    if len(prog.atoms) > cap:
        raise CapExceeded(f"{len(prog.atoms)} atoms exceed the exhaustive cap {cap}")


def canonical_sets(sets) -> list:
    """Sorted member lists, ordered by size then lexicographically."""
    return sorted((sorted(s) for s in sets), key=lambda s: (len(s), s))


def stable_models_aft(prog: LogicProgram, *, cap=ATOM_CAP) -> list:
    """Every ``M`` with ``S(Psi)(M, M) = (M, M)``, scanning all subsets."""
    _check_cap(prog, cap)
    S = stable_function(approximator(prog))
    found = [m for m in range(1 << len(prog.atoms)) if S((m, m)) == (m, m)]
    return canonical_sets(_members(prog, m) for m in found)


def least_model(rules, atoms=frozenset()):
    """Least model of a negation-free rule list, by naive forward chaining."""
    model = set(atoms)
    changed = True
    while changed:
        changed = False
        for head, pos in rules:
            if head not in model and pos <= model:
                model.add(head)
                changed = True
    return frozenset(model)


def gl_oracle(prog: LogicProgram, *, cap=ATOM_CAP) -> list:
    """Stable models by brute force over candidates and their reducts."""
    _check_cap(prog, cap)
    atoms = prog.atoms
    out = []
    for bits in range(1 << len(atoms)):
        cand = frozenset(a for i, a in enumerate(atoms) if bits >> i & 1)
        reduct = [(r.head, r.pos) for r in prog.rules if not r.neg & cand]
        if least_model(reduct) == cand:
            out.append(cand)
    return canonical_sets(out)


@dataclass(frozen=True)
class SemanticsResult:
    program: LogicProgram
    wf: FourValuedInterpretation
    stable: list
    oracle: list

    @property
    def agree(self):
        return self.stable == self.oracle

    def to_dict(self):
        wf = self.wf.classify(self.program.atoms)
        wf.pop("inconsistent")
        return {"wf": wf, "stable": self.stable, "oracle": self.oracle, "agree": self.agree}


def analyze(prog: LogicProgram, *, cap=ATOM_CAP) -> SemanticsResult:
    wf = wf_model(prog)
    if not wf.consistent:  # pragma: no cover - the approximator is symmetric
        raise AssertionError(f"inconsistent well-founded model {wf}")
    return SemanticsResult(prog, wf, stable_models_aft(prog, cap=cap), gl_oracle(prog, cap=cap))


def random_program(rng: random.Random, *, max_atoms=8, max_rules=16, neg_rate=0.4):
    """A random program over atoms ``p0..p{n-1}``; every atom is declared."""
    n = rng.randint(1, max_atoms)
    atoms = [f"p{i}" for i in range(n)]
    rules = []
    for _ in range(rng.randint(0, max_rules)):
        body = rng.sample(atoms, rng.randint(0, min(3, n)))
        neg = frozenset(a for a in body if rng.random() < neg_rate)
        rules.append(Rule(rng.choice(atoms), frozenset(body) - neg, neg))
    return LogicProgram.from_rules(rules, atoms)
