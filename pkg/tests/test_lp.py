import random

import pytest
from hypothesis import given, strategies as st

from afp.errors import CapExceeded, ProgramSyntaxError
from afp.lp import (
    FourValuedInterpretation,
    LogicProgram,
    Rule,
    analyze,
    approximator,
    gl_oracle,
    least_model,
    parse_program,
    random_program,
    stable_models_aft,
    wf_model,
)
from afp.morphism import classify, p_monotonicity_witness

P1 = "a :- not b.\nb :- not a.\n"
P2 = "a :- not a."
P3 = "a. b :- a."
P4 = "a :- not b."


def fs(*xs):
    return frozenset(xs)


def test_parse_examples():
    assert parse_program("a :- b, not c.").rules == (Rule("a", fs("b"), fs("c")),)
    assert parse_program("a.").rules == (Rule("a"),)
    assert parse_program("a :- not a.").rules == (Rule("a", fs(), fs("a")),)


def test_parse_normalises_and_orders_atoms():
    prog = parse_program("% header\nq :- p, not r. % trailing\np.\nq :- p, not r.\n")
    assert prog.atoms == ("q", "p", "r") and len(prog.rules) == 2
    assert parse_program("a :- x_1, yY2.").atoms == ("a", "x_1", "yY2")


@pytest.mark.parametrize("text,line,col", [
    ("a :- b", 1, 7),
    ("a :- b,\n  c d.", 2, 5),
    ("A.", 1, 1),
    ("a :- .", 1, 6),
    ("a :- not .", 1, 10),
    ("\n\n  a :- b; c.", 3, 9),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ProgramSyntaxError) as err:
        parse_program(text)
    assert (err.value.line, err.value.column) == (line, col)


def test_atom_cap():
    text = " ".join(f"p{i}." for i in range(21))
    assert len(parse_program(text).atoms) == 21
    with pytest.raises(CapExceeded):
        parse_program(text, cap=20)
    with pytest.raises(CapExceeded):
        gl_oracle(parse_program(text))


def test_program_rejects_undeclared_atoms():
    with pytest.raises(ValueError):
        LogicProgram(("a",), (Rule("a", fs("b")),))


def test_approximator_examples():
    prog = parse_program(P1)
    psi = approximator(prog)
    # bit 0 = a, bit 1 = b
    assert psi((0, 0b11)) == (0, 0b11)
    p3 = parse_program(P3)
    assert approximator(p3)((0, 0)) == (0b01, 0b01)
    assert psi.certificate.startswith("spot-checked")


def test_approximator_exhaustively_monotone_and_symmetric_on_small_programs():
    rng = random.Random(1)
    for _ in range(30):
        prog = random_program(rng, max_atoms=3, max_rules=6)
        psi = approximator(prog).materialized()
        assert p_monotonicity_witness(psi) is None
        prof = classify(psi)
        assert prof.symmetric and prof.consistent


def test_diagonal_is_classical_consequence():
    rng = random.Random(2)
    for _ in range(50):
        prog = random_program(rng, max_atoms=5)
        psi = approximator(prog)
        for m in range(1 << len(prog.atoms)):
            members = {a for i, a in enumerate(prog.atoms) if m >> i & 1}
            heads = {r.head for r in prog.rules if r.pos <= members and not r.neg & members}
            lo, up = psi((m, m))
            assert lo == up == sum(1 << prog.atoms.index(h) for h in heads)


def test_wf_examples():
    assert wf_model(parse_program(P1)) == FourValuedInterpretation(fs(), fs("a", "b"))
    assert wf_model(parse_program(P2)) == FourValuedInterpretation(fs(), fs("a"))
    w = wf_model(parse_program(P4))
    assert w == FourValuedInterpretation(fs("a"), fs("a"))
    assert w.value("a") == "true" and w.value("b") == "false"


def test_stable_and_oracle_examples():
    assert stable_models_aft(parse_program(P1)) == [["a"], ["b"]] == gl_oracle(parse_program(P1))
    assert stable_models_aft(parse_program(P2)) == [] == gl_oracle(parse_program(P2))
    assert stable_models_aft(parse_program(P3)) == [["a", "b"]]
    assert gl_oracle(parse_program(P4)) == [["a"]]


def test_analyze_examples():
    r = analyze(parse_program(P1))
    assert r.agree and r.wf == FourValuedInterpretation(fs(), fs("a", "b"))
    r = analyze(parse_program(P3))
    assert r.agree and r.wf == FourValuedInterpretation(fs("a", "b"), fs("a", "b"))
    assert r.to_dict() == {"wf": {"true": ["a", "b"], "false": [], "undefined": []},
                           "stable": [["a", "b"]], "oracle": [["a", "b"]], "agree": True}


def test_four_valued_readings():
    i = FourValuedInterpretation(fs("a", "d"), fs("a", "b"))
    assert [i.value(x) for x in "abcd"] == ["true", "undefined", "false", "inconsistent"]
    assert not i.consistent


def test_least_model():
    assert least_model([("a", fs()), ("b", fs("a")), ("c", fs("d"))]) == fs("a", "b")


def check_semantics(prog):
    res = analyze(prog)
    assert res.agree, str(prog)
    wf = res.wf
    assert wf.consistent
    for m in res.stable:
        exact = FourValuedInterpretation(fs(*m), fs(*m))
        assert wf.leq_p(exact)
    if wf.exact:
        assert res.stable == [sorted(wf.lower)]


@given(st.integers(0, 2 ** 32 - 1))
def test_random_programs_agree_with_oracle(seed):
    check_semantics(random_program(random.Random(seed)))


@given(st.integers(0, 2 ** 32 - 1))
def test_positive_programs_have_exact_least_model(seed):
    rng = random.Random(seed)
    prog = random_program(rng, neg_rate=0.0)
    w = wf_model(prog)
    assert w.exact and w.lower == least_model([(r.head, r.pos) for r in prog.rules])


def test_larger_program_within_cap():
    # a chain of 14 alternating negations
    text = "\n".join(f"p{i} :- not p{i + 1}." for i in range(14))
    res = analyze(parse_program(text))
    assert res.agree and len(res.stable) == 1
