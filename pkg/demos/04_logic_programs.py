"""
Logic programs: well-founded and stable models
==============================================

Parse small normal programs, compute their well-founded model through
the fixpoint engine and compare stable models with a brute-force check.
"""

import random

from afp.lp import analyze, parse_program, random_program

programs = {
    "even loop": "a :- not b.\nb :- not a.\n",
    "odd loop": "a :- not a.\n",
    "chain": "a.\nb :- a.\nc :- b, not d.\n",
}
for name, text in programs.items():
    res = analyze(parse_program(text))
    print(name, res.to_dict())

# The same on random programs: the two stable-model computations agree.
rng = random.Random(0)
agree = sum(analyze(random_program(rng)).agree for _ in range(100))
print(f"{agree}/100 random programs agree")
