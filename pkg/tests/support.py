"""Shared samplers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from nambu_lab.cohomology import Cochain
from nambu_lab.fundamental_complex import ONE, Adj, wedge_normalize, wedge_parity
from nambu_lab.superalgebra import Gen, TableAlgebra
from nambu_lab.w_infinity import W, WGen

PARITY_FAMILIES = {0: ("L", "Lbar"), 1: ("h", "hbar")}


def small_gen(rng: random.Random, M: int = 3, I: int = 2) -> WGen:
    return W.sample_generator(rng, M, I)


def small_wedge(rng: random.Random, M: int = 3, I: int = 2) -> tuple:
    while True:
        norm = wedge_normalize(W, (small_gen(rng, M, I), small_gen(rng, M, I)))
        if norm is not None:
            return norm[0]


def random_cochain(slots: int, parity: int, rep, seed: int, density: float = 0.7) -> Cochain:
    """Lazily tabulated cochain with random small values; sparse and parity-correct."""
    rng = random.Random(seed)
    table: dict = {}

    def func(xs, z):
        key = (xs, z)
        if key not in table:
            par = (sum(wedge_parity(x) for x in xs) + z.parity + parity) % 2
            val = {}
            if rng.random() < density:
                c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
                if rep.trivial:
                    if par == 0:
                        val = {ONE: c}
                else:
                    g = small_gen(rng)
                    val = {Adj(WGen(rng.choice(PARITY_FAMILIES[par]), g.m, g.i)): c}
            table[key] = val
        return table[key]

    return Cochain(slots, parity, rep, func, None, f"random{seed}")


def a4() -> TableAlgebra:
    """The simple 3-Lie algebra with ``[e_i, e_j, e_k] = eps_ijkl e_l``."""
    gens = [Gen(f"e{j}", 0) for j in range(1, 5)]
    alg = TableAlgebra(3, gens, name="A4")
    for l in range(4):
        rest = [j for j in range(4) if j != l]
        sign = (-1) ** (3 - l)
        alg.set_bracket([gens[j] for j in rest], {gens[l]: sign})
    return alg


def sl2() -> TableAlgebra:
    e, f, h = Gen("e", 0), Gen("f", 0), Gen("h", 0)
    alg = TableAlgebra(2, [e, f, h], name="sl2")
    alg.set_bracket([e, f], {h: 1})
    alg.set_bracket([h, e], {e: 2})
    alg.set_bracket([h, f], {f: -2})
    return alg


def osp12() -> TableAlgebra:
    """The Lie superalgebra osp(1|2) as an arity-2 example with odd generators."""
    h, e, f, x, y = Gen("h", 0), Gen("e", 0), Gen("f", 0), Gen("x", 1), Gen("y", 1)
    alg = TableAlgebra(2, [h, e, f, x, y], name="osp12")
    for args, val in [
        ((h, e), {e: 2}), ((h, f), {f: -2}), ((e, f), {h: 1}),
        ((h, x), {x: 1}), ((h, y), {y: -1}), ((e, y), {x: -1}), ((f, x), {y: -1}),
        ((x, x), {e: 2}), ((y, y), {f: -2}), ((x, y), {h: 1}),
    ]:
        alg.set_bracket(args, val)
    return alg
