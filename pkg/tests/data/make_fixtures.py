"""Regenerate the JSON fixtures used by the CLI tests and the README examples.

Cochains are tabulated on finite input sets chosen so that checks sampling
generators with ``|m| <= 1`` and ``i <= 1`` never need an untabulated value.
"""

import itertools
import json
from pathlib import Path

from nambu_lab.cohomology import Cochain, Window, delta, enumerate_coordinates
from nambu_lab.ext_def import DeformationSeries
from nambu_lab.fundamental_complex import ONE, Adj
from nambu_lab.w_infinity import ADJOINT, TRIVIAL, W, WGen, WTruncation, window_generators

HERE = Path(__file__).parent


def point(rep, g0, value, c=1):
    return Cochain.from_table(0, 0, rep, {((), g0): {value: c}}, (0, 0))


def window_inputs(rep, window):
    trunc = WTruncation(rep, window, (0, 0))
    return sorted({(xs, z) for xs, z, _ in enumerate_coordinates(trunc, 1, 0)}, key=repr)


def small_inputs(M, I, zM, zI):
    gens = window_generators(M, I)
    wedges = [x for x in itertools.combinations_with_replacement(gens, 2) if W.canonical(x)[0] == x]
    return [((x,), z) for x in wedges for z in window_generators(zM, zI)]


def dump(name, data):
    (HERE / name).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n")


def main():
    ins = window_inputs(TRIVIAL, Window(6, 3, 2))
    h1 = point(TRIVIAL, WGen("L", 0, 0), ONE)
    h2 = point(TRIVIAL, WGen("Lbar", 0, 0), ONE, 2)
    F = delta(h1)
    dump("w_cocycle_F.json", F.to_json(ins))
    dump("w_cocycle_G.json", (F + delta(h2)).to_json(ins))
    dump("w_h.json", h2.to_json())

    # mu_1 = -delta g for g concentrated on L_0^1, an order-1 coboundary
    g = point(ADJOINT, WGen("L", 0, 1), Adj(WGen("L", 0, 1)))
    mu1 = -1 * delta(g)
    series = DeformationSeries(W, [DeformationSeries.trivial(W).terms[0], mu1])
    dump("w_series_coboundary.json", series.to_json(small_inputs(3, 1, 5, 2)))


if __name__ == "__main__":
    main()
