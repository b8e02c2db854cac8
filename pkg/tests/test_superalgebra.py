import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from support import a4, osp12, sl2

from nambu_lab.superalgebra import (
    Gen,
    LinearMap,
    TableAlgebra,
    ad,
    bracket,
    bracket_gens,
    canonicalize,
    check_derivation,
    check_morphism,
    check_nambu,
    check_skew,
    element_parity,
    identity_map,
    random_triples,
    supercommutator,
    twist,
    zero_map,
)

POOL = [Gen("a", 0), Gen("b", 0), Gen("p", 1), Gen("q", 1), Gen("c", 0)]
RANK = {g: j for j, g in enumerate(POOL)}


def koszul_sign(gs):
    """Sign of sorting by counting inversions, each worth -(-1)^{|a||b|}."""
    s = 1
    for i, j in itertools.combinations(range(len(gs)), 2):
        if RANK[gs[i]] > RANK[gs[j]]:
            s *= 1 if gs[i].parity & gs[j].parity else -1
    return s


@given(st.lists(st.sampled_from(POOL), min_size=1, max_size=5))
def test_canonicalize_sign_matches_inversion_count(gs):
    cs, sign = canonicalize(gs, RANK.__getitem__)
    repeated_even = any(gs.count(g) > 1 for g in gs if g.parity == 0)
    if repeated_even:
        assert cs is None and sign == 0
    else:
        assert list(cs) == sorted(gs, key=RANK.__getitem__)
        assert sign == koszul_sign(gs)


def test_repeated_odd_generator_survives():
    cs, sign = canonicalize([POOL[2], POOL[2], POOL[0]], RANK.__getitem__)
    assert cs == (POOL[0], POOL[2], POOL[2]) and sign == 1


@pytest.mark.parametrize("make", [a4, sl2, osp12])
def test_finite_examples_satisfy_identities(make):
    alg = make()
    G = alg.generators()
    n = alg.arity
    assert check_skew(alg, list(itertools.product(G, repeat=n))).ok
    samples = [(y, x) for y in itertools.product(G, repeat=n - 1) for x in itertools.product(G, repeat=n)]
    rep = check_nambu(alg, samples)
    assert rep.ok and rep.nontrivial > 0


def test_broken_table_is_flagged_with_witness():
    alg = a4().copy("broken")
    e = alg.generators()
    alg.set_bracket([e[0], e[1], e[2]], {e[3]: 1, e[2]: 1})
    rep = check_nambu(alg, [(y, x) for y in itertools.product(e, repeat=2) for x in itertools.product(e, repeat=3)])
    assert not rep.ok
    w = rep.violations[0]
    assert set(w) >= {"y", "x"}


def test_table_json_round_trip():
    alg = osp12()
    back = TableAlgebra.from_json(alg.to_json())
    assert back.to_json() == alg.to_json()
    for x in itertools.product(alg.generators(), repeat=2):
        assert bracket_gens(back, x) == bracket_gens(alg, x)


@pytest.mark.parametrize(
    "data",
    [
        {"generators": []},
        {"arity": 3, "generators": [{"id": "a", "parity": 2}]},
        {"arity": 3, "generators": [{"id": "a", "parity": 0}], "brackets": [{"args": ["a", "a", "z"], "value": []}]},
        {"arity": 2, "generators": [{"id": "a", "parity": 0}, {"id": "p", "parity": 1}], "brackets": [{"args": ["a", "p"], "value": [{"id": "a", "num": "1"}]}]},
    ],
)
def test_malformed_tables_are_rejected(data):
    with pytest.raises(ValueError):
        TableAlgebra.from_json(data)


def test_inner_derivations_and_their_commutator():
    alg = osp12()
    G = alg.generators()
    samples = list(itertools.product(G, repeat=2))
    ads = [ad([g], alg) for g in G]
    for D in ads:
        assert check_derivation(D, alg, samples).ok
    for D1, D2 in itertools.product(ads, repeat=2):
        assert check_derivation(supercommutator(D1, D2), alg, samples).ok


def test_non_derivation_is_flagged():
    alg = sl2()
    e, f, h = (alg.gen(x) for x in "efh")
    D = LinearMap(0, {e: {e: 1}}, "bad")
    assert not check_derivation(D, alg, [(e, f), (h, e)]).ok


def test_identity_morphism_and_twist_by_identity():
    alg = a4()
    samples = random_triples(alg, 40, random.Random(0))
    assert check_morphism(identity_map(), alg, alg, samples).ok
    tw = twist(alg, identity_map())
    assert all(bracket_gens(tw, x) == bracket_gens(alg, x) for x in samples)
    assert check_morphism(zero_map(), alg, alg, samples).ok
    assert not check_morphism(2 * identity_map(), alg, alg, [tuple(alg.generators()[:3])]).ok
    with pytest.raises(ValueError):
        twist(alg, zero_map(1))


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_bracket_is_multilinear(c1, c2):
    alg = sl2()
    e, f, h = (alg.gen(x) for x in "efh")
    lhs = bracket(alg, [{e: c1, h: c2}, {f: 1}])
    expect: dict = {}
    for g, c in bracket_gens(alg, [e, f]).items():
        expect[g] = expect.get(g, 0) + c1 * c
    for g, c in bracket_gens(alg, [h, f]).items():
        expect[g] = expect.get(g, 0) + c2 * c
    assert lhs == {g: c for g, c in expect.items() if c}
    if lhs:
        assert element_parity(lhs) == 0
