import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nambu_lab.cohomology import Window, WindowError
from nambu_lab.superalgebra import bracket_gens, check_derivation, check_nambu, check_skew, supercommutator
from nambu_lab.w_infinity import (
    FAMILIES,
    W,
    WGen,
    claimed_derivation_basis,
    decompose_derivation,
    derivation_samples,
    eigen_report,
    euler_element,
    euler_weight,
    extra_derivations,
    inner,
    outside_inner_span,
    phi1,
    phi2,
    solve_derivations,
    w_bracket,
    window_generators,
    x_element,
    x_weight,
)


def oracle(a: WGen, b: WGen, c: WGen) -> dict:
    """Structure constants for the two ordered patterns L,L,X and L,h,hbar."""
    if (a.family, b.family) == ("L", "L"):
        (m, i), (n, j), (k, hh) = (a.m, a.i), (b.m, b.i), (c.m, c.i)
        co = hh * (n - m) + j * (m - k) + i * (k - n)
        return {WGen(c.family, m + n + k, i + j + hh - 1): co} if co else {}
    if (a.family, b.family, c.family) == ("L", "h", "hbar"):
        (m, i), (p, al), (r, be) = (a.m, a.i), (b.m, b.i), (c.m, c.i)
        co = i * (p - r) + al * (r - m) + be * (m - p)
        return {WGen("Lbar", m + p + r, i + al + be - 1): co} if co else {}
    raise AssertionError("pattern not covered by the oracle")


idx = st.tuples(st.integers(-6, 6), st.integers(0, 4))
gens = st.builds(lambda f, mi: WGen(f, *mi), st.sampled_from(FAMILIES), idx)


@given(idx, idx, idx, st.sampled_from(FAMILIES))
def test_bracket_matches_structure_constants(x, y, z, fam):
    a, b, c = WGen("L", *x), WGen("L", *y), WGen(fam, *z)
    if a == b:
        assert w_bracket(a, b, c) == {}
    else:
        assert w_bracket(a, b, c) == oracle(a, b, c)


@given(idx, idx, idx)
def test_bracket_with_two_odd_arguments(x, y, z):
    a, b, c = WGen("L", *x), WGen("h", *y), WGen("hbar", *z)
    assert w_bracket(a, b, c) == oracle(a, b, c)
    assert w_bracket(a, c, b) == oracle(a, b, c)  # swapping two odd slots keeps the sign


@given(gens, gens, gens)
def test_super_skew_symmetry(a, b, c):
    assert check_skew(W, [(a, b, c)]).ok


@given(st.sampled_from(["Lbar", "h", "hbar"]), gens, gens)
def test_brackets_without_leading_L_vanish(f, b, c):
    a = WGen(f, 0, 1)
    if all(g.family != "L" for g in (b, c)):
        assert w_bracket(a, b, c) == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fundamental_identity_on_random_samples(seed):
    rng = random.Random(seed)
    samples = [(tuple(W.sample_generator(rng, 4, 3) for _ in range(2)), tuple(W.sample_generator(rng, 4, 3) for _ in range(3))) for _ in range(25)]
    assert check_nambu(W, samples).ok


def test_known_bracket_values():
    assert w_bracket(WGen("L", 1, 1), WGen("L", 0, 2), WGen("h", -1, 0)) == {WGen("h", 0, 2): 3}
    assert w_bracket(WGen("L", 0, 0), WGen("L", 0, 1), WGen("Lbar", 5, 2)) == {WGen("Lbar", 5, 2): -5}


def test_generator_json_and_validation():
    g = WGen("hbar", -2, 3)
    assert WGen.from_json(g.to_json()) == g
    assert WGen.from_json({"family": "hb", "m": "1", "i": "0"}) == WGen("hbar", 1, 0)
    for bad in ({"family": "X", "m": 0, "i": 0}, {"family": "L", "m": 0, "i": -1}, {"m": 0}):
        with pytest.raises(ValueError):
            WGen.from_json(bad)


def test_euler_and_x_elements_act_diagonally():
    gs = window_generators(5, 3)
    assert eigen_report(euler_element(), euler_weight, gs).ok
    assert eigen_report(x_element(), x_weight, gs).ok


def test_phi_maps_are_non_inner_derivations():
    samples = derivation_samples(300, seed=1)
    for D in (phi1(), phi2(), *extra_derivations(0, 0, 0), *extra_derivations(1, 0, 0)):
        assert check_derivation(D, W, samples).ok, D.name
    assert outside_inner_span(phi1(), Window(6, 4, 2))
    assert outside_inner_span(phi2(), Window(6, 4, 2))


@pytest.mark.parametrize("parity,s,t", [(0, 1, 1), (0, 3, 0), (0, -2, 2), (0, -2, 1), (0, 0, 0), (1, 1, 0), (1, 0, 0)])
def test_claimed_bases_are_derivations(parity, s, t):
    samples = derivation_samples(150, seed=2)
    for D in claimed_derivation_basis(parity, s, t):
        rep = check_derivation(D, W, samples)
        assert rep.ok and rep.nontrivial > 0, D.name


def test_commutator_of_inner_derivations_is_a_derivation():
    D1, D2 = inner((WGen("L", 1, 0), WGen("L", -1, 1))), inner((WGen("L", 0, 0), WGen("h", 0, 1)))
    assert check_derivation(supercommutator(D1, D2), W, derivation_samples(100, seed=3)).ok


def test_decompose_recovers_coefficients():
    basis = claimed_derivation_basis(0, 1, 1)
    D = 5 * basis[0] + (-2) * basis[3]
    dec = decompose_derivation(D, 0, 1, 1, samples=100)
    assert dec.ok and dec.coordinates == [5, 0, 0, -2]
    dec0 = decompose_derivation(phi1(), 0, 0, 0, samples=100)
    assert dec0.ok and dec0.coordinates == [0, 0, 0, 0, 1, 0]


def test_decompose_flags_non_member():
    dec = decompose_derivation(phi1(), 0, 1, 1, samples=10)
    assert dec.coordinates is None and dec.residual.violations


def test_small_window_derivation_solve():
    sol = solve_derivations(0, 1, 1, Window(6, 4, 2))
    assert sol.exact and sol.dimension == 4 and sol.claimed_spans and all(sol.claimed_solves)


def test_bad_degrees_and_windows_are_rejected():
    with pytest.raises(ValueError):
        claimed_derivation_basis(0, 0, -1)
    with pytest.raises(ValueError):
        claimed_derivation_basis(2, 0, 0)
    with pytest.raises(WindowError):
        solve_derivations(0, 1, 1, Window(1, 1, 2))


def test_bracket_gens_accepts_any_order():
    a, b, c = WGen("L", 2, 1), WGen("h", 0, 0), WGen("hbar", 1, 2)
    base = bracket_gens(W, (a, b, c))
    for perm in itertools.permutations((a, b, c)):
        val = bracket_gens(W, perm)
        assert val == base or val == {g: -x for g, x in base.items()}
