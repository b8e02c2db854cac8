import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import a4, random_cochain, small_gen, small_wedge

from nambu_lab.cohomology import Cochain, Window, cochain_from_map, delta
from nambu_lab.ext_def import (
    DeformationSeries,
    XGen,
    apply_equivalence,
    base_section,
    build_extension,
    check_deformation,
    cocycle_of_extension,
    extension_equivalent,
    extension_nambu,
    invert_series,
)
from nambu_lab.fundamental_complex import ONE, TrivialRep
from nambu_lab.superalgebra import LinearMap, identity_map
from nambu_lab.w_infinity import ADJOINT, TRIVIAL, W, WGen, cell_system

WIN = Window(5, 3, 2)


@pytest.fixture(scope="module")
def cells():
    return cell_system(TRIVIAL, 0, 0, 0, WIN)


def random_h(rng, M=4, I=2):
    """Random functional on the even generators of a small box."""
    table = {WGen(f, m, i): {ONE: Fraction(rng.randint(-4, 4))} for f in ("L", "Lbar") for m in range(-M, M + 1) for i in range(I + 1)}
    return LinearMap(0, lambda g: {k: c for k, c in table.get(g, {}).items() if c}, "h")


def windowed_cocycle(cells, rng):
    return cells.sample(TRIVIAL, rng) + delta(cochain_from_map(random_h(rng), TRIVIAL))


def inner_triples(rng, n):
    return [tuple(W.sample_generator(rng, 1, 1) for _ in range(3)) for _ in range(n)]


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_extension_round_trip(seed):
    cs = cell_system(TRIVIAL, 0, 0, 0, WIN)
    rng = random.Random(seed)
    F = windowed_cocycle(cs, rng)
    G = cocycle_of_extension(build_extension(W, None, F))
    for a, b, z in inner_triples(rng, 40):
        assert G([(a, b)], z) == F([(a, b)], z)


def test_extension_of_a_cocycle_is_nambu(cells):
    rng = random.Random(3)
    ext = build_extension(W, None, windowed_cocycle(cells, rng))
    samples = [(tuple(W.sample_generator(rng, 1, 1) for _ in range(2)), t) for t in inner_triples(rng, 60)]
    rep = extension_nambu(ext, samples)
    assert rep.ok and rep.nontrivial > 0


def test_non_cocycle_extension_breaks_the_identity():
    alg = a4()
    e = alg.generators()
    bump = Cochain.from_table(1, 0, TrivialRep(alg), {(((e[0], e[1]),), e[2]): {ONE: 1}})
    ext = build_extension(alg, None, bump)
    samples = [((y1, y2), (x1, x2, x3)) for y1 in e for y2 in e for x1 in e for x2 in e for x3 in e]
    assert not extension_nambu(ext, samples).ok


def test_cohomologous_cocycles_give_isomorphic_extensions(cells):
    rng = random.Random(5)
    F = windowed_cocycle(cells, rng)
    h = random_h(rng)
    G = F - delta(cochain_from_map(h, TRIVIAL))
    samples = inner_triples(rng, 80)
    assert extension_equivalent(G, F, h, W, samples).ok
    wrong = Fraction(2) * h
    assert not extension_equivalent(G, F, LinearMap(0, lambda g: wrong.on_gen(g)), W, samples).ok


def test_shifted_section_gives_a_cohomologous_cocycle(cells):
    rng = random.Random(8)
    F = windowed_cocycle(cells, rng)
    h = random_h(rng)
    ext = build_extension(W, None, F)
    G = cocycle_of_extension(ext, base_section(h))
    dh = delta(cochain_from_map(h, TRIVIAL))
    for a, b, z in inner_triples(rng, 40):
        diff = (G - F).func(((a, b),), z)
        assert diff == dh.func(((a, b),), z)


def test_build_extension_validation_and_generators():
    with pytest.raises(ValueError):
        build_extension(W, None, Cochain.zero(0, 0, TRIVIAL))
    with pytest.raises(ValueError):
        build_extension(W, None, Cochain.zero(1, 1, TRIVIAL))
    with pytest.raises(ValueError):
        build_extension(W, None, Cochain.zero(1, 0, ADJOINT))
    ext = build_extension(a4(), None, Cochain.zero(1, 0, TrivialRep(a4())))
    assert XGen("v", ONE) in ext.generators() and len(ext.generators()) == 5
    with pytest.raises(ValueError):
        cocycle_of_extension(ext, LinearMap(0, lambda g: {}, "bad"), samples=5)


# -- deformations ----------------------------------------------------------------

def deform_samples(seed, n):
    rng = random.Random(seed)
    return [(small_wedge(rng, 2, 1), small_wedge(rng, 2, 1), small_gen(rng, 2, 1)) for _ in range(n)]


def g_map():
    return LinearMap(0, {WGen("L", 0, 1): {WGen("L", 0, 1): 1}}, "g")


def test_trivial_series_has_zero_residual():
    reps = check_deformation(DeformationSeries.trivial(W, 2), deform_samples(1, 80))
    assert all(r.ok for r in reps) and reps[0].nontrivial > 0


def test_equivalence_cancels_a_coboundary_term():
    g = g_map()
    S = apply_equivalence(DeformationSeries.trivial(W), invert_series([identity_map(), g], 2), order=2)
    samples = deform_samples(2, 60)
    assert any(S.terms[1].func((x,), z) for x, _, z in samples)
    back = apply_equivalence(S, [identity_map(), g])
    for mode in ("undeformed", "deformed"):
        reps = check_deformation(back, samples, leibniz=mode)
        assert all(r.ok for r in reps), mode
    for x, _, z in samples:
        assert back.terms[1].func((x,), z) == {} and back.terms[2].func((x,), z) == {}


def test_coboundary_term_satisfies_the_deformed_reading():
    mu1 = -1 * delta(cochain_from_map(g_map(), ADJOINT))
    series = DeformationSeries(W, DeformationSeries.trivial(W).terms + [mu1])
    assert all(r.ok for r in check_deformation(series, deform_samples(3, 80), leibniz="deformed"))


def test_non_closed_term_is_flagged_with_a_witness():
    bump = random_cochain(1, 0, ADJOINT, 11, density=0.3)
    series = DeformationSeries(W, DeformationSeries.trivial(W).terms + [bump])
    reps = check_deformation(series, deform_samples(4, 80), leibniz="deformed")
    assert reps[0].ok and not reps[1].ok
    w = reps[1].violations[0]
    assert {"x", "y", "z", "residual"} <= set(w)


def test_series_json_round_trip_and_inverse():
    mu1 = 3 * delta(cochain_from_map(g_map(), ADJOINT))
    series = DeformationSeries(W, DeformationSeries.trivial(W).terms + [mu1])
    rng = random.Random(6)
    inputs = sorted({((small_wedge(rng, 2, 1),), small_gen(rng, 2, 1)) for _ in range(50)}, key=repr)
    back = DeformationSeries.from_json(series.to_json(inputs), W)
    assert back.order == 1
    for xs, z in inputs:
        assert back.terms[1].func(xs, z) == mu1.func(xs, z)
    with pytest.raises(ValueError):
        DeformationSeries.from_json({"order": "1"}, W)
    psi = invert_series([identity_map(), g_map()], 3)
    x = WGen("L", 0, 1)
    assert [p.on_gen(x).get(x, 0) for p in psi] == [1, -1, 1, -1]


def test_series_terms_are_validated():
    with pytest.raises(ValueError):
        DeformationSeries(W, [Cochain.zero(1, 0, TRIVIAL)])
    with pytest.raises(ValueError):
        check_deformation(DeformationSeries.trivial(W), [], leibniz="other")
    with pytest.raises(ValueError):
        apply_equivalence(DeformationSeries.trivial(W), [g_map()])
