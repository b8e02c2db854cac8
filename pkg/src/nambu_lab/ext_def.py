"""Central extensions by 2-cocycles and order-by-order formal deformations.

An extension of ``N`` by a trivial module ``V`` lives on ``N + V`` with bracket

    [(x_1, v_1), .., (x_{n-1}, v_{n-1}), (z, w)] = ([x_1, .., x_{n-1}, z], F(x_1 ^ .. ^ x_{n-1}, z))

so ``V`` is central.  The bracket is read exactly in this wedge-then-``z``
form; it is super skew in all slots only when ``F`` is.

A deformation series holds brackets ``mu_0 = [.,..,.]`` and ``mu_1..mu_K`` as
even one-slot cochains with adjoint values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .cohomology import Cochain, coboundary_rows, evaluate
from .exact_core import solve_linear
from .fundamental_complex import ONE, Adj, AdjointRep, as_fundamental, leibniz_bracket, wedge_normalize, wedge_parity
from .superalgebra import LinearMap, Report, Superalgebra, add_into, bracket, bracket_gens, check_morphism, identity_map, zero_map

__all__ = [
    "XGen",
    "CentralExtension",
    "build_extension",
    "extension_nambu",
    "base_section",
    "cocycle_of_extension",
    "equivalence_map",
    "extension_equivalent",
    "find_equivalence",
    "DeformationSeries",
    "bracket_cochain",
    "check_deformation",
    "apply_equivalence",
    "invert_series",
]


class XGen(NamedTuple):
    """Generator of ``N + V``: ``kind`` is ``"x"`` (algebra) or ``"v"`` (center)."""

    kind: str
    g: object

    @property
    def parity(self) -> int:
        return self.g.parity

    def __repr__(self):
        return f"({self.g!r})" if self.kind == "x" else f"<{self.g!r}>"


class CentralExtension(Superalgebra):
    def __init__(self, alg: Superalgebra, center: Sequence, F: Cochain):
        self.base = alg
        self.arity = alg.arity
        self.center = list(center)
        self.F = F
        self.name = f"{alg.name}+F"
        self._vrank = {v: j for j, v in enumerate(self.center)}

    def key(self, g: XGen):
        if g.kind == "x":
            return (0, self.base.key(g.g))
        return (1, self._vrank.get(g.g, 0))

    def canonical(self, gens):
        # no reordering: the F component is read with z in the last slot
        return tuple(gens), 1

    def canonical_bracket(self, gens: tuple) -> dict:
        if any(g.kind == "v" for g in gens):
            return {}
        raw = [g.g for g in gens]
        out = {XGen("x", h): c for h, c in bracket_gens(self.base, raw).items()}
        for v, c in self.F([tuple(raw[:-1])], raw[-1]).items():
            if c:
                add_into(out, XGen("v", v), c)
        return out

    def generators(self) -> list:
        return [XGen("x", g) for g in self.base.generators()] + [XGen("v", v) for v in self.center]

    def sample_generator(self, rng: random.Random):
        return XGen("x", self.base.sample_generator(rng))

    def projection(self) -> LinearMap:
        return LinearMap(0, lambda g: {g.g: 1} if g.kind == "x" else {}, "pi")


def build_extension(alg: Superalgebra, V: Sequence | None, F: Cochain) -> CentralExtension:
    """``N + V`` with the bracket twisted by the one-slot cochain ``F``."""
    if F.k != 1:
        raise ValueError(f"F must take one wedge slot, got {F.k}")
    if F.parity:
        raise ValueError("F must be even")
    if not F.rep.trivial:
        raise ValueError("F must take values in a trivial module")
    return CentralExtension(alg, [ONE] if V is None else V, F)


def extension_nambu(ext: CentralExtension, samples: Sequence[tuple[Sequence, Sequence]]) -> Report:
    """Fundamental identity of the extension on ``(y, x)`` samples of algebra generators."""
    from .superalgebra import check_nambu

    wrap = lambda t: [XGen("x", g) for g in t]
    rep = check_nambu(ext, [(wrap(y), wrap(x)) for y, x in samples])
    rep.name = "extension nambu"
    return rep


def base_section(h: LinearMap | None = None, name: str = "s") -> LinearMap:
    """Section ``x -> (x, h(x))`` of the projection; ``h=None`` is the canonical one."""
    if h is None:
        return LinearMap(0, lambda g: {XGen("x", g): 1}, name)

    def act(g):
        out = {XGen("x", g): 1}
        for v, c in h.on_gen(g).items():
            if c:
                out[XGen("v", v)] = c
        return out

    return LinearMap(0, act, name)


def cocycle_of_extension(ext: CentralExtension, section: LinearMap | None = None, *, check_gens: Sequence = (), samples: int = 50, seed: int = 0) -> Cochain:
    """``F(x, z) = l([s(x), s(z)] - s([x, z]))`` for a section ``s``.

    The section is checked as a right inverse of the projection on ``check_gens``
    and on sampled generators.
    """
    s = base_section() if section is None else section
    if s.parity:
        raise ValueError("section must be even")
    rng = random.Random(seed)
    test = list(check_gens) + [ext.base.sample_generator(rng) for _ in range(samples)]
    pi = ext.projection()
    for g in test:
        if {k: c for k, c in pi(s.on_gen(g)).items() if c} != {g: 1}:
            raise ValueError(f"section not a right inverse of the projection at {g!r}")
    alg = ext.base

    def func(xs, z):
        raw = list(xs[0]) + [z]
        total = bracket(ext, [s.on_gen(g) for g in raw])
        for y, c in s(bracket_gens(alg, raw)).items():
            add_into(total, y, -c)
        return {y.g: c for y, c in total.items() if y.kind == "v" and c}

    return Cochain(1, 0, ext.F.rep, func, ext.F.bidegree, "cocycle of extension")


def equivalence_map(h: LinearMap, sign: int = -1) -> LinearMap:
    """``Phi(x, v) = (x, v + sign * h(x))`` on ``N + V``."""

    def act(g):
        if g.kind == "v":
            return {g: 1}
        out = {g: 1}
        for v, c in h.on_gen(g.g).items():
            if c:
                out[XGen("v", v)] = sign * c
        return out

    return LinearMap(0, act, "Phi" if sign < 0 else "Phi^-1")


def extension_equivalent(F: Cochain, G: Cochain, h: LinearMap, alg: Superalgebra, samples: Sequence[Sequence], *, V: Sequence | None = None) -> Report:
    """Verify ``Phi(x, v) = (x, v - h(x))`` is an isomorphism from the F-extension onto the G-extension.

    Checks the morphism property on the sample tuples (generators of ``N``) and
    that ``Phi`` composed with ``(x, v) -> (x, v + h(x))`` is the identity on
    every generator occurring in them.
    """
    eF, eG = build_extension(alg, V, F), build_extension(alg, V, G)
    phi, inv = equivalence_map(h), equivalence_map(h, +1)
    tuples = [[XGen("x", g) for g in x] for x in samples]
    rep = check_morphism(phi, eF, eG, tuples)
    rep.name = "extension equivalence"
    seen = {g for x in tuples for g in x} | {XGen("v", v) for v in eF.center}
    for g in sorted(seen, key=eF.key):
        back = {k: c for k, c in inv(phi.on_gen(g)).items() if c}
        if back != {g: 1}:
            rep.violations.append({"not invertible at": g, "image": back})
    return rep


def find_equivalence(F: Cochain, G: Cochain, trunc, coords: Sequence) -> LinearMap | None:
    """Some ``h`` with ``(F - G)(x, z) = h([x, z])`` on ``coords``, or None (non-equivalence certificate).

    ``h([x, z]) = -delta h(x, z)`` in the trivial module, so this solves
    ``delta h = G - F``.
    """
    rows = coboundary_rows(trunc, 1, F.parity, coords)
    eqs = []
    for c in coords:
        if c not in rows:
            continue
        xs, z, v = c
        eqs.append((rows[c], G.func(xs, z).get(v, 0) - F.func(xs, z).get(v, 0)))
    sol = solve_linear(eqs)
    if sol is None:
        return None
    table: dict = {}
    for (_, z, v), c in sol.items():
        table.setdefault(z, {})[v] = c
    return LinearMap(0, lambda g: table.get(g, {}), "h")


# -- deformations ----------------------------------------------------------------

def bracket_cochain(alg: Superalgebra) -> Cochain:
    """The bracket itself as an even adjoint-valued cochain."""
    return Cochain(1, 0, AdjointRep(alg), lambda xs, z: {Adj(g): c for g, c in bracket_gens(alg, tuple(xs[0]) + (z,)).items()}, None, "mu0")


def _memo(f: Cochain) -> Cochain:
    cache: dict = {}
    func = f.func

    def g(xs, z):
        key = (xs, z)
        if key not in cache:
            cache[key] = func(xs, z)
        return cache[key]

    return Cochain(f.k, f.parity, f.rep, g, f.bidegree, f.name)


@dataclass
class DeformationSeries:
    """``mu_t = sum_i t^i mu_i`` through order ``len(terms) - 1``; ``terms[0]`` is the bracket."""

    alg: Superalgebra
    terms: list
    notes: list = field(default_factory=list)

    def __post_init__(self):
        for i, mu in enumerate(self.terms):
            if mu.k != 1 or mu.parity or mu.rep.trivial:
                raise ValueError(f"term {i} must be an even one-slot cochain with adjoint values")

    @classmethod
    def trivial(cls, alg: Superalgebra, order: int = 0) -> "DeformationSeries":
        rep = AdjointRep(alg)
        zero = Cochain(1, 0, rep, lambda xs, z: {}, None, "0")
        return cls(alg, [bracket_cochain(alg)] + [zero] * order)

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def term(self, i: int) -> Cochain | None:
        return self.terms[i] if i < len(self.terms) else None

    def to_json(self, instances: Sequence) -> dict:
        return {"order": str(self.order), "terms": [mu.to_json(instances) for mu in self.terms[1:]]}

    @classmethod
    def from_json(cls, data: Mapping, alg: Superalgebra) -> "DeformationSeries":
        rep = AdjointRep(alg)
        terms = [bracket_cochain(alg)]
        try:
            for t in data["terms"]:
                terms.append(Cochain.from_json(t, rep))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed deformation series: {exc}") from exc
        return cls(alg, terms)


def _unwrap(e: Mapping) -> dict:
    return {v.base: c for v, c in e.items()}


def _apply(mu: Cochain, x: Mapping, z: Mapping) -> dict:
    """``mu`` on a fundamental element ``x`` and an algebra element ``z``."""
    return _unwrap(evaluate(mu, [x], z))


def _wedge_elem(alg, x: Sequence) -> dict:
    return as_fundamental(alg, tuple(x))


def _deformed_leibniz(alg, mu: Cochain, x: tuple, y: tuple) -> dict:
    """``sum_k (-1)^{|x|(|y_1|+..+|y_{k-1}|)} y_1 ^ .. ^ mu(x, y_k) ^ .. ^ y_{n-1}``."""
    out: dict = {}
    px = wedge_parity(x)
    acc = 0
    for k, yk in enumerate(y):
        s = -1 if (px * acc) % 2 else 1
        acc += yk.parity
        for g, c in _unwrap(mu([x], yk)).items():
            norm = wedge_normalize(alg, y[:k] + (g,) + y[k + 1:])
            if norm is not None:
                add_into(out, norm[0], s * c * norm[1])
    return out


def check_deformation(series: DeformationSeries, samples: Sequence[tuple], *, leibniz: str = "undeformed") -> list:
    """Per-order residual reports of the deformation equation.

    ``samples`` are ``(x, y, z)`` with wedges ``x, y`` and a generator ``z``.  The
    order-s residual is

        sum_{i+j=s} ( mu_j(x, mu_i(y, z)) - (-1)^{|x||y|} mu_j(y, mu_i(x, z)) ) - L_s

    where ``L_s = mu_s([x, y]_L, z)`` with the undeformed Leibniz bracket
    (``leibniz="undeformed"``), or ``L_s = sum_{i+j=s} mu_j([x, y]_{L,i}, z)``
    with the Leibniz bracket built from ``mu_i`` (``leibniz="deformed"``).
    """
    if leibniz not in ("undeformed", "deformed"):
        raise ValueError("leibniz must be 'undeformed' or 'deformed'")
    alg = series.alg
    terms = [_memo(mu) for mu in series.terms]
    K = series.order
    reports = [Report(f"order {s}") for s in range(K + 1)]
    for x, y, z in samples:
        x, y = tuple(x), tuple(y)
        sgn = -1 if (wedge_parity(x) * wedge_parity(y)) % 2 else 1
        xe, ye = _wedge_elem(alg, x), _wedge_elem(alg, y)
        inner_y = [_unwrap(mu(tuple([y]), z)) if ye else {} for mu in terms]
        inner_x = [_unwrap(mu(tuple([x]), z)) if xe else {} for mu in terms]
        if leibniz == "undeformed":
            lxy = [leibniz_bracket(alg, x, y)]
        else:
            lxy = [_deformed_leibniz(alg, mu, x, y) for mu in terms]
        for s in range(K + 1):
            res: dict = {}
            touched = False
            for i in range(s + 1):
                j = s - i
                parts = [(_apply(terms[j], xe, inner_y[i]), 1), (_apply(terms[j], ye, inner_x[i]), -sgn)]
                if leibniz == "deformed" and lxy[i]:
                    parts.append((_apply(terms[j], lxy[i], {z: 1}), -1))
                if leibniz == "undeformed" and i == 0 and lxy[0]:
                    parts.append((_apply(terms[s], lxy[0], {z: 1}), -1))
                for val, sign in parts:
                    touched = touched or bool(val)
                    for g, c in val.items():
                        add_into(res, g, sign * c)
            rep = reports[s]
            rep.samples += 1
            rep.nontrivial += touched
            if res:
                rep.violations.append({"x": x, "y": y, "z": z, "residual": res})
    return reports


def invert_series(phis: Sequence[LinearMap | None], order: int | None = None) -> list:
    """Coefficients of ``Phi_t^{-1}`` through ``order`` (default: that of ``phis``), for ``Phi_0 = id``."""
    K = len(phis) - 1 if order is None else order
    phis = (list(phis) + [zero_map(0)] * (K + 1))[: K + 1]
    psi = [identity_map()]
    for k in range(1, K + 1):
        acc = zero_map(0)
        for j in range(1, k + 1):
            if phis[j] is not None:
                acc = acc + phis[j].compose(psi[k - j])
        psi.append(-acc)
    return psi


def _check_identity(phi: LinearMap, alg: Superalgebra, count: int = 50, seed: int = 0) -> None:
    rng = random.Random(seed)
    for _ in range(count):
        g = alg.sample_generator(rng)
        if {k: c for k, c in phi.on_gen(g).items() if c} != {g: 1}:
            raise ValueError(f"Phi_0 must be the identity (differs at {g!r})")


def apply_equivalence(series: DeformationSeries, phis: Sequence[LinearMap | None], order: int | None = None) -> DeformationSeries:
    """``mu'_t(x, z) = Phi_t(mu_t(Phi_t^{-1} x, Phi_t^{-1} z))`` through ``order``.

    ``phis[0]`` must be the identity (``None`` stands for it); missing higher
    coefficients are zero.  Then ``Phi_t([x, z]_t) = [Phi_t x, Phi_t z]'_t``.
    """
    alg = series.alg
    K = series.order if order is None else order
    phis = [identity_map() if p is None else p for p in phis]
    if not phis:
        phis = [identity_map()]
    _check_identity(phis[0], alg)
    phis = (list(phis) + [zero_map(0)] * (K + 1))[: K + 1]
    phis[0] = identity_map()
    for p in phis:
        if p.parity:
            raise ValueError("equivalence coefficients must be even")
    psi = invert_series(phis, K)
    terms = [_memo(mu) for mu in series.terms]
    n = alg.arity
    rep = series.terms[0].rep

    def make(s):
        def func(xs, zg):
            args = list(xs[0]) + [zg]
            out: dict = {}
            for a in range(s + 1):
                for i in range(min(s - a, len(terms) - 1) + 1):
                    rest = s - a - i
                    for bs in _compositions(rest, n):
                        elems = [psi[b].on_gen(g) for b, g in zip(bs, args)]
                        if any(not e for e in elems):
                            continue
                        val: dict = {}
                        for combo in itertools.product(*[list(e.items()) for e in elems[:-1]]):
                            c = 1
                            for _, v in combo:
                                c = c * v
                            w = tuple(g for g, _ in combo)
                            norm = wedge_normalize(alg, w)
                            if norm is None:
                                continue
                            for g, v in _apply(terms[i], {norm[0]: c * norm[1]}, elems[-1]).items():
                                add_into(val, g, v)
                        for g, v in phis[a](val).items():
                            add_into(out, Adj(g), v)
            return {k: v for k, v in out.items() if v}

        return _memo(Cochain(1, 0, rep, func, None, f"mu'{s}"))

    new = [make(s) for s in range(K + 1)]
    return DeformationSeries(alg, new, [f"transformed by Phi_t through order {K}"])


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` naturals summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
