"""The fundamental set L(N) = wedge^{n-1} N, representations, and the module W.

Wedge tuples are canonical tuples of generators (sorted by the algebra order,
sign absorbed into coefficients).  A ``FundamentalElement`` is a dict
``wedge tuple -> coefficient``.  W elements are dicts keyed by
``(ys, v)`` where ``ys`` is a canonical (n-2)-tuple of algebra generators and
``v`` a module generator kept in the last slot.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, NamedTuple, Sequence

from .superalgebra import (
    Report,
    Superalgebra,
    add_into,
    bracket_gens,
    canonicalize,
    scaled,
)

__all__ = [
    "wedge_normalize",
    "wedge_parity",
    "as_fundamental",
    "ad_wedge",
    "leibniz_bracket",
    "check_leibniz",
    "ModGen",
    "Adj",
    "Representation",
    "AdjointRep",
    "TrivialRep",
    "TableRep",
    "PerturbedRep",
    "ONE",
    "check_representation",
    "check_ad_lemma",
    "w_normalize",
    "w_action",
    "w_right_action",
    "check_w_module",
]


def wedge_normalize(alg: Superalgebra, raw: Sequence):
    """``(canonical tuple, sign)`` or ``None`` for the zero wedge."""
    cs, sign = canonicalize(raw, alg.key)
    if cs is None:
        return None
    return cs, sign


def wedge_parity(x: Sequence) -> int:
    return sum(g.parity for g in x) % 2


def as_fundamental(alg: Superalgebra, x) -> dict:
    """Accept a raw tuple of generators or a FundamentalElement."""
    if isinstance(x, Mapping):
        return dict(x)
    norm = wedge_normalize(alg, x)
    if norm is None:
        return {}
    return {norm[0]: norm[1]}


def ad_wedge(alg: Superalgebra, x: Sequence, z) -> dict:
    """``ad(x)(z) = [x_1, .., x_{n-1}, z]`` for a wedge tuple and a generator."""
    return bracket_gens(alg, tuple(x) + (z,))


def _leibniz_gens(alg: Superalgebra, x: tuple, y: tuple) -> dict:
    out: dict = {}
    px = wedge_parity(x)
    acc = 0
    for i, yi in enumerate(y):
        s = -1 if (px * acc) % 2 else 1
        acc += yi.parity
        for g, c in ad_wedge(alg, x, yi).items():
            t = y[:i] + (g,) + y[i + 1:]
            norm = wedge_normalize(alg, t)
            if norm is None:
                continue
            add_into(out, norm[0], s * c * norm[1])
    return out


def leibniz_bracket(alg: Superalgebra, x, y) -> dict:
    """``[x, y]_L = sum_i (-1)^{|x|(|y_1|+..+|y_{i-1}|)} y_1 ^ .. ^ ad(x)(y_i) ^ .. ^ y_{n-1}``."""
    xe, ye = as_fundamental(alg, x), as_fundamental(alg, y)
    out: dict = {}
    for a, ca in xe.items():
        for b, cb in ye.items():
            for t, v in _leibniz_gens(alg, a, b).items():
                add_into(out, t, ca * cb * v)
    return out


def _fund_parity(e: Mapping) -> int:
    ps = {wedge_parity(t) for t in e}
    if len(ps) > 1:
        raise ValueError("fundamental element is not homogeneous")
    return ps.pop() if ps else 0


def check_leibniz(alg: Superalgebra, samples: Iterable[tuple]) -> Report:
    """``[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]`` on wedge triples."""
    rep = Report("leibniz")
    for x, y, z in samples:
        rep.samples += 1
        xe, ye, ze = (as_fundamental(alg, t) for t in (x, y, z))
        px, py = _fund_parity(xe), _fund_parity(ye)
        lhs = leibniz_bracket(alg, xe, leibniz_bracket(alg, ye, ze))
        rhs = leibniz_bracket(alg, leibniz_bracket(alg, xe, ye), ze)
        s = -1 if (px * py) % 2 else 1
        for t, v in leibniz_bracket(alg, ye, leibniz_bracket(alg, xe, ze)).items():
            add_into(rhs, t, s * v)
        par = (px + py + _fund_parity(ze)) % 2
        if lhs or rhs:
            rep.nontrivial += 1
        if lhs != rhs or any(wedge_parity(t) != par for t in lhs):
            rep.violations.append({"x": x, "y": y, "z": z, "lhs": lhs, "rhs": rhs})
    return rep


# -- representations ---------------------------------------------------------

class ModGen(NamedTuple):
    """Module generator with its own label space."""

    label: object
    parity: int = 0

    def __repr__(self):
        return f"<{self.label!r}>"


class Adj(NamedTuple):
    """Adjoint-module copy of an algebra generator."""

    base: object

    @property
    def parity(self) -> int:
        return self.base.parity

    def __repr__(self):
        return f"[{self.base!r}]"


ONE = ModGen("1", 0)


class Representation:
    """Action ``[x_1, .., x_{n-1}, v]_V`` on module generators."""

    name = "rep"
    trivial = False

    def __init__(self, alg: Superalgebra):
        self.alg = alg

    def act(self, x: Sequence, v) -> dict:
        raise NotImplementedError

    def act_elem(self, x: Sequence, e: Mapping) -> dict:
        out: dict = {}
        for v, c in e.items():
            for w, d in self.act(x, v).items():
                add_into(out, w, c * d)
        return out

    def module_key(self, v):
        return v

    def sample_module_generator(self, rng):
        raise NotImplementedError


class AdjointRep(Representation):
    name = "adjoint"

    def act(self, x, v):
        return {Adj(g): c for g, c in bracket_gens(self.alg, tuple(x) + (v.base,)).items()}

    def module_key(self, v):
        return self.alg.key(v.base)

    def sample_module_generator(self, rng):
        return Adj(self.alg.sample_generator(rng))

    def embed(self, e: Mapping) -> dict:
        return {Adj(g): c for g, c in e.items()}

    def unwrap(self, e: Mapping) -> dict:
        return {v.base: c for v, c in e.items()}


class TrivialRep(Representation):
    """One-dimensional even module with zero action."""

    name = "trivial"
    trivial = True

    def act(self, x, v):
        return {}

    def module_key(self, v):
        return 0

    def sample_module_generator(self, rng):
        return ONE


class TableRep(Representation):
    """Finite module given by a table on canonical wedge tuples."""

    def __init__(self, alg: Superalgebra, module_gens: Sequence[ModGen], table: Mapping, name: str = "table"):
        super().__init__(alg)
        self.gens = list(module_gens)
        self._rank = {v: j for j, v in enumerate(self.gens)}
        self.table = {}
        self.name = name
        for (x, v), val in table.items():
            norm = wedge_normalize(alg, x)
            if norm is None:
                continue
            self.table[(norm[0], v)] = scaled(val, norm[1])

    def act(self, x, v):
        norm = wedge_normalize(self.alg, x)
        if norm is None:
            return {}
        return scaled(self.table.get((norm[0], v), {}), norm[1])

    def module_key(self, v):
        return self._rank[v]

    def sample_module_generator(self, rng):
        return rng.choice(self.gens)


class PerturbedRep(Representation):
    """``rep`` with one action value replaced; used as a perturbation oracle."""

    def __init__(self, rep: Representation, x: Sequence, v, value: Mapping):
        super().__init__(rep.alg)
        self.base = rep
        norm = wedge_normalize(rep.alg, x)
        self._x, self._sign = norm
        self._v = v
        self._value = dict(value)
        self.name = rep.name + "*"

    def act(self, x, v):
        norm = wedge_normalize(self.alg, x)
        if norm is None:
            return {}
        if norm[0] == self._x and v == self._v:
            return scaled(self._value, norm[1] * self._sign)
        return self.base.act(x, v)

    def module_key(self, v):
        return self.base.module_key(v)

    def sample_module_generator(self, rng):
        return self.base.sample_module_generator(rng)


def _act_multi(rep: Representation, xs: Sequence[Mapping], e: Mapping) -> dict:
    """Action with elements (not just generators) in the wedge slots."""
    out: dict = {}
    for combo in itertools.product(*[list(x.items()) for x in xs]):
        c = 1
        for _, v in combo:
            c = c * v
        if not c:
            continue
        gens = [g for g, _ in combo]
        for v, cv in e.items():
            for w, d in rep.act(gens, v).items():
                add_into(out, w, c * cv * d)
    return out


def _gp(gs) -> int:
    return sum(g.parity for g in gs)


def check_representation(rep: Representation, samples: Iterable[tuple], sign_variant: str = "printed") -> Report:
    """Both module axioms on samples ``(x_1..x_n, y_2..y_{n-1}, v, y')``.

    Axiom one reads the left slot as ``[[x_1..x_n], y_2, .., y_{n-1}, v]_V``.
    Axiom two takes ``x = (x_1..x_{n-1})`` and ``y = y'`` (an (n-1)-tuple).
    ``sign_variant`` other than ``"printed"`` drops the ``n-i`` part of the first
    sign; it exists so the report can compare readings.
    """
    alg = rep.alg
    n = alg.arity
    out = Report(f"representation[{rep.name}]")
    for xs, ys, v, yprime in samples:
        xs, ys, yprime = list(xs), list(ys), list(yprime)
        out.samples += 1
        # axiom one
        inner = bracket_gens(alg, xs)
        lhs1 = _act_multi(rep, [inner] + [{y: 1} for y in ys], {v: 1})
        rhs1: dict = {}
        for i in range(n):
            e = _gp([xs[i]]) * _gp(xs[i + 1:])
            if sign_variant == "printed":
                e += n - (i + 1)
            s = -1 if e % 2 else 1
            inner_v = rep.act([xs[i]] + ys, v)
            rest = xs[:i] + xs[i + 1:]
            for w, c in rep.act_elem(rest, inner_v).items():
                add_into(rhs1, w, s * c)
        # axiom two
        x = xs[: n - 1]
        y = yprime
        py = _gp(y)
        lhs2: dict = {}
        for i in range(n - 1):
            s = -1 if (py * _gp(x[:i])) % 2 else 1
            args = [{g: 1} for g in x]
            args[i] = bracket_gens(alg, tuple(y) + (x[i],))
            for w, c in _act_multi(rep, args, {v: 1}).items():
                add_into(lhs2, w, s * c)
        rhs2 = rep.act_elem(y, rep.act(x, v))
        s = -1 if (py * _gp(x)) % 2 else 1
        for w, c in rep.act_elem(x, rep.act(y, v)).items():
            add_into(rhs2, w, -s * c)
        if lhs1 or rhs1 or lhs2 or rhs2:
            out.nontrivial += 1
        if lhs1 != rhs1 or lhs2 != rhs2:
            out.violations.append(
                {"x": xs, "y": ys, "v": v, "y'": y, "axiom1": (lhs1, rhs1), "axiom2": (lhs2, rhs2)}
            )
    return out


def check_ad_lemma(rep: Representation, samples: Iterable[tuple]) -> Report:
    """``ad([x,y]_L)(v) = ad(x)ad(y)v - (-1)^{|x||y|} ad(y)ad(x)v``."""
    alg = rep.alg
    out = Report(f"ad_lemma[{rep.name}]")
    for x, y, v in samples:
        out.samples += 1
        xy = leibniz_bracket(alg, x, y)
        lhs: dict = {}
        for t, c in xy.items():
            for w, d in rep.act(t, v).items():
                add_into(lhs, w, c * d)
        rhs = rep.act_elem(x, rep.act(y, v))
        s = -1 if (wedge_parity(x) * wedge_parity(y)) % 2 else 1
        for w, d in rep.act_elem(y, rep.act(x, v)).items():
            add_into(rhs, w, -s * d)
        if lhs or rhs:
            out.nontrivial += 1
        if lhs != rhs:
            out.violations.append({"x": x, "y": y, "v": v, "lhs": lhs, "rhs": rhs})
    return out


# -- the module W ------------------------------------------------------------------

def w_normalize(alg: Superalgebra, factors: Sequence, vslot: int, out: dict, coef) -> None:
    """Accumulate ``coef * factors`` into ``out`` where ``factors[vslot]`` is the module slot.

    The module generator moves to the end (sign ``-(-1)^{|v||y|}`` per step) and
    the algebra factors are canonicalized.
    """
    f = list(factors)
    v = f.pop(vslot)
    sign = 1
    if vslot < len(f):
        for y in f[vslot:]:
            if not (v.parity & y.parity):
                sign = -sign
    if f:
        cs, sg = canonicalize(f, alg.key)
        if cs is None:
            return
    else:
        cs, sg = (), 1
    add_into(out, (cs, v), coef * sign * sg)


def w_action(rep: Representation, x: Sequence, w: Mapping) -> dict:
    """``[x, y_1 ^ .. ^ y_{n-2} ^ v]_W`` for a wedge tuple ``x`` and a W element."""
    alg = rep.alg
    out: dict = {}
    px = wedge_parity(x)
    for (ys, v), c in w.items():
        acc = 0
        for i, yi in enumerate(ys):
            s = -1 if (px * acc) % 2 else 1
            acc += yi.parity
            for g, cc in ad_wedge(alg, x, yi).items():
                t = list(ys)
                t[i] = g
                w_normalize(alg, t + [v], len(t), out, c * cc * s)
        if not rep.trivial:
            s = -1 if (px * acc) % 2 else 1
            for g, cc in rep.act(x, v).items():
                w_normalize(alg, list(ys) + [g], len(ys), out, c * cc * s)
    return out


def w_right_action(rep: Representation, w: Mapping, y: Sequence) -> dict:
    """The primed bracket ``[x_1 ^ .. ^ x_{n-2} ^ v, y_1 ^ .. ^ y_{n-1}]'_W``."""
    alg = rep.alg
    out: dict = {}
    if rep.trivial:
        return out
    for (xs, v), c in w.items():
        pxv = _gp(xs) + v.parity
        acc = 0
        for i, yi in enumerate(y):
            e = pxv * acc + v.parity * yi.parity
            acc += yi.parity
            s = 1 if e % 2 else -1
            for g, cc in rep.act(tuple(xs) + (yi,), v).items():
                t = list(y)
                t[i] = g
                w_normalize(alg, t, i, out, c * cc * s)
    return out


def check_w_module(rep: Representation, samples: Iterable[tuple]) -> Report:
    """``[[x,y]_L, w]_W = [x,[y,w]_W]_W - (-1)^{|x||y|}[y,[x,w]_W]_W``."""
    alg = rep.alg
    out = Report(f"w_module[{rep.name}]")
    for x, y, w in samples:
        out.samples += 1
        lhs: dict = {}
        for t, c in leibniz_bracket(alg, x, y).items():
            for k, d in w_action(rep, t, w).items():
                add_into(lhs, k, c * d)
        rhs = w_action(rep, x, w_action(rep, y, w))
        s = -1 if (wedge_parity(x) * wedge_parity(y)) % 2 else 1
        for k, d in w_action(rep, y, w_action(rep, x, w)).items():
            add_into(rhs, k, -s * d)
        if lhs or rhs:
            out.nontrivial += 1
        if lhs != rhs:
            out.violations.append({"x": x, "y": y, "w": w, "lhs": lhs, "rhs": rhs})
    return out
