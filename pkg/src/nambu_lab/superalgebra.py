"""Z2-graded vector spaces with n-ary brackets.

Generators are hashable objects exposing an integer ``parity`` attribute.
Elements are dicts ``generator -> coefficient`` with exact coefficients
(``int`` or ``Fraction``) and no zero entries.  A linear map is a callable on
generators returning an Element, wrapped in :class:`LinearMap` to carry its
parity.

Every bracket evaluation goes through :func:`canonicalize`: the argument tuple is
bubble sorted by the algebra's generator order, each adjacent transposition of
``a, b`` contributing ``-(-1)^{|a||b|}``.  A repeated even generator kills the
bracket; repeated odd generators survive.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from .exact_core import as_rational

__all__ = [
    "Parity",
    "Gen",
    "Element",
    "Report",
    "Superalgebra",
    "TableAlgebra",
    "LinearMap",
    "canonicalize",
    "element_parity",
    "add_into",
    "scaled",
    "bracket",
    "bracket_gens",
    "check_nambu",
    "check_skew",
    "check_morphism",
    "twist",
    "check_derivation",
    "supercommutator",
    "ad",
    "identity_map",
    "zero_map",
    "random_triples",
]


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):  # type: ignore[override]
        return Parity((int(self) + int(other)) % 2)


class Gen(NamedTuple):
    """Basis label of a finite algebra."""

    label: str
    parity: int = 0

    def __repr__(self):
        return self.label


Element = dict


def add_into(out: dict, g, c) -> None:
    if not c:
        return
    v = out.get(g, 0) + c
    if v:
        out[g] = v
    else:
        del out[g]


def scaled(e: Mapping, c) -> dict:
    if not c:
        return {}
    return {g: c * v for g, v in e.items()}


def element_parity(e: Mapping) -> int:
    """Parity of a homogeneous element; the zero element counts as even."""
    ps = {g.parity for g in e}
    if len(ps) > 1:
        raise ValueError(f"element is not homogeneous: {e!r}")
    return ps.pop() if ps else 0


def canonicalize(gens: Sequence, key: Callable) -> tuple[tuple | None, int]:
    """Sort ``gens`` by ``key`` with Koszul signs.

    Returns ``(sorted_tuple, sign)`` or ``(None, 0)`` when an even generator is
    repeated.
    """
    gs = list(gens)
    keys = [key(g) for g in gs]
    sign = 1
    n = len(gs)
    for a in range(n):
        swapped = False
        for b in range(n - 1 - a):
            if keys[b] > keys[b + 1]:
                x, y = gs[b], gs[b + 1]
                gs[b], gs[b + 1] = y, x
                keys[b], keys[b + 1] = keys[b + 1], keys[b]
                if not (x.parity & y.parity):
                    sign = -sign
                swapped = True
        if not swapped:
            break
    for b in range(n - 1):
        if keys[b] == keys[b + 1] and gs[b].parity == 0:
            return None, 0
    return tuple(gs), sign


@dataclass
class Report:
    """Outcome of a sample-based check.  Violations are data, not errors."""

    name: str
    samples: int = 0
    nontrivial: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def summary(self) -> dict:
        return {
            "check": self.name,
            "samples": self.samples,
            "nontrivial": self.nontrivial,
            "violations": len(self.violations),
        }


class Superalgebra:
    """Base class: subclasses define ``arity``, ``key`` and ``canonical_bracket``."""

    arity: int = 3
    name: str = "algebra"

    def key(self, g):
        raise NotImplementedError

    def canonical_bracket(self, gens: tuple) -> dict:
        """Bracket of a sorted tuple without repeated even generators."""
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError("infinite basis; use a window")

    def sample_generator(self, rng: random.Random):
        return rng.choice(self.generators())

    def canonical(self, gens: Sequence):
        return canonicalize(gens, self.key)

    def gen_to_json(self, g):
        return g.label

    def gen_from_json(self, d):
        raise NotImplementedError


class TableAlgebra(Superalgebra):
    """Finite-dimensional algebra given by a table on canonical tuples.

    Missing canonical tuples bracket to zero.
    """

    def __init__(self, arity: int, generators: Sequence[Gen], table: Mapping[tuple, Mapping] | None = None, name: str = "table"):
        if arity < 2:
            raise ValueError("arity must be at least 2")
        self.arity = arity
        self.name = name
        self._gens = list(generators)
        self._rank = {g: j for j, g in enumerate(self._gens)}
        if len(self._rank) != len(self._gens):
            raise ValueError("duplicate generators")
        self._by_label = {g.label: g for g in self._gens}
        self.table: dict = {}
        for args, val in (table or {}).items():
            self.set_bracket(args, val)

    def key(self, g):
        return self._rank[g]

    def gen(self, label: str) -> Gen:
        return self._by_label[label]

    def gen_from_json(self, d) -> Gen:
        try:
            return self._by_label[str(d)]
        except KeyError:
            raise ValueError(f"unknown generator id {d!r}") from None

    def generators(self) -> list:
        return list(self._gens)

    def set_bracket(self, args: Sequence, value: Mapping) -> None:
        """Store ``[args] = value``; non-canonical ``args`` are sorted with their sign."""
        args = tuple(self._by_label[a] if isinstance(a, str) else a for a in args)
        if len(args) != self.arity:
            raise ValueError("arity mismatch")
        cs, sign = self.canonical(args)
        if cs is None:
            raise ValueError(f"bracket with a repeated even generator is forced to 0: {args}")
        val = {}
        for g, c in value.items():
            g = self._by_label[g] if isinstance(g, str) else g
            add_into(val, g, sign * as_rational(c))
        par = sum(g.parity for g in args) % 2
        for g in val:
            if g.parity != par:
                raise ValueError(f"bracket {args} is not even: output {g} has the wrong parity")
        if val:
            self.table[cs] = val
        else:
            self.table.pop(cs, None)

    def canonical_bracket(self, gens: tuple) -> dict:
        return self.table.get(gens, {})

    def copy(self, name: str | None = None) -> "TableAlgebra":
        return TableAlgebra(self.arity, self._gens, {k: dict(v) for k, v in self.table.items()}, name or self.name)

    # JSON interchange -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "generators": [{"id": g.label, "parity": g.parity} for g in self._gens],
            "brackets": [
                {
                    "args": [g.label for g in args],
                    "value": [_coeff_json(g.label, c) for g, c in sorted(val.items(), key=lambda kv: self._rank[kv[0]])],
                }
                for args, val in sorted(self.table.items(), key=lambda kv: [self._rank[g] for g in kv[0]])
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, name: str = "table") -> "TableAlgebra":
        try:
            arity = int(data["arity"])
            gens = [Gen(str(g["id"]), int(g["parity"])) for g in data["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed algebra description: {exc}") from exc
        for g in gens:
            if g.parity not in (0, 1):
                raise ValueError(f"parity of {g.label} must be 0 or 1")
        alg = cls(arity, gens, name=name)
        for entry in data.get("brackets", []):
            try:
                args = [str(a) for a in entry["args"]]
                value = {str(v["id"]): Fraction(int(v["num"]), int(v.get("den", "1"))) for v in entry["value"]}
            except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"malformed bracket entry {entry!r}: {exc}") from exc
            unknown = [a for a in list(args) + list(value) if a not in alg._by_label]
            if unknown:
                raise ValueError(f"unknown generator ids {unknown}")
            alg.set_bracket(args, value)
        return alg


def _coeff_json(label, c) -> dict:
    c = as_rational(c)
    return {"id": label, "num": str(c.numerator), "den": str(c.denominator)}


def bracket_gens(alg: Superalgebra, gens: Sequence) -> dict:
    """Bracket of basis generators in any order."""
    cs, sign = alg.canonical(gens)
    if cs is None:
        return {}
    val = alg.canonical_bracket(cs)
    if sign == 1 or not val:
        return val
    return {g: -c for g, c in val.items()}


def bracket(alg: Superalgebra, args: Sequence[Mapping]) -> dict:
    """Multilinear bracket of homogeneous elements."""
    if len(args) != alg.arity:
        raise ValueError(f"arity mismatch: expected {alg.arity} arguments, got {len(args)}")
    for a in args:
        element_parity(a)
    out: dict = {}
    for combo in itertools.product(*[list(a.items()) for a in args]):
        c = 1
        for _, v in combo:
            c = c * v
        if not c:
            continue
        for g, v in bracket_gens(alg, [g for g, _ in combo]).items():
            add_into(out, g, c * v)
    return out


class LinearMap:
    """Homogeneous linear map defined on generators."""

    def __init__(self, parity: int, action: Callable[[Hashable], Mapping] | Mapping, name: str = ""):
        self.parity = int(parity) % 2
        if isinstance(action, Mapping):
            table = dict(action)
            self._action = lambda g: table.get(g, {})
        else:
            self._action = action
        self.name = name

    def on_gen(self, g) -> dict:
        return self._action(g)

    def __call__(self, e: Mapping) -> dict:
        out: dict = {}
        for g, c in e.items():
            for h, v in self._action(g).items():
                add_into(out, h, c * v)
        return out

    def __repr__(self):
        return f"LinearMap({self.name or '?'}, parity={self.parity})"

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if self.parity != other.parity:
            raise ValueError("sum of maps of different parity is not homogeneous")
        a, b = self._action, other._action

        def act(g):
            out = dict(a(g))
            for h, v in b(g).items():
                add_into(out, h, v)
            return out

        return LinearMap(self.parity, act, f"({self.name}+{other.name})")

    def __rmul__(self, c) -> "LinearMap":
        a = self._action
        return LinearMap(self.parity, lambda g: scaled(a(g), c), f"{c}*{self.name}")

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """``self o other``."""
        return LinearMap((self.parity + other.parity) % 2, lambda g: self(other.on_gen(g)), f"{self.name}.{other.name}")

    def check_homogeneous(self, gens: Iterable) -> list:
        bad = []
        for g in gens:
            for h in self._action(g):
                if h.parity != (g.parity + self.parity) % 2:
                    bad.append((g, h))
        return bad


def identity_map() -> LinearMap:
    return LinearMap(0, lambda g: {g: 1}, "id")


def zero_map(parity: int = 0) -> LinearMap:
    return LinearMap(parity, lambda g: {}, "0")


def _gsum(gs) -> int:
    return sum(g.parity for g in gs)


def _tup(sample) -> list:
    out = []
    for part in sample:
        out.append({part: 1} if not isinstance(part, Mapping) else part)
    return out


def check_nambu(alg: Superalgebra, samples: Iterable[tuple[Sequence, Sequence]]) -> Report:
    """Fundamental identity on samples ``(y, x)`` of basis generators.

    ``[y_2..y_n, [x_1..x_n]] = sum_i (-1)^{|y|(|x_1|+..+|x_{i-1}|)} [x_1.., [y_2..y_n, x_i], ..x_n]``.
    """
    rep = Report("nambu")
    for y, x in samples:
        y, x = list(y), list(x)
        rep.samples += 1
        inner = bracket(alg, _tup(x))
        lhs = bracket(alg, _tup(y) + [inner])
        py = _gsum(y)
        rhs: dict = {}
        for i in range(len(x)):
            s = -1 if (py * _gsum(x[:i])) % 2 else 1
            args = _tup(x)
            args[i] = bracket(alg, _tup(y) + [{x[i]: 1}])
            for g, v in bracket(alg, args).items():
                add_into(rhs, g, s * v)
        if lhs or rhs:
            rep.nontrivial += 1
        if lhs != rhs:
            rep.violations.append({"y": y, "x": x, "lhs": lhs, "rhs": rhs})
    return rep


def check_skew(alg: Superalgebra, samples: Iterable[Sequence]) -> Report:
    """Every adjacent transposition of each sample multiplies the bracket by ``-(-1)^{|a||b|}``."""
    rep = Report("skew")
    for x in samples:
        x = list(x)
        rep.samples += 1
        base = bracket(alg, _tup(x))
        bad = {}
        if base:
            rep.nontrivial += 1
        # parity additivity
        par = _gsum(x) % 2
        if any(g.parity != par for g in base):
            bad["parity"] = base
        for j in range(len(x) - 1):
            y = list(x)
            y[j], y[j + 1] = y[j + 1], y[j]
            s = 1 if (x[j].parity & x[j + 1].parity) else -1
            swapped = bracket(alg, _tup(y))
            if swapped != scaled(base, s):
                bad[j] = swapped
        if bad:
            rep.violations.append({"x": x, "value": base, "bad": bad})
    return rep


def check_morphism(f: LinearMap, source: Superalgebra, target: Superalgebra, samples: Iterable[Sequence]) -> Report:
    if f.parity:
        raise ValueError("a morphism must be even")
    rep = Report("morphism")
    for x in samples:
        x = list(x)
        rep.samples += 1
        lhs = bracket(target, [f.on_gen(g) for g in x])
        rhs = f(bracket(source, _tup(x)))
        if lhs or rhs:
            rep.nontrivial += 1
        if lhs != rhs:
            rep.violations.append({"x": x, "lhs": lhs, "rhs": rhs})
    return rep


class _Twisted(Superalgebra):
    def __init__(self, base: Superalgebra, f: LinearMap):
        self.base = base
        self.f = f
        self.arity = base.arity
        self.name = f"{base.name}^{f.name or 'f'}"

    def key(self, g):
        return self.base.key(g)

    def canonical_bracket(self, gens):
        return self.f(self.base.canonical_bracket(gens))

    def generators(self):
        return self.base.generators()

    def sample_generator(self, rng):
        return self.base.sample_generator(rng)


def twist(alg: Superalgebra, f: LinearMap) -> Superalgebra:
    """Algebra with bracket ``f([x_1..x_n])``.  The result is not validated."""
    if f.parity:
        raise ValueError("twist requires an even map")
    return _Twisted(alg, f)


def check_derivation(D: LinearMap, alg: Superalgebra, samples: Iterable[Sequence]) -> Report:
    rep = Report("derivation")
    p = D.parity
    for x in samples:
        x = list(x)
        rep.samples += 1
        lhs = D(bracket(alg, _tup(x)))
        rhs: dict = {}
        for k in range(len(x)):
            s = -1 if (p * _gsum(x[:k])) % 2 else 1
            args = _tup(x)
            args[k] = D.on_gen(x[k])
            if not args[k]:
                continue
            for g, v in bracket(alg, args).items():
                add_into(rhs, g, s * v)
        if lhs or rhs:
            rep.nontrivial += 1
        if lhs != rhs:
            rep.violations.append({"x": x, "lhs": lhs, "rhs": rhs})
    return rep


def supercommutator(D1: LinearMap, D2: LinearMap) -> LinearMap:
    s = -1 if (D1.parity * D2.parity) % 2 else 1

    def act(g):
        out = D1(D2.on_gen(g))
        for h, v in D2(D1.on_gen(g)).items():
            add_into(out, h, -s * v)
        return out

    return LinearMap((D1.parity + D2.parity) % 2, act, f"[{D1.name},{D2.name}]")


def ad(x: Sequence, alg: Superalgebra) -> LinearMap:
    """Inner derivation ``z -> [x_1, .., x_{n-1}, z]``; ``x`` holds generators or elements."""
    if len(x) != alg.arity - 1:
        raise ValueError("ad needs n-1 arguments")
    xs = _tup(x)
    par = sum(element_parity(e) for e in xs) % 2
    gens_only = all(len(e) == 1 and next(iter(e.values())) == 1 for e in xs)
    if gens_only:
        base = [next(iter(e)) for e in xs]
        return LinearMap(par, lambda g: bracket_gens(alg, base + [g]), "ad(" + ",".join(map(repr, base)) + ")")
    return LinearMap(par, lambda g: bracket(alg, xs + [{g: 1}]), "ad(...)")


def random_triples(alg: Superalgebra, count: int, rng: random.Random, size: int | None = None) -> list:
    size = alg.arity if size is None else size
    return [tuple(alg.sample_generator(rng) for _ in range(size)) for _ in range(count)]
