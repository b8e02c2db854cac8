"""Cochains, the operators delta, d and Delta, and windowed cohomology.

A k-cochain ``f`` takes ``k`` wedges of ``n-1`` generators and one more
generator ``z`` and returns a module element.  Wedge slots are ordered (the
complex is of Leibniz type); each wedge is itself super skew.  ``f.parity`` is
the shift between input and output parity.

Cochain bodies are callables on canonical inputs ``(xs, z)`` where ``xs`` is a
tuple of canonical wedge tuples.  Evaluation on arbitrary inputs goes through
:func:`evaluate`, which normalizes each wedge and extends multilinearly.

Degree naming: ``Cochain.k`` counts wedge slots.  The windowed spaces use the
shifted naming of the cocycle spaces: ``Z^k`` is the kernel of ``delta`` on
cochains with ``k-1`` wedge slots, so derivations are ``Z^1`` and the
cochains ``f(x, z)`` behind central extensions are ``Z^2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .exact_core import Echelon, KernelSolver, LinearForm, as_rational, canonical_basis, solve_linear
from .fundamental_complex import (
    ONE,
    Adj,
    AdjointRep,
    Representation,
    as_fundamental,
    ad_wedge,
    leibniz_bracket,
    w_action,
    w_normalize,
    w_right_action,
    wedge_normalize,
    wedge_parity,
)
from .superalgebra import Report, add_into, scaled

__all__ = [
    "Cochain",
    "LeibnizCochain",
    "Window",
    "WindowError",
    "EmptyInterior",
    "SystemTooLarge",
    "OutOfWindow",
    "evaluate",
    "delta",
    "d_leibniz",
    "d_terms",
    "delta_map",
    "dd_report",
    "cochain_from_map",
    "Truncation",
    "FiniteTruncation",
    "WindowedSpaces",
    "windowed_spaces",
    "coboundary_rows",
    "find_primitive",
    "cochain_vector",
]


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def _gp(gs) -> int:
    return sum(g.parity for g in gs)


class OutOfWindow(Exception):
    """A truncated cochain was asked for a value it does not carry."""


class WindowError(ValueError):
    pass


class EmptyInterior(WindowError):
    pass


class SystemTooLarge(WindowError):
    pass


# -- cochains ----------------------------------------------------------------

class Cochain:
    """``f(x_1, .., x_k, z)`` with values in the module of ``rep``."""

    def __init__(self, k: int, parity: int, rep: Representation, func: Callable, bidegree=None, name: str = ""):
        if k < 0:
            raise ValueError("cochain degree must be >= 0")
        if parity not in (0, 1):
            raise ValueError("cochain parity must be 0 or 1")
        self.k = k
        self.parity = parity
        self.rep = rep
        self.func = func
        self.bidegree = tuple(bidegree) if bidegree is not None else None
        self.name = name

    @property
    def alg(self):
        return self.rep.alg

    def __repr__(self):
        return f"Cochain(k={self.k}, parity={self.parity}, {self.name or 'anonymous'})"

    def __call__(self, xs: Sequence, z) -> dict:
        """Value on wedges given as generator tuples (any order) or fundamental elements."""
        if len(xs) != self.k:
            raise ValueError(f"expected {self.k} wedge arguments, got {len(xs)}")
        zs = dict(z) if isinstance(z, Mapping) else {z: 1}
        return evaluate(self, [as_fundamental(self.alg, x) for x in xs], zs)

    # linear structure ---------------------------------------------------
    def _combine(self, other: "Cochain", c: int) -> "Cochain":
        if (other.k, other.parity) != (self.k, self.parity):
            raise ValueError("cochains of different degree or parity")

        def func(xs, z, a=self.func, b=other.func):
            out = dict(a(xs, z))
            for v, d in b(xs, z).items():
                add_into(out, v, c * d)
            return out

        return Cochain(self.k, self.parity, self.rep, func, self.bidegree)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rmul__(self, c):
        c = as_rational(c)
        return Cochain(self.k, self.parity, self.rep, lambda xs, z, f=self.func: scaled(f(xs, z), c) if c else {}, self.bidegree)

    def __neg__(self):
        return -1 * self

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, k: int, parity: int, rep: Representation) -> "Cochain":
        return cls(k, parity, rep, lambda xs, z: {}, name="zero")

    @classmethod
    def from_table(cls, k: int, parity: int, rep: Representation, table: Mapping, bidegree=None, name: str = "") -> "Cochain":
        """Table ``(xs, z) -> element``; keys may use non-canonical wedges."""
        alg = rep.alg
        canon: dict = {}
        for (xs, z), val in table.items():
            if len(xs) != k:
                raise ValueError(f"table entry with {len(xs)} wedge slots in a degree {k} cochain")
            sign = 1
            keys = []
            for x in xs:
                norm = wedge_normalize(alg, x)
                if norm is None:
                    sign = 0
                    break
                keys.append(norm[0])
                sign *= norm[1]
            if not sign:
                continue
            par = (sum(wedge_parity(x) for x in keys) + z.parity + parity) % 2
            slot = canon.setdefault((tuple(keys), z), {})
            for v, c in val.items():
                if v.parity != par:
                    raise ValueError(f"value {v!r} breaks parity at {(xs, z)!r}")
                add_into(slot, v, sign * as_rational(c))
        canon = {key: val for key, val in canon.items() if val}
        f = cls(k, parity, rep, lambda xs, z: canon.get((xs, z), {}), bidegree, name)
        f.table = canon
        return f

    def to_table(self, inputs: Iterable[tuple]) -> dict:
        out = {}
        for xs, z in inputs:
            val = self.func(tuple(xs), z)
            if val:
                out[(tuple(xs), z)] = dict(val)
        return out

    # JSON -----------------------------------------------------------------
    def to_json(self, inputs: Iterable[tuple] | None = None) -> dict:
        """Serialize; closed-form cochains need the list of canonical inputs to tabulate."""
        alg = self.alg
        table = getattr(self, "table", None)
        if table is None:
            if inputs is None:
                raise ValueError("closed-form cochain: pass the inputs to tabulate")
            table = self.to_table(inputs)
        entries = []
        for (xs, z), val in table.items():
            entries.append(
                {
                    "args": [[alg.gen_to_json(g) for g in x] for x in xs],
                    "z": alg.gen_to_json(z),
                    "value": [_value_json(self.rep, v, c) for v, c in val.items()],
                }
            )
        return {
            "k": self.k,
            "parity": self.parity,
            "bidegree": list(self.bidegree) if self.bidegree is not None else None,
            "entries": entries,
        }

    @classmethod
    def from_json(cls, data: Mapping, rep: Representation) -> "Cochain":
        alg = rep.alg
        try:
            k = int(data["k"])
            parity = int(data["parity"])
            bideg = data.get("bidegree")
            table = {}
            for e in data.get("entries", []):
                xs = tuple(tuple(alg.gen_from_json(g) for g in x) for x in e["args"])
                z = alg.gen_from_json(e["z"])
                val = {}
                for item in e["value"]:
                    v = _module_gen_from_json(rep, item["id"])
                    add_into(val, v, Fraction(int(item["num"]), int(item.get("den", "1"))))
                table[(xs, z)] = val
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed cochain description: {exc}") from exc
        return cls.from_table(k, parity, rep, table, bideg)


def _value_json(rep: Representation, v, c) -> dict:
    c = as_rational(c)
    if isinstance(v, Adj):
        vid = rep.alg.gen_to_json(v.base)
    else:
        vid = v.label
    return {"id": vid, "num": str(c.numerator), "den": str(c.denominator)}


def _module_gen_from_json(rep: Representation, vid):
    if rep.trivial:
        if str(vid) != "1":
            raise ValueError(f"trivial module has the single generator '1', got {vid!r}")
        return ONE
    if isinstance(rep, AdjointRep):
        return Adj(rep.alg.gen_from_json(vid))
    for v in getattr(rep, "gens", ()):
        if v.label == vid:
            return v
    raise ValueError(f"unknown module generator {vid!r}")


def cochain_from_map(D, rep: Representation, bidegree=None) -> Cochain:
    """A linear map on generators as a cochain with no wedge slots (adjoint or trivial values)."""
    if rep.trivial:
        func = lambda xs, z: {ONE: c for g, c in D.on_gen(z).items()}
    else:
        func = lambda xs, z: {Adj(g): c for g, c in D.on_gen(z).items()}
    return Cochain(0, D.parity, rep, func, bidegree, getattr(D, "name", ""))


def evaluate(f: Cochain, xs_elems: Sequence[Mapping], z_elem: Mapping) -> dict:
    """Multilinear extension of ``f`` to fundamental elements and an element ``z``."""
    out: dict = {}
    func = f.func
    for combo in itertools.product(*[list(e.items()) for e in xs_elems]):
        c = 1
        for _, v in combo:
            c = c * v
        if not c:
            continue
        xs = tuple(w for w, _ in combo)
        for zg, zc in z_elem.items():
            for g, v in func(xs, zg).items():
                add_into(out, g, c * zc * v)
    return out


# -- delta ---------------------------------------------------------------------

def delta(f: Cochain) -> Cochain:
    """The Nambu-complex coboundary: four sums, the last over the slots of ``x_k``."""
    alg, rep = f.alg, f.rep
    k = f.k
    n = alg.arity
    fpar = f.parity
    func = f.func

    def df(xs, z):
        if len(xs) != k + 1:
            raise ValueError(f"delta f expects {k + 1} wedge arguments")
        out: dict = {}
        P = [wedge_parity(x) for x in xs]
        pz = z.parity
        # first sum: [x_s, x_t]_L replaces x_t
        for s in range(k + 1):
            for t in range(s + 1, k + 1):
                sign = -_sign(s + P[s] * sum(P[s + 1:t]))
                b = leibniz_bracket(alg, {xs[s]: 1}, {xs[t]: 1})
                if not b:
                    continue
                args = [{x: 1} for x in xs]
                args[t] = b
                del args[s]
                for g, v in evaluate(f, args, {z: 1}).items():
                    add_into(out, g, sign * v)
        # second sum: ad(x_s)(z) in the last slot
        for s in range(k + 1):
            az = ad_wedge(alg, xs[s], z)
            if not az:
                continue
            sign = -_sign(s + P[s] * sum(P[s + 1:]))
            args = [{x: 1} for x in xs[:s] + xs[s + 1:]]
            for g, v in evaluate(f, args, az).items():
                add_into(out, g, sign * v)
        if rep.trivial:
            return out
        # third sum: x_s acting on the value
        for s in range(k + 1):
            val = func(xs[:s] + xs[s + 1:], z)
            if not val:
                continue
            sign = _sign(s + P[s] * (fpar + sum(P[:s])))
            for g, v in rep.act_elem(xs[s], val).items():
                add_into(out, g, sign * v)
        # fourth sum: z ^ x_k with slot i removed, acting on f(.., x_k^i)
        xk = xs[k]
        q = [g.parity for g in xk]
        head = xs[:k]
        for i in range(1, n):
            val = func(head, xk[i - 1])
            if not val:
                continue
            tail = sum(q[i:])
            e = (k - i) + (fpar + sum(P[:k]) + tail) * (q[i - 1] + P[k]) + pz * (fpar + sum(P)) + P[k] * tail
            wedge = (z,) + xk[: i - 1] + xk[i:]
            for g, v in rep.act_elem(wedge, val).items():
                add_into(out, g, _sign(e) * v)
        return out

    return Cochain(k + 1, fpar, rep, df, f.bidegree, f"delta({f.name})" if f.name else "")


# -- the Leibniz complex ---------------------------------------------------------

class LeibnizCochain:
    """``F(x_1, .., x_k)`` with ``x_j`` wedges and values in W (dict keyed ``(ys, v)``)."""

    def __init__(self, k: int, parity: int, rep: Representation, func: Callable, name: str = ""):
        self.k = k
        self.parity = parity
        self.rep = rep
        self.func = func
        self.name = name

    def __call__(self, xs: Sequence) -> dict:
        if len(xs) != self.k:
            raise ValueError(f"expected {self.k} wedge arguments, got {len(xs)}")
        return evaluate_leibniz(self, [as_fundamental(self.rep.alg, x) for x in xs])

    @classmethod
    def constant(cls, w: Mapping, parity: int, rep: Representation) -> "LeibnizCochain":
        """A W element viewed as a cochain with no arguments."""
        w = dict(w)
        return cls(0, parity, rep, lambda xs: w, "const")


def evaluate_leibniz(F: LeibnizCochain, xs_elems: Sequence[Mapping]) -> dict:
    out: dict = {}
    for combo in itertools.product(*[list(e.items()) for e in xs_elems]):
        c = 1
        for _, v in combo:
            c = c * v
        if not c:
            continue
        for g, v in F.func(tuple(w for w, _ in combo)).items():
            add_into(out, g, c * v)
    return out


CONVENTIONS = ("corrected", "printed")


def d_terms(F: LeibnizCochain, xs: Sequence, convention: str = "corrected") -> list:
    """Labelled contributions ``(label, W element)`` of ``dF(xs)``.

    ``printed`` uses the left action for degree 0 and ``(-1)^k`` in front of the
    primed bracket; ``corrected`` uses ``-[w, x]'_W`` in degree 0 and
    ``(-1)^{k+1}``, the variant for which ``d o d = 0`` and the comparison map
    is a chain map.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    rep = F.rep
    alg = rep.alg
    k = F.k
    xs = tuple(xs)
    if len(xs) != k + 1:
        raise ValueError(f"dF expects {k + 1} wedge arguments")
    terms = []
    if k == 0:
        w = F.func(())
        if convention == "corrected":
            act = w_right_action(rep, w, xs[0])
        else:
            act = w_action(rep, xs[0], w)
        terms.append(("degree0", scaled(act, -1)))
        return terms
    P = [wedge_parity(x) for x in xs]
    for s in range(k + 1):
        for t in range(s + 1, k + 1):
            sign = -_sign(s + P[s] * sum(P[s + 1:t]))
            args = [{x: 1} for x in xs]
            args[t] = leibniz_bracket(alg, {xs[s]: 1}, {xs[t]: 1})
            del args[s]
            terms.append((f"bracket[{s},{t}]", scaled(evaluate_leibniz(F, args), sign)))
    for s in range(k):
        sign = _sign(s + P[s] * (F.parity + sum(P[:s])))
        terms.append((f"left[{s}]", scaled(w_action(rep, xs[s], F.func(xs[:s] + xs[s + 1:])), sign)))
    last = _sign(k + 1) if convention == "corrected" else _sign(k)
    terms.append(("right", scaled(w_right_action(rep, F.func(xs[:k]), xs[k]), last)))
    return terms


def d_leibniz(F: LeibnizCochain, convention: str = "corrected") -> LeibnizCochain:
    def dF(xs):
        out: dict = {}
        for _, e in d_terms(F, xs, convention):
            for g, v in e.items():
                add_into(out, g, v)
        return out

    return LeibnizCochain(F.k + 1, F.parity, F.rep, dF, f"d({F.name})")


def delta_map(f: Cochain) -> LeibnizCochain:
    """``Delta f(x_1, .., x_{k+1})``: insert ``f(x_1..x_k, x_{k+1}^i)`` into slot ``i`` of the last wedge."""
    rep = f.rep
    alg = rep.alg

    def Df(xs):
        out: dict = {}
        xk = xs[-1]
        head = xs[:-1]
        pre = f.parity + sum(wedge_parity(x) for x in head)
        acc = 0
        for i, g in enumerate(xk):
            s = _sign(pre * acc)
            acc += g.parity
            for v, c in f.func(head, g).items():
                t = list(xk)
                t[i] = v
                w_normalize(alg, t, i, out, c * s)
        return out

    return LeibnizCochain(f.k + 1, f.parity, rep, Df, f"Delta({f.name})")


def dd_report(F: LeibnizCochain, samples: Iterable[Sequence], convention: str = "corrected") -> Report:
    """``d(dF) = 0`` on samples; violations carry the term breakdown of the outer ``d``."""
    out = Report(f"dd[{convention}]")
    dF = d_leibniz(F, convention)
    for xs in samples:
        out.samples += 1
        xs = tuple(xs)
        terms = d_terms(dF, xs, convention)
        total: dict = {}
        for _, e in terms:
            for g, v in e.items():
                add_into(total, g, v)
        if any(e for _, e in terms):
            out.nontrivial += 1
        if total:
            out.violations.append({"args": xs, "residual": total, "terms": [(lab, e) for lab, e in terms if e]})
    return out


# -- windows ---------------------------------------------------------------------

@dataclass(frozen=True)
class Window:
    """Index box ``|m| <= M``, ``0 <= i <= I`` with interior margin ``r``."""

    M: int
    I: int
    r: int = 2

    def __post_init__(self):
        if min(self.M, self.I, self.r) < 0:
            raise WindowError("window parameters must be non-negative")

    def check_interior(self) -> None:
        if self.M - self.r < 0 or self.I - self.r < 0:
            raise EmptyInterior(f"window too small: interior ({self.M - self.r}, {self.I - self.r}) is empty")

    @classmethod
    def parse(cls, text: str) -> "Window":
        parts = [int(p) for p in str(text).split(",")]
        if len(parts) == 2:
            parts.append(2)
        if len(parts) != 3:
            raise ValueError("window is M,I[,r]")
        return cls(*parts)


class Truncation:
    """A finite piece of the generator basis and the admissible cochain outputs."""

    rep: Representation
    gens: list

    def in_window(self, g) -> bool:
        raise NotImplementedError

    def interior(self, g) -> bool:
        raise NotImplementedError

    def outputs(self, inputs: Sequence, slots: int, parity: int) -> list:
        """Module generators a coordinate with these flattened inputs may take.

        Raises :class:`OutOfWindow` when the only admissible outputs lie outside
        the window.
        """
        raise NotImplementedError

    def output_interior(self, v) -> bool:
        raise NotImplementedError

    def instances(self, k: int, parity: int, wedges: Sequence):
        """Equation instances ``(xs, z)`` of a full solve.

        Subclasses may skip instances whose equations are identically zero or
        reach outside the window.
        """
        return ((xs, z) for xs in itertools.product(wedges, repeat=k) for z in self.gens)


class FiniteTruncation(Truncation):
    """Whole basis of a finite algebra; everything is interior."""

    def __init__(self, rep: Representation, module_gens: Sequence | None = None):
        self.rep = rep
        self.gens = sorted(rep.alg.generators(), key=rep.alg.key)
        if module_gens is None:
            if rep.trivial:
                module_gens = [ONE]
            elif isinstance(rep, AdjointRep):
                module_gens = [Adj(g) for g in self.gens]
            else:
                module_gens = list(rep.gens)
        self.module_gens = list(module_gens)
        self._set = set(self.gens)

    def in_window(self, g) -> bool:
        return g in self._set

    def interior(self, g) -> bool:
        return True

    def outputs(self, inputs, slots, parity):
        par = (_gp(inputs) + parity) % 2
        return [v for v in self.module_gens if v.parity == par]

    def output_interior(self, v) -> bool:
        return True


def _wedges(alg, gens: Sequence) -> list:
    n = alg.arity
    out = []
    for combo in itertools.combinations_with_replacement(gens, n - 1):
        norm = wedge_normalize(alg, combo)
        if norm is not None and norm[0] == tuple(combo):
            out.append(tuple(combo))
    return out


def _coord_key(rep, coord):
    xs, z, v = coord
    alg = rep.alg
    return (tuple(tuple(alg.key(g) for g in x) for x in xs), alg.key(z), rep.module_key(v))


def _symbolic(trunc: Truncation, slots: int, parity: int, bidegree=None, registry: set | None = None) -> Cochain:
    """Cochain whose values are the unknown coordinates themselves."""
    inw = trunc.in_window

    def func(xs, z):
        if not inw(z):
            raise OutOfWindow
        flat = [z]
        for x in xs:
            for g in x:
                if not inw(g):
                    raise OutOfWindow
                flat.append(g)
        outs = trunc.outputs(flat, slots, parity)
        res = {}
        for v in outs:
            key = (xs, z, v)
            if registry is not None and key not in registry:
                raise OutOfWindow
            res[v] = LinearForm({key: 1})
        return res

    return Cochain(slots, parity, trunc.rep, func, bidegree, "unknowns")


def enumerate_coordinates(trunc: Truncation, slots: int, parity: int, cap: int | None = None, wedges: Sequence | None = None) -> list:
    """Window coordinates ``(xs, z, v)`` in lexicographic order of keys."""
    rep = trunc.rep
    alg = rep.alg
    if wedges is None:
        wedges = _wedges(alg, trunc.gens)
    coords = []
    for xs in itertools.product(wedges, repeat=slots):
        flat_x = [g for x in xs for g in x]
        for z in trunc.gens:
            try:
                outs = trunc.outputs(flat_x + [z], slots, parity)
            except OutOfWindow:
                continue
            for v in outs:
                coords.append((xs, z, v))
                if cap is not None and len(coords) > cap:
                    raise SystemTooLarge(f"more than {cap} unknowns")
    coords.sort(key=lambda c: _coord_key(rep, c))
    return coords


def _is_interior(trunc: Truncation, coord) -> bool:
    xs, z, v = coord
    if not trunc.interior(z) or not trunc.output_interior(v):
        return False
    return all(trunc.interior(g) for x in xs for g in x)


def coboundary_rows(trunc: Truncation, slots: int, parity: int, coords: Iterable, bidegree=None) -> dict:
    """For each coordinate, ``delta g`` there as a linear form in the coordinates of ``g``.

    ``g`` has ``slots - 1`` wedge slots.  Coordinates whose value needs ``g``
    outside the window are left out.
    """
    g = _symbolic(trunc, slots - 1, parity, bidegree)
    dg = delta(g)
    rows = {}
    for c in coords:
        xs, z, v = c
        try:
            val = dg.func(xs, z)
        except OutOfWindow:
            continue
        rows[c] = val.get(v, LinearForm())
    return rows


@dataclass
class WindowedSpaces:
    """Outcome of a windowed solve.  Bases are sparse vectors over coordinates."""

    k: int
    parity: int
    method: str
    coordinates: list
    interior: list
    cocycle_basis: list
    interior_cocycle_basis: list
    coboundary_basis: list
    interior_h_dim: int
    equations: int
    exact: bool = True
    notes: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "k": self.k,
            "parity": self.parity,
            "method": self.method,
            "unknowns": len(self.coordinates),
            "interior_unknowns": len(self.interior),
            "equations": self.equations,
            "cocycle_dim": len(self.cocycle_basis),
            "interior_cocycle_dim": len(self.interior_cocycle_basis),
            "interior_coboundary_dim": len(self.coboundary_basis),
            "interior_h_dim": self.interior_h_dim,
            "exact": self.exact,
            "notes": list(self.notes),
        }

    def as_cochain(self, vec: Mapping, rep: Representation, bidegree=None) -> Cochain:
        table: dict = {}
        for (xs, z, v), c in vec.items():
            add_into(table.setdefault((xs, z), {}), v, c)
        return Cochain.from_table(self.k - 1, self.parity, rep, table, bidegree)


def windowed_spaces(
    k: int,
    parity: int,
    trunc: Truncation,
    *,
    bidegree=None,
    cap: int = 50_000,
    instances: Iterable[tuple] | None = None,
    known: Sequence[Mapping | Cochain] = (),
) -> WindowedSpaces:
    """Cocycles, interior coboundaries and the interior cohomology dimension.

    Unknowns are the window coordinates of a cochain with ``k-1`` wedge slots.
    ``instances`` (tuples ``(xs, z)`` with ``k`` wedges) restricts the
    equations; the default uses every window instance.  Dropping equations can
    only enlarge the cocycle space, so a restricted solve is an upper bound; it is
    flagged exact when ``known`` cocycles (cochains or vectors) already
    account for the whole interior cocycle space.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rep = trunc.rep
    alg = rep.alg
    wedges = _wedges(alg, trunc.gens)
    coords = enumerate_coordinates(trunc, k - 1, parity, cap, wedges)
    interior = [c for c in coords if _is_interior(trunc, c)]
    if not interior:
        raise EmptyInterior("window too small: no interior unknowns")
    registry = set(coords)
    unknown = _symbolic(trunc, k - 1, parity, bidegree, registry)
    df = delta(unknown)
    restricted = instances is not None
    if instances is None:
        instances = trunc.instances(k, parity, wedges)
    solver = KernelSolver(coords)
    count = 0
    for xs, z in instances:
        try:
            val = df.func(tuple(xs), z)
        except OutOfWindow:
            continue
        for row in val.values():
            if row:
                count += 1
                if count > 40 * cap:
                    raise SystemTooLarge(f"more than {40 * cap} equations")
                solver.add(row)
    cocycles = solver.kernel()
    int_set = set(interior)
    int_order = [c for c in coords if c in int_set]
    z_int = canonical_basis([{c: v for c, v in vec.items() if c in int_set} for vec in cocycles], int_order)
    notes = []
    if k >= 2:
        rows = coboundary_rows(trunc, k - 1, parity, interior, bidegree)
        dropped = len(interior) - len(rows)
        if dropped:
            notes.append(f"{dropped} interior coordinates need values outside the window and are excluded")
            int_set = set(rows)
            int_order = [c for c in int_order if c in int_set]
            z_int = canonical_basis([{c: v for c, v in vec.items() if c in int_set} for vec in z_int], int_order)
        cols: dict = {}
        for c, form in rows.items():
            for gkey, coef in form.items():
                cols.setdefault(gkey, {})[c] = coef
        b_int = canonical_basis(cols.values(), int_order)
    else:
        b_int = []
    total = Echelon({c: j for j, c in enumerate(int_order)})
    for v in b_int:
        total.add(v)
    base = total.rank
    for v in z_int:
        total.add(v)
    h = total.rank - base
    exact = not restricted
    if restricted and known:
        vecs = [cochain_vector(f, int_order) if isinstance(f, Cochain) else f for f in known]
        kn = canonical_basis([{c: v for c, v in vec.items() if c in int_set} for vec in vecs], int_order)
        allk = Echelon({c: j for j, c in enumerate(int_order)})
        for v in b_int:
            allk.add(v)
        for v in kn:
            allk.add(v)
        exact = allk.rank == total.rank
        notes.append(f"restricted equations; known cocycles span {allk.rank - base} of {h} interior classes")
    elif restricted:
        notes.append("restricted equations: dimensions are upper bounds")
    return WindowedSpaces(k, parity, "restricted" if restricted else "full", coords, int_order, cocycles, z_int, b_int, h, count, exact, notes)


def cochain_vector(f: Cochain, coords: Iterable) -> dict:
    """Values of ``f`` on the given coordinates as a sparse vector."""
    out = {}
    for c in coords:
        xs, z, v = c
        val = f.func(xs, z).get(v)
        if val:
            out[c] = val
    return out


def find_primitive(f: Cochain, trunc: Truncation, coords: Iterable, bidegree=None) -> Cochain | None:
    """Some ``g`` with ``delta g = f`` on ``coords`` (window coordinates of ``f``), or None."""
    coords = list(coords)
    rows = coboundary_rows(trunc, f.k, f.parity, coords, bidegree)
    eqs = []
    for c in coords:
        if c not in rows:
            continue
        xs, z, v = c
        eqs.append((rows[c], f.func(xs, z).get(v, 0)))
    sol = solve_linear(eqs)
    if sol is None:
        return None
    table: dict = {}
    for (xs, z, v), c in sol.items():
        add_into(table.setdefault((xs, z), {}), v, c)
    return Cochain.from_table(f.k - 1, f.parity, f.rep, table, bidegree, "primitive")
