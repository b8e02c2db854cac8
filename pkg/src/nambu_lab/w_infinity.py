"""The super w-infinity 3-algebra.

Four generator families: ``L`` and ``Lbar`` (even), ``h`` and ``hbar`` (odd).
A generator is ``WGen(family, m, i)`` with lower index ``m`` and upper index
``i >= 0``; for the odd families the displayed superscript is ``i + 1/2``.

Canonical order is family rank, then ``i``, then ``m``.  Five canonical family
patterns carry a nonzero bracket:

    (L, L, X) for X in {L, Lbar, h, hbar}:  (h(n-m) + j(m-k) + i(k-n)) X_{m+n+k}^{i+j+h-1}
    (L, h, hbar):                           (i(p-r) + a(r-m) + b(m-p)) Lbar_{m+p+r}^{i+a+b-1}

(for ``[L_m^i, L_n^j, X_k^h]`` and ``[L_m^i, h_p^a, hbar_r^b]``).  Everything
else is zero.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .superalgebra import LinearMap, Superalgebra, ad, add_into, bracket_gens

FAMILIES = ("L", "Lbar", "h", "hbar")
RANK = {f: r for r, f in enumerate(FAMILIES)}
FAMILY_PARITY = {"L": 0, "Lbar": 0, "h": 1, "hbar": 1}
_ALIASES = {"Lb": "Lbar", "hb": "hbar", "L̄": "Lbar", "h̄": "hbar"}

NONZERO_PATTERNS = (("L", "L", "L"), ("L", "L", "Lbar"), ("L", "L", "h"), ("L", "L", "hbar"), ("L", "h", "hbar"))


class WGen(NamedTuple):
    family: str
    m: int
    i: int

    @property
    def parity(self) -> int:
        return FAMILY_PARITY[self.family]

    def __repr__(self):
        if self.parity:
            return f"{self.family}_{self.m}^{self.i}+1/2"
        return f"{self.family}_{self.m}^{self.i}"

    def to_json(self) -> dict:
        return {"family": self.family, "m": self.m, "i": self.i}

    @classmethod
    def from_json(cls, d) -> "WGen":
        try:
            fam = _ALIASES.get(d["family"], d["family"])
            if fam not in RANK:
                raise ValueError(f"unknown family {d['family']!r}")
            g = cls(fam, int(d["m"]), int(d["i"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed generator {d!r}") from exc
        if g.i < 0:
            raise ValueError(f"upper index must be >= 0: {d!r}")
        return g


def L(m, i):
    return WGen("L", m, i)


def Lb(m, i):
    return WGen("Lbar", m, i)


def h(m, a):
    return WGen("h", m, a)


def hb(m, a):
    return WGen("hbar", m, a)


def wkey(g: WGen):
    return (RANK[g.family], g.i, g.m)


def _det(m, i, n, j, k, hh):
    return hh * (n - m) + j * (m - k) + i * (k - n)


def canonical_w_bracket(a: WGen, b: WGen, c: WGen) -> dict:
    """Bracket of a canonically ordered triple."""
    fa, fb, fc = a.family, b.family, c.family
    if fa != "L":
        return {}
    if fb == "L":
        co = _det(a.m, a.i, b.m, b.i, c.m, c.i)
        if not co:
            return {}
        return {WGen(fc, a.m + b.m + c.m, a.i + b.i + c.i - 1): co}
    if fb == "h" and fc == "hbar":
        m, i, p, al, r, be = a.m, a.i, b.m, b.i, c.m, c.i
        co = i * (p - r) + al * (r - m) + be * (m - p)
        if not co:
            return {}
        return {WGen("Lbar", m + p + r, i + al + be - 1): co}
    return {}


class WInfinity(Superalgebra):
    """Closed-form backend.  ``patterns`` restricts which canonical patterns are nonzero (audit aid)."""

    arity = 3
    name = "w-infinity-3"

    def __init__(self, sample_M: int = 20, sample_I: int = 6):
        self.sample_M = sample_M
        self.sample_I = sample_I

    def key(self, g):
        return (RANK[g.family], g.i, g.m)

    def canonical_bracket(self, gens):
        return canonical_w_bracket(*gens)

    def sample_generator(self, rng: random.Random, M: int | None = None, I: int | None = None, weights=(4, 1, 2, 2)) -> WGen:
        M = self.sample_M if M is None else M
        I = self.sample_I if I is None else I
        fam = rng.choices(FAMILIES, weights=weights)[0]
        return WGen(fam, rng.randint(-M, M), rng.randint(0, I))

    def gen_to_json(self, g):
        return g.to_json()

    def gen_from_json(self, d):
        return WGen.from_json(d)

    def window(self, M: int, I: int) -> list:
        return window_generators(M, I)

    @staticmethod
    def zero_patterns() -> list:
        """Canonical family patterns assigned the zero bracket."""
        import itertools

        out = []
        for combo in itertools.combinations_with_replacement(FAMILIES, 3):
            if combo not in NONZERO_PATTERNS:
                out.append(combo)
        return out


W = WInfinity()


def w_bracket(g1: WGen, g2: WGen, g3: WGen) -> dict:
    return bracket_gens(W, (g1, g2, g3))


def window_generators(M: int, I: int) -> list:
    """All generators with ``|m| <= M`` and ``0 <= i <= I`` in canonical order."""
    gens = [WGen(f, m, i) for f in FAMILIES for i in range(I + 1) for m in range(-M, M + 1)]
    return gens


def in_window(g: WGen, M: int, I: int) -> bool:
    return -M <= g.m <= M and 0 <= g.i <= I


# -- distinguished maps ----------------------------------------------------

def phi1() -> LinearMap:
    """Kills L and h, fixes Lbar and hbar."""
    return LinearMap(0, lambda g: {g: 1} if g.family in ("Lbar", "hbar") else {}, "phi1")


def phi2() -> LinearMap:
    """Kills L and hbar, fixes Lbar and h."""
    return LinearMap(0, lambda g: {g: 1} if g.family in ("Lbar", "h") else {}, "phi2")


def family_map(parity: int, pairs: Iterable[tuple[str, str, object]], name: str = "") -> LinearMap:
    """Index-preserving map sending ``X_m^i`` to ``c * Y_m^i`` for each ``(X, Y, c)``."""
    table: dict = {}
    for src, dst, c in pairs:
        table.setdefault(src, []).append((dst, c))

    def act(g):
        out: dict = {}
        for dst, c in table.get(g.family, ()):
            add_into(out, WGen(dst, g.m, g.i), c)
        return out

    return LinearMap(parity, act, name)


def euler_element() -> tuple:
    """``L_0^0 ^ L_0^1`` in canonical order; ``ad`` of it multiplies ``X_k^h`` by ``-k``."""
    return (L(0, 0), L(0, 1))


def x_element() -> tuple:
    """``L_{-1}^0 ^ L_1^1``; ``ad`` of it multiplies ``X_k^h`` by ``-(k + 1 - 2h)``."""
    return (L(-1, 0), L(1, 1))


def inner(x: Sequence[WGen]) -> LinearMap:
    return ad(list(x), W)


# -- windows -------------------------------------------------------------------

from .cohomology import OutOfWindow, Truncation, Window  # noqa: E402
from .fundamental_complex import ONE, Adj, AdjointRep, TrivialRep  # noqa: E402

ADJOINT = AdjointRep(W)
TRIVIAL = TrivialRep(W)
_PARITY_FAMILIES = {0: ("L", "Lbar"), 1: ("h", "hbar")}


class WTruncation(Truncation):
    """Window of w-infinity for cochains of bidegree ``(s, t)``.

    A coordinate with flattened inputs ``g_1..g_q`` and ``slots`` wedge slots has
    its output at lower index ``sum(m) + s`` and upper index ``sum(i) - slots + t``.
    For the trivial module that output index must be ``(0, 0)``.
    """

    def __init__(self, rep, window: Window, bidegree=(0, 0)):
        self.rep = rep
        self.window = window
        self.s, self.t = bidegree
        self.gens = window_generators(window.M, window.I)
        self._M, self._I = window.M, window.I
        self._Mi, self._Ii = window.M - window.r, window.I - window.r

    def in_window(self, g) -> bool:
        return -self._M <= g.m <= self._M and g.i <= self._I

    def interior(self, g) -> bool:
        return -self._Mi <= g.m <= self._Mi and g.i <= self._Ii

    def output_index(self, inputs, slots):
        return sum(g.m for g in inputs) + self.s, sum(g.i for g in inputs) - slots + self.t

    def outputs(self, inputs, slots, parity):
        mo, io = self.output_index(inputs, slots)
        par = (sum(g.parity for g in inputs) + parity) % 2
        if self.rep.trivial:
            return [ONE] if mo == 0 and io == 0 and par == 0 else []
        if io < 0:
            return []
        if not (-self._M <= mo <= self._M and io <= self._I):
            raise OutOfWindow
        return [Adj(WGen(f, mo, io)) for f in _PARITY_FAMILIES[par]]

    def output_interior(self, v) -> bool:
        if isinstance(v, Adj):
            return self.interior(v.base)
        return True

    def instances(self, k, parity, wedges):
        if k != 1 or self.rep.trivial:
            return super().instances(k, parity, wedges)
        return self._derivation_instances(parity, wedges)

    def _derivation_instances(self, parity, wedges):
        # every term of delta D at ((a, b), z) is a bracket of a, b, z with one
        # argument moved by D; skip family patterns where all of them vanish, and
        # instances that need D outside the window
        M, I, s, t = self._M, self._I, self.s, self.t
        live = _live_patterns(parity)
        ok = {g for g in self.gens if -M <= g.m + s <= M and g.i + t <= I}
        for x in wedges:
            a, b = x
            if a not in ok or b not in ok:
                continue
            for z in self.gens:
                if z not in ok or _pattern((a.family, b.family, z.family)) not in live:
                    continue
                if -M <= a.m + b.m + z.m + s <= M and a.i + b.i + z.i - 2 + t <= I:
                    yield ((x,), z)


def _pattern(fams) -> tuple:
    return tuple(sorted(fams, key=RANK.__getitem__))


def _live_patterns(parity: int) -> set:
    nonzero = set(NONZERO_PATTERNS)
    live = set()
    for combo in itertools.product(FAMILIES, repeat=3):
        moved = [combo[:j] + (f,) + combo[j + 1:] for j in range(3) for f in FAMILIES if FAMILY_PARITY[f] == (FAMILY_PARITY[combo[j]] + parity) % 2]
        if any(_pattern(c) in nonzero for c in [combo, *moved]):
            live.add(_pattern(combo))
    return live


# -- derivations -----------------------------------------------------------------

from dataclasses import dataclass, field  # noqa: E402

from .cohomology import EmptyInterior, WindowedSpaces, WindowError, cochain_from_map, cochain_vector, windowed_spaces  # noqa: E402
from .exact_core import Echelon, canonical_basis, in_span  # noqa: E402
from .fundamental_complex import wedge_normalize  # noqa: E402
from .superalgebra import Report  # noqa: E402


def _check_degree(parity, s, t):
    if parity not in (0, 1):
        raise ValueError(f"parity must be 0 or 1, got {parity!r}")
    if t < 0:
        raise ValueError(f"bidegree (s, t) needs t >= 0, got ({s}, {t})")


def wad(a: WGen, b: WGen) -> LinearMap:
    """``ad(a ^ b)`` with the operands in the order given."""
    return LinearMap((a.parity + b.parity) % 2, lambda g: w_bracket(a, b, g), f"ad({a!r},{b!r})")


def claimed_derivation_basis(parity: int, s: int, t: int) -> list:
    """The generating lists asserted for degree-(s, t) derivations."""
    _check_degree(parity, s, t)
    if parity == 0:
        if (s, t) == (0, 0):
            return [wad(L(-1, 1), L(1, 0)), wad(L(0, 1), L(0, 0)), wad(h(0, 1), hb(0, 0)), wad(h(1, 0), hb(-1, 1)), phi1(), phi2()]
        if s + 2 * t:
            return [wad(L(1 + s, t), L(-1, 1)), wad(L(1, 0), L(-1 + s, 1 + t)), wad(Lb(1 + s, t), L(-1, 1)), wad(L(1, 0), Lb(-1 + s, 1 + t))]
        return [wad(L(1 + s, 1 + t), L(-1, 0)), wad(L(1, 1), L(-1 + s, t)), wad(Lb(1 + s, 1 + t), L(-1, 0)), wad(L(1, 1), Lb(-1 + s, t))]
    if (s, t) == (0, 0):
        return [wad(L(1, 0), h(-1, 1)), wad(L(1, 0), hb(-1, 1)), wad(L(0, 0), h(0, 1)), wad(L(0, 0), hb(0, 1))]
    if s + 2 * t:
        return [wad(h(1 + s, t), L(-1, 1)), wad(hb(1 + s, t), L(-1, 1)), wad(L(1, 0), h(-1 + s, 1 + t)), wad(L(1, 0), hb(-1 + s, 1 + t))]
    return [wad(h(1 + s, 1 + t), L(-1, 0)), wad(hb(1 + s, 1 + t), L(-1, 0)), wad(L(1, 1), h(-1 + s, t)), wad(L(1, 1), hb(-1 + s, t))]


def extra_derivations(parity: int, s: int, t: int) -> list:
    """Index-preserving outer derivations missing from the claimed (0, 0) lists."""
    _check_degree(parity, s, t)
    if (s, t) != (0, 0):
        return []
    if parity == 0:
        return [family_map(0, [("h", "hbar", 1)], "psi1"), family_map(0, [("hbar", "h", 1)], "psi2")]
    return [
        family_map(1, [("h", "Lbar", 1)], "chi1"),
        family_map(1, [("hbar", "Lbar", 1)], "chi2"),
        family_map(1, [("Lbar", "hbar", -1), ("h", "L", 1)], "chi3"),
        family_map(1, [("Lbar", "h", 1), ("hbar", "L", 1)], "chi4"),
    ]


def inner_derivations(parity: int, s: int, t: int, reach: int = 3) -> list:
    """``ad(a ^ b)`` of degree (s, t) over canonical wedges with ``|m| <= reach``."""
    _check_degree(parity, s, t)
    gens = [g for g in window_generators(reach, t + 1)]
    out = []
    for a, b in itertools.combinations_with_replacement(gens, 2):
        if a.m + b.m != s or a.i + b.i - 1 != t or (a.parity + b.parity) % 2 != parity:
            continue
        norm = wedge_normalize(W, (a, b))
        if norm is None or norm[0] != (a, b):
            continue
        out.append(wad(a, b))
    return out


def _probe_instances(trunc: WTruncation, probe, patterns: str):
    pm, pi = probe
    P = [g for g in trunc.gens if abs(g.m) <= pm and g.i <= pi]
    wedges = []
    for x in itertools.combinations_with_replacement(P, 2):
        norm = wedge_normalize(W, x)
        if norm is not None and norm[0] == x:
            wedges.append(x)
    for x in wedges:
        for z in trunc.gens:
            if patterns == "nonzero":
                fams = tuple(g.family for g in sorted((*x, z), key=wkey))
                if fams not in NONZERO_PATTERNS:
                    continue
            yield ((x,), z)


@dataclass
class DerivationSolution:
    parity: int
    s: int
    t: int
    window: Window
    dimension: int
    exact: bool
    basis: list
    claimed: list
    claimed_solves: list
    claimed_rank: int
    claimed_spans: bool
    claimed_coordinates: list
    spaces: WindowedSpaces
    patterns: str = "all"
    notes: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "parity": "odd" if self.parity else "even",
            "bidegree": [self.s, self.t],
            "window": [self.window.M, self.window.I, self.window.r],
            "patterns": self.patterns,
            "dimension": self.dimension,
            "exact": self.exact,
            "claimed_count": len(self.claimed),
            "claimed_rank": self.claimed_rank,
            "claimed_solve_system": all(self.claimed_solves),
            "claimed_spans": self.claimed_spans,
            "unknowns": len(self.spaces.coordinates),
            "interior_unknowns": len(self.spaces.interior),
            "equations": self.spaces.equations,
            "notes": list(self.notes) + list(self.spaces.notes),
        }


def _vector_map(vec: dict, parity: int, name: str) -> LinearMap:
    table: dict = {}
    for (_, z, v), c in vec.items():
        table.setdefault(z, {})[v.base] = c
    return LinearMap(parity, lambda g: table.get(g, {}), name)


def solve_derivations(parity: int, s: int, t: int, window: Window = Window(8, 5, 2), *, probe=(1, 1), patterns: str = "all", cap: int = 10**6) -> DerivationSolution:
    """Windowed degree-(s, t) derivations as adjoint 1-cocycles.

    Equations are the derivation identities with the wedge drawn from generators
    with ``|m| <= probe[0]``, ``i <= probe[1]`` and the third argument anywhere in
    the window (``patterns="nonzero"`` keeps only the five nonzero bracket patterns).
    The resulting dimension is an upper bound; it is certified exact when known
    derivations (claimed, outer and inner ones) fill it.
    """
    _check_degree(parity, s, t)
    if patterns not in ("all", "nonzero"):
        raise ValueError("patterns must be 'all' or 'nonzero'")
    try:
        window.check_interior()
    except EmptyInterior as exc:
        raise WindowError("window too small: empty interior") from exc
    trunc = WTruncation(ADJOINT, window, (s, t))
    claimed = claimed_derivation_basis(parity, s, t)
    known = [cochain_from_map(D, ADJOINT, (s, t)) for D in claimed + extra_derivations(parity, s, t) + inner_derivations(parity, s, t)]
    try:
        sp = windowed_spaces(1, parity, trunc, bidegree=(s, t), cap=cap, instances=_probe_instances(trunc, probe, patterns), known=known)
    except EmptyInterior as exc:
        raise WindowError(f"window too small: {exc}") from exc
    interior = sp.interior
    order = {c: j for j, c in enumerate(interior)}
    cvecs = [cochain_vector(known[j], interior) for j in range(len(claimed))]
    crank_e = Echelon(order)
    for v in cvecs:
        crank_e.add(v)
    if crank_e.rank < len(claimed):
        raise WindowError(f"window too small: claimed basis has rank {crank_e.rank} < {len(claimed)} on the interior")
    full = Echelon({c: j for j, c in enumerate(sp.coordinates)})
    for v in sp.cocycle_basis:
        full.add(v)
    solves = [not full.reduce(cochain_vector(k, sp.coordinates)) for k in known[: len(claimed)]]
    basis_vecs = sp.interior_cocycle_basis
    coords = [in_span(v, basis_vecs) for v in cvecs]
    spans = crank_e.rank == len(basis_vecs) and all(c is not None for c in coords)
    basis = [_vector_map(v, parity, f"z{j}") for j, v in enumerate(basis_vecs)]
    notes = []
    if not sp.exact:
        notes.append("known derivations do not fill the probe bound; dimension is an upper bound")
    return DerivationSolution(parity, s, t, window, len(basis_vecs), sp.exact, basis, claimed, solves, crank_e.rank, spans, coords, sp, patterns, notes)


def derivation_samples(count: int, seed: int = 0, M: int = 20, I: int = 6) -> list:
    rng = random.Random(seed)
    return [tuple(W.sample_generator(rng, M, I) for _ in range(3)) for _ in range(count)]


@dataclass
class Decomposition:
    coordinates: list | None
    names: list
    residual: Report

    @property
    def ok(self) -> bool:
        return self.coordinates is not None and self.residual.ok


def decompose_derivation(D: LinearMap, parity: int, s: int, t: int, *, samples: int = 500, seed: int = 0, test_window=(4, 3)) -> Decomposition:
    """Coordinates of ``D`` in the claimed basis.

    Coordinates come from an exact solve on the images of the generators in
    ``test_window``; the residual ``D - sum c_j b_j`` is then checked on random
    generators.  A decomposition that fails either step carries a witness.
    """
    basis = claimed_derivation_basis(parity, s, t)
    names = [b.name for b in basis]
    met = Report("decomposition residual")
    gens = window_generators(*test_window)

    def vec(F):
        out = {}
        for g in gens:
            for y, c in F.on_gen(g).items():
                if c:
                    out[(g, y)] = c
        return out

    coords = in_span(vec(D), [vec(b) for b in basis])
    if coords is None:
        met.violations.append({"reason": "not in the span of the claimed basis on test generators", "D": D.name})
        return Decomposition(None, names, met)
    resid = D
    for c, b in zip(coords, basis):
        if c:
            resid = resid - (c * b)
    rng = random.Random(seed)
    for _ in range(samples):
        g = W.sample_generator(rng)
        met.samples += 1
        val = {y: c for y, c in resid.on_gen(g).items() if c}
        if val:
            met.violations.append({"generator": g, "residual": val})
    return Decomposition(coords, names, met)


def outside_inner_span(D: LinearMap, window: Window = Window(8, 5, 2), parity: int = 0, s: int = 0, t: int = 0) -> bool:
    """True when ``D`` restricted to the interior is not a combination of the claimed inner derivations."""
    trunc = WTruncation(ADJOINT, window, (s, t))
    from .cohomology import _is_interior, enumerate_coordinates

    coords = [c for c in enumerate_coordinates(trunc, 0, parity) if _is_interior(trunc, c)]
    inner_maps = [b for b in claimed_derivation_basis(parity, s, t) if b.name.startswith("ad(")]
    basis = [cochain_vector(cochain_from_map(b, ADJOINT), coords) for b in inner_maps]
    return in_span(cochain_vector(cochain_from_map(D, ADJOINT), coords), basis) is None


def eigen_report(x: tuple, weight, samples: Iterable[WGen]) -> Report:
    """Check ``ad(x) g = weight(g) g`` on generators."""
    rep = Report(f"ad{x!r} diagonal")
    for g in samples:
        rep.samples += 1
        got = {y: c for y, c in w_bracket(*x, g).items() if c}
        want = {g: weight(g)} if weight(g) else {}
        if got:
            rep.nontrivial += 1
        if got != want:
            rep.violations.append({"generator": g, "got": got, "want": want})
    return rep


def euler_weight(g: WGen) -> int:
    return -g.m


def x_weight(g: WGen) -> int:
    return -(g.m + 1 - 2 * g.i)


# -- second cohomology -----------------------------------------------------------
#
# For a wedge x_h with ad(x_h) diagonal, a 1-slot cochain f of bidegree (s, t)
# satisfies  delta f(x_h, x, z) = lam * f(x, z) - delta u(x, z)  with
# u = f(x_h, .) and lam the eigenvalue of the sector.  A cocycle is therefore
# delta(u / lam) wherever the instance (x_h, x, z) is a window equation.

from .cohomology import (  # noqa: E402
    Cochain,
    SystemTooLarge,
    _coord_key,
    _is_interior,
    _wedges,
    coboundary_rows,
    delta,
)
from .exact_core import KernelSolver, LinearForm, solve_linear  # noqa: E402

_AFFINE = {"E": (-1, 0, 0), "X": (-1, 2, -1)}  # weight a*m + b*i + c
_ELEMENTS = {"E": euler_element, "X": x_element}


class NoHomotopy(ValueError):
    """The sector has no diagonal homotopy with nonzero eigenvalue."""


def sector_eigenvalue(rep, name: str, s: int, t: int) -> int:
    a, b, c = _AFFINE[name]
    if rep.trivial:
        return -(-a * s + b * (1 - t) + 3 * c)
    return a * s + b * (t - 1) - 2 * c


def homotopy_for(rep, s: int, t: int):
    """``(name, wedge, lam)`` for the preferred homotopy of the sector, or None."""
    prefs = ("X", "E") if rep.trivial else ("E", "X")
    for name in prefs:
        lam = sector_eigenvalue(rep, name, s, t)
        if lam:
            return name, _ELEMENTS[name](), lam
    return None


def homotopy_valid(rep, s: int, t: int, window: Window) -> bool:
    """Every homotopy instance on interior coordinates stays inside the window."""
    return rep.trivial or (abs(s) <= window.r and 0 <= t <= window.r)


def interior_cells(window: Window) -> list:
    Mi, Ii = window.M - window.r, window.I - window.r
    return [(m, i) for i in range(Ii + 1) for m in range(-Mi, Mi + 1)]


def cell_coordinates(trunc: WTruncation, parity: int, cell=None) -> list:
    """Interior coordinates of a 1-slot cochain whose output index is ``cell``.

    For the trivial module every coordinate has output index (0, 0) and ``cell``
    is ignored.
    """
    gens = [g for g in trunc.gens if trunc.interior(g)]
    by_index: dict = {}
    for g in gens:
        by_index.setdefault((g.m, g.i), []).append(g)
    s, t = trunc.s, trunc.t
    cm, ci = (0, 0) if trunc.rep.trivial or cell is None else cell
    coords = []
    for x in _wedges(W, gens):
        a, b = x
        target = (cm - s - a.m - b.m, ci - t + 1 - a.i - b.i)
        for z in by_index.get(target, ()):
            try:
                outs = trunc.outputs([a, b, z], 1, parity)
            except OutOfWindow:
                continue
            for v in outs:
                c = ((x,), z, v)
                if _is_interior(trunc, c):
                    coords.append(c)
    coords.sort(key=lambda c: _coord_key(trunc.rep, c))
    return coords


def _registry_cochain(trunc: WTruncation, parity: int, registry: set, x_h: tuple, bidegree) -> Cochain:
    """Symbolic 1-slot cochain on ``registry`` plus every window value of ``f(x_h, .)``."""
    inw = trunc.in_window

    def func(xs, z):
        if not inw(z):
            raise OutOfWindow
        x = xs[0]
        outs = trunc.outputs([x[0], x[1], z], 1, parity)
        res = {}
        for v in outs:
            key = (xs, z, v)
            if x != x_h and key not in registry:
                raise OutOfWindow
            res[v] = LinearForm({key: 1})
        return res

    return Cochain(1, parity, trunc.rep, func, bidegree, "unknowns")


@dataclass
class CellSystem:
    """Homotopy equations of one output cell and their solution space."""

    rep_name: str
    parity: int
    bidegree: tuple
    cell: tuple | None
    homotopy: str
    lam: int
    coordinates: list
    u_coordinates: list
    cocycles: list
    equations: int
    skipped: int

    def symbolic(self, rep) -> Cochain:
        """The general solution: each value is a linear form in the free ``u`` coordinates."""
        table: dict = {}
        for j, vec in enumerate(self.cocycles):
            free = self._free[j]
            for (xs, z, v), c in vec.items():
                slot = table.setdefault((xs, z), {})
                slot[v] = slot.get(v, LinearForm()) + LinearForm({free: c})
        return _table_cochain(1, self.parity, rep, table, self.bidegree, "cell cocycle")

    def sample(self, rep, rng: random.Random, size: int = 5) -> Cochain:
        """A random member of the solution space, coefficients in ``[-size, size]``."""
        table: dict = {}
        for vec in self.cocycles:
            c = rng.randint(-size, size)
            if not c:
                continue
            for (xs, z, v), x in vec.items():
                slot = table.setdefault((xs, z), {})
                slot[v] = slot.get(v, 0) + c * x
        table = {k: {v: x for v, x in val.items() if x} for k, val in table.items()}
        return _table_cochain(1, self.parity, rep, {k: val for k, val in table.items() if val}, self.bidegree, "sampled cocycle")


def _table_cochain(k, parity, rep, table, bidegree, name):
    def func(xs, z):
        return table.get((xs, z), {})

    f = Cochain(k, parity, rep, func, bidegree, name)
    f.table = table
    return f


def cell_system(rep, parity: int, s: int, t: int, window: Window, cell=None) -> CellSystem:
    """Solve the homotopy equations on the interior coordinates of one output cell."""
    hom = homotopy_for(rep, s, t)
    if hom is None:
        raise NoHomotopy(f"no diagonal homotopy with nonzero eigenvalue at bidegree ({s}, {t})")
    name, x_h, lam = hom
    if not homotopy_valid(rep, s, t, window):
        raise WindowError(f"homotopy needs |s| <= r and t <= r (window margin {window.r})")
    trunc = WTruncation(rep, window, (s, t))
    coords = cell_coordinates(trunc, parity, cell)
    registry = set(coords)
    F = _registry_cochain(trunc, parity, registry, x_h, (s, t))
    dF = delta(F)
    rows = []
    skipped = 0
    seen = set()
    for xs, z, _ in coords:
        if (xs, z) in seen:
            continue
        seen.add((xs, z))
        try:
            val = dF.func((x_h, xs[0]), z)
        except OutOfWindow:
            skipped += 1
            continue
        rows.extend(r for r in val.values() if r)
    ucols = sorted({k for r in rows for k in r if k not in registry}, key=lambda c: _coord_key(rep, c))
    solver = KernelSolver(coords + ucols)
    for r in rows:
        solver.add(r)
    kernel = solver.kernel()
    sysm = CellSystem(rep.name, parity, (s, t), cell, name, lam, coords, ucols, kernel, len(rows), skipped)
    pos = {c: j for j, c in enumerate(solver.columns)}
    sysm._free = [max(vec, key=pos.__getitem__) for vec in kernel]
    return sysm


def homotopy_identity_report(rep, parity: int, s: int, t: int, window: Window, samples: int = 200, seed: int = 0) -> Report:
    """Check ``delta f(x_h, x, z) = lam f(x, z) - delta u(x, z)`` for a fully symbolic f."""
    hom = homotopy_for(rep, s, t)
    rep_out = Report("homotopy identity")
    if hom is None:
        rep_out.violations.append({"reason": "no homotopy"})
        return rep_out
    _, x_h, lam = hom
    trunc = WTruncation(rep, window, (s, t))
    from .cohomology import _symbolic

    F = _symbolic(trunc, 1, parity, (s, t))
    U = Cochain(0, parity, rep, lambda xs, z: F.func((x_h,), z), (s, t))
    dF, dU = delta(F), delta(U)
    rng = random.Random(seed)
    gens = [g for g in trunc.gens if trunc.interior(g)]
    tries = 0
    while rep_out.samples < samples and tries < 50 * samples:
        tries += 1
        a, b, z = rng.choice(gens), rng.choice(gens), rng.choice(gens)
        if rep.trivial:
            z = WGen(z.family, -s - a.m - b.m, 1 - t - a.i - b.i)
            if not trunc.interior(z) or z.i < 0:
                continue
        x = wedge_normalize(W, (a, b))
        if x is None:
            continue
        x1 = x[0]
        try:
            outs = trunc.outputs([*x1, z], 1, parity)
            if not outs or not all(trunc.output_interior(v) for v in outs):
                continue
            lhs = dF.func((x_h, x1), z)
            base = F.func((x1,), z)
            du = dU.func((x1,), z)
        except OutOfWindow:
            continue
        rep_out.samples += 1
        for v in set(lhs) | set(base) | set(du):
            want = lam * base.get(v, LinearForm()) - du.get(v, LinearForm())
            got = lhs.get(v, LinearForm())
            if got != want:
                rep_out.violations.append({"x": x1, "z": z, "v": v})
                break
        else:
            rep_out.nontrivial += 1
    return rep_out


# -- trivializers ----------------------------------------------------------------

@dataclass
class Trivialization:
    g: Cochain | None
    path: str
    residual: Report
    recipe_failures: int
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.g is not None and self.residual.ok

    def summary(self) -> dict:
        return {"path": self.path, "checked": self.residual.samples, "residual_violations": len(self.residual.violations), "recipe_failures": self.recipe_failures, "notes": list(self.notes)}


def _is_zero(x) -> bool:
    return not x


def _residual(f: Cochain, g: Cochain, coords: Sequence, name: str) -> Report:
    rep = Report(name)
    dg = delta(g)
    fv = f.func
    for c in coords:
        xs, z, v = c
        rep.samples += 1
        try:
            got = dg.func(xs, z).get(v, 0)
        except OutOfWindow:
            rep.violations.append({"coordinate": c, "reason": "g needed outside the window"})
            continue
        want = fv(xs, z).get(v, 0)
        diff = got - want if isinstance(got, LinearForm) or not isinstance(want, LinearForm) else -(want - got)
        if not _is_zero(diff):
            rep.violations.append({"coordinate": c, "delta_g": got, "f": want})
    return rep


def _parameters(f: Cochain, coords) -> list:
    keys = set()
    for xs, z, v in coords:
        val = f.func(xs, z).get(v, 0)
        if isinstance(val, LinearForm):
            keys.update(val)
    return sorted(keys, key=repr)


def _fallback(f: Cochain, trunc: WTruncation, coords: Sequence, cap: int):
    """Solve ``delta g = f`` on ``coords``; symbolic f is solved parameter by parameter."""
    rows = coboundary_rows(trunc, 1, f.parity, coords, trunc_bidegree(trunc))
    unknowns = {k for r in rows.values() for k in r}
    if len(unknowns) > cap:
        raise SystemTooLarge(f"fallback needs {len(unknowns)} unknowns (cap {cap})")
    params = _parameters(f, coords)

    def rhs(c, p):
        val = f.func(c[0], c[1]).get(c[2], 0)
        if p is None:
            return val
        return val.get(p, 0) if isinstance(val, LinearForm) else 0

    sols = {}
    for p in params or [None]:
        sol = solve_linear([(rows[c], rhs(c, p)) for c in coords if c in rows])
        if sol is None:
            return None
        sols[p] = sol
    table: dict = {}
    for p, sol in sols.items():
        for (xs, z, v), c in sol.items():
            slot = table.setdefault((xs, z), {})
            if p is None:
                slot[v] = slot.get(v, 0) + c
            else:
                slot[v] = slot.get(v, LinearForm()) + LinearForm({p: c})
    return _table_cochain(0, f.parity, f.rep, table, trunc_bidegree(trunc), "fallback primitive")


def trunc_bidegree(trunc: WTruncation) -> tuple:
    return (trunc.s, trunc.t)


def _trivialize(f: Cochain, recipe: Cochain, trunc: WTruncation, coords, fallback: bool, cap: int) -> Trivialization:
    res = _residual(f, recipe, coords, "recipe residual")
    if res.ok:
        return Trivialization(recipe, "recipe", res, 0)
    fails = len(res.violations)
    notes = [f"recipe failed on {fails} of {res.samples} coordinates"]
    if not fallback:
        return Trivialization(None, "failed", res, fails, notes)
    g = _fallback(f, trunc, coords, cap)
    if g is None:
        notes.append("fallback system infeasible: cocycle not a coboundary on these coordinates")
        return Trivialization(None, "failed", res, fails, notes)
    res2 = _residual(f, g, coords, "fallback residual")
    return Trivialization(g, "fallback", res2, fails, notes)


def _default_coords(f: Cochain, trunc: WTruncation, cap: int) -> list:
    from .cohomology import enumerate_coordinates

    return [c for c in enumerate_coordinates(trunc, 1, f.parity, cap) if _is_interior(trunc, c)]


def _scaled_values(vals: dict, c) -> dict:
    return {v: w * c for v, w in vals.items() if not _is_zero(w)}


def trivial_recipe(f: Cochain) -> Cochain:
    """``g(X_k^h) = -(1/k) f(L_1^1 ^ L_{-1}^0, X_k^h)`` and ``g(X_0^h) = 0``."""
    x = (L(1, 1), L(-1, 0))

    def func(xs, z):
        if z.m == 0:
            return {}
        return _scaled_values(f([x], z), Fraction(-1, z.m))

    return Cochain(0, f.parity, f.rep, func, f.bidegree, "trivial recipe")


def adjoint_recipe(f: Cochain, s: int) -> Cochain:
    """``-(1/s) f(L_0^0 ^ L_0^1, .)`` for ``s != 0``, else ``-(1/2) f(L_1^1 ^ L_{-1}^0, .)``."""
    if s:
        x, c = (L(0, 0), L(0, 1)), Fraction(-1, s)
    else:
        x, c = (L(1, 1), L(-1, 0)), Fraction(-1, 2)
    return Cochain(0, f.parity, f.rep, lambda xs, z: _scaled_values(f([x], z), c), f.bidegree, "adjoint recipe")


def trivialize_trivial_2cocycle(f: Cochain, window: Window, *, bidegree=None, coords=None, fallback: bool = True, cap: int = 20_000) -> Trivialization:
    """Find g with ``delta g = f`` on the interior, trying the closed-form recipe first."""
    if not f.rep.trivial:
        raise ValueError("expected a cochain with trivial coefficients")
    s, t = bidegree or f.bidegree or (0, 0)
    trunc = WTruncation(f.rep, window, (s, t))
    coords = _default_coords(f, trunc, cap * 50) if coords is None else list(coords)
    return _trivialize(f, trivial_recipe(f), trunc, coords, fallback, cap)


def trivialize_adjoint_2cocycle(f: Cochain, s: int, window: Window, *, t: int | None = None, coords=None, fallback: bool = True, cap: int = 20_000) -> Trivialization:
    """As :func:`trivialize_trivial_2cocycle` for adjoint coefficients of bidegree (s, t)."""
    if f.rep.trivial:
        raise ValueError("expected a cochain with adjoint coefficients")
    if t is None:
        t = f.bidegree[1] if f.bidegree else 0
    trunc = WTruncation(f.rep, window, (s, t))
    coords = _default_coords(f, trunc, cap * 50) if coords is None else list(coords)
    return _trivialize(f, adjoint_recipe(f, s), trunc, coords, fallback, cap)


# -- sector driver ---------------------------------------------------------------

_WEIGHTS = {"E": euler_weight, "X": x_weight}


@dataclass
class H2Report:
    rep_name: str
    parity: int
    bidegree: tuple
    window: Window
    method: str
    homotopy: str | None = None
    lam: int | None = None
    checks: list = field(default_factory=list)
    cells: list = field(default_factory=list)
    coverage: str = ""
    interior_h_dim: int | None = None
    trivialized: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.interior_h_dim == 0 and self.trivialized

    def summary(self) -> dict:
        return {
            "coeffs": self.rep_name,
            "parity": "odd" if self.parity else "even",
            "bidegree": list(self.bidegree),
            "window": [self.window.M, self.window.I, self.window.r],
            "method": self.method,
            "homotopy": self.homotopy,
            "eigenvalue": self.lam,
            "checks": [c.summary() for c in self.checks],
            "cells": self.cells,
            "coverage": self.coverage,
            "interior_h_dim": self.interior_h_dim,
            "trivialized": self.trivialized,
            "error": self.error,
        }


def default_cells(rep, window: Window) -> list:
    if rep.trivial:
        return [None]
    Mi, Ii = window.M - window.r, window.I - window.r
    return [(0, min(1, Ii)), (Mi, Ii)]


def _trivializer(rep, f, s, t, window, coords, cap):
    if rep.trivial:
        return trivialize_trivial_2cocycle(f, window, bidegree=(s, t), coords=coords, cap=cap)
    return trivialize_adjoint_2cocycle(f, s, window, t=t, coords=coords, cap=cap)


def second_cohomology(rep, parity: int, s: int, t: int, window: Window, *, cells=None, identity_samples: int = 200, seed: int = 0, cap: int = 50_000) -> H2Report:
    """Interior H^2 of one sector, with every produced cocycle trivialized.

    With a diagonal homotopy the cocycles of each requested output cell are
    solved exactly and trivialized there; the homotopy identity and the
    diagonality of ``ad(x_h)`` are checked separately, and together they cover the
    remaining cells.  Without one, the full windowed system is solved (subject to
    ``cap``).
    """
    _check_degree(parity, s, t)
    window.check_interior()
    out = H2Report(rep.name, parity, (s, t), window, "homotopy-cells")
    hom = homotopy_for(rep, s, t)
    if hom is None or not homotopy_valid(rep, s, t, window):
        out.method = "full"
        trunc = WTruncation(rep, window, (s, t))
        try:
            sp = windowed_spaces(2, parity, trunc, bidegree=(s, t), cap=cap)
        except SystemTooLarge as exc:
            out.error = f"system too large: {exc}"
            return out
        out.interior_h_dim = sp.interior_h_dim
        ok = True
        for vec in sp.cocycle_basis:
            f = sp.as_cochain(vec, rep, (s, t))
            tr = _trivializer(rep, f, s, t, window, sp.interior, cap)
            ok = ok and tr.ok
            out.cells.append(tr.summary())
        out.trivialized = ok
        out.coverage = "all interior coordinates"
        return out
    name, x_h, lam = hom
    out.homotopy, out.lam = name, lam
    trunc = WTruncation(rep, window, (s, t))
    eig = eigen_report(x_h, _WEIGHTS[name], trunc.gens)
    ident = homotopy_identity_report(rep, parity, s, t, window, identity_samples, seed)
    out.checks = [eig, ident]
    cells = default_cells(rep, window) if cells is None else list(cells)
    ok = True
    for cell in cells:
        cs = cell_system(rep, parity, s, t, window, cell)
        f = cs.symbolic(rep)
        tr = _trivializer(rep, f, s, t, window, cs.coordinates, cap)
        ok = ok and tr.ok
        out.cells.append({"cell": cell, "coordinates": len(cs.coordinates), "cocycle_dim": len(cs.cocycles), "equations": cs.equations, **tr.summary()})
    out.trivialized = ok
    if rep.trivial:
        out.coverage = "all interior coordinates"
    else:
        out.coverage = f"{len(cells)} of {len(interior_cells(window))} output cells solved; the rest by the homotopy identity"
    out.interior_h_dim = 0 if ok and eig.ok and ident.ok else None
    return out


# -- Z^1 against derivations -------------------------------------------------------

class _Outside(Exception):
    pass


def _derivation_rows(Dsym: dict, parity: int, a: WGen, b: WGen, z: WGen) -> list:
    """Rows of ``D[a,b,z] - sum (-1)^(p|prefix|) [.., D arg, ..]`` for symbolic ``D``."""

    def Dg(g):
        if g not in Dsym:
            raise _Outside
        return Dsym[g]

    out: dict = {}
    for g, c in bracket_gens(W, (a, b, z)).items():
        for v, form in Dg(g).items():
            out[v] = out.get(v, 0) + form * c
    args = (a, b, z)
    pre = 0
    for k in range(3):
        sign = -1 if (parity * pre) % 2 else 1
        for g, form in Dg(args[k]).items():
            for w, c in bracket_gens(W, args[:k] + (g,) + args[k + 1:]).items():
                out[w] = out.get(w, 0) - form * (sign * c)
        pre += args[k].parity
    return [r for r in out.values() if r]


def _same_span(us: list, vs: list, order: dict) -> bool:
    e = Echelon(order)
    for v in us:
        e.add(v)
    r = e.rank
    return all(not e.reduce(v) for v in vs) and r == len(canonical_basis(vs, list(order)))


def z1_versus_derivations(parity: int, s: int, t: int, window: Window = Window(6, 3, 2), *, cap: int = 10**6) -> dict:
    """Windowed adjoint ``Z^1`` (through ``delta``) against the derivation identity.

    Both systems use every window instance whose equation stays inside the
    window; the derivation side is assembled from brackets directly, so the
    comparison tests the coboundary signs on 0-slot cochains.
    """
    _check_degree(parity, s, t)
    trunc = WTruncation(ADJOINT, window, (s, t))
    z1 = windowed_spaces(1, parity, trunc, bidegree=(s, t), cap=cap)
    coords = z1.coordinates
    Dsym: dict = {}
    for c in coords:
        _, z, v = c
        Dsym.setdefault(z, {})[v.base] = LinearForm({c: 1})
    solver = KernelSolver(coords)
    wedges = _wedges_of(trunc)
    eqs = 0
    for (x,), z in trunc.instances(1, parity, wedges):
        try:
            rows = _derivation_rows(Dsym, parity, x[0], x[1], z)
        except _Outside:
            continue
        for r in rows:
            eqs += 1
            solver.add(r)
    der = solver.kernel()
    order = {c: j for j, c in enumerate(coords)}
    interior = set(z1.interior)
    der_int = canonical_basis([{c: v for c, v in vec.items() if c in interior} for vec in der], z1.interior)
    io = {c: j for j, c in enumerate(z1.interior)}
    return {
        "parity": "odd" if parity else "even",
        "bidegree": [s, t],
        "window": [window.M, window.I, window.r],
        "unknowns": len(coords),
        "z1_equations": z1.equations,
        "derivation_equations": eqs,
        "z1_dim": len(z1.cocycle_basis),
        "derivation_dim": len(der),
        "interior_z1_dim": len(z1.interior_cocycle_basis),
        "interior_derivation_dim": len(der_int),
        "same_span": _same_span(z1.cocycle_basis, der, order) and _same_span(z1.interior_cocycle_basis, der_int, io),
    }


def _wedges_of(trunc: WTruncation) -> list:
    out = []
    for x in itertools.combinations_with_replacement(trunc.gens, 2):
        norm = wedge_normalize(W, x)
        if norm is not None and norm[0] == x:
            out.append(x)
    return out
