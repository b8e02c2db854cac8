"""Exact rational scalars and sparse linear algebra over Q.

Vectors are plain dicts mapping a column key to a nonzero rational.  Column
keys are arbitrary hashable, totally ordered values (tuples in practice).
Internally elimination runs on ``gmpy2.mpq`` for speed; everything crossing
the public boundary is a :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import gmpy2

Rational = Fraction
SparseVector = dict
_ZERO = gmpy2.mpq(0)

__all__ = [
    "Rational",
    "SparseVector",
    "SparseMatrix",
    "Echelon",
    "as_rational",
    "clean",
    "axpy",
    "scale",
    "dot",
    "matvec",
    "nullspace",
    "rank",
    "in_span",
    "solve_linear",
    "canonical_basis",
    "LinearForm",
    "KernelSolver",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions, mpq and decimal strings such as ``"-3/4"``."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if type(x).__name__ == "mpq":
        return Fraction(int(x.numerator), int(x.denominator))
    if type(x).__name__ == "mpz":
        return Fraction(int(x))
    raise TypeError(f"not an exact rational: {x!r}")


def _to_mpq(x):
    if type(x).__name__ == "mpq":
        return x
    if isinstance(x, Fraction):
        return gmpy2.mpq(x.numerator, x.denominator)
    return gmpy2.mpq(x)


def _from_mpq(v: Mapping) -> dict:
    return {k: Fraction(int(c.numerator), int(c.denominator)) for k, c in v.items()}


def clean(v: Mapping) -> dict:
    """Copy of ``v`` with zero entries dropped."""
    return {k: c for k, c in v.items() if c}


def axpy(y: dict, a, x: Mapping) -> dict:
    """In place ``y += a*x``; keeps ``y`` free of zeros."""
    if not a:
        return y
    for k, c in x.items():
        nv = y.get(k, 0) + a * c
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)
    return y


def scale(a, x: Mapping) -> dict:
    if not a:
        return {}
    return {k: a * c for k, c in x.items()}


def dot(x: Mapping, y: Mapping):
    if len(x) > len(y):
        x, y = y, x
    return sum((c * y[k] for k, c in x.items() if k in y), 0)


class LinearForm(dict):
    """Formal combination of unknowns, usable wherever a scalar coefficient is.

    Supports addition with forms (and with 0) and scaling by exact scalars, which
    is all the operator code needs to assemble linear systems symbolically.
    """

    __slots__ = ()

    def __add__(self, other):
        if isinstance(other, LinearForm):
            out = LinearForm(self)
            for k, v in other.items():
                nv = out.get(k, 0) + v
                if nv:
                    out[k] = nv
                else:
                    del out[k]
            return out
        if isinstance(other, (int, Fraction)) and not other:
            return LinearForm(self)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({k: -v for k, v in self.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, LinearForm):
            raise TypeError("product of two linear forms is not linear")
        if not c:
            return LinearForm()
        return LinearForm({k: v * c for k, v in self.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (Fraction(1) / c)


class SparseMatrix:
    """Rows over a declared, totally ordered column universe."""

    __slots__ = ("rows", "columns")

    def __init__(self, rows: Iterable[Mapping], columns: Sequence[Hashable] | None = None):
        self.rows = [clean({k: as_rational(c) for k, c in r.items()}) for r in rows]
        if columns is None:
            columns = sorted({k for r in self.rows for k in r})
        self.columns = tuple(columns)
        known = set(self.columns)
        for r in self.rows:
            extra = set(r) - known
            if extra:
                raise ValueError(f"row uses undeclared columns {sorted(extra)[:3]}")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        width = len(rows[0]) if rows else 0
        return cls(({j: c for j, c in enumerate(r) if c} for r in rows), range(width))

    def __len__(self):
        return len(self.rows)


def matvec(m: SparseMatrix, v: Mapping) -> list:
    return [dot(r, v) for r in m.rows]


class Echelon:
    """Incremental row echelon form over Q.

    Each stored row is normalized to 1 at its pivot and contains no other pivot
    column introduced before it.  Rows are reduced on insertion, so ``add`` also
    answers span-membership questions cheaply.  Pivot choice is a heuristic
    (sparsest row wins, smallest column inside it); the canonical outputs are
    produced afterwards and do not depend on it.
    """

    def __init__(self, order: Mapping[Hashable, int] | None = None):
        self.piv: dict = {}
        self._order = order

    def __len__(self):
        return len(self.piv)

    @property
    def rank(self) -> int:
        return len(self.piv)

    def _pick(self, row):
        if self._order is None:
            return min(row)
        o = self._order
        return min(row, key=o.__getitem__)

    def reduce(self, row: Mapping) -> dict:
        piv = self.piv
        r = {k: _to_mpq(c) for k, c in row.items() if c}
        todo = [k for k in r if k in piv]
        while todo:
            c = todo.pop()
            f = r.get(c)
            if f is None:
                continue
            for k, v in piv[c].items():
                nv = r.get(k, _ZERO) - f * v
                if nv:
                    if k not in r and k in piv:
                        todo.append(k)
                    r[k] = nv
                else:
                    del r[k]
        return r

    def add(self, row: Mapping) -> bool:
        """Insert ``row``; return True iff it was independent of the stored rows."""
        r = self.reduce(row)
        if not r:
            return False
        c = self._pick(r)
        f = r[c]
        if f != 1:
            inv = 1 / f
            r = {k: v * inv for k, v in r.items()}
        self.piv[c] = r
        return True

    def extend(self, rows: Iterable[Mapping]) -> int:
        return sum(self.add(r) for r in rows)

    def back_substitute(self) -> dict:
        """Fully reduced rows: each contains exactly one pivot column."""
        piv = self.piv
        full: dict = {}

        def resolve(c):
            stack = [c]
            while stack:
                top = stack[-1]
                pending = [k for k in piv[top] if k != top and k in piv and k not in full]
                if pending:
                    stack.extend(pending)
                    continue
                stack.pop()
                if top in full:
                    continue
                r = dict(piv[top])
                for k in [k for k in r if k != top and k in piv]:
                    f = r.pop(k)
                    for kk, v in full[k].items():
                        if kk == k:
                            continue
                        nv = r.get(kk, _ZERO) - f * v
                        if nv:
                            r[kk] = nv
                        else:
                            r.pop(kk, None)
                full[top] = r

        for c in piv:
            if c not in full:
                resolve(c)
        return full

    def kernel(self, columns: Sequence[Hashable]) -> list:
        """Free-variable kernel basis with respect to the current pivots (mpq)."""
        full = self.back_substitute()
        users: dict = {}
        for pc, r in full.items():
            for k, v in r.items():
                if k != pc:
                    users.setdefault(k, []).append((pc, v))
        basis = []
        for fc in columns:
            if fc in self.piv:
                continue
            v = {fc: gmpy2.mpq(1)}
            for pc, coef in users.get(fc, ()):
                v[pc] = -coef
            basis.append(v)
        return basis


class KernelSolver:
    """Streaming exact kernel of a long, highly redundant row sequence.

    The state is a basis of the common kernel of the rows seen so far, starting
    from the unit vectors.  A row orthogonal to every basis vector lies in the
    span of earlier rows and costs only a few dot products; any other row
    eliminates one basis vector.
    """

    def __init__(self, columns: Sequence[Hashable]):
        self.columns = list(columns)
        self._K = {j: {c: gmpy2.mpq(1)} for j, c in enumerate(self.columns)}
        self._bycol = {c: {j} for j, c in enumerate(self.columns)}
        self.rank = 0
        self.rows_seen = 0

    def add(self, row: Mapping) -> bool:
        self.rows_seen += 1
        K, bycol = self._K, self._bycol
        acc: dict = {}
        for c, x in row.items():
            for j in bycol.get(c, ()):
                acc[j] = acc.get(j, 0) + x * K[j][c]
        acc = {j: _to_mpq(v) for j, v in acc.items() if v}
        if not acc:
            return False
        j0 = min(acc, key=lambda j: (len(K[j]), j))
        piv = K.pop(j0)
        a0 = acc.pop(j0)
        for c in piv:
            bycol[c].discard(j0)
        for j, aj in acc.items():
            f = aj / a0
            v = K[j]
            for c, y in piv.items():
                nv = v.get(c, _ZERO) - f * y
                if nv:
                    if c not in v:
                        bycol[c].add(j)
                    v[c] = nv
                else:
                    del v[c]
                    bycol[c].discard(j)
        self.rank += 1
        return True

    def kernel(self) -> list:
        """Canonical free-variable basis (Fractions)."""
        return canonical_basis(list(self._K.values()), self.columns, reverse=True)


def _column_order(columns: Sequence[Hashable]) -> dict:
    return {k: j for j, k in enumerate(columns)}


def canonical_basis(vectors: Iterable[Mapping], columns: Sequence[Hashable], *, reverse: bool = False) -> list:
    """Reduced echelon basis of the span of ``vectors``.

    With ``reverse=False`` pivots are the smallest columns (row RREF).  With
    ``reverse=True`` pivots are the largest columns; applied to a kernel this
    reproduces the textbook free-variable basis of the matrix RREF.
    """
    order = _column_order(columns)
    if reverse:
        n = len(columns)
        order = {k: n - j for k, j in order.items()}
    e = Echelon(order)
    for v in vectors:
        e.add(v)
    full = e.back_substitute()
    out = sorted(full.items(), key=lambda kv: order[kv[0]])
    if reverse:
        out.reverse()
    return [_from_mpq(r) for _, r in out]


def nullspace(m: SparseMatrix | Sequence[Mapping], columns: Sequence[Hashable] | None = None) -> list:
    """Kernel basis, deterministic in the column order.

    Each basis vector has a 1 in one free column and 0 in every other free
    column, where free columns are those of the row-reduced form of ``m``.
    """
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix(m, columns)
    cols = m.columns
    order = _column_order(cols)
    e = Echelon(order)
    for r in sorted(m.rows, key=len):
        e.add(r)
    raw = e.kernel(cols)
    return canonical_basis(raw, cols, reverse=True)


def rank(m: SparseMatrix | Sequence[Mapping]) -> int:
    rows = m.rows if isinstance(m, SparseMatrix) else m
    e = Echelon()
    for r in sorted(rows, key=len):
        e.add(r)
    return e.rank


class _Tag(tuple):
    """Column key for combination bookkeeping; never chosen as a pivot."""


def in_span(v: Mapping, basis: Sequence[Mapping]) -> list | None:
    """Coordinates ``c`` with ``sum(c[j]*basis[j]) == v`` or None when v is outside the span.

    Coordinates are unique when the basis is independent; otherwise a free
    choice is fixed to zero.
    """
    sol = solve_linear(_span_equations(v, basis), [j for j in range(len(basis))])
    if sol is None:
        return None
    return [sol.get(j, Fraction(0)) for j in range(len(basis))]


def _span_equations(v, basis):
    keys = set(v)
    for b in basis:
        keys.update(b)
    eqs = []
    for k in sorted(keys, key=repr):
        row = {j: b[k] for j, b in enumerate(basis) if k in b}
        rhs = v.get(k, 0)
        if row or rhs:
            eqs.append((row, rhs))
    return eqs


_RHS = _Tag(("rhs",))


def solve_linear(equations: Iterable[tuple[Mapping, object]], columns: Sequence[Hashable] | None = None) -> dict | None:
    """One solution of the system ``row . x = rhs`` (free unknowns set to 0), or None if inconsistent."""
    e = Echelon(None)
    order = _column_order(columns) if columns is not None else None

    def pick(row):
        cand = [k for k in row if k is not _RHS]
        if not cand:
            return _RHS
        if order is None:
            return min(cand)
        return min(cand, key=order.__getitem__)

    e._pick = pick
    rows = []
    for row, rhs in equations:
        r = {k: c for k, c in row.items() if c}
        if rhs:
            r[_RHS] = -_to_mpq(rhs if type(rhs).__name__ == "mpq" else as_rational(rhs))
        if r:
            rows.append(r)
    for r in sorted(rows, key=len):
        if not e.add(r):
            continue
        if _RHS in e.piv:
            return None
    full = e.back_substitute()
    sol = {}
    for pc, r in full.items():
        val = -r.get(_RHS, _ZERO)
        if val:
            sol[pc] = val
    return _from_mpq(sol)
