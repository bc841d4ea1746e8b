"""Exact arithmetic over the Gaussian rationals Q(i) and sparse linear algebra.

Scalars are stored as ``(a + b i) / d`` with integers ``a, b`` and ``d > 0`` in
lowest terms.  The linear algebra routines clear denominators and eliminate
over the Gaussian integers (fraction-free row operations followed by removal of
the integer content of each row), which keeps Python-int arithmetic on small
numbers in the inner loops.

Vectors handed around internally are plain ``dict[int, tuple[int, int]]``
("int rows"): a Gaussian-integer vector up to a nonzero scalar.  That is all
that matters when only spans are of interest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

__all__ = [
    "GaussianRational",
    "SparseMatrix",
    "Subspace",
    "SubspaceInclusionError",
    "rank",
    "kernel_basis",
    "image_basis",
    "solve",
    "subquotient_dim",
]


class GaussianRational:
    """Exact element ``re + im*i`` of Q(i)."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational) and im == 0:
            self._set(re._a, re._b, re._d)
            return
        re = Fraction(re)
        im = Fraction(im)
        d = lcm(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a, b, d):
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "_d", d)

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "GaussianRational":
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._set(a, b, d)
        return obj

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``"p/q"``, ``"p/qi"``, ``"p/q+p/qi"``, ``"i"``, ``"-i/2"`` ..."""
        return _parse_gaussian(text)

    @classmethod
    def from_json(cls, obj) -> "GaussianRational":
        if isinstance(obj, Mapping):
            try:
                return cls(Fraction(str(obj.get("re", "0"))), Fraction(str(obj.get("im", "0"))))
            except ZeroDivisionError:
                raise ValueError(f"zero denominator in {obj!r}") from None
        if isinstance(obj, str):
            return cls.parse(obj)
        if isinstance(obj, int):
            return cls(obj)
        raise ValueError(f"cannot read a Gaussian rational from {obj!r}")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def as_ints(self) -> tuple[int, int, int]:
        """Return ``(a, b, d)`` with value ``(a + b i) / d``."""
        return self._a, self._b, self._d

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self._a, -self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def __bool__(self):
        return not self.is_zero()

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d1, d2 = self._d, other._d
        if d1 == d2:
            return GaussianRational._make(self._a + other._a, self._b + other._b, d1)
        return GaussianRational._make(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self._a, -self._b, self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, e = self._a, self._b, other._a, other._b
        return GaussianRational._make(a * c - b * e, a * e + b * c, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        norm = a * a + b * b
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._make(d * a, -d * b, norm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def to_json(self) -> dict:
        return {"re": _fraction_str(self.re), "im": _fraction_str(self.im)}

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return _short(re)
        if im == 1:
            ims = "i"
        elif im == -1:
            ims = "-i"
        else:
            ims = f"{_short(im)}i"
        if re == 0:
            return ims
        sign = "" if ims.startswith("-") else "+"
        return f"{_short(re)}{sign}{ims}"

    def __repr__(self):
        return f"GaussianRational({str(self)!r})"


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _short(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_RAT = r"(?:\d+(?:/\d+)?)"
_TERM = re.compile(rf"([+-]?)({_RAT})?(i)?(?:/(\d+))?")


def _parse_gaussian(text: str) -> GaussianRational:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Gaussian rational")
    pos = 0
    re_part = Fraction(0)
    im_part = Fraction(0)
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse Gaussian rational {text!r} at column {pos + 1}")
        sign, rat, imag, trailing = m.groups()
        if rat is None and imag is None:
            raise ValueError(f"cannot parse Gaussian rational {text!r} at column {pos + 1}")
        if trailing is not None and (imag is None or (rat is not None and "/" in rat)):
            raise ValueError(f"cannot parse Gaussian rational {text!r} at column {pos + 1}")
        try:
            value = Fraction(rat) if rat is not None else Fraction(1)
            if trailing is not None:
                value /= int(trailing)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r} near column {pos + 1}") from None
        if sign == "-":
            value = -value
        if imag:
            im_part += value
        else:
            re_part += value
        pos = m.end()
    return GaussianRational(re_part, im_part)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# Gaussian-integer rows


def _to_int_row(vec: Mapping[int, GaussianRational]) -> dict[int, tuple[int, int]]:
    """Scale a Q(i) vector to a Gaussian-integer vector with the same span."""
    den = 1
    for v in vec.values():
        den = lcm(den, v._d)
    row = {}
    for c, v in vec.items():
        if v._a or v._b:
            f = den // v._d
            row[c] = (v._a * f, v._b * f)
    return row


def _content_reduce(row: dict) -> dict:
    g = 0
    for a, b in row.values():
        g = gcd(g, a, b)
        if g == 1:
            return row
    if g > 1:
        return {c: (a // g, b // g) for c, (a, b) in row.items()}
    return row


def _canonical(row: dict, pivot: int) -> dict:
    """Scale so the pivot entry is a positive integer and the row is primitive."""
    pa, pb = row[pivot]
    if pb != 0 or pa < 0:
        # multiply by conj(pivot)
        row = {c: (a * pa + b * pb, b * pa - a * pb) for c, (a, b) in row.items()}
    return _content_reduce(row)


def _eliminate(row: dict, prow: dict, col: int) -> dict:
    """Return ``P*row - alpha*prow`` killing ``row[col]``; ``prow[col] = (P, 0)``, P > 0."""
    P = prow[col][0]
    aa, ab = row[col]
    out = {}
    if P == 1:
        out = dict(row)
    else:
        for c, (a, b) in row.items():
            out[c] = (a * P, b * P)
    for c, (x, y) in prow.items():
        # alpha * prow[c]
        ma = aa * x - ab * y
        mb = aa * y + ab * x
        if c in out:
            a, b = out[c]
            a -= ma
            b -= mb
            if a or b:
                out[c] = (a, b)
            else:
                del out[c]
        else:
            out[c] = (-ma, -mb)
    out.pop(col, None)
    return _content_reduce(out)


def _reduce_full(row: dict, pivots: Mapping[int, dict]) -> dict:
    """Eliminate every pivot column of a reduced echelon set from ``row``."""
    hits = [c for c in row if c in pivots]
    while hits:
        for c in hits:
            if c in row:
                row = _eliminate(row, pivots[c], c)
        hits = [c for c in row if c in pivots]
    return row


def _echelon(rows: Iterable[dict]) -> dict[int, dict]:
    """Forward fraction-free elimination; pivot = first nonzero column."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                pivots[c] = _canonical(row, c)
                break
            row = _eliminate(row, prow, c)
    return pivots


def _rref(rows: Iterable[dict]) -> dict[int, dict]:
    """Reduced row echelon form as ``{pivot_col: canonical int row}``."""
    pivots = _echelon(rows)
    done: dict[int, dict] = {}
    for c in sorted(pivots, reverse=True):
        row = _reduce_full(pivots[c], done)
        done[c] = _canonical(row, c)
    return done


def _sorted_rows(pivots: Mapping[int, dict]) -> tuple:
    return tuple(tuple(sorted((c, a, b) for c, (a, b) in pivots[p].items())) for p in sorted(pivots))


# ---------------------------------------------------------------------------
# SparseMatrix


class SparseMatrix:
    """Sparse ``rows x cols`` matrix over Q(i); no stored zeros."""

    __slots__ = ("rows", "cols", "entries", "_by_row", "_by_col")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], GaussianRational] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            v = v if isinstance(v, GaussianRational) else GaussianRational(v)
            if v:
                clean[(r, c)] = v
        self.rows = rows
        self.cols = cols
        self.entries = clean
        self._by_row = None
        self._by_col = None

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for r, line in enumerate(data):
            if len(line) != cols:
                raise ValueError("ragged dense matrix")
            for c, v in enumerate(line):
                v = v if isinstance(v, GaussianRational) else GaussianRational(v)
                if v:
                    ent[(r, c)] = v
        return cls(rows, cols, ent)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_dense(self) -> list[list[GaussianRational]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, GaussianRational]]:
        if self._by_row is None:
            rows = [dict() for _ in range(self.rows)]
            for (r, c), v in self.entries.items():
                rows[r][c] = v
            object.__setattr__(self, "_by_row", rows)
        return self._by_row

    def col_dicts(self) -> list[dict[int, GaussianRational]]:
        if self._by_col is None:
            cols = [dict() for _ in range(self.cols)]
            for (r, c), v in self.entries.items():
                cols[c][r] = v
            object.__setattr__(self, "_by_col", cols)
        return self._by_col

    def int_rows(self) -> list[dict]:
        return [_to_int_row(r) for r in self.row_dicts()]

    def is_zero(self) -> bool:
        return not self.entries

    def nnz(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent[k] + v if k in ent else v
        return SparseMatrix(self.rows, self.cols, ent)

    def __neg__(self):
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, s) -> "SparseMatrix":
        s = s if isinstance(s, GaussianRational) else GaussianRational(s)
        return SparseMatrix(self.rows, self.cols, {k: v * s for k, v in self.entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        # common-denominator integer product
        da = 1
        for v in self.entries.values():
            da = lcm(da, v._d)
        db = 1
        for v in other.entries.values():
            db = lcm(db, v._d)
        arows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            f = da // v._d
            arows[r][c] = (v._a * f, v._b * f)
        brows = [dict() for _ in range(other.rows)]
        for (r, c), v in other.entries.items():
            f = db // v._d
            brows[r][c] = (v._a * f, v._b * f)
        ent = {}
        den = da * db
        for r, arow in enumerate(arows):
            acc: dict[int, list[int]] = {}
            for k, (x, y) in arow.items():
                for c, (u, w) in brows[k].items():
                    cell = acc.get(c)
                    if cell is None:
                        acc[c] = [x * u - y * w, x * w + y * u]
                    else:
                        cell[0] += x * u - y * w
                        cell[1] += x * w + y * u
            for c, (a, b) in acc.items():
                if a or b:
                    ent[(r, c)] = GaussianRational._make(a, b, den)
        return SparseMatrix(self.rows, other.cols, ent)

    def apply(self, vec: Sequence[GaussianRational]) -> list[GaussianRational]:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        out = [ZERO] * self.rows
        for (r, c), v in self.entries.items():
            x = vec[c]
            if x:
                out[r] = out[r] + v * x
        return out

    def apply_sparse(self, vec: Mapping[int, GaussianRational]) -> dict[int, GaussianRational]:
        cols = self.col_dicts()
        out: dict[int, GaussianRational] = {}
        for c, x in vec.items():
            for r, v in cols[c].items():
                out[r] = out[r] + v * x if r in out else v * x
        return {r: v for r, v in out.items() if v}

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SparseMatrix":
        rmap = {r: i for i, r in enumerate(rows)}
        cmap = {c: j for j, c in enumerate(cols)}
        ent = {}
        for (r, c), v in self.entries.items():
            if r in rmap and c in cmap:
                ent[(rmap[r], cmap[c])] = v
        return SparseMatrix(len(rows), len(cols), ent)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


# ---------------------------------------------------------------------------
# Subspace


class SubspaceInclusionError(ValueError):
    """Raised when a subquotient is requested for ``B`` not contained in ``Z``."""

    def __init__(self, message: str, witness: list[GaussianRational]):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q(i)^ambient_dim stored by its reduced echelon basis.

    ``rows`` holds each basis vector as a primitive Gaussian-integer row whose
    pivot entry is a positive integer: a canonical form, so equal subspaces
    compare equal field by field.
    """

    ambient_dim: int
    rows: tuple

    @classmethod
    def _from_pivots(cls, ambient_dim: int, pivots: Mapping[int, dict]) -> "Subspace":
        return cls(ambient_dim, _sorted_rows(pivots))

    @classmethod
    def span(cls, ambient_dim: int, vectors: Iterable) -> "Subspace":
        """Span of vectors given densely (sequences) or sparsely (dicts) over Q(i)."""
        rows = []
        for v in vectors:
            if isinstance(v, Mapping):
                sparse = {c: x if isinstance(x, GaussianRational) else GaussianRational(x) for c, x in v.items()}
            else:
                if len(v) != ambient_dim:
                    raise ValueError("vector length does not match ambient dimension")
                sparse = {}
                for c, x in enumerate(v):
                    x = x if isinstance(x, GaussianRational) else GaussianRational(x)
                    if x:
                        sparse[c] = x
            for c in sparse:
                if not 0 <= c < ambient_dim:
                    raise IndexError(f"coordinate {c} outside ambient dimension {ambient_dim}")
            rows.append(_to_int_row(sparse))
        return cls._from_pivots(ambient_dim, _rref(rows))

    @classmethod
    def span_int_rows(cls, ambient_dim: int, rows: Iterable[dict]) -> "Subspace":
        return cls._from_pivots(ambient_dim, _rref(rows))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, tuple(((c, 1, 0),) for c in range(ambient_dim)))

    @classmethod
    def coordinate(cls, ambient_dim: int, coords: Iterable[int]) -> "Subspace":
        return cls(ambient_dim, tuple(((c, 1, 0),) for c in sorted(set(coords))))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def pivots(self) -> list[int]:
        return [row[0][0] for row in self.rows]

    def int_rows(self) -> list[dict]:
        return [{c: (a, b) for c, a, b in row} for row in self.rows]

    def _pivot_map(self) -> dict[int, dict]:
        return {row[0][0]: {c: (a, b) for c, a, b in row} for row in self.rows}

    def sparse_basis(self) -> list[dict[int, GaussianRational]]:
        """Basis vectors normalized so each pivot entry is 1."""
        out = []
        for row in self.rows:
            p = row[0][1]
            out.append({c: GaussianRational._make(a, b, p) for c, a, b in row})
        return out

    @property
    def basis(self) -> list[list[GaussianRational]]:
        out = []
        for vec in self.sparse_basis():
            dense = [ZERO] * self.ambient_dim
            for c, v in vec.items():
                dense[c] = v
            out.append(dense)
        return out

    def normal_form_int(self, row: dict) -> dict:
        return _reduce_full(dict(row), self._pivot_map())

    def contains_int(self, row: dict) -> bool:
        return not self.normal_form_int(row)

    def contains(self, vec) -> bool:
        if not isinstance(vec, Mapping):
            vec = {c: x for c, x in enumerate(vec) if x}
        return self.contains_int(_to_int_row(vec))

    def normal_form(self, vec: Mapping[int, GaussianRational]) -> dict[int, GaussianRational]:
        """Reduce ``vec`` modulo the subspace, clearing all pivot coordinates (exact)."""
        pivots = self.sparse_basis()
        out = dict(vec)
        for basis_vec in pivots:
            p = next(iter(basis_vec))
            x = out.get(p)
            if x is None or not x:
                continue
            for c, v in basis_vec.items():
                y = out.get(c, ZERO) - x * v
                if y:
                    out[c] = y
                else:
                    out.pop(c, None)
        return out

    def coordinates(self, vec: Mapping[int, GaussianRational]) -> list[GaussianRational]:
        """Coefficients of ``vec`` in the echelon basis; raises if ``vec`` is outside."""
        coeffs = [vec.get(p, ZERO) for p in self.pivots()]
        rebuilt: dict[int, GaussianRational] = {}
        for x, basis_vec in zip(coeffs, self.sparse_basis()):
            if not x:
                continue
            for c, v in basis_vec.items():
                rebuilt[c] = rebuilt.get(c, ZERO) + x * v
        rebuilt = {c: v for c, v in rebuilt.items() if v}
        target = {c: v for c, v in vec.items() if v}
        if rebuilt != target:
            raise ValueError("vector is not in the subspace")
        return coeffs

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        return Subspace.span_int_rows(self.ambient_dim, self.int_rows() + other.int_rows())

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains_int(r) for r in self.int_rows())

    def witness_outside(self, other: "Subspace") -> list[GaussianRational] | None:
        """A basis vector of ``self`` not in ``other`` (dense), or None."""
        for vec, row in zip(self.basis, self.int_rows()):
            if not other.contains_int(row):
                return vec
        return None

    def embed(self, ambient_dim: int, positions: Sequence[int]) -> "Subspace":
        """Image under the order-preserving coordinate embedding ``c -> positions[c]``."""
        rows = tuple(tuple((positions[c], a, b) for c, a, b in row) for row in self.rows)
        return Subspace(ambient_dim, rows)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


# ---------------------------------------------------------------------------
# operations


def rank(M: SparseMatrix) -> int:
    """Exact rank over Q(i)."""
    if M.rows <= M.cols:
        return len(_echelon(M.int_rows()))
    return len(_echelon(M.transpose().int_rows()))


def _kernel_int_rows(rows: Sequence[dict], ncols: int) -> list[dict]:
    """Kernel vectors, already in reduced echelon form (leading 1 at a free column).

    Eliminating with the columns in reverse order makes the free-variable basis
    vectors come out as the reduced echelon basis of the kernel.
    """
    last = ncols - 1
    rev = [{last - c: v for c, v in r.items()} for r in rows]
    piv = _rref(rev)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        # scale everything by L = lcm of pivot entries that touch f
        touching = [(p, prow) for p, prow in piv.items() if f in prow]
        L = 1
        for p, prow in touching:
            L = lcm(L, prow[p][0])
        vec = {last - f: (L, 0)}
        for p, prow in touching:
            P = prow[p][0]
            a, b = prow[f]
            s = L // P
            vec[last - p] = (-a * s, -b * s)
        out.append(_content_reduce(vec))
    return out


def kernel_basis(M: SparseMatrix) -> Subspace:
    """Canonical echelon basis of ``{x : M x = 0}``."""
    rows = _kernel_int_rows(M.int_rows(), M.cols)
    return Subspace(M.cols, _sorted_rows({min(r): r for r in rows}))


def image_basis(M: SparseMatrix) -> Subspace:
    """Column space of ``M`` as a subspace of Q(i)^rows."""
    return Subspace.span_int_rows(M.rows, [_to_int_row(col) for col in M.col_dicts() if col])


def solve(M: SparseMatrix, b: Sequence) -> list[GaussianRational] | None:
    """A particular solution of ``M x = b``, or ``None`` when the system is inconsistent."""
    if len(b) != M.rows:
        raise ValueError("right-hand side length does not match matrix rows")
    b = [x if isinstance(x, GaussianRational) else GaussianRational(x) for x in b]
    rows = M.row_dicts()
    aug = []
    for r in range(M.rows):
        row = dict(rows[r])
        if b[r]:
            row[M.cols] = b[r]
        aug.append(_to_int_row(row))
    piv = _rref(aug)
    if M.cols in piv:
        return None
    x = [ZERO] * M.cols
    for p, prow in piv.items():
        if M.cols in prow:
            a, bb = prow[M.cols]
            x[p] = GaussianRational._make(a, bb, prow[p][0])
    if M.apply(x) != b:
        raise ArithmeticError("solution failed exact substitution check")
    return x


def subquotient_dim(Z: Subspace, B: Subspace) -> int:
    """``dim Z - dim B`` after checking ``B`` is contained in ``Z``."""
    if Z.ambient_dim != B.ambient_dim:
        raise ValueError("ambient dimensions differ")
    witness = B.witness_outside(Z)
    if witness is not None:
        raise SubspaceInclusionError("B is not contained in Z", witness)
    return Z.dim - B.dim
