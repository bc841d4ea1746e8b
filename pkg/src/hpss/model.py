"""Structure constants, real-frame complexification, and the exterior algebra.

Generators of ``L = g^{1,0} + g^{*(0,1)}`` are numbered once per algebra with
``N = n + m``::

    0 .. N-1      vectors   T_1..T_n, W_1..W_m
    N .. 2N-1     (0,1)-forms  wb^1..wb^n, rb^1..rb^m      (omega-bar, rho-bar)
    2N .. 3N-1    (1,0)-forms  w^1..w^n, r^1..r^m          (only inside d_form/contract)

A monomial is a wedge of distinct generators in increasing id order, so all
vectors precede all forms.  Internally it is an int bitmask; ``Monomial`` is the
public tuple view.  Every sign in the package comes from this one ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, NamedTuple

from .exact import ZERO, GaussianRational, SparseMatrix, kernel_basis, rank

__all__ = [
    "AlgebraSpec",
    "RealFrameSpec",
    "ValidationReport",
    "Monomial",
    "Element",
    "TypeIndex",
    "validate",
    "complexify",
    "builtin_example",
    "builtin_real_frame",
    "example_catalog",
    "basis",
    "basis_masks",
    "wedge",
    "contract",
    "type_components",
]

Q = GaussianRational
HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# AlgebraSpec


@dataclass(frozen=True)
class AlgebraSpec:
    """``[Tbar_k, T_j] = sum_l E[l][k][j] W_l - sum_l conj(E[l][j][k]) Wbar_l`` (0-based)."""

    n: int
    m: int
    E: tuple
    name: str = ""

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int) or self.n < 0 or self.m < 0:
            raise ValueError(f"dimensions must be non-negative integers, got n={self.n!r}, m={self.m!r}")
        if len(self.E) != self.m or any(len(block) != self.n for block in self.E) or any(
            len(row) != self.n for block in self.E for row in block
        ):
            raise ValueError(f"E must have shape ({self.m}, {self.n}, {self.n})")

    @classmethod
    def from_entries(cls, n: int, m: int, entries: Mapping[tuple[int, int, int], object], name: str = "") -> "AlgebraSpec":
        """Build from ``{(l, k, j): value}`` with 1-based indices; omitted entries are zero."""
        if n < 0 or m < 0:
            raise ValueError("dimensions must be non-negative")
        E = [[[ZERO] * n for _ in range(n)] for _ in range(m)]
        for (l, k, j), v in entries.items():
            if not (1 <= l <= m and 1 <= k <= n and 1 <= j <= n):
                raise ValueError(f"structure constant index (l={l}, k={k}, j={j}) out of range for n={n}, m={m}")
            E[l - 1][k - 1][j - 1] = v if isinstance(v, GaussianRational) else Q(v)
        return cls(n, m, tuple(tuple(tuple(row) for row in block) for block in E), name)

    @classmethod
    def zero(cls, n: int, m: int, name: str = "") -> "AlgebraSpec":
        return cls.from_entries(n, m, {}, name)

    @property
    def N(self) -> int:
        return self.n + self.m

    def e(self, l: int, k: int, j: int) -> GaussianRational:
        """0-based access."""
        return self.E[l][k][j]

    def entries(self) -> dict[tuple[int, int, int], GaussianRational]:
        """Nonzero constants keyed by 1-based ``(l, k, j)``."""
        out = {}
        for l in range(self.m):
            for k in range(self.n):
                for j in range(self.n):
                    v = self.E[l][k][j]
                    if v:
                        out[(l + 1, k + 1, j + 1)] = v
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "m": self.m,
            "E": [{"l": l, "k": k, "j": j, **v.to_json()} for (l, k, j), v in sorted(self.entries().items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "AlgebraSpec":
        for key in ("n", "m"):
            if key not in obj:
                raise ValueError(f"algebra spec is missing {key!r}")
        n, m = obj["n"], obj["m"]
        if not isinstance(n, int) or not isinstance(m, int) or isinstance(n, bool) or isinstance(m, bool):
            raise ValueError("algebra spec dimensions must be integers")
        entries = {}
        for item in obj.get("E", []):
            key = (int(item["l"]), int(item["k"]), int(item["j"]))
            if key in entries:
                raise ValueError(f"duplicate structure constant {key}")
            entries[key] = Q.from_json(item)
        return cls.from_entries(n, m, entries, str(obj.get("name", "")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def conj_E(self, l: int, k: int, j: int) -> GaussianRational:
        return self.E[l][k][j].conjugate()


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    valid: bool
    m_is_1: bool
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"valid": self.valid, "m_is_1": self.m_is_1, "warnings": list(self.warnings)}


def validate(spec: AlgebraSpec) -> ValidationReport:
    """Any constants give a 2-step algebra with abelian J; flag center mismatches."""
    n, m = spec.n, spec.m
    warnings = []
    # c^{1,0}-components of brackets: the vectors (E^1_kj, ..., E^m_kj)
    if m:
        rows = {}
        idx = 0
        for k in range(n):
            for j in range(n):
                col = {l: spec.E[l][k][j] for l in range(m) if spec.E[l][k][j]}
                if col:
                    for l, v in col.items():
                        rows[(l, idx)] = v
                    idx += 1
        derived = SparseMatrix(m, max(idx, 1), rows) if idx else SparseMatrix(m, 1)
        r = rank(derived)
        if r < m:
            warnings.append("declared center strictly contains derived algebra")
            # individual W_l outside the span of the bracket components
            for l in range(m):
                probe = SparseMatrix(m, derived.cols + 1, {**derived.entries, (l, derived.cols): Q(1)})
                if rank(probe) > r:
                    warnings.append(f"W{l + 1} is not produced by any bracket")
    # central vectors in t^{1,0}: sum_j v_j (E_kj W - conj(E_jk) Wbar) = 0 for all k
    if n:
        ent = {}
        for l in range(m):
            for k in range(n):
                for j in range(n):
                    if spec.E[l][k][j]:
                        ent[(2 * (l * n + k), j)] = spec.E[l][k][j]
                    if spec.E[l][j][k]:
                        ent[(2 * (l * n + k) + 1, j)] = spec.E[l][j][k].conjugate()
        M = SparseMatrix(max(2 * m * n, 1), n, ent)
        ker = kernel_basis(M)
        if ker.dim:
            warnings.append(
                f"t^(1,0) contains {ker.dim} central direction(s): true center is larger than declared"
            )
    return ValidationReport(valid=True, m_is_1=(m == 1), warnings=warnings)


# ---------------------------------------------------------------------------
# real frames


@dataclass(frozen=True)
class RealFrameSpec:
    """Real basis with brackets and a signed-permutation complex structure.

    ``t_frame`` lists X_1..X_n and ``c_frame`` lists Z_1..Z_m; the complex
    frame is ``T_k = (X_k - i J X_k) / 2`` and ``W_l = (Z_l - i J Z_l) / 2``.
    ``brackets`` maps an ordered generator pair to ``{generator: coefficient}``;
    the reversed pair is implied by antisymmetry.
    """

    name: str
    generators: tuple[str, ...]
    t_frame: tuple[str, ...]
    c_frame: tuple[str, ...]
    J: Mapping[str, tuple[int, str]]
    brackets: Mapping[tuple[str, str], Mapping[str, Fraction]]

    def bracket(self, a: str, b: str) -> dict[str, Fraction]:
        if (a, b) in self.brackets:
            return dict(self.brackets[(a, b)])
        if (b, a) in self.brackets:
            return {g: -v for g, v in self.brackets[(b, a)].items()}
        return {}

    def apply_J(self, vec: Mapping[str, object]) -> dict:
        out: dict = {}
        for g, v in vec.items():
            s, h = self.J[g]
            out[h] = out.get(h, 0) + s * v
        return {g: v for g, v in out.items() if v}

    def bracket_vec(self, x: Mapping[str, object], y: Mapping[str, object]) -> dict:
        out: dict = {}
        for a, u in x.items():
            for b, w in y.items():
                for g, v in self.bracket(a, b).items():
                    out[g] = out.get(g, 0) + u * w * v
        return {g: v for g, v in out.items() if v}

    def center_generators(self) -> set[str]:
        return set(self.c_frame) | {self.J[z][1] for z in self.c_frame}

    def check(self) -> None:
        """Raise ValueError unless J^2 = -1, brackets are central, and J is abelian."""
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generator names")
        if set(self.J) != gens:
            raise ValueError("J must be defined on every generator")
        for g, (s, h) in self.J.items():
            if s not in (1, -1) or h not in gens:
                raise ValueError(f"J({g}) must be +/- a generator")
            s2, h2 = self.J[h]
            if h2 != g or s * s2 != -1:
                raise ValueError(f"J∘J != -1 on {g}")
        frame = list(self.t_frame) + list(self.c_frame)
        spanned = set(frame) | {self.J[g][1] for g in frame}
        if spanned != gens or len(spanned) != 2 * len(frame):
            raise ValueError("t_frame, c_frame and their J-images must form the generator set")
        center = self.center_generators()
        for (a, b), val in self.brackets.items():
            if a not in gens or b not in gens:
                raise ValueError(f"bracket [{a}, {b}] uses an unknown generator")
            if (a in center or b in center) and any(val.values()):
                raise ValueError(f"bracket [{a}, {b}] involves a central generator")
            bad = [g for g, v in val.items() if v and g not in center]
            if bad:
                raise ValueError(f"bracket [{a}, {b}] leaves the declared center through {bad}")
        for a, b in combinations(self.generators, 2):
            lhs = self.bracket_vec(self.apply_J({a: 1}), self.apply_J({b: 1}))
            if lhs != self.bracket(a, b):
                raise ValueError(f"J is not abelian: [J{a}, J{b}] != [{a}, {b}]")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": list(self.generators),
            "t_frame": list(self.t_frame),
            "c_frame": list(self.c_frame),
            "J": {g: ("-" if s < 0 else "") + h for g, (s, h) in sorted(self.J.items())},
            "brackets": [
                {"a": a, "b": b, "value": {g: f"{v.numerator}/{v.denominator}" for g, v in sorted(val.items())}}
                for (a, b), val in sorted(self.brackets.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "RealFrameSpec":
        J = {}
        for g, target in obj["J"].items():
            target = str(target)
            J[g] = (-1, target[1:]) if target.startswith("-") else (1, target.lstrip("+"))
        brackets = {}
        for item in obj.get("brackets", []):
            brackets[(item["a"], item["b"])] = {g: Fraction(str(v)) for g, v in item["value"].items()}
        return cls(
            name=str(obj.get("name", "")),
            generators=tuple(obj["generators"]),
            t_frame=tuple(obj["t_frame"]),
            c_frame=tuple(obj["c_frame"]),
            J=J,
            brackets=brackets,
        )


def _holo(rf: RealFrameSpec, x: str, conj: bool = False) -> dict[str, GaussianRational]:
    """``(x - i J x)/2`` or its conjugate as a complex combination of generators."""
    s, jx = rf.J[x]
    im = HALF * s if conj else -HALF * s
    return {x: Q(HALF), jx: Q(0, im)}


def complexify(rf: RealFrameSpec) -> AlgebraSpec:
    """Read the constants ``E`` off ``[Tbar_k, T_j]`` for a real frame."""
    rf.check()
    n, m = len(rf.t_frame), len(rf.c_frame)
    # Z_l = W_l + Wbar_l ; J Z_l = i (W_l - Wbar_l)
    decomp: dict[str, dict[tuple[str, int], GaussianRational]] = {}
    for l, z in enumerate(rf.c_frame):
        s, jz = rf.J[z]
        decomp[z] = {("W", l): Q(1), ("Wb", l): Q(1)}
        decomp[jz] = {("W", l): Q(0, s), ("Wb", l): Q(0, -s)}
    T = [_holo(rf, x) for x in rf.t_frame]
    Tb = [_holo(rf, x, conj=True) for x in rf.t_frame]

    def bracket(x, y):
        raw = rf.bracket_vec(x, y)
        out: dict[tuple[str, int], GaussianRational] = {}
        for g, v in raw.items():
            if g not in decomp:
                raise ValueError(f"bracket has a component along non-central generator {g}")
            for key, c in decomp[g].items():
                out[key] = out.get(key, ZERO) + c * v
        return {k: v for k, v in out.items() if v}

    entries = {}
    wbar = {}
    for k in range(n):
        for j in range(n):
            if bracket(T[k], T[j]):
                raise ValueError("g^(1,0) is not abelian")
            br = bracket(Tb[k], T[j])
            for (kind, l), v in br.items():
                if kind == "W":
                    entries[(l + 1, k + 1, j + 1)] = v
                else:
                    wbar[(l, k, j)] = v
    spec = AlgebraSpec.from_entries(n, m, entries, rf.name)
    for l in range(m):
        for k in range(n):
            for j in range(n):
                expect = -spec.E[l][j][k].conjugate()
                if wbar.get((l, k, j), ZERO) != expect:
                    raise ValueError("Wbar components of the brackets are inconsistent with the W components")
    return spec


# ---------------------------------------------------------------------------
# built-in families


def _frame_heis_ext(n: int) -> RealFrameSpec:
    if n < 1:
        raise ValueError("heis_ext needs n >= 1")
    X = [f"X{j}" for j in range(1, n + 1)]
    Y = [f"Y{j}" for j in range(1, n + 1)]
    J = {}
    for x, y in zip(X, Y):
        J[x] = (1, y)
        J[y] = (-1, x)
    J["Z"] = (1, "A")
    J["A"] = (-1, "Z")
    brackets = {(x, y): {"Z": Fraction(1)} for x, y in zip(X, Y)}
    gens = tuple(X + Y + ["Z", "A"])
    return RealFrameSpec(f"heis_ext(n={n})", gens, tuple(X), ("Z",), J, brackets)


def _frame_heis_sum(m: int, n: int) -> RealFrameSpec:
    if m < 1 or n < 1:
        raise ValueError("heis_sum needs m >= 1 and n >= 1")
    X = [f"X{j}" for j in range(1, m + 1)]
    Y = [f"Y{j}" for j in range(1, m + 1)]
    A = [f"A{k}" for k in range(1, n + 1)]
    B = [f"B{k}" for k in range(1, n + 1)]
    J = {"Z": (1, "C"), "C": (-1, "Z")}
    brackets = {}
    for x, y in zip(X, Y):
        J[x], J[y] = (1, y), (-1, x)
        brackets[(x, y)] = {"Z": Fraction(1)}
    for a, b in zip(A, B):
        J[a], J[b] = (1, b), (-1, a)
        brackets[(a, b)] = {"C": Fraction(1)}
    gens = tuple(X + Y + ["Z"] + A + B + ["C"])
    return RealFrameSpec(f"heis_sum(m={m},n={n})", gens, tuple(X + A), ("Z",), J, brackets)


def _frame_blocks(k: int, kind: str) -> RealFrameSpec:
    if k < 0:
        raise ValueError(f"{kind} needs k >= 0")
    gens = []
    J = {"Z1": (-1, "Z2"), "Z2": (1, "Z1")}
    brackets = {}
    t_frame = []
    h = Fraction(1, 2)
    for b in range(k + 1):
        x1, x2, x3, x4 = (f"X{4 * b + i}" for i in range(1, 5))
        gens += [x1, x2, x3, x4]
        J[x1], J[x2] = (1, x2), (-1, x1)
        J[x3], J[x4] = (-1, x4), (1, x3)
        t_frame += [x1, x3]
        if kind == "W4n6":
            brackets[(x1, x3)] = {"Z1": -h}
            brackets[(x1, x4)] = {"Z2": -h}
            brackets[(x2, x3)] = {"Z2": -h}
            brackets[(x2, x4)] = {"Z1": h}
        else:
            brackets[(x1, x2)] = {"Z1": -h}
            brackets[(x1, x4)] = {"Z2": -h}
            brackets[(x2, x3)] = {"Z2": -h}
    gens += ["Z1", "Z2"]
    return RealFrameSpec(f"{kind}(k=0..{k})", tuple(gens), tuple(t_frame), ("Z1",), J, brackets)


def builtin_real_frame(name: str, **sizes) -> RealFrameSpec:
    if name == "heis_ext":
        return _frame_heis_ext(int(sizes.get("n", 1)))
    if name == "heis_sum":
        return _frame_heis_sum(int(sizes.get("m", 1)), int(sizes.get("n", 1)))
    if name in ("W4n6", "P4n2"):
        return _frame_blocks(int(sizes.get("k", 0)), name)
    raise ValueError(f"unknown example family {name!r}")


def builtin_example(name: str, **sizes) -> AlgebraSpec:
    """Hard-coded constants for the four example families."""
    if name == "heis_ext":
        n = int(sizes.get("n", 1))
        if n < 1:
            raise ValueError("heis_ext needs n >= 1")
        ent = {(1, j, j): Q(0, Fraction(-1, 2)) for j in range(1, n + 1)}
        return AlgebraSpec.from_entries(n, 1, ent, f"heis_ext(n={n})")
    if name == "heis_sum":
        m, n = int(sizes.get("m", 1)), int(sizes.get("n", 1))
        if m < 1 or n < 1:
            raise ValueError("heis_sum needs m >= 1 and n >= 1")
        ent = {(1, j, j): Q(0, Fraction(-1, 2)) for j in range(1, m + 1)}
        ent.update({(1, m + k, m + k): Q(Fraction(1, 2)) for k in range(1, n + 1)})
        return AlgebraSpec.from_entries(m + n, 1, ent, f"heis_sum(m={m},n={n})")
    if name in ("W4n6", "P4n2"):
        k = int(sizes.get("k", 0))
        if k < 0:
            raise ValueError(f"{name} needs k >= 0")
        ent = {}
        for b in range(k + 1):
            o, e = 2 * b + 1, 2 * b + 2
            if name == "W4n6":
                ent[(1, o, e)] = Q(Fraction(-1, 2))
            else:
                ent[(1, o, o)] = Q(0, Fraction(1, 4))
                ent[(1, o, e)] = Q(Fraction(-1, 4))
                ent[(1, e, o)] = Q(Fraction(-1, 4))
        return AlgebraSpec.from_entries(2 * (k + 1), 1, ent, f"{name}(k=0..{k})")
    raise ValueError(f"unknown example family {name!r}")


_CATALOG = [
    ("heis_ext", {"n": "int >= 1"}, "one-dimensional central extension of the Heisenberg algebra h_{2n+1}"),
    ("heis_sum", {"m": "int >= 1", "n": "int >= 1"}, "direct sum h_{2m+1} + h_{2n+1}"),
    ("W4n6", {"k": "int >= 0 (blocks 0..k)"}, "W_{4n+6}: d rho degenerate, images of d rho and d rhobar transversal"),
    ("P4n2", {"k": "int >= 0 (blocks 0..k)"}, "P_{4n+2}: d rho non-degenerate"),
]


def example_catalog() -> list[dict]:
    """Families with parameter schema, real frame and constants at the smallest size."""
    out = []
    for name, params, note in _CATALOG:
        sizes = {p: (0 if p == "k" else 1) for p in params}
        rf = builtin_real_frame(name, **sizes)
        spec = builtin_example(name, **sizes)
        out.append(
            {
                "name": name,
                "parameters": params,
                "description": note,
                "smallest": sizes,
                "real_frame": rf.to_json(),
                "E": spec.to_json()["E"],
            }
        )
    return out


# ---------------------------------------------------------------------------
# exterior algebra


class Monomial(NamedTuple):
    """Index sets (0-based) of vector, (0,1)-form and transient (1,0)-form factors."""

    vec_idx: tuple[int, ...]
    form_idx: tuple[int, ...]
    hol_idx: tuple[int, ...] = ()

    @property
    def bigrade(self) -> tuple[int, int]:
        return len(self.vec_idx), len(self.form_idx)


class TypeIndex(NamedTuple):
    k: int
    l: int
    a: int
    b: int


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(N: int, mono: Monomial) -> int:
    mask = 0
    for block, offset in ((mono.vec_idx, 0), (mono.form_idx, N), (mono.hol_idx, 2 * N)):
        if list(block) != sorted(set(block)) or any(not 0 <= i < N for i in block):
            raise ValueError(f"monomial index sets must be strictly ascending within 0..{N - 1}")
        for i in block:
            mask |= 1 << (offset + i)
    return mask


def monomial_of(N: int, mask: int) -> Monomial:
    vec, form, hol = [], [], []
    for g in _bits(mask):
        if g < N:
            vec.append(g)
        elif g < 2 * N:
            form.append(g - N)
        else:
            hol.append(g - 2 * N)
    return Monomial(tuple(vec), tuple(form), tuple(hol))


def wedge_sign(ma: int, mb: int) -> int:
    """Sign of reordering (gens of a)(gens of b) into increasing order; 0 if they overlap."""
    if ma & mb:
        return 0
    s = 0
    while mb:
        low = mb & -mb
        s += (ma >> low.bit_length()).bit_count()
        mb ^= low
    return -1 if s & 1 else 1


_BASIS_CACHE: dict[tuple[int, int, int], tuple[int, ...]] = {}


def basis_masks(N: int, p: int, q: int) -> tuple[int, ...]:
    """Masks of the lexicographically ordered basis of ``B^{p,q}``."""
    key = (N, p, q)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    if 0 <= p <= N and 0 <= q <= N:
        for vec in combinations(range(N), p):
            vm = 0
            for i in vec:
                vm |= 1 << i
            for form in combinations(range(N), q):
                fm = vm
                for i in form:
                    fm |= 1 << (N + i)
                out.append(fm)
    result = tuple(out)
    _BASIS_CACHE[key] = result
    return result


def basis(spec: AlgebraSpec, p: int, q: int) -> list[Monomial]:
    """Ordered monomial basis of ``B^{p,q}``; empty outside ``0 <= p, q <= n + m``."""
    N = spec.N
    return [monomial_of(N, mk) for mk in basis_masks(N, p, q)]


def basis_size(N: int, p: int, q: int) -> int:
    if not (0 <= p <= N and 0 <= q <= N):
        return 0
    return comb(N, p) * comb(N, q)


class Element:
    """Sparse Q(i)-combination of monomials for an algebra with dimensions (n, m)."""

    __slots__ = ("n", "m", "terms")

    def __init__(self, n: int, m: int, terms: Mapping[int, GaussianRational] | None = None):
        self.n = n
        self.m = m
        self.terms = {mk: c for mk, c in (terms or {}).items() if c}

    # construction -----------------------------------------------------------

    @property
    def N(self) -> int:
        return self.n + self.m

    @classmethod
    def zero(cls, n: int, m: int) -> "Element":
        return cls(n, m)

    @classmethod
    def one(cls, n: int, m: int) -> "Element":
        return cls(n, m, {0: Q(1)})

    @classmethod
    def from_monomials(cls, n: int, m: int, terms: Mapping[Monomial, object]) -> "Element":
        out: dict[int, GaussianRational] = {}
        N = n + m
        for mono, c in terms.items():
            c = c if isinstance(c, GaussianRational) else Q(c)
            mk = mask_of(N, Monomial(*mono))
            out[mk] = out.get(mk, ZERO) + c
        return cls(n, m, out)

    @classmethod
    def gen(cls, n: int, m: int, name: str, coeff=1) -> "Element":
        """Single generator by name: ``T1 W1 wb1 rb1 w1 r1`` (1-based)."""
        return cls(n, m, {1 << generator_id(n, m, name): coeff if isinstance(coeff, GaussianRational) else Q(coeff)})

    @classmethod
    def from_vector(cls, n: int, m: int, masks, vec) -> "Element":
        if isinstance(vec, Mapping):
            return cls(n, m, {masks[i]: c for i, c in vec.items()})
        return cls(n, m, {mk: c for mk, c in zip(masks, vec)})

    def to_sparse(self, index: Mapping[int, int]) -> dict[int, GaussianRational]:
        out = {}
        for mk, c in self.terms.items():
            if mk not in index:
                raise ValueError(f"monomial {self._name(mk)} is not in the requested basis")
            out[index[mk]] = c
        return out

    # inspection -------------------------------------------------------------

    def monomials(self) -> dict[Monomial, GaussianRational]:
        return {monomial_of(self.N, mk): c for mk, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def bigrades(self) -> set[tuple[int, int]]:
        vm = (1 << self.N) - 1
        fm = vm << self.N
        return {((mk & vm).bit_count(), (mk & fm).bit_count()) for mk in self.terms if not mk >> (2 * self.N)}

    def bigrade(self) -> tuple[int, int] | None:
        if any(mk >> (2 * self.N) for mk in self.terms):
            return None
        g = self.bigrades()
        return g.pop() if len(g) == 1 else None

    def degree(self) -> int | None:
        degs = {mk.bit_count() for mk in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def _name(self, mk: int) -> str:
        parts = [generator_name(self.n, self.m, g) for g in _bits(mk)]
        return "∧".join(parts) if parts else "1"

    def __repr__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mk in sorted(self.terms):
            c = self.terms[mk]
            pieces.append(f"({c})·{self._name(mk)}")
        return " + ".join(pieces)

    # arithmetic -------------------------------------------------------------

    def _check(self, other: "Element"):
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError("elements belong to different algebras")

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self.terms == other.terms

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for mk, c in other.terms.items():
            out[mk] = out[mk] + c if mk in out else c
        return Element(self.n, self.m, out)

    def __neg__(self):
        return Element(self.n, self.m, {mk: -c for mk, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, s) -> "Element":
        s = s if isinstance(s, GaussianRational) else Q(s)
        return Element(self.n, self.m, {mk: c * s for mk, c in self.terms.items()})

    def __rmul__(self, s):
        return self.scale(s)

    def wedge(self, other: "Element") -> "Element":
        return wedge(self, other)

    __xor__ = wedge


def generator_id(n: int, m: int, name: str) -> int:
    N = n + m
    table = {"T": (0, n), "W": (n, m), "wb": (N, n), "rb": (N + n, m), "w": (2 * N, n), "r": (2 * N + n, m)}
    for prefix in ("wb", "rb", "T", "W", "w", "r"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            offset, count = table[prefix]
            i = int(name[len(prefix):])
            if not 1 <= i <= count:
                raise ValueError(f"generator {name} out of range")
            return offset + i - 1
    raise ValueError(f"unknown generator name {name!r}")


def generator_name(n: int, m: int, g: int) -> str:
    N = n + m
    block, i = divmod(g, N)
    if block == 0:
        return f"T{i + 1}" if i < n else f"W{i - n + 1}"
    if block == 1:
        return f"ω̄{i + 1}" if i < n else f"ρ̄{i - n + 1}"
    return f"ω{i + 1}" if i < n else f"ρ{i - n + 1}"


def wedge(x: Element, y: Element) -> Element:
    """Exterior product in the fixed generator order."""
    x._check(y)
    out: dict[int, GaussianRational] = {}
    for ma, ca in x.terms.items():
        for mb, cb in y.terms.items():
            s = wedge_sign(ma, mb)
            if not s:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            mk = ma | mb
            out[mk] = out[mk] + c if mk in out else c
    return Element(x.n, x.m, out)


def contract(V: Element, phi: Element) -> Element:
    """Interior product ``iota_V phi`` of a (1,0)-vector with a form.

    ``T_k`` pairs with ``w^k`` and ``W_l`` with ``r^l``; (0,1)-forms pair to zero.
    """
    V._check(phi)
    N = V.N
    vec_mask = (1 << N) - 1
    coeffs = {}
    for mk, c in V.terms.items():
        if mk & ~vec_mask or mk.bit_count() != 1:
            raise ValueError("contraction needs a vector of grade (1,0)")
        coeffs[mk.bit_length() - 1] = c
    out: dict[int, GaussianRational] = {}
    for mk, c in phi.terms.items():
        for g in _bits(mk):
            if g < 2 * N:
                continue
            v = coeffs.get(g - 2 * N)
            if v is None:
                continue
            pos = (mk & ((1 << g) - 1)).bit_count()
            val = v * c
            if pos & 1:
                val = -val
            rest = mk ^ (1 << g)
            out[rest] = out[rest] + val if rest in out else val
    return Element(V.n, V.m, out)


def type_of(n: int, m: int, mk: int) -> TypeIndex:
    N = n + m
    t_mask = (1 << n) - 1
    c_mask = ((1 << m) - 1) << n
    return TypeIndex(
        (mk & t_mask).bit_count(),
        (mk & c_mask).bit_count(),
        ((mk >> N) & t_mask).bit_count(),
        ((mk >> N) & c_mask).bit_count(),
    )


def type_components(x: Element) -> dict[TypeIndex, Element]:
    """Split by the numbers of (T, W, omega-bar, rho-bar) factors."""
    if x.bigrade() is None and not x.is_zero():
        raise ValueError("type decomposition needs an element of a single bigrade")
    groups: dict[TypeIndex, dict[int, GaussianRational]] = {}
    for mk, c in x.terms.items():
        groups.setdefault(type_of(x.n, x.m, mk), {})[mk] = c
    return {t: Element(x.n, x.m, terms) for t, terms in sorted(groups.items())}
