"""Differential operators on the invariant bi-complex as exact graded maps.

``dbar`` is the odd derivation with ``dbar T_j = sum E^l_kj wb^k ∧ W_l`` and
zero on every other generator.  ``ad_V`` (V a (1,0)-vector) is the even
derivation that only sees ``rb^l``, sending it to ``iota_V d rb^l``.  For a
bivector ``ad_{A∧B} = A ∧ ad_B - B ∧ ad_A``, extended linearly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .exact import ZERO, GaussianRational, SparseMatrix, kernel_basis
from .model import (
    AlgebraSpec,
    Element,
    Q,
    TypeIndex,
    basis_masks,
    contract,
    generator_id,
    type_components,
    wedge,
    wedge_sign,
)

__all__ = [
    "GradedOperator",
    "TotalDifferential",
    "Bivector",
    "PoissonVerdict",
    "NotHolomorphicPoissonError",
    "d_form",
    "dbar",
    "dbar_apply",
    "ad_vector",
    "ad_vector_apply",
    "ad_bivector",
    "ad_bivector_apply",
    "is_holomorphic_poisson",
    "total_differential",
    "is_schouten_central",
    "holomorphic_bivectors",
]


# ---------------------------------------------------------------------------
# Bivector


class Bivector:
    """An invariant bivector, held as a grade-(2,0) element."""

    __slots__ = ("element",)

    def __init__(self, element: Element):
        if not element.is_zero() and element.bigrade() != (2, 0):
            raise ValueError("a bivector must have bigrade (2, 0)")
        self.element = element

    @classmethod
    def zero(cls, spec: AlgebraSpec) -> "Bivector":
        return cls(Element.zero(spec.n, spec.m))

    @classmethod
    def from_coefficients(
        cls,
        spec: AlgebraSpec,
        wt: Mapping[tuple[int, int], object] | None = None,
        tt: Mapping[tuple[int, int], object] | None = None,
        ww: Mapping[tuple[int, int], object] | None = None,
    ) -> "Bivector":
        """``wt[(l, j)]`` on W_l∧T_j, ``tt[(i, j)]`` on T_i∧T_j, ``ww`` on W_a∧W_b (1-based)."""
        n, m = spec.n, spec.m
        total = Element.zero(n, m)
        for table, left, right in ((wt, "W", "T"), (tt, "T", "T"), (ww, "W", "W")):
            for (a, b), c in (table or {}).items():
                term = wedge(Element.gen(n, m, f"{left}{a}"), Element.gen(n, m, f"{right}{b}"))
                total = total + term.scale(c if isinstance(c, GaussianRational) else Q(c))
        return cls(total)

    @classmethod
    def wedge_of(cls, A: Element, B: Element) -> "Bivector":
        return cls(wedge(A, B))

    def _part(self, pred) -> Element:
        x = self.element
        out = Element.zero(x.n, x.m)
        for t, comp in type_components(x).items():
            if pred(t):
                out = out + comp
        return out

    @property
    def lambda1(self) -> Element:
        """Component in t^{1,0} ⊗ c^{1,0} plus c^{2,0}."""
        return self._part(lambda t: t.l >= 1)

    @property
    def lambda2(self) -> Element:
        """Component in t^{2,0}."""
        return self._part(lambda t: t.l == 0)

    def wt_coefficients(self) -> dict[tuple[int, int], GaussianRational]:
        return self._coeffs("W", "T")

    def tt_coefficients(self) -> dict[tuple[int, int], GaussianRational]:
        return self._coeffs("T", "T")

    def ww_coefficients(self) -> dict[tuple[int, int], GaussianRational]:
        return self._coeffs("W", "W")

    def _coeffs(self, left: str, right: str) -> dict[tuple[int, int], GaussianRational]:
        n, m = self.element.n, self.element.m
        out = {}
        for mk, c in self.element.terms.items():
            lo, hi = sorted(i for i in range(n + m) if mk >> i & 1)
            # stored order is increasing id: T's precede W's
            names = [("T", i + 1) if i < n else ("W", i - n + 1) for i in (lo, hi)]
            if left == "W" and right == "T" and names[0][0] == "T" and names[1][0] == "W":
                # T_j ∧ W_l = -(W_l ∧ T_j)
                out[(names[1][1], names[0][1])] = -c
            elif left == right == names[0][0] == names[1][0]:
                out[(names[0][1], names[1][1])] = c
        return out

    def to_json(self) -> dict:
        def rows(table, keys):
            return [{keys[0]: a, keys[1]: b, **c.to_json()} for (a, b), c in sorted(table.items())]

        out = {"wt": rows(self.wt_coefficients(), ("l", "j")), "tt": rows(self.tt_coefficients(), ("i", "j"))}
        ww = self.ww_coefficients()
        if ww:
            out["ww"] = rows(ww, ("a", "b"))
        return out

    @classmethod
    def from_json(cls, spec: AlgebraSpec, obj: Mapping) -> "Bivector":
        def read(key, names):
            table = {}
            for item in obj.get(key, []):
                idx = (int(item[names[0]]), int(item[names[1]]))
                table[idx] = table.get(idx, ZERO) + Q.from_json(item)
            return table

        unknown = set(obj) - {"wt", "tt", "ww"}
        if unknown:
            raise ValueError(f"unknown bivector keys {sorted(unknown)}")
        return cls.from_coefficients(spec, read("wt", ("l", "j")), read("tt", ("i", "j")), read("ww", ("a", "b")))

    def __eq__(self, other):
        if not isinstance(other, Bivector):
            return NotImplemented
        return self.element == other.element

    def __repr__(self):
        return f"Bivector({self.element!r})"


# ---------------------------------------------------------------------------
# derivations on masks


def _derive(x: Element, images: Mapping[int, Element], odd: bool) -> Element:
    """Apply the derivation determined by generator images (image degree is homogeneous)."""
    out: dict[int, GaussianRational] = {}
    for mk, c in x.terms.items():
        for g, img in images.items():
            bit = 1 << g
            if not mk & bit:
                continue
            rest = mk ^ bit
            pos = (mk & (bit - 1)).bit_count()
            for im_mk, ic in img.terms.items():
                # prefix ∧ D(g) ∧ suffix = (-1)^(pos*deg) D(g) ∧ rest
                s = wedge_sign(im_mk, rest)
                if not s:
                    continue
                parity = pos * ((1 if odd else 0) + im_mk.bit_count())
                if parity & 1:
                    s = -s
                val = c * ic
                if s < 0:
                    val = -val
                key = im_mk | rest
                out[key] = out[key] + val if key in out else val
    return Element(x.n, x.m, out)


def d_form(spec: AlgebraSpec, generator: str) -> Element:
    """Exterior derivative of a form generator (``wb1``, ``rb1``, ``w1``, ``r1``...)."""
    n, m = spec.n, spec.m
    g = generator_id(n, m, generator)
    N = spec.N
    if g < N:
        raise ValueError(f"{generator} is not a form generator")
    block, i = divmod(g, N)
    out = Element.zero(n, m)
    if i < n:
        return out  # d omega = d omega-bar = 0
    l = i - n
    for a in range(n):
        for b in range(n):
            if block == 2:
                # d rho^l = sum E^l_ba w^a ∧ wb^b
                c = spec.E[l][b][a]
                lhs, rhs = f"w{a + 1}", f"wb{b + 1}"
            else:
                # d rhobar^l = -sum conj(E^l_ab) w^a ∧ wb^b
                c = -spec.E[l][a][b].conjugate()
                lhs, rhs = f"w{a + 1}", f"wb{b + 1}"
            if c:
                out = out + wedge(Element.gen(n, m, lhs), Element.gen(n, m, rhs)).scale(c)
    return out


def _dbar_images(spec: AlgebraSpec) -> dict[int, Element]:
    n, m = spec.n, spec.m
    images = {}
    for j in range(n):
        img = Element.zero(n, m)
        for k in range(n):
            for l in range(m):
                c = spec.E[l][k][j]
                if c:
                    img = img + wedge(Element.gen(n, m, f"wb{k + 1}"), Element.gen(n, m, f"W{l + 1}")).scale(c)
        if not img.is_zero():
            images[j] = img
    return images


def _ad_vector_images(spec: AlgebraSpec, V: Element) -> dict[int, Element]:
    n, m = spec.n, spec.m
    N = spec.N
    images = {}
    for l in range(m):
        img = contract(V, d_form(spec, f"rb{l + 1}"))
        if not img.is_zero():
            images[N + n + l] = img
    return images


def _check_vector(spec: AlgebraSpec, V: Element):
    if (V.n, V.m) != (spec.n, spec.m):
        raise ValueError("vector belongs to a different algebra")
    if not V.is_zero() and V.bigrade() != (1, 0):
        raise ValueError("ad_vector needs an element of bigrade (1, 0)")


def dbar_apply(spec: AlgebraSpec, x: Element) -> Element:
    return _derive(x, _dbar_images(spec), odd=True)


def ad_vector_apply(spec: AlgebraSpec, V: Element, x: Element) -> Element:
    _check_vector(spec, V)
    return _derive(x, _ad_vector_images(spec, V), odd=False)


def _bivector_terms(spec: AlgebraSpec, Lam) -> list[tuple[Element, Element, GaussianRational]]:
    el = Lam.element if isinstance(Lam, Bivector) else Lam
    if (el.n, el.m) != (spec.n, spec.m):
        raise ValueError("bivector belongs to a different algebra")
    terms = []
    for mk, c in sorted(el.terms.items()):
        bits = [i for i in range(spec.N) if mk >> i & 1]
        if len(bits) != 2 or mk >> spec.N:
            raise ValueError("ad_bivector needs an element of bigrade (2, 0)")
        a, b = bits
        terms.append((Element(spec.n, spec.m, {1 << a: Q(1)}), Element(spec.n, spec.m, {1 << b: Q(1)}), c))
    return terms


def ad_bivector_apply(spec: AlgebraSpec, Lam, x: Element) -> Element:
    out = Element.zero(spec.n, spec.m)
    for A, B, c in _bivector_terms(spec, Lam):
        t = wedge(A, ad_vector_apply(spec, B, x)) - wedge(B, ad_vector_apply(spec, A, x))
        out = out + t.scale(c)
    return out


# ---------------------------------------------------------------------------
# graded operators


@dataclass
class GradedOperator:
    """Blocks ``(p, q) -> matrix: basis(p, q) -> basis(p + dp, q + dq)``."""

    n: int
    m: int
    shift: tuple[int, int]
    blocks: dict[tuple[int, int], SparseMatrix] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.n + self.m

    def grades(self):
        return sorted(self.blocks)

    def block(self, p: int, q: int) -> SparseMatrix:
        if (p, q) in self.blocks:
            return self.blocks[(p, q)]
        dp, dq = self.shift
        rows = len(basis_masks(self.N, p + dp, q + dq))
        cols = len(basis_masks(self.N, p, q))
        return SparseMatrix(rows, cols)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks.values())

    def __call__(self, x: Element) -> Element:
        out = Element.zero(self.n, self.m)
        dp, dq = self.shift
        for p, q in x.bigrades():
            src = basis_masks(self.N, p, q)
            index = {mk: i for i, mk in enumerate(src)}
            part = Element(self.n, self.m, {mk: c for mk, c in x.terms.items() if mk in index})
            y = self.block(p, q).apply_sparse(part.to_sparse(index))
            out = out + Element.from_vector(self.n, self.m, basis_masks(self.N, p + dp, q + dq), y)
        return out

    def compose(self, other: "GradedOperator") -> "GradedOperator":
        """``self ∘ other``."""
        shift = (self.shift[0] + other.shift[0], self.shift[1] + other.shift[1])
        blocks = {}
        for (p, q), mat in other.blocks.items():
            mid = (p + other.shift[0], q + other.shift[1])
            blocks[(p, q)] = self.block(*mid) @ mat
        return GradedOperator(self.n, self.m, shift, blocks)

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        if self.shift != other.shift:
            raise ValueError("cannot add operators with different shifts")
        keys = set(self.blocks) | set(other.blocks)
        return GradedOperator(self.n, self.m, self.shift, {k: self.block(*k) + other.block(*k) for k in keys})


def _assemble(spec: AlgebraSpec, shift: tuple[int, int], fn: Callable[[Element], Element]) -> GradedOperator:
    N = spec.N
    n, m = spec.n, spec.m
    dp, dq = shift
    blocks = {}
    for p in range(N + 1):
        for q in range(N + 1):
            src = basis_masks(N, p, q)
            tgt = basis_masks(N, p + dp, q + dq)
            index = {mk: i for i, mk in enumerate(tgt)}
            ent = {}
            if tgt:
                for c_idx, mk in enumerate(src):
                    img = fn(Element(n, m, {mk: Q(1)}))
                    for r_mk, v in img.terms.items():
                        ent[(index[r_mk], c_idx)] = v
            blocks[(p, q)] = SparseMatrix(len(tgt), len(src), ent)
    return GradedOperator(n, m, shift, blocks)


def dbar(spec: AlgebraSpec) -> GradedOperator:
    images = _dbar_images(spec)
    return _assemble(spec, (0, 1), lambda x: _derive(x, images, odd=True))


def ad_vector(spec: AlgebraSpec, V: Element) -> GradedOperator:
    _check_vector(spec, V)
    images = _ad_vector_images(spec, V)
    return _assemble(spec, (0, 0), lambda x: _derive(x, images, odd=False))


def ad_bivector(spec: AlgebraSpec, Lam) -> GradedOperator:
    terms = _bivector_terms(spec, Lam)
    prepared = [(A, B, c, _ad_vector_images(spec, A), _ad_vector_images(spec, B)) for A, B, c in terms]

    def fn(x: Element) -> Element:
        out = Element.zero(spec.n, spec.m)
        for A, B, c, img_a, img_b in prepared:
            t = wedge(A, _derive(x, img_b, odd=False)) - wedge(B, _derive(x, img_a, odd=False))
            out = out + t.scale(c)
        return out

    return _assemble(spec, (1, 0), fn)


# ---------------------------------------------------------------------------
# Poisson checks and the total differential


@dataclass
class PoissonVerdict:
    holomorphic: bool
    poisson: bool
    dbar_witness: Element
    bracket_witness: Element

    def __bool__(self):
        return self.holomorphic and self.poisson


class NotHolomorphicPoissonError(ValueError):
    def __init__(self, verdict: PoissonVerdict):
        failed = []
        if not verdict.holomorphic:
            failed.append(f"dbar Λ = {verdict.dbar_witness!r} != 0")
        if not verdict.poisson:
            failed.append(f"[Λ, Λ] = {verdict.bracket_witness!r} != 0")
        super().__init__("bivector is not holomorphic Poisson: " + "; ".join(failed))
        self.verdict = verdict


def is_holomorphic_poisson(spec: AlgebraSpec, Lam) -> PoissonVerdict:
    el = Lam.element if isinstance(Lam, Bivector) else Lam
    d = dbar_apply(spec, el)
    br = ad_bivector_apply(spec, el, el)
    return PoissonVerdict(d.is_zero(), br.is_zero(), d, br)


def holomorphic_bivectors(spec: AlgebraSpec, types: tuple[TypeIndex, ...] | None = None) -> list[Bivector]:
    """Basis of ``ker dbar`` on B^{2,0} (optionally restricted to given types)."""
    N = spec.N
    src = [mk for mk in basis_masks(N, 2, 0)]
    if types is not None:
        from .model import type_of

        src = [mk for mk in src if type_of(spec.n, spec.m, mk) in types]
    tgt = basis_masks(N, 2, 1)
    index = {mk: i for i, mk in enumerate(tgt)}
    images = _dbar_images(spec)
    ent = {}
    for c, mk in enumerate(src):
        img = _derive(Element(spec.n, spec.m, {mk: Q(1)}), images, odd=True)
        for r_mk, v in img.terms.items():
            ent[(index[r_mk], c)] = v
    ker = kernel_basis(SparseMatrix(len(tgt), len(src), ent))
    return [Bivector(Element.from_vector(spec.n, spec.m, src, vec)) for vec in ker.sparse_basis()]


def k_basis(N: int, deg: int) -> list[tuple[int, int]]:
    """``[(p, mask)]`` for K^deg = sum_{p+q=deg} B^{p,q}, ordered by p then basis order."""
    out = []
    for p in range(deg + 1):
        for mk in basis_masks(N, p, deg - p):
            out.append((p, mk))
    return out


@dataclass
class TotalDifferential:
    """``D = dbar + ad_Λ`` on ``K^deg``, with both pieces kept as graded operators."""

    spec: AlgebraSpec
    dbar: GradedOperator
    ad: GradedOperator
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return 2 * self.spec.N

    def basis(self, deg: int) -> list[tuple[int, int]]:
        return k_basis(self.spec.N, deg) if 0 <= deg <= self.top else []

    def offsets(self, deg: int) -> dict[int, int]:
        """Start index of each ``B^{p, deg-p}`` block inside ``K^deg``."""
        out = {}
        pos = 0
        for p in range(deg + 1):
            out[p] = pos
            pos += len(basis_masks(self.spec.N, p, deg - p))
        return out

    def matrix(self, deg: int) -> SparseMatrix:
        """Matrix of ``D: K^deg -> K^{deg+1}``."""
        if deg in self._cache:
            return self._cache[deg]
        src_off = self.offsets(deg)
        tgt_off = self.offsets(deg + 1)
        rows = len(self.basis(deg + 1))
        cols = len(self.basis(deg))
        ent: dict[tuple[int, int], GaussianRational] = {}
        for p in range(deg + 1):
            q = deg - p
            for op, (dp, dq) in ((self.dbar, (0, 1)), (self.ad, (1, 0))):
                blk = op.block(p, q)
                if p + dp > deg + 1:
                    continue
                r0, c0 = tgt_off.get(p + dp, 0), src_off[p]
                for (r, c), v in blk.entries.items():
                    key = (r0 + r, c0 + c)
                    ent[key] = ent[key] + v if key in ent else v
        mat = SparseMatrix(max(rows, 0), cols, ent)
        self._cache[deg] = mat
        return mat

    def __call__(self, x: Element) -> Element:
        return self.dbar(x) + self.ad(x)


def total_differential(spec: AlgebraSpec, Lam, check: bool = True) -> TotalDifferential:
    """``D = dbar + ad_Λ``; refuses Λ that is not holomorphic Poisson."""
    verdict = is_holomorphic_poisson(spec, Lam)
    if not verdict:
        raise NotHolomorphicPoissonError(verdict)
    D = TotalDifferential(spec, dbar(spec), ad_bivector(spec, Lam))
    if check:
        for deg in range(D.top):
            if not (D.matrix(deg + 1) @ D.matrix(deg)).is_zero():
                raise ArithmeticError(f"D∘D != 0 on K^{deg}")
    return D


def is_schouten_central(spec: AlgebraSpec, Lam2) -> bool:
    """True iff ``ad_{Λ2}`` kills every degree-1 generator (so all of B^{•,•})."""
    el = Lam2.element if isinstance(Lam2, Bivector) else Lam2
    for t in type_components(el):
        if t != TypeIndex(2, 0, 0, 0):
            raise ValueError(f"Λ2 must lie in t^(2,0); found a component of type {tuple(t)}")
    n, m = spec.n, spec.m
    for g in range(2 * spec.N):
        x = Element(n, m, {1 << g: Q(1)})
        if not ad_bivector_apply(spec, el, x).is_zero():
            return False
    return True
