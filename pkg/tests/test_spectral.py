import json
import random
from math import comb

import pytest

from hpss.calculus import Bivector, ad_bivector, dbar
from hpss.exact import GaussianRational as G
from hpss.exact import Subspace, image_basis, kernel_basis, rank
from hpss.model import AlgebraSpec, Element, basis_masks, builtin_example, wedge
from hpss.spectral import (
    SpectralSequence,
    ZigzagPreconditionError,
    d2_crosscheck,
    d2_zigzag,
    degeneracy_page,
    dolbeault_dims,
    drho_rank,
    exactness_solver,
    max_pages,
    page,
    poisson_cohomology_dims,
)

from helpers import random_corpus, random_holomorphic, random_spec, wt
from oracle import cohomology_dim

EX1 = builtin_example("heis_ext", n=1)
EX3 = builtin_example("W4n6", k=0)


def g(spec, name, c=1):
    return Element.gen(spec.n, spec.m, name, c)


# --- Dolbeault and total cohomology -------------------------------------------


def test_dolbeault_abelian():
    dims = dolbeault_dims(AlgebraSpec.zero(1, 1)).dims
    assert dims == {(p, q): comb(2, p) * comb(2, q) for p in range(3) for q in range(3)}


def test_dolbeault_example1():
    dims = dolbeault_dims(EX1).dims
    assert dims[(1, 0)] == 1
    assert dims[(0, 0)] == 1


def test_dolbeault_against_oracle():
    rng = random.Random(4)
    for _ in range(6):
        spec = random_spec(rng, rng.randint(1, 2), rng.randint(1, 2))
        op = dbar(spec)
        table = dolbeault_dims(spec)
        assert table.dims[(0, 0)] == 1
        for (p, q), d in table.dims.items():
            size = len(basis_masks(spec.N, p, q))
            out = op.block(p, q).to_dense() if op.block(p, q).rows else None
            inc = op.block(p, q - 1).to_dense() if q > 0 and op.block(p, q - 1).cols else None
            assert d == cohomology_dim(size, inc, out)


def test_poisson_cohomology_trivial():
    spec = AlgebraSpec.zero(1, 1)
    total = poisson_cohomology_dims(spec, Bivector.zero(spec)).total
    assert total == {n: comb(4, n) for n in range(5)}


def test_poisson_cohomology_euler_and_oracle():
    for label, spec, lam in random_corpus(count=8):
        table = poisson_cohomology_dims(spec, lam)
        assert table.euler() == 0
        if spec.N <= 3:
            from hpss.calculus import total_differential

            D = total_differential(spec, lam)
            for n in range(2 * spec.N + 1):
                size = len(D.basis(n))
                out = D.matrix(n).to_dense() if n < D.top else None
                inc = D.matrix(n - 1).to_dense() if n > 0 else None
                assert table.total[n] == cohomology_dim(size, inc, out), label


def test_example1_total_equals_e1():
    table = poisson_cohomology_dims(EX1, wt(EX1, 1))
    assert table.total == dolbeault_dims(EX1).by_degree()


# --- pages --------------------------------------------------------------------


def test_first_page_is_dolbeault():
    for _, spec, lam in random_corpus(count=10):
        assert page(spec, lam, 1).dims == dolbeault_dims(spec).dims


def test_abelian_pages_constant():
    spec = AlgebraSpec.zero(2, 1)
    lam = Bivector(wedge(g(spec, "T1"), g(spec, "T2")) + wt(spec, 1).element)
    seq = SpectralSequence(spec, lam)
    first = seq.page(1)
    for r in range(1, spec.N + 2):
        pg = seq.page(r)
        assert pg.dims == first.dims
        assert pg.differential_is_zero()


def test_example3_d1_nonzero_at_01():
    d1 = page(EX3, wt(EX3, 1), 1).d_blocks[(0, 1)]
    assert not d1.is_zero()


def _dolbeault_reps(spec, p, q, op):
    Z = kernel_basis(op.block(p, q))
    B = image_basis(op.block(p, q - 1)) if q > 0 else Subspace.zero(Z.ambient_dim)
    return Subspace.span_int_rows(Z.ambient_dim, [B.normal_form_int(r) for r in Z.int_rows()]), B


def test_d1_is_induced_by_ad():
    """Bi-graded route: dbar-cohomology reps, apply ad_Λ, reduce mod im dbar."""
    cases = [(EX3, wt(EX3, 1))] + [(s, l) for _, s, l in random_corpus(count=6)]
    for spec, lam in cases:
        op, ad = dbar(spec), ad_bivector(spec, lam)
        pg = page(spec, lam, 1)
        N = spec.N
        for p in range(N):
            for q in range(N + 1):
                R, _ = _dolbeault_reps(spec, p, q, op)
                R2, B2 = _dolbeault_reps(spec, p + 1, q, op)
                blk = pg.d_blocks[(p, q)]
                assert (blk.rows, blk.cols) == (R2.dim, R.dim)
                for c, x in enumerate(R.sparse_basis()):
                    y = ad.block(p, q).apply_sparse(x)
                    coords = R2.coordinates(B2.normal_form(y))
                    assert coords == [blk.entries.get((r, c), G(0)) for r in range(R2.dim)]


@pytest.mark.parametrize("idx", range(8))
def test_page_invariants(idx):
    label, spec, lam = random_corpus()[idx]
    seq = SpectralSequence(spec, lam)
    h = poisson_cohomology_dims(spec, lam, seq.D).total
    pages = seq.pages(spec.N + 1)
    for pg, nxt in zip(pages, pages[1:]):
        assert pg.euler() == 0
        for (p, q), d in pg.dims.items():
            assert nxt.dims[(p, q)] <= d
            out = pg.d_blocks[(p, q)]
            src = (p - pg.r, q + pg.r - 1)
            inc = pg.d_blocks.get(src)
            expected = d - rank(out) - (rank(inc) if inc is not None else 0)
            assert nxt.dims[(p, q)] == expected, label
            tgt = (p + pg.r, q - pg.r + 1)
            if tgt in pg.d_blocks and out.rows and pg.d_blocks[tgt].rows:
                assert (pg.d_blocks[tgt] @ out).is_zero()
    assert pages[-1].total_dims() == h


def test_split_and_unsplit_agree():
    for _, spec, lam in random_corpus(count=6):
        a = SpectralSequence(spec, lam, split=True)
        b = SpectralSequence(spec, lam, split=False)
        for r in (1, 2, 3):
            pa, pb = a.page(r), b.page(r)
            assert pa.dims == pb.dims
            assert pa.reps == pb.reps
            assert pa.d_blocks == pb.d_blocks


def test_reps_are_canonical_bytes():
    lam = wt(EX3, 1)
    a = page(EX3, lam, 2)
    b = page(EX3, lam, 2)
    assert a.reps == b.reps and a.d_blocks == b.d_blocks


# --- d2 -------------------------------------------------------------------------


def test_zigzag_rhobar_free_type_has_zero_gamma():
    lam = wt(EX1, 1)
    res = d2_zigzag(EX1, lam, g(EX1, "W1"))
    assert res.gamma.is_zero() and res.zero_class
    res = d2_zigzag(EX1, lam, wedge(g(EX1, "W1"), g(EX1, "wb1")))
    assert res.gamma.is_zero() and res.zero_class


def test_zigzag_preconditions():
    lam = wt(EX1, 1)
    with pytest.raises(ZigzagPreconditionError, match="dbar-closed"):
        d2_zigzag(EX1, lam, g(EX1, "T1"))
    # rho-bar survives: ad_Λ(rho-bar) = -(i/2) W∧wb = -dbar T is exact
    assert d2_zigzag(EX1, lam, g(EX1, "rb1")).zero_class
    # a class with d1 != 0 has no zig-zag
    lam3 = wt(EX3, 1)
    seq = SpectralSequence(EX3, lam3)
    d1 = seq.page(1).d_blocks[(0, 1)]
    col = next(c for _, c in d1.entries)
    rep = seq.element_of(1, seq.page(1).reps[(0, 1)].sparse_basis()[col])
    with pytest.raises(ZigzagPreconditionError, match="dbar-exact"):
        d2_zigzag(EX3, lam3, rep)


def test_zigzag_zero_for_m1_examples():
    for spec, lam in ((EX3, wt(EX3, 1)), (EX1, wt(EX1, 1))):
        report = d2_crosscheck(spec, lam)
        assert report["ok"] and report["zigzag_d2_zero"] and report["filtered_d2_zero"]


def test_zigzag_matches_filtered_with_nonzero_d2():
    """m = 2 instances can carry a nonzero d2; both routes must agree there too."""
    rng = random.Random(12)
    spec = random_spec(rng, 3, 2, density=0.3)
    lam = random_holomorphic(rng, spec, keep=1.0)
    report = d2_crosscheck(spec, lam)
    assert not report["filtered_d2_zero"] and not report["zigzag_d2_zero"]
    assert report["ok"] and report["checked"] == report["agreed"] > 0


# --- degeneracy -------------------------------------------------------------------


def test_degeneracy_examples():
    assert degeneracy_page(EX1, wt(EX1, 1)).page == 1
    assert ad_bivector(EX3, wt(EX3, 2)).is_zero()
    assert degeneracy_page(EX3, wt(EX3, 2)).page == 1
    rep = degeneracy_page(EX3, wt(EX3, 1))
    assert rep.page == 2
    assert rep.checks == {"m_is_1": True, "drhobar_rank": 1, "lambda2_central": True, "exactness_solvable": False}


def test_pure_center():
    spec = AlgebraSpec.zero(0, 2)
    rep = degeneracy_page(spec, Bivector(wedge(g(spec, "W1"), g(spec, "W2"))))
    assert rep.page == 1


def test_report_json_shape():
    rep = degeneracy_page(EX1, wt(EX1, 1))
    obj = json.loads(json.dumps(rep.to_json()))
    assert set(obj) >= {"e_pages", "h_lambda", "degeneracy_page", "checks"}
    assert obj["e_pages"][0]["r"] == 1
    assert obj["h_lambda"] == [[n, d] for n, d in sorted(rep.h_lambda.items())]


def test_page_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HPSS_MAX_PAGES", "1")
    assert max_pages(EX3) == 1
    rep = degeneracy_page(EX3, wt(EX3, 1))
    assert len(rep.pages) == 1 and not rep.converged
    monkeypatch.setenv("HPSS_MAX_PAGES", "zero")
    with pytest.raises(ValueError):
        max_pages(EX3)
    monkeypatch.delenv("HPSS_MAX_PAGES")
    assert max_pages(EX3) == EX3.N + 1


# --- exactness equation -------------------------------------------------------------


def test_exactness_examples():
    assert exactness_solver(EX1, g(EX1, "T1")) == g(EX1, "T1", -1)
    assert exactness_solver(EX3, g(EX3, "T1")) is None
    assert exactness_solver(EX3, Element.zero(EX3.n, EX3.m)).is_zero()


def test_drho_rank_examples():
    r, rb, ker = drho_rank(EX1)
    assert (r, rb, ker.dim) == (1, 1, 0)
    r, rb, ker = drho_rank(builtin_example("heis_sum", m=1, n=1))
    assert (r, rb, ker.dim) == (2, 2, 0)
    for k in (0, 1, 2):
        spec = builtin_example("W4n6", k=k)
        _, rb, ker = drho_rank(spec)
        assert rb == k + 1
        assert ker == Subspace.coordinate(spec.n, [2 * b + 1 for b in range(k + 1)])


def test_m_not_one_rejected():
    spec = AlgebraSpec.zero(1, 2)
    with pytest.raises(ValueError):
        drho_rank(spec)
    with pytest.raises(ValueError):
        exactness_solver(spec, g(spec, "T1"))
