import json
import random
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hpss.exact import GaussianRational as G
from hpss.model import (
    AlgebraSpec,
    Element,
    RealFrameSpec,
    TypeIndex,
    basis,
    basis_masks,
    builtin_example,
    builtin_real_frame,
    complexify,
    contract,
    example_catalog,
    type_components,
    validate,
    wedge,
)
from hpss.calculus import d_form

from helpers import random_spec

HALF = Fraction(1, 2)


def gen(spec_or_nm, name, c=1):
    n, m = (spec_or_nm.n, spec_or_nm.m) if hasattr(spec_or_nm, "n") else spec_or_nm
    return Element.gen(n, m, name, c)


# --- validation ------------------------------------------------------------


def test_validate_abelian_warns():
    rep = validate(AlgebraSpec.zero(2, 1))
    assert rep.valid and rep.m_is_1
    assert "declared center strictly contains derived algebra" in rep.warnings


def test_validate_example1_clean():
    rep = validate(builtin_example("heis_ext", n=1))
    assert rep.valid and rep.warnings == []


def test_validate_flags_unused_w2():
    spec = AlgebraSpec.from_entries(1, 2, {(1, 1, 1): 1})
    rep = validate(spec)
    assert rep.valid and not rep.m_is_1
    assert any("W2" in w for w in rep.warnings)
    assert not any("W1" in w for w in rep.warnings)


def test_malformed_dimensions():
    with pytest.raises(ValueError):
        AlgebraSpec.from_entries(-1, 1, {})
    with pytest.raises(ValueError):
        AlgebraSpec.from_entries(1, 1, {(2, 1, 1): 1})


# --- complexification ------------------------------------------------------


def test_example1_constants():
    spec = complexify(builtin_real_frame("heis_ext", n=2))
    assert spec.entries() == {(1, 1, 1): G(0, -HALF), (1, 2, 2): G(0, -HALF)}


def test_example2_constants():
    spec = complexify(builtin_real_frame("heis_sum", m=1, n=1))
    assert spec.entries() == {(1, 1, 1): G(0, -HALF), (1, 2, 2): G(HALF)}


def test_example3_constants():
    spec = complexify(builtin_real_frame("W4n6", k=1))
    assert spec.entries() == {(1, 1, 2): G(-HALF), (1, 3, 4): G(-HALF)}


def test_example4_constants():
    spec = builtin_example("P4n2", k=0)
    q = Fraction(1, 4)
    assert spec.entries() == {(1, 1, 1): G(0, q), (1, 1, 2): G(-q), (1, 2, 1): G(-q)}


@pytest.mark.parametrize(
    "name,sizes",
    [("heis_ext", {"n": n}) for n in (1, 2, 3)]
    + [("heis_sum", {"m": m, "n": n}) for m in (1, 2, 3) for n in (1, 2, 3) if m + n <= 4]
    + [("W4n6", {"k": k}) for k in (0, 1, 2)]
    + [("P4n2", {"k": k}) for k in (0, 1, 2)],
)
def test_builtin_matches_complexified_frame(name, sizes):
    rf = builtin_real_frame(name, **sizes)
    rf.check()
    assert complexify(rf) == builtin_example(name, **sizes)


def test_bad_sizes():
    with pytest.raises(ValueError):
        builtin_example("heis_ext", n=0)
    with pytest.raises(ValueError):
        builtin_example("W4n6", k=-1)
    with pytest.raises(ValueError):
        builtin_example("nope")


def test_real_frame_round_trip():
    rf = builtin_real_frame("W4n6", k=1)
    assert RealFrameSpec.from_json(json.loads(json.dumps(rf.to_json()))) == rf


def _frame(**changes):
    obj = builtin_real_frame("heis_ext", n=1).to_json()
    obj.update(changes)
    return RealFrameSpec.from_json(obj)


def test_real_frame_rejects_bad_j():
    with pytest.raises(ValueError):
        _frame(J={"X1": "Y1", "Y1": "X1", "Z": "A", "A": "-Z"}).check()


def test_real_frame_rejects_noncentral_bracket():
    with pytest.raises(ValueError):
        _frame(brackets=[{"a": "X1", "b": "Y1", "value": {"X1": "1"}}]).check()


def test_real_frame_rejects_non_abelian_j():
    # [X, Z] = Z but [JX, JZ] = [Y, A] = 0 and Z is not central anyway
    with pytest.raises(ValueError):
        _frame(brackets=[{"a": "X1", "b": "Y1", "value": {"Z": "1"}}, {"a": "X1", "b": "Z", "value": {"Z": "1"}}]).check()


def test_catalog_has_four_families():
    cat = example_catalog()
    assert [c["name"] for c in cat] == ["heis_ext", "heis_sum", "W4n6", "P4n2"]
    heis_sum = cat[1]
    assert {(e["l"], e["k"], e["j"]): G.from_json(e) for e in heis_sum["E"]} == {(1, 1, 1): G(0, -HALF), (1, 2, 2): G(HALF)}


# --- JSON ------------------------------------------------------------------


def test_spec_json_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        spec = random_spec(rng, rng.randint(0, 3), rng.randint(0, 2))
        text = spec.dumps()
        back = AlgebraSpec.from_json(json.loads(text))
        assert back == spec and back.dumps() == text


def test_spec_json_format():
    spec = builtin_example("heis_ext", n=1)
    assert spec.to_json() == {"name": "heis_ext(n=1)", "n": 1, "m": 1, "E": [{"l": 1, "k": 1, "j": 1, "re": "0/1", "im": "-1/2"}]}


# --- bases and wedge -------------------------------------------------------


def test_basis_examples():
    spec = builtin_example("heis_ext", n=1)
    b = basis(spec, 1, 1)
    assert len(b) == 4
    (empty,) = basis(spec, 0, 0)
    assert empty.vec_idx == () and empty.form_idx == ()
    assert len(basis(builtin_example("heis_sum", m=1, n=1), 2, 1)) == 9
    assert basis(spec, 3, 0) == []


def test_basis_lengths():
    for N in range(0, 7):
        for p in range(N + 1):
            for q in range(N + 1):
                assert len(basis_masks(N, p, q)) == comb(N, p) * comb(N, q)


def test_basis_lexicographic():
    spec = AlgebraSpec.zero(2, 1)
    mons = basis(spec, 2, 1)
    keys = [(m.vec_idx, m.form_idx) for m in mons]
    assert keys == sorted(keys)
    assert [m.vec_idx for m in mons[::3]] == list(combinations(range(3), 2))


def test_wedge_examples():
    nm = (2, 1)
    w1, w2 = gen(nm, "wb1"), gen(nm, "wb2")
    assert wedge(w1, w2) == -wedge(w2, w1)
    assert wedge(gen(nm, "T1"), gen(nm, "T1")).is_zero()
    wt = wedge(gen((1, 1), "W1"), gen((1, 1), "T1"))
    assert list(wt.terms.values()) == [G(-1)]
    ((mono, coeff),) = wt.monomials().items()
    assert mono.vec_idx == (0, 1) and mono.form_idx == () and coeff == G(-1)


def _perm_sign(seq):
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(0, 7), max_size=4), st.sets(st.integers(0, 7), max_size=4))
def test_wedge_sign_matches_permutation_parity(a, b):
    n, m = 2, 2  # generators 0..7: vectors then forms
    x = Element(n, m, {sum(1 << i for i in a): G(1)})
    y = Element(n, m, {sum(1 << i for i in b): G(1)})
    z = wedge(x, y)
    if a & b:
        assert z.is_zero()
    else:
        assert list(z.terms.values()) == [G(_perm_sign(sorted(a) + sorted(b)))]


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_graded_commutativity(data):
    n, m = 2, 1
    N = 3

    def homogeneous():
        p = data.draw(st.integers(0, N))
        q = data.draw(st.integers(0, N))
        masks = basis_masks(N, p, q)
        picks = data.draw(st.lists(st.sampled_from(masks), min_size=1, max_size=3))
        return Element(n, m, {mk: G(data.draw(st.integers(-3, 3)) or 1) for mk in picks}), p + q

    x, dx = homogeneous()
    y, dy = homogeneous()
    assert wedge(x, y) == wedge(y, x).scale((-1) ** (dx * dy))
    z, _ = homogeneous()
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


# --- contraction and types -------------------------------------------------


def test_contract_examples():
    nm = (2, 1)
    form = wedge(gen(nm, "w1"), gen(nm, "wb1"))
    assert contract(gen(nm, "T1"), form) == gen(nm, "wb1")
    assert contract(gen(nm, "T2"), form).is_zero()
    spec = builtin_example("heis_ext", n=1)
    assert contract(gen(spec, "T1"), d_form(spec, "rb1")) == gen(spec, "wb1", G(0, -HALF))


def test_contract_leibniz():
    nm = (2, 1)
    a = wedge(gen(nm, "w1"), gen(nm, "w2"))
    b = gen(nm, "r1")
    V = gen(nm, "T1") + gen(nm, "W1", G(0, 2))
    lhs = contract(V, wedge(a, b))
    rhs = wedge(contract(V, a), b) + wedge(a, contract(V, b))  # |a| = 2
    assert lhs == rhs


def test_type_components_examples():
    nm = (2, 1)
    wt = wedge(gen(nm, "W1"), gen(nm, "T1"))
    assert list(type_components(wt)) == [TypeIndex(1, 1, 0, 0)]
    assert list(type_components(gen(nm, "rb1"))) == [TypeIndex(0, 0, 0, 1)]
    x = wedge(gen(nm, "T1"), gen(nm, "T2")) + wt
    comps = type_components(x)
    assert set(comps) == {TypeIndex(2, 0, 0, 0), TypeIndex(1, 1, 0, 0)}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.data())
def test_type_components_partition(p, q, data):
    n, m = 2, 1
    masks = basis_masks(3, p, q)
    picks = data.draw(st.sets(st.sampled_from(masks), min_size=1, max_size=6))
    x = Element(n, m, {mk: G(1, data.draw(st.integers(-2, 2))) for mk in picks})
    comps = type_components(x)
    total = Element.zero(n, m)
    seen = set()
    for t, c in comps.items():
        assert not (set(c.terms) & seen)
        seen |= set(c.terms)
        assert t.k + t.l == p and t.a + t.b == q
        total = total + c
    assert total == x
