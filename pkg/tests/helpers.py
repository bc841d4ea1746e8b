"""Shared fixtures: seeded random algebras, holomorphic bivectors, the test corpus."""

import random
from fractions import Fraction

from hpss.calculus import Bivector, holomorphic_bivectors, is_holomorphic_poisson, is_schouten_central
from hpss.exact import GaussianRational as G
from hpss.model import AlgebraSpec, Element, TypeIndex, builtin_example


def rand_q(rng, bound=5):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_g(rng, bound=5):
    return G(rand_q(rng, bound), rand_q(rng, bound))


def random_spec(rng, n, m, density=0.5):
    entries = {}
    for l in range(1, m + 1):
        for k in range(1, n + 1):
            for j in range(1, n + 1):
                if rng.random() < density:
                    entries[(l, k, j)] = rand_g(rng)
    return AlgebraSpec.from_entries(n, m, entries, f"random(n={n},m={m})")


def random_holomorphic(rng, spec, keep=0.6):
    """Random combination of a basis of holomorphic bivectors (all are Poisson)."""
    el = Element.zero(spec.n, spec.m)
    for b in holomorphic_bivectors(spec):
        if rng.random() < keep:
            el = el + b.element.scale(rand_g(rng))
    return Bivector(el)


def w_wedge(spec, T, l=1):
    return Bivector.wedge_of(Element.gen(spec.n, spec.m, f"W{l}"), T)


def t_vector(spec, coeffs):
    el = Element.zero(spec.n, spec.m)
    for j, c in enumerate(coeffs, 1):
        if c:
            el = el + Element.gen(spec.n, spec.m, f"T{j}", c)
    return el


def random_m1_lambda(rng, spec):
    """W∧T plus a holomorphic t^(2,0) part, for an m = 1 algebra."""
    coeffs = [rand_g(rng) if rng.random() < 0.7 else G(0) for _ in range(spec.n)]
    lam = w_wedge(spec, t_vector(spec, coeffs)).element
    for b in holomorphic_bivectors(spec, types=(TypeIndex(2, 0, 0, 0),)):
        if rng.random() < 0.5:
            lam = lam + b.element.scale(rand_g(rng))
    return Bivector(lam)


def wt(spec, j):
    return w_wedge(spec, Element.gen(spec.n, spec.m, f"T{j}"))


def example_cases():
    """(label, spec, Λ, expected page) for every reproduced example."""
    cases = []
    for n in (1, 2, 3):
        s = builtin_example("heis_ext", n=n)
        cases += [(f"heis_ext(n={n}) W^T{j}", s, wt(s, j), 1) for j in range(1, n + 1)]
    rng = random.Random(7)
    for m, n in ((1, 1), (2, 1)):
        s = builtin_example("heis_sum", m=m, n=n)
        cases += [(f"heis_sum({m},{n}) W^T{j}", s, wt(s, j), 1) for j in range(1, s.n + 1)]
        combo = t_vector(s, [G(rand_q(rng)) for _ in range(s.n)])
        cases.append((f"heis_sum({m},{n}) W^(rational combination)", s, w_wedge(s, combo), 1))
    for k in (0, 1):
        s = builtin_example("P4n2", k=k)
        cases += [(f"P4n2(k=0..{k}) W^T{j}", s, wt(s, j), 1) for j in range(1, s.n + 1)]
    s = builtin_example("W4n6", k=0)
    cases.append(("W4n6(k=0..0) W^T2", s, wt(s, 2), 1))
    cases.append(("W4n6(k=0..0) W^T1", s, wt(s, 1), 2))
    return cases


def random_corpus(seed=2024, count=24):
    """Seeded random (spec, Λ) pairs with n <= 3, m <= 2; at most a few with n + m = 5."""
    rng = random.Random(seed)
    out = []
    big = 0
    while len(out) < count:
        n, m = rng.randint(1, 3), rng.randint(1, 2)
        if n + m == 5:
            if big >= 3:
                continue
            big += 1
        spec = random_spec(rng, n, m, density=rng.choice((0.3, 0.6)))
        out.append((f"random#{len(out)} n={n} m={m}", spec, random_holomorphic(rng, spec)))
    return out


def m1_corpus(seed=99, count=40):
    """Seeded m = 1 instances with Λ = W∧T + Λ2, mixing sparse and dense constants."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, 3)
        spec = random_spec(rng, n, 1, density=rng.choice((0.25, 0.5, 0.9)))
        out.append((f"m1#{i} n={n}", spec, random_m1_lambda(rng, spec)))
    return out


def noncentral_m1_corpus(seed=5, count=10):
    """m = 1, n = 3 instances whose t^(2,0) part is not Schouten-central."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        spec = random_spec(rng, 3, 1, density=rng.choice((0.3, 0.6, 1.0)))
        bad = [b for b in holomorphic_bivectors(spec, types=(TypeIndex(2, 0, 0, 0),))
               if not is_schouten_central(spec, b.element)]
        if not bad:
            continue
        lam = Bivector(random_m1_lambda(rng, spec).element + bad[0].element)
        if is_holomorphic_poisson(spec, lam):
            out.append((f"m1-noncentral#{len(out)}", spec, lam))
    return out


def corpus():
    return [(label, s, lam) for label, s, lam, _ in example_cases()] + random_corpus()
