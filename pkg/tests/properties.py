"""Randomised contracts, 1000 cases per property; driven from test_acceptance.py."""

import math
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from liouville.linalg import det, hnf, matmul, snf
from liouville.operator import CANONICAL, PURE_DIFFERENCE, Atom, LevyOperator, Sphere, StableSubspace, decide
from liouville.scalar import QQ_FIELD, FieldDescriptor, Scalar, make_field, norm2
from liouville.subgroup import GeneratorSet, closure, equals, member
from liouville.verify import apply_to_wave, wave_from_symbol

MANY = settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])

K = make_field(FieldDescriptor("multi-quadratic", (2, 3)))
K2 = make_field(FieldDescriptor("multi-quadratic", (2,)))

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=6)
nonzero_q = small_q.filter(lambda q: q != 0)


def k_scalar(F=K):
    return st.tuples(*[small_q] * F.size).map(lambda cs: Scalar(F, tuple(cs)))


# ---------------------------------------------------------------- scalar field axioms


@MANY
@given(k_scalar(), k_scalar(), k_scalar())
def prop_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0 and a + 0 == a and a * 1 == a
    if not a.is_zero():
        assert a * (1 / a) == 1
    # sign agrees with a float evaluation whenever the float is clearly nonzero
    f = sum(float(x) * math.sqrt(p) for x, p in zip(a.data, K.products))
    if abs(f) > 1e-9:
        assert a.sign() == (1 if f > 0 else -1)
    assert K.scalar(str(a)) == a


# ---------------------------------------------------------------- HNF / SNF


int_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=m, max_size=m)))


@MANY
@given(int_matrix)
def prop_hnf_contract(A):
    H, U = hnf(A)
    n = len(A[0])
    assert matmul(A, U) == H
    assert abs(det(U)) == 1
    # staircase: pivot rows strictly increase, entries left of a pivot reduced
    last = -1
    zero_seen = False
    for j in range(n):
        col = [H[i][j] for i in range(len(H))]
        if not any(col):
            zero_seen = True
            continue
        assert not zero_seen, "zero columns must come last"
        p = next(i for i, x in enumerate(col) if x)
        assert p > last and col[p] > 0
        for k in range(j):
            assert 0 <= H[p][k] < col[p]
        last = p


@MANY
@given(int_matrix)
def prop_snf_contract(A):
    S, U, V = snf(A)
    assert matmul(matmul(U, A), V) == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    for i, row in enumerate(S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)


# ---------------------------------------------------------------- closure


def k_vector(d, F=K2):
    return st.lists(k_scalar(F), min_size=d, max_size=d).map(tuple)


generator_sets = st.integers(1, 2).flatmap(lambda d: st.tuples(
    st.just(d),
    st.lists(k_vector(d), min_size=0, max_size=3),
    st.lists(k_vector(d), min_size=0, max_size=1),
))


@MANY
@given(generator_sets, small_q, nonzero_q)
def prop_closure_invariants(gs, t, q):
    d, atoms, lines = gs
    G = closure(GeneratorSet(d, atoms=atoms, lines=lines, field=K2))
    again = closure(GeneratorSet(d, atoms=G.lattice_basis, lines=G.v_basis, field=K2))
    assert again == G
    for g in atoms:
        assert member(G, g)
    for v in G.v_basis:
        assert member(G, tuple(t * x for x in v))
    for lam in G.lattice_basis:
        assert not member(G, tuple(x / 2 for x in lam))
    scaled = closure(GeneratorSet(d, atoms=[tuple(q * x for x in a) for a in atoms],
                                  lines=[tuple(q * x for x in h) for h in lines], field=K2))
    assert equals(scaled, G.scaled(q))


# ---------------------------------------------------------------- verdicts


def operators(F=K2, conventions=(CANONICAL, PURE_DIFFERENCE)):
    def build(d):
        atom = st.builds(lambda z, w, c: (z, w, c), k_vector(d, F), st.fractions(Fraction(1, 4), 3, max_denominator=4),
                         st.sampled_from(conventions))
        return st.tuples(
            st.just(d),
            st.lists(k_vector(d, F), max_size=1),
            k_vector(d, F),
            st.lists(atom, max_size=3),
        )
    return st.integers(1, 2).flatmap(build)


def make_op(raw, F=K2):
    d, sigma, drift, atoms = raw
    comps = tuple(Atom(z, w, c) for z, w, c in atoms if any(not x.is_zero() for x in z))
    return LevyOperator(d, F, sigma=tuple(sigma), drift=drift, components=comps)


def by_hand_canonical(op):
    b = list(op.drift)
    comps = []
    for a in op.components:
        if a.convention == PURE_DIFFERENCE and (norm2(a.z) - 1).sign() <= 0:
            b = [x + a.weight * y for x, y in zip(b, a.z)]
        comps.append(Atom(a.z, a.weight, CANONICAL))
    return LevyOperator(op.dim, op.field, sigma=op.sigma, drift=tuple(b), components=tuple(comps))


@MANY
@given(operators())
def prop_convention_invariance(raw):
    op = make_op(raw)
    assert decide(op) == decide(by_hand_canonical(op))


@MANY
@given(operators(conventions=(PURE_DIFFERENCE,)), nonzero_q)
def prop_scaling_pure_difference(raw, q):
    op = make_op(raw)
    scaled = LevyOperator(op.dim, op.field, sigma=tuple(tuple(q * x for x in s) for s in op.sigma),
                          drift=tuple(q * x for x in op.drift),
                          components=tuple(Atom(tuple(q * x for x in a.z), a.weight, a.convention)
                                           for a in op.components))
    v, w = decide(op), decide(scaled)
    assert v.liouville == w.liouville
    assert equals(w.period_group, v.period_group.scaled(q))


@MANY
@given(operators(), st.sampled_from([None, "1/2", "1"]))
def prop_verdict_consistency(raw, stable_alpha):
    op = make_op(raw)
    if stable_alpha is not None:
        op = LevyOperator(op.dim, op.field, op.sigma, op.drift,
                          op.components + (StableSubspace((K2.vector([1] * op.dim),), Fraction(stable_alpha) / 2),))
    v = decide(op)
    assert v.liouville == (v.counterexample is None) == (v.witness is None)
    if v.counterexample is not None:
        xi = v.counterexample
        for a in op.components:
            if isinstance(a, Atom):
                q = sum((x * y for x, y in zip(xi, a.z)), K2.zero()).rational_content()
                assert q is not None and q.denominator == 1


# ---------------------------------------------------------------- symbol paths


@MANY
@given(operators(), st.integers(0, 2**32 - 1), st.booleans())
def prop_symbol_path_equality(raw, seed, with_sphere):
    op = make_op(raw)
    if with_sphere:
        op = LevyOperator(op.dim, op.field, op.sigma, op.drift, op.components + (Sphere(K2.scalar("sqrt2/2")),))
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=op.dim)
    x = rng.uniform(-5, 5, size=op.dim)
    assume(np.all(np.isfinite(xi)))
    assert abs(apply_to_wave(op, xi, x) - wave_from_symbol(op, xi, x)) <= 1e-9


PROPERTIES = {
    "field_axioms": prop_field_axioms,
    "hnf_contract": prop_hnf_contract,
    "snf_contract": prop_snf_contract,
    "closure_invariants": prop_closure_invariants,
    "convention_invariance": prop_convention_invariance,
    "scaling_pure_difference": prop_scaling_pure_difference,
    "verdict_consistency": prop_verdict_consistency,
    "symbol_path_equality": prop_symbol_path_equality,
}
