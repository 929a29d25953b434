"""Closed subgroups of R^d generated by finitely many K-vectors and K-lines.

A closed subgroup is stored as V (+) Lambda: a reduced echelon K-basis of
the subspace part and a Z-basis of a relative lattice with
V cap span(Lambda) = {0}.

How :func:`closure` works.  Put the atoms g_1..g_n and line directions
h_1..h_p as the columns of a d x (n+p) matrix A, so the generated group is
A(Z^n x R^p).  Then

1. closure(A(Z^n x R^p)) = A(closure(Z^n x R^p + ker A)), because the
   quotient map by ker A is open and the set on the right is saturated;
2. a closed subgroup of R^(n+p) is its own double annihilator, and the
   annihilator of Z^n x R^p + ker A is M = {(m, 0) : m in Z^n, m ⊥ ker A},
   so closure(Z^n x R^p + ker A) = {y : m.y in Z for all m in M};
3. m ⊥ ker A is a finite set of rational conditions (the kernel has a
   K-basis), so M is the saturated integer kernel of a rational matrix;
4. with B the r x (n+p) matrix of a Z-basis of M, {y : By in Z^r} is
   ker(B) (+) sum Z x_i with B x_i = e_i; its image under A is
   V = A ker(B) and lattice vectors w_i = A x_i.  The functionals
   phi_i(Ay) = m_i.y are well defined on the column space of A and satisfy
   phi_i(w_j) = delta_ij, phi_i(V) = 0, so the w_i are independent modulo V
   and the sum is direct.

Each w_i is finally reduced modulo V to vanish on V's pivot coordinates,
which fixes a canonical complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .errors import FieldMismatch, InsufficientPrecision
from .linalg import (
    columns_to_rows,
    echelon_basis,
    integer_kernel,
    kernel_basis,
    orthogonality_system,
    rank,
    solve,
)
from .scalar import QQ_FIELD, Field, KVector, Scalar, is_zero_vector, vscale

__all__ = [
    "GeneratorSet",
    "ClosedSubgroup",
    "closure",
    "member",
    "is_dense",
    "one_annihilator",
    "equals",
    "group_sum",
]


def _infer_field(vectors, fallback: Field | None) -> Field:
    fields = {x.field for v in vectors for x in v}
    if len(fields) > 1:
        raise FieldMismatch(f"generators live in different fields: {fields}")
    if fields:
        f = fields.pop()
        if fallback is not None and fallback != f:
            raise FieldMismatch(f"{f} vs {fallback}")
        return f
    return fallback or QQ_FIELD


def _dedupe(vectors) -> tuple[KVector, ...]:
    out = []
    seen = set()
    for v in vectors:
        v = tuple(v)
        if is_zero_vector(v) or v in seen:
            continue
        seen.add(v)
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class GeneratorSet:
    dim: int
    atoms: tuple = ()
    lines: tuple = ()
    field: Field | None = None

    def __post_init__(self):
        atoms = tuple(tuple(v) for v in self.atoms)
        lines = tuple(tuple(v) for v in self.lines)
        for v in atoms + lines:
            if len(v) != self.dim:
                raise ValueError(f"generator {v} does not have length {self.dim}")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "field", _infer_field(atoms + lines, self.field))


@dataclass(frozen=True)
class ClosedSubgroup:
    dim: int
    field: Field
    v_basis: tuple = ()
    lattice_basis: tuple = ()
    notes: tuple = dc_field(default=(), compare=False)

    @property
    def subspace_dim(self) -> int:
        return len(self.v_basis)

    @property
    def lattice_rank(self) -> int:
        return len(self.lattice_basis)

    def is_dense(self) -> bool:
        return is_dense(self)

    def __contains__(self, x) -> bool:
        return member(self, x)

    def to_dict(self) -> dict:
        return {
            "v_basis": [[str(x) for x in v] for v in self.v_basis],
            "lattice_basis": [[str(x) for x in v] for v in self.lattice_basis],
        }

    def scaled(self, q) -> ClosedSubgroup:
        return ClosedSubgroup(self.dim, self.field, self.v_basis,
                              tuple(vscale(q, v) for v in self.lattice_basis))


def trivial_group(dim: int, field: Field = QQ_FIELD) -> ClosedSubgroup:
    return ClosedSubgroup(dim, field)


def full_space(dim: int, field: Field = QQ_FIELD) -> ClosedSubgroup:
    return ClosedSubgroup(dim, field, tuple(field.vector(int(i == j) for i in range(dim)) for j in range(dim)))


def _apply(cols: Sequence[KVector], y: Sequence[Fraction], field: Field) -> KVector:
    d = len(cols[0])
    out = [field.zero()] * d
    for c, coeff in zip(cols, y):
        if coeff:
            out = [o + coeff * x for o, x in zip(out, c)]
    return tuple(out)


def _orient(w: KVector) -> KVector:
    # first nonzero coordinate positive
    lead = next(x for x in w if not x.is_zero())
    try:
        negative = lead.sign() < 0
    except InsufficientPrecision:
        return w
    return tuple(-x for x in w) if negative else w


def closure(gen: GeneratorSet) -> ClosedSubgroup:
    d, F = gen.dim, gen.field
    atoms, lines = _dedupe(gen.atoms), _dedupe(gen.lines)
    n, p = len(atoms), len(lines)
    if n + p == 0:
        return trivial_group(d, F)
    cols = atoms + lines
    A = columns_to_rows(cols, d)

    # integer relations m in Z^n (line coordinates forced to 0) orthogonal to ker A
    ker = kernel_basis(A)
    if n == 0:
        M = []
    else:
        R = orthogonality_system([k[:n] for k in ker])
        M = integer_kernel(R, n) if R else [tuple(int(i == j) for i in range(n)) for j in range(n)]
    B = [[Fraction(x) for x in m] + [Fraction(0)] * p for m in M]

    if B:
        vc = kernel_basis(B)
    else:
        vc = [tuple(Fraction(int(i == j)) for i in range(n + p)) for j in range(n + p)]
    images = [w for w in (_apply(cols, y, F) for y in vc) if not is_zero_vector(w)]
    v_basis, pivots = echelon_basis(images)

    lattice = []
    for i in range(len(B)):
        e = [Fraction(int(i == j)) for j in range(len(B))]
        x = solve(B, e)
        w = _apply(cols, x, F)
        for v, pc in zip(v_basis, pivots):
            c = w[pc]
            if not c.is_zero():
                w = tuple(a - c * b for a, b in zip(w, v))
        lattice.append(_orient(w))

    assert len(v_basis) + len(lattice) == rank(A), "closure dimension bookkeeping failed"
    return ClosedSubgroup(d, F, tuple(v_basis), tuple(lattice))


def coordinates(G: ClosedSubgroup, x: Sequence[Scalar]):
    """Unique (v-coords, lattice-coords) of x in span(V) + span(Lambda), or None."""
    basis = G.v_basis + G.lattice_basis
    x = tuple(G.field.scalar(c) for c in x)
    if not basis:
        return ((), ()) if is_zero_vector(x) else None
    sol = solve(columns_to_rows(basis, G.dim), x)
    if sol is None:
        return None
    k = len(G.v_basis)
    return sol[:k], sol[k:]


def member(G: ClosedSubgroup, x: Sequence[Scalar]) -> bool:
    coords = coordinates(G, x)
    if coords is None:
        return False
    for c in coords[1]:
        q = c.rational_content()
        if q is None or q.denominator != 1:
            return False
    return True


def is_dense(G: ClosedSubgroup) -> bool:
    return len(G.v_basis) == G.dim


def one_annihilator(G: ClosedSubgroup) -> KVector | None:
    """Nonzero xi with xi ⊥ V and xi.lambda in Z for every lattice vector.

    None exactly when G is dense.  When V + span(Lambda) is a proper
    subspace any normal vector works; otherwise xi pairs to 1 with the first
    lattice vector and to 0 with the others.
    """
    if is_dense(G):
        return None
    F = G.field
    basis = list(G.v_basis) + list(G.lattice_basis)
    if len(basis) < G.dim:
        if not basis:
            return F.vector([1] + [0] * (G.dim - 1))
        return kernel_basis([list(v) for v in basis])[0]
    rhs = [F.zero()] * len(G.v_basis) + [F.one()] + [F.zero()] * (len(G.lattice_basis) - 1)
    xi = solve([list(v) for v in basis], rhs)
    assert xi is not None
    return xi


def in_span(vectors: Sequence[KVector], x: KVector) -> bool:
    if not vectors:
        return is_zero_vector(x)
    return solve(columns_to_rows(vectors, len(x)), x) is not None


def equals(G1: ClosedSubgroup, G2: ClosedSubgroup) -> bool:
    if G1.dim != G2.dim or len(G1.v_basis) != len(G2.v_basis):
        return False
    if not all(in_span(G2.v_basis, v) for v in G1.v_basis):
        return False
    if not all(in_span(G1.v_basis, v) for v in G2.v_basis):
        return False
    return (all(member(G2, v) for v in G1.v_basis + G1.lattice_basis)
            and all(member(G1, v) for v in G2.v_basis + G2.lattice_basis))


def group_sum(G1: ClosedSubgroup, G2: ClosedSubgroup) -> ClosedSubgroup:
    if G1.dim != G2.dim:
        raise ValueError("dimension mismatch")
    F = G1.field if (G1.v_basis or G1.lattice_basis) else G2.field
    return closure(GeneratorSet(G1.dim, atoms=G1.lattice_basis + G2.lattice_basis,
                                lines=G1.v_basis + G2.v_basis, field=F))


def dual_generators(G: ClosedSubgroup) -> tuple[list[KVector], list[KVector]]:
    """Generators of the annihilator {xi : xi.g in Z for all g in G}.

    Returns (lattice part, subspace part): every annihilator is an integer
    combination of the first list plus a real combination of the second.
    """
    basis = list(G.v_basis) + list(G.lattice_basis)
    rows = [list(v) for v in basis]
    F = G.field
    if not rows:
        normals = [F.vector(int(i == j) for i in range(G.dim)) for j in range(G.dim)]
    else:
        normals = kernel_basis(rows) if len(basis) < G.dim else []
    # dual lattice: xi ⊥ V and normals, xi.lambda_i = delta_ij
    duals = []
    k = len(G.v_basis)
    for i in range(len(G.lattice_basis)):
        A = rows + [list(nv) for nv in normals]
        rhs = ([F.zero()] * k + [F.one() if j == i else F.zero() for j in range(len(G.lattice_basis))]
               + [F.zero()] * len(normals))
        xi = solve(A, rhs)
        assert xi is not None
        duals.append(xi)
    return duals, normals
