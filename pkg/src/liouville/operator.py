"""Translation-invariant operators satisfying the maximum principle.

An operator is L = L^{sigma,b} + L^mu with

    L^{sigma,b}[u] = tr(sigma sigma^T D^2 u) + b . Du
    L^mu[u](x)     = int (u(x+z) - u(x) - z . Du(x) 1_{|z|<=1}) dmu(z)

and mu a finite sum of the measure components below.  Bounded solutions of
L[u] = 0 are exactly the functions periodic under the closure of
G_mu + span{sigma_1, ..., sigma_P, b + c_mu}; Liouville holds iff that
closed group is all of R^d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Union

from .errors import OperatorError
from .linalg import rank
from .scalar import (
    Field,
    KVector,
    Scalar,
    dot,
    is_zero_vector,
    norm2,
    vadd,
    vscale,
)
from .subgroup import (
    ClosedSubgroup,
    GeneratorSet,
    closure,
    group_sum,
    in_span,
    is_dense,
    one_annihilator,
)

CANONICAL = "canonical"
PURE_DIFFERENCE = "pure_difference"

DEGENERATE_WARNING = "degenerate operator L = 0: every bounded function solves L[u] = 0"


def _positive_rational(value, what: str) -> Fraction:
    q = Fraction(value)
    if q <= 0:
        raise OperatorError(f"{what} must be a positive rational, got {value}")
    return q


@dataclass(frozen=True)
class Atom:
    """Point mass ``weight * delta_z``."""

    z: KVector
    weight: Fraction = Fraction(1)
    convention: str = CANONICAL

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(self.z))
        object.__setattr__(self, "weight", _positive_rational(self.weight, "atom weight"))
        if self.convention not in (CANONICAL, PURE_DIFFERENCE):
            raise OperatorError(f"unknown atom convention {self.convention!r}")
        if is_zero_vector(self.z):
            raise OperatorError("an atom must sit away from the origin")

    def inside_cutoff(self) -> bool:
        # the cutoff indicator is 1_{|z| <= 1}; the boundary counts as inside
        return (norm2(self.z) - 1).sign() <= 0


@dataclass(frozen=True)
class Sphere:
    """``surface_weight`` times the surface measure of {|z| = radius}."""

    radius: Scalar
    surface_weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "surface_weight", _positive_rational(self.surface_weight, "surface weight"))
        if self.radius.sign() <= 0:
            raise OperatorError("sphere radius must be positive")


@dataclass(frozen=True)
class StableSubspace:
    """Symmetric 2*alpha-stable measure on U = span(basis); symbol -scale |P_U eta|^(2 alpha)."""

    basis: tuple
    alpha: Fraction
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        basis = tuple(tuple(v) for v in self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "scale", _positive_rational(self.scale, "stable scale"))
        if not 0 < self.alpha < 1:
            raise OperatorError("stable index alpha must lie in (0, 1)")
        if not basis or rank([list(v) for v in basis]) != len(basis):
            raise OperatorError("stable subspace basis must be nonempty and linearly independent")


@dataclass(frozen=True)
class BallSupport:
    """Qualitative component: supp(mu) contains the ball B(center, radius)."""

    center: KVector
    radius: Scalar

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(self.center))
        if self.radius.sign() <= 0:
            raise OperatorError("ball radius must be positive")


MeasureComponent = Union[Atom, Sphere, StableSubspace, BallSupport]


@dataclass(frozen=True)
class LevyOperator:
    dim: int
    field: Field
    sigma: tuple = ()
    drift: KVector | None = None
    components: tuple = ()
    notes: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        F, d = self.field, self.dim
        if d < 1:
            raise OperatorError("dimension must be at least 1")
        drift = tuple(self.drift) if self.drift is not None else F.vector([0] * d)
        sigma = tuple(tuple(c) for c in self.sigma)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "components", tuple(self.components))
        vectors = [drift, *sigma]
        for c in self.components:
            if isinstance(c, Atom):
                vectors.append(c.z)
            elif isinstance(c, StableSubspace):
                vectors.extend(c.basis)
            elif isinstance(c, BallSupport):
                vectors.append(c.center)
            elif not isinstance(c, Sphere):
                raise OperatorError(f"unknown measure component {c!r}")
        for v in vectors:
            if len(v) != d:
                raise OperatorError(f"vector {[str(x) for x in v]} does not have dimension {d}")
            if any(x.field != F for x in v):
                raise OperatorError("all operator data must live in the declared field")

    @property
    def atoms(self) -> list[Atom]:
        return [c for c in self.components if isinstance(c, Atom)]

    def is_degenerate(self) -> bool:
        return (not self.components and is_zero_vector(self.drift)
                and all(is_zero_vector(s) for s in self.sigma))


def canonicalize(op: LevyOperator) -> LevyOperator:
    """Rewrite pure-difference atoms w(u(x+z) - u(x)) in the canonical cutoff form.

    w(u(x+z) - u(x)) = w(u(x+z) - u(x) - z.Du 1_{|z|<=1}) + w z 1_{|z|<=1} . Du,
    so the drift absorbs w z for atoms inside the closed unit ball.
    """
    b = op.drift
    comps = []
    for c in op.components:
        if isinstance(c, Atom) and c.convention == PURE_DIFFERENCE:
            if c.inside_cutoff():
                b = vadd(b, vscale(c.weight, c.z))
            c = Atom(c.z, c.weight, CANONICAL)
        comps.append(c)
    return replace(op, drift=b, components=tuple(comps))


def _identity_lines(op: LevyOperator) -> tuple:
    return tuple(op.field.vector(int(i == j) for i in range(op.dim)) for j in range(op.dim))


def support_group(op: LevyOperator) -> ClosedSubgroup:
    """G_mu, the closed group generated by supp(mu)."""
    atoms, lines, notes = [], [], []
    for c in op.components:
        if isinstance(c, Atom):
            atoms.append(c.z)
        elif isinstance(c, Sphere):
            if op.dim == 1:
                atoms.append((c.radius,))
            else:
                lines.extend(_identity_lines(op))
                notes.append("sphere support S satisfies S - S ⊇ ball around 0, so it generates R^d")
        elif isinstance(c, StableSubspace):
            lines.extend(c.basis)
        elif isinstance(c, BallSupport):
            lines.extend(_identity_lines(op))
            notes.append("support contains a ball, so it generates R^d")
    G = closure(GeneratorSet(op.dim, atoms=atoms, lines=lines, field=op.field))
    return replace(G, notes=tuple(notes))


def c_mu(op: LevyOperator, G_mu: ClosedSubgroup | None = None) -> KVector:
    """c_mu = - sum of w z over canonical atoms with |z| <= 1 and z outside V_mu.

    Spheres and stable components are symmetric and contribute nothing;
    ball supports force V_mu = R^d, which empties the integration set.
    """
    op = canonicalize(op)
    if G_mu is None:
        G_mu = support_group(op)
    c = op.field.vector([0] * op.dim)
    for a in op.atoms:
        if a.inside_cutoff() and not in_span(G_mu.v_basis, a.z):
            c = vadd(c, vscale(-a.weight, a.z))
    return c


def period_group(op: LevyOperator) -> ClosedSubgroup:
    return _analyse(canonicalize(op))[0]


def _analyse(op: LevyOperator):
    G_mu = support_group(op)
    c = c_mu(op, G_mu)
    eff = vadd(op.drift, c)
    W = closure(GeneratorSet(op.dim, lines=op.sigma + (eff,), field=op.field))
    return group_sum(G_mu, W), G_mu, W, c, eff


@dataclass(frozen=True)
class OneDimForm:
    """L[u](x) = sum_n (u(x + n g) - u(x)) omega_n."""

    g: Scalar
    omega: tuple  # ((n, weight), ...) sorted by n


@dataclass(frozen=True)
class Verdict:
    liouville: bool
    period_group: ClosedSubgroup
    c_mu: KVector
    effective_drift: KVector
    support_group: ClosedSubgroup
    local_group: ClosedSubgroup
    counterexample: KVector | None = None
    witness: tuple | None = None  # (h_normal, c) with G ⊆ xi^⊥ + cZ
    one_d_form: OneDimForm | None = None
    warnings: tuple = ()
    assertions: tuple = ()

    @property
    def xi(self) -> KVector | None:
        return self.counterexample


def _one_d_form(op: LevyOperator, G: ClosedSubgroup) -> OneDimForm:
    F = op.field
    if not G.lattice_basis:
        return OneDimForm(F.one(), ())
    g = G.lattice_basis[0][0]
    if g.sign() < 0:
        g = -g
    weights: dict[int, Fraction] = {}
    points = [(a.z[0], a.weight) for a in op.atoms]
    for c in op.components:
        if isinstance(c, Sphere):
            points += [(c.radius, c.surface_weight), (-c.radius, c.surface_weight)]
    for z, w in points:
        n = (z / g).rational_content()
        assert n is not None and n.denominator == 1, "atom off the period lattice"
        weights[int(n)] = weights.get(int(n), Fraction(0)) + w
    return OneDimForm(g, tuple(sorted(weights.items())))


def decide(op: LevyOperator) -> Verdict:
    op = canonicalize(op)
    G, G_mu, W, c, eff = _analyse(op)
    warnings = list(op.notes) + list(G_mu.notes)
    if op.is_degenerate():
        warnings.append(DEGENERATE_WARNING)
    xi = one_annihilator(G)
    witness = one_d = None
    if xi is not None:
        if len(G.v_basis) + len(G.lattice_basis) == op.dim and G.lattice_basis:
            cvec = G.lattice_basis[0]
        else:
            cvec = vscale(1 / norm2(xi), xi)
        witness = (xi, cvec)
        if op.dim == 1:
            one_d = _one_d_form(op, G)
    return Verdict(
        liouville=is_dense(G),
        period_group=G,
        c_mu=c,
        effective_drift=eff,
        support_group=G_mu,
        local_group=W,
        counterexample=xi,
        witness=witness,
        one_d_form=one_d,
        warnings=tuple(warnings),
        assertions=tuple(op.field.assertions),
    )


def counterexample_value(xi: KVector, x) -> float:
    """u(x) = cos(2 pi xi . x), a bounded nonconstant solution when xi is an annihilator."""
    return math.cos(2 * math.pi * sum(float(a) * float(b) for a, b in zip(xi, x)))


def verdict_is_consistent(op: LevyOperator, v: Verdict) -> bool:
    """Check the exact certificate carried by a verdict."""
    op = canonicalize(op)
    if v.liouville != (v.counterexample is None) or v.liouville != (v.witness is None):
        return False
    if v.liouville != is_dense(v.period_group):
        return False
    if v.counterexample is None:
        return True
    xi = v.counterexample
    for a in op.atoms:
        q = dot(xi, a.z).rational_content()
        if q is None or q.denominator != 1:
            return False
    if any(not dot(xi, s).is_zero() for s in op.sigma):
        return False
    if not dot(xi, v.effective_drift).is_zero():
        return False
    h, cvec = v.witness
    return dot(h, cvec) == 1
