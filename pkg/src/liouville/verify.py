"""Floating-point cross-checks of the exact pipeline.

The characteristic symbol of L is psi with L[e^{i eta.x}] = psi(eta) e^{i eta.x}:

    psi(eta) = -|sigma^T eta|^2 + i b.eta
               + sum_atoms  w (e^{i z.eta} - 1 - i z.eta 1_{|z|<=1})
               - sum_stable scale |P_U eta|^(2 alpha)
               + sum_sphere weight (int_{|z|=r} e^{i z.eta} dS - |S_r|)

If xi annihilates the period group then cos(2 pi xi.x) is a bounded
solution, hence psi(2 pi xi) = 0.  Everything here is double precision;
exactness lives in the other modules.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.spatial import cKDTree

from .errors import CostGuardExceeded, QuadratureFailure, UnsupportedComponent, UsageError
from .operator import Atom, BallSupport, LevyOperator, Sphere, StableSubspace, canonicalize
from .special import sphere_area, sphere_plane_wave, unit_sphere_area
from .subgroup import ClosedSubgroup, dual_generators

ANNIHILATOR_TOL = 1e-10
PATH_TOL = 1e-9

MAX_GENERATORS = 4
MAX_DIM = 3
MAX_N = 10**4
MAX_TABLE = 5 * 10**6
MAX_QUERIES = 10**8


@dataclass(frozen=True)
class _Numeric:
    dim: int
    sigma: np.ndarray  # d x P
    drift: np.ndarray
    atom_z: np.ndarray  # k x d
    atom_w: np.ndarray
    atom_inside: np.ndarray
    stables: tuple  # (orthonormal basis d x r, alpha, scale)
    spheres: tuple  # (radius, weight)


@lru_cache(maxsize=256)
def _numeric(op: LevyOperator) -> _Numeric:
    op = canonicalize(op)
    d = op.dim
    if any(isinstance(c, BallSupport) for c in op.components):
        raise UnsupportedComponent("ball_support components have no symbol; they are decision-only")
    sigma = np.array([[float(x) for x in col] for col in op.sigma], dtype=float).reshape(-1, d).T
    atoms = op.atoms
    stables, spheres = [], []
    for c in op.components:
        if isinstance(c, StableSubspace):
            basis = np.array([[float(x) for x in v] for v in c.basis], dtype=float).T
            q, _ = np.linalg.qr(basis)
            stables.append((q, float(c.alpha), float(c.scale)))
        elif isinstance(c, Sphere):
            spheres.append((float(c.radius), float(c.surface_weight)))
    return _Numeric(
        dim=d,
        sigma=sigma,
        drift=np.array([float(x) for x in op.drift]),
        atom_z=np.array([[float(x) for x in a.z] for a in atoms], dtype=float).reshape(-1, d),
        atom_w=np.array([float(a.weight) for a in atoms]),
        atom_inside=np.array([a.inside_cutoff() for a in atoms], dtype=bool),
        stables=tuple(stables),
        spheres=tuple(spheres),
    )


def _as_floats(v) -> np.ndarray:
    return np.array([float(x) for x in v], dtype=float)


def symbol(op: LevyOperator, eta) -> complex:
    """psi(eta) as a Python complex (re, im)."""
    num = _numeric(op)
    eta = _as_floats(eta)
    if eta.shape != (num.dim,):
        raise ValueError(f"eta must have length {num.dim}")
    val = complex(-float(np.sum((num.sigma.T @ eta) ** 2)), float(num.drift @ eta))
    if len(num.atom_w):
        phase = num.atom_z @ eta
        jumps = np.exp(1j * phase) - 1 - 1j * phase * num.atom_inside
        val += complex(np.sum(num.atom_w * jumps))
    for q, alpha, scale in num.stables:
        val -= scale * float(np.linalg.norm(q.T @ eta)) ** (2 * alpha)
    rho = float(np.linalg.norm(eta))
    for r, w in num.spheres:
        val += w * (sphere_plane_wave(num.dim, r, rho) - sphere_area(num.dim, r))
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise ArithmeticError(f"non-finite symbol value at {eta}")
    return val


def check_annihilator(op: LevyOperator, xi) -> float:
    """|psi(2 pi xi)|; below 1e-10 for a genuine annihilator of the period group."""
    if xi is None:
        raise UsageError("no annihilator: the period group is dense, so the operator has the Liouville property")
    return abs(symbol(op, 2 * math.pi * _as_floats(xi)))


def apply_to_wave(op: LevyOperator, xi, x) -> float:
    """L[u](x) for u = cos(2 pi xi.x), evaluated term by term without the symbol.

    Derivatives of the cosine are taken analytically, atoms by direct
    differences and spheres by quadrature of u over the sphere.
    """
    num = _numeric(op)
    xi = _as_floats(xi)
    x = _as_floats(x)
    k = 2 * math.pi * xi
    theta = float(k @ x)
    u, du = math.cos(theta), -math.sin(theta) * k
    out = -float(np.sum((num.sigma.T @ k) ** 2)) * u + float(num.drift @ du)
    for z, w, inside in zip(num.atom_z, num.atom_w, num.atom_inside):
        out += w * (math.cos(theta + float(k @ z)) - u - (float(z @ du) if inside else 0.0))
    for q, alpha, scale in num.stables:
        out -= scale * float(np.linalg.norm(q.T @ k)) ** (2 * alpha) * u
    rho = float(np.linalg.norm(k))
    d = num.dim
    for r, w in num.spheres:
        if d == 1:
            avg = math.cos(theta + r * rho) + math.cos(theta - r * rho)
        else:
            val, err = integrate.quad(lambda t: math.cos(theta + r * rho * math.cos(t)) * math.sin(t) ** (d - 2),
                                      0, math.pi, limit=200, epsabs=1e-13, epsrel=1e-13)
            if err > 1e-10:
                raise QuadratureFailure(f"sphere quadrature error {err:g}")
            avg = unit_sphere_area(d - 1) * r ** (d - 1) * val
        out += w * (avg - sphere_area(d, r) * u)
    return out


def wave_from_symbol(op: LevyOperator, xi, x) -> float:
    """Re(psi(2 pi xi) e^{i 2 pi xi.x}), the value apply_to_wave must reproduce."""
    xi = _as_floats(xi)
    theta = 2 * math.pi * float(xi @ _as_floats(x))
    return (symbol(op, 2 * math.pi * xi) * cmath.exp(1j * theta)).real


# ---------------------------------------------------------------- zero-set scan


@dataclass
class ScanReport:
    dual_lattice_rank: int
    dual_subspace_dim: int
    zero_family_max: float
    zero_family_pass: bool
    perturbed_min_abs: float
    perturbed_max_re: float
    n_samples: int
    seed: int

    @property
    def dual_is_trivial(self) -> bool:
        return self.dual_lattice_rank == 0 and self.dual_subspace_dim == 0

    def to_dict(self) -> dict:
        return {
            "dual_lattice_rank": self.dual_lattice_rank,
            "dual_subspace_dim": self.dual_subspace_dim,
            "zero_family_max_residual": self.zero_family_max,
            "zero_family_pass": self.zero_family_pass,
            "perturbed_min_abs_psi": self.perturbed_min_abs,
            "perturbed_max_re_psi": self.perturbed_max_re,
            "n_samples": self.n_samples,
            "seed": self.seed,
        }


def zero_set_scan(op: LevyOperator, group: ClosedSubgroup, n_samples: int = 200, seed: int = 42) -> ScanReport:
    """Sample psi on 2 pi x (annihilators of ``group``) and on shells around them."""
    _numeric(op)
    rng = np.random.default_rng(seed)
    d = group.dim
    duals, normals = dual_generators(group)
    D = np.array([[float(x) for x in v] for v in duals], dtype=float).reshape(-1, d)
    Nn = np.array([[float(x) for x in v] for v in normals], dtype=float).reshape(-1, d)
    zero_max = 0.0
    min_abs, max_re = math.inf, -math.inf
    for _ in range(n_samples):
        xi = rng.integers(-3, 4, size=len(D)) @ D + rng.uniform(-2, 2, size=len(Nn)) @ Nn
        xi = np.asarray(xi, dtype=float).reshape(d)
        zero_max = max(zero_max, abs(symbol(op, 2 * math.pi * xi)))
        direction = rng.normal(size=d)
        direction /= np.linalg.norm(direction)
        delta = rng.uniform(0.1, 0.5) * direction
        val = symbol(op, 2 * math.pi * (xi + delta))
        min_abs = min(min_abs, abs(val))
        max_re = max(max_re, val.real)
    return ScanReport(len(duals), len(normals), zero_max, zero_max <= ANNIHILATOR_TOL,
                      min_abs, max_re, n_samples, seed)


# ---------------------------------------------------------------- density oracle


@dataclass(frozen=True)
class OracleConfig:
    N: int = 10**4
    eps: float = 0.05
    targets: int = 200
    seed: int = 42

    def __post_init__(self):
        if self.N < 1 or self.eps <= 0 or self.targets < 1:
            raise ValueError("oracle needs N >= 1, eps > 0 and at least one target")


@dataclass
class OracleResult:
    confined: bool
    covered_fraction: float
    max_generator_distance: float
    certified: bool
    n_targets: int

    def to_dict(self) -> dict:
        return dict(confined=self.confined, covered_fraction=self.covered_fraction,
                    max_generator_distance=self.max_generator_distance,
                    confinement_certified=self.certified, n_targets=self.n_targets)


def _group_floats(G: ClosedSubgroup):
    d = G.dim
    V = np.array([[float(x) for x in v] for v in G.v_basis], dtype=float).reshape(-1, d)
    L = np.array([[float(x) for x in v] for v in G.lattice_basis], dtype=float).reshape(-1, d)
    return V, L


def group_distance(X: np.ndarray, V: np.ndarray, L: np.ndarray) -> np.ndarray:
    """Drop the V-component, round lattice coordinates, measure what is left."""
    X = np.atleast_2d(X)
    basis = np.vstack([V, L])
    if not len(basis):
        return np.linalg.norm(X, axis=1)
    coef, *_ = np.linalg.lstsq(basis.T, X.T, rcond=None)
    perp = X - coef.T @ basis
    lat = coef[len(V):]
    rem = perp + (lat - np.round(lat)).T @ L
    return np.linalg.norm(rem, axis=1)


def _confinement(gens: np.ndarray, V, L, cfg: OracleConfig, rng) -> tuple[bool, float, bool]:
    dist = group_distance(gens, V, L)
    worst = float(dist.max()) if len(dist) else 0.0
    if worst > cfg.eps:
        return False, worst, True
    if cfg.N * float(dist.sum()) <= cfg.eps:
        # dist is subadditive on a group, so every combination is within N * sum
        return True, worst, True
    k = len(gens)
    corners = np.array(list(itertools.product((-cfg.N, cfg.N), repeat=k)), dtype=float)
    sample = rng.integers(-cfg.N, cfg.N + 1, size=(10**5, k)).astype(float)
    combos = np.vstack([corners, sample]) @ gens
    return bool(group_distance(combos, V, L).max() <= cfg.eps), worst, False


def _targets(V, L, d: int, cfg: OracleConfig, rng) -> np.ndarray:
    T = np.zeros((cfg.targets, d))
    if len(V):
        q, _ = np.linalg.qr(V.T)
        T += rng.uniform(-0.5, 0.5, size=(cfg.targets, q.shape[1])) @ q.T
    if len(L):
        T += rng.integers(-3, 3, size=(cfg.targets, len(L))) @ L
    return T


def _pick_basis(gens: np.ndarray, tol: float = 1e-9) -> list[int]:
    chosen: list[int] = []
    residual = gens.copy()
    while True:
        norms = np.linalg.norm(residual, axis=1)
        norms[chosen] = 0
        i = int(np.argmax(norms)) if len(norms) else 0
        if not len(norms) or norms[i] <= tol * max(1.0, float(np.linalg.norm(gens, axis=1).max())):
            return chosen
        chosen.append(i)
        u = residual[i] / norms[i]
        residual = residual - np.outer(residual @ u, u)


def _coverage(gens: np.ndarray, targets: np.ndarray, cfg: OracleConfig) -> np.ndarray:
    N, eps = cfg.N, cfg.eps
    basis_idx = _pick_basis(gens)
    s = len(basis_idx)
    if s == 0:
        return np.linalg.norm(targets, axis=1) <= eps
    free_idx = [i for i in range(len(gens)) if i not in basis_idx]
    Bm = gens[basis_idx]  # s x d
    pinv = np.linalg.pinv(Bm.T)  # coordinates in the chosen basis
    f = len(free_idx)
    if f <= 1:
        return _coverage_direct(Bm, gens[free_idx], pinv, targets, cfg)
    # meet in the middle: free generators split in two halves, matched on the
    # torus of fractional basis coordinates
    A = gens[free_idx] @ pinv.T
    ns = np.arange(-N, N + 1, dtype=float)
    f1 = (f + 1) // 2
    if (2 * N + 1) ** f1 > MAX_TABLE or (2 * N + 1) ** (f - f1) * len(targets) > MAX_QUERIES:
        raise CostGuardExceeded(f"{len(gens)} generators spanning {s} dimensions at N={N} exceed the enumeration budget")
    grid1 = np.array(list(itertools.product(ns, repeat=f1)))
    grid2 = np.array(list(itertools.product(ns, repeat=f - f1)))
    table = grid1 @ A[:f1]
    tree = cKDTree(np.mod(table, 1.0) % 1.0, boxsize=1.0)
    covered = np.zeros(len(targets), dtype=bool)
    for t_i, t in enumerate(targets):
        q = pinv @ t - grid2 @ A[f1:]
        _, idx = tree.query(np.mod(q, 1.0) % 1.0)
        cand_free = np.hstack([grid1[idx], grid2])
        nb = np.round(q - table[idx])
        ok = np.all(np.abs(nb) <= N, axis=1)
        if not ok.any():
            continue
        pts = nb[ok] @ Bm + cand_free[ok] @ gens[free_idx]
        covered[t_i] = bool(np.min(np.linalg.norm(pts - t, axis=1)) <= eps)
    return covered


def _coverage_direct(Bm, free, pinv, targets, cfg: OracleConfig) -> np.ndarray:
    """At most one free generator n*g; the basis part is found by rounding.

    A combination within eps of t has basis coordinates within
    eps * ||pinv|| of t's, so a ball query on the torus of fractional
    coordinates returns every candidate n.
    """
    N, eps = cfg.N, cfg.eps
    ns = np.arange(-N, N + 1, dtype=float) if len(free) else np.zeros(1)
    ns = ns[np.argsort(np.abs(ns), kind="stable")]
    shift = ns[:, None] * free[0][None, :] if len(free) else np.zeros((1, Bm.shape[1]))
    shift_coords = shift @ pinv.T
    # rational free generators revisit the same torus points; keep the smallest |n|
    _, first = np.unique(np.round(np.mod(shift_coords, 1.0) * 2**40) % 2**40, axis=0, return_index=True)
    first = np.sort(first)
    ns, shift, shift_coords = ns[first], shift[first], shift_coords[first]
    radius = eps * np.linalg.norm(pinv, 2) * (1 + 1e-9)
    tree = cKDTree(np.mod(shift_coords, 1.0) % 1.0, boxsize=1.0)
    tau = targets @ pinv.T
    hits = tree.query_ball_point(np.mod(tau, 1.0) % 1.0, r=min(radius, 0.5))
    covered = np.zeros(len(targets), dtype=bool)
    for i, idx in enumerate(hits):
        if radius >= 0.5:
            idx = range(len(ns))  # degenerate basis: fall back to every multiple
        idx = np.asarray(list(idx), dtype=int)
        if not len(idx):
            continue
        nb = np.round(tau[i][None, :] - shift_coords[idx])
        diff = nb @ Bm + shift[idx] - targets[i][None, :]
        dist2 = np.einsum("ij,ij->i", diff, diff)
        dist2[np.abs(nb).max(axis=1) > N] = np.inf
        covered[i] = dist2.min() <= eps**2
    return covered


def density_oracle(generators, predicted: ClosedSubgroup, cfg: OracleConfig = OracleConfig()) -> OracleResult:
    """Brute-force check of a predicted closure against integer combinations.

    ``confined``: every combination sum n_i g_i with |n_i| <= N lies within
    eps of the predicted group.  ``covered_fraction``: share of random
    points of the predicted group (inside the unit box of V, small lattice
    coordinates) that some combination approximates within eps.
    """
    gens = np.array([[float(x) for x in g] for g in generators], dtype=float)
    if gens.ndim != 2 or gens.shape[1] != predicted.dim:
        gens = gens.reshape(-1, predicted.dim)
    if len(gens) > MAX_GENERATORS or predicted.dim > MAX_DIM or cfg.N > MAX_N:
        raise CostGuardExceeded(f"oracle limited to {MAX_GENERATORS} generators, d <= {MAX_DIM}, N <= {MAX_N}")
    rng = np.random.default_rng(cfg.seed)
    V, L = _group_floats(predicted)
    confined, worst, certified = _confinement(gens, V, L, cfg, rng)
    targets = _targets(V, L, predicted.dim, cfg, rng)
    covered = _coverage(gens, targets, cfg)
    return OracleResult(confined, float(covered.mean()), worst, certified, len(targets))
