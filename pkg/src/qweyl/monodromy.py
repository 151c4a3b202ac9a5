"""Casimir and KZ connections, braid-generator paths, numerical monodromy.

Conventions fixed here and nowhere else:

* ``HBAR_PER_H``: the quantum parameter is ``hbar = 2 pi i h``, so
  ``q = exp(2 pi i h)``; fractional powers of ``q`` are evaluated as
  ``exp(p * hbar)`` (continuous in ``h``), never through a principal root.
* ``KZ_COUPLING_PER_H``: the KZ coupling is ``2 h``.

A connection ``d - sum_i (d phi_i / phi_i) r_i`` has horizontal sections
``y' = (sum_i phi_i(gamma') / phi_i(gamma) r_i) y``; transport is the
fundamental solution ``y(1)`` with ``y(0) = I``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import DOP853, quad
from scipy.sparse.csgraph import maximum_bipartite_matching
from scipy.sparse import csr_matrix

from .braidops import weyl_element_j
from .glrep import (
    casimir_truncated,
    degree_basis,
    enumerate_basis,
    omega_operators,
    row_degrees,
    sigma_operator,
)
from .linalg import rank, rref
from .qarith import ONE, ZERO, ExactScalar, evaluate
from .qmatspace import uq_gl_k_action
from .report import Check, Report
from .sparse import Basis, SparseOperator, from_dense

HBAR_PER_H = 2j * math.pi
KZ_COUPLING_PER_H = 2

ORDER_SIGMA_P = "sigma-P"
ORDER_SIGMA_INV_P = "sigma_inv-P"
DEFAULT_ORDER = ORDER_SIGMA_P


class PathError(RuntimeError):
    """Raised when a braid path cannot avoid the other hyperplanes."""


class TransportError(RuntimeError):
    """Raised when the integrator fails, with closest-approach diagnostics."""


# ---------------------------------------------------------------------------
# connection forms


@dataclass
class ConnectionForm:
    """``d - coupling * sum_i (d phi_i / phi_i) r_i`` with exact covectors and residues."""

    ambient_dim: int
    covectors: List[Tuple[Fraction, ...]]
    residues: List[SparseOperator]
    coupling: complex
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.covectors) != len(self.residues):
            raise ValueError("need one residue per covector")
        for a, b in combinations(range(len(self.covectors)), 2):
            if rank([list(self.covectors[a]), list(self.covectors[b])]) < 2:
                raise ValueError(f"covectors {a} and {b} are proportional")
        dims = {(len(r.codomain), len(r.basis)) for r in self.residues}
        if len(dims) > 1 or any(x != y for x, y in dims):
            raise ValueError("residues must be square of a common size")

    @property
    def fibre_dim(self) -> int:
        return len(self.residues[0].basis) if self.residues else 0

    def numeric_residues(self) -> np.ndarray:
        d = self.fibre_dim
        out = np.zeros((len(self.residues), d, d), dtype=complex)
        for a, r in enumerate(self.residues):
            out[a] = complex(self.coupling) * r.to_dense(_to_complex)
        return out


def _to_complex(v) -> complex:
    if isinstance(v, ExactScalar):
        return evaluate(v, 1)
    return complex(v)


def root_covector(i: int, j: int, n: int) -> Tuple[Fraction, ...]:
    """``z_i - z_j`` (1-based)."""
    return tuple(Fraction((a == i - 1) - (a == j - 1)) for a in range(n))


def casimir_connection(n: int, kappas: Dict[Tuple[int, int], SparseOperator], h: complex) -> ConnectionForm:
    """Casimir connection with residues ``h * kappa_ij`` on the hyperplanes ``z_i = z_j``."""
    keys = sorted(kappas)
    return ConnectionForm(
        n, [root_covector(i, j, n) for i, j in keys], [kappas[key] for key in keys], complex(h),
        [f"kappa_{i}{j}" for i, j in keys],
    )


def kz_connection(n: int, omegas: Dict[Tuple[int, int], SparseOperator], hbar_bar: complex) -> ConnectionForm:
    """KZ connection with residues ``hbar_bar * Omega_ij``."""
    keys = sorted(omegas)
    return ConnectionForm(
        n, [root_covector(i, j, n) for i, j in keys], [omegas[key] for key in keys], complex(hbar_bar),
        [f"Omega_{i}{j}" for i, j in keys],
    )


def codimension_two_families(covectors: Sequence[Sequence[Fraction]]) -> List[Tuple[int, ...]]:
    """Maximal index sets whose hyperplanes meet in codimension 2."""
    fams = set()
    for a, b in combinations(range(len(covectors)), 2):
        fam = tuple(
            c for c in range(len(covectors))
            if rank([list(covectors[a]), list(covectors[b]), list(covectors[c])]) == 2
        )
        fams.add(fam)
    return sorted(fams)


def kohno_flatness(c: ConnectionForm, label: str = "connection") -> Report:
    """Check ``[r_j, sum_{J} r] = 0`` for every maximal codimension-2 family ``J``."""
    rep = Report("flatness", config={"connection": label, "hyperplanes": len(c.covectors)})
    fams = codimension_two_families(c.covectors)
    if not fams:
        rep.add(Check("no codim-2 family", label, c.fibre_dim, "pass", 0.0))
    for fam in fams:
        total = c.residues[fam[0]]
        for idx in fam[1:]:
            total = total + c.residues[idx]
        for idx in fam:
            comm = c.residues[idx].commutator(total)
            name = f"[{_lab(c, idx)}, sum J]"
            block = "J=" + ",".join(_lab(c, x) for x in fam)
            if comm.is_zero():
                rep.add(Check(name, block, c.fibre_dim, "pass", 0.0))
            else:
                norm = float(np.abs(comm.to_dense(_to_complex)).max())
                rep.add(Check(name, block, c.fibre_dim, "fail", norm, {"family": list(fam), "index": idx, "max_abs": norm}))
    return rep


def _lab(c: ConnectionForm, idx: int) -> str:
    return c.labels[idx] if c.labels else str(idx)


# ---------------------------------------------------------------------------
# braid paths


def default_basepoint(n: int) -> Tuple[Fraction, ...]:
    """``(n-1, ..., 0)`` shifted to trace zero."""
    raw = [Fraction(n - 1 - a) for a in range(n)]
    shift = sum(raw) / n
    return tuple(x - shift for x in raw)


@dataclass
class BraidPath:
    """Segment ``w0 -> r``, upper half circle ``r -> -r``, segment ``-r -> -w0``.

    Points are ``t_alpha + z * coroot``; ``alpha_j`` equals ``2 z`` there.
    """

    j: int
    n: int
    t: Tuple[Fraction, ...]
    t_alpha: Tuple[Fraction, ...]
    coroot: Tuple[int, ...]
    w0: float
    radius: float

    def point(self, z: complex) -> np.ndarray:
        return np.array([float(a) for a in self.t_alpha]) + z * np.array(self.coroot, dtype=float)

    def pieces(self):
        """``(z(s), z'(s))`` callables on ``s in [0, 1]`` for the three pieces."""
        w0, r = self.w0, self.radius
        return [
            (lambda s: w0 + (r - w0) * s, lambda s: (r - w0)),
            (lambda s: r * cmath.exp(1j * math.pi * s), lambda s: 1j * math.pi * r * cmath.exp(1j * math.pi * s)),
            (lambda s: -r + (r - w0) * s, lambda s: (r - w0)),
        ]

    def reversed_pieces(self):
        fwd = self.pieces()[::-1]
        return [(lambda s, z=z: z(1 - s), lambda s, dz=dz: -dz(1 - s)) for z, dz in fwd]

    def sample(self, count: int = 200) -> np.ndarray:
        pts = []
        for z, _ in self.pieces():
            for s in np.linspace(0, 1, count):
                pts.append(self.point(z(s)))
        return np.array(pts)


def _line_data(covectors, t_alpha, coroot):
    a = np.array([float(sum(c * x for c, x in zip(cv, t_alpha))) for cv in covectors])
    c = np.array([float(sum(cc * x for cc, x in zip(cv, coroot))) for cv in covectors])
    return a, c


def braid_path(
    j: int,
    n: int,
    t: Optional[Sequence] = None,
    radius: Optional[float] = None,
    radius_scale: float = 1.0,
    max_shrink: int = 8,
) -> BraidPath:
    """Representative path of the generator ``T_j`` from ``t`` to ``s_j t``.

    Default radius: half of the smaller of ``w0`` and the distance from
    ``t_alpha`` to the nearest other root hyperplane along the line, then
    multiplied by ``radius_scale``.
    """
    if not 1 <= j <= n - 1:
        raise ValueError("need 1 <= j <= n-1")
    t = tuple(Fraction(x) for x in (t if t is not None else default_basepoint(n)))
    roots = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    for a, b in roots:
        if t[a - 1] - t[b - 1] <= 0:
            raise PathError("basepoint must be regular and dominant")
    coroot = tuple((x == j - 1) - (x == j) for x in range(n))
    at = t[j - 1] - t[j]
    t_alpha = tuple(x - at / 2 * c for x, c in zip(t, coroot))
    w0 = float(at) / 2
    others = [root_covector(a, b, n) for a, b in roots if (a, b) != (j, j + 1)]
    dists = []
    for cv in others:
        a0 = sum(c * x for c, x in zip(cv, t_alpha))
        c0 = sum(c * x for c, x in zip(cv, coroot))
        if c0 != 0:
            dists.append(abs(float(a0 / c0)))
        elif a0 == 0:
            raise PathError("t_alpha lies on another root hyperplane")
    dmin = min(dists) if dists else math.inf
    r = radius if radius is not None else 0.5 * min(w0, dmin) * radius_scale
    for _ in range(max_shrink + 1):
        if 0 < r < w0 and r < dmin:
            return BraidPath(j, n, t, t_alpha, coroot, w0, r)
        r *= 0.5
    raise PathError(f"no admissible radius for j={j}: w0={w0}, nearest hyperplane {dmin}")


# ---------------------------------------------------------------------------
# transport


@dataclass
class IntegratorStats:
    accepted: int = 0
    rejected: int = 0
    nfev: int = 0
    rtol: float = 0.0
    atol: float = 0.0
    min_distance: float = math.inf

    def merge(self, other: "IntegratorStats") -> None:
        self.accepted += other.accepted
        self.rejected += other.rejected
        self.nfev += other.nfev
        self.min_distance = min(self.min_distance, other.min_distance)

    def to_dict(self):
        return {
            "accepted": self.accepted,
            "rejected": self.rejected,
            "nfev": self.nfev,
            "rtol": self.rtol,
            "atol": self.atol,
            "min_distance": self.min_distance,
        }


DOP853_STAGES = 12


def _integrate_piece(R, a, c, z_of, dz_of, rtol, atol, stats: IntegratorStats, y0=None):
    d = R.shape[1]

    def rhs(s, yflat):
        z = z_of(s)
        w = c * dz_of(s) / (a + c * z)
        A = np.tensordot(w, R, axes=1)
        return (A @ yflat.reshape(d, d)).ravel()

    y0 = np.eye(d, dtype=complex).ravel() if y0 is None else y0
    solver = DOP853(rhs, 0.0, y0, 1.0, rtol=rtol, atol=atol)
    accepted = 0
    while solver.status == "running":
        msg = solver.step()
        if solver.status == "failed":
            zs = np.array([z_of(s) for s in np.linspace(0, 1, 101)])
            dist = float(np.min(np.abs(a[None, :] + c[None, :] * zs[:, None])))
            raise TransportError(f"integration failed ({msg}); closest approach |phi| = {dist:.3e}")
        accepted += 1
    zs = np.array([z_of(s) for s in np.linspace(0, 1, 101)])
    dist = float(np.min(np.abs(a[None, :] + c[None, :] * zs[:, None])))
    attempts = (solver.nfev - 2) // DOP853_STAGES
    stats.merge(IntegratorStats(accepted, max(attempts - accepted, 0), solver.nfev, rtol, atol, dist))
    return solver.y.reshape(d, d)


def parallel_transport(
    c: ConnectionForm, p: BraidPath, rtol: float = 1e-12, atol: float = 1e-14, reverse: bool = False
) -> Tuple[np.ndarray, IntegratorStats]:
    """Fundamental solution along ``p`` (or its reverse); returns ``(matrix, stats)``."""
    R = c.numeric_residues()
    a, cc = _line_data(c.covectors, p.t_alpha, p.coroot)
    stats = IntegratorStats(rtol=rtol, atol=atol)
    P = np.eye(c.fibre_dim, dtype=complex)
    pieces = p.reversed_pieces() if reverse else p.pieces()
    for z_of, dz_of in pieces:
        P = _integrate_piece(R, a, cc, z_of, dz_of, rtol, atol, stats) @ P
    return P, stats


def log_integral(covector, p: BraidPath) -> complex:
    """``int d phi / phi`` along ``p`` by adaptive quadrature."""
    a, c = _line_data([covector], p.t_alpha, p.coroot)
    a, c = a[0], c[0]
    total = 0j
    for z_of, dz_of in p.pieces():
        f = lambda s: c * dz_of(s) / (a + c * z_of(s))  # noqa: E731
        re = quad(lambda s: f(s).real, 0, 1, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        im = quad(lambda s: f(s).imag, 0, 1, epsabs=1e-13, epsrel=1e-13, limit=200)[0]
        total += re + 1j * im
    return total


def monodromy_generator(
    j: int,
    c: ConnectionForm,
    sigma: np.ndarray,
    p: BraidPath,
    order: str = DEFAULT_ORDER,
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> Tuple[np.ndarray, IntegratorStats]:
    """``sigma(T_j) P`` (or ``sigma(T_j)^{-1} P``) for the path ``p`` of ``T_j``."""
    P, stats = parallel_transport(c, p, rtol, atol)
    sig = np.asarray(sigma, dtype=complex)
    if order == ORDER_SIGMA_P:
        return sig @ P, stats
    if order == ORDER_SIGMA_INV_P:
        return np.linalg.solve(sig, P), stats
    raise ValueError(f"unknown composition order {order!r}")


# ---------------------------------------------------------------------------
# spectral comparison


def match_eigenvalues(ev1: np.ndarray, ev2: np.ndarray) -> Tuple[float, np.ndarray]:
    """Bottleneck-optimal bijection between two multisets.

    Returns ``(max deviation, perm)`` with ``ev2[perm[i]]`` matched to ``ev1[i]``.
    The smallest threshold admitting a perfect matching is found by
    bisection over the sorted pairwise distances.
    """
    ev1 = np.asarray(ev1, dtype=complex)
    ev2 = np.asarray(ev2, dtype=complex)
    if ev1.shape != ev2.shape:
        raise ValueError("eigenvalue multisets differ in size")
    n = len(ev1)
    if n == 0:
        return 0.0, np.zeros(0, dtype=int)
    D = np.abs(ev1[:, None] - ev2[None, :])
    cand = np.unique(D)

    def perfect(th):
        adj = csr_matrix((D <= th).astype(np.int8))
        m = maximum_bipartite_matching(adj, perm_type="column")
        return m if np.all(m >= 0) else None

    lo, hi = 0, len(cand) - 1
    best = perfect(cand[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        m = perfect(cand[mid])
        if m is not None:
            hi, best = mid, m
        else:
            lo = mid + 1
    best = perfect(cand[lo])
    return float(cand[lo]), best


@dataclass
class MonodromyReport:
    generator: int
    h: complex
    matrix: np.ndarray
    eigenvalues: np.ndarray
    target: np.ndarray
    deviation: float
    stats: Optional[IntegratorStats] = None
    tol: float = 1e-6
    extra: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.deviation < self.tol

    def eigen_table(self) -> List[Tuple[float, float, float, float, float]]:
        _, perm = match_eigenvalues(self.eigenvalues, self.target)
        rows = []
        for a, ev in enumerate(self.eigenvalues):
            tg = self.target[perm[a]]
            rows.append((ev.real, ev.imag, tg.real, tg.imag, abs(ev - tg)))
        return rows

    def to_csv(self) -> str:
        lines = ["re,im,matched_re,matched_im,deviation"]
        for row in self.eigen_table():
            lines.append(",".join(f"{x:.15e}" for x in row))
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "generator": self.generator,
            "h": [self.h.real, self.h.imag],
            "eigenvalues": [[float(z.real), float(z.imag)] for z in _sorted(self.eigenvalues)],
            "target": [[float(z.real), float(z.imag)] for z in _sorted(self.target)],
            "deviation": self.deviation,
            "tol": self.tol,
            "passed": self.passed,
            **({"integrator": self.stats.to_dict()} if self.stats else {}),
            **self.extra,
        }


def _sorted(ev):
    return sorted(np.asarray(ev), key=lambda z: (round(cmath.phase(z), 9), abs(z)))


def spectral_compare(A: np.ndarray, B: np.ndarray, tol: float = 1e-6, generator: int = 0, h: complex = 0j) -> MonodromyReport:
    """Matched eigenvalue deviation between ``A`` and ``B``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError("need square matrices of equal size")
    ea = np.linalg.eigvals(A)
    eb = np.linalg.eigvals(B)
    dev, _ = match_eigenvalues(ea, eb)
    return MonodromyReport(generator, complex(h), A, ea, eb, dev, tol=tol)


# ---------------------------------------------------------------------------
# fibres


@dataclass
class Fibre:
    """Direct sum of highest weight spaces ``M_lam^nu`` over an ``S_n``-orbit of weights.

    Each block is spanned by kernel vectors normalised at free monomials, so
    the coordinates of a block element are its coefficients there.
    """

    k: int
    n: int
    lam: Optional[Tuple[int, ...]]
    weights: List[Tuple[int, ...]]
    vectors: List[Dict]
    block_of: List[int]
    free: List[Tuple]
    zero: object

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coordinates(self, v: Dict) -> List:
        """Coordinates of ``v`` in the fibre basis; raises if ``v`` is outside the span."""
        coords = [v.get(f, self.zero) for f in self.free]
        recon: Dict = {}
        for c, vec in zip(coords, self.vectors):
            if not c:
                continue
            for m, x in vec.items():
                s = recon.get(m, self.zero) + c * x
                recon[m] = s
        diff = {m: v.get(m, self.zero) - recon.get(m, self.zero) for m in set(v) | set(recon)}
        if any(x for x in diff.values()):
            raise ValueError("vector does not lie in the fibre")
        return coords

    def matrix(self, apply) -> List[List]:
        """Exact matrix of a linear map given as ``apply(vector) -> vector``."""
        cols = [self.coordinates(apply(v)) for v in self.vectors]
        return [[cols[c][r] for c in range(self.dim)] for r in range(self.dim)]


def weight_orbit(mu: Sequence[int]) -> List[Tuple[int, ...]]:
    return sorted(set(permutations(tuple(mu))), reverse=True)


def _kernel_block(W, raise_fn, k, zero, one):
    targets: Dict = {}
    entries = []
    for c, m in enumerate(W):
        for a in range(1, k):
            for t, v in raise_fn(a, m).items():
                entries.append((targets.setdefault(t, len(targets)), c, v))
    if not targets:
        return [{m: one} for m in W], list(W)
    mat = [[zero] * len(W) for _ in range(len(targets))]
    for r, c, v in entries:
        mat[r][c] = mat[r][c] + v
    R, piv = rref(mat)
    pset = set(piv)
    vecs, free = [], []
    for f in range(len(W)):
        if f in pset:
            continue
        vec = {W[f]: one}
        for row, p in zip(R, piv):
            if row[f]:
                vec[W[p]] = -row[f]
        vecs.append(vec)
        free.append(W[f])
    return vecs, free


def _build_fibre(lam, mu, k, quantum: bool) -> Fibre:
    n = len(mu)
    if lam is not None:
        lam = tuple(lam)
        if any(lam[k:]):
            raise ValueError(f"lambda {lam} has more than k={k} nonzero parts")
        lam = (lam + (0,) * k)[:k]
    if quantum:
        zero, one = ZERO, ONE
        raise_fn = lambda a, m: uq_gl_k_action("E", a, m)  # noqa: E731
    else:
        from .glrep import k_action

        zero, one = Fraction(0), Fraction(1)
        raise_fn = lambda a, m: {t: Fraction(v) for t, v in k_action(a - 1, a, m).items()}  # noqa: E731
    weights, vectors, block_of, free = [], [], [], []
    for b, nu in enumerate(weight_orbit(mu)):
        basis = enumerate_basis(k, n, nu)
        if lam is None:
            vecs, fr = [{m: one} for m in basis.elements], list(basis.elements)
        else:
            W = [m for m in basis.elements if row_degrees(m) == lam]
            vecs, fr = _kernel_block(W, raise_fn, k, zero, one)
        weights.append(nu)
        vectors.extend(vecs)
        free.extend(fr)
        block_of.extend([b] * len(vecs))
    return Fibre(k, n, lam, weights, vectors, block_of, free, zero)


def classical_fibre(lam: Optional[Sequence[int]], mu: Sequence[int], k: int) -> Fibre:
    """``sum_nu M_lam^nu`` over the orbit of ``mu``, with rational coefficients.

    ``lam=None`` gives the full weight blocks ``sum_nu S^nu``.
    """
    return _build_fibre(lam, mu, k, quantum=False)


def quantum_fibre(lam: Optional[Sequence[int]], mu: Sequence[int], k: int) -> Fibre:
    """Quantum highest weight vectors of k-weight ``lam`` over the orbit of ``mu``."""
    return _build_fibre(lam, mu, k, quantum=True)


def _op_apply(op: SparseOperator):
    return lambda v: op.apply(v)


def fibre_operators(fib: Fibre):
    """Exact ``kappa_ij`` and ``sigma_j`` matrices on a classical fibre."""
    d = sum(fib.weights[0])
    basis = degree_basis(fib.k, fib.n, d)
    kappas = {}
    for i in range(1, fib.n + 1):
        for j in range(i + 1, fib.n + 1):
            kappas[(i, j)] = fib.matrix(_op_apply(casimir_truncated(i, j, basis)))
    sigmas = [fib.matrix(_op_apply(sigma_operator(j, basis))) for j in range(1, fib.n)]
    return kappas, sigmas


def fibre_omegas(fib: Fibre, variant: str = "sl"):
    """Exact ``Omega_ij`` (sl or gl variant) on a classical fibre."""
    out = {}
    ops_by_nu = {}
    for nu in fib.weights:
        ops_by_nu[nu] = enumerate_basis(fib.k, fib.n, nu)
    for i in range(1, fib.n + 1):
        for j in range(i + 1, fib.n + 1):
            ops = {nu: omega_operators(i, j, b, variant) for nu, b in ops_by_nu.items()}

            def apply(v, ops=ops):
                nu = tuple(sum(col) for col in zip(*next(iter(v))))
                return ops[nu].apply(v)

            out[(i, j)] = fib.matrix(apply)
    return out


def quantum_weyl_matrices(fib: Fibre) -> List[List[List[ExactScalar]]]:
    """Exact ``S_j`` matrices on a quantum fibre."""
    d = sum(fib.weights[0])
    basis = degree_basis(fib.k, fib.n, d)
    return [fib.matrix(_op_apply(weyl_element_j(j, basis).op)) for j in range(1, fib.n)]


def permutation_matrices(fib: Fibre) -> List[List[List[Fraction]]]:
    """Tensor-factor swaps ``(j j+1)`` (no sign) on a classical fibre."""
    out = []
    for j in range(1, fib.n):
        def apply(v, j=j):
            return {tuple(r[: j - 1] + (r[j], r[j - 1]) + r[j + 1:] for r in m): c for m, c in v.items()}

        out.append(fib.matrix(apply))
    return out


def to_numeric(M, h: complex = 0j) -> np.ndarray:
    """Dense complex matrix; ``ExactScalar`` entries evaluated at ``q = exp(2 pi i h)``."""
    lq = HBAR_PER_H * complex(h)
    rows = []
    for row in M:
        rows.append([evaluate(x, log_q=lq) if isinstance(x, ExactScalar) else complex(x) for x in row])
    return np.array(rows, dtype=complex)


def _exact_sparse(M) -> SparseOperator:
    return from_dense(Basis(range(len(M))), M)


# ---------------------------------------------------------------------------
# harnesses


def dominant_weights(lam: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    """Dominant weights (partitions with at most ``n`` parts) below ``lam`` in dominance order."""
    from .glrep import partitions

    lam = tuple(lam) + (0,) * (n - len(lam))
    d = sum(lam)
    out = []
    for p in partitions(d, n):
        p = p + (0,) * (n - len(p))
        if all(sum(p[:a]) <= sum(lam[:a]) for a in range(1, n + 1)):
            out.append(p)
    return out


def braid_residuals(mats: Sequence[np.ndarray]) -> float:
    worst = 0.0
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            A, B = mats[a], mats[b]
            if b == a + 1:
                r = np.abs(A @ B @ A - B @ A @ B).max()
            else:
                r = np.abs(A @ B - B @ A).max()
            worst = max(worst, float(r))
    return worst


TRACE_WORDS = ((0, 1), (0, 0, 1), (0, 1, -1, -2))


def _word(mats, word):
    d = mats[0].shape[0]
    out = np.eye(d, dtype=complex)
    for w in word:
        M = mats[w] if w >= 0 else np.linalg.inv(mats[-w - 1])
        out = out @ M
    return out


@dataclass
class HarnessResult:
    lam: Tuple[int, ...]
    mu: Tuple[int, ...]
    k: int
    h: complex
    reports: List[MonodromyReport]
    braid_residual: float
    trace_deviation: float
    order: str

    def to_dict(self):
        return {
            "lam": list(self.lam),
            "mu": list(self.mu),
            "k": self.k,
            "h": [self.h.real, self.h.imag],
            "order": self.order,
            "braid_residual": self.braid_residual,
            "trace_deviation": self.trace_deviation,
            "generators": [r.to_dict() for r in self.reports],
        }


def main_theorem_harness(
    n: int,
    lam: Sequence[int],
    k: Optional[int] = None,
    hs: Sequence[complex] = (0.05,),
    mu: Optional[Sequence[int]] = None,
    tol: float = 1e-6,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    order: str = DEFAULT_ORDER,
) -> List[HarnessResult]:
    """Compare numerical Casimir monodromy with quantum Weyl group operators.

    For each weight orbit (``mu`` or every dominant weight of ``lam``) and
    each ``h``: eigenvalues of ``M_j`` against those of ``S_j`` at
    ``q = exp(2 pi i h)``, braid residual of the ``M_j``, and the largest
    deviation of traces over a few words in the generators.
    """
    k = n if k is None else k
    if k < n:
        raise ValueError("need k >= n")
    lam = tuple(lam) + (0,) * (n - len(lam))
    orbits = [tuple(mu)] if mu is not None else dominant_weights(lam, n)
    results = []
    for orbit in orbits:
        cfib = classical_fibre(lam, orbit, k)
        qfib = quantum_fibre(lam, orbit, k)
        if cfib.dim != qfib.dim:
            raise RuntimeError(f"classical fibre dim {cfib.dim} != quantum fibre dim {qfib.dim}")
        if cfib.dim == 0:
            continue
        kap, sig = fibre_operators(cfib)
        kap_ops = {key: _exact_sparse(M) for key, M in kap.items()}
        sig_num = [to_numeric(S) for S in sig]
        S_exact = quantum_weyl_matrices(qfib)
        for h in hs:
            h = complex(h)
            conn = casimir_connection(n, kap_ops, h)
            mats, reps = [], []
            S_num = [to_numeric(S, h) for S in S_exact]
            for j in range(1, n):
                p = braid_path(j, n)
                M, stats = monodromy_generator(j, conn, sig_num[j - 1], p, order, rtol, atol)
                mats.append(M)
                rep = spectral_compare(M, S_num[j - 1], tol, j, h)
                rep.stats = stats
                reps.append(rep)
            tr_dev = 0.0
            if n > 2:
                for word in TRACE_WORDS:
                    tr_dev = max(tr_dev, abs(np.trace(_word(mats, word)) - np.trace(_word(S_num, word))))
            results.append(HarnessResult(lam, orbit, k, h, reps, braid_residuals(mats), float(tr_dev), order))
    return results


def kz_casimir_bridge(
    n: int,
    lam: Optional[Sequence[int]],
    mu: Sequence[int],
    k: int,
    h: complex,
    rtol: float = 1e-12,
    atol: float = 1e-14,
    order: str = DEFAULT_ORDER,
) -> Dict[str, object]:
    """Residual of ``pi_KZ^{2h}(T_j) = pi_kappa^h(T_j) e^{-pi i h (...)} e^{i pi E_jj}``.

    The KZ monodromy uses the unsigned swap of tensor factors; the Casimir
    monodromy uses ``sigma``.  The right-hand factors are diagonal by weight.
    The two connections differ by a scalar on each weight block, so the
    identity is exact at a common basepoint only when ``mu`` has a single
    weight in its orbit, e.g. ``(1, 1, 1)``; otherwise a block-diagonal gauge
    remains and the residual is of order ``h``.
    """
    h = complex(h)
    fib = classical_fibre(lam, mu, k)
    if fib.dim == 0:
        raise ValueError("empty fibre")
    kap, sig = fibre_operators(fib)
    om = fibre_omegas(fib, "sl")
    perms = permutation_matrices(fib)
    cas = casimir_connection(n, {key: _exact_sparse(M) for key, M in kap.items()}, h)
    kz = kz_connection(n, {key: _exact_sparse(M) for key, M in om.items()}, KZ_COUPLING_PER_H * h)
    nus = [fib.weights[b] for b in fib.block_of]
    worst = 0.0
    per_j = []
    for j in range(1, n):
        p = braid_path(j, n)
        Mk, _ = monodromy_generator(j, cas, to_numeric(sig[j - 1]), p, order, rtol, atol)
        Mz, _ = monodromy_generator(j, kz, to_numeric(perms[j - 1]), p, order, rtol, atol)
        diag = []
        for nu in nus:
            a, b = nu[j - 1], nu[j]
            diag.append(cmath.exp(-1j * math.pi * h * (a + b + 2 * a * b / k)) * (-1) ** a)
        rhs = Mk @ np.diag(diag)
        r = float(np.abs(Mz - rhs).max())
        per_j.append(r)
        worst = max(worst, r)
    return {"residuals": per_j, "max_residual": worst, "dim": fib.dim}


def determinant_prediction(c: ConnectionForm, sigma: np.ndarray, p: BraidPath, order: str = DEFAULT_ORDER) -> complex:
    """``det sigma^{+-1} * exp(sum_i coupling tr(r_i) int dlog phi_i)`` by quadrature."""
    expo = 0j
    for cv, r in zip(c.covectors, c.residues):
        tr = sum(_to_complex(r.entry(a, a)) for a in range(len(r.basis)))
        if tr:
            expo += complex(c.coupling) * tr * log_integral(cv, p)
    ds = np.linalg.det(np.asarray(sigma, dtype=complex))
    if order == ORDER_SIGMA_INV_P:
        ds = 1 / ds
    return ds * cmath.exp(expo)


# ---------------------------------------------------------------------------
# report-producing suites


def _num_check(identity: str, block: str, dim: int, residual: float, tol: float, cert=None) -> Check:
    ok = residual < tol
    return Check(identity, block, dim, "pass" if ok else "fail", float(residual), None if ok else (cert or {"tol": tol}))


def flatness_fibres(kind: str, n: int, k: int, max_degree: int, max_dim: int = 100):
    """``(label, ConnectionForm)`` on each ``S^mu`` with ``|mu| <= max_degree`` and dimension ``<= max_dim``."""
    from .glrep import compositions

    out = []
    for d in range(max_degree + 1):
        for mu in compositions(d, n):
            basis = enumerate_basis(k, n, mu)
            if len(basis) > max_dim or len(basis) == 0:
                continue
            res = {}
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    if kind == "casimir":
                        res[(i, j)] = casimir_truncated(i, j, basis)
                    else:
                        res[(i, j)] = omega_operators(i, j, basis, "sl")
            if not res:
                continue
            conn = casimir_connection(n, res, 1) if kind == "casimir" else kz_connection(n, res, 1)
            out.append((f"{kind} k={k} n={n} mu={mu}", conn))
    return out


def verify_flatness(kind: str, n: int, k: int = 2, max_degree: int = 3, max_dim: int = 100) -> Report:
    """Exact Kohno test for the Casimir or KZ residues on small ``S^mu`` fibres."""
    if kind not in ("casimir", "kz"):
        raise ValueError(f"type must be 'casimir' or 'kz', got {kind!r}")
    rep = Report("flatness", config={"type": kind, "n": n, "k": k, "max_degree": max_degree, "max_dim": max_dim})
    if n < 2:
        raise ValueError("need n >= 2")
    fibres = flatness_fibres(kind, n, k, max_degree, max_dim)
    for label, conn in fibres:
        sub = kohno_flatness(conn, label)
        for ch in sub.checks:
            if ch.block != label:
                ch.block = f"{label} {ch.block}"
        rep.extend(sub)
    return rep


def verify_monodromy_braid(
    n: int, lam: Sequence[int], k: Optional[int] = None, h: complex = 0.05, tol_ode: float = 1e-10, tol: float = 1e-6,
    order: str = DEFAULT_ORDER,
) -> Report:
    """Braid relations of the numerical Casimir monodromy on the fibre of ``lam``."""
    k = n if k is None else k
    rep = Report("braid", config={"n": n, "lambda": list(lam), "k": k, "h": [complex(h).real, complex(h).imag], "tol_ode": tol_ode})
    for res in main_theorem_harness(n, lam, k, (h,), tol=math.inf, rtol=tol_ode, atol=tol_ode * 1e-2, order=order):
        dim = res.reports[0].matrix.shape[0]
        rep.add(_num_check("monodromy braid relations", f"lam={res.lam} mu={res.mu} h={res.h}", dim, res.braid_residual, tol))
    return rep


def verify_main_theorem(
    n: int,
    lam: Sequence[int],
    k: Optional[int] = None,
    hs: Sequence[complex] = (0.05,),
    mu: Optional[Sequence[int]] = None,
    tol_spec: float = 1e-6,
    tol_trace: float = 1e-5,
    tol_ode: float = 1e-12,
    order: str = DEFAULT_ORDER,
    parallel: bool = False,
) -> Report:
    """Spectra and word traces of the Casimir monodromy against the quantum Weyl group."""
    k = n if k is None else k
    rep = Report(
        "main-theorem",
        config={
            "n": n, "k": k, "lambda": list(lam), "mu": None if mu is None else list(mu),
            "h": [[complex(h).real, complex(h).imag] for h in hs], "tol_spec": tol_spec, "tol_ode": tol_ode,
            "order": order,
        },
    )
    if parallel and len(hs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as ex:
            chunks = list(ex.map(
                lambda h: main_theorem_harness(n, lam, k, (h,), mu, tol_spec, tol_ode, tol_ode * 1e-2, order), hs
            ))
        results = sorted((r for c in chunks for r in c), key=lambda r: (r.mu, r.h.real, r.h.imag))
    else:
        results = main_theorem_harness(n, lam, k, hs, mu, tol_spec, tol_ode, tol_ode * 1e-2, order)
        results.sort(key=lambda r: (r.mu, r.h.real, r.h.imag))
    for res in results:
        block = f"lam={res.lam} mu={res.mu} h={res.h:.4g}"
        for r in res.reports:
            rep.add(_num_check(f"spec(M_{r.generator}) = spec(S_{r.generator})", block, r.matrix.shape[0], r.deviation, tol_spec,
                               {"eigen_table": r.eigen_table()}))
        dim = res.reports[0].matrix.shape[0]
        rep.add(_num_check("monodromy braid relations", block, dim, res.braid_residual, tol_spec))
        if n > 2:
            rep.add(_num_check("word traces M vs S", block, dim, res.trace_deviation, tol_trace))
    rep.extra["harness"] = [r.to_dict() for r in results]
    rep.results = results  # not serialised; used for CSV tables
    return rep


def verify_kz_casimir(
    n: int, lam: Optional[Sequence[int]], mu: Sequence[int], k: int, hs: Sequence[complex] = (0.05,),
    tol: float = 1e-6, tol_ode: float = 1e-12, order: str = DEFAULT_ORDER,
) -> Report:
    """KZ monodromy at coupling ``2h`` against the corrected Casimir monodromy."""
    rep = Report("kz-casimir", config={
        "n": n, "k": k, "lambda": None if lam is None else list(lam), "mu": list(mu),
        "h": [[complex(h).real, complex(h).imag] for h in hs], "tol": tol, "tol_ode": tol_ode,
    })
    for h in hs:
        out = kz_casimir_bridge(n, lam, mu, k, h, tol_ode, tol_ode * 1e-2, order)
        for j, r in enumerate(out["residuals"], start=1):
            rep.add(_num_check(f"pi_KZ(T_{j}) = pi_kappa(T_{j}) D P", f"mu={tuple(mu)} k={k} h={complex(h):.4g}", out["dim"], r, tol))
    return rep
