"""Classical ``gl_k x gl_n`` action on polynomials in a ``k x n`` matrix of variables.

A monomial ``prod x_ij^{m_ij}`` is stored as a tuple of ``k`` row tuples of
length ``n``.  Indices in the public functions are 1-based to match the usual
``E_ab`` notation; ``m[a-1][j-1]`` is the exponent of ``x_aj``.

The k-side generator ``E_ab`` acts as ``sum_j x_aj d/dx_bj`` and the n-side
generator ``E_ij`` as ``sum_a x_ai d/dx_aj``.  The n-side action is the
derivative of ``p(x) -> p(x g)``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, prod
from typing import Dict, List, Sequence, Tuple

from .linalg import nullspace
from .report import Check, Report
from .sparse import Basis, SparseOperator, exp_nilpotent

Monomial = Tuple[Tuple[int, ...], ...]
Poly = Dict[Monomial, object]

BASIS_CAP = 10**6


class CapacityError(RuntimeError):
    """Raised when a requested basis exceeds the configured size cap."""


# ---------------------------------------------------------------------------
# bases


def compositions(total: int, parts: int):
    """All tuples of ``parts`` naturals summing to ``total``, in lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _from_columns(cols: Sequence[Sequence[int]], k: int) -> Monomial:
    return tuple(tuple(c[a] for c in cols) for a in range(k))


class MonomialBasis(Basis):
    """Monomials of fixed column degrees ``mu`` (or fixed total degree)."""

    __slots__ = ("k", "n", "mu", "degree")

    def __init__(self, k: int, n: int, elements, mu=None, degree=None):
        super().__init__(elements)
        self.k = k
        self.n = n
        self.mu = None if mu is None else tuple(mu)
        self.degree = degree


def basis_size(k: int, n: int, mu: Sequence[int]) -> int:
    return prod(comb(k + m - 1, m) for m in mu)


@lru_cache(maxsize=None)
def _enumerate(k: int, n: int, mu: Tuple[int, ...], cap: int) -> MonomialBasis:
    size = basis_size(k, n, mu)
    if size > cap:
        raise CapacityError(f"basis for k={k}, n={n}, mu={mu} has {size} > {cap} elements")
    cols = [list(compositions(m, k)) for m in mu]
    els = sorted(_from_columns(c, k) for c in product(*cols))
    return MonomialBasis(k, n, els, mu=mu, degree=sum(mu))


def enumerate_basis(k: int, n: int, mu: Sequence[int], cap: int = BASIS_CAP) -> MonomialBasis:
    """All ``k x n`` exponent matrices with column sums ``mu``, sorted lexicographically."""
    mu = tuple(int(x) for x in mu)
    if len(mu) != n or any(x < 0 for x in mu):
        raise ValueError(f"mu must be {n} naturals, got {mu}")
    return _enumerate(k, n, mu, cap)


@lru_cache(maxsize=None)
def _degree_basis(k: int, n: int, d: int, cap: int) -> MonomialBasis:
    size = comb(k * n + d - 1, d)
    if size > cap:
        raise CapacityError(f"degree-{d} basis for k={k}, n={n} has {size} > {cap} elements")
    els = sorted(
        tuple(tuple(flat[a * n:(a + 1) * n]) for a in range(k)) for flat in compositions(d, k * n)
    )
    return MonomialBasis(k, n, els, degree=d)


def degree_basis(k: int, n: int, d: int, cap: int = BASIS_CAP) -> MonomialBasis:
    """All ``k x n`` exponent matrices of total degree ``d``."""
    return _degree_basis(k, n, d, cap)


def column_degrees(m: Monomial) -> Tuple[int, ...]:
    return tuple(sum(col) for col in zip(*m))


def row_degrees(m: Monomial) -> Tuple[int, ...]:
    return tuple(sum(r) for r in m)


def _bump(m: Monomial, moves) -> Monomial:
    rows = [list(r) for r in m]
    for a, j, delta in moves:
        rows[a][j] += delta
    return tuple(tuple(r) for r in rows)


# ---------------------------------------------------------------------------
# generators


def k_action(a: int, b: int, m: Monomial) -> Poly:
    """``E^{(k)}_{ab} = sum_j x_aj d/dx_bj`` on a monomial (0-based a, b)."""
    out: Poly = {}
    for j, e in enumerate(m[b]):
        if e:
            t = m if a == b else _bump(m, ((b, j, -1), (a, j, 1)))
            out[t] = out.get(t, 0) + e
    return out


def n_action(i: int, j: int, m: Monomial) -> Poly:
    """``E^{(n)}_{ij} = sum_a x_ai d/dx_aj`` on a monomial (0-based i, j)."""
    out: Poly = {}
    for a, row in enumerate(m):
        e = row[j]
        if e:
            t = m if i == j else _bump(m, ((a, j, -1), (a, i, 1)))
            out[t] = out.get(t, 0) + e
    return out


def apply_poly(action, vec: Poly) -> Poly:
    out: Poly = {}
    for m, c in vec.items():
        for t, v in action(m).items():
            s = out.get(t, 0) + c * v
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def _side_action(side: str, a: int, b: int, k: int, n: int):
    if side == "k":
        if not (1 <= a <= k and 1 <= b <= k):
            raise ValueError(f"k-side indices ({a},{b}) out of range for k={k}")
        return lambda m: k_action(a - 1, b - 1, m)
    if side == "n":
        if not (1 <= a <= n and 1 <= b <= n):
            raise ValueError(f"n-side indices ({a},{b}) out of range for n={n}")
        return lambda m: n_action(a - 1, b - 1, m)
    raise ValueError(f"side must be 'k' or 'n', got {side!r}")


def gl_generator(side: str, a: int, b: int, basis: MonomialBasis) -> SparseOperator:
    """Matrix of ``E_ab`` (1-based) on ``basis``.

    On a fixed-``mu`` basis an off-diagonal n-side generator changes the
    column degrees, so its codomain is the shifted ``mu`` basis.
    """
    act = _side_action(side, a, b, basis.k, basis.n)
    codomain = None
    if side == "n" and a != b and basis.mu is not None:
        mu = list(basis.mu)
        if mu[b - 1] == 0:
            return SparseOperator(basis, {}, basis)
        mu[b - 1] -= 1
        mu[a - 1] += 1
        codomain = enumerate_basis(basis.k, basis.n, mu)
    return SparseOperator.from_action(basis, act, codomain)


def casimir_truncated(i: int, j: int, basis: MonomialBasis) -> SparseOperator:
    """``kappa_ij = E_ij E_ji + E_ji E_ij`` for the n-side root ``theta_i - theta_j``."""
    if not 1 <= i < j <= basis.n:
        raise ValueError("need 1 <= i < j <= n")
    eij = lambda m: n_action(i - 1, j - 1, m)  # noqa: E731
    eji = lambda m: n_action(j - 1, i - 1, m)  # noqa: E731

    def act(m):
        a = apply_poly(eij, eji(m))
        b = apply_poly(eji, eij(m))
        for t, v in b.items():
            a[t] = a.get(t, 0) + v
        return {t: v for t, v in a.items() if v}

    return SparseOperator.from_action(basis, act)


def omega_operators(i: int, j: int, basis: MonomialBasis, variant: str = "gl") -> SparseOperator:
    """``sum_{a,b} x_ai d_bi x_bj d_aj`` (gl), minus ``mu_i mu_j / k`` for the sl variant."""
    if not 1 <= i < j <= basis.n:
        raise ValueError("need 1 <= i < j <= n")
    if variant not in ("gl", "sl"):
        raise ValueError(f"variant must be 'gl' or 'sl', got {variant!r}")
    k = basis.k
    i0, j0 = i - 1, j - 1

    def act(m):
        out: Poly = {}
        for a in range(k):
            for b in range(k):
                # x_bj d_aj first, then x_ai d_bi
                e1 = m[a][j0]
                if not e1:
                    continue
                t = _bump(m, ((a, j0, -1), (b, j0, 1)))
                e2 = t[b][i0]
                if not e2:
                    continue
                t2 = _bump(t, ((b, i0, -1), (a, i0, 1)))
                out[t2] = out.get(t2, 0) + e1 * e2
        if variant == "sl":
            cd = column_degrees(m)
            out[m] = out.get(m, 0) - Fraction(cd[i0] * cd[j0], k)
        return {t: v for t, v in out.items() if v}

    return SparseOperator.from_action(basis, act)


def cartan_diagonal(side: str, a: int, basis: MonomialBasis) -> SparseOperator:
    """Diagonal ``E_aa`` on either side (row or column degree)."""
    if side == "k":
        return SparseOperator.diagonal(basis, lambda m: sum(m[a - 1]))
    return SparseOperator.diagonal(basis, lambda m: sum(r[a - 1] for r in m))


# ---------------------------------------------------------------------------
# Howe bookkeeping


def partitions(d: int, max_parts: int | None = None, max_part: int | None = None) -> List[Tuple[int, ...]]:
    """Partitions of ``d`` in reverse lexicographic order."""
    if max_part is None:
        max_part = d
    if d == 0:
        return [()]
    if max_parts == 0:
        return []
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in partitions(d - first, None if max_parts is None else max_parts - 1, first):
            out.append((first,) + rest)
    return out


def hook_content_dim(lam: Sequence[int], N: int) -> int:
    """Dimension of the irreducible ``GL_N`` module with highest weight ``lam``."""
    lam = [x for x in lam if x]
    if len(lam) > N:
        return 0
    conj = [sum(1 for x in lam if x > c) for c in range(lam[0])] if lam else []
    num = Fraction(1)
    for r, row in enumerate(lam):
        for c in range(row):
            hook = (row - c - 1) + (conj[c] - r - 1) + 1
            num *= Fraction(N + c - r, hook)
    assert num.denominator == 1
    return int(num)


def howe_components(k: int, n: int, d: int) -> List[Tuple[Tuple[int, ...], int, int]]:
    """``(lam, dim V_lam^{(k)}, dim V_lam^{(n)})`` over diagrams with at most ``min(k, n)`` rows."""
    return [(lam, hook_content_dim(lam, k), hook_content_dim(lam, n)) for lam in partitions(d, min(k, n))]


# ---------------------------------------------------------------------------
# highest weight vectors


def weight_space(basis: MonomialBasis, lam: Sequence[int]) -> List[Monomial]:
    lam = tuple(lam) + (0,) * (basis.k - len(lam))
    return [m for m in basis.elements if row_degrees(m) == lam]


def highest_weight_subspace(lam: Sequence[int], mu: Sequence[int], k: int) -> List[Poly]:
    """Basis of vectors in ``S^mu`` of k-side weight ``lam`` killed by every ``E^{(k)}_{a,a+1}``.

    Returned as ``{monomial: Fraction}`` dicts.  The vectors are normalised so
    that each has coefficient 1 at one of the free kernel coordinates.
    """
    mu = tuple(mu)
    lam = tuple(x for x in lam if x)
    if sum(lam) != sum(mu):
        raise ValueError("|lam| must equal |mu|")
    if len(lam) > k:
        return []
    basis = enumerate_basis(k, len(mu), mu)
    W = weight_space(basis, lam)
    if not W:
        return []
    targets: Dict[Monomial, int] = {}
    entries = []
    for c, m in enumerate(W):
        for a in range(k - 1):
            for t, v in k_action(a, a + 1, m).items():
                r = targets.setdefault(t, len(targets))
                entries.append((r, c, v))
    rows = [[0] * len(W) for _ in range(len(targets))]
    for r, c, v in entries:
        rows[r][c] += v
    kernel, _ = nullspace(rows, ncols=len(W))
    return [{W[c]: Fraction(v) for c, v in enumerate(vec) if v} for vec in kernel]


# ---------------------------------------------------------------------------
# the sigma homomorphism


def sigma_matrix(j: int, n: int) -> List[List[int]]:
    """``exp(E_{j,j+1}) exp(-E_{j+1,j}) exp(E_{j,j+1})`` in the vector representation."""
    if not 1 <= j <= n - 1:
        raise ValueError("need 1 <= j <= n-1")
    M = [[int(r == c) for c in range(n)] for r in range(n)]
    M[j - 1][j - 1] = 0
    M[j][j] = 0
    M[j - 1][j] = 1
    M[j][j - 1] = -1
    return M


def sigma_operator(j: int, basis: MonomialBasis) -> SparseOperator:
    """``sigma_j`` on a basis closed under swapping columns ``j`` and ``j+1``.

    Built from the nilpotent exponentials of the n-side generators.
    """
    e = SparseOperator.from_action(basis, lambda m: n_action(j - 1, j, m))
    f = SparseOperator.from_action(basis, lambda m: n_action(j, j - 1, m))
    ee = exp_nilpotent(e)
    return ee @ exp_nilpotent(-f) @ ee


# ---------------------------------------------------------------------------
# verification suites


def _first_entry(op: SparseOperator):
    for c in sorted(op.cols):
        for r in sorted(op.cols[c]):
            if op.cols[c][r]:
                return op.basis.elements[c], op.codomain.elements[r], op.cols[c][r]
    return None


def verify_omega_kappa(k: int, n: int, max_degree: int) -> Report:
    """``2 Omega~_ij = kappa_ij - E_ii - E_jj`` on every ``S^mu`` with ``|mu| <= max_degree``."""
    rep = Report("omega-kappa", config={"k": k, "n": n, "max_degree": max_degree})
    for d in range(max_degree + 1):
        for mu in compositions(d, n):
            basis = enumerate_basis(k, n, mu)
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    diff = (
                        omega_operators(i, j, basis, "gl").scale(2)
                        - casimir_truncated(i, j, basis)
                        + cartan_diagonal("n", i, basis)
                        + cartan_diagonal("n", j, basis)
                    )
                    block = f"k={k} mu={mu}"
                    bad = _first_entry(diff)
                    if bad is None:
                        rep.add(Check(f"2Om~{i}{j}=k{i}{j}-E{i}{i}-E{j}{j}", block, len(basis), "pass", 0.0))
                    else:
                        src, tgt, v = bad
                        cert = {"source": str(src), "target": str(tgt), "residual": str(v)}
                        rep.add(Check(f"2Om~{i}{j}=k{i}{j}-E{i}{i}-E{j}{j}", block, len(basis), "fail", float(abs(v)), cert))
    return rep


def verify_howe_dims(k: int, n: int, d: int) -> Report:
    """``sum_lam dim V_lam^(k) dim V_lam^(n) = C(kn+d-1, d)`` in exact integers."""
    rep = Report("howe-dims", config={"k": k, "n": n, "d": d})
    total = sum(a * b for _, a, b in howe_components(k, n, d))
    expected = comb(k * n + d - 1, d)
    status = "pass" if total == expected else "fail"
    cert = None if total == expected else {"sum": total, "binomial": expected}
    rep.add(Check("sum dim*dim = C(kn+d-1,d)", f"k={k} n={n} d={d}", expected, status, float(abs(total - expected)), cert))
    return rep
