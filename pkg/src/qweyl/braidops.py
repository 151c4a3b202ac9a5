"""R-matrix and quantum Weyl group operators on quantum matrix space.

Operators live on finite blocks of ``S_q(k, n)``.  A block for generator
``j`` fixes the column degrees outside columns ``j, j+1`` and the total
degree ``N`` of those two columns; it is stable under the ``U_q(gl_2)`` of
columns ``j, j+1`` and under all of ``U_q(gl_k)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .glrep import Monomial, MonomialBasis, enumerate_basis, row_degrees
from .linalg import inverse, matmul
from .qarith import ONE, ZERO, ExactScalar, q_power, qbinomial, qexp_nilpotent, qfactorial, qnumber
from .qmatspace import (
    QMINUS,
    QPoly,
    apply_generator,
    hw_vector,
    qpoly_text,
    uq_gl_k_action,
    uq_gl_n_action,
)
from .report import Check, Report
from .sparse import Basis, SparseOperator


class ContractError(ValueError):
    """Raised when operator inputs violate a documented precondition."""


class StructureError(RuntimeError):
    """Raised when a constructed module does not have the expected shape."""


@dataclass
class BraidOperator:
    op: SparseOperator
    label: str
    j: int

    def __matmul__(self, other: "BraidOperator") -> "BraidOperator":
        return BraidOperator(self.op @ other.op, f"{self.label}*{other.label}", self.j)


# ---------------------------------------------------------------------------
# blocks


def block_basis(k: int, n: int, j: int, total: int, others: Sequence[int] = ()) -> MonomialBasis:
    """Monomials with ``d_j + d_{j+1} = total`` and the other column degrees ``others``.

    ``others`` lists the degrees of the remaining columns in order.
    """
    others = list(others) or [0] * (n - 2)
    if len(others) != n - 2:
        raise ValueError("others must list n-2 column degrees")
    els = []
    for a in range(total + 1):
        mu = others[: j - 1] + [a, total - a] + others[j - 1:]
        els.extend(enumerate_basis(k, n, mu).elements)
    return MonomialBasis(k, n, sorted(els), degree=total + sum(others))


def pair_basis(k: int, mu1: int, mu2: int) -> MonomialBasis:
    """``S^{mu1} (x) S^{mu2}  +  S^{mu2} (x) S^{mu1}`` inside ``S_q(k, 2)``."""
    els = set(enumerate_basis(k, 2, (mu1, mu2)).elements) | set(enumerate_basis(k, 2, (mu2, mu1)).elements)
    return MonomialBasis(k, 2, sorted(els), degree=mu1 + mu2)


# ---------------------------------------------------------------------------
# quantum Weyl group element


def weyl_element_sl2(E: SparseOperator, F: SparseOperator, H: SparseOperator, label: str = "S", j: int = 1) -> BraidOperator:
    """``exp_{q^-1}(q^-1 E q^-H) exp_{q^-1}(-F) exp_{q^-1}(q E q^H) q^{H(H+1)/2}``.

    ``H`` must be diagonal with integer entries.
    """
    basis = E.basis
    hvals: List[int] = []
    for c in range(len(basis)):
        col = H.cols.get(c, {})
        if any(r != c for r in col):
            raise ContractError("H must be diagonal")
        v = col.get(c, 0)
        try:
            fv = ExactScalar.coerce(v).at_one() if isinstance(v, ExactScalar) else Fraction(v)
        except TypeError as exc:
            raise ContractError("H entries must be rational") from exc
        if isinstance(v, ExactScalar) and not (v.is_laurent and set(v.num) <= {0}):
            raise ContractError("H entries must be integers, not q-dependent")
        if fv.denominator != 1:
            raise ContractError(f"non-integer H eigenvalue {fv}")
        hvals.append(int(fv))
    qH = SparseOperator(basis, {c: {c: q_power(h)} for c, h in enumerate(hvals)})
    qmH = SparseOperator(basis, {c: {c: q_power(-h)} for c, h in enumerate(hvals)})
    qHH = SparseOperator(basis, {c: {c: q_power(h * (h + 1) // 2)} for c, h in enumerate(hvals)})
    A = (E @ qmH).scale(q_power(-1))
    B = -F
    C = (E @ qH).scale(q_power(1))
    S = qexp_nilpotent(A, "qinv") @ qexp_nilpotent(B, "qinv") @ qexp_nilpotent(C, "qinv") @ qHH
    return BraidOperator(S, label, j)


def weyl_element_j(j: int, basis: MonomialBasis) -> BraidOperator:
    """Quantum Weyl group element of ``U_q(gl_n)`` for the root ``theta_j - theta_{j+1}``.

    ``basis`` must be stable under ``E_j``, ``F_j`` (e.g. a :func:`block_basis`).
    """
    if not 1 <= j <= basis.n - 1:
        raise ValueError("need 1 <= j <= n-1")
    E = SparseOperator.from_action(basis, lambda m: uq_gl_n_action("E", j, m))
    F = SparseOperator.from_action(basis, lambda m: uq_gl_n_action("F", j, m))
    H = SparseOperator.diagonal(basis, lambda m: sum(r[j - 1] for r in m) - sum(r[j] for r in m))
    return weyl_element_sl2(E, F, H, f"S_{j}", j)


def string_module(L: int) -> Tuple[SparseOperator, SparseOperator, SparseOperator]:
    """``E u_k = [k] u_{k-1}``, ``F u_k = [L-k] u_{k+1}``, ``H u_k = (L-2k) u_k``."""
    basis = Basis(range(L + 1))
    E = SparseOperator(basis, {c: {c - 1: qnumber(c)} for c in range(1, L + 1)})
    F = SparseOperator(basis, {c: {c + 1: qnumber(L - c)} for c in range(L)})
    H = SparseOperator.diagonal(basis, lambda c: L - 2 * c)
    return E, F, H


# ---------------------------------------------------------------------------
# R-matrix by highest weights and equivariance


def rvee_scalar(mu1: int, mu2: int, i: int, k: int) -> ExactScalar:
    """``(-1)^i q^{(mu1-i)(mu2-i) - i - mu1 mu2 / k}``."""
    return q_power(Fraction((mu1 - i) * (mu2 - i) - i) - Fraction(mu1 * mu2, k)) * (-1) ** i


def _to_dense_vec(v: QPoly, index: Dict[Monomial, int], size: int):
    out = [ZERO] * size
    for m, c in v.items():
        out[index[m]] = c
    return out


def _equivariant_half(mu1: int, mu2: int, k: int) -> Dict[int, Dict[Monomial, ExactScalar]]:
    """Columns of ``R^vee: S^{mu1} (x) S^{mu2} -> S^{mu2} (x) S^{mu1}`` keyed by source monomial."""
    src = enumerate_basis(k, 2, (mu1, mu2))
    pairs: List[Tuple[QPoly, QPoly]] = []
    for i in range(min(mu1, mu2) + 1):
        v = hw_vector(mu1, mu2, i, k=k)
        w = {m: c * rvee_scalar(mu1, mu2, i, k) for m, c in hw_vector(mu2, mu1, i, k=k).items()}
        pairs.extend(_component_pairs(v, w, k))
    if len(pairs) != len(src):
        raise StructureError(
            f"q-Pieri components span {len(pairs)} vectors but S^{mu1} (x) S^{mu2} has dimension {len(src)}"
        )
    # solve weight space by weight space
    by_weight: Dict[Tuple[int, ...], List[Tuple[QPoly, QPoly]]] = {}
    for v, w in pairs:
        by_weight.setdefault(row_degrees(next(iter(v))), []).append((v, w))
    cols: Dict[Monomial, Dict[Monomial, ExactScalar]] = {}
    for wt, items in by_weight.items():
        mons = sorted({m for v, _ in items for m in v})
        tmons = sorted({m for _, w in items for m in w})
        if len(mons) != len(items):
            raise StructureError(f"weight {wt}: {len(items)} vectors for {len(mons)} monomials")
        mi = {m: a for a, m in enumerate(mons)}
        ti = {m: a for a, m in enumerate(tmons)}
        Bm = [list(col) for col in zip(*[_to_dense_vec(v, mi, len(mons)) for v, _ in items])]
        Im = [list(col) for col in zip(*[_to_dense_vec(w, ti, len(tmons)) for _, w in items])]
        R = matmul(Im, inverse(Bm, one=ONE))
        for c, m in enumerate(mons):
            col = {tmons[r]: R[r][c] for r in range(len(tmons)) if R[r][c]}
            cols[m] = col
    return cols


def _component_pairs(v: QPoly, w: QPoly, k: int) -> List[Tuple[QPoly, QPoly]]:
    """Breadth-first F-orbit of ``v`` with the matching orbit of ``w``, pruned to a basis."""
    from .qmatspace import _echelon_insert

    labels: Dict[Monomial, int] = {}

    def enc(x):
        return {labels.setdefault(m, len(labels)): c for m, c in x.items()}

    rows: List[dict] = []
    pivots: List[int] = []
    out = []
    queue = [(v, w)]
    while queue:
        a, b = queue.pop(0)
        if not a:
            continue
        if not _echelon_insert(rows, pivots, enc(a)):
            continue
        out.append((a, b))
        for idx in range(1, k):
            queue.append((apply_generator("k", "F", idx, a), apply_generator("k", "F", idx, b)))
    return out


def rvee_equivariant(mu1: int, mu2: int, k: int) -> BraidOperator:
    """``R^vee`` on ``pair_basis(k, mu1, mu2)`` from its values on highest weight vectors."""
    if k < 2:
        raise ContractError("rvee_equivariant needs k >= 2")
    basis = pair_basis(k, mu1, mu2)
    cols = dict(_equivariant_half(mu1, mu2, k))
    if mu1 != mu2:
        cols.update(_equivariant_half(mu2, mu1, k))
    op = SparseOperator.from_action(basis, lambda m: cols[m])
    return BraidOperator(op, "Rv", 1)


def rmatrix_direct_k2(mu1: int, mu2: int) -> BraidOperator:
    """``flip . q^{<w1,w2> - |w1||w2|/2} . exp_q((q - q^-1) E (x) F)`` for ``k = 2``.

    ``E`` acts on the first column, ``F`` on the second, each through the
    one-column formulas; the Cartan factor reads the row weights of the two
    columns after ``E (x) F``.
    """
    k = 2
    basis = pair_basis(k, mu1, mu2)

    def col_mono(m, c):
        return tuple((row[c],) for row in m)

    def join(a, b):
        return tuple((a[r][0], b[r][0]) for r in range(k))

    def ef(m):
        out = {}
        for a, ca in uq_gl_k_action("E", 1, col_mono(m, 0)).items():
            for b, cb in uq_gl_k_action("F", 1, col_mono(m, 1)).items():
                t = join(a, b)
                out[t] = out.get(t, ZERO) + ca * cb * QMINUS
        return out

    X = SparseOperator.from_action(basis, ef)
    theta = qexp_nilpotent(X, "q")

    def cartan(m):
        w1 = [m[r][0] for r in range(k)]
        w2 = [m[r][1] for r in range(k)]
        e = Fraction(sum(a * b for a, b in zip(w1, w2))) - Fraction(sum(w1) * sum(w2), k)
        return q_power(e)

    C = SparseOperator.diagonal(basis, cartan)
    flip = SparseOperator.from_action(basis, lambda m: {tuple((r[1], r[0]) for r in m): ONE})
    return BraidOperator(flip @ C @ theta, "Rv-direct", 1)


def vector_rvee_entries(k: int) -> SparseOperator:
    """gl_k vector-representation ``R^vee`` on ``S^1 (x) S^1`` with ``e_a (x) e_b = X_a1 X_b2``.

    ``R^vee(e_j (x) e_l) = q^{delta_jl} e_l (x) e_j + [j > l](q - q^-1) e_j (x) e_l``.
    """
    basis = pair_basis(k, 1, 1)

    def pos(m):
        a = next(r for r in range(k) if m[r][0])
        b = next(r for r in range(k) if m[r][1])
        return a, b

    def mono(a, b):
        return tuple((int(r == a), int(r == b)) for r in range(k))

    def act(m):
        jj, ll = pos(m)
        out = {mono(ll, jj): q_power(int(jj == ll))}
        if jj > ll:
            out[mono(jj, ll)] = out.get(mono(jj, ll), ZERO) + QMINUS
        return out

    return SparseOperator.from_action(basis, act)


# ---------------------------------------------------------------------------
# S^mu_alpha


def s_mu_alpha_identity(mu: int, alpha: int) -> ExactScalar:
    """The sum ``S^mu_alpha`` arising in the R-matrix eigenvalue computation (it equals 1)."""
    if not 0 <= alpha <= mu:
        raise ValueError("need 0 <= alpha <= mu")
    total = ZERO
    base = qfactorial(mu - alpha)
    for n in range(alpha + 1):
        term = (
            qbinomial(alpha, n)
            * (qfactorial(mu - alpha + n) / base)
            * q_power((alpha - n) * (mu - alpha + n + 1) + n * (n - 1) // 2)
            * QMINUS ** n
        )
        total = total + (term if n % 2 == 0 else -term)
    return total * q_power(alpha * (mu - alpha + 1))


def s_mu_alpha_recursion_residual(mu: int, alpha: int) -> ExactScalar:
    """``S^mu_a - (q^{2(mu-a+1)} S^{mu-1}_{a-1} - (q^{2(mu-a+1)} - 1) S^mu_{a-1})`` for ``1 <= a <= mu``."""
    t = q_power(2 * (mu - alpha + 1))
    return s_mu_alpha_identity(mu, alpha) - (
        t * s_mu_alpha_identity(mu - 1, alpha - 1) - (t - 1) * s_mu_alpha_identity(mu, alpha - 1)
    )


# ---------------------------------------------------------------------------
# correction factor and embedding


@dataclass
class CorrectionFactor:
    j: int
    k: int

    def coefficient(self, m: Monomial) -> ExactScalar:
        dj = sum(r[self.j - 1] for r in m)
        dj1 = sum(r[self.j] for r in m)
        return q_power(-(Fraction(dj) + Fraction(dj * dj1, self.k))) * (-1) ** dj

    def operator(self, basis: Basis) -> SparseOperator:
        return SparseOperator.diagonal(basis, self.coefficient)


def correction_factor(j: int, k: int, basis: Basis | None = None):
    """Diagonal ``(-1)^{d_j} q^{-(d_j + d_j d_{j+1}/k)}``; an operator if ``basis`` is given."""
    cf = CorrectionFactor(j, k)
    return cf if basis is None else cf.operator(basis)


def embed_two_column(op2: SparseOperator, j: int, basis: MonomialBasis) -> SparseOperator:
    """Let a ``k x 2`` operator act on columns ``j, j+1`` of a ``k x n`` block, others spectating."""
    lookup = op2.basis.index
    rows2 = op2.codomain.elements

    def act(m):
        sub = tuple((r[j - 1], r[j]) for r in m)
        col = op2.cols.get(lookup[sub], {})
        out = {}
        for r, v in col.items():
            t = rows2[r]
            out[tuple(row[: j - 1] + (t[a][0], t[a][1]) + row[j + 1:] for a, row in enumerate(m))] = v
        return out

    return SparseOperator.from_action(basis, act)


def rvee_on_block(k: int, basis: MonomialBasis, j: int) -> SparseOperator:
    """``R_j^vee`` on a :func:`block_basis`, assembled bidegree by bidegree."""
    pieces: Dict[Tuple[int, int], SparseOperator] = {}
    cols: Dict[int, Dict[int, ExactScalar]] = {}
    idx = basis.index
    for c, m in enumerate(basis.elements):
        d1 = sum(r[j - 1] for r in m)
        d2 = sum(r[j] for r in m)
        key = (min(d1, d2), max(d1, d2))
        if key not in pieces:
            pieces[key] = embed_two_column(rvee_equivariant(d1, d2, k).op, j, _pair_block(basis, j, d1, d2))
        piece = pieces[key]
        pc = piece.basis.index[m]
        cols[c] = {idx[piece.codomain.elements[r]]: v for r, v in piece.cols.get(pc, {}).items()}
    return SparseOperator(basis, cols)


def _pair_block(basis: MonomialBasis, j: int, d1: int, d2: int) -> MonomialBasis:
    els = [m for m in basis.elements if {(sum(r[j - 1] for r in m), sum(r[j] for r in m))} <= {(d1, d2), (d2, d1)}]
    return MonomialBasis(basis.k, basis.n, els)


# ---------------------------------------------------------------------------
# verification


def _residual_check(name: str, block: str, diff: SparseOperator) -> Check:
    for c in sorted(diff.cols):
        for r in sorted(diff.cols[c]):
            v = diff.cols[c][r]
            if v:
                cert = {
                    "source": qpoly_text({diff.basis.elements[c]: ONE}),
                    "target": qpoly_text({diff.codomain.elements[r]: ONE}),
                    "residual_scalar": ExactScalar.coerce(v).to_text(),
                }
                return Check(name, block, len(diff.basis), "fail", 1.0, cert)
    return Check(name, block, len(diff.basis), "pass", 0.0)


def _spectator_degrees(n: int, degree_bound: int, spectators: int) -> List[List[int]]:
    if n == 2:
        return [[]]
    out = [[0] * (n - 2)]
    if spectators and degree_bound >= 1:
        for p in range(n - 2):
            out.append([int(a == p) for a in range(n - 2)])
    return out


def verify_RS(k: int, n: int, degree_bound: int, spectators: int = 1) -> Report:
    """Check ``R_j^vee = S_j . correction_j`` on every block with ``d_j + d_{j+1} <= degree_bound``.

    For ``n > 2`` each block is also taken with one spectator column of
    degree 1 (when ``spectators`` is set), so the check exercises columns
    outside ``j, j+1``.
    """
    rep = Report("rs-identity", config={"k": k, "n": n, "degree_bound": degree_bound})
    for j in range(1, n):
        for others in _spectator_degrees(n, degree_bound, spectators):
            for total in range(degree_bound + 1):
                basis = block_basis(k, n, j, total, others)
                R = rvee_on_block(k, basis, j)
                S = weyl_element_j(j, basis).op
                corr = correction_factor(j, k, basis)
                rep.add(
                    _residual_check(
                        "Rv_j = S_j*corr_j", f"k={k} n={n} j={j} N={total} others={others}", R - S @ corr
                    )
                )
    return rep


def verify_braid_relations(operators: Sequence, label: str = "braid") -> Report:
    """Exact braid relations for ``A_1 .. A_{n-1}`` on a common basis."""
    ops = [o.op if isinstance(o, BraidOperator) else o for o in operators]
    rep = Report("braid")
    if len(ops) <= 1:
        rep.add(Check(f"{label}: no relations", "n<=2", len(ops[0].basis) if ops else 0, "pass", 0.0))
        return rep
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            A, B = ops[a], ops[b]
            if b == a + 1:
                diff = A @ B @ A - B @ A @ B
                name = f"{label}: A{a+1}A{b+1}A{a+1}=A{b+1}A{a+1}A{b+1}"
            else:
                diff = A @ B - B @ A
                name = f"{label}: A{a+1}A{b+1}=A{b+1}A{a+1}"
            rep.add(_residual_check(name, f"dim={len(A.basis)}", diff))
    return rep


def full_degree_weyl_family(k: int, n: int, d: int) -> List[BraidOperator]:
    """All ``S_j`` on the full degree-``d`` basis of ``S_q(k, n)``."""
    from .glrep import degree_basis

    basis = degree_basis(k, n, d)
    return [weyl_element_j(j, basis) for j in range(1, n)]


def verify_s_mu_alpha(max_mu: int) -> Report:
    """``S^mu_alpha = 1`` for ``0 <= alpha <= mu <= max_mu``."""
    rep = Report("s-mu-alpha", config={"max_mu": max_mu})
    for mu in range(max_mu + 1):
        for alpha in range(mu + 1):
            v = s_mu_alpha_identity(mu, alpha)
            ok = v == ONE
            rep.add(Check("S^mu_alpha = 1", f"mu={mu} alpha={alpha}", 1, "pass" if ok else "fail",
                          0.0 if ok else 1.0, None if ok else {"value": v.to_text()}))
    return rep


def verify_braid_family(k: int, n: int, degree_bound: int) -> Report:
    """Exact braid relations of the ``S_j`` on every degree up to ``degree_bound``."""
    rep = Report("braid", config={"k": k, "n": n, "degree_bound": degree_bound})
    for d in range(degree_bound + 1):
        sub = verify_braid_relations(full_degree_weyl_family(k, n, d), f"S d={d}")
        rep.extend(sub)
    return rep
