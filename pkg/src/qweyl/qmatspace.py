"""Quantum ``k x n`` matrix space: normal forms and the two quantum group actions.

Monomials use the same ``k``-tuple-of-rows encoding as :mod:`qweyl.glrep`;
``m`` stands for the ordered monomial ``X^m`` whose letters are sorted
column by column (``X_11 ... X_k1 X_12 ... X_kn``).  Quantum polynomials are
dicts ``{monomial: ExactScalar}``.  Generator indices are 1-based.
"""
from __future__ import annotations

import random
from math import comb
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

from .glrep import (
    Monomial,
    MonomialBasis,
    column_degrees,
    degree_basis,
    enumerate_basis,
    hook_content_dim,
    row_degrees,
)
from .linalg import rref
from .qarith import ONE, ZERO, ExactScalar, q_power, qbinomial, qnumber
from .report import Check, Report
from .sparse import Basis, SparseOperator

Letter = Tuple[int, int]  # 1-based (row, column)
QPoly = Dict[Monomial, ExactScalar]

QMINUS = q_power(1) - q_power(-1)

__all__ = [
    "straighten",
    "normal_word",
    "monomial_of_word",
    "qpoly_add",
    "qpoly_text",
    "uq_gl_k_action",
    "uq_gl_n_action",
    "quantum_generator",
    "act_on_word",
    "verify_serre",
    "hw_vector",
    "raising_kernel_dimension",
    "generate_component",
    "random_word",
    "verify_manin",
    "verify_q_pieri",
]


# ---------------------------------------------------------------------------
# polynomials


def qpoly_add(a: QPoly, b: QPoly, scale=None) -> QPoly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, ZERO) + (c if scale is None else c * scale)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def qpoly_scale(a: QPoly, s) -> QPoly:
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def qpoly_equal(a: QPoly, b: QPoly) -> bool:
    return not qpoly_add(a, b, -1)


def qpoly_text(p: QPoly) -> str:
    """``coef * X[i,j]^e ...`` terms in normal order, sorted by monomial."""
    if not p:
        return "0"
    terms = []
    for m in sorted(p):
        letters = " ".join(f"X[{i},{j}]^{e}" for (i, j), e in _letters(m))
        terms.append(f"({ExactScalar.coerce(p[m]).to_text()}) * {letters or '1'}")
    return " + ".join(terms)


def _letters(m: Monomial):
    k, n = len(m), len(m[0])
    for j in range(n):
        for i in range(k):
            if m[i][j]:
                yield (i + 1, j + 1), m[i][j]


# ---------------------------------------------------------------------------
# straightening


def _key(letter: Letter):
    return (letter[1], letter[0])


def normal_word(m: Monomial) -> Tuple[Letter, ...]:
    """Letters of ``X^m`` in normal (column-major) order."""
    out: List[Letter] = []
    for letter, e in _letters(m):
        out.extend([letter] * e)
    return tuple(out)


def monomial_of_word(word: Sequence[Letter], k: int, n: int) -> Monomial:
    rows = [[0] * n for _ in range(k)]
    for i, j in word:
        rows[i - 1][j - 1] += 1
    return tuple(tuple(r) for r in rows)


def _rewrite(a: Letter, b: Letter):
    """Rewrite the out-of-order pair ``a b`` (``key(a) > key(b)``).

    Returns ``[(coefficient, replacement letters), ...]``.
    """
    i, j = a
    k, l = b
    if l < j:
        if k > i:
            return [(ONE, (b, a))]
        if k == i:
            return [(q_power(1), (b, a))]
        return [(ONE, (b, a)), (QMINUS, ((i, l), (k, j)))]
    # same column, k < i
    return [(q_power(1), (b, a))]


def _find_inversion(word: Tuple[Letter, ...], strategy: str) -> int:
    rng = range(len(word) - 1)
    if strategy == "rightmost":
        rng = reversed(rng)
    for p in rng:
        if _key(word[p]) > _key(word[p + 1]):
            return p
    return -1


def straighten(word: Sequence[Letter], k: int, n: int, strategy: str = "leftmost") -> QPoly:
    """Express ``X_{w_1} ... X_{w_d}`` in the ordered monomial basis.

    Adjacent out-of-order letters are rewritten with the Manin relations.
    Each step either removes one inversion while keeping the multiset of
    letters, or (third relation) replaces the pair ``X_ij X_kl`` by
    ``X_il X_kj``, lowering ``sum(row * column)`` by ``(i-k)(j-l) > 0``.
    The pair (``sum(row * column)``, inversions) therefore decreases
    lexicographically and rewriting terminates.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    for i, j in word:
        if not (1 <= i <= k and 1 <= j <= n):
            raise ValueError(f"letter X[{i},{j}] outside a {k}x{n} matrix")
    pending: Dict[Tuple[Letter, ...], ExactScalar] = {tuple(word): ONE}
    result: QPoly = {}
    while pending:
        w, c = pending.popitem()
        p = _find_inversion(w, strategy)
        if p < 0:
            m = monomial_of_word(w, k, n)
            v = result.get(m, ZERO) + c
            if v:
                result[m] = v
            else:
                result.pop(m, None)
            continue
        for coeff, repl in _rewrite(w[p], w[p + 1]):
            nw = w[:p] + repl + w[p + 2:]
            v = pending.get(nw, ZERO) + c * coeff
            if v:
                pending[nw] = v
            else:
                pending.pop(nw, None)
    return result


def straighten_poly(words: Dict[Tuple[Letter, ...], ExactScalar], k: int, n: int, strategy="leftmost") -> QPoly:
    out: QPoly = {}
    for w, c in words.items():
        out = qpoly_add(out, straighten(w, k, n, strategy), c)
    return out


def random_word(rng: random.Random, k: int, n: int, max_len: int = 6) -> Tuple[Letter, ...]:
    length = rng.randint(0, max_len)
    return tuple((rng.randint(1, k), rng.randint(1, n)) for _ in range(length))


# ---------------------------------------------------------------------------
# explicit actions


def _shift(m: Monomial, moves) -> Monomial:
    rows = [list(r) for r in m]
    for a, b, d in moves:
        rows[a][b] += d
    return tuple(tuple(r) for r in rows)


def uq_gl_k_action(gen: str, i: int, m: Monomial) -> QPoly:
    """``D_i``, ``E_i`` or ``F_i`` of ``U_q(gl_k)`` on ``X^m``."""
    k, n = len(m), len(m[0])
    if gen == "D":
        if not 1 <= i <= k:
            raise ValueError("D index out of range")
        s = sum(m[i - 1])
        return {m: ExactScalar.coerce(s)} if s else {}
    if not 1 <= i <= k - 1:
        raise ValueError(f"{gen} index out of range for k={k}")
    r, s = i - 1, i
    out: QPoly = {}
    if gen == "E":
        for j in range(n):
            if m[s][j]:
                expo = sum(m[r][jj] - m[s][jj] for jj in range(j + 1, n))
                t = _shift(m, ((r, j, 1), (s, j, -1)))
                out[t] = qnumber(m[s][j]) * q_power(expo)
        return out
    if gen == "F":
        for j in range(n):
            if m[r][j]:
                expo = -sum(m[r][jj] - m[s][jj] for jj in range(j))
                t = _shift(m, ((r, j, -1), (s, j, 1)))
                out[t] = qnumber(m[r][j]) * q_power(expo)
        return out
    raise ValueError(f"unknown generator {gen!r}")


def uq_gl_n_action(gen: str, j: int, m: Monomial) -> QPoly:
    """``D_j``, ``E_j`` or ``F_j`` of ``U_q(gl_n)`` on ``X^m`` (rows and columns exchanged)."""
    k, n = len(m), len(m[0])
    if gen == "D":
        if not 1 <= j <= n:
            raise ValueError("D index out of range")
        s = sum(row[j - 1] for row in m)
        return {m: ExactScalar.coerce(s)} if s else {}
    if not 1 <= j <= n - 1:
        raise ValueError(f"{gen} index out of range for n={n}")
    c, d = j - 1, j
    out: QPoly = {}
    if gen == "E":
        for i in range(k):
            if m[i][d]:
                expo = sum(m[ii][c] - m[ii][d] for ii in range(i + 1, k))
                t = _shift(m, ((i, c, 1), (i, d, -1)))
                out[t] = qnumber(m[i][d]) * q_power(expo)
        return out
    if gen == "F":
        for i in range(k):
            if m[i][c]:
                expo = -sum(m[ii][c] - m[ii][d] for ii in range(i))
                t = _shift(m, ((i, c, -1), (i, d, 1)))
                out[t] = qnumber(m[i][c]) * q_power(expo)
        return out
    raise ValueError(f"unknown generator {gen!r}")


def _action(side: str):
    if side == "k":
        return uq_gl_k_action
    if side == "n":
        return uq_gl_n_action
    raise ValueError(f"side must be 'k' or 'n', got {side!r}")


def apply_generator(side: str, gen: str, idx: int, p: QPoly) -> QPoly:
    act = _action(side)
    out: QPoly = {}
    for m, c in p.items():
        out = qpoly_add(out, act(gen, idx, m), c)
    return out


def quantum_generator(side: str, gen: str, idx: int, basis: MonomialBasis) -> SparseOperator:
    """Matrix of a generator on ``basis``.

    On a fixed column-degree basis the n-side ``E_j``/``F_j`` land in the
    shifted basis, which becomes the codomain.
    """
    act = _action(side)
    codomain = None
    if side == "n" and gen in ("E", "F") and basis.mu is not None:
        mu = list(basis.mu)
        src, dst = (idx, idx - 1) if gen == "E" else (idx - 1, idx)
        if mu[src] == 0:
            return SparseOperator(basis, {}, basis)
        mu[src] -= 1
        mu[dst] += 1
        codomain = enumerate_basis(basis.k, basis.n, mu)
    return SparseOperator.from_action(basis, lambda m: act(gen, idx, m), codomain)


def cartan_power(side: str, idx: int, basis: Basis, sign: int = 1) -> SparseOperator:
    """Diagonal ``q^{sign * H_idx}`` with ``H_idx = D_idx - D_{idx+1}``."""
    if side == "k":
        h = lambda m: sum(m[idx - 1]) - sum(m[idx])  # noqa: E731
    else:
        h = lambda m: sum(r[idx - 1] for r in m) - sum(r[idx] for r in m)  # noqa: E731
    return SparseOperator.diagonal(basis, lambda m: q_power(sign * h(m)))


# ---------------------------------------------------------------------------
# action on words via the coproduct


def _letter_action(side: str, gen: str, idx: int, letter: Letter):
    """Image of a single generator letter, or ``None``; and its H eigenvalue."""
    i, j = letter
    pos = i if side == "k" else j
    h = (pos == idx) - (pos == idx + 1)
    if gen == "E":
        if pos == idx + 1:
            return ((idx, j) if side == "k" else (i, idx)), h
        return None, h
    if gen == "F":
        if pos == idx:
            return ((idx + 1, j) if side == "k" else (i, idx + 1)), h
        return None, h
    raise ValueError(gen)


def act_on_word(side: str, gen: str, idx: int, word: Sequence[Letter]) -> Dict[Tuple[Letter, ...], ExactScalar]:
    """Generator acting on a word through the coproduct.

    Uses ``E -> E (x) K + 1 (x) E`` and ``F -> F (x) 1 + K^{-1} (x) F`` with
    ``K = q^H``, iterated over the letters.  The result is a combination of
    words, not yet straightened.
    """
    word = tuple(word)
    data = [_letter_action(side, gen, idx, x) for x in word]
    out: Dict[Tuple[Letter, ...], ExactScalar] = {}
    for b, (img, _) in enumerate(data):
        if img is None:
            continue
        if gen == "E":
            expo = sum(h for _, h in data[b + 1:])
        else:
            expo = -sum(h for _, h in data[:b])
        nw = word[:b] + (img,) + word[b + 1:]
        out[nw] = out.get(nw, ZERO) + q_power(expo)
    return out


# ---------------------------------------------------------------------------
# Serre relations


def _first_nonzero(op: SparseOperator):
    for c in sorted(op.cols):
        col = op.cols[c]
        for r in sorted(col):
            if col[r]:
                return r, c, col[r]
    return None


def _relation_check(name: str, op: SparseOperator, block: str) -> Check:
    bad = _first_nonzero(op)
    if bad is None:
        return Check(name, block, len(op.basis), "pass", 0.0)
    r, c, v = bad
    cert = {
        "relation": name,
        "basis_element": qpoly_text({op.basis.elements[c]: ONE}),
        "row_element": qpoly_text({op.codomain.elements[r]: ONE}),
        "residual_scalar": ExactScalar.coerce(v).to_text(),
    }
    return Check(name, block, len(op.basis), "fail", 1.0, cert)


def serre_operators(side: str, p: int, basis: MonomialBasis):
    D = {i: quantum_generator(side, "D", i, basis) for i in range(1, p + 1)}
    E = {i: quantum_generator(side, "E", i, basis) for i in range(1, p)}
    F = {i: quantum_generator(side, "F", i, basis) for i in range(1, p)}
    return D, E, F


def _qint_h(side: str, i: int, basis: Basis) -> SparseOperator:
    if side == "k":
        h = lambda m: sum(m[i - 1]) - sum(m[i])  # noqa: E731
    else:
        h = lambda m: sum(r[i - 1] for r in m) - sum(r[i] for r in m)  # noqa: E731
    return SparseOperator.diagonal(basis, lambda m: qnumber(h(m)))


def verify_serre(k: int, n: int, side: str, degree_bound: int) -> Report:
    """Check every defining relation of ``U_q(gl_p)`` (``p = k`` or ``n``) on each degree."""
    p = k if side == "k" else n
    rep = Report("serre", config={"k": k, "n": n, "side": side, "degree_bound": degree_bound})
    two = qnumber(2)
    for d in range(degree_bound + 1):
        basis = degree_basis(k, n, d)
        block = f"side={side} k={k} n={n} d={d}"
        D, E, F = serre_operators(side, p, basis)
        for i in range(1, p + 1):
            for j in range(i + 1, p + 1):
                rep.add(_relation_check(f"[D{i},D{j}]=0", D[i].commutator(D[j]), block))
        for i in range(1, p + 1):
            for j in range(1, p):
                a = (i == j) - (i == j + 1)
                rep.add(_relation_check(f"[D{i},E{j}]={a}E{j}", D[i].commutator(E[j]) - E[j].scale(a), block))
                rep.add(_relation_check(f"[D{i},F{j}]={-a}F{j}", D[i].commutator(F[j]) + F[j].scale(a), block))
        for i in range(1, p):
            for j in range(1, p):
                lhs = E[i].commutator(F[j])
                if i == j:
                    lhs = lhs - _qint_h(side, i, basis)
                rep.add(_relation_check(f"[E{i},F{j}]", lhs, block))
        for i in range(1, p):
            for j in range(1, p):
                if i == j:
                    continue
                for name, X in (("E", E), ("F", F)):
                    if abs(i - j) > 1:
                        res = X[i].commutator(X[j])
                    else:
                        res = X[i] @ X[i] @ X[j] - (X[i] @ X[j] @ X[i]).scale(two) + X[j] @ X[i] @ X[i]
                    rep.add(_relation_check(f"serre-{name}{i}{j}", res, block))
    return rep


# ---------------------------------------------------------------------------
# highest weight vectors and components


def hw_vector(mu1: int, mu2: int, i: int, k: int = 2, n: int = 2, j: int = 1) -> QPoly:
    """The two-column highest weight vector ``v_i^{mu1,mu2}`` placed in columns ``j, j+1``.

    ``v_i = sum_a (-1)^a [i, a] q^{a(mu2-a+1)} X_1j^{mu1-i+a} X_2j^{i-a} X_1,j+1^{mu2-a} X_2,j+1^a``.
    """
    if not 0 <= i <= min(mu1, mu2):
        raise ValueError(f"need 0 <= i <= min(mu1, mu2), got i={i}")
    if k < 2 and i > 0:
        raise ValueError("for k = 1 only i = 0 is defined")
    if not 1 <= j <= n - 1:
        raise ValueError("need 1 <= j <= n-1")
    out: QPoly = {}
    for a in range(i + 1):
        rows = [[0] * n for _ in range(k)]
        rows[0][j - 1] = mu1 - i + a
        rows[0][j] = mu2 - a
        if k >= 2:
            rows[1][j - 1] = i - a
            rows[1][j] = a
        m = tuple(tuple(r) for r in rows)
        out[m] = qbinomial(i, a) * q_power(a * (mu2 - a + 1)) * (-1) ** a
    return out


def _echelon_insert(rows: List[Dict[int, object]], pivots: List[int], vec: Dict[int, object]) -> bool:
    """Reduce ``vec`` against an echelon list; append it if independent."""
    v = dict(vec)
    for row, piv in zip(rows, pivots):
        c = v.get(piv)
        if c:
            for key, x in row.items():
                s = v.get(key, 0) - c * x
                if s:
                    v[key] = s
                else:
                    v.pop(key, None)
    if not v:
        return False
    piv = min(v)
    lead = v[piv]
    inv = lead.inverse() if hasattr(lead, "inverse") else Fraction(1) / lead
    v = {key: x * inv for key, x in v.items()}
    # keep earlier rows reduced on the new pivot
    for idx, row in enumerate(rows):
        c = row.get(piv)
        if c:
            for key, x in v.items():
                s = row.get(key, 0) - c * x
                if s:
                    row[key] = s
                else:
                    row.pop(key, None)
    rows.append(v)
    pivots.append(piv)
    return True


def raising_kernel(mu1: int, mu2: int, k: int) -> List[QPoly]:
    """Joint kernel of the k-side ``E_a`` on ``S^{mu1} (x) S^{mu2}`` over ``Q(q)``, weight by weight."""
    basis = enumerate_basis(k, 2, (mu1, mu2))
    by_weight: Dict[Tuple[int, ...], List[Monomial]] = {}
    for m in basis.elements:
        by_weight.setdefault(row_degrees(m), []).append(m)
    out: List[QPoly] = []
    for w, W in sorted(by_weight.items()):
        targets: Dict[Monomial, int] = {}
        entries = []
        for c, m in enumerate(W):
            for a in range(1, k):
                for t, v in uq_gl_k_action("E", a, m).items():
                    entries.append((targets.setdefault(t, len(targets)), c, v))
        mat = [[ZERO] * len(W) for _ in range(len(targets))]
        for r, c, v in entries:
            mat[r][c] = mat[r][c] + v
        if not mat:
            out.extend({m: ONE} for m in W)
            continue
        R, piv = rref(mat)
        pset = set(piv)
        for f in range(len(W)):
            if f in pset:
                continue
            vec = {W[f]: ONE}
            for row, p in zip(R, piv):
                if row[f]:
                    vec[W[p]] = -row[f]
            out.append(vec)
    return out


def raising_kernel_dimension(mu1: int, mu2: int, k: int) -> int:
    return len(raising_kernel(mu1, mu2, k))


def generate_component(
    hw: QPoly,
    side: str = "n",
    generators: Iterable[str] = ("E", "F"),
    max_dim: int = 10**5,
) -> List[QPoly]:
    """Basis of the submodule generated by ``hw`` under one side's ``E_j``/``F_j``.

    Vectors are closed under the chosen generators by breadth-first search;
    linear dependence is removed with exact elimination.
    """
    if not hw:
        return []
    m0 = next(iter(hw))
    k, n = len(m0), len(m0[0])
    p = k if side == "k" else n
    labels: Dict[Monomial, int] = {}

    def encode(v: QPoly):
        return {labels.setdefault(m, len(labels)): c for m, c in v.items()}

    rows: List[Dict[int, object]] = []
    pivots: List[int] = []
    found: List[QPoly] = []
    queue = [hw]
    while queue:
        v = queue.pop(0)
        if not v:
            continue
        if not _echelon_insert(rows, pivots, encode(v)):
            continue
        found.append(v)
        if len(found) > max_dim:
            raise RuntimeError("component exceeds max_dim")
        for gen in generators:
            for j in range(1, p):
                queue.append(apply_generator(side, gen, j, v))
    return found


def component_dimension_check(hw: QPoly, lam: Sequence[int], side: str = "n") -> Check:
    m0 = next(iter(hw))
    p = len(m0) if side == "k" else len(m0[0])
    dim = len(generate_component(hw, side))
    expected = hook_content_dim(lam, p)
    status = "pass" if dim == expected else "fail"
    cert = None if dim == expected else {"generated": dim, "oracle": expected}
    return Check("component-dimension", f"side={side} lam={tuple(lam)}", dim, status, float(abs(dim - expected)), cert)


# ---------------------------------------------------------------------------
# verification suites


def verify_manin(k: int, n: int, words: int = 1000, max_len: int = 6, seed: int = 0, max_degree: int = 5) -> Report:
    """Straightening consistency for random words, plus ordered-monomial counts.

    Each straightened word must be supported on monomials of the word's row
    and column degrees, and the two rewrite strategies must agree exactly.
    """
    rep = Report("manin", config={"k": k, "n": n, "words": words, "max_len": max_len, "seed": seed})
    rng = random.Random(seed)
    span_bad = strat_bad = None
    for _ in range(words):
        w = random_word(rng, k, n, max_len)
        m = monomial_of_word(w, k, n)
        left = straighten(w, k, n, "leftmost")
        right = straighten(w, k, n, "rightmost")
        if span_bad is None and any(
            row_degrees(t) != row_degrees(m) or column_degrees(t) != column_degrees(m) for t in left
        ):
            span_bad = w
        if strat_bad is None and not qpoly_equal(left, right):
            strat_bad = w
    block = f"k={k} n={n} seed={seed}"
    rep.add(Check("straighten lands in monomial span", block, words, "fail" if span_bad else "pass",
                  1.0 if span_bad else 0.0, {"word": str(span_bad)} if span_bad else None))
    rep.add(Check("leftmost == rightmost", block, words, "fail" if strat_bad else "pass",
                  1.0 if strat_bad else 0.0, {"word": str(strat_bad)} if strat_bad else None))
    for d in range(max_degree + 1):
        size = len(degree_basis(k, n, d))
        expected = comb(k * n + d - 1, d)
        ok = size == expected
        rep.add(Check("dim degree d = C(kn+d-1,d)", f"k={k} n={n} d={d}", size, "pass" if ok else "fail",
                      float(abs(size - expected)), None if ok else {"count": size, "binomial": expected}))
    return rep


def verify_q_pieri(max_mu: int, k: int) -> Report:
    """Raising-kernel dimension ``min(mu1, mu2) + 1`` and exact annihilation of each ``v_i``."""
    rep = Report("q-pieri", config={"max_mu": max_mu, "k": k})
    for mu1 in range(max_mu + 1):
        for mu2 in range(max_mu + 1):
            block = f"k={k} mu=({mu1},{mu2})"
            expected = min(mu1, mu2) + 1 if k >= 2 else 1
            dim = raising_kernel_dimension(mu1, mu2, k)
            ok = dim == expected
            rep.add(Check("dim raising kernel", block, dim, "pass" if ok else "fail", float(abs(dim - expected)),
                          None if ok else {"dimension": dim, "expected": expected}))
            for i in range(expected):
                v = hw_vector(mu1, mu2, i, k=k)
                bad = None
                for a in range(1, k):
                    img = apply_generator("k", "E", a, v)
                    if img:
                        bad = {"generator": f"E{a}", "image": qpoly_text(img)}
                        break
                rep.add(Check(f"E v_{i} = 0", block, len(v), "fail" if bad else "pass", 1.0 if bad else 0.0, bad))
    return rep
