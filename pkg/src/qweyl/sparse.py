"""Sparse operators on finite labelled bases.

An operator stores its columns as ``{col: {row: scalar}}`` with integer
indices into a :class:`Basis`.  Scalars may be ``int``, ``Fraction`` or
:class:`~qweyl.qarith.ExactScalar`; nothing here depends on which.
"""
from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, List, Sequence, Tuple

import numpy as np

from .qarith import ExactScalar, evaluate


class Basis:
    """Ordered tuple of hashable labels with a reverse index."""

    __slots__ = ("elements", "index")

    def __init__(self, elements: Iterable[Hashable]):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("basis labels must be distinct")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return isinstance(other, Basis) and self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"Basis(dim={len(self)})"


def _same(a: Basis, b: Basis) -> bool:
    return a is b or a == b


def _nonzero(c) -> bool:
    return bool(c)


Vector = Dict[Hashable, object]


def vec_add(a: Vector, b: Vector, scale=1) -> Vector:
    out = dict(a)
    for key, c in b.items():
        v = out.get(key, 0) + (c if scale == 1 else c * scale)
        if _nonzero(v):
            out[key] = v
        else:
            out.pop(key, None)
    return out


def vec_scale(a: Vector, s) -> Vector:
    if not s:
        return {}
    out = {}
    for key, c in a.items():
        v = c * s
        if v:
            out[key] = v
    return out


def vec_equal(a: Vector, b: Vector) -> bool:
    return not vec_add(a, b, -1)


class SparseOperator:
    """Sparse matrix from ``basis`` (columns) to ``codomain`` (rows).

    The codomain defaults to the domain; most operators here are square.
    """

    __slots__ = ("basis", "cols", "codomain")

    def __init__(
        self,
        basis: Basis,
        cols: Dict[int, Dict[int, object]] | None = None,
        codomain: Basis | None = None,
    ):
        self.basis = basis
        self.codomain = basis if codomain is None else codomain
        self.cols = {c: col for c, col in (cols or {}).items() if col}

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_action(
        cls, basis: Basis, action: Callable[[Hashable], Vector], codomain: Basis | None = None
    ) -> "SparseOperator":
        """Build from a map ``label -> {label: coefficient}``.

        Images must stay inside the codomain; a ``KeyError`` signals otherwise.
        """
        idx = (basis if codomain is None else codomain).index
        cols = {}
        for c, label in enumerate(basis.elements):
            image = action(label)
            col = {}
            for key, v in image.items():
                if v:
                    col[idx[key]] = v
            if col:
                cols[c] = col
        return cls(basis, cols, codomain)

    @classmethod
    def identity(cls, basis: Basis, one=1) -> "SparseOperator":
        return cls(basis, {i: {i: one} for i in range(len(basis))})

    @classmethod
    def diagonal(cls, basis: Basis, fn: Callable[[Hashable], object]) -> "SparseOperator":
        cols = {}
        for i, label in enumerate(basis.elements):
            v = fn(label)
            if v:
                cols[i] = {i: v}
        return cls(basis, cols)

    @classmethod
    def zero(cls, basis: Basis) -> "SparseOperator":
        return cls(basis, {})

    # -- algebra ----------------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.codomain is self.basis or self.codomain == self.basis

    def _check(self, other):
        if not (_same(self.basis, other.basis) and _same(self.codomain, other.codomain)):
            raise ValueError("operators act on different bases")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        cols = {c: dict(col) for c, col in self.cols.items()}
        for c, col in other.cols.items():
            tgt = cols.setdefault(c, {})
            for r, v in col.items():
                s = tgt.get(r, 0) + v
                if s:
                    tgt[r] = s
                else:
                    tgt.pop(r, None)
        return SparseOperator(self.basis, cols, self.codomain)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "SparseOperator":
        if not s:
            return SparseOperator(self.basis, {}, self.codomain)
        cols = {}
        for c, col in self.cols.items():
            new = {}
            for r, v in col.items():
                w = v * s
                if w:
                    new[r] = w
            cols[c] = new
        return SparseOperator(self.basis, cols, self.codomain)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        if not _same(self.basis, other.codomain):
            raise ValueError("operator shapes do not compose")
        mine = self.cols
        cols = {}
        for c, col in other.cols.items():
            acc: Dict[int, object] = {}
            for mid, v in col.items():
                left = mine.get(mid)
                if not left:
                    continue
                for r, w in left.items():
                    acc[r] = acc.get(r, 0) + w * v
            acc = {r: x for r, x in acc.items() if x}
            if acc:
                cols[c] = acc
        return SparseOperator(other.basis, cols, self.codomain)

    def commutator(self, other: "SparseOperator") -> "SparseOperator":
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return not any(any(v for v in col.values()) for col in self.cols.values())

    def __eq__(self, other):
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def nnz(self) -> int:
        return sum(len(col) for col in self.cols.values())

    def entry(self, r: int, c: int):
        return self.cols.get(c, {}).get(r, 0)

    def transpose(self) -> "SparseOperator":
        cols: Dict[int, Dict[int, object]] = {}
        for c, col in self.cols.items():
            for r, v in col.items():
                cols.setdefault(r, {})[c] = v
        return SparseOperator(self.codomain, cols, self.basis)

    def apply(self, vec: Vector) -> Vector:
        """Apply to a label-keyed vector."""
        idx = self.basis.index
        els = self.codomain.elements
        out: Dict[Hashable, object] = {}
        for key, v in vec.items():
            col = self.cols.get(idx[key])
            if not col:
                continue
            for r, w in col.items():
                lab = els[r]
                out[lab] = out.get(lab, 0) + w * v
        return {k: x for k, x in out.items() if x}

    def map(self, fn: Callable[[object], object]) -> "SparseOperator":
        return SparseOperator(
            self.basis,
            {c: {r: fn(v) for r, v in col.items()} for c, col in self.cols.items()},
            self.codomain,
        )

    def restrict(self, sub: Basis) -> "SparseOperator":
        """Compression onto the span of ``sub`` (labels must lie in ``self.basis``)."""
        els = self.codomain.elements
        sidx = sub.index
        cols = {}
        for c, label in enumerate(sub.elements):
            col = self.cols.get(self.basis.index[label], {})
            new = {sidx[els[r]]: v for r, v in col.items() if els[r] in sidx}
            if new:
                cols[c] = new
        return SparseOperator(sub, cols)

    # -- export -----------------------------------------------------------

    def to_dense(self, convert: Callable[[object], complex] | None = None, dtype=complex) -> np.ndarray:
        out = np.zeros((len(self.codomain), len(self.basis)), dtype=dtype)
        for c, col in self.cols.items():
            for r, v in col.items():
                out[r, c] = convert(v) if convert else v
        return out

    def to_numeric(self, q=None, *, log_q=None) -> np.ndarray:
        """Dense complex matrix with every scalar evaluated at ``q``."""
        return self.to_dense(lambda v: evaluate(v, q, log_q=log_q))

    def to_exact_dense(self) -> List[List[object]]:
        out = [[0] * len(self.basis) for _ in range(len(self.codomain))]
        for c, col in self.cols.items():
            for r, v in col.items():
                out[r][c] = v
        return out

    def coo_lines(self) -> List[Tuple[int, int, str]]:
        """Sorted ``(row, col, scalar_text)`` triples."""
        out = []
        for c, col in self.cols.items():
            for r, v in col.items():
                text = v.to_text() if isinstance(v, ExactScalar) else str(v)
                out.append((r, c, text))
        out.sort()
        return out

    def __repr__(self):
        return f"SparseOperator(dim={len(self.basis)}, nnz={self.nnz()})"


def from_dense(basis: Basis, rows: Sequence[Sequence[object]]) -> SparseOperator:
    cols: Dict[int, Dict[int, object]] = {}
    for r, row in enumerate(rows):
        for c, v in enumerate(row):
            if v:
                cols.setdefault(c, {})[r] = v
    return SparseOperator(basis, cols)


def exp_nilpotent(A: SparseOperator, coefficient: Callable[[int], object] | None = None) -> SparseOperator:
    """``sum_n c(n) A^n`` for nilpotent square ``A``; ``c(n)`` defaults to ``1/n!``.

    Raises ``ValueError`` if ``A^n`` is still nonzero once ``n`` exceeds the
    dimension.
    """
    from fractions import Fraction
    from math import factorial

    if coefficient is None:
        coefficient = lambda n: Fraction(1, factorial(n))  # noqa: E731
    result = SparseOperator.identity(A.basis)
    power = A
    n = 1
    while not power.is_zero():
        if n > len(A.basis):
            raise ValueError(f"operator is not nilpotent within dimension {len(A.basis)}")
        result = result + power.scale(coefficient(n))
        power = power @ A
        n += 1
    return result
