"""Row statistics and membership predicates for the diagonal-dominance
tensor hierarchy, each failed verdict carrying a concrete witness.

Strict inequalities are evaluated with exact floating-point comparison by
default; the class boundaries are part of the definitions.  Every predicate
accepts an optional ``margin >= 0`` requiring each inequality to hold with
that much slack (robustness studies only, default 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Tensor

__all__ = [
    "RowStats",
    "PairStats",
    "Witness",
    "Verdict",
    "ClassReport",
    "InternalConsistencyError",
    "row_stats",
    "pair_stats",
    "all_row_stats",
    "b_tensor_formulations",
    "is_b_tensor",
    "product_inequality",
    "is_double_b_tensor",
    "is_quasi_double_b_tensor",
    "is_quasi_double_b0_tensor",
    "is_z_tensor",
    "is_dsdd",
    "is_qdsdd",
    "classify_all",
    "CLASS_NAMES",
]

CLASS_NAMES = (
    "B",
    "DoubleB",
    "QuasiDoubleB",
    "QuasiDoubleB0",
    "Z",
    "DSDD",
    "QDSDD",
    "ProductIneq",
)


class InternalConsistencyError(RuntimeError):
    """A relationship that must hold between verdicts was violated."""


@dataclass(frozen=True)
class RowStats:
    """Per-row statistics of row ``row`` (1-based).

    ``beta``     max of 0 and the largest off-diagonal entry of the row.
    ``delta``    sum over off-diagonal slots of ``beta - entry`` (>= 0).
    ``r``        sum of absolute off-diagonal entries (>= 0).
    ``row_sum``  sum of all row entries including the diagonal.
    """

    row: int
    beta: float
    delta: float
    r: float
    row_sum: float


@dataclass(frozen=True)
class PairStats:
    """Row-j statistics with the single tail entry ``b[j, i, ..., i]`` split off.

    ``delta_j_i = delta_j - (beta_j - b_ji_tail)`` and
    ``r_j_i = r_j - |b_ji_tail|``, both nonnegative.
    """

    i: int
    j: int
    delta_j_i: float
    r_j_i: float
    b_ji_tail: float


@dataclass(frozen=True)
class Witness:
    """First violated inequality, in lexicographic index order.

    ``lhs``/``rhs`` are the two sides as evaluated; the verdict failed
    because ``lhs`` did not exceed (or reach) ``rhs``.
    """

    condition: str
    lhs: float
    rhs: float
    index: int | None = None
    pair: tuple[int, int] | None = None
    multi_index: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ClassReport:
    """Verdict per class name; ``None`` marks an inapplicable class (n = 1
    has no index pairs).  ``witnesses`` has an entry for every False verdict.
    """

    verdicts: dict[str, bool | None]
    witnesses: dict[str, Witness]
    symmetric: bool
    even_order: bool


# ---------------------------------------------------------------------------
# row / pair statistics


def _diag_stride(order: int, dim: int) -> int:
    # flat offset of (i, i, ..., i) within row i is i * stride
    return sum(dim**k for k in range(order - 1))


class _Stats:
    """All row data of one tensor, computed once and shared by the predicates."""

    def __init__(self, T: Tensor):
        n, m = T.dim, T.order
        rows = T.data.reshape(n, -1)
        stride = _diag_stride(m, n)
        self.T = T
        self.n = n
        self.m = m
        self.rows = rows
        self.stride = stride
        self.diag = np.array([rows[i, i * stride] for i in range(n)])
        off = [np.delete(rows[i], i * stride) for i in range(n)]
        self.off = off
        self.beta = np.array(
            [max(0.0, float(o.max())) if o.size else 0.0 for o in off]
        )
        self.max_off = np.array(
            [float(o.max()) if o.size else -np.inf for o in off]
        )
        # delta as the literal sum of (beta - entry): every summand is >= 0
        # exactly, so delta >= 0 survives floating point
        self.delta = np.array(
            [float(np.sum(self.beta[i] - off[i])) if off[i].size else 0.0 for i in range(n)]
        )
        self.r = np.array(
            [float(np.sum(np.abs(o))) if o.size else 0.0 for o in off]
        )
        self.row_sum = rows.sum(axis=1)

    def tail(self, j0: int, i0: int) -> float:
        # entry b[j, i, ..., i] (0-based arguments)
        return float(self.rows[j0, i0 * self.stride])

    def row(self, i0: int) -> RowStats:
        return RowStats(
            row=i0 + 1,
            beta=float(self.beta[i0]),
            delta=float(self.delta[i0]),
            r=float(self.r[i0]),
            row_sum=float(self.row_sum[i0]),
        )


def row_stats(T: Tensor, i: int) -> RowStats:
    """Statistics of row ``i`` (1-based)."""
    if not (1 <= i <= T.dim):
        raise ValueError(f"row index {i} out of range 1..{T.dim}")
    return _Stats(T).row(i - 1)


def pair_stats(T: Tensor, i: int, j: int) -> PairStats:
    """Pair statistics for ordered ``(i, j)``, ``i != j`` (1-based)."""
    if i == j:
        raise ValueError(f"pair indices must differ, got i = j = {i}")
    for k in (i, j):
        if not (1 <= k <= T.dim):
            raise ValueError(f"index {k} out of range 1..{T.dim}")
    return _pair_stats(_Stats(T), i - 1, j - 1)


def _pair_stats(s: _Stats, i0: int, j0: int) -> PairStats:
    tail = s.tail(j0, i0)
    return PairStats(
        i=i0 + 1,
        j=j0 + 1,
        delta_j_i=float(s.delta[j0] - (s.beta[j0] - tail)),
        r_j_i=float(s.r[j0] - abs(tail)),
        b_ji_tail=tail,
    )


def all_row_stats(T: Tensor) -> list[RowStats]:
    """Statistics for every row, computed in one pass."""
    s = _Stats(T)
    return [s.row(i0) for i0 in range(T.dim)]


# ---------------------------------------------------------------------------
# predicates


def _require_pairs(T: Tensor) -> None:
    if T.dim < 2:
        raise ValueError("pairwise class membership needs dimension n >= 2")


def b_tensor_formulations(
    T: Tensor, margin: float = 0.0, _stats: _Stats | None = None
) -> tuple[bool, bool, bool]:
    """The three equivalent B-tensor tests, evaluated independently.

    Returns (row-sum form, scaled-beta form, diagonal-minus-beta form).
    They agree in exact arithmetic; disagreement at margin 0 is reported by
    :func:`is_b_tensor` as an internal inconsistency.
    """
    s = _stats if _stats is not None else _Stats(T)
    c = float(T.dim ** (T.order - 1))
    form_rowsum = True
    form_beta = True
    form_delta = True
    for i0 in range(T.dim):
        has_off = s.off[i0].size > 0
        if not (s.row_sum[i0] > margin and (not has_off or s.row_sum[i0] / c > s.max_off[i0] + margin)):
            form_rowsum = False
        if not s.row_sum[i0] > c * s.beta[i0] + margin:
            form_beta = False
        if not s.diag[i0] - s.beta[i0] > s.delta[i0] + margin:
            form_delta = False
    return form_rowsum, form_beta, form_delta


def is_b_tensor(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Positive row sums, with each row sum exceeding ``n**(m-1)`` times
    every off-diagonal entry of that row.

    At margin 0 all three textual formulations are evaluated and must agree
    (they are only equivalent without margin, so the cross-check is skipped
    for margin > 0).
    """
    s = _stats if _stats is not None else _Stats(T)
    if margin == 0.0:
        forms = b_tensor_formulations(T, _stats=s)
        if len(set(forms)) != 1:
            raise InternalConsistencyError(
                f"B-tensor formulations disagree: row-sum={forms[0]}, "
                f"scaled-beta={forms[1]}, diagonal-delta={forms[2]}"
            )
    for i0 in range(T.dim):
        if not s.row_sum[i0] > margin:
            return Verdict(False, Witness(
                "row-sum-positive", lhs=float(s.row_sum[i0]), rhs=margin, index=i0 + 1))
        if s.off[i0].size and not s.diag[i0] - s.beta[i0] > s.delta[i0] + margin:
            return Verdict(False, Witness(
                "diagonal-beta-exceeds-delta",
                lhs=float(s.diag[i0] - s.beta[i0]), rhs=float(s.delta[i0] + margin),
                index=i0 + 1))
    return Verdict(True)


def product_inequality(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Pairwise test ``(b_ii - beta_i)(b_jj - beta_j) > delta_i * delta_j``
    over every unordered pair (the condition is symmetric in i, j)."""
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    for i0 in range(T.dim):
        for j0 in range(i0 + 1, T.dim):
            lhs = (s.diag[i0] - s.beta[i0]) * (s.diag[j0] - s.beta[j0])
            rhs = s.delta[i0] * s.delta[j0]
            if not lhs > rhs + margin:
                return Verdict(False, Witness(
                    "pair-product", lhs=float(lhs), rhs=float(rhs + margin),
                    pair=(i0 + 1, j0 + 1)))
    return Verdict(True)


def is_double_b_tensor(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Diagonal above beta in every row, beta-adjusted diagonal dominance
    (weak, per row), and the pairwise product inequality."""
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    for i0 in range(T.dim):
        if not s.diag[i0] > s.beta[i0] + margin:
            return Verdict(False, Witness(
                "diagonal-above-beta", lhs=float(s.diag[i0]),
                rhs=float(s.beta[i0] + margin), index=i0 + 1))
    for i0 in range(T.dim):
        if not s.diag[i0] - s.beta[i0] >= s.delta[i0] + margin:
            return Verdict(False, Witness(
                "row-dominance", lhs=float(s.diag[i0] - s.beta[i0]),
                rhs=float(s.delta[i0] + margin), index=i0 + 1))
    return product_inequality(T, margin, _stats=s)


def _quasi_sides(s: _Stats, i0: int, j0: int) -> tuple[float, float]:
    # ordered-pair inequality sides for (i, j): the condition is not
    # symmetric, both orientations are always checked by the callers
    tail = s.tail(j0, i0)
    delta_j_i = s.delta[j0] - (s.beta[j0] - tail)
    lhs = (s.diag[i0] - s.beta[i0]) * (s.diag[j0] - s.beta[j0] - delta_j_i)
    rhs = (s.beta[j0] - tail) * s.delta[i0]
    return float(lhs), float(rhs)


def is_quasi_double_b_tensor(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Diagonal above beta in every row plus the ordered-pair inequality
    ``(b_ii - beta_i)(b_jj - beta_j - delta_j^i) > (beta_j - b_ji..i) delta_i``
    for every ordered pair."""
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    for i0 in range(T.dim):
        if not s.diag[i0] > s.beta[i0] + margin:
            return Verdict(False, Witness(
                "diagonal-above-beta", lhs=float(s.diag[i0]),
                rhs=float(s.beta[i0] + margin), index=i0 + 1))
    for i0 in range(T.dim):
        for j0 in range(T.dim):
            if i0 == j0:
                continue
            lhs, rhs = _quasi_sides(s, i0, j0)
            if not lhs > rhs + margin:
                return Verdict(False, Witness(
                    "quasi-pair", lhs=lhs, rhs=float(rhs + margin),
                    pair=(i0 + 1, j0 + 1)))
    return Verdict(True)


def is_quasi_double_b0_tensor(
    T: Tensor,
    margin: float = 0.0,
    require_diagonal: bool = False,
    _stats: _Stats | None = None,
) -> Verdict:
    """Weak (>=) variant of the quasi ordered-pair inequality.

    The defining condition states no diagonal requirement; set
    ``require_diagonal`` to additionally demand ``b_ii >= beta_i`` per row
    (non-default strict variant).
    """
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    if require_diagonal:
        for i0 in range(T.dim):
            if not s.diag[i0] >= s.beta[i0] + margin:
                return Verdict(False, Witness(
                    "diagonal-at-least-beta", lhs=float(s.diag[i0]),
                    rhs=float(s.beta[i0] + margin), index=i0 + 1))
    for i0 in range(T.dim):
        for j0 in range(T.dim):
            if i0 == j0:
                continue
            lhs, rhs = _quasi_sides(s, i0, j0)
            if not lhs >= rhs + margin:
                return Verdict(False, Witness(
                    "quasi-pair-weak", lhs=lhs, rhs=float(rhs + margin),
                    pair=(i0 + 1, j0 + 1)))
    return Verdict(True)


def is_z_tensor(T: Tensor, _stats: _Stats | None = None) -> Verdict:
    """Every off-diagonal entry nonpositive."""
    s = _stats if _stats is not None else _Stats(T)
    for i0 in range(T.dim):
        if s.off[i0].size and s.max_off[i0] > 0.0:
            row = s.rows[i0].copy()
            row[i0 * s.stride] = -np.inf
            flat = int(np.argmax(row > 0.0))  # first positive slot, lex order
            rest = np.unravel_index(flat, (T.dim,) * (T.order - 1))
            multi = (i0 + 1,) + tuple(int(k) + 1 for k in rest)
            return Verdict(False, Witness(
                "off-diagonal-nonpositive", lhs=float(row[flat]), rhs=0.0,
                index=i0 + 1, multi_index=multi))
    return Verdict(True)


def is_dsdd(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Doubly strict diagonal dominance in absolute values.

    For order 2 only the pairwise products are required; for order > 2 each
    row must additionally satisfy ``|b_ii| >= r_i``.
    """
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    if T.order > 2:
        for i0 in range(T.dim):
            if not abs(s.diag[i0]) >= s.r[i0] + margin:
                return Verdict(False, Witness(
                    "row-dominance-abs", lhs=float(abs(s.diag[i0])),
                    rhs=float(s.r[i0] + margin), index=i0 + 1))
    for i0 in range(T.dim):
        for j0 in range(i0 + 1, T.dim):
            lhs = abs(s.diag[i0]) * abs(s.diag[j0])
            rhs = s.r[i0] * s.r[j0]
            if not lhs > rhs + margin:
                return Verdict(False, Witness(
                    "pair-product-abs", lhs=float(lhs), rhs=float(rhs + margin),
                    pair=(i0 + 1, j0 + 1)))
    return Verdict(True)


def _qdsdd_sides(s: _Stats, i0: int, j0: int) -> tuple[float, float]:
    tail = s.tail(j0, i0)
    r_j_i = s.r[j0] - abs(tail)
    lhs = abs(s.diag[i0]) * (abs(s.diag[j0]) - r_j_i)
    rhs = s.r[i0] * abs(tail)
    return float(lhs), float(rhs)


def is_qdsdd(T: Tensor, margin: float = 0.0, _stats: _Stats | None = None) -> Verdict:
    """Quasi variant of :func:`is_dsdd`:
    ``|b_ii| (|b_jj| - r_j^i) > r_i |b_ji..i|`` for every ordered pair."""
    _require_pairs(T)
    s = _stats if _stats is not None else _Stats(T)
    for i0 in range(T.dim):
        for j0 in range(T.dim):
            if i0 == j0:
                continue
            lhs, rhs = _qdsdd_sides(s, i0, j0)
            if not lhs > rhs + margin:
                return Verdict(False, Witness(
                    "qdsdd-pair", lhs=lhs, rhs=float(rhs + margin),
                    pair=(i0 + 1, j0 + 1)))
    return Verdict(True)


# ---------------------------------------------------------------------------
# aggregate report


def classify_all(T: Tensor, margin: float = 0.0) -> ClassReport:
    """Run every applicable predicate and assemble a report.

    With n = 1 the pairwise classes are marked inapplicable (None).  At
    margin 0 the subset chain B => DoubleB => QuasiDoubleB => QuasiDoubleB0
    and DoubleB => ProductIneq is asserted before returning.
    """
    from .core import is_symmetric  # local import keeps module load cheap

    s = _Stats(T)
    verdicts: dict[str, bool | None] = {}
    witnesses: dict[str, Witness] = {}

    def record(name: str, verdict: Verdict | None) -> None:
        if verdict is None:
            verdicts[name] = None
            return
        verdicts[name] = verdict.holds
        if not verdict.holds and verdict.witness is not None:
            witnesses[name] = verdict.witness

    pairwise = T.dim >= 2
    record("B", is_b_tensor(T, margin, _stats=s))
    record("Z", is_z_tensor(T, _stats=s))
    record("DoubleB", is_double_b_tensor(T, margin, _stats=s) if pairwise else None)
    record("QuasiDoubleB", is_quasi_double_b_tensor(T, margin, _stats=s) if pairwise else None)
    record("QuasiDoubleB0", is_quasi_double_b0_tensor(T, margin, _stats=s) if pairwise else None)
    record("DSDD", is_dsdd(T, margin, _stats=s) if pairwise else None)
    record("QDSDD", is_qdsdd(T, margin, _stats=s) if pairwise else None)
    record("ProductIneq", product_inequality(T, margin, _stats=s) if pairwise else None)

    if margin == 0.0:
        chain = ("B", "DoubleB", "QuasiDoubleB", "QuasiDoubleB0")
        for upper, lower in zip(chain, chain[1:]):
            if verdicts[upper] and verdicts.get(lower) is False:
                raise InternalConsistencyError(
                    f"subset chain violated: {upper} holds but {lower} does not"
                )
        if verdicts.get("DoubleB") and verdicts.get("ProductIneq") is False:
            raise InternalConsistencyError(
                "subset chain violated: DoubleB holds but ProductIneq does not"
            )

    return ClassReport(
        verdicts=verdicts,
        witnesses=witnesses,
        symmetric=is_symmetric(T),
        even_order=T.order % 2 == 0,
    )
