"""Dense real tensors of order m and dimension n, plus the multilinear
form machinery everything else is built on.

A tensor here is an array ``a[i1, ..., im]`` with every index ranging over
``{1, ..., n}``.  Entries are stored densely in C order, so the first index
varies slowest.  All indices in the public interface are 1-based (converted
once at this boundary); the raw ``.data`` array is an ordinary 0-based
numpy array.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable

import numpy as np

__all__ = [
    "Tensor",
    "make_tensor",
    "unit_tensor",
    "partially_all_one",
    "is_symmetric",
    "symmetrize",
    "form_value",
    "apply",
    "form_values",
    "apply_many",
    "linear_combine",
    "is_diagonal_index",
]


def is_diagonal_index(index: tuple[int, ...]) -> bool:
    """True iff all components of the multi-index are equal."""
    return len(set(index)) == 1


class Tensor:
    """Immutable dense real tensor of order ``m >= 2`` and dimension ``n >= 1``.

    Parameters
    ----------
    order : int
        Number of indices m.
    dim : int
        Range n of each index.
    data : array_like
        ``n**m`` finite real values in shape ``(n,)*m`` (or anything that
        reshapes to it), first index slowest.
    name : str, optional
        Free-form label carried through serialization; ignored by ``==``.
    """

    __slots__ = ("order", "dim", "data", "name")

    def __init__(self, order: int, dim: int, data, name: str | None = None):
        if order < 2:
            raise ValueError(f"order must be >= 2, got {order}")
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.size != dim**order:
            raise ValueError(
                f"expected {dim ** order} entries for order {order} dim {dim}, got {arr.size}"
            )
        arr = np.ascontiguousarray(arr.reshape((dim,) * order))
        if not np.all(np.isfinite(arr)):
            bad = tuple(int(k) + 1 for k in np.argwhere(~np.isfinite(arr))[0])
            raise ValueError(f"non-finite entry at index {bad}")
        arr.setflags(write=False)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "name", name)

    def __setattr__(self, key, value):
        raise AttributeError("Tensor is immutable")

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def entry(self, index: Iterable[int]) -> float:
        """Entry at a 1-based multi-index."""
        idx = tuple(index)
        _check_index(idx, self.order, self.dim)
        return float(self.data[tuple(k - 1 for k in idx)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.order == other.order
            and self.dim == other.dim
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.order, self.dim, self.data.tobytes()))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"Tensor(order={self.order}, dim={self.dim}{label})"


def _check_index(index: tuple[int, ...], order: int, dim: int) -> None:
    if len(index) != order:
        raise ValueError(f"multi-index {index} has length {len(index)}, expected {order}")
    for k in index:
        if not (1 <= int(k) <= dim):
            raise ValueError(f"index component {k} out of range 1..{dim} in {index}")


def make_tensor(
    order: int,
    dim: int,
    entries: Iterable[tuple[tuple[int, ...], float]],
    name: str | None = None,
) -> Tensor:
    """Build a tensor from a sparse list of ``(multi_index, value)`` pairs.

    Multi-indices are 1-based.  Unlisted entries are zero.  Duplicate
    indices are rejected, naming both offending positions in the list.
    """
    data = np.zeros((dim,) * order)
    seen: dict[tuple[int, ...], int] = {}
    for pos, (index, value) in enumerate(entries):
        idx = tuple(int(k) for k in index)
        _check_index(idx, order, dim)
        if idx in seen:
            raise ValueError(
                f"duplicate multi-index {idx} at entries {seen[idx]} and {pos}"
            )
        seen[idx] = pos
        data[tuple(k - 1 for k in idx)] = value
    return Tensor(order, dim, data, name=name)


def unit_tensor(order: int, dim: int) -> Tensor:
    """Identity-like tensor: 1 on the diagonal ``(i, ..., i)``, 0 elsewhere."""
    data = np.zeros((dim,) * order)
    for i in range(dim):
        data[(i,) * order] = 1.0
    return Tensor(order, dim, data)


def partially_all_one(order: int, dim: int, members: Iterable[int]) -> Tensor:
    """Tensor that is 1 exactly where every index lies in ``members``.

    ``members`` is a nonempty 1-based subset of ``{1, ..., dim}``.  With
    ``members`` equal to the full index set this is the all-one tensor.
    """
    J = sorted({int(k) for k in members})
    if not J:
        raise ValueError("members must be a nonempty subset of {1, ..., dim}")
    for k in J:
        if not (1 <= k <= dim):
            raise ValueError(f"member {k} out of range 1..{dim}")
    mask = np.zeros(dim, dtype=bool)
    mask[[k - 1 for k in J]] = True
    data = np.ones((dim,) * order)
    for axis in range(order):
        shape = [1] * order
        shape[axis] = dim
        data = data * mask.reshape(shape)
    return Tensor(order, dim, data)


def is_symmetric(T: Tensor) -> bool:
    """Exact (tolerance-free) invariance under every permutation of the indices.

    Checked via the adjacent transpositions, which generate the full
    permutation group.
    """
    for k in range(T.order - 1):
        if not np.array_equal(T.data, T.data.swapaxes(k, k + 1)):
            return False
    return True


def symmetrize(T: Tensor) -> Tensor:
    """Average of a tensor over all permutations of its indices.

    The orbit mean is computed once per index multiset and written to every
    position of the orbit, so the result passes :func:`is_symmetric` exactly.
    Symmetric inputs are returned unchanged.
    """
    if is_symmetric(T):
        return T
    data = np.empty_like(T.data)
    for canon in itertools.combinations_with_replacement(range(T.dim), T.order):
        orbit = sorted(set(itertools.permutations(canon)))
        val = sum(float(T.data[p]) for p in orbit) / len(orbit)
        for p in orbit:
            data[p] = val
    return Tensor(T.order, T.dim, data)


def _check_vector(T: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (T.dim,):
        raise ValueError(f"vector has shape {x.shape}, expected ({T.dim},)")
    return x


def _contract(T: Tensor, X: np.ndarray, keep_first: bool) -> np.ndarray:
    # contract the trailing axes one at a time; cheap enough per call to sit
    # inside the oracle's descent loop
    count = X.shape[0]
    cur = np.broadcast_to(T.data.reshape(1, -1), (count, T.dim**T.order))
    steps = T.order - 1 if keep_first else T.order
    for _ in range(steps):
        cur = (cur.reshape(count, -1, T.dim) * X[:, None, :]).sum(axis=2)
    return cur


def form_value(T: Tensor, x) -> float:
    """Full m-form contraction sum over all entries of ``a[i1..im] * x[i1] ... x[im]``."""
    x = _check_vector(T, x)
    return float(_contract(T, x[None, :], keep_first=False)[0, 0])


def apply(T: Tensor, x) -> np.ndarray:
    """Contraction over the last m-1 slots; component i is the row-i sum
    of ``a[i, i2..im] * x[i2] ... x[im]``."""
    x = _check_vector(T, x)
    return _contract(T, x[None, :], keep_first=True)[0]


def form_values(T: Tensor, X: np.ndarray) -> np.ndarray:
    """Batched :func:`form_value` for an ``(N, n)`` array of vectors."""
    X = np.asarray(X, dtype=np.float64)
    return _contract(T, X, keep_first=False)[:, 0]


def apply_many(T: Tensor, X: np.ndarray) -> np.ndarray:
    """Batched :func:`apply` for an ``(N, n)`` array of vectors."""
    X = np.asarray(X, dtype=np.float64)
    return _contract(T, X, keep_first=True)


def linear_combine(T: Tensor, U: Tensor, c: float) -> Tensor:
    """Entrywise ``T + c * U`` for tensors of identical order and dimension."""
    if (T.order, T.dim) != (U.order, U.dim):
        raise ValueError(
            f"shape mismatch: order/dim ({T.order}, {T.dim}) vs ({U.order}, {U.dim})"
        )
    return Tensor(T.order, T.dim, T.data + c * U.data)
