"""Unit-column matrices and the pairwise orthogonalization update.

A state of the process is a square matrix with unit-length, linearly
independent columns over the real or complex field. The single update
replaces column i by its component orthogonal to column j, renormalized;
every other column is left untouched.
"""

from __future__ import annotations

import numpy as np

from . import tolerances as tol
from .errors import ConstructionError, DegeneratePairError, UsageError

REAL = "real"
COMPLEX = "complex"

# An ordered pair (i, j): column i is replaced, column j is kept.
PairIndex = tuple[int, int]


def _field_of(arr: np.ndarray) -> str:
    return COMPLEX if np.iscomplexobj(arr) else REAL


def inner(x, y):
    """Inner product sum_k x_k * conj(y_k); conjugation on the second argument.

    Under this convention a_i - <a_i, a_j> a_j is exactly orthogonal
    to a_j. Returns a Python float for real inputs, complex otherwise.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.ndim != 1 or y.ndim != 1 or x.shape != y.shape:
        raise UsageError(f"inner: length mismatch {x.shape} vs {y.shape}")
    if _field_of(x) != _field_of(y):
        raise UsageError("inner: field mismatch (real vs complex)")
    value = np.vdot(y, x)  # vdot conjugates its first argument
    return complex(value) if np.iscomplexobj(value) else float(value)


class ColumnMatrix:
    """Square matrix with unit-length, linearly independent columns.

    Values are immutable once constructed: the underlying array is marked
    read-only and every update returns a new instance, so instances are
    safe to share across threads.
    """

    __slots__ = ("_array", "n", "field")

    def __init__(self, entries, *, normalize: bool = False):
        arr = np.array(entries, order="F")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ConstructionError(f"entries must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n < 2:
            raise ConstructionError(f"dimension must be >= 2, got {n}")
        field = _field_of(arr)
        arr = arr.astype(np.complex128 if field == COMPLEX else np.float64, copy=False)
        if not np.all(np.isfinite(arr)):
            raise ConstructionError("entries contain non-finite values")

        norms = np.linalg.norm(arr, axis=0)
        if np.any(norms == 0.0):
            j = int(np.argmin(norms))
            raise ConstructionError(f"column {j} is zero")
        if normalize:
            arr = arr / norms
        elif np.any(np.abs(norms - 1.0) > tol.UNIT_NORM_BUILD_REL):
            j = int(np.argmax(np.abs(norms - 1.0)))
            raise ConstructionError(
                f"column {j} has norm {norms[j]!r}, not unit "
                f"(pass normalize=True to rescale)"
            )

        smin = np.linalg.svd(arr, compute_uv=False)[-1]
        floor = tol.RANK_FLOOR_COEFF * n
        if not smin > floor:
            raise ConstructionError(
                f"columns are numerically dependent: smallest singular value "
                f"{smin!r} is below the rank floor {floor!r}"
            )

        arr.setflags(write=False)
        self._array = arr
        self.n = n
        self.field = field

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: str) -> "ColumnMatrix":
        """Wrap an array known to satisfy the invariants, skipping checks.

        Only for internal use on outputs of operations that preserve unit
        columns and independence by construction.
        """
        self = object.__new__(cls)
        arr.setflags(write=False)
        self._array = arr
        self.n = arr.shape[0]
        self.field = field
        return self

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the matrix, columns along axis 1."""
        return self._array

    def column(self, j: int) -> np.ndarray:
        return self._array[:, j]

    def __repr__(self):
        return f"ColumnMatrix(n={self.n}, field={self.field!r})"


def build_unit_column_matrix(entries, normalize: bool = False) -> ColumnMatrix:
    """Validate entries into a ColumnMatrix, optionally rescaling columns.

    Without normalize, every column norm must already be within
    1e-9 of 1. Zero columns and numerically dependent columns are
    rejected outright.
    """
    return ColumnMatrix(entries, normalize=normalize)


def validate_pair(n: int, pair: PairIndex) -> PairIndex:
    i, j = pair
    i, j = int(i), int(j)
    if i == j:
        raise UsageError(f"pair indices must be distinct, got ({i}, {j})")
    if not (0 <= i < n and 0 <= j < n):
        raise UsageError(f"pair ({i}, {j}) out of range for n = {n}")
    return (i, j)


def _orth_column(arr: np.ndarray, i: int, j: int):
    """Orthogonalize column i of arr against column j.

    Returns (new_column, c, c2, nu) where the update actually performed is
    new_column = (a_i - (c + c2) * a_j) / nu and c = <a_i, a_j>. The second
    projection pass (coefficient c2, order eps) removes the residual the
    single pass leaves when the pair is close to the degeneracy guard;
    callers that co-update a right-hand side must fold both passes in.
    """
    a_i = arr[:, i]
    a_j = arr[:, j]
    c = np.vdot(a_j, a_i)  # <a_i, a_j> under this package's convention
    if abs(c) >= 1.0 - tol.DEGENERATE_PAIR_GUARD:
        raise DegeneratePairError((i, j), abs(c))
    w = a_i - c * a_j
    c2 = np.vdot(a_j, w)
    w = w - c2 * a_j
    nu = np.linalg.norm(w)
    if nu <= 0.0 or not np.isfinite(nu):
        raise DegeneratePairError((i, j), abs(c))
    return w / nu, c, c2, nu


def orth_step(A: ColumnMatrix, pair: PairIndex) -> ColumnMatrix:
    """Replace column i by its unit component orthogonal to column j.

    Columns other than i are carried over bit-identically. Raises
    DegeneratePairError when |<a_i, a_j>| >= 1 - 1e-12.
    """
    i, j = validate_pair(A.n, pair)
    new_col, _, _, _ = _orth_column(A._array, i, j)
    out = np.array(A._array, order="F")
    out[:, i] = new_col
    return ColumnMatrix._wrap(out, A.field)


def gram_offdiag_fro(A: ColumnMatrix) -> float:
    """Frobenius norm of A*A - I.

    With unit columns the diagonal of A*A is 1, so this equals
    sqrt(sum over i != j of |<a_i, a_j>|^2): the total pairwise
    non-orthogonality.
    """
    g = A._array.conj().T @ A._array
    g[np.diag_indices(A.n)] -= 1.0
    return float(np.linalg.norm(g))
