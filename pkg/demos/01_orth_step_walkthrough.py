"""Walk through the pairwise orthogonalization update on a 2x2 matrix.

Start from columns (1,0) and (cos 60deg, sin 60deg), apply the update in
both directions, and watch the Gram residual drop to zero.
"""

import numpy as np

from pairorth import (
    build_unit_column_matrix,
    gram_offdiag_fro,
    inner,
    orth_step,
    potential_phi,
)

theta = np.pi / 3
A = build_unit_column_matrix([[1.0, np.cos(theta)], [0.0, np.sin(theta)]])

print("columns:")
print(A.array)
print(f"inner product <a0, a1> = {inner(A.column(0), A.column(1)):.6f}")
print(f"Gram residual ||A*A - I||_F = {gram_offdiag_fro(A):.6f}")
print(f"potential phi = {potential_phi(A):.6f}")

print("\nreplace column 0 by its component orthogonal to column 1:")
B = orth_step(A, (0, 1))
print(B.array)
print(f"new inner product = {inner(B.column(0), B.column(1)):.2e}")
print(f"Gram residual now {gram_offdiag_fro(B):.2e}, phi = {potential_phi(B):.2e}")

print("\nthe other direction, replacing column 1:")
C = orth_step(A, (1, 0))
print(C.array)
print(f"phi = {potential_phi(C):.2e}")

print("\na 2x2 is fully orthogonalized by a single step either way;")
print("for n >= 3 the potential shrinks to zero only over many random steps.")
