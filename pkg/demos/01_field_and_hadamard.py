"""
GF(3) arithmetic and the Sylvester-Hadamard matrix behind the code.

Every column of H_N is a product of sign diagonals applied to the all-ones
vector, and two columns multiply pointwise into the column of their XORed
exponent tuples.
"""

import numpy as np

from hadamard_storage import gf3
from hadamard_storage.hadamard import exponent_tuples, fwht, generators, hadamard_column, sylvester, tuple_index, verify_gram

k = 3
h = sylvester(k)
print("H_8 over the integers:")
print(h.entries)
print("Gram check (integer and mod 3):", verify_gram(h))

print("\nGenerators as sign patterns:")
for i, x in enumerate(generators(k), start=1):
    print(f"  X_{i}: {x.signs().tolist()}")

print("\nColumns as generator products:")
for x in exponent_tuples(k):
    col = hadamard_column(x)
    assert np.array_equal(col, h.column(tuple_index(x)))
    print(f"  x={x} -> column {tuple_index(x)}: {col.tolist()}")

a, b = (0, 1, 1), (1, 0, 1)
prod = gf3.gf3_mul(hadamard_column(a), hadamard_column(b))
print(f"\ncolumn{a} * column{b} = column{tuple(p ^ q for p, q in zip(a, b))}:",
      np.array_equal(prod, hadamard_column((1, 1, 0))))

x = gf3.gf3([1, 0, 2, 1, 0, 0, 1, 2])
print("\nfast transform equals the dense product:", np.array_equal(fwht(x), gf3.mat_vec(h.to_gf3(), x)))
print("rank of H_8 over GF(3):", gf3.mat_rank(h.to_gf3()))
