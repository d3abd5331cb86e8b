"""
Counting interference with lattice points.

The repair subspace of node i maps to a box of lattice points with x_i = 0.
Shifting it along another axis grows the union by a factor (delta+1)/delta,
but with delta = 2 and wrap-around the shift lands back on the same set.
"""

from hadamard_storage.lattice import alignment_ratio, analyze, predict_rank, repair_lattice, shift, union_size

k = 3
v = repair_lattice(3, k, 2)
print("L(V_3):", v.sorted())
print("shifted along axis 1, no wrap:", shift(v, 1, wrap=False).sorted())
print("shifted along axis 1, wrap:   ", shift(v, 1, wrap=True).sorted())
print("union without wrap:", union_size(v, shift(v, 1, wrap=False)), "points")

print("\ngrowth ratio as delta increases:")
for delta in (2, 4, 8, 16, 100):
    print(f"  delta={delta:3d}  ratio={float(alignment_ratio(k, delta)):.4f}")

print("\npredicted interference ranks for k=4:")
for i in range(1, 5):
    print("  i=%d:" % i, [predict_rank(i, j, 4) for j in range(1, 5)])

print("\nanalyze(3, 4) rows:")
for row in analyze(3, 4):
    print("  ", row)
