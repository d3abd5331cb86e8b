"""
Single-node repair and the symbols it downloads.

A lost systematic node is rebuilt from half of every survivor, for a total of
(k+1)N/2 symbols instead of the kN a full decode would need.
"""

import numpy as np

from hadamard_storage import NodeId, as_survivors, encode, make_code
from hadamard_storage.repair import interference_rank_report, repair


rng = np.random.default_rng(7)

print(" k   N  naive  repair")
for k in range(1, 9):
    params = make_code(k)
    f = rng.integers(0, 3, params.M).astype(np.uint8)
    contents = as_survivors(encode(params, f))
    lost = NodeId.systematic(1)
    survivors = {n: d for n, d in contents.items() if n != lost}
    restored, transcript = repair(params, lost, survivors)
    assert np.array_equal(restored.data, contents[lost])
    print(f"{k:2d} {params.N:3d} {k * params.N:6d} {transcript.total_symbols:7d}")

params = make_code(3)
f = rng.integers(0, 3, params.M).astype(np.uint8)
contents = as_survivors(encode(params, f))
for lost in (NodeId.systematic(2), NodeId.parse("pb")):
    survivors = {n: d for n, d in contents.items() if n != lost}
    _, transcript = repair(params, lost, survivors)
    print(f"\nrepairing {lost} at k=3:")
    print("\n".join("  " + line for line in transcript.report_lines()))

print("\ninterference ranks seen while repairing s1 at k=3:", interference_rank_report(params, 1))
