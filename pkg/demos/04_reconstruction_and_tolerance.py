"""
Which node subsets decode the file, and what it costs when they do not.

Any k nodes with at most one systematic node missing suffice. With two
systematic nodes missing the parities leave a gap of exactly N/2 symbols,
which a few extra downloads close.
"""

import itertools

import numpy as np

from hadamard_storage import NodeId, as_survivors, encode, make_code
from hadamard_storage.reconstruct import can_tolerate, decodability, reconstruct_file, recover_failures

k = 4
params = make_code(k)
S = NodeId.systematic

print("k-subsets of a k=4 code:")
for access in itertools.combinations(params.nodes(), k):
    print(f"  {' '.join(str(n) for n in access):16s} {decodability(params, access)}")

rng = np.random.default_rng(11)
f = rng.integers(0, 3, params.M).astype(np.uint8)
contents = as_survivors(encode(params, f))
access = [S(1), S(2), NodeId.parse("pa"), NodeId.parse("pb")]
file, downloaded = reconstruct_file(params, access, [S(3), S(4)], contents)
print(f"\ndecoded from {[str(n) for n in access]} plus extras: {downloaded} symbols, exact={np.array_equal(file, f)}")

print("\ndouble failures:")
for failed in itertools.combinations(params.nodes(), 2):
    failed = set(failed)
    label = ",".join(sorted(map(str, failed)))
    if can_tolerate(params, failed):
        restored = recover_failures(params, failed, {n: d for n, d in contents.items() if n not in failed})
        ok = all(np.array_equal(c.data, contents[n]) for n, c in restored.items())
        print(f"  {label:8s} recovered={ok}")
    else:
        print(f"  {label:8s} not tolerated")
