"""Cross-validate the two engines on a stream of random loops.

The two synthesis methods are provably interchangeable: same verdicts,
and the multiplier space equals the positive-scaling closure of the
normalized space.  This demo runs both engines on randomly generated
(always satisfiable) loops and checks those guarantees at runtime: verdict
agreement on every loop, witness cross-membership whenever both engines
prove termination, and exact space equality on a subsample.

    python3 demos/03_cross_validation.py [seed [count]]
"""

import random
import sys
import time

from linrank.equivalence import cross_check, random_loop

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
count = int(sys.argv[2]) if len(sys.argv) > 2 else 40

rng = random.Random(seed)
t0 = time.time()
verdicts = {}
for i in range(count):
    loop = random_loop(rng, force_rank=(i % 3 == 0), guarded=(i % 2 == 0))
    report = cross_check(loop, compare_spaces=(i % 5 == 0))
    status = report.verdict_ms.status.value
    verdicts[status] = verdicts.get(status, 0) + 1
    marker = "spaces+" if report.spaces_equivalent is not None else "       "
    flag = "ok" if report.all_consistent else "MISMATCH"
    print(f"loop {i:3d}  n={loop.space.n}  {status:22s} {marker} {flag}")
    if not report.all_consistent:
        sys.exit(1)

print(f"\n{count} loops in {time.time() - t0:.1f}s, all consistent")
for status, n in sorted(verdicts.items()):
    print(f"  {status}: {n}")
