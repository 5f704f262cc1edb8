"""Prove termination of the base-2 logarithm loop with both engines.

The loop halves x1 while counting iterations in x2:

    while x1 >= 2:  x1 = x1 div 2;  x2 = x2 + 1

Its one-iteration behavior is captured by linear constraints over the
state before (x1, x2) and after (x1', x2') the body, stored in
loops/log2.loop.  Run from the repository root:

    python3 demos/01_prove_termination.py
"""

from pathlib import Path

from linrank import ms_analyze, parse_loop, pr_analyze
from linrank.constraints import loop_system
from linrank.rationals import format_rational

loop = parse_loop((Path(__file__).parents[1] / "loops" / "log2.loop").read_text())

print("loop constraint over (x1, x2, x1', x2'):")
merged = loop_system(loop)
for line in merged.render():
    print("   ", line)

for name, engine in (("duality-based", ms_analyze), ("multiplier-based", pr_analyze)):
    verdict = engine(loop)
    print(f"\n{name} engine: {verdict.status.value}")
    f = verdict.witness
    if f is not None:
        terms = " + ".join(
            f"{format_rational(c)}*{v}" for c, v in zip(f.mu, loop.space.names)
        )
        print(f"  witness  f(x) = {format_rational(f.mu0)} + {terms}")
        print(f"  certified decrease per iteration: {format_rational(f.delta)}")
        print(f"  lower bound on reachable states:  {format_rational(f.lower_bound)}")
