"""Compute whole spaces of ranking functions, not just single witnesses.

For a terminating loop the set of all (normalized) affine ranking
functions is itself a polyhedron over the coefficient variables
(mu0, mu1, ..., muN): any point of it is a valid certificate.  For a loop
that may diverge, the decreasing-only and bounded-only candidate spaces
are still informative -- their intersection being empty is exactly why no
ranking function exists, and each half feeds conditional termination
analysis.

    python3 demos/02_ranking_spaces.py
"""

from pathlib import Path

from linrank import (
    ms_bounded_space,
    ms_decreasing_space,
    ms_space,
    parse_loop,
    pr_space,
)

LOOPS = Path(__file__).parents[1] / "loops"


def show(title, space):
    print(f"{title}  [{space.kind}]")
    if space.is_empty():
        print("    (empty)")
        return
    for line in space.constraints.render():
        print("   ", line)


log2 = parse_loop((LOOPS / "log2.loop").read_text())
print("=== base-2 logarithm loop ===")
show("all normalized ranking functions:", ms_space(log2))
show("\nmultiplier route (positive scalings, strict faces):", pr_space(log2))

print("\n=== diverging loop: x' = x + 1 with x >= 0 ===")
diverge = parse_loop((LOOPS / "diverge.loop").read_text())
show("full space:", ms_space(diverge))
show("\ndecreasing candidates (any offset):", ms_decreasing_space(diverge))
show("\nbounded candidates:", ms_bounded_space(diverge))
print(
    "\nthe two candidate spaces force mu1 <= -1 and mu1 >= 0 at once,"
    "\nso no affine function both decreases and stays bounded: the loop"
    "\nadmits no affine ranking function."
)
