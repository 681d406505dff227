"""Invariant report for one group and a small grid, as JSON and markdown."""

from specp import free_special
from specp.report import emit_json, emit_markdown, exit_status, run, run_grid

rep = run(free_special(3, 3))
print(emit_markdown(rep))
print("exit status", exit_status(rep))

# the canonical t=3 table is a genuine counterexample to the closed form, hence exit status 2
grid = run_grid([3], [3], [0, 1, 2, 3], ["rank-full"], what=("multiplier", "capability"))
print(emit_json(grid)[:400], "...")
print("summary", grid.summary(), "exit status", exit_status(grid))
