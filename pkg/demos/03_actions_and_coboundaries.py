"""Induced actions, word application, and coboundary lattices.

The running example is the bundled compactified-shift document: the
two-point compactification of the integers under n -> n+1. Stage k
splits the space into the right ray, the singletons k-1 .. -(k-1) in
decreasing order, and the left ray. Run with
`python demos/03_actions_and_coboundaries.py`.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from k0mf import (
    LimitElement,
    Word,
    apply_word,
    coboundary,
    coboundary_stage_lattice,
    parse,
    verify_action,
)

data = pathlib.Path(__file__).resolve().parents[1] / "src" / "k0mf" / "data"
system, action = parse((data / "compactified_shift.json").read_bytes()).resolve()

# The action laws are machine-checked: positivity, commuting squares,
# unit preservation, and both inverse laws, itemised per stage.
report = verify_action(action, system, 3)
print("action verifies:", report.ok, f"({len(report.items)} checks)")

# Stage-1 coordinates are (right ray [1,oo], {0}, left ray [-oo,-1]).
right_ray = LimitElement(1, (1, 0, 0))

# The generator shifts everything right; the right ray indicator maps to
# the stage-2 indicator of [2, oo].
image = apply_word(action, system, Word.of(1), right_ray)
print("shift of the right ray:", image)

# Its coboundary g - a(g) is the indicator of the singleton {1}: the
# class 1_[1,oo) - 1_[2,oo). It is nonzero and entrywise nonnegative.
print("coboundary of the right ray:", coboundary(action, system, [right_ray]))

# Inverse letters compose with forward letters to plain pushforwards
# (applied letterwise; the reduced word itself would be empty).
round_trip = apply_word(action, system, Word.of(-1), apply_word(action, system, Word.of(1), right_ray))
print("apply s then s^-1:", round_trip.vector, "(= pushforward to stage", f"{round_trip.stage})")

# The finite-stage coboundary lattice from stage 1 into stage 2,
# single-letter words: its canonical basis spans the three middle
# coordinates, so it meets the positive cone.
lattice = coboundary_stage_lattice(action, system, 1, 2, 1)
print("lattice basis columns:", [lattice.column(j) for j in range(lattice.cols)])
