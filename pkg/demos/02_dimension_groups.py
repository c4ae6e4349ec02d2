"""Dimension groups as inductive systems, and three-valued limit queries.

Run with `python demos/02_dimension_groups.py`.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from k0mf import (
    InductiveSystem,
    IntMatrix,
    LimitElement,
    injectivity_report,
    is_positive,
    is_zero,
    push,
)

# The stationary doubling system: Z -> Z -> ... by multiplication by 2.
# Its limit is the dyadic rationals with the usual order.
doubling = InductiveSystem(
    stage_ranks=(1,),
    connecting_maps=(),
    unit=(1,),
    stationary_tail=IntMatrix.from_rows([[2]]),
)
e = LimitElement(0, (1,))
print("1 pushed two stages in the doubling system:", push(doubling, e, 2).vector)

# Positivity in the limit is a union over stages; answers are
# three-valued. "Yes" is a theorem: nonnegative vectors stay nonnegative.
print("is_positive(3):", is_positive(doubling, LimitElement(0, (3,)), 4))
print("is_positive(-1):", is_positive(doubling, LimitElement(0, (-1,)), 4))

# A mixed-sign vector under the identity map is frozen: the negative
# coordinate never heals, so the tool may answer "no".
flat = InductiveSystem((2,), (), (1, 1), IntMatrix.identity(2))
print("is_positive((1,-1)) under identity:", is_positive(flat, LimitElement(0, (1, -1)), 4))

# The same vector under [[2,1],[1,1]] becomes (1,0) one stage later.
mixing = InductiveSystem((2,), (), (1, 1), IntMatrix.from_rows([[2, 1], [1, 1]]))
print("is_positive((1,-1)) under [[2,1],[1,1]]:", is_positive(mixing, LimitElement(0, (1, -1)), 4))

# Equality with zero: a vector in the kernel of the next map dies there.
collapse = InductiveSystem((2, 1), (IntMatrix.from_rows([[1, 1]]),), (1, 1))
print("is_zero((1,-1)) under [[1,1]]:", is_zero(collapse, LimitElement(0, (1, -1)), 1))

# Injectivity certifies "no" answers: under an injective stationary
# system a nonzero class can never become zero.
print("is_zero(5) in the doubling system:", is_zero(doubling, LimitElement(0, (5,)), 4))
print("injectivity:", injectivity_report(doubling, 4))

# Systems declared only on a finite prefix refuse to overclaim: beyond
# the prefix the answer is unknown, with the horizon recorded.
prefix = InductiveSystem((2, 2), (IntMatrix.identity(2),), (1, 1))
print("prefix-only system, (1,-1):", is_positive(prefix, LimitElement(0, (1, -1)), 1))
