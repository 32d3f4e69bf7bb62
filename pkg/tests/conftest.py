import random

import pytest

from resgraph.curves import CurveDataError, MultibranchCurve, delta_total, hilbert_table
from resgraph.graphs import ResolutionGraph, parse_graph

A3_TEXT = """
v 1 -2
v 2 -2
v 3 -2
e 1 2
e 2 3
"""

DIHEDRAL_TEXT = """
v 1 -2
v 2 -3
v 3 -2
v 4 -2
e 1 2
e 2 3
e 2 4
"""

BRIESKORN_TEXT = """
v 1 -1
v 2 -2
v 3 -3
v 4 -7
e 1 2
e 1 3
e 1 4
"""

BRIESKORN_BLOWN_TEXT = """
v 1 -1
v 2 -2
v 3 -3
v 4 -8
v 5 -1
e 1 2
e 1 3
e 1 4
e 4 5
a 5 1
"""


@pytest.fixture(scope="session")
def a3():
    return parse_graph(A3_TEXT)


@pytest.fixture(scope="session")
def dihedral():
    return parse_graph(DIHEDRAL_TEXT)


@pytest.fixture(scope="session")
def brieskorn():
    return parse_graph(BRIESKORN_TEXT)


@pytest.fixture(scope="session")
def brieskorn_blown():
    return parse_graph(BRIESKORN_BLOWN_TEXT)


def dihedral_rows(graph: ResolutionGraph):
    """The five distinct curve classes of the dihedral quotient, labelled by
    their defining dual-cycle combinations."""
    e1, e2 = graph.dual(1), graph.dual(2)
    return {
        "one_center": graph.group.class_of(e2),
        "two_center": graph.group.class_of(2 * e2),
        "one_leg": graph.group.class_of(e1),
        "leg_center": graph.group.class_of(e1 + e2),
        "leg_two_center": graph.group.class_of(e1 + 2 * e2),
    }


def random_value_set(rng: random.Random, max_branches: int = 3,
                     max_conductor: int = 8) -> MultibranchCurve | None:
    """One attempt at a random valid multibranch value set.

    Draw a few generators, close under addition and coordinatewise minimum
    inside a box, then locate a conductor corner whose upper orthant is full.
    Returns None when the attempt fails validation (callers resample).
    """
    r = rng.randint(1, max_branches)
    box = tuple(rng.randint(2, max_conductor) for _ in range(r))
    gens = set()
    for _ in range(rng.randint(1, 4)):
        gens.add(tuple(rng.randint(0, m) for m in box))
    gens.add(box)
    values = {(0,) * r} | set(gens)
    # additive closure, clamped to the box
    changed = True
    while changed:
        changed = False
        cur = sorted(values)
        for s in cur:
            for t in cur:
                u = tuple(min(a + b, m) for a, b, m in zip(s, t, box))
                if u not in values:
                    values.add(u)
                    changed = True
        for s in cur:
            for t in cur:
                u = tuple(min(a, b) for a, b in zip(s, t))
                if u not in values:
                    values.add(u)
                    changed = True
    # smallest conductor corner: every box point above it must be a value
    cond = None
    for cand in sorted(values):
        if all(tuple(max(v, c) for v, c in zip(p, cand)) in values
               for p in _box_points(box) if all(a >= b for a, b in zip(p, cand))):
            cond = cand
            break
    if cond is None or not any(cond):
        return None
    cropped = frozenset(tuple(min(a, c) for a, c in zip(v, cond)) for v in values)
    try:
        curve = MultibranchCurve(branches=r, conductor=cond, values=cropped)
        hilbert_table(curve)
        delta_total(curve)
    except CurveDataError:
        return None
    return curve


def _box_points(box):
    import itertools
    return itertools.product(*(range(m + 1) for m in box))


def sample_curves(seed: int, count: int, max_branches: int = 3,
                  max_conductor: int = 8):
    """Rejection-sample ``count`` valid curves."""
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count and tries < count * 60:
        tries += 1
        curve = random_value_set(rng, max_branches, max_conductor)
        if curve is not None:
            out.append(curve)
    return out
