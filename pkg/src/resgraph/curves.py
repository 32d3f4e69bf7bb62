"""Reduced curve germs as multibranch value semigroups.

A curve with r branches is described by its value set inside the box below
the conductor: the finite list of multi-orders realised by functions on the
germ.  Membership beyond the box follows the conductor rule: a vector
belongs to the semigroup iff its coordinatewise clamp to the conductor does.
From this single piece of data the module computes the multivariable Hilbert
function, the signed Poincare coefficients, and the delta invariant three
ways (gap counts of the branches plus the alternating evaluation sum, the
Hilbert value at the conductor, and for one branch the plain gap count),
with mandatory agreement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class CurveDataError(ValueError):
    """Invalid multibranch value-set input."""


def _boxes(limits: Sequence[int]):
    return itertools.product(*(range(m + 1) for m in limits))


@dataclass(frozen=True)
class MultibranchCurve:
    """Value-set description of a reduced curve germ with ``branches`` branches.

    ``values`` is the full intersection of the semigroup with [0, conductor].
    """

    branches: int
    conductor: tuple[int, ...]
    values: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        r, c = self.branches, self.conductor
        if r < 1 or len(c) != r:
            raise CurveDataError("conductor length must equal the branch count")
        if any(x < 0 for x in c):
            raise CurveDataError("conductor entries must be nonnegative")
        for v in self.values:
            if len(v) != r or any(x < 0 for x in v) or any(x > m for x, m in zip(v, c)):
                raise CurveDataError(f"value {v} outside the box [0, conductor]")
        if (0,) * r not in self.values:
            raise CurveDataError("the zero vector must belong to the value set")
        if c not in self.values:
            raise CurveDataError("the conductor must belong to the value set")
        vals = sorted(self.values)
        for s in vals:
            for t in vals:
                u = tuple(a + b for a, b in zip(s, t))
                if all(x <= m for x, m in zip(u, c)) and u not in self.values:
                    raise CurveDataError(f"value set is not closed under addition: "
                                         f"{s} + {t} = {u} is missing")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_values(cls, values: Iterable[Sequence[int]],
                    conductor: Sequence[int]) -> "MultibranchCurve":
        c = tuple(int(x) for x in conductor)
        return cls(branches=len(c), conductor=c,
                   values=frozenset(tuple(int(x) for x in v) for v in values))

    @classmethod
    def from_semigroup(cls, generators: Sequence[int]) -> "MultibranchCurve":
        """Single monomial branch from numerical semigroup generators."""
        gens = sorted(set(int(g) for g in generators if g > 0))
        if not gens:
            raise CurveDataError("need at least one positive generator")
        from math import gcd
        g = 0
        for a in gens:
            g = gcd(g, a)
        if g != 1:
            raise CurveDataError("generators must be coprime (finite gap set)")
        bound = gens[0] * gens[-1] + 1  # beyond any Frobenius number
        member = [False] * (bound + 1)
        member[0] = True
        for a in gens:
            for x in range(a, bound + 1):
                if member[x - a]:
                    member[x] = True
        cond = 0
        for x in range(bound, -1, -1):
            if not member[x]:
                cond = x + 1
                break
        return cls(branches=1, conductor=(cond,),
                   values=frozenset((x,) for x in range(cond + 1) if member[x]))

    @classmethod
    def ordinary(cls, r: int) -> "MultibranchCurve":
        """r smooth branches in general position (pairwise transversal axes)."""
        if r < 1:
            raise CurveDataError("branch count must be positive")
        return cls(branches=r, conductor=(1,) * r,
                   values=frozenset({(0,) * r, (1,) * r}))

    # -- membership beyond the box ------------------------------------------

    def member(self, v: Sequence[int]) -> bool:
        if any(x < 0 for x in v):
            return False
        clamp = tuple(min(x, m) for x, m in zip(v, self.conductor))
        return clamp in self.values

    def subcurve(self, branch_indices: Sequence[int]) -> "MultibranchCurve":
        """Union of a subset of branches: coordinate projection of the values.

        The projection of the value set is taken as the value set of the
        subcurve; the inversion identity exercises this modelling choice.
        """
        js = tuple(sorted(branch_indices))
        if not js or any(j < 0 or j >= self.branches for j in js):
            raise CurveDataError("branch subset out of range")
        return MultibranchCurve(
            branches=len(js),
            conductor=tuple(self.conductor[j] for j in js),
            values=frozenset(tuple(v[j] for j in js) for v in self.values))

    def gap_count(self) -> int:
        """Number of nonmembers below the conductor (single branch only)."""
        if self.branches != 1:
            raise CurveDataError("gap count is a one-branch notion")
        return self.conductor[0] - (len(self.values) - 1)


def parse_curve(text: str) -> MultibranchCurve:
    """Parse the curve file grammar: ``branches r``, ``conductor c1 .. cr``,
    one ``s v1 .. vr`` line per value vector in the box."""
    r = None
    cond: tuple[int, ...] | None = None
    values: list[tuple[int, ...]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        try:
            nums = [int(t) for t in args]
        except ValueError:
            raise CurveDataError(f"line {line_no}: expected integers in {raw!r}")
        if kind == "branches":
            if r is not None:
                raise CurveDataError(f"line {line_no}: duplicate branches line")
            if len(nums) != 1:
                raise CurveDataError(f"line {line_no}: branches line needs one integer")
            r = nums[0]
        elif kind == "conductor":
            if cond is not None:
                raise CurveDataError(f"line {line_no}: duplicate conductor line")
            cond = tuple(nums)
        elif kind == "s":
            values.append(tuple(nums))
        else:
            raise CurveDataError(f"line {line_no}: unknown directive {kind!r}")
    if r is None or cond is None:
        raise CurveDataError("curve file needs 'branches' and 'conductor' lines")
    if len(cond) != r:
        raise CurveDataError("conductor length does not match the branch count")
    return MultibranchCurve(branches=r, conductor=cond, values=frozenset(values))


# ---------------------------------------------------------------------------
# Hilbert function

@dataclass(frozen=True)
class HilbertTable:
    """Hilbert function on the box [0, conductor + 1], with the linear
    extension rule beyond it."""

    curve: MultibranchCurve
    table: dict[tuple[int, ...], int] = field(hash=False)

    def value(self, ell: Sequence[int]) -> int:
        clipped = tuple(max(x, 0) for x in ell)
        capped = tuple(min(x, c + 1) for x, c in zip(clipped, self.curve.conductor))
        overflow = sum(x - (c + 1) for x, c in zip(clipped, self.curve.conductor)
                       if x > c + 1)
        return self.table[capped] + overflow


def _has_jump(curve: MultibranchCurve, ell: tuple[int, ...], i: int) -> bool:
    # jump criterion: a value with i-th coordinate exactly ell_i dominating
    # ell elsewhere; witnesses beyond the box are found through their clamp
    c = curve.conductor
    need = tuple(min(x, m) for x, m in zip(ell, c))
    for s in curve.values:
        if s[i] == ell[i] and all(s[j] >= need[j] for j in range(curve.branches) if j != i):
            return True
    return False


def hilbert_table(curve: MultibranchCurve) -> HilbertTable:
    """Fill the box by coordinate increments from h(0) = 0.

    The increment in direction i is one exactly when the jump criterion
    holds.  Every coordinate path must give the same value; disagreement
    means the value set was not a valid semigroup of a curve.
    """
    r, c = curve.branches, curve.conductor
    limits = tuple(x + 1 for x in c)
    table: dict[tuple[int, ...], int] = {}
    for ell in _boxes(limits):
        if not any(ell):
            table[ell] = 0
            continue
        vals = set()
        for i in range(r):
            if ell[i] > 0:
                prev = tuple(x - 1 if j == i else x for j, x in enumerate(ell))
                vals.add(table[prev] + int(_has_jump(curve, prev, i)))
        if len(vals) != 1:
            raise CurveDataError(
                f"Hilbert recursion is path dependent at {ell}: got {sorted(vals)}; "
                "the value set is not a valid curve semigroup")
        table[ell] = vals.pop()
    return HilbertTable(curve=curve, table=table)


# ---------------------------------------------------------------------------
# Poincare coefficients and delta

@dataclass(frozen=True)
class CurvePoincare:
    """Signed coefficient map of the Poincare series of a (sub)curve.

    For two or more branches the support is finite and lives in the box
    [0, conductor + 1]; for one branch the coefficients are the semigroup
    indicator, constant one from the conductor on.
    """

    curve: MultibranchCurve
    terms: dict[tuple[int, ...], int] = field(hash=False)

    def coefficient(self, ell: Sequence[int]) -> int:
        ell = tuple(ell)
        if any(x < 0 for x in ell):
            return 0
        if self.curve.branches == 1:
            return int(self.curve.member(ell))
        if any(x > c + 1 for x, c in zip(ell, self.curve.conductor)):
            return 0
        return self.terms.get(ell, 0)

    def value_at_one(self) -> int:
        """Coefficient sum; only meaningful for the finite (multibranch) case."""
        if self.curve.branches == 1:
            raise CurveDataError("one-branch series has no finite value at 1")
        return sum(self.terms.values())


def poincare_series(curve: MultibranchCurve,
                    branch_indices: Sequence[int] | None = None) -> CurvePoincare:
    """Poincare coefficients of the chosen subcurve via the alternating
    Hilbert sum; for several branches the support is checked to stay inside
    its box (an outer shell of vanishing coefficients is verified)."""
    sub = curve if branch_indices is None else curve.subcurve(branch_indices)
    r = sub.branches
    h = hilbert_table(sub)
    if r == 1:
        terms = {(x,): 1 for x in range(sub.conductor[0] + 1) if sub.member((x,))}
        return CurvePoincare(curve=sub, terms=terms)

    def coef(ell: tuple[int, ...]) -> int:
        total = 0
        for k in range(1, r + 1):
            for js in itertools.combinations(range(r), k):
                bumped = tuple(x + 1 if j in js else x for j, x in enumerate(ell))
                total += (-1) ** (k + 1) * h.value(bumped)
        total -= h.value(ell)  # empty subset contributes -h(ell)
        return total

    limits = tuple(x + 1 for x in sub.conductor)
    terms = {}
    for ell in _boxes(limits):
        v = coef(ell)
        if v:
            terms[ell] = v
    shell_limits = tuple(x + 2 for x in sub.conductor)
    for ell in _boxes(shell_limits):
        if all(x <= m for x, m in zip(ell, limits)):
            continue
        if coef(ell):
            raise CurveDataError(
                f"Poincare support escapes the conductor box at {ell}; "
                "inconsistent value data")
    return CurvePoincare(curve=sub, terms=terms)


def delta_branch(curve: MultibranchCurve) -> int:
    """Delta of a single branch: the gap count of its numerical semigroup
    (minus the periodic constant of its one-variable series)."""
    return curve.gap_count()


def delta_total(curve: MultibranchCurve) -> int:
    """Delta invariant of the whole curve.

    Branch deltas plus the alternating sum of Poincare evaluations over the
    branch subsets of size two or more; hard-checked against the stable
    Hilbert value at the conductor.
    """
    r = curve.branches
    total = sum(delta_branch(curve.subcurve((i,))) for i in range(r))
    for k in range(2, r + 1):
        for js in itertools.combinations(range(r), k):
            total += (-1) ** k * poincare_series(curve, js).value_at_one()
    h = hilbert_table(curve)
    stable = sum(curve.conductor) - h.value(curve.conductor)
    if total != stable:
        raise CurveDataError(
            f"delta cross-check failed: alternating sum gives {total}, the "
            f"Hilbert value at the conductor gives {stable}")
    return total


def verify_inversion(curve: MultibranchCurve) -> tuple[bool, tuple[int, ...] | None]:
    """Reassemble the Hilbert table from the Poincare data of all subcurves
    and compare on the box; returns the first mismatch as a witness."""
    r = curve.branches
    h = hilbert_table(curve)
    series = {js: poincare_series(curve, js)
              for k in range(1, r + 1) for js in itertools.combinations(range(r), k)}
    limits = tuple(x + 1 for x in curve.conductor)
    for ell in _boxes(limits):
        total = 0
        for js, ps in series.items():
            bound = [ell[j] - 1 for j in js]
            if any(b < 0 for b in bound):
                continue
            sub_sum = 0
            for tl in itertools.product(*(range(b + 1) for b in bound)):
                sub_sum += ps.coefficient(tl)
            total += (-1) ** (len(js) - 1) * sub_sum
        if total != h.table[ell]:
            return False, ell
    return True, None
