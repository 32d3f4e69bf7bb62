"""Plumbing trees, their intersection lattices, and lattice-level invariants.

A resolution graph here is a decorated tree: vertices carry Euler numbers
(self-intersections, at most -1) and optional arrow multiplicities recording
transversal curve attachments.  The tree spans a negative definite lattice L
with dual lattice L'; this module provides the exact arithmetic on both:
dual cycles, the canonical cycle, the Riemann-Roch quadratic chi, the
discriminant group L'/L, anti-nef saturation, the Artin rationality test and
full-subtree projections.

Vertex genera are implicitly zero throughout; the link of any graph accepted
here is a rational homology sphere, and nothing else is representable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .cycles import RationalCycle, zero_cycle
from .snf import (fraction_inverse, int_det, leading_principal_minors,
                  smith_normal_form, unimodular_inverse)


class GraphError(ValueError):
    """Base class for invalid graph input."""


class GraphSyntaxError(GraphError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class NotATreeError(GraphError):
    pass


class NotNegativeDefiniteError(GraphError):
    def __init__(self, order: int, minor: int):
        super().__init__(
            f"intersection form is not negative definite: "
            f"leading principal minor of order {order} equals {minor}, "
            f"expected sign {'-' if order % 2 else '+'}"
        )
        self.order = order
        self.minor = minor


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric integer matrix (E_u, E_v): Euler numbers on the diagonal,
    one for each tree edge, zero elsewhere."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    @cached_property
    def det(self) -> int:
        return int_det([list(r) for r in self.rows])

    @property
    def det_abs(self) -> int:
        return abs(self.det)

    @cached_property
    def inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        inv = fraction_inverse([list(r) for r in self.rows])
        return tuple(tuple(row) for row in inv)

    def pair(self, x: RationalCycle, y: RationalCycle) -> Fraction:
        xs, ys = x.fractions(), y.fractions()
        total = Fraction(0)
        for i, row in enumerate(self.rows):
            if xs[i]:
                total += xs[i] * sum(row[j] * ys[j] for j in range(self.n) if ys[j])
        return total

    def pair_basis(self, x: RationalCycle, v: int) -> Fraction:
        """(x, E_v) for the v-th basis vector, as an exact rational."""
        row = self.rows[v]
        return Fraction(sum(row[j] * x.num[j] for j in range(self.n)), x.den)

    def apply_scaled(self, scaled: Sequence[int]) -> list[int]:
        """Matrix-vector product on a scaled integer vector."""
        return [sum(row[j] * scaled[j] for j in range(self.n)) for row in self.rows]


def _validate_negative_definite(rows: Sequence[Sequence[int]]) -> None:
    minors = leading_principal_minors([list(r) for r in rows])
    for k, m in enumerate(minors, start=1):
        if m == 0 or (m > 0) != (k % 2 == 0):
            raise NotNegativeDefiniteError(k, m)


@dataclass(frozen=True)
class ResolutionGraph:
    """Decorated plumbing tree.

    ``ids`` are the sorted vertex identifiers; ``eulers`` and ``arrows`` are
    aligned with them.  Edges are canonically ordered id pairs.  Construction
    validates the tree structure and negative definiteness; every derived
    object (form, dual cycles, canonical cycle, discriminant group) is cached
    and immutable, so instances are safe to share across threads.
    """

    ids: tuple[int, ...]
    eulers: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    arrows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.ids:
            raise GraphError("graph needs at least one vertex")
        if list(self.ids) != sorted(set(self.ids)):
            raise GraphError("vertex ids must be distinct")
        if any(i <= 0 for i in self.ids):
            raise GraphError("vertex ids must be positive integers")
        if any(e > -1 for e in self.eulers):
            raise GraphError("Euler numbers must be <= -1")
        if any(a < 0 for a in self.arrows):
            raise GraphError("arrow multiplicities must be >= 0")
        idset = set(self.ids)
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"self-edge at vertex {a}")
            if a not in idset or b not in idset:
                raise GraphError(f"edge ({a},{b}) touches an undeclared vertex")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise GraphError(f"duplicate edge ({a},{b})")
            seen.add(key)
        if len(self.edges) != len(self.ids) - 1:
            raise NotATreeError(
                f"{len(self.ids)} vertices need {len(self.ids) - 1} edges to form a tree, "
                f"got {len(self.edges)}")
        # connectivity
        adj: dict[int, list[int]] = {i: [] for i in self.ids}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        stack, reach = [self.ids[0]], {self.ids[0]}
        while stack:
            for w in adj[stack.pop()]:
                if w not in reach:
                    reach.add(w)
                    stack.append(w)
        if len(reach) != len(self.ids):
            raise NotATreeError("edge set is not connected")
        _validate_negative_definite(self._build_rows())

    @classmethod
    def build(cls, eulers: dict[int, int], edges: Iterable[tuple[int, int]],
              arrows: dict[int, int] | None = None) -> "ResolutionGraph":
        ids = tuple(sorted(eulers))
        arr = arrows or {}
        unknown = set(arr) - set(ids)
        if unknown:
            raise GraphError(f"arrow on undeclared vertex {min(unknown)}")
        return cls(
            ids=ids,
            eulers=tuple(eulers[i] for i in ids),
            edges=tuple(sorted((min(a, b), max(a, b)) for a, b in edges)),
            arrows=tuple(arr.get(i, 0) for i in ids),
        )

    def _build_rows(self) -> list[list[int]]:
        n = len(self.ids)
        pos = {v: i for i, v in enumerate(self.ids)}
        rows = [[0] * n for _ in range(n)]
        for i, e in enumerate(self.eulers):
            rows[i][i] = e
        for a, b in self.edges:
            ia, ib = pos[a], pos[b]
            rows[ia][ib] = rows[ib][ia] = 1
        return rows

    @property
    def n(self) -> int:
        return len(self.ids)

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.ids)}

    @cached_property
    def valences(self) -> tuple[int, ...]:
        val = [0] * self.n
        for a, b in self.edges:
            val[self.index[a]] += 1
            val[self.index[b]] += 1
        return tuple(val)

    @cached_property
    def form(self) -> IntersectionForm:
        return IntersectionForm(tuple(tuple(r) for r in self._build_rows()))

    @property
    def det_abs(self) -> int:
        return self.form.det_abs

    @cached_property
    def duals(self) -> tuple[RationalCycle, ...]:
        """E*_v for every vertex: the unique cycles with (E*_u, E_v) = -delta_uv.

        Negative definiteness of a connected tree forces every entry to be
        strictly positive; this is asserted.
        """
        inv = self.form.inverse
        out = []
        for v in range(self.n):
            col = [-inv[u][v] for u in range(self.n)]
            cyc = RationalCycle.from_fractions(col)
            assert all(a > 0 for a in cyc.num), "dual cycle with a nonpositive entry"
            out.append(cyc)
        for v, cyc in enumerate(out):
            for u in range(self.n):
                expect = Fraction(-1 if u == v else 0)
                assert self.form.pair_basis(cyc, u) == expect
        return tuple(out)

    def dual(self, vertex_id: int) -> RationalCycle:
        return self.duals[self.index[vertex_id]]

    @cached_property
    def unit_cycle(self) -> RationalCycle:
        return RationalCycle((1,) * self.n, 1)

    @cached_property
    def sum_duals(self) -> RationalCycle:
        total = zero_cycle(self.n)
        for c in self.duals:
            total = total + c
        return total

    @cached_property
    def canonical(self) -> RationalCycle:
        """The canonical cycle, via the valence formula, cross-checked against
        the adjunction relations it must solve."""
        zk = self.unit_cycle
        for v in range(self.n):
            zk = zk - (2 - self.valences[v]) * self.duals[v]
        for v in range(self.n):
            lhs = self.form.pair_basis(zk, v)
            assert lhs == self.eulers[v] + 2, "canonical cycle fails adjunction"
        return zk

    @cached_property
    def group(self) -> "DiscriminantGroup":
        return DiscriminantGroup._from_graph(self)

    def residue(self, x: RationalCycle) -> tuple[int, ...]:
        """Scaled coordinates of x modulo the integral lattice; two cycles of
        L' lie in the same discriminant class iff their residues agree."""
        d = self.det_abs
        return tuple(a % d for a in x.scaled(d))

    def antinef_defect(self, x: RationalCycle) -> list[Fraction]:
        return [self.form.pair_basis(x, v) for v in range(self.n)]

    def in_lipman_cone(self, x: RationalCycle) -> bool:
        return all(p <= 0 for p in self.antinef_defect(x))

    def arrow_cycle(self) -> RationalCycle:
        """Sum of arrow multiplicities times dual cycles."""
        total = zero_cycle(self.n)
        for i, a in enumerate(self.arrows):
            if a:
                total = total + a * self.duals[i]
        return total


# ---------------------------------------------------------------------------
# parsing

def parse_graph(text: str) -> ResolutionGraph:
    """Parse the line-oriented graph grammar.

    ``v <id> <euler>`` declares a vertex, ``e <id> <id>`` an edge,
    ``a <id> [mult]`` an arrow (default multiplicity 1); ``#`` starts a
    comment.  Duplicate declarations are rejected.
    """
    eulers: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    edge_seen: set[tuple[int, int]] = set()
    arrows: dict[int, int] = {}
    decl_lines: dict[int, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        try:
            nums = [int(t) for t in args]
        except ValueError:
            raise GraphSyntaxError(line_no, f"expected integer arguments in {raw!r}")
        if kind == "v":
            if len(nums) != 2:
                raise GraphSyntaxError(line_no, "vertex line needs: v <id> <euler>")
            vid, e = nums
            if vid in eulers:
                raise GraphSyntaxError(line_no, f"duplicate vertex {vid} (first declared on line {decl_lines[vid]})")
            if vid <= 0:
                raise GraphSyntaxError(line_no, "vertex ids must be positive")
            eulers[vid] = e
            decl_lines[vid] = line_no
        elif kind == "e":
            if len(nums) != 2:
                raise GraphSyntaxError(line_no, "edge line needs: e <id> <id>")
            a, b = nums
            key = (min(a, b), max(a, b))
            if key in edge_seen:
                raise GraphSyntaxError(line_no, f"duplicate edge ({a},{b})")
            edge_seen.add(key)
            edges.append((a, b))
        elif kind == "a":
            if len(nums) not in (1, 2):
                raise GraphSyntaxError(line_no, "arrow line needs: a <id> [mult]")
            vid = nums[0]
            mult = nums[1] if len(nums) == 2 else 1
            if vid in arrows:
                raise GraphSyntaxError(line_no, f"duplicate arrow declaration for vertex {vid}")
            if mult < 0:
                raise GraphSyntaxError(line_no, "arrow multiplicity must be >= 0")
            arrows[vid] = mult
        else:
            raise GraphSyntaxError(line_no, f"unknown directive {kind!r}")
    if not eulers:
        raise GraphError("no vertices declared")
    return ResolutionGraph.build(eulers, edges, arrows)


# ---------------------------------------------------------------------------
# lattice operations

def pairing(graph: ResolutionGraph, x: RationalCycle, y: RationalCycle) -> Fraction:
    return graph.form.pair(x, y)


def dual_cycle(graph: ResolutionGraph, vertex_id: int) -> RationalCycle:
    return graph.dual(vertex_id)


def canonical_cycle(graph: ResolutionGraph) -> RationalCycle:
    return graph.canonical


def chi(graph: ResolutionGraph, x: RationalCycle) -> Fraction:
    """Riemann-Roch quadratic: chi(x) = -(x, x - Z_K)/2."""
    return -graph.form.pair(x, x - graph.canonical) / 2


@dataclass(frozen=True)
class DiscriminantGroup:
    """The finite quotient L'/L presented by invariant factors.

    Classes are labelled by tuples modulo the nontrivial invariant factors
    (the empty tuple for the trivial group).  ``class_of`` reads the label of
    any cycle of L'; ``frac_rep`` returns the unique representative with all
    coordinates in [0, 1).
    """

    invariant_factors: tuple[int, ...]
    order: int
    _graph: ResolutionGraph = field(repr=False)
    _u: tuple[tuple[int, ...], ...] = field(repr=False)
    _uinv: tuple[tuple[int, ...], ...] = field(repr=False)
    _positions: tuple[int, ...] = field(repr=False)  # indices of nontrivial factors
    _alldiag: tuple[int, ...] = field(repr=False)

    @classmethod
    def _from_graph(cls, graph: ResolutionGraph) -> "DiscriminantGroup":
        rows = [list(r) for r in graph.form.rows]
        diag, u, _v = smith_normal_form(rows)
        diag = [abs(x) for x in diag]
        order = 1
        for x in diag:
            order *= x
        assert order == graph.det_abs, "invariant factors do not multiply to |det|"
        positions = tuple(i for i, x in enumerate(diag) if x > 1)
        grp = cls(
            invariant_factors=tuple(diag[i] for i in positions),
            order=order,
            _graph=graph,
            _u=tuple(tuple(r) for r in u),
            _uinv=tuple(tuple(r) for r in unimodular_inverse(u)),
            _positions=positions,
            _alldiag=tuple(diag),
        )
        assert grp.class_of(graph.unit_cycle) == grp.zero, "integral cycle with nonzero class"
        return grp

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariant_factors)

    def dual_coordinates(self, x: RationalCycle) -> list[int]:
        """Coordinates of x in the dual-cycle basis: a_v = -(x, E_v)."""
        out = []
        for v in range(self._graph.n):
            p = -self._graph.form.pair_basis(x, v)
            if p.denominator != 1:
                raise ValueError("cycle does not pair integrally with the lattice")
            out.append(int(p))
        return out

    def class_of(self, x: RationalCycle) -> tuple[int, ...]:
        a = self.dual_coordinates(x)
        n = self._graph.n
        coords = [sum(self._u[i][j] * a[j] for j in range(n)) for i in range(n)]
        return tuple(coords[p] % self._alldiag[p] for p in self._positions)

    def add(self, h1: tuple[int, ...], h2: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((a + b) % m for a, b, m in zip(h1, h2, self.invariant_factors, strict=True))

    def neg(self, h: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-a) % m for a, m in zip(h, self.invariant_factors, strict=True))

    def sub(self, h1: tuple[int, ...], h2: tuple[int, ...]) -> tuple[int, ...]:
        return self.add(h1, self.neg(h2))

    def elements(self) -> list[tuple[int, ...]]:
        return [tuple(t) for t in itertools.product(*(range(m) for m in self.invariant_factors))]

    def representative(self, h: tuple[int, ...]) -> RationalCycle:
        """Some cycle of L' whose class is h (an integer combination of duals)."""
        n = self._graph.n
        coords = [0] * n
        for val, p in zip(h, self._positions, strict=True):
            coords[p] = val
        a = [sum(self._uinv[i][j] * coords[j] for j in range(n)) for i in range(n)]
        out = zero_cycle(n)
        for v, av in enumerate(a):
            if av:
                out = out + av * self._graph.duals[v]
        return out

    def frac_rep(self, h: tuple[int, ...]) -> RationalCycle:
        """The reduced representative of h: all coordinates in [0, 1)."""
        r = self.representative(h).frac_part()
        assert self.class_of(r) == h
        return r


def laufer_saturate(graph: ResolutionGraph, x0: RationalCycle,
                    choose: Callable[[list[int]], int] | None = None) -> RationalCycle:
    """Minimal anti-nef cycle dominating x0 within x0 + L_{>=0}.

    Incremental saturation: while some basis pairing is positive, add that
    basis vector.  The result is independent of the choice of violating
    vertex; the default rule picks the smallest index for determinism.  The
    iteration cap is a safety net against internal bugs, not a user error.
    """
    d = graph.det_abs
    if d % x0.den:
        raise ValueError("saturation input must lie in the dual lattice")
    num = list(x0.scaled(d))
    rows = graph.form.rows
    pair_scaled = graph.form.apply_scaled(num)
    # no a-priori step bound is known; allow the lattice distance the walk
    # must climb plus a definiteness-scaled margin before declaring a bug
    displacement = sum(max(0, -a) for a in num) // d
    cap = (d * sum(abs(e) for e in graph.eulers) * graph.n * graph.n
           + 2 * displacement + graph.n + 64)
    for _ in range(cap):
        violators = [v for v in range(graph.n) if pair_scaled[v] > 0]
        if not violators:
            return RationalCycle(tuple(num), d)
        v = violators[0] if choose is None else choose(violators)
        num[v] += d
        for w in range(graph.n):
            pair_scaled[w] += rows[w][v] * d
    raise RuntimeError("anti-nef saturation exceeded its iteration cap; this is a bug")


def min_antinef_rep(graph: ResolutionGraph, h: tuple[int, ...]) -> RationalCycle:
    """Minimal Lipman-cone element in class h (saturation of the reduced rep)."""
    return laufer_saturate(graph, graph.group.frac_rep(h))


def fundamental_cycle(graph: ResolutionGraph) -> RationalCycle:
    return laufer_saturate(graph, graph.unit_cycle)


def artin_rationality(graph: ResolutionGraph) -> tuple[RationalCycle, bool]:
    """Artin's criterion: rational iff chi of the fundamental cycle is 1."""
    zmin = fundamental_cycle(graph)
    return zmin, chi(graph, zmin) == 1


def is_rational(graph: ResolutionGraph) -> bool:
    return artin_rationality(graph)[1]


def strict_interior_cycle(graph: ResolutionGraph) -> RationalCycle:
    """A small integral cycle pairing at most -1 with every basis vector.

    Saturation variant demanding strict negativity; used as a ray direction
    inside the Lipman cone.
    """
    num = [1] * graph.n
    rows = graph.form.rows
    pair = graph.form.apply_scaled(num)
    cap = graph.det_abs * sum(abs(e) for e in graph.eulers) * graph.n * graph.n + graph.n + 16
    for _ in range(cap):
        bad = [v for v in range(graph.n) if pair[v] >= 0]
        if not bad:
            return RationalCycle(tuple(num), 1)
        v = bad[0]
        num[v] += 1
        for w in range(graph.n):
            pair[w] += rows[w][v]
    raise RuntimeError("interior saturation exceeded its iteration cap; this is a bug")


# ---------------------------------------------------------------------------
# subtree projections

@dataclass(frozen=True)
class SubgraphComponent:
    """A connected full subtree together with the dual projection onto it.

    The projection rewrites a cycle in the dual basis of the ambient tree and
    keeps only the coordinates of the component, re-expanded in the
    component's own dual basis.  It sends the ambient canonical cycle to the
    component's canonical cycle (asserted at construction).
    """

    graph: ResolutionGraph
    parent: ResolutionGraph
    vertex_ids: tuple[int, ...]

    def project(self, x: RationalCycle) -> RationalCycle:
        parent = self.parent
        out = zero_cycle(self.graph.n)
        for vid in self.vertex_ids:
            a = -parent.form.pair_basis(x, parent.index[vid])
            if a.denominator != 1:
                raise ValueError("projection input must lie in the dual lattice")
            if a:
                out = out + int(a) * self.graph.duals[self.graph.index[vid]]
        return out


def subgraph_components(graph: ResolutionGraph,
                        removed_ids: Iterable[int]) -> list[SubgraphComponent]:
    """Connected full subtrees on the complement of ``removed_ids``."""
    removed = set(removed_ids)
    unknown = removed - set(graph.ids)
    if unknown:
        raise GraphError(f"unknown vertex id {min(unknown)}")
    keep = [v for v in graph.ids if v not in removed]
    adj: dict[int, list[int]] = {v: [] for v in keep}
    for a, b in graph.edges:
        if a in adj and b in adj:
            adj[a].append(b)
            adj[b].append(a)
    components: list[list[int]] = []
    seen: set[int] = set()
    for v in keep:
        if v in seen:
            continue
        stack, comp = [v], [v]
        seen.add(v)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        components.append(sorted(comp))
    out = []
    for comp in components:
        cset = set(comp)
        sub = ResolutionGraph.build(
            {v: graph.eulers[graph.index[v]] for v in comp},
            [e for e in graph.edges if e[0] in cset and e[1] in cset],
        )
        piece = SubgraphComponent(graph=sub, parent=graph, vertex_ids=tuple(comp))
        assert piece.project(graph.canonical) == sub.canonical, \
            "canonical cycle does not project to the subtree canonical cycle"
        out.append(piece)
    return out
