"""Weighted dual graphs of surface singularity resolutions.

Vertices are rational curves with integer self-intersection <= -2, edges
are transversal intersections.  The negative-part coefficients b solve
Gram . b = (2 + w); a germ is klt exactly when all b_i < 1, canonical
exactly when b = 0, and carries a redundant point exactly when some vertex
or adjacent pair accumulates coefficient >= 1.  The enumerator verifies,
at configurable desk scale, that the redundant-free non-canonical graphs
are precisely five families of chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .birational import SurfaceModel, TrackedCurve
from .errors import (
    InvariantViolationError,
    NotNegativeDefiniteError,
)
from .lattice import (
    DivisorClass,
    IntersectionLattice,
    definiteness_certificate,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class DualGraph:
    """Connected weighted graph with simple edges and weights <= -2."""

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()
    names: tuple[str, ...] = ()

    def __post_init__(self):
        weights = tuple(int(w) for w in self.weights)
        if not weights:
            raise InvariantViolationError("graph needs at least one vertex")
        for w in weights:
            if w > -2:
                raise InvariantViolationError(f"vertex weight {w} exceeds -2")
        n = len(weights)
        seen = set()
        edges = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise InvariantViolationError("self-loops are not allowed")
            if not (0 <= a < n and 0 <= b < n):
                raise InvariantViolationError(f"edge ({a},{b}) out of range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise InvariantViolationError(f"duplicate edge {key}")
            seen.add(key)
            edges.append(key)
        names = tuple(self.names) or tuple(f"E{i + 1}" for i in range(n))
        if len(names) != n or len(set(names)) != n:
            raise InvariantViolationError("vertex names must be unique, one per vertex")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        object.__setattr__(self, "names", names)
        if not self._connected():
            raise InvariantViolationError("graph must be connected")

    @classmethod
    def chain(cls, weights: Sequence[int], names: Sequence[str] = ()) -> "DualGraph":
        n = len(weights)
        return cls(tuple(weights), tuple((i, i + 1) for i in range(n - 1)), tuple(names))

    def _connected(self) -> bool:
        n = len(self.weights)
        reach = {0}
        frontier = [0]
        adjacency = self.adjacency
        while frontier:
            v = frontier.pop()
            for u in adjacency[v]:
                if u not in reach:
                    reach.add(u)
                    frontier.append(u)
        return len(reach) == n

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.weights)
        out: list[list[int]] = [[] for _ in range(n)]
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return tuple(tuple(sorted(row)) for row in out)

    def gram(self) -> list[list[Fraction]]:
        n = len(self.weights)
        matrix = [[_ZERO] * n for _ in range(n)]
        for i, w in enumerate(self.weights):
            matrix[i][i] = Fraction(w)
        for a, b in self.edges:
            matrix[a][b] = _ONE
            matrix[b][a] = _ONE
        return matrix

    def is_negative_definite(self) -> bool:
        return definiteness_certificate(self.gram(), range(len(self.weights))).valid


def resolve_coefficients(graph: DualGraph) -> dict[str, Fraction]:
    """Coefficients of the negative part of the pulled-back anticanonical
    class on the resolution: Gram . b = (2 + w), entrywise unique and >= 0."""
    gram = graph.gram()
    if not definiteness_certificate(gram, range(len(graph.weights))).valid:
        raise NotNegativeDefiniteError("graph Gram matrix is not negative definite")
    rhs = [Fraction(2 + w) for w in graph.weights]
    solution = linalg.solve(gram, rhs)
    if any(b < 0 for b in solution):
        raise InvariantViolationError("negative-part coefficients must be nonnegative")
    return dict(zip(graph.names, solution))


def has_redundant_point(graph: DualGraph) -> bool:
    """True when some vertex (b_i >= 1) or edge (b_i + b_j >= 1) accumulates
    enough negative-part mass to make a point on it redundant."""
    b = resolve_coefficients(graph)
    values = [b[name] for name in graph.names]
    if any(v >= 1 for v in values):
        return True
    return any(values[a] + values[b_] >= 1 for a, b_ in graph.edges)


@dataclass(frozen=True)
class GraphVerdict:
    """Classification of one germ graph."""

    b: dict[str, Fraction]
    klt: bool
    canonical: bool
    redundant_free: bool
    matched_family: str | None


def _as_path(graph: DualGraph) -> list[int] | None:
    """Vertex order along the graph if it is a simple path, else None."""
    n = len(graph.weights)
    if n == 1:
        return [0]
    adjacency = graph.adjacency
    degrees = [len(row) for row in adjacency]
    if any(d > 2 for d in degrees) or degrees.count(1) != 2:
        return None
    start = degrees.index(1)
    order = [start]
    prev = -1
    while len(order) < n:
        nxt = [u for u in adjacency[order[-1]] if u != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def _family_tag(graph: DualGraph) -> str | None:
    order = _as_path(graph)
    if order is None:
        return None
    weights = [graph.weights[i] for i in order]
    if len(weights) == 1:
        return f"single[{weights[0]}]" if weights[0] <= -3 else None
    for candidate in (weights, weights[::-1]):
        alpha = len(candidate) - 1
        if candidate == [-2] * alpha + [-3] and alpha >= 1:
            return f"chain[-2x{alpha},-3]"
    for fixed, tag in (
        ([-2, -4], "chain[-2,-4]"),
        ([-2, -3, -2], "chain[-2,-3,-2]"),
        ([-2, -2, -3, -2], "chain[-2,-2,-3,-2]"),
    ):
        if weights == fixed or weights == fixed[::-1]:
            return tag
    return None


def classify(graph: DualGraph) -> GraphVerdict:
    """Full verdict: coefficients, klt/canonical flags, redundancy, and the
    matched family tag when the graph is one of the five listed chains."""
    b = resolve_coefficients(graph)
    values = [b[name] for name in graph.names]
    klt = all(v < 1 for v in values)
    canonical = all(v == 0 for v in values)
    redundant = any(v >= 1 for v in values) or any(
        values[i] + values[j] >= 1 for i, j in graph.edges
    )
    if canonical:
        tag: str | None = "canonical"
    else:
        tag = _family_tag(graph)
    return GraphVerdict(
        b=b,
        klt=klt,
        canonical=canonical,
        redundant_free=not redundant,
        matched_family=tag,
    )


def germ_surface(graph: DualGraph) -> SurfaceModel:
    """Resolution model of the germ: exceptional curves plus one extra basis
    class representing the pulled-back nef anticanonical of the germ.

    The canonical class is -(F + sum b_i E_i) with F the extra class, so
    -K decomposes as P = F, N = sum b_i E_i.
    """
    b = resolve_coefficients(graph)
    n = len(graph.weights)
    gram = [[Fraction(v) for v in row] + [_ZERO] for row in graph.gram()]
    gram.append([_ZERO] * (n + 1))
    extra = "F" if "F" not in graph.names else "F0"
    lattice = IntersectionLattice(gram, list(graph.names) + [extra])
    curves = [
        TrackedCurve(name, DivisorClass.of([1 if j == i else 0 for j in range(n + 1)]))
        for i, name in enumerate(graph.names)
    ]
    canonical = DivisorClass.of([-b[name] for name in graph.names] + [-1])
    axiom = DivisorClass.of([0] * n + [1])
    return SurfaceModel(lattice, canonical, curves, nef_axioms=[axiom])


def canonical_form(weights: Sequence[int], edges: Iterable[tuple[int, int]]) -> str:
    """Isomorphism-invariant encoding of a weighted tree (minimum over all
    rooted encodings)."""
    n = len(weights)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)

    def encode(v: int, parent: int) -> tuple:
        children = sorted(encode(u, v) for u in adjacency[v] if u != parent)
        return (weights[v], tuple(children))

    return repr(min(encode(root, -1) for root in range(n)))


@dataclass(frozen=True)
class GraphRecord:
    """One enumerated graph with its verdict, keyed by canonical form."""

    weights: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    form: str
    verdict: GraphVerdict

    @property
    def chain_weights(self) -> tuple[int, ...] | None:
        order = _as_path(DualGraph(self.weights, self.edges))
        if order is None:
            return None
        candidate = tuple(self.weights[i] for i in order)
        return min(candidate, candidate[::-1])

    def describe(self) -> str:
        chain = self.chain_weights
        if chain is not None:
            return "chain(" + ",".join(str(w) for w in chain) + ")"
        return "tree" + self.form


def _expected_families(max_vertices: int, min_weight: int) -> dict[str, str]:
    """Canonical forms of the five listed families within the bounds."""
    expected: dict[str, str] = {}

    def add(weights: list[int], tag: str) -> None:
        if len(weights) > max_vertices or any(w < min_weight for w in weights):
            return
        edges = [(i, i + 1) for i in range(len(weights) - 1)]
        expected[canonical_form(weights, edges)] = tag

    for w in range(-3, min_weight - 1, -1):
        add([w], f"single[{w}]")
    for alpha in range(1, max_vertices):
        add([-2] * alpha + [-3], f"chain[-2x{alpha},-3]")
    add([-2, -4], "chain[-2,-4]")
    add([-2, -3, -2], "chain[-2,-3,-2]")
    add([-2, -2, -3, -2], "chain[-2,-2,-3,-2]")
    return expected


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of the desk-scale enumeration.

    The canonical and redundant-free lists are complete for the bounds;
    graphs with a redundant point are recorded when first reached but not
    grown further, since every extension of a redundant graph stays
    redundant.  Non-klt and indefinite graphs are outside the universe.
    """

    max_vertices: int
    min_weight: int
    canonical: tuple[GraphRecord, ...]
    redundant_free: tuple[GraphRecord, ...]
    redundant_found: tuple[GraphRecord, ...]
    expected_tags: dict[str, str]
    missing: tuple[str, ...]
    unexpected: tuple[str, ...]
    monotonicity_failures: tuple[str, ...]
    considered: int

    @property
    def match(self) -> bool:
        return not self.missing and not self.unexpected and not self.monotonicity_failures


def enumerate_and_verify(max_vertices: int, min_weight: int) -> TheoremReport:
    """Enumerate all negative definite klt trees within bounds by leaf
    growth and compare the redundant-free non-canonical ones with the five
    listed families.

    Pruning is justified by monotonicity: removing a leaf from a klt
    redundant-free tree leaves a klt redundant-free tree (coefficients only
    decrease), so growing only redundant-free graphs reaches every one of
    them; redundant graphs are terminal because coefficients only increase
    under growth.
    """
    if max_vertices < 1 or max_vertices > 12:
        raise InvariantViolationError("max_vertices must lie in 1..12")
    if min_weight > -2 or min_weight < -12:
        raise InvariantViolationError("min_weight must lie in -12..-2")
    weight_menu = list(range(-2, min_weight - 1, -1))
    seen: set[str] = set()
    canonical_bucket: list[GraphRecord] = []
    free_bucket: list[GraphRecord] = []
    redundant_bucket: list[GraphRecord] = []
    considered = 0

    def evaluate(weights: tuple[int, ...], edges: tuple[tuple[int, int], ...]) -> GraphRecord | None:
        nonlocal considered
        considered += 1
        graph = DualGraph(weights, edges)
        if not graph.is_negative_definite():
            return None
        verdict = classify(graph)
        if not verdict.klt:
            return None
        return GraphRecord(weights, edges, canonical_form(weights, edges), verdict)

    frontier: list[GraphRecord] = []
    for w in weight_menu:
        record = evaluate((w,), ())
        if record is None or record.form in seen:
            continue
        seen.add(record.form)
        _bucket(record, canonical_bucket, free_bucket, redundant_bucket)
        if record.verdict.redundant_free:
            frontier.append(record)
    for size in range(2, max_vertices + 1):
        next_frontier: list[GraphRecord] = []
        for parent in frontier:
            attach_count = size - 1
            for attach in range(attach_count):
                for w in weight_menu:
                    weights = parent.weights + (w,)
                    edges = parent.edges + ((attach, size - 1),)
                    form = canonical_form(weights, edges)
                    if form in seen:
                        continue
                    seen.add(form)
                    record = evaluate(weights, edges)
                    if record is None:
                        continue
                    _bucket(record, canonical_bucket, free_bucket, redundant_bucket)
                    if record.verdict.redundant_free:
                        next_frontier.append(record)
        frontier = next_frontier

    noncanonical = free_bucket
    expected = _expected_families(max_vertices, min_weight)
    got = {r.form: r for r in noncanonical}
    missing = tuple(
        sorted(tag for form, tag in expected.items() if form not in got)
    )
    unexpected = tuple(
        sorted(r.describe() for form, r in got.items() if form not in expected)
    )
    failures = _monotonicity_failures(
        canonical_bucket + free_bucket + redundant_bucket, min_weight
    )
    order_key = lambda r: (len(r.weights), r.form)
    return TheoremReport(
        max_vertices=max_vertices,
        min_weight=min_weight,
        canonical=tuple(sorted(canonical_bucket, key=order_key)),
        redundant_free=tuple(sorted(noncanonical, key=order_key)),
        redundant_found=tuple(sorted(redundant_bucket, key=order_key)),
        expected_tags=expected,
        missing=missing,
        unexpected=unexpected,
        monotonicity_failures=failures,
        considered=considered,
    )


def _bucket(
    record: GraphRecord,
    canonical_bucket: list[GraphRecord],
    free_bucket: list[GraphRecord],
    redundant_bucket: list[GraphRecord],
) -> None:
    if not record.verdict.redundant_free:
        redundant_bucket.append(record)
    elif record.verdict.canonical:
        canonical_bucket.append(record)
    else:
        free_bucket.append(record)


def _monotonicity_failures(records: Sequence[GraphRecord], min_weight: int) -> tuple[str, ...]:
    """Check that decreasing one weight never decreases a coefficient."""
    failures = []
    for record in records:
        base = resolve_coefficients(DualGraph(record.weights, record.edges))
        base_values = list(base.values())
        for i in range(len(record.weights)):
            if record.weights[i] - 1 < min_weight:
                continue
            weights = list(record.weights)
            weights[i] -= 1
            graph = DualGraph(tuple(weights), record.edges)
            if not graph.is_negative_definite():
                continue
            new_values = list(resolve_coefficients(graph).values())
            if any(n < o for n, o in zip(new_values, base_values)):
                failures.append(f"{record.describe()} vertex {i}")
    return tuple(failures)
