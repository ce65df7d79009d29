"""Box counts of multiplicatively dependent tuples, the shared-prime graph
diagnostic, the constructive half cover, and growth-exponent fits.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from gmpy2 import gcd, mpz

from .curve import is_torsion
from .errors import BudgetExceeded
from .mdep import is_md, is_md_maximal_rank
from .sequences import generate

TARGETS = ("D", "D*", "X", "X*", "D_P")
_MAXIMAL_RANK_TARGETS = ("D*", "X*")

DEFAULT_TUPLE_BUDGET = 10**6


@dataclass(frozen=True)
class BoxSpec:
    """An s-fold box of indices and the quantity to count over it.

    target selects which values are tested for dependence: denominators
    (D, D*, and D_P which additionally requires every Q at infinity) or
    x-coordinates (X, X*); the starred targets count maximal-rank tuples.
    """

    curves: tuple
    p: tuple
    q: tuple
    m: int
    n: int
    target: str
    budget: int = DEFAULT_TUPLE_BUDGET

    def __post_init__(self):
        if not (len(self.curves) == len(self.p) == len(self.q)):
            raise ValueError("curves, p and q must have equal length")
        if self.s < 2:
            raise ValueError("tuple length s must be at least 2")
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        if self.target == "D_P" and not all(qi.is_infinity for qi in self.q):
            raise ValueError("target D_P requires every Q to be the point at infinity")
        if self.n < 1:
            raise ValueError("window length must be at least 1")

    @property
    def s(self) -> int:
        return len(self.curves)

    @property
    def all_b_nonzero(self) -> bool:
        return all(c.b != 0 for c in self.curves)


@dataclass(frozen=True)
class CountResult:
    """Exact box count with replay-verified witnesses.

    witnesses: (index tuple, relation) per counted tuple, lexicographic.
    skipped: tuples containing a term at infinity or (for x-coordinate
    targets) a zero x-coordinate, where dependence is undefined.
    count_without_units: counted tuples none of whose values is +-1, the
    secondary statistic that removes the integral-point contribution.
    """

    spec: BoxSpec
    count: int
    witnesses: tuple
    skipped: tuple
    count_without_units: int


def count_box(spec: BoxSpec) -> CountResult:
    """Count dependent tuples over the box by the literal definition.

    Enumerates all n-tuples in lexicographic order (refusing, not
    truncating, when the budget is exceeded), collects the s values, and
    applies the dependence test tuple by tuple.
    """
    total = spec.n**spec.s
    if total > spec.budget:
        raise BudgetExceeded(
            f"{total} tuples exceed the budget of {spec.budget}; "
            "raise the budget explicitly to run this box"
        )
    windows = {}
    for curve, p, q in zip(spec.curves, spec.p, spec.q):
        key = (curve, p, q)
        if key not in windows:
            if is_torsion(curve, p):
                raise ValueError("every P must be non-torsion")
            windows[key] = generate(curve, p, q, spec.m, spec.n)

    use_x = spec.target in ("X", "X*")
    values_by_coord = []
    for curve, p, q in zip(spec.curves, spec.p, spec.q):
        window = windows[(curve, p, q)]
        coord = {}
        for t in window.terms:
            if t.is_infinite:
                coord[t.n] = None
            elif use_x:
                x = t.lf.x
                coord[t.n] = None if x == 0 else x
            else:
                coord[t.n] = t.d
        values_by_coord.append(coord)

    maximal = spec.target in _MAXIMAL_RANK_TARGETS
    decide = is_md_maximal_rank if maximal else is_md
    cache = {}
    witnesses = []
    skipped = []
    count = 0
    count_without_units = 0
    indices = range(spec.m + 1, spec.m + spec.n + 1)
    for ns in itertools.product(indices, repeat=spec.s):
        vals = tuple(values_by_coord[i][ni] for i, ni in enumerate(ns))
        if any(v is None for v in vals):
            skipped.append(ns)
            continue
        verdict = cache.get(vals)
        if verdict is None:
            verdict = decide(vals)
            cache[vals] = verdict
        hit = verdict.maximal_rank if maximal else verdict.dependent
        if hit:
            count += 1
            witnesses.append((ns, verdict.relation))
            if all(abs(v) != 1 for v in vals):
                count_without_units += 1
    return CountResult(spec, count, tuple(witnesses), tuple(skipped), count_without_units)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n_vertices-1."""

    n_vertices: int
    edges: frozenset

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < j < self.n_vertices):
                raise ValueError(f"bad edge ({i}, {j})")

    def neighbors(self, v: int) -> set:
        out = set()
        for i, j in self.edges:
            if i == v:
                out.add(j)
            elif j == v:
                out.add(i)
        return out


@dataclass(frozen=True)
class HalfCover:
    """A vertex subset of size <= floor(l/2) dominating its complement."""

    v1: frozenset


def _strip_excluded(g: mpz, excluded: Iterable[int]) -> mpz:
    for prime in excluded:
        while g % prime == 0:
            g //= prime
    return g


def gcd_graph(values: Sequence[int], excluded: Iterable[int]) -> Graph:
    """Connect i and j iff gcd(values[i], values[j]) keeps a prime outside `excluded`.

    Decided by stripping the excluded primes from the gcd and testing
    whether more than 1 remains; the values are never factored.
    """
    vals = [mpz(v) for v in values]
    if any(v <= 0 for v in vals):
        raise ValueError("values must be positive")
    excluded = sorted({int(p) for p in excluded})
    edges = set()
    for i, j in itertools.combinations(range(len(vals)), 2):
        if _strip_excluded(gcd(vals[i], vals[j]), excluded) > 1:
            edges.add((i, j))
    return Graph(len(vals), frozenset(edges))


def half_cover(g: Graph) -> HalfCover:
    """A dominating set of size <= floor(l/2) for a graph with no isolated vertex.

    Per connected component: 2-color a BFS spanning tree and keep the
    smaller color class (ties go to the class holding the smallest-index
    vertex).  Tree edges connect the classes, so the larger class is
    dominated by the smaller.  Both guarantees are re-verified on every
    call before returning.
    """
    adjacency = {v: set() for v in range(g.n_vertices)}
    for i, j in g.edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    isolated = [v for v, nbrs in adjacency.items() if not nbrs]
    if isolated:
        raise ValueError(f"graph has isolated vertices: {isolated}")

    chosen = set()
    seen = set()
    for root in range(g.n_vertices):
        if root in seen:
            continue
        color = {root: 0}
        queue = [root]
        seen.add(root)
        while queue:
            v = queue.pop(0)
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    color[w] = 1 - color[v]
                    queue.append(w)
        classes = (
            {v for v, c in color.items() if c == 0},
            {v for v, c in color.items() if c == 1},
        )
        if len(classes[0]) != len(classes[1]):
            smaller = min(classes, key=len)
        else:
            smaller = classes[0] if root in classes[0] else classes[1]
        chosen |= smaller

    if len(chosen) > g.n_vertices // 2:
        raise AssertionError("half cover exceeds floor(l/2)")
    for v in range(g.n_vertices):
        if v not in chosen and not adjacency[v] & chosen:
            raise AssertionError(f"vertex {v} is not dominated")
    return HalfCover(frozenset(chosen))


def theoretical_exponent(target: str, s: int, all_b_nonzero: bool = True) -> float:
    """The growth exponent the counting bounds predict for the target.

    D* -> 6s/7; D and X -> s - 2/7 (X under the b != 0 hypothesis);
    X* -> 6s/7 when every b is nonzero, else s - ceil(s/2)/(ceil(s/2)+3);
    D_P -> s - 1.
    """
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    if target == "D*":
        return 6 * s / 7
    if target == "X*":
        if all_b_nonzero:
            return 6 * s / 7
        half = math.ceil(s / 2)
        return s - half / (half + 3)
    if target in ("D", "X"):
        return s - 2 / 7
    return s - 1  # D_P


# Informational slack added to the theoretical exponent when flagging
# consistency: the bounds carry unspecified constants, so a small fitted
# overshoot at desk scale is not a contradiction.
ALPHA_SLACK = 0.3


@dataclass(frozen=True)
class ExperimentReport:
    """Fitted growth exponent of a count series against the predicted one."""

    series: tuple  # ((N, count), ...) sorted by N
    alpha: float
    theoretical: Optional[float]
    consistent: Optional[bool]
    monotone: bool
    config: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["N,count,alpha_partial"]
        ns = [n for n, _ in self.series]
        counts = [c for _, c in self.series]
        for k in range(1, len(self.series) + 1):
            if k >= 2 and len(set(ns[:k])) >= 2:
                partial = _fit_slope(ns[:k], counts[:k])
                alpha_txt = f"{partial:.6f}"
            else:
                alpha_txt = ""
            lines.append(f"{ns[k - 1]},{counts[k - 1]},{alpha_txt}")
        return "\n".join(lines) + "\n"

    def to_plot_data(self) -> str:
        return "".join(f"{n} {c}\n" for n, c in self.series)

    def to_json(self) -> str:
        payload = {
            "series": [[n, c] for n, c in self.series],
            "alpha": self.alpha,
            "theoretical": self.theoretical,
            "consistent": self.consistent,
            "monotone": self.monotone,
            "config": self.config,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _fit_slope(ns, counts) -> float:
    xs = np.log(np.array(ns, dtype=float))
    ys = np.log(np.array(counts, dtype=float))
    return float(np.polyfit(xs, ys, 1)[0])


def exponent_fit(
    series: Sequence,
    theoretical: Optional[float] = None,
    config: Optional[dict] = None,
) -> ExperimentReport:
    """Least-squares slope of log count against log N.

    The consistency flag (alpha <= theoretical + slack) is informational
    only; the report never asserts the asymptotic bound.
    """
    pts = sorted((int(n), int(c)) for n, c in series)
    if len(pts) < 3:
        raise ValueError("need at least 3 points to fit an exponent")
    if any(c <= 0 for _, c in pts):
        raise ValueError("counts must be positive to fit on a log scale")
    if len({n for n, _ in pts}) == 1:
        raise ValueError("degenerate series: all N equal")
    alpha = _fit_slope([n for n, _ in pts], [c for _, c in pts])
    monotone = all(c1 <= c2 for (_, c1), (_, c2) in zip(pts, pts[1:]))
    consistent = None if theoretical is None else alpha <= theoretical + ALPHA_SLACK
    return ExperimentReport(
        tuple(pts), alpha, theoretical, consistent, monotone, dict(config or {})
    )
