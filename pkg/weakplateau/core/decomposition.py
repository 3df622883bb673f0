"""Split a curve against its hull into contact arcs, hooks and routed hull arcs."""

import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from weakplateau.core.config import SolverConfig
from weakplateau.core.geometry import (
    JordanCurve,
    segment_segment_closest,
    validate_curve,
)
from weakplateau.core.hull import (
    ConvexHull,
    hull_or_planar,
    on_hull_many,
    on_hull,
    path_nodes_near,
    segment_on_hull,
    surface_shortest_path,
)
from weakplateau.errors import AllInterior, HookNotSimple, PointNotOnHull, RoutingFailed

log = logging.getLogger(__name__)

MAX_CROSSING_SPLITS = 64


@dataclass(eq=False)
class Hook:
    """Off-hull arc beta with its routed hull arc l (same endpoints, same direction)."""

    index: int
    beta: np.ndarray
    start_vertex: int
    end_vertex: int
    route: np.ndarray = None
    route_kind: str = ""

    @property
    def endpoints(self):
        return self.beta[0], self.beta[-1]

    @property
    def interior(self) -> np.ndarray:
        return self.beta[1:-1]

    @property
    def closed_curve(self) -> np.ndarray:
        """beta followed by the routed arc walked backwards."""
        return np.vstack([self.beta, self.route[-2:0:-1]])


@dataclass(eq=False)
class Decomposition:
    curve: JordanCurve
    hull: ConvexHull
    on_hull_mask: np.ndarray
    alphas: list = field(default_factory=list)
    hooks: list = field(default_factory=list)
    point_components: list = field(default_factory=list)
    gamma_hat: list = field(default_factory=list)
    hook_curves: list = field(default_factory=list)
    side_assignment: dict = field(default_factory=dict)
    gamma_hat_plus: list = field(default_factory=list)
    gamma_hat_minus: list = field(default_factory=list)
    multi_loop: bool = False
    route_mode: str = ""
    # a point in the side of the core labelled reference_side
    side_reference: np.ndarray = None
    reference_side: str = ""
    # gamma_hat loop index of each solved core disk, in core order
    core_loops: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.hooks)

    @property
    def routed(self) -> bool:
        return all(h.route is not None for h in self.hooks)

    @property
    def routed_arcs(self) -> list:
        return [h.route for h in self.hooks]

    @property
    def plus(self) -> list:
        return sorted(i for i, s in self.side_assignment.items() if s == "+")

    @property
    def minus(self) -> list:
        return sorted(i for i, s in self.side_assignment.items() if s == "-")

    def assemble(self, choice) -> np.ndarray:
        """Closed curve through every alpha, taking beta or the route per hook.

        `choice(i)` returns "beta" or "route".
        """
        if not self.hooks:
            return self.alphas[0].copy()
        parts = []
        for k, hook in enumerate(self.hooks):
            parts.append(self.alphas[k])
            piece = hook.beta if choice(k) == "beta" else hook.route
            parts.append(piece[1:-1])
        return np.vstack([p for p in parts if len(p)])

    @property
    def augmented_curve(self) -> np.ndarray:
        """The input curve with any crossing points inserted into its contact arcs."""
        return self.assemble(lambda i: "beta")

    def summary(self) -> dict:
        return {
            "n_hooks": self.n,
            "alpha_lengths": [len(a) for a in self.alphas],
            "point_components": list(self.point_components),
            "hook_vertex_ranges": [[h.start_vertex, h.end_vertex] for h in self.hooks],
            "route_kinds": [h.route_kind for h in self.hooks],
            "multi_loop": self.multi_loop,
            "gamma_hat_loops": len(self.gamma_hat),
            "side_assignment": {str(k): v for k, v in sorted(self.side_assignment.items())},
            "notes": list(self.notes),
        }


def _cyclic_range(a: int, b: int, n: int) -> np.ndarray:
    """Indices a, a+1, ..., b walking forward modulo n."""
    length = (b - a) % n + 1
    return (a + np.arange(length)) % n


def _runs(mask: np.ndarray):
    """Maximal cyclic runs of True as (start, end) index pairs, ordered by start."""
    n = len(mask)
    starts = [k for k in range(n) if mask[k] and not mask[k - 1]]
    runs = []
    for s in starts:
        e = s
        while mask[(e + 1) % n] and (e + 1) % n != s:
            e = (e + 1) % n
        runs.append((s, e))
    return runs


def _from_mask(curve: JordanCurve, hull: ConvexHull, raw_mask: np.ndarray, mask: np.ndarray) -> Decomposition:
    v = curve.vertices
    n = len(v)
    d = Decomposition(curve=curve, hull=hull, on_hull_mask=raw_mask)
    if mask.all():
        d.alphas = [v.copy()]
        d.gamma_hat = [v.copy()]
        return d
    runs = _runs(mask)
    for k, (s, e) in enumerate(runs):
        d.alphas.append(v[_cyclic_range(s, e, n)].copy())
        if s == e:
            d.point_components.append(k)
        s_next = runs[(k + 1) % len(runs)][0]
        idx = _cyclic_range(e, s_next, n)
        d.hooks.append(Hook(index=k, beta=v[idx].copy(), start_vertex=int(e), end_vertex=int(s_next)))
    return d


def extract_gamma_star(curve: JordanCurve, hull: ConvexHull = None, tol_scale: float = 1.0) -> Decomposition:
    """Classify vertices against the hull and cut the curve into alphas and hooks."""
    hull = hull or hull_or_planar(curve.vertices, tol_scale)
    mask = hull.on_hull_mask
    if mask is None or len(mask) != len(curve):
        mask = on_hull_many(curve.vertices, hull)
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise AllInterior("no curve vertex lies on the hull boundary")
    d = _from_mask(curve, hull, mask, mask)
    log.debug(f"extracted {d.n} hooks, {len(d.point_components)} point components")
    return d


def merge_fragments(d: Decomposition, min_run: int = 2) -> Decomposition:
    """Absorb contact runs shorter than min_run vertices into the neighbouring hooks.

    At least one contact run always survives.
    """
    if d.n == 0:
        return d
    mask = d.on_hull_mask.copy()
    runs = _runs(mask)
    n = len(mask)
    lengths = [(e - s) % n + 1 for s, e in runs]
    if all(length >= min_run for length in lengths):
        return d
    keep = int(np.argmax(lengths))
    merged = mask.copy()
    for k, ((s, e), length) in enumerate(zip(runs, lengths)):
        if length < min_run and k != keep:
            merged[_cyclic_range(s, e, n)] = False
    out = _from_mask(d.curve, d.hull, d.on_hull_mask, merged)
    out.notes = list(d.notes) + [f"merged {d.n} hooks into {out.n} (min_run={min_run})"]
    log.debug(f"merge_fragments: {d.n} -> {out.n} hooks")
    return out


def _resample(points, spacing: float) -> np.ndarray:
    """Insert points so no segment exceeds spacing; original points kept exactly."""
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        k = max(1, int(np.ceil(np.linalg.norm(b - a) / spacing)))
        for s in range(1, k):
            out.append(a + (b - a) * (s / k))
        out.append(b)
    return np.array(out)


def _segments(poly):
    return poly[:-1], poly[1:]


def _conflicts(route, others, tol: float):
    """Closest non-incident segment pair within tol between route and others.

    Returns (which_other, route_segment, other_segment, point_on_other) or None.
    """
    rp, rq = _segments(route)
    best = None
    for o, other in enumerate(others):
        if len(other) < 2:
            continue
        op, oq = _segments(other)
        i = np.repeat(np.arange(len(rp)), len(op))
        j = np.tile(np.arange(len(op)), len(rp))
        dist, _, _, _, c2 = segment_segment_closest(rp[i], rq[i], op[j], oq[j])
        share = (
            np.all(rp[i] == op[j], axis=1) | np.all(rp[i] == oq[j], axis=1)
            | np.all(rq[i] == op[j], axis=1) | np.all(rq[i] == oq[j], axis=1)
        )
        hit = np.nonzero((dist <= tol) & ~share)[0]
        if len(hit):
            k = hit[np.argmin(dist[hit])]
            if best is None or dist[k] < best[4]:
                best = (o, int(i[k]), int(j[k]), c2[k], float(dist[k]))
    return None if best is None else best[:4]


def route_arcs(d: Decomposition, hull: ConvexHull = None, mode: str = "straight_preferred", config: SolverConfig = None) -> Decomposition:
    """Choose a hull arc l_i for every hook, inductively by start index.

    An arc that crosses an earlier arc or a contact arc is rerouted around
    the crossing up to route_retries times in either mode.
    """
    config = config or SolverConfig()
    hull = hull or d.hull
    d.route_mode = mode
    if d.n == 0:
        d.gamma_hat = [d.alphas[0].copy()]
        return d
    spacing = float(np.mean(d.curve.edge_lengths()))
    tol = hull.tol.surface
    edge_len = float(np.mean(np.linalg.norm(hull.vertices[hull.edges[:, 0]] - hull.vertices[hull.edges[:, 1]], axis=1))) if len(hull.edges) else spacing

    order = sorted(range(d.n), key=lambda k: d.hooks[k].start_vertex)
    placed = [a for a in d.alphas if len(a) >= 2]
    for k in order:
        hook = d.hooks[k]
        p, q = hook.endpoints
        for name, x in (("start", p), ("end", q)):
            if not on_hull(x, hull):
                raise RoutingFailed(f"hook {k} {name} point is off the hull")

        route = None
        if mode == "straight_preferred" and segment_on_hull(p, q, hull):
            route, kind = _resample(np.array([p, q]), spacing), "chord"
        else:
            if mode == "straight_preferred":
                log.info(f"[ROUTE] hook {k}: chord leaves the hull, falling back to a surface path")
            route, kind = _geodesic(hull, p, q, config.steiner_per_edge, None, spacing)

        conflict = _conflicts(route, placed, tol)
        attempt = 0
        removed = set()
        while conflict is not None and attempt < config.route_retries:
            attempt += 1
            radius = 0.5 * attempt * edge_len
            removed.update(path_nodes_near(hull, conflict[3], radius, config.steiner_per_edge))
            try:
                candidate, cand_kind = _geodesic(hull, p, q, config.steiner_per_edge, removed, spacing)
            except PointNotOnHull:
                log.info(f"[ROUTE] hook {k}: retry {attempt} found no path")
                continue
            cand_conflict = _conflicts(candidate, placed, tol)
            log.info(f"[ROUTE] hook {k}: retry {attempt} {'cleared' if cand_conflict is None else 'still crossing'}")
            route, kind, conflict = candidate, cand_kind + "-rerouted", cand_conflict
        if conflict is not None:
            d.multi_loop = True
            d.notes.append(f"hook {k}: routed arc crosses earlier arcs after {attempt} retries")
        route[0], route[-1] = p, q
        hook.route, hook.route_kind = route, kind
        placed.append(route)

    if d.multi_loop:
        _insert_crossings(d, tol)
    d.gamma_hat = split_loops(d.assemble(lambda i: "route"))
    if len(d.gamma_hat) > 1:
        d.multi_loop = True
        log.info(f"[ROUTE] gamma hat splits into {len(d.gamma_hat)} loops")
    return d


def _geodesic(hull, p, q, steiner, removed, spacing):
    path = surface_shortest_path(hull, p, q, steiner_per_edge=steiner, removed_nodes=removed)
    return _resample(path, spacing), "geodesic"


def _insert_point(poly, seg: int, x) -> np.ndarray:
    if np.array_equal(poly[seg], x) or np.array_equal(poly[seg + 1], x):
        return poly
    return np.vstack([poly[: seg + 1], x[None], poly[seg + 1:]])


def _insert_crossings(d: Decomposition, tol: float):
    """Give every crossing between routed arcs and contact arcs a shared vertex."""
    for _ in range(MAX_CROSSING_SPLITS):
        found = False
        for k, hook in enumerate(d.hooks):
            others = [("alpha", a) for a in range(len(d.alphas))] + [("route", j) for j in range(k)]
            polys = [d.alphas[a] if kind == "alpha" else d.hooks[a].route for kind, a in others]
            hit = _conflicts(hook.route, polys, tol)
            if hit is None:
                continue
            o, r_seg, o_seg, x = hit
            kind, a = others[o]
            if kind == "alpha":
                d.alphas[a] = _insert_point(d.alphas[a], o_seg, x)
            else:
                d.hooks[a].route = _insert_point(d.hooks[a].route, o_seg, x)
            # snap the route onto the shared point
            route = hook.route
            near = np.linalg.norm(route - x, axis=1)
            if near[r_seg] <= tol and 0 < r_seg:
                route = route.copy()
                route[r_seg] = x
            elif near[r_seg + 1] <= tol and r_seg + 1 < len(route) - 1:
                route = route.copy()
                route[r_seg + 1] = x
            else:
                route = _insert_point(route, r_seg, x)
            hook.route = route
            found = True
            break
        if not found:
            return
    log.warning("crossing insertion stopped at the split limit")


def split_loops(loop) -> list:
    """Split a closed polygon at repeated vertices into simple closed loops."""
    pts = np.asarray(loop, dtype=float)
    seen = {}
    for k, x in enumerate(map(tuple, pts)):
        if x in seen:
            i = seen[x]
            first = pts[i:k]
            second = np.vstack([pts[k:], pts[:i]])
            return split_loops(first) + split_loops(second)
        seen[x] = k
    return [pts]


def _cyclic_edges(loop) -> list:
    pts = [tuple(x) for x in loop]
    return [frozenset((a, b)) for a, b in zip(pts, pts[1:] + pts[:1]) if a != b]


def reconstruction_edges(gamma_hat, hook_curves, keep) -> set:
    """Edges of gamma hat and the closed hooks that appear an odd number of times.

    Routes cancel. Degree-two points outside `keep` (crossings inserted into
    contact arcs) are spliced out, so the result compares to the curve's edges.
    """
    odd = set()
    for loop in [*gamma_hat, *hook_curves]:
        for e in _cyclic_edges(loop):
            odd ^= {e}
    graph = nx.Graph()
    graph.add_edges_from(tuple(e) for e in odd)
    for node in list(graph.nodes):
        if node not in keep and graph.degree(node) == 2:
            a, b = graph.neighbors(node)
            graph.remove_node(node)
            graph.add_edge(a, b)
    return {frozenset(e) for e in graph.edges}


def build_hooks_and_gamma_hat(d: Decomposition) -> Decomposition:
    """Close every hook with its route and verify the reconstruction identity."""
    if not d.routed:
        raise RoutingFailed("hooks must be routed before closing them")
    d.hook_curves = []
    for hook in d.hooks:
        closed = hook.closed_curve
        report = validate_curve(JordanCurve(closed))
        if not report.simple or report.min_segment_length <= 0:
            raise HookNotSimple(f"hook {hook.index}: beta joined with its route self-intersects")
        d.hook_curves.append(closed)
    if not d.gamma_hat:
        d.gamma_hat = split_loops(d.assemble(lambda i: "route"))

    # closure of gamma hat minus the closed hooks is the input curve again
    expected = set(_cyclic_edges(d.curve.vertices))
    got = reconstruction_edges(d.gamma_hat, d.hook_curves, {tuple(x) for x in d.curve.vertices})
    if got != expected:
        raise HookNotSimple(f"reconstruction differs from the curve in {len(got ^ expected)} edges")
    return d


def build_signed_curves(d: Decomposition, side_assignment: dict) -> Decomposition:
    """Gamma-hat plus and minus: plus takes beta for I+ hooks and routes for I- hooks."""
    d.side_assignment = dict(side_assignment)
    if d.n == 0:
        d.gamma_hat_plus = [g.copy() for g in d.gamma_hat]
        d.gamma_hat_minus = [g.copy() for g in d.gamma_hat]
        return d
    plus = d.assemble(lambda i: "beta" if d.side_assignment.get(i) == "+" else "route")
    minus = d.assemble(lambda i: "beta" if d.side_assignment.get(i) == "-" else "route")
    d.gamma_hat_plus = split_loops(plus)
    d.gamma_hat_minus = split_loops(minus)
    return d


def decompose(curve: JordanCurve, config: SolverConfig = None, hull: ConvexHull = None) -> Decomposition:
    """extract, merge, route and close, as one call."""
    config = config or SolverConfig()
    hull = hull or hull_or_planar(curve.vertices, config.tol_scale)
    d = extract_gamma_star(curve, hull)
    d = merge_fragments(d, config.min_run)
    d = route_arcs(d, hull, config.route_mode, config)
    return build_hooks_and_gamma_hat(d)
