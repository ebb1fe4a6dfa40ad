"""Geometric realization of oval forests on the unit 3-sphere.

Each oval (center c, radius r, winding a) becomes the closed curve

    t -> (c + r*exp(i t),  sqrt(1 - |z|^2) * exp(i (a t + phase)))

living on S^3 in C^2; a zero-radius oval is the vertical circle over its
center.  The curves are sampled as closed polygons, pushed through a
seeded stereographic projection, and scanned for segment crossings to
produce a bona fide diagram.  Degenerate projections (crossing too close
to a sample point, matched depths, near-parallel hits, pole on the link)
are rejected and retried with a fresh chart deterministically derived
from the seed.

Two orientation conventions are supported.  "ccw" traverses every oval
counterclockwise in the z-plane, matching the winding bookkeeping of the
splice tree.  "induced" reverses traversal on odd-depth ovals, which is
the boundary orientation the nested annuli induce.
"""

from __future__ import annotations

import math

import numpy as np

from .diagrams import Diagram
from .splice import Oval, OvalForest, OvalError


class EmbedError(RuntimeError):
    pass


class _RetryProjection(Exception):
    pass


_GOLDEN = 2.399963229728653  # angular spread for the w-phases


def auto_geometry(forest: OvalForest) -> OvalForest:
    """Fill in disk geometry for a forest given without it.

    Roots go on a circle around the origin (or at the origin when there is
    only one); children sit on a circle of 0.55 times the parent radius,
    shrunk by the sibling count.  Existing geometry is kept as-is.
    """
    if all(o.has_geometry for o in forest.ovals):
        check_geometry(forest)
        return forest

    placed: dict[int, tuple[float, float, float]] = {}

    def place_children(parent: Oval):
        cx, cy, r = placed[parent.ident]
        kids = forest.children(parent.ident)
        s = len(kids)
        if s == 0:
            return
        for k, o in enumerate(kids):
            if s == 1:
                x, y = cx, cy
            else:
                ang = 2 * math.pi * k / s
                x = cx + 0.55 * r * math.cos(ang)
                y = cy + 0.55 * r * math.sin(ang)
            placed[o.ident] = (x, y, 0.0 if o.is_fiber else 0.35 * r / s)
            place_children(o)

    roots = forest.roots()
    if len(roots) == 1:
        placed[roots[0].ident] = (0.0, 0.0, 0.0 if roots[0].is_fiber else 0.7)
    else:
        rr = min(0.25, 0.4 * math.sin(math.pi / len(roots)))
        for k, o in enumerate(roots):
            ang = 2 * math.pi * k / len(roots)
            placed[o.ident] = (0.5 * math.cos(ang), 0.5 * math.sin(ang),
                              0.0 if o.is_fiber else rr)
    for r in roots:
        place_children(r)
    out = OvalForest([Oval(o.ident, o.parent, o.winding, o.fiber,
                           placed[o.ident][0], placed[o.ident][1], placed[o.ident][2])
                      for o in forest.ovals])
    check_geometry(out)
    return out


def check_geometry(forest: OvalForest):
    """Disks must respect the nesting combinatorics and stay strictly
    inside the unit circle."""
    for o in forest.ovals:
        if not o.has_geometry:
            raise OvalError("oval %d has no geometry" % o.ident)
        d = math.hypot(o.cx, o.cy)
        if d + o.r >= 0.995:
            raise OvalError("oval %d touches the unit circle" % o.ident)
        if o.parent != 0:
            p = forest.by_id(o.parent)
            dp = math.hypot(o.cx - p.cx, o.cy - p.cy)
            if dp + o.r >= p.r - 1e-9:
                raise OvalError("oval %d leaves its parent disk" % o.ident)
    sibs: dict[int, list[Oval]] = {}
    for o in forest.ovals:
        sibs.setdefault(o.parent, []).append(o)
    for group in sibs.values():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                d = math.hypot(a.cx - b.cx, a.cy - b.cy)
                if d <= a.r + b.r + 1e-9:
                    raise OvalError("ovals %d and %d overlap" % (a.ident, b.ident))


def parametrize(forest: OvalForest, orientation: str = "ccw",
                samples_scale: int = 1) -> list[tuple[int, np.ndarray]]:
    """Sample every oval as a closed polygon on S^3.

    Returns (oval id, points) pairs in id order; points are rows
    (Re z, Im z, Re w, Im w).
    """
    if orientation not in ("ccw", "induced"):
        raise ValueError("orientation must be 'ccw' or 'induced'")
    check_geometry(forest)
    out = []
    for ident in forest.ids():
        o = forest.by_id(ident)
        a = o.winding
        sgn = 1
        if orientation == "induced" and forest.depth(ident) % 2 == 1:
            sgn = -1
        m = max(256, 64 * (1 + abs(a))) * samples_scale
        t = np.linspace(0.0, 2 * math.pi, m, endpoint=False)
        z = (o.cx + 1j * o.cy) + o.r * np.exp(1j * sgn * t)
        rho = np.sqrt(np.maximum(0.0, 1.0 - np.abs(z) ** 2))
        w = rho * np.exp(1j * (a * sgn * t + _GOLDEN * ident))
        out.append((ident, np.column_stack([z.real, z.imag, w.real, w.imag])))
    return out


def _chart(seed: int, attempt: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([977, seed, attempt])
    pole = rng.normal(size=4)
    pole /= np.linalg.norm(pole)
    mat = rng.normal(size=(4, 4))
    mat[:, 0] = pole
    q, _ = np.linalg.qr(mat)
    if np.dot(q[:, 0], pole) < 0:
        q = -q
    # pin the chart handedness so crossing signs cannot flip between seeds
    if np.linalg.det(q) < 0:
        q[:, 3] = -q[:, 3]
    return pole, q[:, 1:]


def _project(curves: list[tuple[int, np.ndarray]], pole: np.ndarray,
             frame: np.ndarray) -> list[tuple[int, np.ndarray]]:
    out = []
    for ident, pts in curves:
        u = pts @ pole
        if np.max(u) > 0.995:
            raise _RetryProjection("pole too close to the link")
        proj = (pts @ frame) / (1.0 - u)[:, None]
        out.append((ident, proj))
    return out


def _segment_crossings(pa: np.ndarray, pb: np.ndarray, same: bool):
    """All transverse crossings between closed polygons pa, pb in the
    plane (first two columns); third column is depth.  Yields tuples
    (i, s, j, t, depth_a, depth_b, da, db) with da/db the plane tangents.
    Raises _RetryProjection on any borderline hit."""
    a0 = pa[:, :2]
    a1 = np.roll(pa[:, :2], -1, axis=0)
    b0 = pb[:, :2]
    b1 = np.roll(pb[:, :2], -1, axis=0)
    da = a1 - a0
    db = b1 - b0
    na, nb = len(a0), len(b0)
    det = da[:, None, 0] * db[None, :, 1] - da[:, None, 1] * db[None, :, 0]
    diff0 = b0[None, :, 0] - a0[:, None, 0]
    diff1 = b0[None, :, 1] - a0[:, None, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (diff0 * db[None, :, 1] - diff1 * db[None, :, 0]) / det
        t = (diff0 * da[:, None, 1] - diff1 * da[:, None, 0]) / det
    ok = np.abs(det) > 1e-12
    hit = ok & (s > -1e-7) & (s < 1 + 1e-7) & (t > -1e-7) & (t < 1 + 1e-7)
    if same:
        ii, jj = np.meshgrid(np.arange(na), np.arange(nb), indexing="ij")
        gap = (jj - ii) % na
        hit &= (gap != 0) & (gap != 1) & (gap != na - 1)
    pairs = np.argwhere(hit)
    eps = 1e-6
    results = []
    for i, j in pairs:
        if same and i > j:
            continue
        si, tj = s[i, j], t[i, j]
        if si < eps or si > 1 - eps or tj < eps or tj > 1 - eps:
            raise _RetryProjection("crossing too close to a sample point")
        depth_a = pa[i, 2] + si * (pa[(i + 1) % na, 2] - pa[i, 2])
        depth_b = pb[j, 2] + tj * (pb[(j + 1) % nb, 2] - pb[j, 2])
        if abs(depth_a - depth_b) < 1e-8:
            raise _RetryProjection("matched depths at a crossing")
        results.append((int(i), float(si), int(j), float(tj),
                        float(depth_a), float(depth_b), da[i], db[j]))
    # near-parallel overlapping segments that produced no solvable hit
    close = ~ok & (np.abs(diff0) < 2e-2) & (np.abs(diff1) < 2e-2)
    if same:
        close &= (np.abs(np.arange(na)[:, None] - np.arange(nb)[None, :]) > 1) \
            & (np.abs(np.arange(na)[:, None] - np.arange(nb)[None, :]) < na - 1)
    if np.any(close):
        raise _RetryProjection("near-parallel segments")
    return results


def diagram_of_projection(proj: list[tuple[int, np.ndarray]]) -> tuple[Diagram, list[int]]:
    """Turn projected polygons into a crossing diagram.

    Returns the diagram plus the oval ids of its components in component
    order (curves without crossings become free loops, listed last).
    """
    events: dict[int, list] = {ident: [] for ident, _ in proj}
    crossings_raw = []
    for x in range(len(proj)):
        for y in range(x, len(proj)):
            ia, pa = proj[x]
            ib, pb = proj[y]
            for (i, s, j, t, dpa, dpb, da, db) in _segment_crossings(pa, pb, x == y):
                cid = len(crossings_raw)
                if dpa > dpb:
                    over, under = (ia, i + s, da), (ib, j + t, db)
                else:
                    over, under = (ib, j + t, db), (ia, i + s, da)
                # sign convention pinned so a +1 winding fiber pair links +1
                sign = -1 if (over[2][0] * under[2][1] - over[2][1] * under[2][0]) > 0 else 1
                crossings_raw.append({"sign": sign})
                events[over[0]].append((over[1], cid, "over"))
                events[under[0]].append((under[1], cid, "under"))
    arc = 0
    components = []
    comp_ids = []
    slots = [dict() for _ in crossings_raw]
    for ident, _ in proj:
        evs = sorted(events[ident])
        if not evs:
            continue
        comp_arcs = []
        n = len(evs)
        first_arc = arc + 1
        for k, (_, cid, role) in enumerate(evs):
            incoming = arc + 1 + k
            outgoing = first_arc + (k + 1) % n
            comp_arcs.append(incoming)
            if role == "over":
                slots[cid]["oi"] = incoming
                slots[cid]["oo"] = outgoing
            else:
                slots[cid]["ui"] = incoming
                slots[cid]["uo"] = outgoing
        arc += n
        components.append(comp_arcs)
        comp_ids.append(ident)
    free = [ident for ident, _ in proj if not events[ident]]
    crossings = [(s["ui"], s["uo"], s["oi"], s["oo"], crossings_raw[k]["sign"])
                 for k, s in enumerate(slots)]
    diag = Diagram(crossings, components, free_loops=len(free))
    return diag, comp_ids + free


def oval_link_pd(forest: OvalForest, orientation: str = "ccw", seed: int = 0,
                 samples_scale: int = 1, attempts: int = 64) -> tuple[Diagram, list[int]]:
    """Diagram of the realized forest, retrying charts until the
    projection is generic."""
    forest = auto_geometry(forest)
    curves = parametrize(forest, orientation, samples_scale)
    last = None
    for attempt in range(attempts):
        pole, frame = _chart(seed, attempt)
        try:
            proj = _project(curves, pole, frame)
            return diagram_of_projection(proj)
        except _RetryProjection as exc:
            last = exc
    raise EmbedError("no generic projection found after %d charts: %s" % (attempts, last))


def oval_link_lk(forest: OvalForest, orientation: str = "ccw", seed: int = 0,
                 samples_scale: int = 1) -> tuple[list[int], list[list[int]]]:
    """Linking matrix of the realized forest, rows in oval id order."""
    from .diagrams import linking_matrix
    diag, ids = oval_link_pd(forest, orientation, seed, samples_scale)
    raw = linking_matrix(diag)
    order = sorted(range(len(ids)), key=lambda k: ids[k])
    return ([ids[k] for k in order],
            [[raw[a][b] for b in order] for a in order])


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#17becf", "#7f7f7f"]


def render_svg(forest: OvalForest, orientation: str = "ccw", seed: int = 0,
               samples_scale: int = 1, size: int = 480) -> str:
    """Plain SVG of the projected diagram; under-strands get a small gap."""
    forest = auto_geometry(forest)
    curves = parametrize(forest, orientation, samples_scale)
    proj = None
    for attempt in range(64):
        pole, frame = _chart(seed, attempt)
        try:
            pr = _project(curves, pole, frame)
            diagram_of_projection(pr)  # only to validate genericity
            proj = pr
            break
        except _RetryProjection:
            continue
    if proj is None:
        raise EmbedError("no generic projection found")
    allpts = np.vstack([p[:, :2] for _, p in proj])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.06 * span

    def sx(v):
        return (v[0] - lo[0] + pad) / (span + 2 * pad) * size

    def sy(v):
        return size - (v[1] - lo[1] + pad) / (span + 2 * pad) * size

    parts = ['<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d">' % (size, size),
             '<rect width="100%" height="100%" fill="white"/>']
    order = np.argsort([np.mean(p[:, 2]) for _, p in proj])
    for rank, k in enumerate(order):
        ident, p = proj[k]
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join("%.2f,%.2f" % (sx(v), sy(v)) for v in p)
        halo = '<polygon points="%s" fill="none" stroke="white" stroke-width="6"/>' % pts
        line = '<polygon points="%s" fill="none" stroke="%s" stroke-width="2"><title>%d</title></polygon>' % (pts, color, ident)
        parts.append(halo)
        parts.append(line)
    parts.append("</svg>")
    return "\n".join(parts)
