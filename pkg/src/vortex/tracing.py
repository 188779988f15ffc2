from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from src.fields.models import Grid3, RSField
from src.vortex.models import NullFieldError, VortexLine, VortexLineSet, VortexScalarField

logger = logging.getLogger(__name__)

DEGENERACY_RATIO = 1e-12
# bilinear roots this far outside the unit face are reported and clipped
_CLIP_SLACK = 1e-6
# face windings are read from W plus this fixed complex offset (relative to max |W|)
# so that exact node zeros and real-valued face planes get a definite winding
_LIFT = 1e-12
_LIFT_PHASE = 0.6180339887

Sampler = Callable[[np.ndarray], np.ndarray]


def vortex_scalar(f: RSField) -> VortexScalarField:
    """W = F.F without conjugation; flagged degenerate when it is numerically null."""
    W = np.sum(f.F * f.F, axis=-1)
    scale = float(np.mean(np.sum(np.abs(f.F) ** 2, axis=-1)))
    degenerate = bool(np.median(np.abs(W)) <= DEGENERACY_RATIO * scale)
    if degenerate:
        logger.info("F.F vanishes on %s: null field", f.grid.shape)
    return VortexScalarField(grid=f.grid, W=W, degenerate=degenerate, scale=scale)


# ── Face detection ────────────────────────────────────────────────────

# For a face normal to ``axis`` the loop runs along (first, second) with
# first x second = +axis, so a positive winding is flux along +axis.
_FACE_AXES = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


@dataclass(frozen=True)
class _Piercings:
    axis: int
    index: np.ndarray  # (n, 3) lower corner of each pierced face
    winding: np.ndarray  # (n,)
    point: np.ndarray  # (n, 3)


def _corner(W: np.ndarray, axis: int, du: int, dv: int) -> np.ndarray:
    """Corner (du, dv) of every face normal to ``axis``, on the face-lower-corner index grid."""
    first, second = _FACE_AXES[axis]
    shift = [0, 0, 0]
    shift[first], shift[second] = du, dv
    slices = []
    for d in range(3):
        n = W.shape[d]
        if d in (first, second):
            slices.append(slice(shift[d], n - 1 + shift[d]))
        else:
            slices.append(slice(0, n))
    return W[tuple(slices)]


def _bilinear_root(c0, c1, c2, c3) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Zero of c0(1-u)(1-v) + c1 u(1-v) + c2 u v + c3 (1-u) v on the unit square.

    Writing W = P(v) + Q(v) u, u is real only where Im(P conj Q) = 0, a
    quadratic in v. Returns (u, v, clipped).
    """
    A, B, C, D = c0, c1 - c0, c3 - c0, c0 - c1 + c2 - c3
    qa = np.imag(C * np.conj(D))
    qb = np.imag(A * np.conj(D)) + np.imag(C * np.conj(B))
    qc = np.imag(A * np.conj(B))

    n = len(c0)
    candidates = np.full((n, 2), np.nan)
    linear = np.abs(qa) <= 1e-14 * (np.abs(qb) + np.abs(qc) + 1e-300)
    with np.errstate(divide="ignore", invalid="ignore"):
        candidates[linear, 0] = -qc[linear] / qb[linear]
        disc = qb * qb - 4.0 * qa * qc
        root = np.sqrt(np.maximum(disc, 0.0))
        quad = ~linear
        candidates[quad, 0] = (-qb[quad] + root[quad]) / (2.0 * qa[quad])
        candidates[quad, 1] = (-qb[quad] - root[quad]) / (2.0 * qa[quad])

    def u_of(v: np.ndarray) -> np.ndarray:
        P = A + C * v
        Q = B + D * v
        with np.errstate(divide="ignore", invalid="ignore"):
            return -np.real(P * np.conj(Q)) / np.abs(Q) ** 2

    us = np.stack([u_of(candidates[:, 0]), u_of(candidates[:, 1])], axis=1)

    def outside(x: np.ndarray) -> np.ndarray:
        return np.maximum(np.maximum(-x, x - 1.0), 0.0)

    badness = outside(candidates) + outside(us)
    badness[~np.isfinite(badness)] = np.inf
    best = np.argmin(badness, axis=1)
    rows = np.arange(n)
    u = us[rows, best]
    v = candidates[rows, best]
    missing = ~np.isfinite(badness[rows, best])
    u[missing] = 0.5
    v[missing] = 0.5
    clipped = missing | (badness[rows, best] > _CLIP_SLACK)
    return np.clip(u, 0.0, 1.0), np.clip(v, 0.0, 1.0), clipped


def _detect_faces(W: np.ndarray, grid: Grid3, axis: int) -> _Piercings:
    c0 = _corner(W, axis, 0, 0)
    c1 = _corner(W, axis, 1, 0)
    c2 = _corner(W, axis, 1, 1)
    c3 = _corner(W, axis, 0, 1)

    turns = (
        np.angle(c1 * np.conj(c0))
        + np.angle(c2 * np.conj(c1))
        + np.angle(c3 * np.conj(c2))
        + np.angle(c0 * np.conj(c3))
    )
    winding = np.rint(turns / (2.0 * np.pi)).astype(int)
    index = np.argwhere(winding != 0)
    first, second = _FACE_AXES[axis]
    if len(index) == 0:
        return _Piercings(axis, index, np.zeros(0, dtype=int), np.zeros((0, 3)))

    picks = tuple(index.T)
    u, v, clipped = _bilinear_root(c0[picks], c1[picks], c2[picks], c3[picks])
    if np.any(clipped):
        logger.warning(
            "%d of %d pierced faces normal to axis %d needed a clipped root",
            int(np.sum(clipped)),
            len(index),
            axis,
        )
    spacing = np.asarray(grid.spacing)
    point = np.asarray(grid.origin) + index * spacing
    point[:, first] += u * spacing[first]
    point[:, second] += v * spacing[second]
    return _Piercings(axis, index, winding[picks], point)


# ── Linking ───────────────────────────────────────────────────────────


def _adjacent_cells(axis: int, index: np.ndarray, shape: tuple[int, int, int]):
    """Yield (cell, outflow sign) for the interior cells sharing a face."""
    below = index.copy()
    below[axis] -= 1
    for cell, outflow in ((below, 1), (index, -1)):
        if all(0 <= cell[d] < shape[d] - 1 for d in range(3)):
            yield tuple(int(c) for c in cell), outflow


def _link(piercings: list[_Piercings], shape: tuple[int, int, int]):
    """Nodes (one per unit of winding) and the edges joining them through cells."""
    points: list[np.ndarray] = []
    by_cell: dict[tuple[int, int, int], list[tuple[int, int]]] = defaultdict(list)
    for group in piercings:
        for idx, n, p in zip(group.index, group.winding, group.point):
            for _ in range(abs(int(n))):
                node = len(points)
                points.append(p)
                for cell, outflow in _adjacent_cells(group.axis, idx, shape):
                    by_cell[cell].append((node, outflow * int(np.sign(n))))

    edges: list[tuple[int, int]] = []
    unbalanced = 0
    for members in by_cell.values():
        entries = [node for node, flow in members if flow < 0]
        exits = [node for node, flow in members if flow > 0]
        if len(entries) != len(exits):
            unbalanced += 1
        while entries and exits:
            # nearest exit for each entry
            e = entries.pop()
            dists = [np.linalg.norm(points[e] - points[x]) for x in exits]
            edges.append((e, exits.pop(int(np.argmin(dists)))))
    if unbalanced:
        logger.warning("%d cells had unbalanced vortex flux", unbalanced)
    return points, edges


def _walk(num_nodes: int, edges: list[tuple[int, int]]) -> list[tuple[list[int], bool]]:
    """Split the linked nodes into ordered chains; open chains first, then loops."""
    successor: dict[int, int] = {}
    predecessor: dict[int, int] = {}
    for a, b in edges:
        successor[a] = b
        predecessor[b] = a

    seen = [False] * num_nodes
    chains: list[tuple[list[int], bool]] = []
    for start in range(num_nodes):
        if seen[start] or start in predecessor:
            continue
        chain = [start]
        seen[start] = True
        while chain[-1] in successor and not seen[successor[chain[-1]]]:
            chain.append(successor[chain[-1]])
            seen[chain[-1]] = True
        chains.append((chain, False))
    for start in range(num_nodes):
        if seen[start]:
            continue
        chain = [start]
        seen[start] = True
        while not seen[successor[chain[-1]]]:
            chain.append(successor[chain[-1]])
            seen[chain[-1]] = True
        chains.append((chain, True))
    return chains


# ── Residuals and refinement ──────────────────────────────────────────


def _trilinear(W: np.ndarray, grid: Grid3, points: np.ndarray) -> np.ndarray:
    s = (points - np.asarray(grid.origin)) / np.asarray(grid.spacing)
    lo = np.clip(np.floor(s).astype(int), 0, np.asarray(W.shape) - 2)
    t = s - lo
    out = np.zeros(len(points), dtype=np.complex128)
    for dx in (0, 1):
        for dy in (0, 1):
            for dz in (0, 1):
                weight = (
                    (t[:, 0] if dx else 1 - t[:, 0])
                    * (t[:, 1] if dy else 1 - t[:, 1])
                    * (t[:, 2] if dz else 1 - t[:, 2])
                )
                out += weight * W[lo[:, 0] + dx, lo[:, 1] + dy, lo[:, 2] + dz]
    return out


def _newton_in_face(points: np.ndarray, axes: np.ndarray, sampler: Sampler, step: float) -> np.ndarray:
    """One Newton step on (Re W, Im W) = 0 within each vertex's face plane."""
    first = np.eye(3)[[_FACE_AXES[a][0] for a in axes]]
    second = np.eye(3)[[_FACE_AXES[a][1] for a in axes]]
    w0 = sampler(points)
    wu = (sampler(points + step * first) - sampler(points - step * first)) / (2.0 * step)
    wv = (sampler(points + step * second) - sampler(points - step * second)) / (2.0 * step)
    det = wu.real * wv.imag - wv.real * wu.imag
    ok = np.abs(det) > 1e-300
    safe = np.where(ok, det, 1.0)
    du = np.where(ok, -(wv.imag * w0.real - wv.real * w0.imag) / safe, 0.0)
    dv = np.where(ok, -(-wu.imag * w0.real + wu.real * w0.imag) / safe, 0.0)
    # at most half a cell per component
    limit = step * 10.0
    du = np.clip(du, -limit, limit)
    dv = np.clip(dv, -limit, limit)
    return points + du[:, None] * first + dv[:, None] * second


def trace_vortex_lines(
    w: VortexScalarField,
    sampler: Sampler | None = None,
    refine: bool = False,
) -> VortexLineSet:
    """Polylines through the zeros of W.

    A face of the grid is pierced when the phase of W winds around it; the
    crossing point is the zero of the bilinear interpolant on that face.
    Pierced faces of each cell are joined entry to exit. ``sampler`` maps
    points (n, 3) to exact W values; without it the trilinear interpolant of
    the grid samples is used. It supplies the vertex residuals and, with
    ``refine``, one Newton step per vertex.
    """
    if w.degenerate:
        raise NullFieldError(
            "F.F vanishes identically (null field); vortex lines are not isolated"
        )
    grid = w.grid
    lifted = w.W + _LIFT * float(np.max(np.abs(w.W))) * np.exp(1j * _LIFT_PHASE)
    piercings = [_detect_faces(lifted, grid, axis) for axis in range(3)]
    points, edges = _link(piercings, grid.shape)
    node_axes = np.array(
        [g.axis for g in piercings for n in g.winding for _ in range(abs(int(n)))], dtype=int
    )

    if sampler is None:
        def sampler(p: np.ndarray) -> np.ndarray:
            return _trilinear(w.W, grid, p)

    coords = np.array(points).reshape(-1, 3)
    if refine and len(coords):
        coords = _newton_in_face(coords, node_axes, sampler, 0.05 * min(grid.spacing))
    if len(coords):
        residuals = np.abs(sampler(coords))
    else:
        residuals = np.zeros(0)

    lines = [
        VortexLine(points=coords[chain], residuals=residuals[chain], closed=closed)
        for chain, closed in _walk(len(coords), edges)
    ]
    logger.info("Traced %d vortex lines through %d pierced faces", len(lines), len(coords))
    return VortexLineSet(grid=grid, lines=lines, scale=w.scale)
