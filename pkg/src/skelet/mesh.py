"""OFF export of low-dimensional models.

Every cell chart is a lift of the cell into ``base x fiber`` coordinates.
Charts are split barycentrically, each triangle and segment is refined
``subdivisions`` more times, and the resulting points are identified by
their position in the actual space: fiber coordinates reduced mod 1 and,
for the quotient model, pushed to the fiber torus of the stratum the point
lies in.  This keeps the mesh simplicial even where the cell complex is not
regular (a one-vertex circle, the square torus).

Vertex ordering convention: vertices are sorted by their exact identity key
(base point, reduced fiber point); coordinates are the base point followed
by the fiber point padded with zeros to the lattice rank.  Files with
exactly three coordinates are written as ``OFF``, all others as ``nOFF``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .complex import RationalCellComplex
from .errors import DimensionTooHigh
from .fibers import restriction_map
from .polytope import minimal_face
from .rational import affine_coordinates, affine_rank, centroid, solve_combination
from .skeleton import HattedComplex, QuotientSkeletonModel, SkeletonModel
from .torus import TorusComplex

Pt = tuple[Fraction, ...]


@dataclass(frozen=True)
class Mesh:
    vertices: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int], ...]
    triangles: tuple[tuple[int, int, int], ...]

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)


def _mid(a: Pt, b: Pt) -> Pt:
    return tuple((x + y) / 2 for x, y in zip(a, b))


def _refine_triangle(t: tuple[Pt, Pt, Pt], k: int) -> list[tuple[Pt, Pt, Pt]]:
    out = [t]
    for _ in range(k):
        nxt = []
        for a, b, c in out:
            ab, bc, ca = _mid(a, b), _mid(b, c), _mid(c, a)
            nxt += [(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)]
        out = nxt
    return out


def _refine_segment(a: Pt, b: Pt, k: int) -> list[tuple[Pt, Pt]]:
    n = 2 ** k
    pts = [tuple(x + (y - x) * Fraction(i, n) for x, y in zip(a, b)) for i in range(n + 1)]
    return list(zip(pts, pts[1:]))


def _cyclic(points: list[Pt]) -> list[Pt]:
    """Extreme points of a planar convex polygon in cyclic order."""
    _, _, coords = affine_coordinates(points)
    c = centroid(coords)
    # angles only order the points; positions stay exact
    keyed = sorted(range(len(points)), key=lambda i: math.atan2(float(coords[i][1] - c[1]), float(coords[i][0] - c[0])))
    ring = [points[i] for i in keyed]
    out = []
    m = len(ring)
    for i in range(m):
        p, q, r = ring[i - 1], ring[i], ring[(i + 1) % m]
        if affine_rank([p, q, r]) == 2:
            out.append(q)
    return out


def _pieces(chart: Sequence[Pt], dim: int, k: int) -> tuple[list, list]:
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in chart))
    if dim == 0:
        return [], []
    if dim == 1:
        a, b = pts[0], pts[-1]
        m = _mid(a, b)
        return _refine_segment(a, m, k) + _refine_segment(m, b, k), []
    ring = _cyclic(pts)
    c = centroid(ring)
    tris = []
    for i in range(len(ring)):
        a, b = ring[i], ring[(i + 1) % len(ring)]
        m = _mid(a, b)
        tris += _refine_triangle((c, a, m), k) + _refine_triangle((c, m, b), k)
    return [], tris


def _torus_reduce(theta: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(x - math.floor(x) for x in theta)


def _normalizer(model) -> tuple[RationalCellComplex, Callable, int]:
    """The complex, a map (cell, chart point) -> (identity key, position), and the base rank."""
    if isinstance(model, TorusComplex):
        return model, (lambda cell, p: (_torus_reduce(p),) * 2), 0
    if isinstance(model, HattedComplex):
        T = model.triangulation

        def hk(cell, p):
            tau, d = cell.key
            mu = solve_combination(T.coords(tau), list(p))
            rho = tuple(i for i, m in zip(tau, mu) if m != 0)
            dd = d if rho == tau else restriction_map(T, tau, rho)(d)
            return (p, rho, dd), p
        return model.complex, hk, T.rank
    if isinstance(model, SkeletonModel):
        r = model.triangulation.rank

        def sk(cell, p):
            v = p[:r] + _torus_reduce(p[r:])
            return v, v
        return model.complex, sk, r
    if isinstance(model, QuotientSkeletonModel):
        T, K = model.triangulation, model.cone
        r = T.rank

        def qk(cell, p):
            s = cell.key[0]
            F = model.faces[s]
            x, psi = p[:r], p[r:]
            G = minimal_face(K, x)
            if G.id != F.id:
                rows = [list(b) for b in F.span_lattice_basis.entries]
                R = [solve_combination(rows, [Fraction(v) for v in b]) for b in G.span_lattice_basis.entries]
                psi = tuple(sum((a * y for a, y in zip(row, psi)), Fraction(0)) for row in R)
            red = _torus_reduce(psi)
            return (x, G.id, red), x + red + (Fraction(0),) * (r - len(red))
        return model.complex, qk, r
    if isinstance(model, RationalCellComplex):
        return model, (lambda cell, p: (tuple(p),) * 2), 0
    raise TypeError(f"cannot export {type(model).__name__}")


def _mixed(keys) -> bool:
    try:
        sorted(keys)
        return False
    except TypeError:
        return True


def build_mesh(model, subdivisions: int = 1) -> Mesh:
    C, key_of, r = _normalizer(model)
    if C.dimension > 2:
        raise DimensionTooHigh(f"model has dimension {C.dimension}; meshes support at most 2")
    keys: dict[tuple, int] = {}
    positions: dict[tuple, tuple] = {}

    def vid(cell, p):
        k, pos = key_of(cell, p)
        if k not in keys:
            keys[k] = len(keys)
            positions[k] = tuple(pos)
        return keys[k]

    edges: set[tuple[int, int]] = set()
    tris: set[tuple[int, int, int]] = set()
    for cell in C.cells:
        chart = [tuple(Fraction(x) for x in p) for p in cell.chart]
        if cell.dim == 0:
            vid(cell, chart[0])
            continue
        segs, ts = _pieces(chart, cell.dim, subdivisions)
        for a, b in segs:
            i, j = vid(cell, a), vid(cell, b)
            edges.add((min(i, j), max(i, j)))
        for a, b, c in ts:
            ids = sorted({vid(cell, a), vid(cell, b), vid(cell, c)})
            if len(ids) == 3:
                tris.add(tuple(ids))
                for x, y in ((0, 1), (1, 2), (0, 2)):
                    edges.add((ids[x], ids[y]))
    order = sorted(keys, key=repr) if _mixed(keys) else sorted(keys)
    renum = {keys[k]: i for i, k in enumerate(order)}
    width = max((len(positions[k]) for k in order), default=0)
    verts = tuple(positions[k] + (Fraction(0),) * (width - len(positions[k])) for k in order)
    E = tuple(sorted(tuple(sorted((renum[a], renum[b]))) for a, b in edges))
    F = tuple(sorted(tuple(sorted(renum[x] for x in t)) for t in tris))
    return Mesh(verts, E, F)


def _fmt(x: Fraction) -> str:
    return repr(float(x)) if x.denominator != 1 else str(x.numerator)


def export_mesh(model, path: str | Path, subdivisions: int = 1) -> Mesh:
    """Write an OFF mesh of a model of dimension at most 2 and return it.

    Triangles are written as 3-gons; edges that bound no triangle as 2-gons.
    """
    mesh = build_mesh(model, subdivisions)
    used = {e for t in mesh.triangles for e in ((t[0], t[1]), (t[1], t[2]), (t[0], t[2]))}
    loose = [e for e in mesh.edges if e not in used]
    dim = len(mesh.vertices[0]) if mesh.vertices else 3
    lines = []
    if dim == 3:
        lines.append("OFF")
    else:
        lines += ["nOFF", str(dim)]
    lines.append(f"{len(mesh.vertices)} {len(mesh.triangles) + len(loose)} {len(mesh.edges)}")
    for v in mesh.vertices:
        lines.append(" ".join(_fmt(x) for x in v))
    for t in mesh.triangles:
        lines.append("3 " + " ".join(map(str, t)))
    for e in loose:
        lines.append("2 " + " ".join(map(str, e)))
    Path(path).write_text("\n".join(lines) + "\n")
    return mesh
