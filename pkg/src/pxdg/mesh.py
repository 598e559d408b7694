"""Uniform rectangular meshes: elements, edges, normals, penalty weights.

Element indexing is row-major (index = j*nx + i). Interior edges are
enumerated vertical-first then horizontal; boundary edges counterclockwise
starting from the bottom. The unit normal of an interior edge points from
the lower-indexed neighbor (the plus element) to the higher-indexed one.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Domain",
    "Element",
    "Edge",
    "Mesh",
    "build_uniform_mesh",
    "edge_weight",
    "edge_weights",
    "write_mesh_csv",
]


@dataclass(frozen=True)
class Domain:
    """Axis-aligned rectangular domain."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("domain must satisfy x_min < x_max and y_min < y_max")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)


@dataclass(frozen=True)
class Element:
    """Rectangular cell with precomputed geometry."""

    index: int
    bounds: tuple  # (x_min, x_max, y_min, y_max)
    area: float
    barycenter: tuple
    diameter: float


@dataclass(frozen=True)
class Edge:
    """Straight mesh edge; minus_element is None on the boundary."""

    index: int
    endpoints: tuple  # ((x0, y0), (x1, y1))
    length: float
    diameter: float
    plus_element: int
    minus_element: int | None
    nu_plus: tuple

    @property
    def is_boundary(self) -> bool:
        return self.minus_element is None

    @property
    def midpoint(self) -> tuple:
        (x0, y0), (x1, y1) = self.endpoints
        return (0.5 * (x0 + x1), 0.5 * (y0 + y1))


@dataclass
class Mesh:
    """Uniform nx-by-ny partition with flat arrays for vectorized assembly.

    Array fields mirror the Element/Edge lists: interior edge k joins
    int_plus[k] and int_minus[k] with unit normal int_normal[k]; boundary
    edge k lies on element bnd_element[k] with outward normal bnd_normal[k]
    and endpoints bnd_p0[k], bnd_p1[k].
    """

    domain: Domain
    nx: int
    ny: int
    elements: list = field(repr=False)
    interior_edges: list = field(repr=False)
    boundary_edges: list = field(repr=False)
    dx: float = field(repr=False, default=0.0)
    dy: float = field(repr=False, default=0.0)
    areas: np.ndarray = field(repr=False, default=None)
    barycenters: np.ndarray = field(repr=False, default=None)
    int_plus: np.ndarray = field(repr=False, default=None)
    int_minus: np.ndarray = field(repr=False, default=None)
    int_length: np.ndarray = field(repr=False, default=None)
    int_normal: np.ndarray = field(repr=False, default=None)
    int_mid: np.ndarray = field(repr=False, default=None)
    bnd_element: np.ndarray = field(repr=False, default=None)
    bnd_length: np.ndarray = field(repr=False, default=None)
    bnd_mid: np.ndarray = field(repr=False, default=None)
    bnd_p0: np.ndarray = field(repr=False, default=None)
    bnd_p1: np.ndarray = field(repr=False, default=None)

    @property
    def n_elements(self) -> int:
        return self.nx * self.ny

    def element_edges(self, index: int) -> list:
        """Indices into interior_edges + boundary_edges incident to an element.

        Boundary edges are offset by len(interior_edges) so indices are unique.
        """
        self._build_incidence()
        return self._incidence[index]

    def _build_incidence(self):
        if hasattr(self, "_incidence"):
            return
        inc = [[] for _ in range(self.n_elements)]
        for e in self.interior_edges:
            inc[e.plus_element].append(e.index)
            inc[e.minus_element].append(e.index)
        off = len(self.interior_edges)
        for e in self.boundary_edges:
            inc[e.plus_element].append(off + e.index)
        self._incidence = inc


def build_uniform_mesh(domain: Domain, nx: int, ny: int) -> Mesh:
    """Partition the domain into nx*ny equal rectangles."""
    if nx < 1 or ny < 1:
        raise ValueError("element counts must be positive")
    dx = (domain.x_max - domain.x_min) / nx
    dy = (domain.y_max - domain.y_min) / ny
    x0, y0 = domain.x_min, domain.y_min
    diam = float(np.hypot(dx, dy))
    area = dx * dy

    elements = []
    for j in range(ny):
        for i in range(nx):
            k = j * nx + i
            bx0, by0 = x0 + i * dx, y0 + j * dy
            elements.append(Element(
                index=k,
                bounds=(bx0, bx0 + dx, by0, by0 + dy),
                area=area,
                barycenter=(bx0 + 0.5 * dx, by0 + 0.5 * dy),
                diameter=diam,
            ))
    bary = np.array([e.barycenter for e in elements])

    interior = []
    for j in range(ny):  # vertical interior edges
        for i in range(nx - 1):
            xe = x0 + (i + 1) * dx
            interior.append(Edge(
                index=len(interior),
                endpoints=((xe, y0 + j * dy), (xe, y0 + (j + 1) * dy)),
                length=dy, diameter=dy,
                plus_element=j * nx + i, minus_element=j * nx + i + 1,
                nu_plus=(1.0, 0.0),
            ))
    for j in range(ny - 1):  # horizontal interior edges
        for i in range(nx):
            ye = y0 + (j + 1) * dy
            interior.append(Edge(
                index=len(interior),
                endpoints=((x0 + i * dx, ye), (x0 + (i + 1) * dx, ye)),
                length=dx, diameter=dx,
                plus_element=j * nx + i, minus_element=(j + 1) * nx + i,
                nu_plus=(0.0, 1.0),
            ))

    boundary = []

    def bedge(p0, p1, elem, nu):
        length = float(np.hypot(p1[0] - p0[0], p1[1] - p0[1]))
        boundary.append(Edge(
            index=len(boundary), endpoints=(p0, p1), length=length,
            diameter=length, plus_element=elem, minus_element=None, nu_plus=nu,
        ))

    for i in range(nx):  # bottom, left to right
        bedge((x0 + i * dx, y0), (x0 + (i + 1) * dx, y0), i, (0.0, -1.0))
    for j in range(ny):  # right, bottom to top
        xr = domain.x_max
        bedge((xr, y0 + j * dy), (xr, y0 + (j + 1) * dy), j * nx + nx - 1, (1.0, 0.0))
    for i in range(nx - 1, -1, -1):  # top, right to left
        yt = domain.y_max
        bedge((x0 + (i + 1) * dx, yt), (x0 + i * dx, yt), (ny - 1) * nx + i, (0.0, 1.0))
    for j in range(ny - 1, -1, -1):  # left, top to bottom
        bedge((x0, y0 + (j + 1) * dy), (x0, y0 + j * dy), j * nx, (-1.0, 0.0))

    mesh = Mesh(
        domain=domain, nx=nx, ny=ny,
        elements=elements, interior_edges=interior, boundary_edges=boundary,
        dx=dx, dy=dy,
        areas=np.full(nx * ny, area),
        barycenters=bary,
        int_plus=np.array([e.plus_element for e in interior], dtype=int),
        int_minus=np.array([e.minus_element for e in interior], dtype=int),
        int_length=np.array([e.length for e in interior]),
        int_normal=np.array([e.nu_plus for e in interior]).reshape(-1, 2),
        int_mid=np.array([e.midpoint for e in interior]).reshape(-1, 2),
        bnd_element=np.array([e.plus_element for e in boundary], dtype=int),
        bnd_length=np.array([e.length for e in boundary]),
        bnd_mid=np.array([e.midpoint for e in boundary]),
        bnd_p0=np.array([e.endpoints[0] for e in boundary]),
        bnd_p1=np.array([e.endpoints[1] for e in boundary]),
    )
    return mesh


def edge_weight(edge: Edge, exponent) -> float:
    """Penalty weight diam(e)^(-2/p'(x_e)) with p' conjugate at the midpoint."""
    xm, ym = edge.midpoint
    pv = float(exponent(xm, ym))
    return float(edge.diameter ** (-2.0 * (pv - 1.0) / pv))


def edge_weights(mesh: Mesh, exponent) -> tuple:
    """Vectorized penalty weights for all (interior, boundary) edges."""
    p_int = np.asarray(exponent(mesh.int_mid[:, 0], mesh.int_mid[:, 1]), float)
    p_bnd = np.asarray(exponent(mesh.bnd_mid[:, 0], mesh.bnd_mid[:, 1]), float)
    w_int = mesh.int_length ** (-2.0 * (p_int - 1.0) / p_int)
    w_bnd = mesh.bnd_length ** (-2.0 * (p_bnd - 1.0) / p_bnd)
    return w_int, w_bnd


def write_mesh_csv(mesh: Mesh, path) -> None:
    """Dump elements then edges for debugging."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["element_index", "x_min", "x_max", "y_min", "y_max"])
        for e in mesh.elements:
            out.writerow([e.index, *("%.12g" % v for v in e.bounds)])
        out.writerow(["edge_index", "kind", "plus", "minus", "length"])
        for e in mesh.interior_edges:
            out.writerow([e.index, "interior", e.plus_element, e.minus_element,
                          "%.12g" % e.length])
        for e in mesh.boundary_edges:
            out.writerow([e.index, "boundary", e.plus_element, "",
                          "%.12g" % e.length])
