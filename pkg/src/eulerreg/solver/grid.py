"""Uniform Cartesian grids and grid-sampled conserved fields."""

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence, Tuple

import numpy as np

BOUNDARIES = ("periodic", "farfield")


@dataclass(frozen=True)
class Grid:
    """Cell-centred uniform grid in 1 or 2 dimensions.

    ``boundary="farfield"`` clamps one layer of ghost cells to the initial
    state next to the boundary (constant states at infinity).
    """

    n: Tuple[int, ...]
    extent: Tuple[Tuple[float, float], ...]
    boundary: str = "periodic"

    def __post_init__(self):
        n = tuple(int(v) for v in np.atleast_1d(self.n))
        ext = self.extent
        if np.ndim(ext) == 1:
            ext = (tuple(ext),)
        ext = tuple((float(lo), float(hi)) for lo, hi in ext)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "extent", ext)
        if len(n) not in (1, 2) or len(ext) != len(n):
            raise ValueError("grid must be 1D or 2D with one extent per axis")
        if min(n) < 4:
            raise ValueError("need at least 4 cells per axis")
        if any(hi <= lo for lo, hi in ext):
            raise ValueError("extent must satisfy hi > lo")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")

    @property
    def dim(self):
        return len(self.n)

    @property
    def h(self):
        return tuple((hi - lo) / n for (lo, hi), n in zip(self.extent, self.n))

    @property
    def shape(self):
        return self.n

    def centers(self, axis=0):
        lo, _ = self.extent[axis]
        return lo + (np.arange(self.n[axis]) + 0.5) * self.h[axis]

    def mesh(self):
        """Cell-centre coordinate arrays, one per axis (``indexing='ij'``)."""
        return np.meshgrid(*(self.centers(k) for k in range(self.dim)), indexing="ij")

    def refined(self, factor=2):
        return Grid(tuple(n * factor for n in self.n), self.extent, self.boundary)

    @property
    def cell_volume(self):
        return float(np.prod(self.h))


@dataclass
class ConservedField:
    """Conserved variables (rho, m_1..m_dim, E) on a grid at time ``t``.

    ``U`` has shape ``(dim + 2,) + grid.n``. ``far`` is the state whose
    boundary cells feed the far-field ghost layer; it defaults to the field
    itself at construction.
    """

    grid: Grid
    U: np.ndarray
    t: float = 0.0
    far: Optional[np.ndarray] = dc_field(default=None, repr=False)

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=float)
        if self.U.shape != (self.grid.dim + 2,) + self.grid.n:
            raise ValueError(f"U has shape {self.U.shape}, expected {(self.grid.dim + 2,) + self.grid.n}")
        if self.far is None and self.grid.boundary == "farfield":
            self.far = self.U.copy()

    @classmethod
    def from_primitive(cls, grid, rho, u, e, t=0.0):
        """Build from density, velocity (shape ``(dim,) + n``) and specific internal energy."""
        rho = np.broadcast_to(np.asarray(rho, dtype=float), grid.n)
        u = np.broadcast_to(np.asarray(u, dtype=float), (grid.dim,) + grid.n)
        e = np.broadcast_to(np.asarray(e, dtype=float), grid.n)
        m = rho * u
        E = rho * e + 0.5 * rho * np.sum(u * u, axis=0)
        return cls(grid, np.concatenate([rho[None], m, E[None]]), t)

    def with_state(self, U, t):
        return ConservedField(self.grid, U, t, self.far)

    @property
    def rho(self):
        return self.U[0]

    @property
    def m(self):
        return self.U[1:-1]

    @property
    def E(self):
        return self.U[-1]

    @property
    def u(self):
        return self.m / self.rho

    @property
    def e(self):
        u = self.u
        return self.E / self.rho - 0.5 * np.sum(u * u, axis=0)

    def totals(self):
        """Discrete integrals of every conserved variable."""
        return self.U.reshape(self.U.shape[0], -1).sum(axis=1) * self.grid.cell_volume


def pad(U, grid: Grid, far=None):
    """Add one ghost layer on every side (periodic wrap or clamped far field)."""
    widths = [(0, 0)] + [(1, 1)] * grid.dim
    if grid.boundary == "periodic":
        return np.pad(U, widths, mode="wrap")
    P = np.pad(U if far is None else far, widths, mode="edge")
    P[(slice(None),) + (slice(1, -1),) * grid.dim] = U
    return P


def interior(dim):
    return (slice(1, -1),) * dim


def face_slices(dim, axis):
    """Index tuples selecting the left and right cell of every face normal to ``axis``.

    Applied to a padded cell array, both give arrays with ``n[axis] + 1``
    entries along ``axis`` and the interior range along the other axes.
    """
    left = tuple(slice(0, -1) if k == axis else slice(1, -1) for k in range(dim))
    right = tuple(slice(1, None) if k == axis else slice(1, -1) for k in range(dim))
    return left, right
