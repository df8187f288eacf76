"""Truncated quantum rotor chain: basis, operators, symmetry sectors.

Each site is a particle on a sphere with states |l, m>, l <= l_max. The
chain Hamiltonian in units of E0 = hbar^2/(2 m rho^2) is

    H = sum_i L_i^2 + kappa * sum_<i,i+1> (2 - 2 n_i . n_{i+1})

with n the unit-direction operator on the sphere. The additive 2*kappa
per bond is kept so absolute energies track the physical bond potential;
gaps are unaffected. Total angular momentum along the charge axis is the
conserved Noether charge Q.
"""

import json
import math
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DIM_CAP_ENV",
    "DEFAULT_DIM_CAP",
    "InvalidSpecError",
    "DimensionCapError",
    "ChainSpec",
    "SiteBasis",
    "SparseOperator",
    "site_basis",
    "direction_matrices",
    "angular_momentum_matrices",
    "build_hamiltonian",
    "build_interaction",
    "build_charge",
    "build_grand_canonical",
    "sector_decompose",
]

DIM_CAP_ENV = "ROTORSIM_DIM_CAP"
DEFAULT_DIM_CAP = 2**21
HERMITICITY_TOL = 1e-14


class InvalidSpecError(ValueError):
    pass


class DimensionCapError(RuntimeError):
    pass


def _dim_cap() -> int:
    raw = os.environ.get(DIM_CAP_ENV)
    return int(raw) if raw else DEFAULT_DIM_CAP


@dataclass(frozen=True)
class ChainSpec:
    """Dimensionless description of a rotor chain.

    kappa is the bond strength 2 K m rho^4 / hbar^2; mu_tilde the
    chemical potential in units of E0 (may be negative). charge_axis is
    the internal axis the Noether charge is measured along.
    """

    n_sites: int
    l_max: int
    kappa: float = 0.0
    boundary: str = "open"
    mu_tilde: float = 0.0
    charge_axis: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.n_sites < 1:
            raise InvalidSpecError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.l_max < 1:
            raise InvalidSpecError(f"l_max must be >= 1, got {self.l_max}")
        if self.kappa < 0:
            raise InvalidSpecError(f"kappa must be >= 0, got {self.kappa}")
        if self.boundary not in ("open", "periodic"):
            raise InvalidSpecError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if self.boundary == "periodic" and self.n_sites < 3:
            raise InvalidSpecError("periodic boundary requires n_sites >= 3")
        axis = np.asarray(self.charge_axis, dtype=float)
        if axis.shape != (3,) or not np.isfinite(axis).all():
            raise InvalidSpecError(f"charge_axis must be a 3-vector, got {self.charge_axis!r}")
        norm = np.linalg.norm(axis)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidSpecError(f"charge_axis must be a unit vector, |axis| = {norm}")
        object.__setattr__(self, "charge_axis", tuple(float(a) for a in axis))
        if self.site_dim ** self.n_sites > _dim_cap():
            raise DimensionCapError(
                f"total dimension {self.site_dim}^{self.n_sites} exceeds the cap "
                f"{_dim_cap()} (override via ${DIM_CAP_ENV})"
            )

    @property
    def site_dim(self) -> int:
        return (self.l_max + 1) ** 2

    @property
    def dimension(self) -> int:
        return self.site_dim ** self.n_sites

    @property
    def bonds(self):
        """Nearest-neighbor pairs; periodic adds the wrap-around bond."""
        pairs = [(i, i + 1) for i in range(self.n_sites - 1)]
        if self.boundary == "periodic":
            pairs.append((self.n_sites - 1, 0))
        return pairs

    @property
    def axis_is_z(self) -> bool:
        return self.charge_axis == (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SiteBasis:
    """Ordered single-site basis of (l, m) states, lexicographic in (l, m)."""

    l_max: int
    states: tuple  # of (l, m)

    @property
    def dim(self) -> int:
        return len(self.states)

    def index(self, l: int, m: int) -> int:
        # lexicographic layout: block of l starts at l^2, m runs -l..l
        return l * l + (m + l)


def site_basis(l_max: int) -> SiteBasis:
    """Enumerate the truncated single-site basis."""
    if l_max < 1:
        raise InvalidSpecError(f"l_max must be >= 1, got {l_max}")
    states = tuple((l, m) for l in range(l_max + 1) for m in range(-l, l + 1))
    return SiteBasis(l_max=l_max, states=states)


@dataclass
class SparseOperator:
    """Hermitian-capable sparse operator on the many-body basis."""

    dimension: int
    matrix: sp.csr_matrix
    sector_label: int | None = None

    def entries(self):
        """Yield (row, col, value) in row-major order, no explicit zeros."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            yield int(coo.row[k]), int(coo.col[k]), complex(coo.data[k])

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        diff = self.matrix - self.matrix.getH()
        return diff.nnz == 0 or abs(diff).max() < tol

    def dump_json(self, path):
        """Debug dump: coordinate list (row, col, re, im), row-major."""
        records = [[r, c, v.real, v.imag] for r, c, v in self.entries()]
        with open(path, "w") as fh:
            json.dump({"dimension": self.dimension, "entries": records}, fh)

    def restrict(self, indices) -> "SparseOperator":
        """Submatrix on the given global basis indices (order preserved)."""
        idx = np.asarray(indices)
        sub = self.matrix[np.ix_(idx, idx)].tocsr()
        return SparseOperator(dimension=len(idx), matrix=sub)


def _clean(matrix) -> sp.csr_matrix:
    out = sp.csr_matrix(matrix)
    out.eliminate_zeros()
    return out


def direction_matrices(l_max: int):
    """Matrix elements of the unit-direction operator in the site basis.

    Returns (n_z, n_plus, n_minus) with n_plus = n_x + i n_y and
    n_minus = n_plus^dagger. The only nonzero elements connect l to
    l +/- 1 (parity selection rule); couplings out of the truncated
    space (l_max -> l_max + 1) are dropped.

    Closed forms, with A(l, m) = sqrt(((l+1)^2 - m^2) / ((2l+1)(2l+3)))
    and B(l, m) = sqrt((l+m+1)(l+m+2) / ((2l+1)(2l+3))):

        <l+1, m   | n_z | l, m> =  A(l, m)
        <l+1, m+1 | n_+ | l, m> = -B(l, m)
        <l-1, m+1 | n_+ | l, m> =  B(l-1, -m-1)

    The full table is cross-checked against numerical quadrature of the
    spherical-harmonic products in the test suite before anything else
    trusts it.
    """
    basis = site_basis(l_max)
    dim = basis.dim

    def A(l, m):
        return math.sqrt(((l + 1) ** 2 - m**2) / ((2 * l + 1) * (2 * l + 3)))

    def B(l, m):
        return math.sqrt((l + m + 1) * (l + m + 2) / ((2 * l + 1) * (2 * l + 3)))

    nz = sp.lil_matrix((dim, dim))
    nplus = sp.lil_matrix((dim, dim))
    for l in range(l_max + 1):
        for m in range(-l, l + 1):
            col = basis.index(l, m)
            if l + 1 <= l_max:
                nz[basis.index(l + 1, m), col] = A(l, m)
                nplus[basis.index(l + 1, m + 1), col] = -B(l, m)
            if l - 1 >= 0 and abs(m + 1) <= l - 1:
                nplus[basis.index(l - 1, m + 1), col] = B(l - 1, -m - 1)
    nz = nz + nz.T  # lower triangle mirrors: n_z is real symmetric
    nminus = nplus.T.conj()
    return _clean(nz), _clean(nplus), _clean(nminus)


def angular_momentum_matrices(l_max: int):
    """Per-site (L^2, L_x, L_y, L_z) in units hbar = 1; L^2 has eigenvalue l(l+1)."""
    basis = site_basis(l_max)
    dim = basis.dim
    l_arr = np.array([l for l, _ in basis.states], dtype=float)
    m_arr = np.array([m for _, m in basis.states], dtype=float)
    L2 = sp.diags(l_arr * (l_arr + 1))
    Lz = sp.diags(m_arr)
    Lp = sp.lil_matrix((dim, dim))
    for l in range(l_max + 1):
        for m in range(-l, l):
            Lp[basis.index(l, m + 1), basis.index(l, m)] = math.sqrt(
                l * (l + 1) - m * (m + 1)
            )
    Lp = Lp.tocsr()
    Lm = Lp.T.conj()
    Lx = (Lp + Lm) / 2.0
    Ly = (Lp - Lm) / 2.0j
    return _clean(L2), _clean(Lx), _clean(Ly), _clean(Lz)


def _site_operator(op, site: int, n_sites: int, site_dim: int) -> sp.csr_matrix:
    """Embed a one-site operator; site 0 is the slowest tensor index."""
    left = sp.identity(site_dim**site, format="csr")
    right = sp.identity(site_dim ** (n_sites - site - 1), format="csr")
    return sp.kron(sp.kron(left, op), right, format="csr")


def _bond_operator(op_a, op_b, i: int, j: int, n_sites: int, site_dim: int):
    a = _site_operator(op_a, i, n_sites, site_dim)
    b = _site_operator(op_b, j, n_sites, site_dim)
    return a @ b


def build_interaction(spec: ChainSpec) -> SparseOperator:
    """Bond operator sum_<i,j> (2 - 2 n_i . n_j), i.e. dH/dkappa.

    Separated out because the time-dependent switching ramp multiplies
    exactly this operator by kappa(t).
    """
    nz, npl, nmi = direction_matrices(spec.l_max)
    d = spec.site_dim
    dim = spec.dimension
    total = sp.csr_matrix((dim, dim))
    for i, j in spec.bonds:
        dot = (
            _bond_operator(nz, nz, i, j, spec.n_sites, d)
            + 0.5 * _bond_operator(npl, nmi, i, j, spec.n_sites, d)
            + 0.5 * _bond_operator(nmi, npl, i, j, spec.n_sites, d)
        )
        total = total + (2.0 * sp.identity(dim, format="csr") - 2.0 * dot)
    return SparseOperator(dimension=dim, matrix=_clean(total))


def build_kinetic(spec: ChainSpec) -> SparseOperator:
    """Rotor kinetic term sum_i L_i^2 (diagonal)."""
    L2, _, _, _ = angular_momentum_matrices(spec.l_max)
    dim = spec.dimension
    total = sp.csr_matrix((dim, dim))
    for i in range(spec.n_sites):
        total = total + _site_operator(L2, i, spec.n_sites, spec.site_dim)
    return SparseOperator(dimension=dim, matrix=_clean(total))


def build_hamiltonian(spec: ChainSpec) -> SparseOperator:
    """Chain Hamiltonian in units of E0 (see module docstring)."""
    h = build_kinetic(spec).matrix
    if spec.kappa != 0.0:
        h = h + spec.kappa * build_interaction(spec).matrix
    return SparseOperator(dimension=spec.dimension, matrix=_clean(h))


def build_charge(spec: ChainSpec) -> SparseOperator:
    """Noether charge Q = sum_i L_i . axis; integer-diagonal for the z axis."""
    _, Lx, Ly, Lz = angular_momentum_matrices(spec.l_max)
    ax, ay, az = spec.charge_axis
    site_q = ax * Lx + ay * Ly + az * Lz
    dim = spec.dimension
    total = sp.csr_matrix((dim, dim), dtype=site_q.dtype)
    for i in range(spec.n_sites):
        total = total + _site_operator(site_q, i, spec.n_sites, spec.site_dim)
    return SparseOperator(dimension=dim, matrix=_clean(total))


def build_grand_canonical(spec: ChainSpec) -> SparseOperator:
    """H - mu_tilde * Q; positive mu_tilde favors positive charge."""
    h = build_hamiltonian(spec).matrix
    if spec.mu_tilde != 0.0:
        h = h - spec.mu_tilde * build_charge(spec).matrix
    return SparseOperator(dimension=spec.dimension, matrix=_clean(h))


def total_m_values(spec: ChainSpec) -> np.ndarray:
    """Total magnetic quantum number sum_i m_i per global basis state."""
    basis = site_basis(spec.l_max)
    m_site = np.array([m for _, m in basis.states], dtype=int)
    total = np.zeros(spec.dimension, dtype=int)
    d = spec.site_dim
    for i in range(spec.n_sites):
        stride = d ** (spec.n_sites - 1 - i)
        site_index = (np.arange(spec.dimension) // stride) % d
        total += m_site[site_index]
    return total


def sector_decompose(spec: ChainSpec) -> dict:
    """Partition the basis by total M (conserved since [H, Q] = 0).

    Only supported on the quantization axis; the block count is
    2 * n_sites * l_max + 1. Within each sector the global basis order
    is kept.
    """
    if not spec.axis_is_z:
        raise InvalidSpecError("sector decomposition requires charge_axis = z")
    total = total_m_values(spec)
    max_m = spec.n_sites * spec.l_max
    return {
        m: np.flatnonzero(total == m)
        for m in range(-max_m, max_m + 1)
    }
