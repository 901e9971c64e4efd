"""Exact diagonalization of the full finite-size Hamiltonian.

Ground truth for symmetry, gap and convergence checks at small system size.
The product basis is |m1> (x) |m2> (x) |n> with the m index slowest and the
boson index fastest; within each spin factor m runs ascending from -J to +J,
and the boson space is truncated to n = 0 .. n_cut-1.  The composite index is

    idx = (i1 * (2J+1) + i2) * n_cut + n,   i_k = m_k + J.

The Hamiltonian per ensemble of N = 2J spins is

    H = Omega (J1z + J2z) + (chi/J) J1x J2x + omega b^dag b
        + (lam/sqrt(J)) (J1x + J2x) (b^dag + b),

so e0/N converges to the intensive mean-field energy as J grows.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionCap, NonConvergence
from .model import ModelParams

DEFAULT_DIM_CAP = 200_000

# Below this dimension a dense solve is faster and exact; above it ARPACK runs.
_DENSE_CUTOFF = 600

_EIGSH_MAXITER = 100_000
_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class FiniteModel:
    """Couplings plus the finite sizes: spin length J per ensemble, boson cutoff."""

    params: ModelParams
    J: float
    n_cut: int
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        two_j = 2 * self.J
        if abs(two_j - round(two_j)) > 1e-12 or round(two_j) < 1:
            raise ValueError(f"J must be a positive half-integer, got {self.J}")
        if self.n_cut < 1:
            raise ValueError(f"n_cut must be >= 1, got {self.n_cut}")
        if self.dim > self.dim_cap:
            raise DimensionCap(
                f"Hilbert dimension {self.dim} exceeds cap {self.dim_cap} "
                f"(J={self.J}, n_cut={self.n_cut})"
            )

    @property
    def spin_dim(self) -> int:
        return int(round(2 * self.J)) + 1

    @property
    def dim(self) -> int:
        return self.spin_dim**2 * self.n_cut


def spin_operators(J: float) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """(Jz, Jx) in the ascending-m basis, Jx = (J+ + J-)/2 with standard ladder elements."""
    dim = int(round(2 * J)) + 1
    m = -J + np.arange(dim)
    jz = sp.diags(m).tocsr()
    c = np.sqrt(J * (J + 1) - m[:-1] * (m[:-1] + 1))  # <m+1| J+ |m>
    jplus = sp.diags(c, -1)
    jx = ((jplus + jplus.T) / 2).tocsr()
    return jz, jx


def boson_operators(n_cut: int) -> tuple[sp.csr_matrix, sp.csr_matrix, sp.csr_matrix]:
    """(number, b, b+b^dag) truncated at n_cut Fock states."""
    n = np.arange(n_cut)
    number = sp.diags(n).tocsr()
    b = sp.diags(np.sqrt(n[1:]), 1).tocsr()  # lowering: <n-1| b |n>
    return number, b, (b + b.T).tocsr()


def _kron3(a, b, c) -> sp.csr_matrix:
    return sp.kron(sp.kron(a, b, format="csr"), c, format="csr")


def build_hamiltonian(model: FiniteModel) -> sp.csr_matrix:
    """Sparse Hamiltonian in the documented product basis.

    Every term is a Kronecker product of real symmetric factors, so the matrix
    is symmetric exactly, entry by entry.
    """
    p = model.params
    jz, jx = spin_operators(model.J)
    number, _, xb = boson_operators(model.n_cut)
    i_s = sp.identity(model.spin_dim, format="csr")
    i_b = sp.identity(model.n_cut, format="csr")
    h = (
        p.Omega * (_kron3(jz, i_s, i_b) + _kron3(i_s, jz, i_b))
        + (p.chi / model.J) * _kron3(jx, jx, i_b)
        + p.omega * _kron3(i_s, i_s, number)
        + (p.lam / math.sqrt(model.J)) * (_kron3(jx, i_s, xb) + _kron3(i_s, jx, xb))
    )
    return h.tocsr()


def parity_vector(model: FiniteModel) -> np.ndarray:
    """Diagonal of the parity operator: (-1)^(total excitation number) per basis state."""
    ds, nc = model.spin_dim, model.n_cut
    i1 = np.repeat(np.arange(ds), ds * nc)
    i2 = np.tile(np.repeat(np.arange(ds), nc), ds)
    n = np.tile(np.arange(nc), ds * ds)
    return (-1.0) ** ((i1 + i2 + n) % 2)


def parity_operator(model: FiniteModel) -> sp.csr_matrix:
    return sp.diags(parity_vector(model)).tocsr()


@dataclass(frozen=True, eq=False)
class GroundState:
    e0: float
    gap: float
    state: np.ndarray


def ground_state(model: FiniteModel, maxiter: int = _EIGSH_MAXITER) -> GroundState:
    """Two lowest eigenpairs; dense below _DENSE_CUTOFF, Lanczos (ARPACK) above."""
    h = build_hamiltonian(model)
    dim = h.shape[0]
    if dim <= _DENSE_CUTOFF:
        vals, vecs = np.linalg.eigh(h.toarray())
        e0, e1 = float(vals[0]), float(vals[1])
        v0 = vecs[:, 0]
    else:
        try:
            vals, vecs = spla.eigsh(h, k=2, which="SA", maxiter=maxiter)
        except spla.ArpackNoConvergence as exc:
            raise NonConvergence(f"eigensolver did not converge: {exc}") from exc
        order = np.argsort(vals)
        e0, e1 = float(vals[order[0]]), float(vals[order[1]])
        v0 = vecs[:, order[0]]
    residual = float(np.linalg.norm(h @ v0 - e0 * v0))
    if residual > _RESIDUAL_TOL:
        raise NonConvergence(f"ground-state residual {residual:.3e} exceeds {_RESIDUAL_TOL}")
    return GroundState(e0=e0, gap=e1 - e0, state=v0)


@dataclass(frozen=True)
class EDObservables:
    jx1: float
    jx2: float
    jz1: float
    jz2: float
    nb: float
    b_re: float
    parity: float


def observables(model: FiniteModel, state: np.ndarray) -> EDObservables:
    """Expectation values of the collective operators in a normalized state."""
    jz, jx = spin_operators(model.J)
    number, b, _ = boson_operators(model.n_cut)
    i_s = sp.identity(model.spin_dim, format="csr")
    i_b = sp.identity(model.n_cut, format="csr")

    def expect(op) -> float:
        return float(state @ (op @ state))

    return EDObservables(
        jx1=expect(_kron3(jx, i_s, i_b)),
        jx2=expect(_kron3(i_s, jx, i_b)),
        jz1=expect(_kron3(jz, i_s, i_b)),
        jz2=expect(_kron3(i_s, jz, i_b)),
        nb=expect(_kron3(i_s, i_s, number)),
        b_re=expect(_kron3(i_s, i_s, b)),  # equals Re <b> for a real state
        parity=float(np.sum(parity_vector(model) * state * state)),
    )


def converge_cutoff(model: FiniteModel, tol: float) -> int:
    """Smallest boson cutoff (over the 1.5x growth schedule starting at 1) whose
    ground energy moves by less than tol when the cutoff grows by another 1.5x."""
    if not tol > 0:
        raise ValueError("tol must be positive")

    def e0_at(nc: int) -> float:
        m = FiniteModel(model.params, model.J, nc, dim_cap=model.dim_cap)
        return ground_state(m).e0

    n = 1
    e_here = e0_at(n)
    while True:
        n_next = math.ceil(1.5 * n)
        e_next = e0_at(n_next)
        if abs(e_next - e_here) < tol:
            return n
        n, e_here = n_next, e_next


def write_coordinate_matrix(matrix: sp.spmatrix, path: str) -> None:
    """Dump a sparse matrix as plain-text 'row col value' lines for cross-tool checks."""
    coo = matrix.tocoo()
    with open(path, "w") as fh:
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i} {j} {v:.17g}\n")
