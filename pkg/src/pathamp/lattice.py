"""Discrete-time action matrices for coupled harmonic oscillators.

A network of M oscillators on an N-point time lattice is encoded as the
quadratic form 0.5*Q.A.Q + J.Q, with Q ordered oscillator-major (all of
oscillator 0's lattice values, then oscillator 1's, ...).  The matrix A
carries a forward second-difference stencil per oscillator block,

    row n:  -(m/dt + k*dt)  at (n, n)
            +2m/dt          at (n, n+1)
            -m/dt           at (n, n+2)

with Dirichlet endpoints (lattice values outside the window are zero, so
boundary rows truncate the stencil), and a coupling entry -k_im*dt between
oscillators i and m at equal lattice index.  Only the symmetric part of A
enters the quadratic form, and the symmetrized stencil is the one with
second-order accuracy, so determinant and solve paths always symmetrize
first.

Internally the matrix lives in banded storage over the lattice-major
(interleaved) index ordering, where the bandwidth is 2M instead of the
(M-1)*N+2 it would be oscillator-major.  The reordering is a symmetric
permutation, so determinants and quadratic forms are unchanged.

The transition amplitude of the damped Gaussian integral

    Z = integral dQ exp(i*(0.5*Q.A.Q + J.Q))
      = ((2*pi*i)^dim / det A)^(1/2) * exp(-(i/2) J.A^{-1}.J)

is evaluated in log-magnitude/phase form.  Branch convention: the square
root is taken per eigenvalue, prefactor phase = 0.5*sum(pi/2 - arg(lam)),
which is the value the damped integral actually converges to (it is
continuous in the damping and factorizes over independent blocks).  The
principal root of the assembled ratio can differ from it by a sign; that
global sign is convention only.
"""

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from . import _backend
from .errors import SingularAction

__all__ = [
    "OscillatorNetwork",
    "ActionMatrix",
    "SourceVector",
    "Amplitude",
    "build_action_matrix",
    "symmetrize",
    "quadratic_form",
    "transition_amplitude",
    "wrap_phase",
]


def wrap_phase(phi):
    """Reduce an angle to the half-open interval (-pi, pi]."""
    return np.pi - (np.pi - phi) % (2.0 * np.pi)


@dataclass(eq=False)
class OscillatorNetwork:
    """Physical parameters of M coupled oscillators on a time lattice.

    coupling is the symmetric M x M matrix of cross-spring constants with
    zero diagonal; the common diagonal stiffness is `spring`.  spring = 0
    is permitted (free second-difference chain).
    """

    num_sources: int
    mass: float
    spring: float
    coupling: np.ndarray | None
    dt: float
    steps: int

    def __post_init__(self):
        m = self.num_sources
        if not isinstance(m, (int, np.integer)) or m < 1:
            raise ValueError("num_sources: must be an integer >= 1")
        if not self.mass > 0:
            raise ValueError("mass: must be positive")
        if self.spring < 0:
            raise ValueError("spring: must be nonnegative")
        if not self.dt > 0:
            raise ValueError("dt: must be positive")
        if not isinstance(self.steps, (int, np.integer)) or self.steps < 2:
            raise ValueError("steps: must be an integer >= 2")
        if self.coupling is None:
            self.coupling = np.zeros((m, m))
        self.coupling = np.asarray(self.coupling, dtype=float)
        if self.coupling.shape != (m, m):
            raise ValueError(f"coupling: must have shape ({m}, {m})")
        if not np.allclose(self.coupling, self.coupling.T, atol=0, rtol=0):
            raise ValueError("coupling: must be symmetric")
        if np.any(np.diagonal(self.coupling) != 0):
            raise ValueError("coupling: diagonal must be zero")

    @classmethod
    def single(cls, mass, spring, dt, steps):
        return cls(1, mass, spring, None, dt, steps)

    @classmethod
    def pair(cls, mass, spring, k12, dt, steps):
        c = np.array([[0.0, k12], [k12, 0.0]])
        return cls(2, mass, spring, c, dt, steps)

    @property
    def dim(self):
        return self.num_sources * self.steps

    @property
    def k12(self):
        if self.num_sources != 2:
            raise ValueError("k12 is defined for two-oscillator networks")
        return float(self.coupling[0, 1])


def _interleave_perm(num_blocks, block_size):
    """perm[osc_major_index] = lattice_major_index."""
    idx = np.arange(num_blocks * block_size)
    return (idx % block_size) * num_blocks + idx // block_size


def _band_transpose(bands, bw):
    n = bands.shape[1]
    out = np.zeros_like(bands)
    for r in range(2 * bw + 1):
        d = r - bw
        lo, hi = max(0, -d), min(n, n - d)
        if lo < hi:
            out[r, lo:hi] = bands[2 * bw - r, lo + d:hi + d]
    return out


def _band_matvec(bands, bw, x):
    n = bands.shape[1]
    y = np.zeros(n, dtype=np.result_type(bands.dtype, x.dtype))
    for r in range(2 * bw + 1):
        d = r - bw
        lo, hi = max(0, -d), min(n, n - d)
        if lo < hi:
            y[lo + d:hi + d] += bands[r, lo:hi] * x[lo:hi]
    return y


@dataclass(eq=False)
class ActionMatrix:
    """Square matrix of the discrete quadratic form, in banded storage.

    bands[bw + i - j, j] holds entry (i, j) of the matrix in the
    lattice-major index ordering; `damping` adds +1j*damping on the
    diagonal (the entries are complex once damping is nonzero).  The
    public interface (dense form, matvec, solve) speaks oscillator-major.
    """

    bands: np.ndarray
    bw: int
    num_blocks: int
    block_size: int
    symmetrized: bool
    damping: float = 0.0
    _perm: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.bands = np.asarray(self.bands, dtype=float)
        if self.bands.shape[0] != 2 * self.bw + 1:
            raise ValueError("bands: expected 2*bw+1 rows")
        if self.num_blocks * self.block_size != self.bands.shape[1]:
            raise ValueError("bands: column count must equal num_blocks*block_size")
        self._perm = _interleave_perm(self.num_blocks, self.block_size)

    @property
    def dim(self):
        return self.bands.shape[1]

    @classmethod
    def from_dense(cls, dense, symmetrized=None):
        """Wrap a dense real square matrix (treated as a single block)."""
        dense = np.asarray(dense, dtype=float)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError("from_dense: matrix must be square")
        n = dense.shape[0]
        nz = np.nonzero(dense)
        bw = int(np.max(np.abs(nz[0] - nz[1]))) if nz[0].size else 0
        bands = np.zeros((2 * bw + 1, n))
        for r in range(2 * bw + 1):
            d = r - bw
            lo, hi = max(0, -d), min(n, n - d)
            if lo < hi:
                bands[r, lo:hi] = dense[np.arange(lo, hi) + d, np.arange(lo, hi)]
        if symmetrized is None:
            symmetrized = bool(np.array_equal(dense, dense.T))
        return cls(bands, bw, 1, n, symmetrized)

    def to_dense(self):
        """Dense matrix in oscillator-major ordering (complex if damped)."""
        n, bw = self.dim, self.bw
        out = np.zeros((n, n), dtype=complex if self.damping else float)
        for r in range(2 * bw + 1):
            d = r - bw
            lo, hi = max(0, -d), min(n, n - d)
            if lo < hi:
                cols = np.arange(lo, hi)
                out[cols + d, cols] = self.bands[r, lo:hi]
        if self.damping:
            out[np.diag_indices(n)] += 1j * self.damping
        p = self._perm
        return out[np.ix_(p, p)]

    def add_damping(self, epsilon):
        """Return a copy with +1j*epsilon added to the diagonal."""
        if epsilon < 0:
            raise ValueError("epsilon: must be nonnegative")
        return replace(self, bands=self.bands.copy(),
                       damping=self.damping + epsilon)

    def matvec(self, values):
        """Product A @ x for an oscillator-major vector x."""
        values = np.asarray(values)
        if values.shape != (self.dim,):
            raise ValueError("matvec: vector length must equal matrix dim")
        x = np.empty(self.dim, dtype=values.dtype)
        x[self._perm] = values
        y = _band_matvec(self.bands, self.bw, x)
        if self.damping:
            y = y + 1j * self.damping * x
        return y[self._perm]

    def eigenvalues(self):
        """Eigenvalues of the real symmetric part of the banded matrix
        (damping excluded; add 1j*damping for the damped spectrum)."""
        if not self.symmetrized:
            raise ValueError("eigenvalues: symmetrize the matrix first")
        upper = np.ascontiguousarray(self.bands[:self.bw + 1])
        return scipy.linalg.eig_banded(upper, lower=False, eigvals_only=True)

    def _working_band(self):
        n, bw = self.dim, self.bw
        ab = np.zeros((3 * bw + 1, n), dtype=np.complex128)
        ab[bw:, :] = self.bands
        if self.damping:
            ab[2 * bw, :] += 1j * self.damping
        return ab

    def _factor(self):
        ab = self._working_band()
        ipiv, nswaps, info = _backend.banded_lu_factor(ab, self.bw)
        if info:
            raise SingularAction(f"zero pivot at column {info - 1}")
        return ab, ipiv, nswaps

    def solve(self, values):
        """Solve A x = values (oscillator-major) by banded LU with partial
        pivoting; the inverse is never formed."""
        values = np.asarray(values)
        if values.shape != (self.dim,):
            raise ValueError("solve: vector length must equal matrix dim")
        ab, ipiv, _ = self._factor()
        rhs = np.empty(self.dim, dtype=np.complex128)
        rhs[self._perm] = values
        x = _backend.banded_lu_solve(ab, ipiv, self.bw, rhs)[self._perm]
        return x if self.damping else x.real

    def log_det(self):
        """(log|det A|, arg det A in (-pi, pi]) via the banded LU."""
        ab, _, nswaps = self._factor()
        diag = ab[2 * self.bw, :]
        log_abs = float(np.sum(np.log(np.abs(diag))))
        phase = wrap_phase(float(np.sum(np.angle(diag))) + np.pi * nswaps)
        return log_abs, phase


@dataclass(eq=False)
class SourceVector:
    """Oscillator-major impulse vector J paired with an ActionMatrix."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)

    @classmethod
    def zeros(cls, dim):
        return cls(np.zeros(dim))

    @classmethod
    def impulse(cls, dim, index, value=1.0):
        v = np.zeros(dim)
        v[index] = value
        return cls(v)

    def __len__(self):
        return self.values.shape[0]

    def block_permuted(self, order, block_size):
        """Relabel oscillators: reorder the per-oscillator blocks."""
        blocks = self.values.reshape(-1, block_size)
        return SourceVector(blocks[list(order)].reshape(-1))


@dataclass
class Amplitude:
    """Complex value stored as (log-magnitude, phase) so that determinant
    prefactors with hundreds of modes do not overflow.  phase lies in
    (-pi, pi]; log_magnitude is -inf for an exactly zero amplitude."""

    log_magnitude: float
    phase: float

    def __post_init__(self):
        self.phase = float(wrap_phase(self.phase))
        self.log_magnitude = float(self.log_magnitude)

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        with np.errstate(divide="ignore"):
            return cls(float(np.log(abs(z))), float(np.angle(z)))

    def to_complex(self):
        return np.exp(self.log_magnitude) * np.exp(1j * self.phase)

    @property
    def magnitude(self):
        return float(np.exp(self.log_magnitude))

    @property
    def intensity(self):
        return float(np.exp(2.0 * self.log_magnitude))

    def __mul__(self, other):
        return Amplitude(self.log_magnitude + other.log_magnitude,
                         self.phase + other.phase)


def build_action_matrix(net, symmetrized=True):
    """Assemble the discrete action matrix for an oscillator network.

    The raw assembly places the one-sided stencil (diagonal, +1, +2
    positions) and the coupling band; by default the symmetric part is
    returned, which is what every determinant/solve consumer needs.
    Pass symmetrized=False to inspect the raw one-sided form.
    """
    m, k, dt = net.mass, net.spring, net.dt
    nb, bs = net.num_sources, net.steps
    n = nb * bs
    bw = min(2 * nb, n - 1)
    bands = np.zeros((2 * bw + 1, n))
    bands[bw, :] = -(m / dt + k * dt)
    if bs >= 2:
        bands[bw - nb, nb:] = 2.0 * m / dt
    if bs >= 3:
        bands[bw - 2 * nb, 2 * nb:] = -m / dt
    for b in range(nb):
        for b2 in range(nb):
            if b2 == b:
                continue
            val = net.coupling[b, b2]
            if val != 0.0:
                o = b2 - b
                bands[bw - o, b2::nb] = -val * dt
    raw = ActionMatrix(bands, bw, nb, bs, symmetrized=False)
    return symmetrize(raw) if symmetrized else raw


def symmetrize(action):
    """Symmetric part (A + A^T)/2; the quadratic form Q.A.Q is unchanged."""
    bands = 0.5 * (action.bands + _band_transpose(action.bands, action.bw))
    return replace(action, bands=bands, symmetrized=True)


def quadratic_form(action, values, source=None):
    """0.5 * Q.A.Q, plus J.Q when a source is given.

    Returns a float for a real undamped matrix, complex otherwise.
    """
    q = values.values if isinstance(values, SourceVector) else np.asarray(values)
    if q.shape != (action.dim,):
        raise ValueError("quadratic_form: vector length must equal matrix dim")
    x = np.empty(action.dim, dtype=q.dtype)
    x[action._perm] = q
    bands, bw, n = action.bands, action.bw, action.dim
    total = 0.0
    for r in range(2 * bw + 1):
        d = r - bw
        lo, hi = max(0, -d), min(n, n - d)
        if lo < hi:
            total += np.dot(bands[r, lo:hi] * x[lo + d:hi + d], x[lo:hi])
    total = 0.5 * total
    if action.damping:
        total = total + 0.5j * action.damping * np.dot(x, x)
    if source is not None:
        j = source.values if isinstance(source, SourceVector) else np.asarray(source)
        if j.shape != (action.dim,):
            raise ValueError("quadratic_form: source length must equal matrix dim")
        total = total + np.dot(j, q)
    return total


def transition_amplitude(action, source, singular_rtol=1e-12):
    """Closed-form Gaussian amplitude ((2*pi*i)^dim/det A)^(1/2)
    * exp(-(i/2) J.A^{-1}.J) as an Amplitude.

    The matrix is symmetrized if it is not already.  The prefactor is
    accumulated per eigenvalue of the (real) symmetric band, shifted by
    1j*damping, with the principal log of each factor; see the module
    docstring for why this branch and not the principal root of the full
    ratio.  The source term uses the banded LU solve.

    Raises SingularAction when the smallest eigenvalue magnitude is below
    singular_rtol times the largest.
    """
    a = action if action.symmetrized else symmetrize(action)
    lam = a.eigenvalues() + 1j * a.damping
    absl = np.abs(lam)
    if absl.max() == 0.0 or absl.min() <= singular_rtol * absl.max():
        raise SingularAction(
            f"determinant vanishes within tolerance (min |eig| = {absl.min():.3e})")
    log_mag = 0.5 * float(np.sum(np.log(2.0 * np.pi) - np.log(absl)))
    phase = 0.5 * float(np.sum(np.pi / 2.0 - np.angle(lam)))
    j = source.values if isinstance(source, SourceVector) else np.asarray(source, dtype=float)
    if j.shape != (a.dim,):
        raise ValueError("transition_amplitude: source length must equal matrix dim")
    if np.any(j != 0.0):
        s = complex(np.dot(j, a.solve(j)))
        log_mag += 0.5 * s.imag
        phase -= 0.5 * s.real
    return Amplitude(log_mag, phase)
