"""Dense Hermitian operator algebra for desk-scale quantum states.

Everything here is a pure function of immutable values: matrices are
symmetrized and frozen at construction, and subsystem ordering is row-major
(first factor is the slowest index) throughout the toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadTraceError,
    DimensionMismatchError,
    EigensolverError,
    NotHermitianError,
    NotPositiveError,
)

# Admission / clamping tolerances; chosen so Haar-sampled states at
# dimensions <= 64 pass without masking genuinely invalid input.
HERMITICITY_TOL = 1e-12
EIGENVALUE_FLOOR = 1e-10
CLAMP_MASS_TOL = 1e-9
TRACE_TOL = 1e-9


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A dim x dim complex matrix equal to its conjugate transpose.

    Input is admitted if it is Hermitian within ``HERMITICITY_TOL`` in
    max-entry norm and is then symmetrized, so ``entries`` is exactly
    Hermitian from the caller's point of view.
    """

    dim: int = field(init=False)
    entries: np.ndarray

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(
                f"expected a square matrix, got shape {entries.shape}"
            )
        deviation = np.max(np.abs(entries - entries.conj().T)) if entries.size else 0.0
        if deviation > HERMITICITY_TOL:
            raise NotHermitianError(deviation, HERMITICITY_TOL)
        sym = (entries + entries.conj().T) / 2.0
        object.__setattr__(self, "dim", sym.shape[0])
        object.__setattr__(self, "entries", _freeze(sym))

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.entries + other.entries)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.entries - other.entries)

    def __rmul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(float(scalar) * self.entries)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A state: Hermitian, numerically PSD, unit-trace, with declared factors.

    ``dims`` lists the subsystem dimensions whose product is the total
    dimension.  Eigenvalues are computed once at construction and cached
    (descending) for the entropy functionals.
    """

    dims: tuple[int, ...]
    op: HermitianOperator
    eigenvalues: np.ndarray = field(init=False, compare=False, repr=False)

    def __init__(self, dims, op: HermitianOperator):
        dims = tuple(int(d) for d in dims)
        if any(d < 1 for d in dims) or not dims:
            raise DimensionMismatchError(f"invalid subsystem dims {dims}")
        if math.prod(dims) != op.dim:
            raise DimensionMismatchError(
                f"dims {dims} have product {math.prod(dims)} but matrix is "
                f"{op.dim}x{op.dim}"
            )
        eigs = _eigvalsh(op.entries)[::-1]
        if eigs[-1] < -EIGENVALUE_FLOOR:
            raise NotPositiveError(
                f"eigenvalue {eigs[-1]!r} below PSD floor -{EIGENVALUE_FLOOR:.0e}",
                eigenvalue=float(eigs[-1]),
            )
        tr = op.trace()
        if abs(tr - 1.0) > 1e-10:
            raise BadTraceError(tr, 1e-10)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "eigenvalues", _freeze(eigs))

    @property
    def mat(self) -> np.ndarray:
        return self.op.entries

    @property
    def total_dim(self) -> int:
        return self.op.dim

    def purity(self) -> float:
        return float(np.sum(self.eigenvalues**2))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (descending) and matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _eigvalsh(mat: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as exc:  # surface, never silently continue
        raise EigensolverError(f"eigvalsh failed: {exc}") from exc


def herm_eigen(h: HermitianOperator) -> Spectrum:
    """Full eigendecomposition with a reconstruction self-check.

    Raises EigensolverError if the solver does not converge or if
    V diag(w) V+ fails to reproduce the input within 1e-9.
    """
    try:
        w, v = np.linalg.eigh(h.entries)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed: {exc}") from exc
    w, v = w[::-1], v[:, ::-1]
    recon = (v * w) @ v.conj().T
    if np.max(np.abs(recon - h.entries)) > 1e-9:
        raise EigensolverError("eigendecomposition failed reconstruction check")
    return Spectrum(_freeze(w), _freeze(v))


def kron(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product, row-major: (a(x)b)[i*db+k, j*db+l] = a[i,j] b[k,l]."""
    return HermitianOperator(np.kron(a.entries, b.entries))


def identity(d: int) -> HermitianOperator:
    return HermitianOperator(np.eye(d, dtype=complex))


def _check_keep(keep, n: int) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep:
        raise DimensionMismatchError("keep set must be nonempty")
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(
            f"subsystem indices {keep} out of range for {n} factors"
        )
    return keep


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Restriction of ``rho`` to the subsystems in ``keep`` (0-based indices).

    Trace-preserving: for any observable a on the kept factors,
    Tr(result a) = Tr(rho (a embedded with identity on the traced factors)).
    """
    dims = rho.dims
    n = len(dims)
    keep = _check_keep(keep, n)
    if keep == tuple(range(n)):
        return rho
    t = rho.mat.reshape(*dims, *dims)
    nleft = n
    for i in [j for j in range(n) if j not in keep][::-1]:
        t = np.trace(t, axis1=i, axis2=i + nleft)
        nleft -= 1
    new_dims = tuple(dims[i] for i in keep)
    d = math.prod(new_dims)
    return DensityMatrix(new_dims, HermitianOperator(t.reshape(d, d)))


def permute_systems(mat: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder tensor factors of an operator; ``perm[i]`` is the old position
    of the factor that ends up at position ``i``."""
    dims = tuple(int(d) for d in dims)
    perm = list(perm)
    n = len(dims)
    t = mat.reshape(*dims, *dims)
    t = t.transpose(perm + [p + n for p in perm])
    d = math.prod(dims)
    return t.reshape(d, d)


def embed(a: HermitianOperator, dims, keep) -> HermitianOperator:
    """Extend an operator on the ``keep`` factors by identity on the rest,
    in the original subsystem order."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = _check_keep(keep, n)
    rest = [i for i in range(n) if i not in keep]
    if math.prod(dims[i] for i in keep) != a.dim:
        raise DimensionMismatchError(
            f"operator of dim {a.dim} does not act on factors {keep} of {dims}"
        )
    full = np.kron(a.entries, np.eye(math.prod([dims[i] for i in rest] or [1])))
    order = list(keep) + rest
    # factor j of the output must come from position order.index(j)
    perm = [order.index(j) for j in range(n)]
    out = permute_systems(full, [dims[i] for i in order], perm)
    return HermitianOperator(out)


def operator_abs(h: HermitianOperator) -> HermitianOperator:
    """Operator absolute value V diag(|w|) V+; PSD and commuting with h."""
    spec = herm_eigen(h)
    mat = (spec.eigenvectors * np.abs(spec.eigenvalues)) @ spec.eigenvectors.conj().T
    return HermitianOperator((mat + mat.conj().T) / 2.0)


def trace_norm(h: HermitianOperator) -> float:
    """Sum of absolute eigenvalues, Tr|h|."""
    return float(np.sum(np.abs(_eigvalsh(h.entries))))


def positive_negative_parts(
    h: HermitianOperator,
) -> tuple[HermitianOperator, HermitianOperator]:
    """Split h = P - N into PSD parts with exactly orthogonal supports.

    Both parts come from the same eigenbasis, so orthogonality holds by
    construction rather than by tolerance.
    """
    spec = herm_eigen(h)
    v = spec.eigenvectors
    pos = np.clip(spec.eigenvalues, 0.0, None)
    neg = np.clip(-spec.eigenvalues, 0.0, None)
    p = (v * pos) @ v.conj().T
    m = (v * neg) @ v.conj().T
    return (
        HermitianOperator((p + p.conj().T) / 2.0),
        HermitianOperator((m + m.conj().T) / 2.0),
    )


def validate_density(m, dims) -> DensityMatrix:
    """Admit a raw complex matrix as a DensityMatrix.

    Symmetrizes within the hermiticity tolerance, clamps eigenvalues in
    [-1e-10, 0) to zero provided the total clamped mass stays below 1e-9,
    renormalizes the trace (rejected if off by more than 1e-9), and returns
    the validated state.  Each failure mode raises a distinct error.
    """
    m = np.asarray(m, dtype=complex)
    dims = tuple(int(d) for d in dims)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    if math.prod(dims) != m.shape[0]:
        raise DimensionMismatchError(
            f"dims {dims} have product {math.prod(dims)} but matrix is "
            f"{m.shape[0]}x{m.shape[0]}"
        )
    deviation = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if deviation > HERMITICITY_TOL:
        raise NotHermitianError(deviation, HERMITICITY_TOL)
    h = (m + m.conj().T) / 2.0

    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigh failed: {exc}") from exc
    if w[0] < -EIGENVALUE_FLOOR:
        raise NotPositiveError(
            f"eigenvalue {w[0]!r} below PSD floor -{EIGENVALUE_FLOOR:.0e}",
            eigenvalue=float(w[0]),
        )
    negative = w < 0.0
    if negative.any():
        clamped_mass = float(-np.sum(w[negative]))
        if clamped_mass >= CLAMP_MASS_TOL:
            raise NotPositiveError(
                f"total clamped eigenvalue mass {clamped_mass:.3e} exceeds "
                f"{CLAMP_MASS_TOL:.0e}",
                eigenvalue=float(w[0]),
            )
        w = np.clip(w, 0.0, None)
        h = (v * w) @ v.conj().T
        h = (h + h.conj().T) / 2.0

    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise BadTraceError(tr, TRACE_TOL)
    # skip the division when already exact so admission is bitwise idempotent
    if abs(tr - 1.0) > 1e-14:
        h = h / tr
    return DensityMatrix(dims, HermitianOperator(h))


def with_dims(rho: DensityMatrix, dims) -> DensityMatrix:
    """Re-declare the subsystem split of a state (total dimension unchanged)."""
    dims = tuple(int(d) for d in dims)
    if math.prod(dims) != rho.total_dim:
        raise DimensionMismatchError(
            f"dims {dims} incompatible with total dimension {rho.total_dim}"
        )
    return DensityMatrix(dims, rho.op)
