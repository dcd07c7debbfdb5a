"""Finite matrix realizations and numerical verification.

Everything here works on concrete numpy matrices: realizing a spectral
decomposition as a (optionally conjugated) matrix, eigendecomposing it with
an in-house cyclic Jacobi solver, and checking the structural identities
``T = K - F + alpha*V``, ``KF = 0``, positivity bounds and the converse
witness ``T*T = scriptK - scriptF + alpha**2 * V*V``.

The Jacobi kernel is the only eigensolver this package trusts for its own
results; numpy's LAPACK routines appear solely in test oracles.  When numba
is importable the kernel is jit-compiled, otherwise a pure-Python fallback
runs the same code (slowly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import PositiveTriple, StructuredDecomposition
from .errors import (
    AlphaZeroError,
    DimTooLargeError,
    DimTooSmallError,
    MalformedModelError,
    NoConvergenceError,
    NotHermitianError,
    NotInjectiveError,
    NotPSDError,
    ShapeMismatchError,
)
from .model import ABOVE, INF, MERGE_TOL

MAX_DIM = 1024
EIGEN_TOL = 1e-13
MAX_SWEEPS = 100

_MASK64 = (1 << 64) - 1


def _jacobi_sweeps(a, v, tol, max_sweeps):
    """Cyclic complex Jacobi on Hermitian ``a``; ``v`` accumulates the
    eigenvector basis.  Returns the sweep count, or -1 on non-convergence.

    The off-diagonal mass is summed directly each sweep: deriving it from
    ``norm(a)**2 - norm(diag)**2`` cancels catastrophically near
    convergence and stalls the test on rounding noise.
    """
    n = a.shape[0]
    norm_f = 0.0
    for i in range(n):
        for j in range(n):
            norm_f += a[i, j].real ** 2 + a[i, j].imag ** 2
    norm_f = math.sqrt(norm_f)
    if norm_f == 0.0:
        return 0
    thresh = tol * norm_f
    pivot_tol = thresh / (2.0 * n)
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) <= thresh:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= pivot_tol:
                    continue
                phase = apq / r
                tau = (a[p, p].real - a[q, q].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip + s * phase.conjugate() * aiq
                    a[i, q] = -s * phase * aip + c * aiq
                for j in range(n):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = c * apj + s * phase * aqj
                    a[q, j] = -s * phase.conjugate() * apj + c * aqj
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip + s * phase.conjugate() * viq
                    v[i, q] = -s * phase * vip + c * viq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


try:  # pragma: no cover - environment dependent
    from numba import njit

    _jacobi_kernel = njit(cache=True)(_jacobi_sweeps)
except ImportError:  # pragma: no cover
    _jacobi_kernel = _jacobi_sweeps


@dataclass(eq=False)
class EigenDecomposition:
    """Eigenvalues ascending (by real part, then imaginary) with matching
    eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass(eq=False)
class PolarPair:
    """``T = isometry @ modulus`` with the isometry vanishing on the kernel."""

    isometry: np.ndarray
    modulus: np.ndarray


@dataclass(eq=False)
class BlockForm:
    """Compression of an operator onto the range/kernel splitting of a
    Hermitian splitter matrix."""

    on_range: np.ndarray
    on_kernel: np.ndarray
    off_diagonal_norm: float
    range_dim: int
    kernel_dim: int
    basis: np.ndarray


@dataclass(eq=False)
class RealizedOperator:
    """A spectral decomposition materialized at finite dimension.

    ``matrix = unitary @ diag(diagonal) @ unitary*`` and the component
    matrices satisfy ``matrix = compact - finite + alpha * isometry`` by
    construction.  ``labels`` names each diagonal slot (k, cluster,
    identity, f, kernel) in entry order.
    """

    matrix: np.ndarray
    compact: np.ndarray
    finite: np.ndarray
    isometry: np.ndarray
    alpha: float
    diagonal: np.ndarray
    unitary: np.ndarray
    labels: tuple[str, ...]


@dataclass(frozen=True)
class WitnessReport:
    """Converse-direction witness data for ``T = K - F + alpha*V``."""

    identity_residual: float
    partial_isometry_defect: float
    script_k_min_eig: float
    script_f_min_eig: float
    an_predicted: bool


@dataclass(frozen=True)
class VerificationReport:
    """Numerical check of a structural decomposition; every defect is scaled
    by the relevant operand norms so ``ok`` compares against one tolerance."""

    ok: bool
    mode: str  # "positive" (V = I) or "polar"
    recombination_residual: float
    kf_residual: float
    k_hermitian_defect: float
    f_hermitian_defect: float
    k_psd_defect: float
    f_psd_defect: float
    f_bound_defect: float
    normality_defect: float
    partial_isometry_defect: float
    off_diagonal_norm: float
    witness_min_eig: float
    failures: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# core linear algebra


def _as_square(a, what: str) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeMismatchError(f"{what} must be a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ShapeMismatchError(f"{what} must be nonempty")
    return m


def _fro(a) -> float:
    return math.sqrt(float(np.sum(np.abs(a) ** 2)))


def hermitian_eigen(a, tol: float = EIGEN_TOL,
                    max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix by cyclic Jacobi.

    Raises NotHermitianError when the input is not Hermitian to working
    precision, DimTooLargeError beyond MAX_DIM, and NoConvergenceError if
    the off-diagonal mass survives ``max_sweeps`` sweeps.
    """
    m = _as_square(a, "eigensolver input")
    n = m.shape[0]
    if n > MAX_DIM:
        raise DimTooLargeError(f"dimension {n} exceeds the solver cap {MAX_DIM}")
    scale = max(_fro(m), 1.0)
    if _fro(m - m.conj().T) > 1e-10 * scale:
        raise NotHermitianError("eigensolver input is not Hermitian")
    work = np.ascontiguousarray((m + m.conj().T) / 2.0)
    basis = np.eye(n, dtype=np.complex128)
    sweeps = _jacobi_kernel(work, basis, float(tol), int(max_sweeps))
    if sweeps < 0:
        raise NoConvergenceError(
            f"Jacobi did not converge within {max_sweeps} sweeps at dimension {n}")
    values = np.real(np.diag(work)).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], basis[:, order], int(sweeps))


def positive_sqrt(a, tol: float = 1e-10) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix."""
    eig = hermitian_eigen(a)
    scale = max(float(np.max(np.abs(eig.values))), 1.0) if eig.values.size else 1.0
    if eig.values.size and float(eig.values[0]) < -tol * scale:
        raise NotPSDError(f"matrix has eigenvalue {eig.values[0]:.3e} below zero")
    roots = np.sqrt(np.clip(eig.values, 0.0, None))
    return (eig.vectors * roots) @ eig.vectors.conj().T


def polar_decompose(a, tol: float = 1e-12) -> PolarPair:
    """Polar factorization ``T = V|T|`` with V a partial isometry that is
    zero on the kernel of T (so V*V is the range projection of ``|T|``)."""
    t = _as_square(a, "polar input")
    gram = t.conj().T @ t
    eig = hermitian_eigen(gram)
    svals = np.sqrt(np.clip(eig.values, 0.0, None))
    modulus = (eig.vectors * svals) @ eig.vectors.conj().T
    top = float(svals[-1]) if svals.size else 0.0
    cutoff = tol * max(top, 1.0)
    keep = svals > cutoff
    iso = np.zeros_like(t)
    if np.any(keep):
        cols = eig.vectors[:, keep]
        images = (t @ cols) / svals[keep]
        iso = images @ cols.conj().T
    return PolarPair(iso, modulus)


def normal_eigen(a, gap_tol: float = 1e-8) -> EigenDecomposition:
    """Eigendecomposition of a normal matrix.

    Strategy: diagonalize the Hermitian part, group its eigenvalues by
    ``gap_tol`` gaps, then diagonalize the compressed skew part inside each
    group; eigenvalues are Rayleigh quotients of the final columns.  Known
    limitation: real parts of genuinely distinct eigenvalues that chain at
    spacing near ``gap_tol`` can merge groups and degrade the split, so
    callers with adversarial spectra should check residuals themselves.
    """
    t = _as_square(a, "normal eigensolver input")
    scale = max(_fro(t), 1.0)
    defect = _fro(t.conj().T @ t - t @ t.conj().T)
    if defect > 1e-9 * scale * scale:
        raise NotHermitianError("matrix is not normal: T*T and TT* differ")
    herm = (t + t.conj().T) / 2.0
    skew = (t - t.conj().T) / 2j
    base = hermitian_eigen(herm)
    level = gap_tol * max(float(np.max(np.abs(base.values))), 1.0) if base.values.size else 0.0
    n = t.shape[0]
    vectors = np.zeros((n, n), dtype=np.complex128)
    sweeps = base.sweeps
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and base.values[stop] - base.values[stop - 1] <= level:
            stop += 1
        cols = base.vectors[:, start:stop]
        if stop - start == 1:
            vectors[:, start:stop] = cols
        else:
            compressed = cols.conj().T @ skew @ cols
            inner = hermitian_eigen(compressed)
            sweeps += inner.sweeps
            vectors[:, start:stop] = cols @ inner.vectors
        start = stop
    values = np.array([vectors[:, j].conj() @ t @ vectors[:, j] for j in range(n)])
    order = np.lexsort((values.imag, values.real))
    return EigenDecomposition(values[order], vectors[:, order], sweeps)


# ---------------------------------------------------------------------------
# deterministic random unitaries


def _splitmix_uniforms(seed: int, count: int) -> np.ndarray:
    """splitmix64 stream mapped into (0, 1]; pure integer arithmetic so the
    sequence is identical on every platform."""
    out = np.empty(count, dtype=np.float64)
    z = seed & _MASK64
    for i in range(count):
        z = (z + 0x9E3779B97F4A7C15) & _MASK64
        x = z
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK64
        x = x ^ (x >> 31)
        out[i] = (x + 1) / 2.0 ** 64
    return out


def seeded_unitary(dim: int, seed: int) -> np.ndarray:
    """Deterministic unitary: seed 0 is the identity, any other seed drives
    a splitmix64 stream through Box-Muller into a complex Gaussian matrix,
    then Householder QR with the R-diagonal phases folded into Q."""
    if dim < 1:
        raise ShapeMismatchError(f"dimension must be positive, got {dim}")
    if seed == 0:
        return np.eye(dim, dtype=np.complex128)
    u = _splitmix_uniforms(seed, 2 * dim * dim)
    u1 = u[0::2].reshape(dim, dim)
    u2 = u[1::2].reshape(dim, dim)
    gauss = np.sqrt(-2.0 * np.log(u1)) * np.exp(2j * np.pi * u2)
    work = gauss.astype(np.complex128)
    q = np.eye(dim, dtype=np.complex128)
    for k in range(dim):
        x = work[k:, k].copy()
        nx = math.sqrt(float(np.sum(np.abs(x) ** 2)))
        if nx == 0.0:
            continue
        lead = x[0]
        ph = lead / abs(lead) if abs(lead) > 0 else 1.0
        x[0] += ph * nx
        nv = math.sqrt(float(np.sum(np.abs(x) ** 2)))
        if nv == 0.0:
            continue
        x /= nv
        work[k:, k:] -= 2.0 * np.outer(x, x.conj() @ work[k:, k:])
        q[:, k:] -= 2.0 * np.outer(q[:, k:] @ x, x.conj())
    for k in range(dim):
        d = work[k, k]
        if abs(d) > 0:
            q[:, k] *= d / abs(d)
    return q


# ---------------------------------------------------------------------------
# realization


def _round_robin(leftover: int, sinks: int) -> list[int]:
    counts = [0] * sinks
    for i in range(leftover):
        counts[i % sinks] += 1
    return counts


def _cluster_members(deltas, limit: complex, side: str, take: int):
    """First ``take`` cluster members; an explicit sequence shorter than the
    request repeats its last member to stand in for the unexpressed tail."""
    sign = 1.0 if side == ABOVE else -1.0
    members = [limit + sign * d for d in deltas.terms(take)]
    if members and len(members) < take:
        members += [members[-1]] * (take - len(members))
    return members


def _realize_slots(obj, dim: int):
    """Diagonal slot values (t, k, f, v, label) in canonical entry order."""
    slots: list[tuple[complex, complex, complex, complex, str]] = []

    if isinstance(obj, PositiveTriple):
        alpha = obj.alpha
        k_points = sorted(obj.k_entries.points, key=lambda p: -p.value.real)
        finite_needed = sum(p.mult for p in k_points)
        finite_needed += sum(e.mult for e in obj.f_entries)
        ident = obj.identity_multiplicity
        if ident != INF:
            finite_needed += ident
        if dim < finite_needed:
            raise DimTooSmallError(
                f"dimension {dim} cannot hold {finite_needed} finite directions")
        leftover = dim - finite_needed
        sinks = (["cluster"] if obj.k_entries.clusters else [])
        if ident == INF:
            sinks.append("identity")
        cluster_take = 0
        if sinks:
            shares = dict(zip(sinks, _round_robin(leftover, len(sinks))))
            cluster_take = shares.get("cluster", 0)
            ident_count = (ident if ident != INF else 0) + shares.get("identity", 0)
        else:
            ident_count = ident + leftover
        for p in k_points:
            for _ in range(p.mult):
                kk = p.value.real
                slots.append((alpha + kk, kk, 0.0, 1.0, "k"))
        if cluster_take:
            cl = obj.k_entries.clusters[0]
            for m in _cluster_members(cl.deltas, 0j, ABOVE, cluster_take):
                d = m.real
                slots.append((alpha + d, d, 0.0, 1.0, "cluster"))
        for _ in range(int(ident_count)):
            slots.append((alpha, 0.0, 0.0, 1.0, "identity"))
        for e in obj.f_entries:
            ff = e.value.real
            for _ in range(e.mult):
                slots.append((alpha - ff, 0.0, ff, 1.0, "f"))
        return alpha, slots

    if isinstance(obj, StructuredDecomposition):
        alpha = obj.alpha
        k_blocks = [b for b in obj.blocks if b.part == "k"]
        f_blocks = [b for b in obj.blocks if b.part == "f"]
        id_blocks = [b for b in obj.blocks if b.part == "identity"]
        for b in k_blocks + f_blocks:
            if b.mult == INF:
                raise MalformedModelError(
                    "compact and finite-rank blocks must have finite multiplicity")
        finite_needed = sum(b.mult for b in k_blocks + f_blocks)
        finite_needed += sum(b.mult for b in id_blocks if b.mult != INF)
        kern = obj.kernel_multiplicity
        if kern != INF:
            finite_needed += kern
        if dim < finite_needed:
            raise DimTooSmallError(
                f"dimension {dim} cannot hold {finite_needed} finite directions")
        leftover = dim - finite_needed
        sinks: list[tuple[str, int]] = [("cluster", i)
                                        for i in range(len(obj.cluster_blocks))]
        sinks += [("identity", i) for i, b in enumerate(id_blocks) if b.mult == INF]
        if kern == INF:
            sinks.append(("kernel", 0))
        share = {}
        if sinks:
            for key, c in zip(sinks, _round_robin(leftover, len(sinks))):
                share[key] = c
            pad_identity = pad_kernel = 0
        elif alpha > MERGE_TOL:
            pad_identity, pad_kernel = leftover, 0
        else:
            pad_identity, pad_kernel = 0, leftover
        for b in k_blocks:
            for _ in range(b.mult):
                slots.append((b.phase * (alpha + b.value), b.phase * b.value,
                              0.0, b.phase, "k"))
        for i, cb in enumerate(obj.cluster_blocks):
            for m in _cluster_members(cb.deltas, cb.limit, cb.side,
                                      share.get(("cluster", i), 0)):
                mag = abs(m)
                phase = m / mag if mag > 0 else 0.0
                slots.append((m, phase * (mag - alpha), 0.0, phase, "cluster"))
        for i, b in enumerate(id_blocks):
            take = b.mult if b.mult != INF else share.get(("identity", i), 0)
            for _ in range(int(take)):
                slots.append((b.phase * alpha, 0.0, 0.0, b.phase, "identity"))
        for _ in range(pad_identity):
            slots.append((alpha, 0.0, 0.0, 1.0, "identity"))
        for b in f_blocks:
            for _ in range(b.mult):
                slots.append((b.phase * (alpha - b.value), 0.0,
                              b.phase * b.value, b.phase, "f"))
        kern_count = (kern if kern != INF else share.get(("kernel", 0), 0))
        for _ in range(int(kern_count) + pad_kernel):
            slots.append((0.0, 0.0, 0.0, 0.0, "kernel"))
        return alpha, slots

    raise MalformedModelError(
        f"cannot realize object of type {type(obj).__name__}")


def realize_matrix(obj, dim: int, seed: int = 0) -> RealizedOperator:
    """Materialize a triple or structured decomposition at finite dimension.

    Diagonal entry order: compact-part points descending, cluster members,
    identity directions (including padding), finite-rank directions, kernel.
    Leftover dimensions are shared round-robin among the infinite parts
    (clusters, then infinite identity/kernel blocks); with no infinite part
    the slack pads the identity at ``alpha`` (kernel when ``alpha`` is 0).
    A nonzero ``seed`` conjugates every component by the same deterministic
    unitary.
    """
    if dim < 1:
        raise DimTooSmallError(f"dimension must be positive, got {dim}")
    if dim > MAX_DIM:
        raise DimTooLargeError(f"dimension {dim} exceeds the cap {MAX_DIM}")
    alpha, slots = _realize_slots(obj, dim)
    if len(slots) != dim:
        raise DimTooSmallError(
            f"entry layout used {len(slots)} of {dim} dimensions")
    t_diag = np.array([s[0] for s in slots], dtype=np.complex128)
    k_diag = np.array([s[1] for s in slots], dtype=np.complex128)
    f_diag = np.array([s[2] for s in slots], dtype=np.complex128)
    v_diag = np.array([s[3] for s in slots], dtype=np.complex128)
    labels = tuple(s[4] for s in slots)
    u = seeded_unitary(dim, seed)
    uh = u.conj().T

    def conj(d):
        return (u * d) @ uh

    return RealizedOperator(conj(t_diag), conj(k_diag), conj(f_diag),
                            conj(v_diag), alpha, t_diag, u, labels)


# ---------------------------------------------------------------------------
# structural verification


def block_form(a, splitter, tol: float = 1e-10) -> BlockForm:
    """Compress ``a`` onto range/kernel of a Hermitian splitter.

    The basis puts range eigenvectors first.  The off-diagonal norm is the
    larger Frobenius norm of the two coupling blocks; it vanishes exactly
    when the splitting reduces ``a``.
    """
    t = _as_square(a, "block form input")
    s = _as_square(splitter, "splitter")
    if s.shape != t.shape:
        raise ShapeMismatchError(
            f"splitter shape {s.shape} does not match operator shape {t.shape}")
    eig = hermitian_eigen(s)
    scale = max(float(np.max(np.abs(eig.values))), 1.0)
    in_range = np.abs(eig.values) > tol * scale
    order = np.concatenate([np.where(in_range)[0], np.where(~in_range)[0]])
    basis = eig.vectors[:, order]
    r = int(np.count_nonzero(in_range))
    b = basis.conj().T @ t @ basis
    off = max(_fro(b[:r, r:]), _fro(b[r:, :r]))
    return BlockForm(b[:r, :r], b[r:, r:], off, r, t.shape[0] - r, basis)


def inverse_via_blocks(k, f, alpha: float, tol: float = 1e-10) -> np.ndarray:
    """Inverse of ``T = K - F + alpha*I`` assembled blockwise.

    On the kernel of F the inverse is
    ``(1/alpha) * (I - K0 @ (K0 + alpha*I)**-1)`` and on the range of F it is
    ``(1/alpha) * (I + F0 @ (alpha*I - F0)**-1)``, each evaluated through the
    block's own eigendecomposition.  Requires ``alpha > 0`` and F strictly
    below alpha.
    """
    km = _as_square(k, "compact part")
    fm = _as_square(f, "finite-rank part")
    if km.shape != fm.shape:
        raise ShapeMismatchError(
            f"component shapes {km.shape} and {fm.shape} differ")
    if alpha <= tol:
        raise AlphaZeroError("blockwise inversion requires a positive shift")
    bf = block_form(fm, fm, tol)
    q_range = bf.basis[:, :bf.range_dim]
    q_kernel = bf.basis[:, bf.range_dim:]

    n = km.shape[0]
    inv = np.zeros((n, n), dtype=np.complex128)
    if bf.range_dim:
        f0 = q_range.conj().T @ fm @ q_range
        eig = hermitian_eigen(f0)
        gap = alpha - eig.values
        if np.any(gap <= tol * alpha):
            raise NotInjectiveError(
                "finite-rank part reaches alpha: operator has a kernel")
        factor = 1.0 + eig.values / gap
        br = (eig.vectors * (factor / alpha)) @ eig.vectors.conj().T
        inv += q_range @ br @ q_range.conj().T
    if bf.kernel_dim:
        k0 = q_kernel.conj().T @ km @ q_kernel
        eig = hermitian_eigen(k0)
        factor = 1.0 - eig.values / (eig.values + alpha)
        bk = (eig.vectors * (factor / alpha)) @ eig.vectors.conj().T
        inv += q_kernel @ bk @ q_kernel.conj().T
    return inv


def converse_witness(k, f, v, alpha: float, t=None,
                     tol: float = 1e-10) -> WitnessReport:
    """Check the witness identity behind the converse direction.

    With ``T = K - F + alpha*V``, expanding ``T*T`` gives
    ``scriptK - scriptF + alpha**2 * V*V`` where
    ``scriptK = K*K + alpha*(V*K + K*V)`` and
    ``scriptF = K*F + F*K + alpha*(V*F + F*V) - F*F``.
    Both script parts are positive semidefinite exactly when the
    decomposition is canonical, which is what ``an_predicted`` reports.
    """
    km = _as_square(k, "compact part")
    fm = _as_square(f, "finite-rank part")
    vm = _as_square(v, "isometry part")
    if not (km.shape == fm.shape == vm.shape):
        raise ShapeMismatchError("component shapes differ")
    tm = _as_square(t, "operator") if t is not None else km - fm + alpha * vm
    if tm.shape != km.shape:
        raise ShapeMismatchError("operator shape does not match components")

    kh = km.conj().T
    fh = fm.conj().T
    vh = vm.conj().T
    script_k = kh @ km + alpha * (vh @ km + kh @ vm)
    script_f = kh @ fm + fh @ km + alpha * (vh @ fm + fh @ vm) - fh @ fm
    gram = tm.conj().T @ tm
    vv = vh @ vm
    scale = max(_fro(gram), 1.0)
    identity_residual = _fro(gram - (script_k - script_f + alpha * alpha * vv)) / scale
    iso_defect = _fro(vv @ vv - vv) / max(_fro(vv), 1.0)

    script_k = (script_k + script_k.conj().T) / 2.0
    script_f = (script_f + script_f.conj().T) / 2.0
    k_min = float(hermitian_eigen(script_k).values[0])
    f_min = float(hermitian_eigen(script_f).values[0])
    an_predicted = (identity_residual <= 10.0 * tol
                    and iso_defect <= 10.0 * tol
                    and k_min >= -tol * scale
                    and f_min >= -tol * scale)
    return WitnessReport(identity_residual, iso_defect, k_min, f_min,
                         bool(an_predicted))


def verify_structure(t, k, f, v, alpha: float,
                     tol: float = 1e-10) -> VerificationReport:
    """Numerically verify ``T = K - F + alpha*V`` with all side conditions.

    Positive mode (V numerically the identity) checks K, F Hermitian
    positive semidefinite with ``F <= alpha*I``; polar mode checks T normal,
    V a partial isometry and ``F*F <= alpha**2*I`` instead.  Both modes
    check ``KF = 0`` in all adjoint placements, that the range/kernel
    splitting of F reduces T, and the converse witness positivity.
    """
    tm = _as_square(t, "operator")
    km = _as_square(k, "compact part")
    fm = _as_square(f, "finite-rank part")
    vm = _as_square(v, "isometry part")
    if not (tm.shape == km.shape == fm.shape == vm.shape):
        raise ShapeMismatchError("component shapes differ")
    if alpha < 0:
        raise MalformedModelError(f"alpha must be nonnegative, got {alpha}")
    n = tm.shape[0]
    scale = max(_fro(tm), 1.0)
    k_scale = max(_fro(km), 1.0)
    f_scale = max(_fro(fm), 1.0)

    positive_mode = _fro(vm - np.eye(n)) <= tol * math.sqrt(n)
    mode = "positive" if positive_mode else "polar"

    recomb = _fro(tm - (km - fm + alpha * vm)) / scale
    kf = max(_fro(km @ fm), _fro(km.conj().T @ fm),
             _fro(km @ fm.conj().T)) / (k_scale * f_scale)
    k_herm = _fro(km - km.conj().T) / k_scale
    f_herm = _fro(fm - fm.conj().T) / f_scale
    normality = _fro(tm.conj().T @ tm - tm @ tm.conj().T) / (scale * scale)
    vv = vm.conj().T @ vm
    iso = _fro(vv @ vv - vv) / max(_fro(vv), 1.0)

    k_psd = f_psd = f_bound = 0.0
    failures = []
    if positive_mode:
        if k_herm <= tol:
            k_psd = max(0.0, -float(hermitian_eigen((km + km.conj().T) / 2).values[0])) / k_scale
        if f_herm <= tol:
            f_eig = hermitian_eigen((fm + fm.conj().T) / 2)
            f_psd = max(0.0, -float(f_eig.values[0])) / f_scale
            f_bound = max(0.0, float(f_eig.values[-1]) - alpha) / max(alpha, 1.0)
        witness_src = converse_witness(km, fm, np.eye(n, dtype=np.complex128),
                                       alpha, tm, tol)
    else:
        ff = fm.conj().T @ fm
        f_top = float(hermitian_eigen(ff).values[-1]) if n else 0.0
        f_bound = max(0.0, f_top - alpha * alpha) / max(alpha * alpha, 1.0)
        witness_src = converse_witness(km, fm, vm, alpha, tm, tol)

    splitter = fm if f_herm <= tol else fm.conj().T @ fm
    bf = block_form(tm, splitter, tol)
    off = bf.off_diagonal_norm / scale

    checks = [
        ("recombination", recomb <= tol),
        ("kf_orthogonality", kf <= tol),
        ("reducing_subspaces", off <= tol),
        ("witness_identity", witness_src.identity_residual <= 10.0 * tol),
        ("witness_positivity", witness_src.an_predicted),
    ]
    if positive_mode:
        checks += [
            ("k_hermitian", k_herm <= tol),
            ("f_hermitian", f_herm <= tol),
            ("k_positive", k_psd <= tol),
            ("f_positive", f_psd <= tol),
            ("f_below_alpha", f_bound <= tol),
        ]
    else:
        checks += [
            ("normality", normality <= tol),
            ("partial_isometry", iso <= tol),
            ("f_below_alpha", f_bound <= tol),
        ]
    failures = tuple(name for name, good in checks if not good)
    return VerificationReport(
        ok=not failures,
        mode=mode,
        recombination_residual=recomb,
        kf_residual=kf,
        k_hermitian_defect=k_herm,
        f_hermitian_defect=f_herm,
        k_psd_defect=k_psd,
        f_psd_defect=f_psd,
        f_bound_defect=f_bound,
        normality_defect=normality,
        partial_isometry_defect=iso,
        off_diagonal_norm=off,
        witness_min_eig=witness_src.script_k_min_eig,
        failures=failures,
    )
