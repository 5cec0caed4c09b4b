"""Principal logarithm, exponential, phi-function and Hermite polynomial forms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import EigenvalueOnCutError, ExpOverflowError, InterpolationError
from .linalg import as_matrix, fro, schur_decompose

FUNCTION_NAMES = ("log", "exp", "phi")

# degree-13 diagonal Pade coefficients for exp
_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
)
_THETA13 = 5.37

# Gauss-Legendre rule on [0, 1]: the degree-7 diagonal Pade approximant of
# log(1 + x) is sum_j w_j x / (1 + t_j x).
_GL_X, _GL_W = np.polynomial.legendre.leggauss(7)
_LOG_NODES = 0.5 * (_GL_X + 1.0)
_LOG_WEIGHTS = 0.5 * _GL_W


@dataclass(frozen=True)
class CutCheckReport:
    eigenvalues: tuple
    min_cut_distance: float
    off_cut: bool
    low_confidence: bool = False


def cut_distance(z: complex) -> float:
    """Distance from *z* to the half-line ]-inf, 0]."""
    return abs(z.imag) if z.real <= 0.0 else abs(z)


def check_spectrum_off_cut(a, tols: Tolerances = DEFAULT) -> CutCheckReport:
    eig = schur_decompose(a, tols).eigenvalues
    dist = min(cut_distance(complex(z)) for z in eig)
    off = bool(dist > tols.cut)
    return CutCheckReport(
        tuple(complex(z) for z in eig), float(dist), off, off and dist < tols.low_confidence_cut
    )


def _require_off_cut(eig, tols: Tolerances):
    for z in eig:
        z = complex(z)
        if cut_distance(z) <= tols.cut:
            raise EigenvalueOnCutError(
                f"eigenvalue {z.real:.17g}{z.imag:+.17g}i lies on the cut ]-inf,0]", eigenvalue=z
            )


# ---------------------------------------------------------------- exp


def _pade13(a: np.ndarray) -> np.ndarray:
    b = _PADE13
    ident = np.eye(a.shape[0], dtype=np.complex128)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return np.linalg.solve(v - u, v + u)


def _exp_pair(l1: complex, l2: complex, t12: complex) -> complex:
    """Off-diagonal entry of exp([[l1, t12], [0, l2]]) without cancellation."""
    mid = 0.5 * (l1 + l2)
    half = 0.5 * (l1 - l2)
    if abs(half) < 1e-5:
        h2 = half * half
        sinch = 1.0 + h2 / 6.0 * (1.0 + h2 / 20.0 * (1.0 + h2 / 42.0))
    else:
        sinch = np.sinh(half) / half
    return t12 * np.exp(mid) * sinch


def _triangular_fixup(x: np.ndarray, t: np.ndarray, scale: float) -> None:
    """Overwrite diagonal and first superdiagonal of ``x`` with exact values."""
    n = t.shape[0]
    d = np.diag(t) * scale
    x[np.diag_indices(n)] = np.exp(d)
    for i in range(n - 1):
        x[i, i + 1] = _exp_pair(d[i], d[i + 1], t[i, i + 1] * scale)


def mat_exp(a, tols: Tolerances = DEFAULT) -> np.ndarray:
    """Matrix exponential by scaling and squaring with a [13/13] Pade approximant.

    For upper triangular input the diagonal and first superdiagonal are
    recomputed exactly at every squaring stage.
    """
    a = as_matrix(a)
    norm_f = fro(a)
    if norm_f > tols.exp_norm_budget:
        raise ExpOverflowError(f"|A|_F = {norm_f:.3e} exceeds exponent budget {tols.exp_norm_budget:g}")
    if norm_f == 0.0:
        return np.eye(a.shape[0], dtype=np.complex128)
    norm1 = float(np.abs(a).sum(axis=0).max())
    s = max(0, int(math.ceil(math.log2(norm1 / _THETA13)))) if norm1 > _THETA13 else 0
    scaled = a / (2.0 ** s)
    x = _pade13(scaled)
    triangular = not np.any(np.tril(a, -1))
    if triangular:
        _triangular_fixup(x, a, 2.0 ** -s)
    for k in range(s - 1, -1, -1):
        x = x @ x
        if triangular:
            _triangular_fixup(x, a, 2.0 ** -k)
    return x


# ---------------------------------------------------------------- log


def _sqrt_upper(t: np.ndarray) -> np.ndarray:
    """Principal square root of an upper triangular matrix (column recurrence)."""
    n = t.shape[0]
    r = np.zeros_like(t)
    d = np.sqrt(np.diag(t))
    r[np.diag_indices(n)] = d
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            s = r[i, i + 1:j] @ r[i + 1:j, j]
            r[i, j] = (t[i, j] - s) / (d[i] + d[j])
    return r


def _log_unit(x: np.ndarray) -> np.ndarray:
    """Pade approximant of log(I + x) evaluated in partial-fraction form."""
    n = x.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    out = np.zeros_like(x)
    for node, weight in zip(_LOG_NODES, _LOG_WEIGHTS):
        out += weight * np.linalg.solve(ident + node * x, x)
    return out


def _log_upper(t: np.ndarray, tols: Tolerances) -> np.ndarray:
    n = t.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    diag0 = np.diag(t).copy()
    r = t
    k = 0
    while np.abs(r - ident).sum(axis=0).max() > tols.log_sqrt_target:
        if k >= tols.log_max_sqrts:
            raise InterpolationError(f"no convergence of square roots after {k} steps")
        r = _sqrt_upper(r)
        k += 1
    out = (2.0 ** k) * _log_unit(r - ident)
    out = np.triu(out)
    # diagonal directly from the scalar principal log
    out[np.diag_indices(n)] = np.log(diag0)
    return out


def mat_log_principal(a, tols: Tolerances = DEFAULT) -> np.ndarray:
    """Principal logarithm: ``exp(L) = A`` with spectrum of L in the strip |Im| < pi.

    Raises :class:`EigenvalueOnCutError` when the spectrum of *a* is within
    ``tols.cut`` of ]-inf, 0].
    """
    sf = schur_decompose(a, tols)
    _require_off_cut(sf.eigenvalues, tols)
    return sf.conjugate(_log_upper(sf.t, tols))


def log_with_cut(a, tols: Tolerances = DEFAULT):
    """One Schur factorization shared by the cut check and the logarithm.

    Returns ``(report, log)`` with ``log`` None when the spectrum is on the cut.
    """
    sf = schur_decompose(a, tols)
    eig = sf.eigenvalues
    dist = min(cut_distance(complex(z)) for z in eig)
    off = bool(dist > tols.cut)
    report = CutCheckReport(
        tuple(complex(z) for z in eig), float(dist), off, off and dist < tols.low_confidence_cut
    )
    if not off:
        return report, None
    return report, sf.conjugate(_log_upper(sf.t, tols))


# ---------------------------------------------------------------- phi


def mat_phi(a, tols: Tolerances = DEFAULT) -> np.ndarray:
    """``phi(A) = sum_k A^k/(k+1)!``, so that ``A phi(A) = e^A - I``."""
    sf = schur_decompose(a, tols)
    t = sf.t
    n = t.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    if np.min(np.abs(np.diag(t))) > tols.phi_solve_threshold:
        rhs = mat_exp(t, tols) - ident
        y = np.linalg.solve(t, rhs)
    else:
        # top-right block of exp([[T, I], [0, 0]])
        big = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        big[:n, :n] = t
        big[:n, n:] = ident
        y = mat_exp(big, tols)[:n, n:]
    y = np.triu(y)
    # the diagonal of phi(T) is known in closed form
    y[np.diag_indices(n)] = [_phi_derivative(z, 0) for z in np.diag(t)]
    return sf.conjugate(y)


# ---------------------------------------------------------------- Hermite form


def _phi_derivative(z: complex, j: int) -> complex:
    # phi^(j)(z) = int_0^1 s^j e^{sz} ds
    if abs(z) <= 1.0 + j:
        term = 1.0 + 0j
        total = 1.0 / (j + 1)
        k = 0
        while True:
            k += 1
            term *= z / k
            inc = term / (k + j + 1)
            total += inc
            if abs(inc) <= 1e-17 * abs(total) or k > 200:
                return total
    val = (np.exp(z) - 1.0) / z
    for m in range(1, j + 1):
        val = (np.exp(z) - m * val) / z
    return val


def _taylor_coeff(name: str, z: complex, j: int) -> complex:
    """f^(j)(z) / j! for the named function."""
    if name == "exp":
        return np.exp(z) / math.factorial(j)
    if name == "log":
        if j == 0:
            return np.log(z)
        return (-1) ** (j - 1) / (j * z ** j)
    if name == "phi":
        return _phi_derivative(z, j) / math.factorial(j)
    raise ValueError(f"unknown function {name!r}; expected one of {FUNCTION_NAMES}")


def _cluster(eig, radius: float):
    clusters: list[list[complex]] = []
    for z in sorted((complex(v) for v in eig), key=lambda w: (w.real, w.imag)):
        for c in clusters:
            if abs(np.mean(c) - z) <= radius:
                c.append(z)
                break
        else:
            clusters.append([z])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


@dataclass(frozen=True)
class PolynomialRep:
    """``f(A) = p(A)`` with ``p`` the Hermite interpolant of ``f`` on the spectrum.

    ``coefficients`` are monomial (ascending degree); evaluation uses the
    better-conditioned Newton form held in ``nodes``/``newton``.
    """

    coefficients: tuple
    base: str
    function: str
    nodes: tuple = field(repr=False)
    newton: tuple = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z):
        """Evaluate at a scalar or a square matrix."""
        if np.ndim(z) == 2:
            m = as_matrix(z)
            ident = np.eye(m.shape[0], dtype=np.complex128)
            acc = self.newton[-1] * ident
            for c, node in zip(self.newton[-2::-1], self.nodes[-2::-1]):
                acc = acc @ (m - node * ident) + c * ident
            return acc
        z = complex(z)
        acc = self.newton[-1]
        for c, node in zip(self.newton[-2::-1], self.nodes[-2::-1]):
            acc = acc * (z - node) + c
        return acc


def _annihilates(a: np.ndarray, clusters) -> bool:
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    q = ident
    scale = 1.0
    for z, k in clusters:
        shifted = a - z * ident
        for _ in range(k):
            q = q @ shifted
            scale *= max(1.0, fro(shifted))
    return fro(q) <= 1e-8 * scale


def _minimal_multiplicities(a: np.ndarray, clusters):
    """Lower cluster multiplicities to those of the minimal polynomial."""
    clusters = list(clusters)
    for i, (z, m) in enumerate(clusters):
        for k in range(1, m):
            trial = clusters[:i] + [(z, k)] + clusters[i + 1:]
            if _annihilates(a, trial):
                clusters[i] = (z, k)
                break
    return clusters


def polynomial_rep(a, f: str, tols: Tolerances = DEFAULT, base: str = "a") -> PolynomialRep:
    """Hermite interpolant ``p`` of ``f`` on the spectrum of *a*, so ``p(a) = f(a)``.

    Eigenvalues closer than ``tols.cluster_radius`` are merged into one node;
    node multiplicities are reduced to those of the minimal polynomial.
    """
    if f not in FUNCTION_NAMES:
        raise ValueError(f"unknown function {f!r}; expected one of {FUNCTION_NAMES}")
    a = as_matrix(a)
    eig = schur_decompose(a, tols).eigenvalues
    if f == "log":
        _require_off_cut(eig, tols)
    clusters = _minimal_multiplicities(a, _cluster(eig, tols.cluster_radius))
    if max(m for _, m in clusters) > tols.max_multiplicity:
        raise InterpolationError(
            f"eigenvalue cluster multiplicity exceeds cap {tols.max_multiplicity}"
        )
    nodes = [z for z, m in clusters for _ in range(m)]
    m = len(nodes)
    # confluent divided differences
    table = [[0j] * m for _ in range(m)]
    for i in range(m):
        table[i][0] = _taylor_coeff(f, nodes[i], 0)
    for j in range(1, m):
        for i in range(j, m):
            if nodes[i] == nodes[i - j]:
                table[i][j] = _taylor_coeff(f, nodes[i], j)
            else:
                table[i][j] = (table[i][j - 1] - table[i - 1][j - 1]) / (nodes[i] - nodes[i - j])
    newton = [table[i][i] for i in range(m)]
    # expand Newton form to monomial coefficients
    coeffs = np.zeros(m, dtype=np.complex128)
    basis = np.zeros(m, dtype=np.complex128)
    basis[0] = 1.0
    for k in range(m):
        coeffs += newton[k] * basis
        if k < m - 1:
            shifted = np.zeros_like(basis)
            shifted[1:] = basis[:-1]
            basis = shifted - nodes[k] * basis
    deg = m
    while deg > 1 and coeffs[deg - 1] == 0:
        deg -= 1
    return PolynomialRep(
        coefficients=tuple(complex(c) for c in coeffs[:deg]),
        base=base,
        function=f,
        nodes=tuple(nodes),
        newton=tuple(complex(c) for c in newton),
    )
