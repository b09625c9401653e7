"""Dense complex linear algebra predicates shared by the whole toolkit.

All matrices are plain ``numpy.ndarray`` with complex128 entries; all
residuals are Frobenius norms.  Predicates return a :class:`CheckResult`
(a bool plus the residual that produced it) so verification reports can
surface the numbers, not just the verdicts.

Conventions
-----------
- ``is_*`` predicates never raise on a *failing* matrix, only on one with
  the wrong shape.
- Hermitian eigenvalues are computed on the symmetrised matrix
  ``(M + M*)/2``; a real symmetric fast path is used when the imaginary
  part is negligible (every construction in this package is real).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import NotOrderK, NotSquare

Matrix = np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """Numerical slack used by every check.

    eps_eq bounds equality residuals (Frobenius); eps_psd is the slack below
    zero allowed for the smallest eigenvalue of a positive-semidefinite
    certificate matrix.
    """

    eps_eq: float = 1e-9
    eps_psd: float = 1e-8

    def __post_init__(self):
        if not (self.eps_eq > 0 and self.eps_psd > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    residual: float

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Check:
    """One named pass/fail line of a report.

    kind is "relation" for defining relations, "derived" for consequences
    that must follow if the relations hold (a derived failure flags an
    internal inconsistency), and "info" for recorded-but-not-judged data.
    """

    name: str
    ok: bool
    residual: float
    kind: str = "relation"
    detail: str = ""


@dataclass(frozen=True)
class Report:
    title: str
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks if c.kind != "info")

    @property
    def max_residual(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and c.kind != "info"]

    def lines(self) -> Iterator[str]:
        yield f"{self.title}: {'PASS' if self.passed else 'FAIL'}"
        for c in self.checks:
            mark = "ok " if c.ok else "FAIL"
            extra = f"  ({c.detail})" if c.detail else ""
            yield f"  [{mark}] {c.name}: residual {c.residual:.3e}{extra}"


def as_complex_matrix(m) -> Matrix:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise NotSquare(f"expected a matrix, got array of ndim {a.ndim}")
    return a


def require_square(m) -> Matrix:
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    return a


def frobenius(m) -> float:
    return float(np.linalg.norm(m))


def is_unitary(m, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """M*M = I and MM* = I within eps_eq; residual is the larger deviation."""
    a = require_square(m)
    eye = np.eye(a.shape[0])
    res = max(frobenius(a.conj().T @ a - eye), frobenius(a @ a.conj().T - eye))
    return CheckResult(res <= tol.eps_eq, res)


def is_projection(m, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """M self-adjoint and idempotent within eps_eq."""
    a = require_square(m)
    res = max(frobenius(a @ a - a), frobenius(a.conj().T - a))
    return CheckResult(res <= tol.eps_eq, res)


def is_partial_isometry(m, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """M M* M = M within eps_eq."""
    a = require_square(m)
    res = frobenius(a @ a.conj().T @ a - a)
    return CheckResult(res <= tol.eps_eq, res)


def min_eigenvalue_hermitian(m) -> float:
    """Smallest eigenvalue of the symmetrisation (M + M*)/2.

    Falls back to the real symmetric solver when the symmetrised matrix is
    real to machine precision; at the 1296x1296 sizes produced by 6-vertex
    Choi matrices that is ~4x faster than the complex path.
    """
    a = require_square(m)
    h = (a + a.conj().T) / 2.0
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if float(np.max(np.abs(h.imag))) <= 1e-14 * scale:
        w = np.linalg.eigvalsh(h.real)
    else:
        w = np.linalg.eigvalsh(h)
    return float(w[0])


def spectral_projections(u, k: int, tol: Tolerance = DEFAULT_TOL) -> list[Matrix]:
    """Spectral projections of a unitary of finite order k.

    For u with u**k = I and w = exp(2 pi i / k), returns
    e_a = (1/k) sum_b w**(-a b) u**b, a = 0..k-1, which satisfy
    sum_a e_a = I and sum_a w**a e_a = u.

    Raises NotOrderK when ||u**k - I|| exceeds eps_eq.
    """
    a = require_square(u)
    if k < 1:
        raise NotOrderK(f"order must be a positive integer, got {k}")
    powers = [np.eye(a.shape[0], dtype=complex)]
    for _ in range(k):
        powers.append(powers[-1] @ a)
    res = frobenius(powers[k] - powers[0])
    if res > tol.eps_eq:
        raise NotOrderK(f"matrix is not of order {k}: ||u^{k} - I|| = {res:.3e}")
    omega = np.exp(2j * np.pi / k)
    return [
        sum(omega ** (-idx * b) * powers[b] for b in range(k)) / k
        for idx in range(k)
    ]


def random_unitary(dim: int, rng: np.random.Generator) -> Matrix:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
