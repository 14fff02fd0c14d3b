"""Linear systems x = Ax + b solved by Picard iteration in the S_1 metric.

The map Tx = Ax + b contracts S_1 with constant equal to the largest
column sum of |a_ij|, so a column-sum norm below 1 yields a Banach
certificate with b = 1. ``direct_solve`` is an independent Gaussian
elimination used as the oracle.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError, SingularMatrixError
from .fixpoint import (
    DEFAULT_EPS,
    DEFAULT_MAX_ITERS,
    CertKind,
    ContractionCertificate,
    IterationTrace,
    SelfMap,
    certify,
    picard,
)
from .metrics import s1

log = logging.getLogger(__name__)

PIVOT_TOL = 1e-12


class Form(enum.Enum):
    FIXED_POINT = "FIXED_POINT"  # x = A x + rhs
    STANDARD = "STANDARD"  # A x = rhs


@dataclass(frozen=True)
class LinearSystem:
    A: np.ndarray
    rhs: np.ndarray
    form: Form = Form.FIXED_POINT

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        rhs = np.array(self.rhs, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise InputError(f"matrix must be square and nonempty, got shape {A.shape}")
        if rhs.shape[0] != A.shape[0]:
            raise InputError(f"rhs has length {rhs.shape[0]}, matrix is {A.shape[0]}x{A.shape[0]}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(rhs))):
            raise InputError("matrix and rhs entries must be finite")
        A.flags.writeable = False
        rhs.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "form", Form(self.form))

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass
class Solution:
    x: np.ndarray
    trace: IterationTrace
    certificate: ContractionCertificate

    @property
    def converged(self) -> bool:
        return self.trace.termination.value == "CONVERGED"


def column_sum_norm(A) -> float:
    A = np.asarray(A, dtype=float)
    return float(np.abs(A).sum(axis=0).max())


def to_fixed_point_form(sys: LinearSystem) -> LinearSystem:
    """Rewrite C x = d as x = (I - C) x + d."""
    if sys.form is not Form.STANDARD:
        raise InputError("system is already in fixed-point form")
    return LinearSystem(np.eye(sys.n) - sys.A, sys.rhs, Form.FIXED_POINT)


def affine_self_map(A: np.ndarray, rhs: np.ndarray) -> SelfMap:
    A = np.asarray(A, dtype=float)
    rhs = np.asarray(rhs, dtype=float)

    def t(x):
        return tuple(float(v) for v in A @ np.asarray(x) + rhs)

    return SelfMap("affine-system", t)


def solve_iterative(sys: LinearSystem, eps: float = DEFAULT_EPS,
                    max_iters: int = DEFAULT_MAX_ITERS) -> Solution:
    if sys.form is not Form.FIXED_POINT:
        raise InputError("solve_iterative expects a fixed-point form system; use to_fixed_point_form")
    metric = s1(sys.n)
    h = column_sum_norm(sys.A)
    cert = certify(CertKind.BANACH, metric, h=h)
    if not cert.valid:
        log.warning("column-sum norm %s >= 1: no contraction certificate, heuristic stopping", h)
    trace = picard(metric, affine_self_map(sys.A, sys.rhs), tuple(sys.rhs), cert if cert.valid else None,
                   eps=eps, max_iters=max_iters)
    x = np.array(trace.points[-1], dtype=float)
    return Solution(x, trace, cert)


def predicted_iterations(h: float, eps: float, s0: float) -> int:
    """ceil(log(eps (1 - h) / (2 s0)) / log h) + 1 for 0 < h < 1."""
    if not 0 < h < 1:
        raise InputError("prediction needs 0 < h < 1")
    return math.ceil(math.log(eps * (1 - h) / (2 * s0)) / math.log(h)) + 1


def direct_solve(C, d) -> np.ndarray:
    """Gaussian elimination with partial pivoting."""
    a = np.array(C, dtype=float)
    x = np.array(d, dtype=float).reshape(-1)
    n = x.shape[0]
    if a.shape != (n, n):
        raise InputError(f"shape mismatch: matrix {a.shape}, vector ({n},)")
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= PIVOT_TOL:
            raise SingularMatrixError(f"pivot {float(a[p, k])!r} at column {k} is below {PIVOT_TOL}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        for i in range(k + 1, n):
            lam = a[i, k] / a[k, k]
            if lam != 0.0:
                a[i, k:] -= lam * a[k, k:]
                x[i] -= lam * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


# ---------------------------------------------------------------------------
# file formats


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("matrix file is empty")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise InputError(f"first line must be the integer n, got {lines[0].strip()!r}") from None
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    rows = lines[1:]
    if len(rows) != n:
        raise InputError(f"expected {n} matrix rows, found {len(rows)}")
    out = np.empty((n, n))
    for i, row in enumerate(rows):
        vals = row.split()
        if len(vals) != n:
            raise InputError(f"row {i + 1} has {len(vals)} entries, expected {n}")
        out[i] = [_decimal(v) for v in vals]
    return out


def parse_vector(text: str, n: int | None = None) -> np.ndarray:
    vals = [_decimal(v) for v in text.split()]
    if not vals:
        raise InputError("vector file is empty")
    if n is not None and len(vals) != n:
        raise InputError(f"vector has {len(vals)} entries, expected {n}")
    return np.array(vals)


def _decimal(token: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise InputError(f"not a decimal number: {token!r}") from None
    if not math.isfinite(v):
        raise InputError(f"non-finite entry: {token!r}")
    return v


def format_vector(x) -> str:
    return "".join(f"{v:.17g}\n" for v in np.asarray(x, dtype=float))


def read_system(matrix_path, rhs_path, form: Form = Form.FIXED_POINT) -> LinearSystem:
    A = parse_matrix(Path(matrix_path).read_text())
    rhs = parse_vector(Path(rhs_path).read_text(), A.shape[0])
    return LinearSystem(A, rhs, form)
