"""Dual certificate for the truncate-and-relax SDP, plus exact moment identities.

The certificate for a planted labeling ``sigma`` is the signed Laplacian
``L_Gamma`` restricted to the complement of ``span{1, sigma}``.  If the third
smallest eigenvalue of ``Pi L_Gamma Pi`` is strictly positive, ``sigma sigma^T``
is the unique optimum of the relaxation.

The enumeration helpers (:func:`exact_expected_signed_laplacian`,
:func:`variance_span_check`) sum over every k-set and are meant for small n.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import Hypergraph, ModelParams, PartitionVector
from .errors import Asymmetric, EigFailure, InvalidParams, TooLarge
from .graph_ops import projector, signed_laplacian, weighted_projection

ENUM_MAX_N = 24
ENUM_MAX_K = 4


@dataclass(frozen=True)
class EigenRequest:
    matrix: np.ndarray
    accuracy: float | None = None

    def __post_init__(self):
        if self.accuracy is not None and not self.accuracy > 0:
            raise InvalidParams("accuracy must be positive")

    @property
    def tolerance(self) -> float:
        if self.accuracy is not None:
            return self.accuracy
        return 1e-9 * max(1.0, float(np.linalg.norm(self.matrix)))


def eig_sym(req: EigenRequest, vectors: bool = False, count: int | None = None):
    """Ascending eigenvalues of a dense symmetric matrix.

    With ``count`` only the smallest ``count`` eigenpairs are computed.  Returns
    ``w`` or ``(w, V)`` when ``vectors`` is set.
    """
    M = np.asarray(req.matrix, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidParams("matrix must be square")
    norm = float(np.linalg.norm(M))
    if np.linalg.norm(M - M.T) > 1e-12 * norm:
        raise Asymmetric("matrix is not symmetric")
    n = M.shape[0]
    subset = None
    if count is not None and count < n:
        subset = [0, count - 1]
    try:
        out = scipy.linalg.eigh(M, eigvals_only=not vectors, subset_by_index=subset,
                                check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigFailure(str(exc)) from exc
    return out


@dataclass(frozen=True)
class CertificateReport:
    lambda3: float
    success: bool
    spectrum_head: tuple[float, ...]
    tolerance_used: float

    def as_record(self) -> dict:
        rec = {"lambda3": self.lambda3, "success": self.success}
        for i, v in enumerate(self.spectrum_head, start=1):
            rec[f"eig{i}"] = v
        rec["tol"] = self.tolerance_used
        return rec


def gershgorin_bound(M: np.ndarray) -> float:
    return float(np.max(np.abs(M).sum(axis=1))) if M.size else 0.0


def certificate_matrix(L: np.ndarray, sigma: PartitionVector) -> np.ndarray:
    """``Pi L Pi`` as a symmetric float matrix."""
    P = projector(sigma)
    M = P @ L.astype(np.float64) @ P
    return (M + M.T) / 2


def certify(H: Hypergraph, sigma: PartitionVector, tol: float | None = None) -> CertificateReport:
    if sigma.n != H.n:
        raise InvalidParams(f"sigma has length {sigma.n}, expected {H.n}")
    if H.n < 4:
        raise InvalidParams("certificate needs n >= 4 (Pi has rank n - 2)")
    L = signed_laplacian(weighted_projection(H), sigma)
    if tol is None:
        tol = 1e-8 * max(1.0, gershgorin_bound(L))
    M = certificate_matrix(L, sigma)
    head = eig_sym(EigenRequest(M), count=4)
    lam3 = float(head[2])
    return CertificateReport(lam3, lam3 > tol, tuple(float(v) for v in head), float(tol))


# ---------------------------------------------------------------------------
# expectation and variance identities


def expected_certificate_gap(params: ModelParams) -> float:
    """Common eigenvalue of ``Pi E[L_Gamma] Pi`` on the range of ``Pi``."""
    n, k = params.n, params.k
    return (params.p - params.q) / 2 * n * math.comb(n // 2 - 2, k - 2)


def _check_enumerable(n: int, k: int) -> None:
    if n > ENUM_MAX_N or k > ENUM_MAX_K:
        raise TooLarge(f"enumeration capped at n <= {ENUM_MAX_N}, k <= {ENUM_MAX_K}")


def _all_ksets(n: int, k: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(n), k)), dtype=np.int64)


def edge_matrix(e, sigma: PartitionVector) -> np.ndarray:
    """``(1_e^T sigma_e) diag(sigma_e) - sigma_e sigma_e^T`` for a 1-based edge."""
    n = sigma.n
    sig_e = np.zeros(n)
    idx = np.asarray(tuple(e), dtype=np.int64) - 1
    sig_e[idx] = sigma.labels[idx]
    return sig_e.sum() * np.diag(sig_e) - np.outer(sig_e, sig_e)


def _edge_probabilities(params: ModelParams, labels: np.ndarray, sets: np.ndarray) -> np.ndarray:
    lab = labels[sets]
    in_cluster = np.all(lab == lab[:, :1], axis=1)
    return np.where(in_cluster, params.p, params.q)


def exact_expected_signed_laplacian(params: ModelParams, sigma: PartitionVector) -> np.ndarray:
    """``E[L_Gamma]`` summed exactly over every k-set."""
    n, k = params.n, params.k
    _check_enumerable(n, k)
    if sigma.n != n:
        raise InvalidParams("sigma length mismatch")
    s = sigma.labels.astype(np.float64)
    sets = _all_ksets(n, k)
    probs = _edge_probabilities(params, sigma.labels, sets)
    EL = np.zeros((n, n))
    signs = s[sets]
    rowsum = signs.sum(axis=1)
    # diagonal part: (1_e^T sigma_e) sigma_i for i in e
    for a in range(k):
        np.add.at(EL, (sets[:, a], sets[:, a]), probs * rowsum * signs[:, a])
    for a in range(k):
        for b in range(k):
            np.add.at(EL, (sets[:, a], sets[:, b]), -probs * signs[:, a] * signs[:, b])
    return EL


def edge_quadratic_identities(e, sigma: PartitionVector) -> tuple[float, float]:
    """``(sigma^T Y_e sigma, tr Y_e)`` with ``Y_e = M_e Pi M_e`` built explicitly."""
    M = edge_matrix(e, sigma)
    Y = M @ projector(sigma) @ M
    s = sigma.labels.astype(np.float64)
    return float(s @ Y @ s), float(np.trace(Y))


def edge_quadratic_closed_forms(n: int, k: int, r: int) -> tuple[float, float]:
    """Closed forms of :func:`edge_quadratic_identities` for an edge with ``r`` minority labels.

    ``r = (k - 1_e^T sigma_e) / 2``.
    """
    sigma_form = 4 * k * r * (k - r) - 16 / n * r**2 * (k - r) ** 2
    trace_form = (k**3 - k**2) - 4 * (k - 2 + k / n) * r * (k - r)
    return sigma_form, trace_form


def variance_matrix(params: ModelParams, sigma: PartitionVector) -> np.ndarray:
    """``Sigma = sum_e E[A_e] Y_e`` by enumeration."""
    n, k = params.n, params.k
    _check_enumerable(n, k)
    sets = _all_ksets(n, k)
    probs = _edge_probabilities(params, sigma.labels, sets)
    P = projector(sigma)
    s = sigma.labels.astype(np.float64)
    total = np.zeros((n, n))
    for chunk in range(0, sets.shape[0], 2048):
        sub = sets[chunk:chunk + 2048]
        Ms = np.zeros((sub.shape[0], n, n))
        rows = np.arange(sub.shape[0])[:, None]
        sig = s[sub]
        Ms[rows[:, :, None], sub[:, :, None], sub[:, None, :]] = -sig[:, :, None] * sig[:, None, :]
        Ms[rows, sub, sub] += sig.sum(axis=1)[:, None] * sig
        Ys = Ms @ P @ Ms
        total += np.einsum("e,eij->ij", probs[chunk:chunk + 2048], Ys)
    return total


def variance_span_check(params: ModelParams, sigma: PartitionVector) -> tuple[float, float, float]:
    """Coefficients of ``Sigma`` on ``(1/n) sigma sigma^T`` and ``Pi``, plus the off-span residual."""
    Sig = variance_matrix(params, sigma)
    n = params.n
    s = sigma.labels.astype(np.float64)
    sSs = float(s @ Sig @ s)
    c1 = sSs / n
    c2 = (float(np.trace(Sig)) - sSs / n) / (n - 2)
    resid = Sig - c1 * np.outer(s, s) / n - c2 * projector(sigma)
    return c1, c2, float(np.linalg.norm(resid))
