"""Hilbert-space embeddability of finite metric spaces.

A finite metric space embeds isometrically in Euclidean space exactly when
its doubly centred squared-distance matrix is positive semidefinite. The
most negative eigenvalue measures how far a space is from that, classical
scaling gives the best-effort Euclidean configuration, and the probe tracks
both across growing samples of a point family.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .diagram import check_order
from .exceptions import SizeLimitExceeded
from .lemma import lemma_embed, lp_distance_matrix
from .matching import distance_matrix
from .metric import FiniteMetricSpace

__all__ = [
    "Verdict",
    "EmbeddingCertificate",
    "DistortionReport",
    "ProbeRow",
    "gram_from_distances",
    "certify",
    "mds_embed",
    "distortion",
    "sample_family",
    "family_metric",
    "distortion_probe",
    "probe_csv",
    "certificate_to_dict",
    "HilbertCertifier",
    "FAMILIES",
    "DEFAULT_CAP",
]

DEFAULT_TOL = 1e-9
DEFAULT_CAP = 256
DEFAULT_DIM = 4
FAMILIES = ("euclidean", "lp", "random-lp-ball", "hypercube", "via-diagrams")


class Verdict(str, enum.Enum):
    EMBEDDABLE = "EMBEDDABLE"
    NOT_EMBEDDABLE = "NOT_EMBEDDABLE"


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Spectrum of the centred matrix, descending, plus the verdict it implies.

    ``points`` carries a realizing configuration for EMBEDDABLE verdicts.
    """

    eigenvalues: np.ndarray
    verdict: Verdict
    worst_negative: float
    tol: float
    points: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def ratio(self) -> float:
        """``|worst_negative|`` divided by the spectral radius (0 for a zero spectrum)."""
        scale = float(np.max(np.abs(self.eigenvalues), initial=0.0))
        return abs(self.worst_negative) / scale if scale > 0 else 0.0


@dataclass(frozen=True)
class DistortionReport:
    """How a map into Euclidean space distorts pairwise distances.

    ``rho_minus_gap`` is the largest shrink factor ``d(x, y) / |f(x) - f(y)|``,
    ``rho_plus_gap`` the largest stretch factor ``|f(x) - f(y)| / d(x, y)``,
    and ``multiplicative_distortion`` their product, which is what remains
    after the best uniform rescaling.
    """

    rho_minus_gap: float
    rho_plus_gap: float
    multiplicative_distortion: float


@dataclass(frozen=True)
class ProbeRow:
    n: int
    worst_negative: float
    ratio: float
    mds_distortion: float


def _as_metric(ms) -> FiniteMetricSpace:
    return ms if isinstance(ms, FiniteMetricSpace) else FiniteMetricSpace(ms)


def gram_from_distances(ms) -> np.ndarray:
    """``-1/2 J D^2 J`` with ``J = I - 11^T / n``."""
    D = _as_metric(ms).dist
    n = D.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    G = -0.5 * J @ (D * D) @ J
    return (G + G.T) / 2.0


def _spectrum(ms):
    w, V = np.linalg.eigh(gram_from_distances(ms))
    order = np.argsort(w, kind="stable")[::-1]
    w, V = w[order], V[:, order]
    # fix eigenvector signs so configurations are reproducible
    for k in range(V.shape[1]):
        if V[np.argmax(np.abs(V[:, k])), k] < 0:
            V[:, k] = -V[:, k]
    return w, V


def _configuration(w, V, tol):
    scale = float(np.max(np.abs(w), initial=0.0))
    keep = w > tol * scale if scale > 0 else np.zeros(len(w), dtype=bool)
    return V[:, keep] * np.sqrt(w[keep])


def certify(ms, tol: float = DEFAULT_TOL) -> EmbeddingCertificate:
    """Schoenberg test for isometric embeddability into a Hilbert space.

    The space is declared EMBEDDABLE when the most negative eigenvalue of the
    centred matrix is no lower than ``-tol`` times the spectral radius.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    w, V = _spectrum(ms)
    worst = float(min(w.min(), 0.0))
    scale = float(np.max(np.abs(w), initial=0.0))
    if worst >= -tol * scale:
        return EmbeddingCertificate(w, Verdict.EMBEDDABLE, worst, tol, _configuration(w, V, tol))
    return EmbeddingCertificate(w, Verdict.NOT_EMBEDDABLE, worst, tol)


def distortion(ms, points) -> DistortionReport:
    """Compare pairwise distances of ``points`` against the metric ``ms``.

    Pairs at distance zero in ``ms`` are skipped unless the map separates
    them, which counts as infinite stretch. No pairs at all means distortion 1.
    """
    D = _as_metric(ms).dist
    X = np.asarray(points, dtype=float).reshape(D.shape[0], -1)
    E = np.sqrt(np.maximum(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2), 0.0))
    iu = np.triu_indices(D.shape[0], k=1)
    d, e = D[iu], E[iu]
    if np.any((d == 0) & (e > 0)):
        return DistortionReport(math.nan, math.inf, math.inf)
    pos = d > 0
    if not np.any(pos):
        return DistortionReport(1.0, 1.0, 1.0)
    d, e = d[pos], e[pos]
    if np.any(e == 0):
        return DistortionReport(math.inf, math.nan, math.inf)
    shrink = float(np.max(d / e))
    stretch = float(np.max(e / d))
    return DistortionReport(shrink, stretch, shrink * stretch)


def mds_embed(ms, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, DistortionReport]:
    """Classical scaling from the nonnegative part of the spectrum.

    Returns the configuration (one row per point, one column per retained
    eigenvalue) and its distortion against ``ms``.
    """
    ms = _as_metric(ms)
    w, V = _spectrum(ms)
    X = _configuration(w, V, tol)
    return X, distortion(ms, X)


def sample_family(family: str, n: int, seed: int, order, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Point set of size ``n`` for a probe family; deterministic in ``(family, n, seed, p, dim)``.

    ``lp`` / ``random-lp-ball`` / ``via-diagrams`` share one sampler (uniform
    in the unit l_p ball of R^dim), so their point sets coincide for equal
    arguments. ``hypercube`` takes ``n`` distinct vertices of the smallest
    cube {0,1}^D with ``2^D >= n`` (all of them when ``n`` is a power of two).
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if n < 1:
        raise ValueError(f"sizes must be >= 1, got {n}")
    rng = np.random.default_rng([int(seed), int(n)])
    if family == "euclidean":
        return rng.standard_normal((n, dim))
    if family == "hypercube":
        D = max(1, math.ceil(math.log2(n)))
        ids = np.sort(rng.permutation(2**D)[:n])
        return ((ids[:, None] >> np.arange(D)[None, :]) & 1).astype(float)
    p = check_order(order)
    # generalized Gaussian direction, radius U^(1/dim): uniform on the l_p ball
    g = rng.gamma(1.0 / p, 1.0, size=(n, dim)) ** (1.0 / p)
    x = g * rng.choice([-1.0, 1.0], size=(n, dim))
    norms = (np.abs(x) ** p).sum(axis=1) ** (1.0 / p)
    radius = rng.uniform(size=n) ** (1.0 / dim)
    return x / norms[:, None] * radius[:, None]


def family_metric(family: str, n: int, seed: int, order, dim: int = DEFAULT_DIM) -> FiniteMetricSpace:
    """Metric space of size ``n`` drawn from ``family``."""
    pts = sample_family(family, n, seed, order, dim)
    if family == "euclidean":
        return FiniteMetricSpace(lp_distance_matrix(pts, 2))
    p = check_order(order)
    if family == "via-diagrams":
        return distance_matrix(lemma_embed(pts, p), p)
    return FiniteMetricSpace(lp_distance_matrix(pts, p))


def distortion_probe(
    family: str,
    order,
    sizes,
    seed: int,
    cap: int = DEFAULT_CAP,
    dim: int = DEFAULT_DIM,
    tol: float = DEFAULT_TOL,
) -> list[ProbeRow]:
    """Certificate and classical-scaling distortion for growing samples of a family."""
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ValueError("need at least one size")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError(f"sizes must be strictly ascending, got {sizes}")
    if max(sizes) > cap:
        raise SizeLimitExceeded(f"size {max(sizes)} exceeds the probe cap of {cap}")
    rows = []
    for n in sizes:
        ms = family_metric(family, n, seed, order, dim)
        cert = certify(ms, tol)
        _, report = mds_embed(ms, tol)
        rows.append(ProbeRow(n, cert.worst_negative, cert.ratio, report.multiplicative_distortion))
    return rows


def _num(x: float) -> str:
    return format(float(x), ".12g")


def probe_csv(rows) -> str:
    """Growth table as CSV text with header ``n,worst_negative,ratio,mds_distortion``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "worst_negative", "ratio", "mds_distortion"])
    for r in rows:
        writer.writerow([r.n, _num(r.worst_negative), _num(r.ratio), _num(r.mds_distortion)])
    return buf.getvalue()


def _round12(x: float):
    x = float(x)
    return float(_num(x)) if math.isfinite(x) else str(x)


def certificate_to_dict(cert: EmbeddingCertificate, p=None, distortion_value=None) -> dict:
    """JSON-ready record; numbers are rounded to 12 significant digits."""
    return {
        "n": cert.n,
        "p": None if p is None else float(p),
        "eigenvalues": [_round12(x) for x in cert.eigenvalues],
        "worst_negative": _round12(cert.worst_negative),
        "ratio": _round12(cert.ratio),
        "verdict": cert.verdict.value,
        "distortion": None if distortion_value is None else _round12(distortion_value),
    }


class HilbertCertifier(BaseEstimator):
    """Certify and classically scale a precomputed distance matrix.

    Parameters
    ----------
    tol : float, default=1e-9
        Relative eigenvalue tolerance.

    Attributes
    ----------
    certificate_ : EmbeddingCertificate
    eigenvalues_ : ndarray of shape (n,)
    embedding_ : ndarray of shape (n, n_components_)
    distortion_ : DistortionReport
    n_components_ : int
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        ms = _as_metric(X)
        self.certificate_ = certify(ms, self.tol)
        self.eigenvalues_ = self.certificate_.eigenvalues
        self.embedding_, self.distortion_ = mds_embed(ms, self.tol)
        self.n_components_ = self.embedding_.shape[1]
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_

    @property
    def embeddable_(self) -> bool:
        check_is_fitted(self, "certificate_")
        return self.certificate_.verdict is Verdict.EMBEDDABLE
