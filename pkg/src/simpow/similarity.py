"""Structural similarity tests for integer powers of a matrix.

A JordanSpec is the exact structural description of a matrix: per
eigenvalue, the multiset of Jordan block sizes.  The verdicts implement
the characterization of when A^p and A^q are similar, for invertible and
singular A, plus a purely numerical route that works directly on the two
power matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ClusteringAmbiguityError, NormalizationRequiredError
from .matrixcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    mat_int_pow,
    weyr_characteristic,
)
from .scalar import ExponentPair, RootOfUnity, rou_to_complex, snap_to_root_of_unity
from .spectra import (
    OrbitDecomposition,
    SpectrumMultiset,
    orbit_decomposition,
    order_bound,
    powers_equal,
)

DEFAULT_CLUSTER_TOL = 1e-6

JordanEigenvalue = RootOfUnity | complex | None  # None encodes 0


class FailureReason(str, enum.Enum):
    SPECTRA_POWER_MISMATCH = "spectra-power-mismatch"
    ORBIT_MULTIPLICITY_MISMATCH = "orbit-multiplicity-mismatch"
    JORDAN_STRUCTURE_MISMATCH = "jordan-structure-mismatch-in-orbit"
    NILPOTENT_PART_TOO_DEEP = "nilpotent-part-too-deep"
    NON_ROOT_OF_UNITY = "non-root-of-unity-eigenvalue"


@dataclass(frozen=True)
class JordanEntry:
    """One eigenvalue with its multiset of Jordan block sizes."""

    eigenvalue: JordanEigenvalue
    blocks: tuple[int, ...]

    def __post_init__(self):
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise ValueError(f"block sizes must be positive, got {self.blocks}")
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, reverse=True)))

    @property
    def multiplicity(self) -> int:
        return sum(self.blocks)


@dataclass(frozen=True)
class JordanSpec:
    entries: tuple[JordanEntry, ...]

    def __post_init__(self):
        eigenvalues = [e.eigenvalue for e in self.entries]
        if len(set(map(_ev_key, eigenvalues))) != len(eigenvalues):
            raise ValueError("eigenvalues must be pairwise distinct")

    @property
    def n(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def zero_entry(self) -> JordanEntry | None:
        for e in self.entries:
            if e.eigenvalue is None:
                return e
        return None

    def invertible_part(self) -> "JordanSpec":
        return JordanSpec(tuple(e for e in self.entries if e.eigenvalue is not None))

    def spectrum(self) -> SpectrumMultiset:
        """Multiset spectrum; only valid when all eigenvalues are 0 or roots of unity."""
        pairs = []
        for e in self.entries:
            if isinstance(e.eigenvalue, complex):
                raise ValueError("spectrum undefined for non-root-of-unity eigenvalues")
            pairs.append((e.eigenvalue, e.multiplicity))
        return SpectrumMultiset(tuple(pairs))

    def to_json(self) -> list:
        out = []
        for e in self.entries:
            ev = e.eigenvalue
            if ev is None:
                key = "zero"
            elif isinstance(ev, RootOfUnity):
                key = str(ev)
            else:
                key = [ev.real, ev.imag]
            out.append({"eigenvalue": key, "blocks": list(e.blocks)})
        return out

    @classmethod
    def from_json(cls, data: list) -> "JordanSpec":
        entries = []
        for item in data:
            ev = item["eigenvalue"]
            if ev == "zero":
                parsed: JordanEigenvalue = None
            elif isinstance(ev, str):
                parsed = RootOfUnity.from_str(ev)
            else:
                parsed = complex(ev[0], ev[1])
            entries.append(JordanEntry(parsed, tuple(item["blocks"])))
        return cls(tuple(entries))


def _ev_key(ev: JordanEigenvalue):
    if ev is None:
        return ("zero",)
    if isinstance(ev, RootOfUnity):
        return ("rou", ev.num, ev.order)
    return ("c", complex(ev))


def _ev_complex(ev: JordanEigenvalue) -> complex:
    if ev is None:
        return 0j
    if isinstance(ev, RootOfUnity):
        return rou_to_complex(ev)
    return complex(ev)


@dataclass
class SimilarityVerdict:
    similar: bool
    failure_reason: FailureReason | None = None
    orbit_report: OrbitDecomposition | None = None
    certificate: str | None = None

    def to_json(self) -> dict:
        return {
            "similar": self.similar,
            "failure_reason": self.failure_reason.value if self.failure_reason else None,
            "orbits": self.orbit_report.to_json() if self.orbit_report else None,
            "certificate": self.certificate,
        }


def jordan_block(ev: complex, size: int) -> np.ndarray:
    return ev * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)


def matrix_from_spec(spec: JordanSpec, conjugate_seed: int | None = None) -> np.ndarray:
    """Materialize a concrete matrix with the given Jordan structure.

    With a seed, the direct sum of Jordan blocks is conjugated by a random
    unitary matrix (well-conditioned, so the structure survives numerically).
    """
    blocks = [
        jordan_block(_ev_complex(e.eigenvalue), size)
        for e in spec.entries
        for size in e.blocks
    ]
    n = spec.n
    a = np.zeros((n, n), dtype=complex)
    pos = 0
    for b in blocks:
        k = b.shape[0]
        a[pos : pos + k, pos : pos + k] = b
        pos += k
    if conjugate_seed is None:
        return a
    rng = np.random.default_rng(conjugate_seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, _ = np.linalg.qr(g)
    return q.conj().T @ a @ q


def _cluster_eigenvalues(values: np.ndarray, threshold: float) -> list[list[int]]:
    """Single-linkage clusters of points in the complex plane (as index lists).

    Raises ClusteringAmbiguityError when two distinct clusters come closer
    than twice the linking threshold, since the split would then be
    arbitrary.
    """
    k = len(values)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(values[i] - values[j]) <= threshold:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    clusters = sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            gap = min(abs(values[a] - values[b]) for a in clusters[i] for b in clusters[j])
            if gap < 2.0 * threshold:
                raise ClusteringAmbiguityError(
                    f"eigenvalue clusters separated by only {gap:.3e} at threshold {threshold:.3e}"
                )
    return clusters


def _blocks_from_weyr(dims: list[int], multiplicity: int) -> tuple[int, ...]:
    """Recover the Jordan block-size multiset from ker-dimension increments."""
    counts = [dims[0]] + [dims[k] - dims[k - 1] for k in range(1, len(dims))]
    if any(c2 > c1 for c1, c2 in zip(counts, counts[1:])) or dims[-1] != multiplicity:
        raise ValueError(f"Weyr sequence {dims} inconsistent with multiplicity {multiplicity}")
    counts.append(0)
    blocks = []
    for size in range(1, len(dims) + 1):
        blocks.extend([size] * (counts[size - 1] - counts[size]))
    return tuple(sorted(blocks, reverse=True))


def spec_from_matrix(
    a: np.ndarray,
    pq: ExponentPair,
    cfg: ToleranceConfig = DEFAULT_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> JordanSpec:
    """Recover a JordanSpec numerically.

    Eigenvalues are clustered at cluster_tol relative to ||A||, snapped to
    roots of unity within the order bound for (p, q), and the block
    structure is read off the Weyr sequence at each cluster center.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n > 64:
        raise ValueError("numeric recovery supports n <= 64")
    scale = max(float(np.linalg.norm(a, 2)), 1.0)
    threshold = cluster_tol * scale
    values = np.linalg.eigvals(a)
    clusters = _cluster_eigenvalues(values, threshold)
    max_order = order_bound(pq, n)
    entries = []
    for cluster in clusters:
        center = complex(np.mean(values[cluster]))
        mult = len(cluster)
        if abs(center) <= threshold:
            ev: JordanEigenvalue = None
            center = 0j
        else:
            snapped = snap_to_root_of_unity(center, max_order, threshold)
            ev = snapped if snapped is not None else center
        dims = weyr_characteristic(a, center, mult, cfg)
        entries.append(JordanEntry(ev, _blocks_from_weyr(dims, mult)))
    return JordanSpec(tuple(entries))


def powers_similar_invertible(spec: JordanSpec, pq: ExponentPair) -> SimilarityVerdict:
    """Verdict for invertible matrices: A^p ~ A^q iff the power spectra agree
    as multisets and the Jordan structure is constant along every orbit."""
    for entry in spec.entries:
        if entry.eigenvalue is None:
            raise ValueError("invertible verdict called on a spec with eigenvalue 0")
        if isinstance(entry.eigenvalue, complex):
            return SimilarityVerdict(
                False,
                FailureReason.NON_ROOT_OF_UNITY,
                certificate=f"eigenvalue {entry.eigenvalue} is not a root of unity",
            )
    full = spec.spectrum()
    distinct = full.distinct()
    if not powers_equal(full, pq):
        if powers_equal(distinct, pq):
            # the distinct values align under the action but multiplicities
            # vary along an orbit
            reason = FailureReason.ORBIT_MULTIPLICITY_MISMATCH
        else:
            reason = FailureReason.SPECTRA_POWER_MISMATCH
        return SimilarityVerdict(False, reason)
    orbits = orbit_decomposition(full, pq)
    blocks_of = {_ev_key(e.eigenvalue): e.blocks for e in spec.entries}
    for orbit in orbits.orbits:
        structures = {blocks_of[_ev_key(ev)] for ev in orbit.members}
        if len(structures) > 1:
            members = " -> ".join(str(ev) for ev in orbit.members)
            return SimilarityVerdict(
                False,
                FailureReason.JORDAN_STRUCTURE_MISMATCH,
                orbit_report=orbits,
                certificate=f"orbit [{members}] carries block multisets {sorted(structures)}",
            )
    return SimilarityVerdict(True, orbit_report=orbits)


def powers_similar_general(spec: JordanSpec, pq: ExponentPair) -> SimilarityVerdict:
    """Verdict allowing a singular part; requires 1 <= p < q in that case."""
    zero = spec.zero_entry()
    if zero is None:
        return powers_similar_invertible(spec, pq)
    if not (1 <= pq.p < pq.q):
        raise NormalizationRequiredError(
            f"singular case needs 1 <= p < q, got (p,q)=({pq.p},{pq.q})"
        )
    if max(zero.blocks) > pq.p:
        return SimilarityVerdict(
            False,
            FailureReason.NILPOTENT_PART_TOO_DEEP,
            certificate=f"nilpotent block of size {max(zero.blocks)} exceeds p={pq.p}",
        )
    invertible = spec.invertible_part()
    if not invertible.entries:
        return SimilarityVerdict(True)
    return powers_similar_invertible(invertible, pq)


def powers_similar_numeric(
    a: np.ndarray,
    pq: ExponentPair,
    cfg: ToleranceConfig = DEFAULT_TOL,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
) -> SimilarityVerdict:
    """Direct numerical test: match the spectra of A^p and A^q, then compare
    Weyr sequences eigenvalue by eigenvalue."""
    a = as_matrix(a)
    ap = mat_int_pow(a, pq.p, cfg)
    aq = mat_int_pow(a, pq.q, cfg)
    scale = max(float(np.linalg.norm(ap, 2)), float(np.linalg.norm(aq, 2)), 1.0)
    threshold = cluster_tol * scale
    ev_p, ev_q = np.linalg.eigvals(ap), np.linalg.eigvals(aq)
    values = np.concatenate([ev_p, ev_q])
    n = a.shape[0]
    for cluster in _cluster_eigenvalues(values, threshold):
        center = complex(np.mean(values[cluster]))
        count_p = sum(1 for i in cluster if i < n)
        count_q = len(cluster) - count_p
        if count_p != count_q:
            return SimilarityVerdict(
                False,
                FailureReason.SPECTRA_POWER_MISMATCH,
                certificate=f"multiplicity of {center:.6g}: {count_p} in A^p vs {count_q} in A^q",
            )
        depth = count_p
        weyr_p = weyr_characteristic(ap, center, depth, cfg)
        weyr_q = weyr_characteristic(aq, center, depth, cfg)
        if weyr_p != weyr_q:
            near_zero = abs(center) <= threshold
            reason = (
                FailureReason.NILPOTENT_PART_TOO_DEEP
                if near_zero
                else FailureReason.JORDAN_STRUCTURE_MISMATCH
            )
            return SimilarityVerdict(
                False,
                reason,
                certificate=f"Weyr at {center:.6g}: {weyr_p} vs {weyr_q}",
            )
    return SimilarityVerdict(True)
