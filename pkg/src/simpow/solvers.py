"""Constructive solvers for the conjugacy equation B^-1 A^p B = A^q.

Two regimes are fully constructive:

* distinct eigenvalues: A = diag of one successor-cycle of roots of unity
  inside Z/(q^n - p^n), with B = diag(scale) times the cycle permutation;
* a single eigenvalue lambda with lambda^(q-p) = 1: the conjugate's
  nilpotent part is a polynomial in N whose coefficients are solved by
  matching powers of N, and a block-diagonal base conjugator B0 realizes
  it.  All other conjugators differ from B0 by an invertible matrix
  commuting with N, which is exposed as a membership test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidK1Error
from .matrixcore import DEFAULT_TOL, ToleranceConfig, as_matrix, is_invertible
from .scalar import ExponentPair, Residue, RootOfUnity, mod_inverse, rou_pow, rou_to_complex


@dataclass(frozen=True)
class CycleInstance:
    """A diagonal solution family with n distinct eigenvalues forming one cycle.

    The eigenvalues are exp(2*pi*i*k_u/Q) with Q = |q^n - p^n| and
    k_{u+1} = (p^-1 q) k_u in Z/Q.
    """

    n: int
    pq: ExponentPair
    modulus: int
    k1: Residue
    k_seq: tuple[Residue, ...]
    spectrum: tuple[RootOfUnity, ...]

    def diagonal_matrix(self) -> np.ndarray:
        return np.diag([rou_to_complex(ev) for ev in self.spectrum])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.pq.p,
            "q": self.pq.q,
            "Q": self.modulus,
            "k1": self.k1.value,
            "k_seq": [k.value for k in self.k_seq],
            "spectrum": [str(ev) for ev in self.spectrum],
        }


def _power_modulus(n: int, pq: ExponentPair) -> int:
    q_n = abs(pq.q**n - pq.p**n)
    if q_n == 0:
        raise ValueError(f"q^n = p^n for (p,q)=({pq.p},{pq.q}), n={n}")
    return q_n


def _excluded_divisors(n: int) -> list[int]:
    return [z for z in range(1, n) if n % z == 0]


def _violated_divisor(n: int, pq: ExponentPair, k1: int, modulus: int) -> int | None:
    """Strict divisor z of n whose excluded coset contains k1, if any."""
    for z in _excluded_divisors(n):
        step = modulus // abs(pq.q**z - pq.p**z)
        if k1 % step == 0:
            return z
    return None


def enumerate_valid_k1(n: int, pq: ExponentPair) -> list[Residue]:
    """All seed residues k1 whose cycle k_u = (p^-1 q)^(u-1) k1 has n distinct values.

    These are the residues outside every set (Q/|q^z - p^z|) Z/Q for strict
    divisors z of n.  Returned in increasing order.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    modulus = _power_modulus(n, pq)
    return [
        Residue(k1, modulus)
        for k1 in range(modulus)
        if _violated_divisor(n, pq, k1, modulus) is None
    ]


def build_cycle_instance(n: int, pq: ExponentPair, k1: int | Residue) -> CycleInstance:
    modulus = _power_modulus(n, pq)
    k1_value = k1.value if isinstance(k1, Residue) else k1 % modulus
    if isinstance(k1, Residue) and k1.modulus != modulus:
        raise ValueError(f"k1 has modulus {k1.modulus}, expected {modulus}")
    z = _violated_divisor(n, pq, k1_value, modulus)
    if z is not None:
        raise InvalidK1Error(
            f"k1={k1_value} lies in the excluded set for divisor z={z} of n={n}", z
        )
    step = (mod_inverse(pq.p, modulus).value * pq.q) % modulus if modulus > 1 else 0
    k_seq = [k1_value]
    for _ in range(n - 1):
        k_seq.append((k_seq[-1] * step) % modulus)
    if len(set(k_seq)) != n:
        raise InvalidK1Error(f"k1={k1_value} does not generate {n} distinct residues", n)
    return CycleInstance(
        n=n,
        pq=pq,
        modulus=modulus,
        k1=Residue(k1_value, modulus),
        k_seq=tuple(Residue(k, modulus) for k in k_seq),
        spectrum=tuple(RootOfUnity(k, modulus) for k in k_seq),
    )


def build_cycle_conjugator(inst: CycleInstance, scale) -> np.ndarray:
    """B = diag(scale) @ Sigma with Sigma the cycle permutation e_u -> e_{u+1}.

    For A = inst.diagonal_matrix() this gives B^-1 A^p B = A^q.
    """
    scale = [complex(s) for s in scale]
    if len(scale) != inst.n:
        raise ValueError(f"need {inst.n} scale entries, got {len(scale)}")
    if any(s == 0 for s in scale):
        raise ValueError("scale entries must be nonzero")
    n = inst.n
    sigma = np.zeros((n, n), dtype=complex)
    for j in range(n):
        sigma[(j + 1) % n, j] = 1.0
    return np.diag(scale) @ sigma


def _general_binomial(e: int, k: int) -> int:
    """Binomial coefficient e over k for any integer e (k >= 0)."""
    num = 1
    for i in range(k):
        num *= e - i
    return num // math.factorial(k)


@dataclass(frozen=True)
class SingleEigSolution:
    """Solution data for spectrum {lambda}: C = lambda*I + P(N), B0^-1 N B0 = P(N).

    The solution is exact: with lambda^(q-p) = 1, substituting M = lambda *
    Mtilde(N / lambda) reduces the coefficient solve to the lambda = 1 case,
    whose coefficients are rational.  Every entry of M and B0 is therefore a
    rational times a power of lambda; ``m_rational``/``b0_rational`` hold
    the rational parts and the float64 views are rounded from them.
    entry(M)[i][j] = m_rational[i][j] * lambda^(1+i-j),
    entry(B0)[i][j] = b0_rational[i][j] * lambda^(i-j).
    """

    lam: RootOfUnity
    block_sizes: tuple[int, ...]
    poly_coeffs: tuple  # alpha_1..alpha_{d-1}; Fractions when lam = 1, else complex
    m_matrix: np.ndarray
    b0: np.ndarray
    rational_coeffs: tuple[Fraction, ...]
    m_rational: tuple[tuple[Fraction, ...], ...]
    b0_rational: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return sum(self.block_sizes)

    def exact_m_entry(self, i: int, j: int) -> tuple[Fraction, RootOfUnity]:
        return self.m_rational[i][j], rou_pow(self.lam, 1 + i - j)

    def exact_b0_entry(self, i: int, j: int) -> tuple[Fraction, RootOfUnity]:
        return self.b0_rational[i][j], rou_pow(self.lam, i - j)

    def to_json(self) -> dict:
        from .matrixcore import matrix_to_json

        coeffs = [complex(c) for c in self.poly_coeffs]
        return {
            "lambda": str(self.lam),
            "blocks": list(self.block_sizes),
            "alpha": [[c.real, c.imag] for c in coeffs],
            "m_matrix": matrix_to_json(self.m_matrix),
            "b0": matrix_to_json(self.b0),
        }


def _poly_mul_trunc(a: list, b: list, d: int) -> list:
    out = [Fraction(0)] * d
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j < d:
                out[i + j] = out[i + j] + ai * bj
    return out


def _solve_rational_coeffs(d: int, pq: ExponentPair) -> list[Fraction]:
    """Rationals a_1..a_{d-1} with (1 + sum a_i N^i)^p = (1 + N)^q mod N^d."""
    rhs = [Fraction(_general_binomial(pq.q, k)) for k in range(d)]
    alphas: list[Fraction] = []
    for j in range(1, d):
        # coefficient of N^j with a_j set to 0; a_j enters only linearly
        # through the k = 1 term of the binomial expansion
        m_poly = [Fraction(0)] + alphas + [Fraction(0)] * (d - j)
        m_power = [Fraction(1)] + [Fraction(0)] * (d - 1)
        lhs_j = Fraction(0)
        for k in range(1, d):
            m_power = _poly_mul_trunc(m_power, m_poly, d)
            lhs_j += _general_binomial(pq.p, k) * m_power[j]
        alphas.append((rhs[j] - lhs_j) / pq.p)
    return alphas


def _rational_poly_block(alphas: list[Fraction], size: int) -> list[list[Fraction]]:
    """a_1 J + a_2 J^2 + ... on the Jordan block J_size, exactly (Toeplitz)."""
    coeffs = [Fraction(0)] + list(alphas[: size - 1])
    return [
        [coeffs[j - i] if 0 <= j - i < len(coeffs) else Fraction(0) for j in range(size)]
        for i in range(size)
    ]


def _rational_block_conjugator(m_block: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact B with B^-1 J B = M for one Jordan block.

    Columns of B^-1 are M^(r-1) e_r, ..., e_r; the inverse is computed by
    back substitution (the basis matrix is upper triangular) and normalized
    to a unit top-left entry.
    """
    r = len(m_block)
    vec = [Fraction(0)] * r
    vec[r - 1] = Fraction(1)
    cols = []
    for _ in range(r):
        cols.append(vec)
        vec = [sum(m_block[i][k] * vec[k] for k in range(r)) for i in range(r)]
    basis = [[cols[r - 1 - j][i] for j in range(r)] for i in range(r)]
    inverse = [[Fraction(1) if i == j else Fraction(0) for j in range(r)] for i in range(r)]
    for col in range(r):
        for i in range(r - 1, -1, -1):
            acc = inverse[i][col] - sum(
                basis[i][k] * inverse[k][col] for k in range(i + 1, r)
            )
            inverse[i][col] = acc / basis[i][i]
    scale = inverse[0][0]
    return [[entry / scale for entry in row] for row in inverse]


def _assemble_blocks(blocks: list[list[list[Fraction]]]) -> tuple[tuple[Fraction, ...], ...]:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    pos = 0
    for block in blocks:
        size = len(block)
        for i in range(size):
            for j in range(size):
                out[pos + i][pos + j] = block[i][j]
        pos += size
    return tuple(tuple(row) for row in out)


def solve_single_eigenvalue(
    lam: RootOfUnity, block_sizes, pq: ExponentPair
) -> SingleEigSolution:
    """Solve B^-1 A^p B = A^q for A = lam*I + N with N of given block sizes.

    Requires lam^(q-p) = 1 exactly.  Matching coefficients of N..N^(d-1) in
    (lam*I + sum alpha_i N^i)^p = (lam*I + N)^q determines the alphas
    uniquely with alpha_1 != 0; B0 is assembled block by block.  The whole
    computation is exact rational arithmetic twisted by powers of lambda.
    """
    block_sizes = tuple(sorted((int(b) for b in block_sizes), reverse=True))
    if not block_sizes or block_sizes[-1] < 1:
        raise ValueError(f"block sizes must be positive, got {block_sizes}")
    if rou_pow(lam, pq.q - pq.p).num != 0:
        raise ValueError(
            f"lambda = {lam} violates lambda^(q-p) = 1 for (p,q)=({pq.p},{pq.q})"
        )
    d = block_sizes[0]
    rational = _solve_rational_coeffs(d, pq)
    m_blocks = [_rational_poly_block(rational, size) for size in block_sizes]
    b_blocks = [_rational_block_conjugator(mb) for mb in m_blocks]
    m_rational = _assemble_blocks(m_blocks)
    b0_rational = _assemble_blocks(b_blocks)
    n = sum(block_sizes)
    m_matrix = np.zeros((n, n), dtype=complex)
    b0 = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if m_rational[i][j]:
                m_matrix[i, j] = float(m_rational[i][j]) * rou_to_complex(
                    rou_pow(lam, 1 + i - j)
                )
            if b0_rational[i][j]:
                b0[i, j] = float(b0_rational[i][j]) * rou_to_complex(rou_pow(lam, i - j))
    if lam.num == 0:
        poly_coeffs: tuple = tuple(rational)
    else:
        poly_coeffs = tuple(
            float(a) * rou_to_complex(rou_pow(lam, 1 - j))
            for j, a in enumerate(rational, start=1)
        )
    return SingleEigSolution(
        lam,
        block_sizes,
        poly_coeffs,
        m_matrix,
        b0,
        tuple(rational),
        m_rational,
        b0_rational,
    )


def nilpotent_from_blocks(block_sizes) -> np.ndarray:
    """Direct sum of Jordan nilpotent blocks (largest first)."""
    sizes = sorted((int(b) for b in block_sizes), reverse=True)
    n = sum(sizes)
    out = np.zeros((n, n), dtype=complex)
    pos = 0
    for size in sizes:
        out[pos : pos + size, pos : pos + size] = np.eye(size, k=1)
        pos += size
    return out


def commutes_with_n(
    candidate: np.ndarray, n_mat: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Membership test for the invertible commutant of n_mat."""
    candidate, n_mat = as_matrix(candidate), as_matrix(n_mat)
    if candidate.shape != n_mat.shape:
        raise ValueError("size mismatch")
    if not is_invertible(candidate, cfg):
        return False
    residual = np.linalg.norm(candidate @ n_mat - n_mat @ candidate)
    bound = cfg.verify_tol * np.linalg.norm(candidate) * np.linalg.norm(n_mat)
    return bool(residual <= bound)


@dataclass
class ConjugateResult:
    c: np.ndarray
    commutation_residual: float
    commutes: bool


def realize_conjugate_c(
    a: np.ndarray, b: np.ndarray, cfg: ToleranceConfig = DEFAULT_TOL
) -> ConjugateResult:
    """C = B^-1 A B, reporting whether C commutes with A.

    When (A, B) solves the conjugacy equation, C must commute with A; the
    check is reported, never enforced.
    """
    a, b = as_matrix(a), as_matrix(b)
    if not is_invertible(b, cfg):
        raise ValueError("b is singular")
    c = np.linalg.solve(b, a @ b)
    residual = float(np.linalg.norm(c @ a - a @ c))
    bound = cfg.verify_tol * float(np.linalg.norm(a)) * max(float(np.linalg.norm(c)), 1.0)
    return ConjugateResult(c, residual, residual <= bound)
