"""Quantum side: bond scattering matrix, characteristic polynomial, variance.

The graph is quantized with the 2x2 DFT vertex scattering matrix
(1/sqrt2)[[1,1],[1,-1]] at every vertex.  Bonds are indexed 2*v + s where
s is 0 for the a1 bond and 1 for the a2 bond outgoing at v, so the bond
scattering matrix S has one 2x2 block per vertex connecting its two
incoming to its two outgoing bonds.  The characteristic polynomial of
A(k) = S exp(i k L) is monic of degree B = 2n; the coefficient variance
over k is estimated by seeded Monte Carlo and compared against the exact
pseudo-orbit fraction.

Monte-Carlo determinism: sampling is split into fixed-size chunks, chunk i
drawing from the substream SeedSequence(seed, spawn_key=(1, i)); partial
sums are combined in chunk order, so results are bit-identical for any
worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .counting import (max_n_2encounters, pso0_family2, pso_count_family1,
                       psoN_family2)
from .graph import Bond, CirculantGraph

DEFAULT_SEED = 12345
# Wide k window: phase differences of distinct pseudo-orbit metric lengths
# must dephase; narrow windows bias the variance estimate well above the
# Monte-Carlo noise floor.
DEFAULT_K_MAX = 1.0e7
CHUNK_SAMPLES = 4096
WORKERS_ENV = "CIRCULANT_ORBITS_WORKERS"

SIGN_ASSIGNMENTS = ("a1a1", "a1a2", "a2a1", "a2a2")
DEFAULT_SIGN = "a2a2"

LENGTH_LO = 0.9
LENGTH_HI = 1.1


def bond_index(g: CirculantGraph, b: Bond) -> int:
    """Index of a bond in the scattering-matrix ordering: 2*origin + arc slot."""
    if not g.has_bond(b):
        raise ValueError(f"{b} is not a bond of {g}")
    return 2 * b.origin + (0 if b.arc == g.a1 else 1)


def indexed_bonds(g: CirculantGraph) -> tuple[Bond, ...]:
    """Bonds in index order; inverse of bond_index."""
    return g.bonds()


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """Circulant graph with a positive metric length per bond."""

    graph: CirculantGraph
    lengths: dict[Bond, float]

    def __post_init__(self):
        expected = set(self.graph.bonds())
        if set(self.lengths) != expected:
            raise ValueError("lengths must cover exactly the bonds of the graph")
        for b, x in self.lengths.items():
            if not (np.isfinite(x) and x > 0):
                raise ValueError(f"length of {b} must be positive and finite, got {x}")

    @classmethod
    def random(cls, g: CirculantGraph, seed: int = DEFAULT_SEED) -> "MetricGraph":
        """Lengths drawn independently and uniformly from [0.9, 1.1].

        Uses the (0,) substream of the seed, leaving the (1, i) chunk
        substreams of mc_variance free, so one seed drives a whole run.
        """
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0,)))
        draws = rng.uniform(LENGTH_LO, LENGTH_HI, g.num_bonds)
        return cls(g, dict(zip(g.bonds(), draws)))

    @classmethod
    def with_lengths(cls, g: CirculantGraph, lengths: Mapping[Bond, float]) -> "MetricGraph":
        return cls(g, dict(lengths))

    def length_vector(self) -> np.ndarray:
        return np.array([self.lengths[b] for b in self.graph.bonds()])


@dataclass(frozen=True, eq=False)
class BondScattering:
    """Unitary 2n x 2n bond scattering matrix built from DFT vertex blocks."""

    graph: CirculantGraph
    sign_assignment: str
    matrix: np.ndarray


def build_scattering(g: CirculantGraph, sign_assignment: str = DEFAULT_SIGN) -> BondScattering:
    """Assemble S: entry (b', b) is nonzero iff b ends where b' starts.

    Each vertex block is (1/sqrt2)[[1,1],[1,-1]] up to the placement of
    the -1, selected by sign_assignment as the (incoming arc, outgoing
    arc) pair; any placement keeps the block unitary and the variance
    statistic is insensitive to the choice.
    """
    if sign_assignment not in SIGN_ASSIGNMENTS:
        raise ValueError(f"sign_assignment must be one of {SIGN_ASSIGNMENTS}")
    in_slot = 0 if sign_assignment[:2] == "a1" else 1
    out_slot = 0 if sign_assignment[2:] == "a1" else 1
    n = g.n
    S = np.zeros((2 * n, 2 * n), dtype=complex)
    amp = 1.0 / np.sqrt(2.0)
    for v in range(n):
        ins = [bond_index(g, b) for b in g.in_bonds(v)]    # slots (a1, a2)
        outs = [bond_index(g, b) for b in g.out_bonds(v)]
        for i in range(2):
            for j in range(2):
                sign = -1.0 if (i, j) == (out_slot, in_slot) else 1.0
                S[outs[i], ins[j]] = sign * amp
    return BondScattering(g, sign_assignment, S)


def _coeff_batch(S: np.ndarray, lengths: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Characteristic-polynomial coefficients a_0..a_B for a batch of k.

    Newton's identities on the traces of powers of A(k) = S exp(ikL); for
    unitary A this is numerically benign (coefficients stay O(1)).
    """
    B = S.shape[0]
    phases = np.exp(1j * np.outer(ks, lengths))
    A = S[None, :, :] * phases[:, None, :]
    tr = np.empty((len(ks), B + 1), dtype=complex)
    P = A
    tr[:, 1] = np.trace(A, axis1=1, axis2=2)
    for j in range(2, B + 1):
        P = P @ A
        tr[:, j] = np.trace(P, axis1=1, axis2=2)
    a = np.zeros((len(ks), B + 1), dtype=complex)
    a[:, 0] = 1.0
    for l in range(1, B + 1):
        s = tr[:, l].copy()
        for i in range(1, l):
            s += a[:, i] * tr[:, l - i]
        a[:, l] = -s / l
    return a


def char_poly_coeffs(S: BondScattering, mg: MetricGraph, k: float) -> np.ndarray:
    """Coefficients a_0..a_B of det(z I - S e^{ikL}) = sum_l a_l z^{B-l}."""
    if S.graph != mg.graph:
        raise ValueError("scattering matrix and metric graph disagree on the graph")
    return _coeff_batch(S.matrix, mg.length_vector(), np.array([float(k)]))[0]


@dataclass(frozen=True, eq=False)
class McVariance:
    """Per-coefficient Monte-Carlo means over sampled k values."""

    mean_abs_sq: np.ndarray     # <|a_l|^2>, shape (B+1,)
    mean_coeff: np.ndarray      # <a_l>, complex, shape (B+1,)
    samples: int
    seed: int
    k_range: tuple[float, float]
    sign_assignment: str


def _mc_chunk(args) -> tuple[int, np.ndarray, np.ndarray]:
    (n, a1, a2, sign, lengths, seed, lo, hi, idx, count) = args
    g = CirculantGraph(n, a1, a2)
    S = build_scattering(g, sign).matrix
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1, idx)))
    ks = rng.uniform(lo, hi, count)
    coeffs = _coeff_batch(S, np.asarray(lengths), ks)
    return idx, (np.abs(coeffs) ** 2).sum(axis=0), coeffs.sum(axis=0)


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, workers)


def mc_variance(mg: MetricGraph, samples: int, seed: int = DEFAULT_SEED,
                k_range: tuple[float, float] = (0.0, DEFAULT_K_MAX),
                sign_assignment: str = DEFAULT_SIGN,
                workers: Optional[int] = None) -> McVariance:
    """Mean |a_l|^2 and mean a_l over k ~ Uniform(k_range), seeded.

    Reproducible: the result depends only on (lengths, samples, seed,
    k_range, sign_assignment), never on the worker count.
    """
    if samples < 1:
        raise ValueError(f"need samples >= 1, got {samples}")
    lo, hi = float(k_range[0]), float(k_range[1])
    if not lo < hi:
        raise ValueError(f"empty k range {k_range}")
    g = mg.graph
    lengths = tuple(mg.length_vector())
    jobs = []
    done = 0
    while done < samples:
        count = min(CHUNK_SAMPLES, samples - done)
        jobs.append((g.n, g.a1, g.a2, sign_assignment, lengths, seed, lo, hi,
                     len(jobs), count))
        done += count
    workers = resolve_workers(workers)
    if workers == 1 or len(jobs) == 1:
        parts = [_mc_chunk(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_mc_chunk, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    B = g.num_bonds
    sum_sq = np.zeros(B + 1)
    sum_c = np.zeros(B + 1, dtype=complex)
    for _, sq, c in sorted(parts, key=lambda t: t[0]):
        sum_sq += sq
        sum_c += c
    return McVariance(sum_sq / samples, sum_c / samples, samples, seed,
                      (lo, hi), sign_assignment)


def variance_formula(l: int, p0: int, phat: Mapping[int, int]) -> Fraction:
    """Exact coefficient variance 2^-l (p0 + sum_N 2^N phat[N])."""
    if l < 0:
        raise ValueError(f"need l >= 0, got {l}")
    total = p0
    for N, count in phat.items():
        if N < 1:
            raise ValueError(f"encounter multiplicities must be >= 1, got {N}")
        total += 2 ** N * count
    return Fraction(total, 2 ** l)


def has_variance_formula(a1: int, a2: int) -> bool:
    return (a1, a2) in ((1, 2), (1, 3))


def variance_fractions(n: int, a1: int, a2: int) -> list[Fraction]:
    """Exact variances for l = 0..2n; the upper half mirrors the lower.

    Closed forms exist for the arc sets (1,2) and (1,3) only.
    """
    if not has_variance_formula(a1, a2):
        raise ValueError(f"no closed-form variance for arcs ({a1},{a2})")
    vals = [Fraction(1)]
    for l in range(1, n + 1):
        if (a1, a2) == (1, 2):
            p0 = pso_count_family1(n, l)
            phat: dict[int, int] = {}
        else:
            p0 = pso0_family2(n, l)
            phat = {N: psoN_family2(n, l, N)
                    for N in range(1, max_n_2encounters(n, l) + 1)}
        vals.append(variance_formula(l, p0, phat))
    for l in range(n + 1, 2 * n + 1):
        vals.append(vals[2 * n - l])
    return vals


@dataclass(frozen=True)
class VarianceRow:
    l: int
    formula: Optional[Fraction]
    mc_estimate: float
    error: Optional[float]      # formula - estimate


@dataclass(frozen=True, eq=False)
class VarianceReport:
    graph: CirculantGraph
    rows: tuple[VarianceRow, ...]
    samples: int
    seed: int
    k_range: tuple[float, float]

    @property
    def family(self) -> str:
        return f"{self.graph.a1}-{self.graph.a2}"

    def csv_rows(self) -> list[list[str]]:
        out = []
        for r in self.rows:
            num = str(r.formula.numerator) if r.formula is not None else ""
            den = str(r.formula.denominator) if r.formula is not None else ""
            err = repr(r.error) if r.error is not None else ""
            out.append([self.family, str(self.graph.n), str(r.l), num, den,
                        repr(r.mc_estimate), err, str(self.samples), str(self.seed)])
        return out


VARIANCE_CSV_HEADER = ["family", "n", "l", "formula_num", "formula_den",
                       "mc_estimate", "error", "samples", "seed"]


def build_variance_report(mg: MetricGraph, samples: int, seed: int = DEFAULT_SEED,
                          k_range: tuple[float, float] = (0.0, DEFAULT_K_MAX),
                          sign_assignment: str = DEFAULT_SIGN,
                          workers: Optional[int] = None) -> VarianceReport:
    """Formula values (where a closed form exists) next to Monte-Carlo means."""
    g = mg.graph
    mc = mc_variance(mg, samples, seed=seed, k_range=k_range,
                     sign_assignment=sign_assignment, workers=workers)
    fracs: list[Optional[Fraction]]
    if has_variance_formula(g.a1, g.a2):
        fracs = list(variance_fractions(g.n, g.a1, g.a2))
    else:
        fracs = [None] * (g.num_bonds + 1)
    rows = []
    for l in range(g.num_bonds + 1):
        est = float(mc.mean_abs_sq[l])
        f = fracs[l]
        err = float(f) - est if f is not None else None
        rows.append(VarianceRow(l, f, est, err))
    return VarianceReport(g, tuple(rows), samples, seed, mc.k_range)
