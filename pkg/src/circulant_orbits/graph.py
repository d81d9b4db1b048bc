"""4-regular directed circulant graphs C_n^+(a1, a2).

Vertices are the integers 0..n-1.  Every vertex has exactly two outgoing
bonds, one of arc ``a1`` and one of arc ``a2``, where the arc of a bond is
the difference terminal - origin reduced to the canonical residue mod n.
Arcs are validated, never reduced: ``0 < a1 < a2 < n`` is required, so the
graphs have no loops and no multi-edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid circulant-graph specification."""


class LoopError(GraphError):
    """An arc is congruent to 0 mod n, which would create loops."""


class MultiEdgeError(GraphError):
    """The two arcs coincide, which would create a doubled bond."""


class TooSmallError(GraphError):
    """n <= a2: the graph has a smaller equivalent description."""


@dataclass(frozen=True, order=True)
class Bond:
    """Directed edge identified by its origin vertex and arc value.

    The terminal vertex is derived, (origin + arc) mod n, so inconsistent
    (origin, terminal) pairs cannot be constructed.
    """

    origin: int
    arc: int


@dataclass(frozen=True)
class CirculantGraph:
    n: int
    a1: int
    a2: int

    @property
    def d(self) -> int:
        """Gap between the two arcs, a2 - a1."""
        return self.a2 - self.a1

    @property
    def num_bonds(self) -> int:
        return 2 * self.n

    def terminal(self, b: Bond) -> int:
        return (b.origin + b.arc) % self.n

    def out_bonds(self, v: int) -> tuple[Bond, Bond]:
        return (Bond(v, self.a1), Bond(v, self.a2))

    def in_bonds(self, v: int) -> tuple[Bond, Bond]:
        return (Bond((v - self.a1) % self.n, self.a1),
                Bond((v - self.a2) % self.n, self.a2))

    def bonds(self) -> tuple[Bond, ...]:
        """All 2n bonds, ordered by (origin, arc)."""
        return tuple(Bond(v, a) for v in range(self.n) for a in (self.a1, self.a2))

    def has_bond(self, b: Bond) -> bool:
        return b.arc in (self.a1, self.a2) and 0 <= b.origin < self.n

    def __str__(self) -> str:
        return f"C_{self.n}^+({self.a1},{self.a2})"


def make_graph(n: int, a1: int, a2: int) -> CirculantGraph:
    """Validate and build C_n^+(a1, a2).

    Raises TooSmallError when n <= a2 (a larger arc would wrap; such graphs
    have an equivalent description with smaller parameters and are
    rejected, not normalized), LoopError when an arc is 0, MultiEdgeError
    when the arcs coincide, and plain GraphError for other nonsense.
    """
    for name, value in (("n", n), ("a1", a1), ("a2", a2)):
        if not isinstance(value, int) or isinstance(value, bool):
            raise TypeError(f"{name} must be an int, got {value!r}")
    if n < 1:
        raise GraphError(f"vertex count must be positive, got {n}")
    if a1 < 0 or a2 < 0:
        raise GraphError(f"arcs must be nonnegative, got a1={a1}, a2={a2}")
    if n <= a2:
        raise TooSmallError(f"need n > a2, got n={n}, a2={a2}")
    if a1 % n == 0 or a2 % n == 0:
        raise LoopError(f"arc congruent to 0 mod {n} creates loops")
    if a1 % n == a2 % n:
        raise MultiEdgeError(f"arcs {a1} and {a2} coincide mod {n}")
    if a1 > a2:
        raise GraphError(f"arcs must satisfy a1 < a2, got a1={a1}, a2={a2}")
    return CirculantGraph(n, a1, a2)


def adjacency_matrix(g: CirculantGraph) -> np.ndarray:
    """n x n 0/1 adjacency matrix; row i is nonzero at (i+a1)%n, (i+a2)%n."""
    A = np.zeros((g.n, g.n), dtype=np.int64)
    for i in range(g.n):
        A[i, (i + g.a1) % g.n] = 1
        A[i, (i + g.a2) % g.n] = 1
    return A


def is_connected(g: CirculantGraph) -> bool:
    """Directed reachability of every vertex from vertex 0.

    For circulant graphs this coincides with gcd(a1, a2, n) == 1; the
    explicit breadth-first search is kept as the definition and the gcd
    form is only used by tests as an independent check.
    """
    seen = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for w in ((v + g.a1) % g.n, (v + g.a2) % g.n):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == g.n


def connectivity_gcd(g: CirculantGraph) -> int:
    return math.gcd(g.a1, g.a2, g.n)


def bond_passes(g: CirculantGraph, b: Bond, v: int) -> bool:
    """Whether bond b passes vertex v: (v - origin) mod n < arc."""
    return (v - b.origin) % g.n < b.arc


def walk_sum(arcs: Iterable[int]) -> int:
    """Sum of arcs along a walk; 0 for the empty walk."""
    return sum(arcs)


def passing_count(g: CirculantGraph, bonds: Sequence[Bond], v: int) -> int:
    """Number of bonds in the sequence that pass v (multiplicity counted)."""
    return sum(1 for b in bonds if bond_passes(g, b, v))
