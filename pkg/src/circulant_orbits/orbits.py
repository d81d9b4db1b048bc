"""Brute-force enumeration and classification of orbits on circulant graphs.

A circuit is stored as (origin, arc sequence); a periodic orbit is the
rotation class of a circuit, represented canonically by the
lexicographically least rotation of its open vertex sequence; a pseudo
orbit is a set of distinct primitive periodic orbits.  Everything is
immutable and functions are pure, so all of this is safe to call from
concurrent workers; enumerations return sorted lists so collection order
never shows in the output.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .counting import NonIntegerResultError, divisors
from .graph import Bond, CirculantGraph


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


@dataclass(frozen=True)
class Circuit:
    """Closed walk: origin vertex plus the sequence of arcs taken."""

    origin: int
    arcs: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arcs)

    @property
    def walk_sum(self) -> int:
        return sum(self.arcs)

    def vertex_seq(self, n: int) -> tuple[int, ...]:
        """Open vertex sequence v_0 .. v_{l-1} (the closing v_l is dropped)."""
        seq = [self.origin]
        for a in self.arcs[:-1]:
            seq.append((seq[-1] + a) % n)
        return tuple(seq)


@dataclass(frozen=True)
class PeriodicOrbit:
    """Rotation class of a circuit.

    ``vertices`` is normalized on construction to the lexicographically
    least rotation, so any two rotations of the same circuit compare and
    hash equal.
    """

    vertices: tuple[int, ...]
    walk_sum: int

    def __post_init__(self):
        object.__setattr__(self, "vertices", min_rotation(self.vertices))

    @property
    def length(self) -> int:
        return len(self.vertices)

    def sort_key(self) -> tuple:
        return (self.length, self.vertices)

    def bond_pairs(self) -> tuple[tuple[int, int], ...]:
        seq = self.vertices
        l = len(seq)
        return tuple((seq[i], seq[(i + 1) % l]) for i in range(l))

    def bonds(self, g: CirculantGraph) -> tuple[Bond, ...]:
        return tuple(Bond(v, (w - v) % g.n) for v, w in self.bond_pairs())


@dataclass(frozen=True)
class PseudoOrbit:
    """Set of pairwise-distinct primitive periodic orbits (possibly empty)."""

    orbits: tuple[PeriodicOrbit, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.orbits, key=PeriodicOrbit.sort_key))
        if len(set(ordered)) != len(ordered):
            raise PreconditionError("pseudo orbit repeats a periodic orbit")
        object.__setattr__(self, "orbits", ordered)

    @property
    def length(self) -> int:
        return sum(o.length for o in self.orbits)

    @property
    def walk_sum(self) -> int:
        return sum(o.walk_sum for o in self.orbits)

    def sort_key(self) -> tuple:
        return (self.length, len(self.orbits), tuple(o.sort_key() for o in self.orbits))


@dataclass(frozen=True)
class EncounterProfile:
    """Self-intersection class of a primitive pseudo orbit.

    kind is "none" (no repeated vertex), "enc2_0" (n_encounters vertices
    appear exactly twice, no repeated bond), or "other" (a repeated bond,
    i.e. an encounter of length >= 1, or a vertex used three or more
    times).
    """

    kind: str
    n_encounters: int = 0

    _KINDS = ("none", "enc2_0", "other")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if (self.kind == "enc2_0") != (self.n_encounters > 0):
            raise ValueError("n_encounters must be positive exactly for enc2_0")

    @property
    def label(self) -> str:
        if self.kind == "enc2_0":
            return f"enc2_0_N{self.n_encounters}"
        return self.kind


def min_rotation(seq: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least rotation of a tuple."""
    if len(seq) <= 1:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def enumerate_circuits(g: CirculantGraph, l: int, origin: int) -> list[Circuit]:
    """All circuits of length l starting at the given origin.

    Depth-first over the two outgoing arcs, pruned by the reachable
    walk-sum window; a walk closes iff its walk sum is a multiple of n, so
    the closure check at depth l is a divisibility test.
    """
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    if not 0 <= origin < g.n:
        raise ValueError(f"origin {origin} out of range for n={g.n}")
    n, a1, a2 = g.n, g.a1, g.a2
    out: list[Circuit] = []
    arcs: list[int] = []

    def extend(s: int, r: int) -> None:
        if r == 0:
            if s % n == 0:
                out.append(Circuit(origin, tuple(arcs)))
            return
        for a in (a1, a2):
            t = s + a
            # some multiple of n must stay reachable with r-1 more arcs
            if (t + a1 * (r - 1) + n - 1) // n <= (t + a2 * (r - 1)) // n:
                arcs.append(a)
                extend(t, r - 1)
                arcs.pop()

    extend(0, l)
    return out


def is_primitive(g: CirculantGraph, c: Circuit) -> bool:
    """Whether the circuit is not a shorter circuit repeated.

    A proper period p of the arc sequence only produces a repeated circuit
    when the length-p prefix is itself closed (its walk sum is a multiple
    of n); a periodic arc pattern whose prefix does not close describes a
    primitive circuit.
    """
    l = c.length
    for p in divisors(l)[:-1]:
        prefix = c.arcs[:p]
        if sum(prefix) % g.n == 0 and c.arcs == prefix * (l // p):
            return False
    return True


def canonical_orbit(g: CirculantGraph, c: Circuit) -> PeriodicOrbit:
    return PeriodicOrbit(c.vertex_seq(g.n), c.walk_sum)


def enumerate_primitive_pos(g: CirculantGraph, l: int) -> list[PeriodicOrbit]:
    """All distinct primitive periodic orbits of length exactly l, sorted."""
    if l < 2:
        if l < 1:
            raise ValueError(f"need l >= 1, got {l}")
        return []
    found: set[PeriodicOrbit] = set()
    for origin in range(g.n):
        for c in enumerate_circuits(g, l, origin):
            if is_primitive(g, c):
                found.add(canonical_orbit(g, c))
    return sorted(found, key=PeriodicOrbit.sort_key)


@lru_cache(maxsize=None)
def _adjacency_power(g: CirculantGraph, j: int) -> tuple[tuple[int, ...], ...]:
    """Exact integer j-th power of the adjacency matrix."""
    n = g.n
    if j == 0:
        return tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
    prev = _adjacency_power(g, j - 1)
    # row r of A has ones at columns r+a1, r+a2 (mod n)
    rows = []
    for r in range(n):
        pr = prev[r]
        rows.append(tuple(pr[(c - g.a1) % n] + pr[(c - g.a2) % n] for c in range(n)))
    return tuple(rows)


def trace_power(g: CirculantGraph, j: int) -> int:
    p = _adjacency_power(g, j)
    return sum(p[i][i] for i in range(g.n))


@lru_cache(maxsize=None)
def trace_po_oracle(g: CirculantGraph, l: int) -> int:
    """Primitive periodic orbit count from the adjacency-trace recursion.

    Tr(A^l) = sum over divisors w of l of w * PO(w); solved for PO(l) with
    exact integers.  Independent of the direct enumeration, so the two are
    cross-checked in tests.
    """
    if l < 1:
        raise ValueError(f"need l >= 1, got {l}")
    rest = sum(w * trace_po_oracle(g, w) for w in divisors(l)[:-1])
    q, r = divmod(trace_power(g, l) - rest, l)
    if r:
        raise NonIntegerResultError(
            f"trace recursion for {g} at l={l} left remainder {r}")
    return q


def enumerate_primitive_psos(g: CirculantGraph, l: int,
                             lift_cap: bool = False) -> list[PseudoOrbit]:
    """All primitive pseudo orbits of length exactly l, sorted.

    Lengths beyond n are rejected unless lift_cap is set; the closed-form
    cross-checks only cover l <= n.
    """
    if l < 0:
        raise ValueError(f"need l >= 0, got {l}")
    if l > g.n and not lift_cap:
        raise ValueError(f"l={l} exceeds n={g.n}; pass lift_cap=True to allow")
    if l == 0:
        return [PseudoOrbit()]
    pool: list[PeriodicOrbit] = []
    for m in range(2, l + 1):
        pool.extend(enumerate_primitive_pos(g, m))
    out: list[PseudoOrbit] = []
    chosen: list[PeriodicOrbit] = []

    def choose(i: int, rem: int) -> None:
        if rem == 0:
            out.append(PseudoOrbit(tuple(chosen)))
            return
        for j in range(i, len(pool)):
            o = pool[j]
            if o.length > rem:
                return  # pool is sorted by length; nothing later fits
            chosen.append(o)
            choose(j + 1, rem - o.length)
            chosen.pop()

    choose(0, l)
    return sorted(out, key=PseudoOrbit.sort_key)


def classify(p: PseudoOrbit) -> EncounterProfile:
    """Self-intersection class from vertex and bond occurrence multiplicities.

    A repeated bond means an encounter of length >= 1 and a vertex used
    three or more times means an encounter multiplicity above two; both
    land in "other".  Otherwise each twice-used vertex is one 2-encounter
    of length zero.
    """
    vcount: Counter = Counter()
    bcount: Counter = Counter()
    for o in p.orbits:
        vcount.update(o.vertices)
        bcount.update(o.bond_pairs())
    vmax = max(vcount.values(), default=0)
    if vmax <= 1:
        return EncounterProfile("none")
    if vmax == 2 and max(bcount.values()) == 1:
        n2 = sum(1 for c in vcount.values() if c == 2)
        return EncounterProfile("enc2_0", n2)
    return EncounterProfile("other")


def pseudo_orbits_from_bonds(g: CirculantGraph, bonds) -> list[PseudoOrbit]:
    """All pseudo orbits using exactly the given distinct bonds, sorted.

    The bonds must balance (origin multiset equal to terminal multiset)
    and no origin may repeat more than twice; the result then has exactly
    2^N members, N the number of twice-repeated origins.  Construction
    follows the successor-choice procedure: walk from the least unused
    bond, branching where a vertex offers two continuations or where the
    start vertex allows closing early.
    """
    bond_seq = list(bonds)
    blist = sorted(set(bond_seq))
    if not blist:
        raise PreconditionError("bond set must be nonempty")
    if len(blist) != len(bond_seq):
        raise PreconditionError("bonds must be distinct")
    for b in blist:
        if not g.has_bond(b):
            raise PreconditionError(f"{b} is not a bond of {g}")
    origins = Counter(b.origin for b in blist)
    terminals = Counter(g.terminal(b) for b in blist)
    if origins != terminals:
        raise PreconditionError("origin and terminal multisets differ")
    if max(origins.values()) > 2:
        raise PreconditionError("a vertex repeats more than twice among origins")

    remaining = set(blist)
    cycles: list[tuple[Bond, ...]] = []
    results: set[PseudoOrbit] = set()

    def close_or_extend(walk: list[Bond], v0: int) -> None:
        u = g.terminal(walk[-1])
        if u == v0:
            cycles.append(tuple(walk))
            next_cycle()
            cycles.pop()
        for b in (Bond(u, g.a1), Bond(u, g.a2)):
            if b in remaining:
                remaining.remove(b)
                walk.append(b)
                close_or_extend(walk, v0)
                walk.pop()
                remaining.add(b)

    def next_cycle() -> None:
        if not remaining:
            orbits = tuple(_orbit_from_cycle(g, cyc) for cyc in cycles)
            results.add(PseudoOrbit(orbits))
            return
        b0 = min(remaining)
        remaining.remove(b0)
        close_or_extend([b0], b0.origin)
        remaining.add(b0)

    next_cycle()
    return sorted(results, key=PseudoOrbit.sort_key)


def _orbit_from_cycle(g: CirculantGraph, cycle: tuple[Bond, ...]) -> PeriodicOrbit:
    seq = tuple(b.origin for b in cycle)
    return PeriodicOrbit(seq, sum(b.arc for b in cycle))


def format_pseudo_orbit(p: PseudoOrbit, n: int) -> str:
    """Compact rendering: member orbits as vertex strings inside parentheses."""
    sep = "" if n <= 10 else "."
    return "(" + ", ".join(sep.join(str(v) for v in o.vertices) for o in p.orbits) + ")"


def parse_pseudo_orbit(g: CirculantGraph, text: str) -> PseudoOrbit:
    """Inverse of format_pseudo_orbit; validates every step is a bond of g."""
    body = text.strip().strip("()")
    if not body.strip():
        return PseudoOrbit()
    orbits = []
    for part in body.split(","):
        part = part.strip()
        if "." in part:
            seq = tuple(int(t) for t in part.split("."))
        else:
            seq = tuple(int(ch) for ch in part)
        if not seq:
            raise PreconditionError(f"empty orbit in {text!r}")
        total = 0
        for i, v in enumerate(seq):
            if not 0 <= v < g.n:
                raise PreconditionError(f"vertex {v} out of range for {g}")
            arc = (seq[(i + 1) % len(seq)] - v) % g.n
            if arc not in (g.a1, g.a2):
                raise PreconditionError(
                    f"step {v}->{seq[(i + 1) % len(seq)]} is not a bond of {g}")
            total += arc
        orbits.append(PeriodicOrbit(seq, total))
    return PseudoOrbit(tuple(orbits))
