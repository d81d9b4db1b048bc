"""Golden count fixtures and their on-disk format.

Count records use one CSV line per record, ``family,n,l,class,count``,
where family is the arc pair as "a1-a2" and class is "po" for primitive
periodic orbit totals, "none" / "enc2_0_N<k>" / "other" for pseudo-orbit
self-intersection classes.  The bundled data files hold known-good
reference counts used by the verification suite and the CLI.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, TextIO, Union

_HEADER = ["family", "n", "l", "class", "count"]


@dataclass(frozen=True, order=True)
class CountRecord:
    family: str
    n: int
    l: int
    label: str
    count: int

    @property
    def arcs(self) -> tuple[int, int]:
        a1, a2 = self.family.split("-")
        return int(a1), int(a2)


def write_count_records(f: TextIO, records: Iterable[CountRecord]) -> None:
    w = csv.writer(f, lineterminator="\n")
    for r in records:
        w.writerow([r.family, r.n, r.l, r.label, r.count])


def read_count_records(f: Union[TextIO, str]) -> list[CountRecord]:
    """Parse count records; a leading header line is tolerated."""
    if isinstance(f, str):
        f = io.StringIO(f)
    out = []
    for row in csv.reader(f):
        if not row:
            continue
        if row == _HEADER:
            continue
        if len(row) != 5:
            raise ValueError(f"expected 5 fields, got {row!r}")
        fam, n, l, label, count = row
        out.append(CountRecord(fam, int(n), int(l), label, int(count)))
    return out


@dataclass(frozen=True)
class VarianceGoldenRow:
    family: str
    n: int
    l: int
    p0: int
    phat1: int
    phat2: int
    value: Fraction

    @property
    def arcs(self) -> tuple[int, int]:
        a1, a2 = self.family.split("-")
        return int(a1), int(a2)


def _data_text(name: str) -> str:
    return resources.files("circulant_orbits.data").joinpath(name).read_text()


def load_po_counts() -> list[CountRecord]:
    """Reference primitive-periodic-orbit counts, ten arc families, l = 2..15."""
    return read_count_records(_data_text("po_counts.csv"))


def load_pso_class_counts() -> list[CountRecord]:
    """Reference pseudo-orbit class counts for arcs (1,3), n = 5..10, l <= n.

    Lengths absent from the file have no primitive pseudo orbits at all.
    """
    return read_count_records(_data_text("pso_class_counts.csv"))


def load_variance_golden() -> list[VarianceGoldenRow]:
    """Reference variance fractions with their class counts, both families."""
    out = []
    for row in csv.reader(io.StringIO(_data_text("variance_fractions.csv"))):
        if not row:
            continue
        fam, n, l, p0, p1, p2, num, den = row
        out.append(VarianceGoldenRow(fam, int(n), int(l), int(p0), int(p1),
                                     int(p2), Fraction(int(num), int(den))))
    return out
