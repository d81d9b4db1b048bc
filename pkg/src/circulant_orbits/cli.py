"""Command-line front end.

Subcommands: count (closed-form counts), enumerate (pseudo-orbit listings
by self-intersection class), classify (class of given pseudo orbits),
variance (exact fractions next to seeded Monte-Carlo estimates), verify
(cross-checks formulas, enumeration, trace recursion and golden fixtures)
and tables (reproduce the bundled reference tables).

Exit status: 0 success, 1 verification/check failure, 2 usage error.
Identical configurations (including the seed) produce byte-identical CSV.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from . import counting, fixtures, orbits, quantum
from .graph import CirculantGraph, connectivity_gcd, is_connected, make_graph

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_BUDGET = 10_000_000
DEFAULT_SAMPLES = 100_000
FORMATS = ("csv", "markdown", "json")
CLASS_CHOICES = ("po", "none", "enc2_0", "other")


class UsageError(ValueError):
    pass


class BudgetExceededError(UsageError):
    """Requested enumeration exceeds the candidate-circuit budget."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: Optional[CirculantGraph] = None
    l_lo: int = 0
    l_hi: int = 0
    klass: Optional[str] = None
    samples: int = DEFAULT_SAMPLES
    seed: int = quantum.DEFAULT_SEED
    k_max: float = quantum.DEFAULT_K_MAX
    sign: str = quantum.DEFAULT_SIGN
    fmt: str = "csv"
    output: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    check: bool = False
    tolerance: float = 2e-3
    fixtures_path: Optional[str] = None
    max_enum_l: int = 12
    lift_cap: bool = False
    table: str = "counts"
    family: Optional[tuple[int, int]] = None
    orbit_texts: tuple[str, ...] = ()


def parse_graph_spec(spec: str) -> CirculantGraph:
    try:
        n, a1, a2 = (int(t) for t in spec.split(","))
    except ValueError:
        raise UsageError(f"graph spec must be 'n,a1,a2', got {spec!r}")
    return make_graph(n, a1, a2)


def parse_l_range(spec: str) -> tuple[int, int]:
    try:
        if ".." in spec:
            lo, hi = spec.split("..")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(spec)
    except ValueError:
        raise UsageError(f"length range must be 'L' or 'LO..HI', got {spec!r}")
    if lo < 0 or hi < lo:
        raise UsageError(f"bad length range {spec!r}")
    return lo, hi


def parse_family(spec: str) -> tuple[int, int]:
    try:
        a1, a2 = (int(t) for t in spec.replace("-", ",").split(","))
    except ValueError:
        raise UsageError(f"family must be 'a1,a2', got {spec!r}")
    return a1, a2


def emit(header: list[str], rows: list[list[str]], fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    elif fmt == "markdown":
        widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
                  for i, h in enumerate(header)]
        def line(cells):
            return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
        out.write(line(header) + "\n")
        out.write("|" + "|".join("-" * (w + 2) for w in widths) + "|\n")
        for r in rows:
            out.write(line(r) + "\n")
    elif fmt == "json":
        out.write(json.dumps([dict(zip(header, r)) for r in rows], indent=2))
        out.write("\n")
    else:
        raise UsageError(f"unknown format {fmt!r}")


def _family_token(g: CirculantGraph) -> str:
    return f"{g.a1}-{g.a2}"


# --------------------------------------------------------------------------
# count


def count_rows(config: RunConfig) -> tuple[list[str], list[list[str]]]:
    g = config.graph
    assert g is not None
    fam = (g.a1, g.a2)
    n_max = max(1, counting.max_n_2encounters(g.n, g.n)) if fam == (1, 3) else 1
    want = config.klass
    header = ["family", "n", "l"]
    cols: list[str] = []
    if want in (None, "po"):
        cols.append("po")
    if want in (None, "none"):
        cols.append("none")
    if want in (None, "enc2_0"):
        cols.extend(f"enc2_0_N{N}" for N in range(1, n_max + 1))
    if want in (None, "other"):
        cols.append("other")
    header += cols
    rows = []
    for l in range(config.l_lo, config.l_hi + 1):
        row = [_family_token(g), str(g.n), str(l)]
        for col in cols:
            row.append(_count_cell(g, l, col))
        rows.append(row)
    return header, rows


def _count_cell(g: CirculantGraph, l: int, col: str) -> str:
    """One closed-form count, or "-" where no formula covers the request."""
    fam = (g.a1, g.a2)
    in_window = 0 < l <= g.n
    try:
        if col == "po":
            return str(counting.po_count_general(g.n, l, g.a1, g.d)) if l >= 1 else "-"
        if not in_window:
            return "-"
        if col == "none":
            if fam == (1, 2):
                return str(counting.pso_count_family1(g.n, l))
            if fam == (1, 3):
                return str(counting.pso0_family2(g.n, l))
            return "-"
        if col.startswith("enc2_0_N"):
            N = int(col[8:])
            if fam == (1, 2):
                return "0"  # never any self-intersection on these graphs
            if fam == (1, 3):
                return str(counting.psoN_family2(g.n, l, N))
            return "-"
        if col == "other":
            return "0" if fam == (1, 2) else "-"
    except ValueError:
        return "-"
    raise UsageError(f"unknown class column {col!r}")


def cmd_count(config: RunConfig, out: TextIO) -> int:
    header, rows = count_rows(config)
    emit(header, rows, config.fmt, out)
    return EXIT_OK


# --------------------------------------------------------------------------
# enumerate


def _check_budget(g: CirculantGraph, l_hi: int, budget: int) -> None:
    # depth-first search explores at most n * 2^l candidate circuits per length
    candidates = sum(g.n * (2 ** l) for l in range(2, l_hi + 1))
    if candidates > budget:
        raise BudgetExceededError(
            f"~{candidates} candidate circuits exceed the budget {budget}; "
            f"raise --budget to force")


def _class_matches(label: str, want: Optional[str]) -> bool:
    if want is None:
        return True
    if want == "enc2_0":
        return label.startswith("enc2_0")
    return label == want


def cmd_enumerate(config: RunConfig, out: TextIO) -> int:
    g = config.graph
    assert g is not None
    _check_budget(g, config.l_hi, config.budget)
    listing: list[tuple[int, str, str]] = []   # (l, class label, rendering)
    for l in range(config.l_lo, config.l_hi + 1):
        grouped: dict[str, list[str]] = {}
        for p in orbits.enumerate_primitive_psos(g, l, lift_cap=config.lift_cap):
            label = orbits.classify(p).label
            grouped.setdefault(label, []).append(orbits.format_pseudo_orbit(p, g.n))
        for label in sorted(grouped):
            if _class_matches(label, config.klass):
                for text in grouped[label]:
                    listing.append((l, label, text))
    if config.fmt == "markdown":
        out.write(f"# {g}\n")
        group_sizes = Counter((l, label) for l, label, _ in listing)
        current = None
        for l, label, text in listing:
            if (l, label) != current:
                out.write(f"\n## l={l} {label} ({group_sizes[(l, label)]})\n")
                current = (l, label)
            out.write(text + "\n")
        out.write("\ntotal: " + str(len(listing)) + "\n")
    else:
        header = ["family", "n", "l", "class", "pseudo_orbit"]
        rows = [[_family_token(g), str(g.n), str(l), label, text]
                for l, label, text in listing]
        emit(header, rows, config.fmt, out)
    return EXIT_OK


def cmd_classify(config: RunConfig, out: TextIO) -> int:
    g = config.graph
    assert g is not None
    header = ["family", "n", "pseudo_orbit", "l", "class"]
    rows = []
    for text in config.orbit_texts:
        p = orbits.parse_pseudo_orbit(g, text)
        rows.append([_family_token(g), str(g.n), orbits.format_pseudo_orbit(p, g.n),
                     str(p.length), orbits.classify(p).label])
    emit(header, rows, config.fmt, out)
    return EXIT_OK


# --------------------------------------------------------------------------
# variance


def cmd_variance(config: RunConfig, out: TextIO) -> int:
    g = config.graph
    assert g is not None
    mg = quantum.MetricGraph.random(g, config.seed)
    report = quantum.build_variance_report(
        mg, config.samples, seed=config.seed, k_range=(0.0, config.k_max),
        sign_assignment=config.sign)
    if config.fmt == "markdown":
        header = ["l", "formula", "mc_estimate", "error"]
        rows = []
        for r in report.rows:
            frac = f"{r.formula.numerator}/{r.formula.denominator}" if r.formula is not None else "-"
            err = f"{r.error:+.9f}" if r.error is not None else "-"
            rows.append([str(r.l), frac, f"{r.mc_estimate:.9f}", err])
        out.write(f"# {g}: coefficient variance, {report.samples} samples, "
                  f"seed {report.seed}\n")
        emit(header, rows, "markdown", out)
    else:
        emit(quantum.VARIANCE_CSV_HEADER, report.csv_rows(), config.fmt, out)
    if config.check:
        worst = max((abs(r.error) for r in report.rows if r.error is not None),
                    default=0.0)
        if worst > config.tolerance:
            print(f"check failed: max |error| {worst:.3e} > {config.tolerance:.3e}",
                  file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


class _Verifier:
    def __init__(self, out: TextIO):
        self.out = out
        self.failures = 0
        self.checks = 0

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if ok:
            self.out.write(f"ok   {what}\n")
        else:
            self.failures += 1
            self.out.write(f"FAIL {what}\n")

    def warn(self, what: str) -> None:
        self.out.write(f"warn {what}\n")


def _verify_po_records(v: _Verifier, records, max_enum_l: int) -> None:
    by_graph: dict[tuple[int, int, int], list[fixtures.CountRecord]] = {}
    for r in records:
        a1, a2 = r.arcs
        by_graph.setdefault((r.n, a1, a2), []).append(r)
    for (n, a1, a2), recs in sorted(by_graph.items()):
        g = make_graph(n, a1, a2)
        if not is_connected(g):
            v.warn(f"{g} is not connected (gcd {connectivity_gcd(g)})")
        bad = []
        for r in sorted(recs):
            formula = counting.po_count_general(n, r.l, a1, a2 - a1)
            oracle = orbits.trace_po_oracle(g, r.l)
            values = {"fixture": r.count, "formula": formula, "trace": oracle}
            if r.l <= max_enum_l:
                values["enumeration"] = len(orbits.enumerate_primitive_pos(g, r.l))
            if len(set(values.values())) != 1:
                bad.append((r.l, values))
        v.check(not bad, f"{g}: orbit counts agree on {len(recs)} lengths"
                + (f"; mismatches {bad}" if bad else ""))


def _verify_class_records(v: _Verifier, records) -> None:
    by_nl: dict[tuple[int, int, int, int], dict[str, int]] = {}
    for r in records:
        a1, a2 = r.arcs
        by_nl.setdefault((r.n, a1, a2, r.l), {})[r.label] = r.count
    graphs = sorted({(n, a1, a2) for (n, a1, a2, _) in by_nl})
    for n, a1, a2 in graphs:
        g = make_graph(n, a1, a2)
        bad = []
        for l in range(1, n + 1):
            want = by_nl.get((n, a1, a2, l), {})
            got: dict[str, int] = {}
            for p in orbits.enumerate_primitive_psos(g, l):
                label = orbits.classify(p).label
                got[label] = got.get(label, 0) + 1
            if got != want:
                bad.append((l, want, got))
        v.check(not bad, f"{g}: pseudo-orbit class counts match for l=1..{n}"
                + (f"; mismatches {bad}" if bad else ""))


def _verify_variance_golden(v: _Verifier) -> None:
    rows = fixtures.load_variance_golden()
    bad = []
    for r in rows:
        a1, a2 = r.arcs
        vals = quantum.variance_fractions(r.n, a1, a2)
        if vals[r.l] != r.value or vals[2 * r.n - r.l] != r.value:
            bad.append((r.family, r.n, r.l))
    v.check(not bad, f"variance fractions match {len(rows)} golden entries"
            + (f"; mismatches {bad}" if bad else ""))


def cmd_verify(config: RunConfig, out: TextIO) -> int:
    v = _Verifier(out)
    if config.fixtures_path:
        with open(config.fixtures_path) as f:
            records = fixtures.read_count_records(f)
        po = [r for r in records if r.label == "po"]
        classes = [r for r in records if r.label != "po"]
        if po:
            _verify_po_records(v, po, config.max_enum_l)
        if classes:
            _verify_class_records(v, classes)
    elif config.graph is not None:
        g = config.graph
        if not is_connected(g):
            v.warn(f"{g} is not connected (gcd {connectivity_gcd(g)})")
        bad = []
        for l in range(2, min(g.n, config.max_enum_l) + 1):
            formula = counting.po_count_general(g.n, l, g.a1, g.d)
            oracle = orbits.trace_po_oracle(g, l)
            enum = len(orbits.enumerate_primitive_pos(g, l))
            if not (formula == oracle == enum):
                bad.append((l, formula, oracle, enum))
        v.check(not bad, f"{g}: formula == trace == enumeration for "
                f"l=2..{min(g.n, config.max_enum_l)}"
                + (f"; mismatches {bad}" if bad else ""))
    else:
        po = fixtures.load_po_counts()
        _verify_po_records(v, po, config.max_enum_l)
        _verify_class_records(v, fixtures.load_pso_class_counts())
        _verify_variance_golden(v)
    out.write(f"{v.checks - v.failures}/{v.checks} checks passed\n")
    return EXIT_OK if v.failures == 0 else EXIT_FAIL


# --------------------------------------------------------------------------
# tables


def cmd_tables(config: RunConfig, out: TextIO) -> int:
    if config.table == "counts":
        families = [config.family] if config.family else \
            sorted({r.arcs for r in fixtures.load_po_counts()})
        header = ["family", "n", "l", "class", "count"]
        rows = []
        for a1, a2 in families:
            ns = sorted({r.n for r in fixtures.load_po_counts()
                         if r.arcs == (a1, a2)}) or list(range(a2 + 1, a2 + 9))
            for n in ns:
                for l in range(2, 16):
                    rows.append([f"{a1}-{a2}", str(n), str(l), "po",
                                 str(counting.po_count_general(n, l, a1, a2 - a1))])
        emit(header, rows, config.fmt, out)
    elif config.table == "classes":
        header = ["family", "n", "l", "class", "count"]
        rows = []
        for n in range(5, 11):
            g = make_graph(n, 1, 3)
            for l in range(1, n + 1):
                got: dict[str, int] = {}
                for p in orbits.enumerate_primitive_psos(g, l):
                    label = orbits.classify(p).label
                    got[label] = got.get(label, 0) + 1
                for label in sorted(got):
                    rows.append(["1-3", str(n), str(l), label, str(got[label])])
        emit(header, rows, config.fmt, out)
    elif config.table == "variance":
        fam = config.family or (1, 3)
        header = ["family", "n", "l", "p0", "phat1", "phat2", "formula_num",
                  "formula_den"]
        rows = []
        for n in range(5, 11):
            fracs = quantum.variance_fractions(n, *fam)
            for l in range(1, n + 1):
                if fracs[l] == 0:
                    continue
                if fam == (1, 2):
                    p0, p1, p2 = counting.pso_count_family1(n, l), 0, 0
                else:
                    p0 = counting.pso0_family2(n, l)
                    p1 = counting.psoN_family2(n, l, 1)
                    p2 = counting.psoN_family2(n, l, 2)
                rows.append([f"{fam[0]}-{fam[1]}", str(n), str(l), str(p0),
                             str(p1), str(p2), str(fracs[l].numerator),
                             str(fracs[l].denominator)])
        emit(header, rows, config.fmt, out)
    else:
        raise UsageError(f"unknown table {config.table!r}")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circulant-orbits",
        description="Counting and spectral statistics on 4-regular directed "
                    "circulant graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p, graph_required=True):
        if graph_required:
            p.add_argument("--graph", required=True, metavar="n,a1,a2")
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--output", default=None, metavar="FILE")

    p = sub.add_parser("count", help="closed-form orbit and pseudo-orbit counts")
    add_common(p)
    p.add_argument("--l", required=True, metavar="L|LO..HI")
    p.add_argument("--class", dest="klass", choices=CLASS_CHOICES, default=None)

    p = sub.add_parser("enumerate", help="list primitive pseudo orbits by class")
    add_common(p)
    p.add_argument("--l", required=True, metavar="L|LO..HI")
    p.add_argument("--class", dest="klass",
                   choices=("none", "enc2_0", "other"), default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--lift-cap", action="store_true",
                   help="allow lengths beyond n (no formula cross-checks there)")

    p = sub.add_parser("classify", help="self-intersection class of pseudo orbits")
    add_common(p)
    p.add_argument("orbit_texts", nargs="+", metavar="PSEUDO_ORBIT",
                   help="e.g. '014,236' or '(0.3.6, 1.4.7)' for n > 10")

    p = sub.add_parser("variance", help="coefficient variance: formula vs Monte Carlo")
    add_common(p)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=quantum.DEFAULT_SEED)
    p.add_argument("--k-max", type=float, default=quantum.DEFAULT_K_MAX)
    p.add_argument("--sign", choices=quantum.SIGN_ASSIGNMENTS,
                   default=quantum.DEFAULT_SIGN)
    p.add_argument("--check", action="store_true",
                   help="exit 1 if any |formula - estimate| exceeds --tolerance")
    p.add_argument("--tolerance", type=float, default=2e-3)

    p = sub.add_parser("verify", help="cross-validate formulas, enumeration and fixtures")
    add_common(p, graph_required=False)
    p.add_argument("--graph", default=None, metavar="n,a1,a2")
    p.add_argument("--fixtures", dest="fixtures_path", default=None, metavar="FILE")
    p.add_argument("--max-enum-l", type=int, default=12)

    p = sub.add_parser("tables", help="reproduce the bundled reference tables")
    add_common(p, graph_required=False)
    p.add_argument("--table", choices=("counts", "classes", "variance"),
                   default="counts")
    p.add_argument("--family", default=None, metavar="a1,a2")
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kw: dict = {"command": args.command}
    if getattr(args, "graph", None):
        kw["graph"] = parse_graph_spec(args.graph)
    if getattr(args, "l", None):
        kw["l_lo"], kw["l_hi"] = parse_l_range(args.l)
    if getattr(args, "family", None):
        kw["family"] = parse_family(args.family)
    for name, dest in [("klass", "klass"), ("samples", "samples"),
                       ("seed", "seed"), ("k_max", "k_max"), ("sign", "sign"),
                       ("output", "output"), ("budget", "budget"),
                       ("check", "check"), ("tolerance", "tolerance"),
                       ("fixtures_path", "fixtures_path"),
                       ("max_enum_l", "max_enum_l"), ("lift_cap", "lift_cap"),
                       ("table", "table")]:
        if getattr(args, name, None) is not None:
            kw[dest] = getattr(args, name)
    if getattr(args, "orbit_texts", None):
        kw["orbit_texts"] = tuple(args.orbit_texts)
    fmt = getattr(args, "format", None)
    kw["fmt"] = fmt if fmt else ("markdown" if args.command == "enumerate" else "csv")
    return RunConfig(**kw)


_DISPATCH = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "variance": cmd_variance,
    "verify": cmd_verify,
    "tables": cmd_tables,
}


def run(config: RunConfig, out: TextIO) -> int:
    return _DISPATCH[config.command](config, out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        config = config_from_args(args)
        if config.output:
            with open(config.output, "w") as f:
                return run(config, f)
        return run(config, sys.stdout)
    except (UsageError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
