"""Batch verification sweep over (g, n) pairs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .descent import BOTH, cl_subgroup, expected_cl_quotient
from .errors import IntegrityError
from .generators import ModuliPair
from .lattice import IntMatrix, is_saturated, quotient_invariants
from .presentations import (
    _relation_rows,
    build_lambda,
    build_open,
    build_rpic,
    expected_open_structure,
    expected_rank,
    expected_rpic_structure,
    verify_open_projection,
)

CHECKS = (
    "rank_formula",
    "saturation",
    "open_structure",
    "open_projection",
    "rpic_structure",
    "cl_table",
    "character_kernel",
)


@dataclass(frozen=True)
class Outcome:
    g: int
    n: int
    check: str
    passed: bool
    expected: str
    got: str


@dataclass(frozen=True)
class SweepReport:
    gmax: int
    nmax: int
    pairs: tuple[tuple[int, int], ...]
    outcomes: tuple[Outcome, ...]

    @property
    def ok(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def first_failure(self) -> Outcome | None:
        return next((o for o in self.outcomes if not o.passed), None)

    def table(self) -> list[tuple[str, int, int, int]]:
        rows = []
        for name in CHECKS:
            mine = [o for o in self.outcomes if o.check == name]
            passed = sum(o.passed for o in mine)
            rows.append((name, len(mine), passed, len(mine) - passed))
        return rows


def hyperbolic_pairs(gmax: int, nmax: int) -> list[tuple[int, int]]:
    return [(g, n) for g in range(gmax + 1) for n in range(nmax + 1) if 3 * g - 3 + n > 0]


def _relations_for(g, n, corrupt):
    rows = _relation_rows(g, n)
    if corrupt and rows.nrows:
        # fault injection: forget the first relation
        rows = IntMatrix(rows.rows[1:], ncols=rows.ncols)
    return rows


def check_pair(g: int, n: int, corrupt: bool = False) -> list[Outcome]:
    pair = ModuliPair(g, n)
    out = []

    def record(check, expected, got):
        out.append(Outcome(g, n, check, expected == got, str(expected), str(got)))

    rows = _relations_for(g, n, corrupt)
    st = quotient_invariants(rows, rows.ncols)
    record("rank_formula", f"Z^{expected_rank(pair)}", f"Z^{st.free_rank}" if st.is_free else str(st))
    record("saturation", True, is_saturated(rows))
    record("open_structure", expected_open_structure(pair), build_open(pair).structure)
    if g >= 1:
        record("open_projection", True, verify_open_projection(pair))
    record("rpic_structure", expected_rpic_structure(pair), build_rpic(pair).structure)
    if g >= 1:
        try:
            res = cl_subgroup(build_lambda(pair))
        except IntegrityError as exc:
            record("cl_table", expected_cl_quotient(pair), f"integrity error: {exc}")
        else:
            record("cl_table", expected_cl_quotient(pair), res.quotient)
            if g + n >= 4 or g + n == 3:
                record("character_kernel", BOTH, res.method)
    return out


def _check_star(args):
    return check_pair(*args)


def run_sweep(gmax: int, nmax: int, jobs: int = 1, corrupt: bool = False) -> SweepReport:
    if gmax < 0 or nmax < 0:
        raise ValueError("sweep bounds must be non-negative")
    if jobs < 1:
        raise ValueError("parallelism must be at least 1")
    pairs = hyperbolic_pairs(gmax, nmax)
    work = [(g, n, corrupt) for g, n in pairs]
    if jobs == 1 or len(work) <= 1:
        results = [_check_star(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_star, work))
    outcomes = [o for chunk in results for o in chunk]
    order = {name: i for i, name in enumerate(CHECKS)}
    outcomes.sort(key=lambda o: (o.g, o.n, order[o.check]))
    return SweepReport(gmax, nmax, tuple(pairs), tuple(outcomes))


def format_report(report: SweepReport) -> str:
    lines = [f"{'check':<18} {'pairs':>6} {'passed':>7} {'failed':>7}"]
    for name, total, passed, failed in report.table():
        lines.append(f"{name:<18} {total:>6} {passed:>7} {failed:>7}")
    lines.append(f"{len(report.pairs)} pairs checked (g <= {report.gmax}, n <= {report.nmax})")
    bad = report.first_failure
    if bad is None:
        lines.append("all checks passed")
    else:
        lines.append(
            f"FAILED: g={bad.g} n={bad.n} check={bad.check} expected={bad.expected} got={bad.got}"
        )
    return "\n".join(lines)
