"""Uplink communication-cost model and optimal subgroup search.

Per round each user uploads R masked field elements of ceil(log2 p1) bits,
so C_u = R * ceil(log2 p1) and C_T = l * C_u (one subgroup's worth of
uploads per subgroup, as in the published tables). R comes from the
power schedule of the n1-user polynomial.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from functools import lru_cache

from hisafe.mvpoly import TiePolicy, construct_mv_polynomial
from hisafe.published import COST_TABLE, published_R, published_rows

COLUMNS = (
    "n",
    "l",
    "n1",
    "p1",
    "ceil_log_p1",
    "ceil_log_p1_minus_1",
    "R",
    "C_T",
    "C_u",
    "reduction_total",
    "reduction_user",
)


@dataclass(frozen=True)
class CostRow:
    n: int
    l: int
    n1: int
    p1: int
    bits: int
    formula_latency: int
    R: int
    C_T: int
    C_u: int
    reduction_total: float | None = None
    reduction_user: float | None = None
    R_source: str = "schedule"

    def as_tuple(self) -> tuple:
        return (
            self.n,
            self.l,
            self.n1,
            self.p1,
            self.bits,
            self.formula_latency,
            self.R,
            self.C_T,
            self.C_u,
            self.reduction_total,
            self.reduction_user,
        )


@dataclass(frozen=True)
class PlanReport:
    n: int
    rows: tuple[CostRow, ...]
    optimal: CostRow
    min_n1: int
    policy: str


@lru_cache(maxsize=None)
def _schedule_metrics(n1: int, policy: TiePolicy) -> tuple[int, int, int]:
    poly = construct_mv_polynomial(n1, policy)
    return poly.p, poly.schedule.R, poly.schedule.formula_latency


def _reduction(value: int, baseline: int) -> float:
    return round(100.0 * (1 - value / baseline), 1)


def cost_for(
    n: int,
    l: int,
    policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS,
    use_published_R: bool = False,
    with_reductions: bool = True,
) -> CostRow:
    """Cost row for n users in l subgroups.

    ``use_published_R`` swaps in the published table's R for (n, l) where one
    exists; everything else is still computed.
    """
    if l < 1 or n % l:
        raise ValueError(f"{l} subgroups do not divide {n} users")
    n1 = n // l
    if n1 < 2:
        raise ValueError(f"subgroup size n1={n1} is below 2")
    p1, R, latency = _schedule_metrics(n1, policy)
    source = "schedule"
    if use_published_R:
        pub = published_R(n, l)
        if pub is not None:
            R, source = pub, "published"
    bits = p1.bit_length()
    C_u = R * bits
    C_T = l * C_u
    red_t = red_u = None
    if with_reductions and l > 1:
        base = cost_for(n, 1, policy, use_published_R, with_reductions=False)
        red_t, red_u = _reduction(C_T, base.C_T), _reduction(C_u, base.C_u)
    return CostRow(n, l, n1, p1, bits, latency, R, C_T, C_u, red_t, red_u, source)


def admissible_subgroup_counts(n: int, min_n1: int = 3) -> list[int]:
    return [l for l in range(1, n + 1) if n % l == 0 and n // l >= min_n1]


def optimal(
    n: int,
    policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS,
    allow_n1_2: bool = False,
    use_published_R: bool = False,
) -> PlanReport:
    """Minimise C_T over admissible l; ties go to the larger l."""
    min_n1 = 2 if allow_n1_2 else 3
    if n < min_n1:
        raise ValueError(f"n={n} is below the minimum subgroup size {min_n1}")
    rows = tuple(cost_for(n, l, policy, use_published_R) for l in admissible_subgroup_counts(n, min_n1))
    best = min(rows, key=lambda r: (r.C_T, -r.l))
    return PlanReport(n, rows, best, min_n1, policy.value)


# ---------------------------------------------------------------------------
# Table emission and comparison against the published rows
# ---------------------------------------------------------------------------


def table_rows(
    ns: list[int],
    policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS,
    allow_n1_2: bool = False,
    use_published_R: bool = False,
) -> list[CostRow]:
    rows: list[CostRow] = []
    for n in ns:
        rows.extend(optimal(n, policy, allow_n1_2, use_published_R).rows)
    return rows


def _fmt_pct(v: float | None) -> str:
    return "-" if v is None else f"{v:.1f}"


def emit_table(
    ns: list[int],
    fmt: str = "csv",
    policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS,
    allow_n1_2: bool = False,
    use_published_R: bool = False,
) -> str:
    rows = table_rows(ns, policy, allow_n1_2, use_published_R)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            t = r.as_tuple()
            w.writerow([*t[:9], _fmt_pct(t[9]), _fmt_pct(t[10])])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(zip(COLUMNS, r.as_tuple())) | {"R_source": r.R_source} for r in rows], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def comparison_report(ns: list[int] | None = None, policy: TiePolicy = TiePolicy.RESOLVE_TO_MINUS) -> list[dict]:
    """Schedule-derived vs published values for every published (n, l) row.

    Each entry lists both values of R, C_T, C_u, p1, bits and latency, and the
    names of the fields that differ.
    """
    wanted = set(ns) if ns is not None else {r.n for r in COST_TABLE}
    out = []
    for n in sorted(wanted):
        for pub in published_rows(n):
            ours = cost_for(n, pub.l, policy, with_reductions=False)
            fields = {
                "p1": (ours.p1, pub.p1),
                "ceil_log_p1": (ours.bits, pub.bits),
                "ceil_log_p1_minus_1": (ours.formula_latency, pub.latency),
                "R": (ours.R, pub.R),
                "C_T": (ours.C_T, pub.C_T),
                "C_u": (ours.C_u, pub.C_u),
            }
            out.append(
                {
                    "n": n,
                    "l": pub.l,
                    "n1": pub.n1,
                    "computed": {k: v[0] for k, v in fields.items()},
                    "published": {k: v[1] for k, v in fields.items()},
                    "differs": sorted(k for k, (a, b) in fields.items() if a != b),
                }
            )
    return out


def report_as_dict(report: PlanReport) -> dict:
    return {
        "n": report.n,
        "policy": report.policy,
        "min_n1": report.min_n1,
        "optimal": asdict(report.optimal),
        "rows": [asdict(r) for r in report.rows],
    }
