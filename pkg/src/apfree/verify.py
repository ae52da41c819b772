"""Exhaustive certification and property-test drivers.

Group and integer sets are certified by scanning every unordered pair of
elements and testing all solutions of the doubled-midpoint congruence for
membership; a failure always comes with a re-checkable counterexample
triple.  The block-level statements are swept exhaustively over rational
grids (see :mod:`apfree.gridscan`), and the area of the block is computed
a second time by half-plane clipping, independently of the stated vertex
lists.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .blocks import BuildingBlock, clipped_piece_areas, PIECE_LABELS
from .gridscan import density_count, run_sweep
from .rational import decimal_str, rat_str


@dataclass
class VerificationReport:
    subject: str
    mode: str  # group | integer | property | area | density
    passed: bool
    checked: int
    counterexample: dict | None = None
    parameters: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_jsonable(self, include_elapsed: bool = False) -> dict:
        # elapsed is excluded by default so identical runs serialize to
        # identical bytes
        out = {
            "subject": self.subject,
            "mode": self.mode,
            "pass": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "parameters": self.parameters,
            "counts": self.counts,
        }
        if include_elapsed:
            out["elapsed_seconds"] = self.elapsed
        return out


def _halve_mod(s: int, m: int) -> tuple[int, ...]:
    """All y in {0,...,m-1} with 2*y = s (mod m): one solution for odd m,
    zero or two for even m."""
    s %= m
    if m % 2 == 1:
        return ((s * ((m + 1) // 2)) % m,)
    if s % 2 == 1:
        return ()
    return (s // 2, s // 2 + m // 2)


def verify_group_set(
    moduli: Sequence[int], elements: Sequence[tuple[int, ...]], subject: str = "group-set"
) -> VerificationReport:
    """Exhaustive progression check in Z_m1 x ... x Z_mn.

    Scans every unordered pair {x, z} of distinct elements, solves the
    doubled-midpoint congruence coordinatewise and looks the candidates up
    in the set.  checked equals |A| choose 2.
    """
    t0 = time.perf_counter()
    moduli = tuple(int(m) for m in moduli)
    elems = sorted(tuple(int(r) for r in e) for e in elements)
    if len(set(elems)) != len(elems):
        raise ValueError("duplicate elements")
    n = len(moduli)
    for e in elems:
        if len(e) != n or any(not 0 <= r < m for r, m in zip(e, moduli)):
            raise ValueError(f"element {e} out of range for moduli {moduli}")
    member = set(elems)
    counter = None
    checked = 0
    for ai in range(len(elems)):
        x = elems[ai]
        for zi in range(ai + 1, len(elems)):
            z = elems[zi]
            checked += 1
            if counter is not None:
                continue
            per_coord = [_halve_mod(x[i] + z[i], moduli[i]) for i in range(n)]
            if any(len(c) == 0 for c in per_coord):
                continue
            for y in product(*per_coord):
                # x != z forces y != x and y != z, so any hit is a violation
                if y in member:
                    counter = {"x": list(x), "y": list(y), "z": list(z)}
                    break
    report = VerificationReport(
        subject=subject,
        mode="group",
        passed=counter is None,
        checked=checked,
        counterexample=counter,
        parameters={"moduli": list(moduli), "size": len(elems)},
    )
    report.elapsed = time.perf_counter() - t0
    return report


def verify_integer_set(
    bound: int, elements: Sequence[int], subject: str = "integer-set"
) -> VerificationReport:
    """Exhaustive progression check in {1,...,N} with bitset membership."""
    t0 = time.perf_counter()
    elems = sorted(int(x) for x in elements)
    if elems and not (1 <= elems[0] and elems[-1] <= bound):
        raise ValueError(f"elements outside 1..{bound}")
    if len(set(elems)) != len(elems):
        raise ValueError("duplicate elements")
    mask = 0
    for v in elems:
        mask |= 1 << v
    counter = None
    checked = 0
    for ai in range(len(elems)):
        x = elems[ai]
        for zi in range(ai + 1, len(elems)):
            z = elems[zi]
            checked += 1
            if counter is None and (x + z) % 2 == 0:
                y = (x + z) // 2
                if (mask >> y) & 1 and y != x and y != z:
                    counter = {"x": x, "y": y, "z": z}
    report = VerificationReport(
        subject=subject,
        mode="integer",
        passed=counter is None,
        checked=checked,
        counterexample=counter,
        parameters={"bound": int(bound), "size": len(elems)},
    )
    report.elapsed = time.perf_counter() - t0
    return report


# -- block-level property sweeps ------------------------------------------

_SWEEP_SUBJECTS = {
    "block": "weight-inequality-sweep",
    "midpoint": "midpoint-sum-sweep",
    "x1z1": "first-coordinate-sum-sweep",
    "facts": "block-facts-sweep",
}


def _property_report(kind: str, epsilon: Fraction, grid: int, threads: int) -> VerificationReport:
    t0 = time.perf_counter()
    counts, violation = run_sweep(kind, epsilon, grid, threads)
    report = VerificationReport(
        subject=_SWEEP_SUBJECTS[kind],
        mode="property",
        passed=counts.get("violations", 0) == 0,
        checked=counts.get("candidates", counts.get("pairs", 0)),
        counterexample=violation,
        parameters={"epsilon": rat_str(epsilon), "grid": grid},
        counts=counts,
    )
    report.elapsed = time.perf_counter() - t0
    return report


def check_building_block(epsilon: Fraction, grid: int, threads: int = 1) -> VerificationReport:
    return _property_report("block", epsilon, grid, threads)


def check_midpoint_sums(epsilon: Fraction, grid: int, threads: int = 1) -> VerificationReport:
    return _property_report("midpoint", epsilon, grid, threads)


def check_x1z1_bound(epsilon: Fraction, grid: int, threads: int = 1) -> VerificationReport:
    return _property_report("x1z1", epsilon, grid, threads)


def check_facts(epsilon: Fraction, grid: int, threads: int = 1) -> VerificationReport:
    return _property_report("facts", epsilon, grid, threads)


def check_all(epsilon: Fraction, grid: int, threads: int = 1) -> list[VerificationReport]:
    return [
        check_building_block(epsilon, grid, threads),
        check_midpoint_sums(epsilon, grid, threads),
        check_x1z1_bound(epsilon, grid, threads),
        check_facts(epsilon, grid, threads),
    ]


# -- areas ------------------------------------------------------------------


def area_oracle(epsilon: Fraction) -> VerificationReport:
    """Per-piece areas by successive half-plane clipping, with the stated
    lower bounds asserted: piece1 = 7/36 exactly, piece2 >= 15/288 - eps/2,
    piece3 >= 13/288 - eps/4, total >= 7/24 - eps."""
    t0 = time.perf_counter()
    clipped = clipped_piece_areas(epsilon)
    areas = {k: a for k, (a, _) in clipped.items()}
    degenerate = [PIECE_LABELS[k] for k, (_, d) in clipped.items() if d]
    total = sum(areas.values(), Fraction(0))
    bounds_ok = (
        areas[1] == Fraction(7, 36)
        and areas[2] >= Fraction(15, 288) - epsilon / 2
        and areas[3] >= Fraction(13, 288) - epsilon / 4
        and total >= Fraction(7, 24) - epsilon
    )
    report = VerificationReport(
        subject="area-oracle",
        mode="area",
        passed=bounds_ok,
        checked=len(areas) + 1,
        parameters={
            "epsilon": rat_str(epsilon),
            "areas": {PIECE_LABELS[k]: rat_str(a) for k, a in areas.items()},
            "total": rat_str(total),
            "degenerate_pieces": degenerate,
        },
    )
    report.elapsed = time.perf_counter() - t0
    return report


def clipped_areas(epsilon: Fraction) -> dict[int, Fraction]:
    return {k: a for k, (a, _) in clipped_piece_areas(epsilon).items()}


def density_estimate(epsilon: Fraction, m: int) -> VerificationReport:
    """Fraction of the m x m cell midpoints inside the block; must match the
    exact area within 10/m (the block boundary is a bounded set of segments,
    so at most O(m) cells straddle it)."""
    if m < 24:
        raise ValueError(f"grid size {m} below 24")
    t0 = time.perf_counter()
    count = density_count(epsilon, m)
    estimate = Fraction(count, m * m)
    exact = BuildingBlock(epsilon).area()
    err = abs(estimate - exact)
    tolerance = Fraction(10, m)
    report = VerificationReport(
        subject="density-estimate",
        mode="density",
        passed=err <= tolerance,
        checked=m * m,
        parameters={
            "epsilon": rat_str(epsilon),
            "m": m,
            "estimate": rat_str(estimate),
            "estimate_approx": decimal_str(estimate),
            "exact": rat_str(exact),
            "error": rat_str(err),
            "tolerance": rat_str(tolerance),
        },
    )
    report.elapsed = time.perf_counter() - t0
    return report
