"""Identity-verification suites and their reports.

A suite runs a grid of cases against a tolerance and collects
discrepancies as structured records.  Suites tied to adjudicated
printed-identity defects (the quarantined set) report the brute-force
verdict and exit clean; any other discrepancy is a failure.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

from . import adjudicate
from .arith import mobius, primes_up_to
from .characters import (
    get_group,
    orthogonality_even,
    orthogonality_odd,
    orthogonality_star,
)
from .estermann import (
    d2_char_decomposition_check,
    d2_fe_check,
    d2_residue_check,
    d2_value,
    estermann_E2_eval,
    estermann_fe_check,
    estermann_residue_check,
)
from .afe import afe_check
from .expsums import weil_scan_worst
from .specfun import check_L_fe, check_zeta_fe
from .config import ExperimentConfig

# suites whose failures reproduce known printed-identity defects; they
# report the adjudicated verdict instead of failing the run
QUARANTINED = {
    "orthogonality-even-printed",
    "d2-decomposition-printed",
    "adjudications",
}


@dataclass
class IdentityDiscrepancy:
    lemma_id: str
    p: int
    arguments: str
    paper_value: str
    computed_value: str
    abs_diff: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class VerificationReport:
    suite: str
    cases_run: int
    max_residual: float
    tolerance: float
    discrepancies: list[IdentityDiscrepancy] = field(default_factory=list)
    wall_time: float = 0.0
    quarantined: bool = False
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.quarantined or not self.discrepancies

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _fmt(z: complex) -> str:
    return repr(complex(z))


def suite_weil(p_max: int = 199) -> VerificationReport:
    """|S(m,n;p)| <= Weil bound for every pair mod every prime <= p_max."""
    t0 = time.perf_counter()
    disc = []
    worst_overall = 0.0
    cases = 0
    for p in primes_up_to(p_max):
        ratio, m, n = weil_scan_worst(p)
        cases += p * p
        worst_overall = max(worst_overall, ratio)
        if ratio > 1 + 1e-6:
            disc.append(
                IdentityDiscrepancy(
                    "weil_bound", p, f"m={m}, n={n}", "<= 1", f"{ratio}", ratio - 1
                )
            )
    return VerificationReport(
        "weil-scan", cases, worst_overall, 1 + 1e-6, disc, time.perf_counter() - t0,
        notes="residual column is max |S|/bound",
    )


def suite_orthogonality(p_max: int = 97) -> VerificationReport:
    """Star and odd relations against their printed case values (exact)."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in [q for q in primes_up_to(p_max) if q >= 3]:
        tol = 1e-9 * p
        for A in range(1, p):
            for B in range(1, p):
                star = orthogonality_star(A, B, p)
                expect = (p - 2) if A == B else -1.0
                err = abs(star - expect)
                odd = orthogonality_odd(A, B, p)
                if A == B:
                    expect_odd = (p - 1) / 2
                elif (A + B) % p == 0:
                    expect_odd = (1 - p) / 2
                else:
                    expect_odd = 0.0
                err = max(err, abs(odd - expect_odd))
                worst = max(worst, err)
                cases += 2
                if err > tol:
                    disc.append(
                        IdentityDiscrepancy(
                            "orthogonality_star_odd", p, f"A={A}, B={B}",
                            f"{expect}/{expect_odd}", f"{_fmt(star)}/{_fmt(odd)}", err,
                        )
                    )
    return VerificationReport(
        "orthogonality", cases, worst, 1e-9 * p_max, disc, time.perf_counter() - t0
    )


def suite_orthogonality_even_printed(p_max: int = 97) -> VerificationReport:
    """The printed even-case values.  Quarantined: brute force selects
    (p-3)/2 at A = +-B, off by exactly 1/2 from the printed (p-2)/2."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in [q for q in primes_up_to(p_max) if q >= 5]:
        seen = set()
        for A in range(1, p):
            for B in (A, (-A) % p, (A + 1) % p or 1):
                if B == 0 or (A, B) in seen:
                    continue
                seen.add((A, B))
                val = orthogonality_even(A, B, p)
                printed = (p - 2) / 2 if (A == B or (A + B) % p == 0) else -1.0
                err = abs(val - printed)
                cases += 1
                worst = max(worst, err)
                if err > 1e-9 * p:
                    disc.append(
                        IdentityDiscrepancy(
                            "orthogonality_even", p, f"A={A}, B={B}",
                            f"{printed}", _fmt(val), err,
                        )
                    )
    return VerificationReport(
        "orthogonality-even-printed", cases, worst, 1e-9 * p_max, disc,
        time.perf_counter() - t0, quarantined=True,
        notes="printed constant (p-2)/2 disagrees with enumeration by 1/2 at A=+-B",
    )


def suite_gauss(p_max: int = 97) -> VerificationReport:
    """|tau(chi)|^2 = p for non-principal chi; tau(chi_0) = mu(p) = -1."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in [q for q in primes_up_to(p_max) if q >= 3]:
        grp = get_group(p)
        taus = grp.gauss_sums()
        err0 = abs(taus[0] - (-1.0))
        worst = max(worst, err0)
        cases += 1
        if err0 > 1e-10:
            disc.append(
                IdentityDiscrepancy("gauss_principal", p, "chi_0", "-1", _fmt(taus[0]), err0)
            )
        for j in range(1, p - 1):
            err = abs(abs(taus[j]) ** 2 - p) / p
            worst = max(worst, err)
            cases += 1
            if err > 1e-8:
                disc.append(
                    IdentityDiscrepancy(
                        "gauss_modulus", p, f"j={j}", f"|tau|^2={p}", _fmt(taus[j]), err
                    )
                )
    return VerificationReport("gauss-sums", cases, worst, 1e-8, disc, time.perf_counter() - t0)


def suite_fe_zeta() -> VerificationReport:
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for sigma in (-1.5, -0.5, 0.25, 0.5, 0.75, 2.0, 3.0):
        for t in (0.0, 3.0, 10.0, 20.0):
            s = complex(sigma, t)
            if abs(s - 1) < 0.05 or abs(s) < 0.05:
                continue
            r = check_zeta_fe(s)
            worst = max(worst, r)
            cases += 1
            if r > 1e-7:
                disc.append(IdentityDiscrepancy("zeta_fe", 0, f"s={s}", "0", f"{r}", r))
    return VerificationReport("fe-zeta", cases, worst, 1e-7, disc, time.perf_counter() - t0)


def suite_fe_L(p_max: int = 31) -> VerificationReport:
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in [q for q in primes_up_to(p_max) if q >= 3]:
        grp = get_group(p)
        for j in range(1, p - 1):
            chi = grp.character(j)
            for sigma in (0.25, 0.5, 0.75):
                for t in (-5.0, -2.0, 0.0, 2.0, 5.0):
                    r = check_L_fe(complex(sigma, t), chi)
                    worst = max(worst, r)
                    cases += 1
                    if r > 1e-7:
                        disc.append(
                            IdentityDiscrepancy(
                                "L_fe", p, f"j={j}, s={complex(sigma, t)}", "0", f"{r}", r
                            )
                        )
    return VerificationReport("fe-L", cases, worst, 1e-7, disc, time.perf_counter() - t0)


def suite_fe_estermann(q_max: int = 10) -> VerificationReport:
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for q in range(1, q_max + 1):
        for A in range(1, q + 1):
            if q > 1 and (A >= q or math.gcd(A, q) != 1):
                continue
            for s in (1.5, 2 + 1j):
                r = estermann_fe_check(s, q, A % q if q > 1 else 0)
                worst = max(worst, r)
                cases += 1
                if r > 1e-6:
                    disc.append(
                        IdentityDiscrepancy("estermann_fe", q, f"A={A}, s={s}", "0", f"{r}", r)
                    )
    return VerificationReport("fe-estermann", cases, worst, 1e-6, disc, time.perf_counter() - t0)


def suite_fe_d2(q_list=(2, 3, 5, 6, 10), s_list=(1.5, -0.5)) -> VerificationReport:
    """D2 functional equation with the adjudicated (mod d) convention."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for q in q_list:
        for A in range(1, q):
            if math.gcd(A, q) != 1:
                continue
            for s in s_list:
                r = d2_fe_check(s, q, A, congruence_modulus="d")
                worst = max(worst, r)
                cases += 1
                if r > 1e-6:
                    disc.append(
                        IdentityDiscrepancy("d2_fe", q, f"A={A}, s={s}", "0", f"{r}", r)
                    )
    return VerificationReport("fe-d2", cases, worst, 1e-6, disc, time.perf_counter() - t0)


def suite_residues(q_max: int = 20) -> VerificationReport:
    """E2 residue 2(gamma-log q)/q (A-independent); D2 residue
    2 mu(q)(gamma-log q)/q for squarefree q."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for q in range(1, q_max + 1):
        residues = []
        for A in range(q) if q == 1 else range(1, q):
            if q > 1 and math.gcd(A, q) != 1:
                continue
            rc = estermann_residue_check(q, A)
            residues.append(rc.laurent_c1)
            worst = max(worst, rc.residual)
            cases += 1
            if rc.residual > 1e-6:
                disc.append(
                    IdentityDiscrepancy(
                        "estermann_residue", q, f"A={A}",
                        f"{rc.expected_c1}", _fmt(rc.laurent_c1), rc.residual,
                    )
                )
        spread = max(abs(r - residues[0]) for r in residues) if residues else 0.0
        if spread > 1e-8:
            disc.append(
                IdentityDiscrepancy(
                    "estermann_residue_A_dependence", q, "all units",
                    "A-independent", f"spread={spread}", spread,
                )
            )
        if mobius(q) != 0:
            rc = d2_residue_check(q, 1 if q > 1 else 0)
            worst = max(worst, rc.residual)
            cases += 1
            if rc.residual > 1e-6:
                disc.append(
                    IdentityDiscrepancy(
                        "d2_residue", q, "A=1", f"{rc.expected_c1}",
                        _fmt(rc.laurent_c1), rc.residual,
                    )
                )
    return VerificationReport("residues", cases, worst, 1e-6, disc, time.perf_counter() - t0)


def suite_dual_evaluation(q_max: int = 20) -> VerificationReport:
    """Direct-series vs Hurwitz continuation for E2 and D2 at s = 1.5."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    s = 1.5
    for q in range(1, q_max + 1):
        for A in range(q) if q == 1 else range(1, q):
            if q > 1 and math.gcd(A, q) != 1:
                continue
            direct = estermann_E2_eval(s, q, A, "direct-series").value
            cont = estermann_E2_eval(s, q, A, "hurwitz-continuation").value
            err = abs(direct - cont)
            d_direct = d2_value(s, q, A, "direct-series")
            d_cont = d2_value(s, q, A, "hurwitz-continuation")
            err2 = abs(d_direct - d_cont)
            worst = max(worst, err, err2)
            cases += 2
            if max(err, err2) > 1e-7:
                disc.append(
                    IdentityDiscrepancy(
                        "dual_evaluation", q, f"A={A}", "agree",
                        f"E2 diff {err:.2e}, D2 diff {err2:.2e}", max(err, err2),
                    )
                )
    return VerificationReport("dual-evaluation", cases, worst, 1e-7, disc, time.perf_counter() - t0)


def suite_d2_decomposition(p_max: int = 31) -> VerificationReport:
    """Character decomposition of D2 (corrected form) for p <= p_max."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in [q for q in primes_up_to(p_max) if q >= 3]:
        for A in range(1, p):
            for s in (1.5, 2.0, 0.5 + 1j):
                r = d2_char_decomposition_check(s, p, A, form="corrected")
                worst = max(worst, r)
                cases += 1
                if r > 1e-6:
                    disc.append(
                        IdentityDiscrepancy(
                            "d2_decomposition", p, f"A={A}, s={s}", "0", f"{r}", r
                        )
                    )
    return VerificationReport("d2-decomposition", cases, worst, 1e-6, disc, time.perf_counter() - t0)


def suite_d2_decomposition_printed(p_list=(5, 7)) -> VerificationReport:
    """The printed decomposition (principal term zeta^2/(p-1), power
    p^{s-1}).  Quarantined: off by O(1) except on the t = 0 critical
    point; kept as a structured record of the defect."""
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in p_list:
        for A in (1, 2):
            for s in (1.5, 2.0):
                r = d2_char_decomposition_check(s, p, A, form="printed")
                worst = max(worst, r)
                cases += 1
                if r > 1e-6:
                    disc.append(
                        IdentityDiscrepancy(
                            "d2_decomposition_printed", p, f"A={A}, s={s}", "0", f"{r}", r
                        )
                    )
    return VerificationReport(
        "d2-decomposition-printed", cases, worst, 1e-6, disc, time.perf_counter() - t0,
        quarantined=True,
        notes="printed principal term and p-power fail off the critical line; "
        "the corrected form (see adjudications) holds to 1e-6",
    )


def suite_afe(p_list=(5, 7, 13), t_list=(0.0, 1.0, 2.0), cutoff_mult: int = 4000) -> VerificationReport:
    t0 = time.perf_counter()
    disc = []
    worst = 0.0
    cases = 0
    for p in p_list:
        grp = get_group(p)
        for j in range(1, p - 1):
            chi = grp.character(j)
            for t in t_list:
                r = afe_check(0.5 + 1j * t, chi, cutoff=cutoff_mult * p)
                worst = max(worst, r.residual)
                cases += 1
                if r.residual > 1e-6:
                    disc.append(
                        IdentityDiscrepancy(
                            "afe", p, f"j={j}, t={t}", "0", f"{r.residual}", r.residual
                        )
                    )
    return VerificationReport("afe", cases, worst, 1e-6, disc, time.perf_counter() - t0)


def suite_adjudications() -> VerificationReport:
    """Re-run all open-question adjudications against the golden file."""
    t0 = time.perf_counter()
    results = adjudicate.run_all()
    problems = adjudicate.verify_against_golden(results)
    disc = [
        IdentityDiscrepancy("adjudication", 0, p, "golden verdict", "run verdict", float("nan"))
        for p in problems
    ]
    notes = "; ".join(f"{k} -> {v.selected}" for k, v in results.items())
    rep = VerificationReport(
        "adjudications", len(results), 0.0, 0.0, disc, time.perf_counter() - t0,
        quarantined=not problems, notes=notes,
    )
    return rep


def run_identity_suites(cfg: ExperimentConfig) -> list[VerificationReport]:
    p_small = min(cfg.p_max, 97)
    afe_primes = tuple(p for p in (5, 7, 13) if p <= max(cfg.p_max, 5))
    reports = [
        suite_weil(min(cfg.p_max, 199)),
        suite_orthogonality(p_small),
        suite_orthogonality_even_printed(p_small),
        suite_gauss(p_small),
        suite_fe_zeta(),
        suite_fe_L(min(cfg.p_max, 31)),
        suite_fe_estermann(10),
        suite_fe_d2(),
        suite_residues(20),
        suite_dual_evaluation(20),
        suite_d2_decomposition(min(cfg.p_max, 31)),
        suite_d2_decomposition_printed(),
        suite_afe(p_list=afe_primes),
        suite_adjudications(),
    ]
    return reports


def report_exit_code(reports: list[VerificationReport]) -> int:
    """0 if all pass or only quarantined suites carry discrepancies."""
    for r in reports:
        if not r.quarantined and r.discrepancies:
            return 1
    return 0


def reports_to_json(reports: list[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)
