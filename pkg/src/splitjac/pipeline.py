"""Orchestration of the full proof pipeline.

Stages, each independently invokable and recomputed from scratch:

1. ``run_lemma_lists``: discriminants admitting a primitive element of norm
   n, for the eight relevant degrees.
2. ``run_screen``: the degree-matching screen over the cyclic-isogeny input
   table, yielding 18 discriminant pairs with isomorphy flags.
3. ``run_search``: for each surviving pair, sweep the exact candidate
   periods (tau, sigma), check the polarization, build the degree form,
   keep the candidates representing exactly 2..31, and classify each
   survivor against the four reference forms.  Exactly 20 rows survive.
4. ``run_universal``: the constructive representation check for all four
   forms, with an optional brute-force enumeration cross-check.

Stage outputs are compared against embedded golden fixtures (override with
a path for experimentation); a mismatch raises ReproductionMismatch, which
the CLI maps to exit code 2, while violated internal invariants surface as
AssertionError and map to exit code 3.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from importlib import resources

from . import cmhom, periodlattice, qforms, universal
from .bqf import (
    canon_gamma2,
    cm_points_F1,
    gamma1_equivalent,
    gamma2_tiles,
    in_F1,
    in_F2,
)
from .quadfield import KElem

LEMMA_DEGREES = (2, 3, 4, 5, 6, 7, 10, 35)
TARGET_VALUES = frozenset(range(2, 32))


class ReproductionMismatch(RuntimeError):
    """Computed output disagrees with the golden fixture."""


def load_golden(path: str | None = None) -> dict:
    if path is None:
        text = resources.files("splitjac").joinpath("data/golden.json").read_text()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return json.loads(text)


# -- stage 1: norm-form discriminant lists -----------------------------------


def run_lemma_lists() -> dict[int, tuple[int, ...]]:
    return {
        n: tuple(sorted(cmhom.primitive_norm_discriminants(n), key=abs))
        for n in LEMMA_DEGREES
    }


def check_lemma_lists(lists: dict[int, tuple[int, ...]], golden: dict) -> None:
    expected = {int(k): tuple(v) for k, v in golden["lemma_lists"].items()}
    if set(lists) != set(expected):
        raise ReproductionMismatch(f"degree set {sorted(lists)} != {sorted(expected)}")
    for n, got in lists.items():
        if set(got) != set(expected[n]):
            raise ReproductionMismatch(
                f"degree {n}: computed {sorted(got, key=abs)}, expected {expected[n]}"
            )


# -- stage 2: the discriminant screen ----------------------------------------


def run_screen() -> tuple[tuple[int, int, bool], ...]:
    return cmhom.screen_all()


def check_screen(pairs: tuple[tuple[int, int, bool], ...], golden: dict) -> None:
    expected = tuple(
        (row["delta_e"], row["delta_f"], row["isomorphic"])
        for row in golden["screen_pairs"]
    )
    if pairs != expected:
        raise ReproductionMismatch(
            f"screen produced {pairs}, expected {expected}"
        )


# -- stage 3: the (tau, sigma) sweep ------------------------------------------


@dataclass(frozen=True)
class Candidate:
    delta_e: int
    delta_f: int
    tau: KElem
    sigma: KElem
    tile: str


@dataclass(frozen=True)
class ClassificationRow:
    index: int
    delta_e: int
    delta_f: int
    tau: KElem
    sigma: KElem
    form_id: int
    gram: tuple
    witness: tuple

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "delta_e": self.delta_e,
            "delta_f": self.delta_f,
            "tau": str(self.tau),
            "sigma": str(self.sigma),
            "form_id": self.form_id,
            "gram": [list(row) for row in self.gram],
            "witness": [list(row) for row in self.witness],
        }


@dataclass
class RunReport:
    candidates: int = 0
    polarization_checked: int = 0
    survivors: int = 0
    nonintegral_grams: int = 0
    timings: dict | None = None

    def check_monotone(self):
        assert self.candidates >= self.polarization_checked >= self.survivors


def generate_candidates(
    screen_pairs: tuple[tuple[int, int, bool], ...],
) -> list[Candidate]:
    """All (tau, sigma) candidates for the sweep, one per isomorphism class.

    tau runs over the strict-F1 points of every ideal class of delta_e, the
    second curve over those of delta_f; for equal discriminants the classes
    are matched (isomorphic case) or crossed (non-isomorphic case).  sigma
    runs over the six coset images of the second point, each replaced by its
    canonical strict-F2 representative.

    Distinct level-2 classes can still present isomorphic surfaces when the
    first curve has extra automorphisms (discriminants -3 and -4): twisting
    the 2-torsion identification by a unit is an isomorphism of the
    resulting pairs.  Such duplicates are merged, each merge justified by an
    explicit diagonal lattice isomorphism; the representative kept is the
    class with the largest imaginary part (then smallest real part).
    """
    out = []
    for delta_e, delta_f, isomorphic in screen_pairs:
        taus = [p.z for p in cm_points_F1(delta_e)]
        rhos = [p.z for p in cm_points_F1(delta_f)]
        for tau in taus:
            for rho in rhos:
                if delta_e == delta_f and isomorphic != (rho == tau):
                    continue
                classes: list[tuple[str, KElem]] = []
                for label, pt in gamma2_tiles(rho):
                    sigma = canon_gamma2(pt.z)
                    if all(sigma != s for _, s in classes):
                        classes.append((label, sigma))
                groups: list[list[tuple[str, KElem]]] = []
                for label, sigma in classes:
                    lat = periodlattice.PeriodLattice(tau, sigma)
                    for group in groups:
                        other = periodlattice.PeriodLattice(tau, group[0][1])
                        if periodlattice.diag_isomorphic(lat, other):
                            group.append((label, sigma))
                            break
                    else:
                        groups.append([(label, sigma)])
                for group in groups:
                    label, sigma = max(
                        group, key=lambda it: (it[1].im_coeff, -it[1].re)
                    )
                    out.append(Candidate(delta_e, delta_f, tau, sigma, label))
    return out


def evaluate_candidate(cand: Candidate) -> dict:
    """Polarization check, degree form, small-value test, classification."""
    lattice = periodlattice.PeriodLattice(cand.tau, cand.sigma)
    gram = periodlattice.polarization_gram(lattice)
    assert gram == periodlattice.SYMPLECTIC_GRAM, f"polarization failed at {cand}"
    form = periodlattice.degree_gram(lattice)
    values = periodlattice.represented_small_values(form, 31)
    result = {
        "candidate": cand,
        "integral": form.is_integral,
        "survived": values == TARGET_VALUES,
        "represents_one": 1 in values,
    }
    if not result["survived"]:
        return result
    qf = qforms.QForm4(form.int_gram())
    matches = []
    for form_id, ref in qforms.REFERENCE_FORMS.items():
        witness = qforms.equivalent(qf, ref)
        if witness is not None:
            matches.append((form_id, witness))
    assert len(matches) == 1, f"candidate {cand} matched forms {[m[0] for m in matches]}"
    form_id, witness = matches[0]
    result.update(form_id=form_id, witness=witness, gram=qf.gram)
    return result


def _row_sort_key(row: dict):
    cand = row["candidate"]
    return (
        abs(cand.delta_e),
        abs(cand.delta_f),
        cand.tau.a,
        cand.tau.b,
        cand.sigma.a,
        cand.sigma.b,
    )


def run_search(jobs: int = 1) -> tuple[list[ClassificationRow], RunReport]:
    timings = {}
    t0 = time.perf_counter()
    screen_pairs = run_screen()
    timings["screen"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    candidates = generate_candidates(screen_pairs)
    report = RunReport(candidates=len(candidates), timings=timings)

    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(evaluate_candidate, candidates)
    else:
        results = [evaluate_candidate(c) for c in candidates]
    timings["sweep"] = time.perf_counter() - t0

    report.polarization_checked = len(results)
    report.nonintegral_grams = sum(1 for r in results if not r["integral"])
    survivors = [r for r in results if r["survived"]]
    report.survivors = len(survivors)
    report.check_monotone()
    assert report.survivors == 20, f"expected 20 classification rows, got {report.survivors}"

    rows = []
    for i, r in enumerate(sorted(survivors, key=_row_sort_key), start=1):
        cand = r["candidate"]
        assert in_F1(cand.tau) and in_F2(cand.sigma)
        rows.append(
            ClassificationRow(
                index=i,
                delta_e=cand.delta_e,
                delta_f=cand.delta_f,
                tau=cand.tau,
                sigma=cand.sigma,
                form_id=r["form_id"],
                gram=r["gram"],
                witness=r["witness"],
            )
        )
    return rows, report


def check_classification(rows: list[ClassificationRow], golden: dict) -> list[int]:
    """Match computed rows against the fixture, bijectively.

    Discriminants and form ids must agree exactly; tau is compared up to
    full-modular-group equivalence, and the full (tau, sigma) datum via a
    certified diagonal lattice isomorphism.  Fixture rows whose tau lies
    outside the strict fundamental domain carry a sigma tied to that
    out-of-domain representative and cannot be transported faithfully; for
    those rows only, matching relaxes to discriminants, form and tau class
    (the documented boundary-representative exception).  Returns the
    fixture indices matched under the relaxed rule.
    """
    expected = [dict(row) for row in golden["classification"]]
    if len(rows) != len(expected):
        raise ReproductionMismatch(f"{len(rows)} rows, expected {len(expected)}")
    unused = list(range(len(expected)))
    relaxed_used = []
    for row in rows:
        cert_hits = []
        relaxed_hits = []
        for j in unused:
            exp = expected[j]
            if (row.delta_e, row.delta_f, row.form_id) != (
                exp["delta_e"], exp["delta_f"], exp["form_id"],
            ):
                continue
            tau_g = KElem.from_string(exp["tau"])
            sigma_g = KElem.from_string(exp["sigma"])
            if not gamma1_equivalent(row.tau, tau_g):
                continue
            if periodlattice.diag_isomorphic(
                periodlattice.PeriodLattice(row.tau, row.sigma),
                periodlattice.PeriodLattice(tau_g, sigma_g),
            ):
                cert_hits.append(j)
            elif not in_F1(tau_g):
                relaxed_hits.append(j)
        if cert_hits:
            unused.remove(cert_hits[0])
        elif relaxed_hits:
            j = relaxed_hits[0]
            relaxed_used.append(expected[j]["index"])
            unused.remove(j)
        else:
            raise ReproductionMismatch(f"row {row.to_dict()} has no fixture match")
    if unused:
        raise ReproductionMismatch(f"fixture rows {unused} unmatched")
    return relaxed_used


# -- stage 4: universality ------------------------------------------------------


def _verify_chunk(args) -> dict:
    form_id, lo, hi = args
    cases: dict[str, int] = {}
    for n in range(lo, hi):
        rep = universal.represent(form_id, n)
        key = universal.case_key(rep)
        cases[key] = cases.get(key, 0) + 1
    return cases


def run_universal(nmax: int, oracle_max: int | None = None, jobs: int = 1) -> dict:
    if nmax < 2:
        raise ValueError("need nmax >= 2")
    out: dict = {"max": nmax, "forms": {}}
    for form_id in (1, 2, 3, 4):
        if jobs > 1:
            import multiprocessing

            chunk = max(500, (nmax - 1) // (4 * jobs) + 1)
            tasks = [
                (form_id, lo, min(lo + chunk, nmax + 1))
                for lo in range(2, nmax + 1, chunk)
            ]
            with multiprocessing.Pool(jobs) as pool:
                parts = pool.map(_verify_chunk, tasks)
            cases: dict[str, int] = {}
            for part in parts:
                for k, v in part.items():
                    cases[k] = cases.get(k, 0) + v
            report = {"form": form_id, "max": nmax, "count": nmax - 1, "cases": cases}
        else:
            report = universal.verify_universal(form_id, nmax)
        out["forms"][form_id] = report
    if oracle_max is not None:
        if oracle_max < 2:
            raise ValueError("need oracle_max >= 2")
        agree = {}
        for form_id in (1, 2, 3, 4):
            enum = universal.represented_by_enumeration(form_id, oracle_max)
            missing = set(range(2, oracle_max + 1)) - enum
            assert not missing, f"form {form_id} misses {sorted(missing)[:5]}"
            assert 1 not in enum
            agree[form_id] = True
        out["oracle_max"] = oracle_max
        out["oracle_agrees"] = agree
    return out


# -- serialization --------------------------------------------------------------

_INT64_MAX = 2**63 - 1


def jsonable(x):
    """JSON-ready structure: big integers become strings, field elements too."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) > _INT64_MAX else x
    if isinstance(x, KElem):
        return str(x)
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, float):
        raise TypeError("floating point has no place in pipeline output")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = list(x)
        if isinstance(x, (set, frozenset)):
            items = sorted(items)
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(x)}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"
