"""Seeded fuzz campaigns over the exact verifiers.

Each trial is a pure function of ``(config, trial index)``: its seed is derived
from the campaign seed and the index, so the merged report does not depend on
how trials are spread over worker processes.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

from .combinatorics import Permutation, all_permutations, derangements
from .exact import InputError, format_rational
from .generators import (
    GeneratorSpec,
    SplitMix64,
    derive_seed,
    generate,
    random_derangement,
    random_non_identity,
)
from .inequalities import (
    ClassificationError,
    VerdictReport,
    check_block_zy,
    check_fischer,
    check_frame_product,
    check_frame_zy,
    check_hadamard,
    check_hadamard_product_form,
    check_refined,
    check_thompson,
    check_zy,
)
from .majorization import check_lemma_pq

log = logging.getLogger(__name__)

MATRIX_THEOREMS = {"hadamard", "fischer", "zy", "refined", "hprod"}
FRAME_THEOREMS = {"frameProduct", "frameZY", "lemmaPQ"}
BLOCK_THEOREMS = {"thompson", "blockZY"}
ALL_THEOREMS = MATRIX_THEOREMS | FRAME_THEOREMS | BLOCK_THEOREMS

FRAME_FAMILIES = {"rationalUnitary", "frame", "eg1", "eg2", "eg3"}
MAX_EXHAUSTIVE_N = 9


def canonical_theorem(name: str) -> str:
    canon = {t.lower(): t for t in ALL_THEOREMS}
    try:
        return canon[name.strip().lower()]
    except KeyError:
        raise InputError(f"unknown theorem {name!r}; choose from {', '.join(sorted(ALL_THEOREMS))}") from None


@dataclass(frozen=True)
class FuzzConfig:
    family: str
    trials: int
    theorems: tuple[str, ...]
    seed: int
    n_min: int = 4
    n_max: int = 4
    rank: int | None = None
    sizes: tuple[int, ...] | None = None
    perm: str | None = None
    all_perms: bool = False
    block_diagonal_every: int = 5
    jobs: int = 1
    fail_fast: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if not self.theorems:
            raise InputError("at least one theorem is required")
        object.__setattr__(self, "theorems", tuple(canonical_theorem(t) for t in self.theorems))
        fam = GeneratorSpec(self.family, max(self.n_min, 1), 0).family
        object.__setattr__(self, "family", fam)
        if not 1 <= self.n_min <= self.n_max:
            raise InputError(f"bad dimension range {self.n_min}..{self.n_max}")
        kinds = {"block" if fam == "blockPD" else "frame" if fam in FRAME_FAMILIES else "matrix"}
        for t in self.theorems:
            want = ("block" if t in BLOCK_THEOREMS else "frame" if t in FRAME_THEOREMS
                    else "matrix")
            if want not in kinds:
                raise InputError(f"theorem {t} does not apply to family {fam}")
        if self.all_perms and self.n_max > MAX_EXHAUSTIVE_N:
            raise InputError(f"exhaustive permutations are capped at n <= {MAX_EXHAUSTIVE_N}")
        if fam == "blockPD" and not self.sizes:
            raise InputError("family blockPD needs --sizes")

    def summary(self) -> dict:
        d = asdict(self)
        d.pop("jobs")
        return d


@dataclass
class TrialResult:
    index: int
    seed: int
    checks: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def _instance_json(inst: dict) -> dict:
    out = {"matrix": inst["matrix"].to_json()}
    if "lambda" in inst:
        out["lambda"] = inst["lambda"].to_json()["lambda"]
    if "partition" in inst:
        out["partition"] = inst["partition"].to_json()
    if "perm" in inst:
        out["perm"] = str(inst["perm"])
    return out


def _perms_for(n: int, cfg: FuzzConfig, rng: SplitMix64, inst: dict,
               derangement: bool) -> list[Permutation]:
    if cfg.perm:
        return [Permutation.parse(cfg.perm)]
    if "perm" in inst:
        return [inst["perm"]]
    if cfg.all_perms:
        if derangement:
            return derangements(n)
        return [p for p in all_permutations(n) if not p.is_identity()]
    return [random_derangement(n, rng) if derangement else random_non_identity(n, rng)]


def _record(res: TrialResult, report: VerdictReport, inst: dict, perm=None, extra=None) -> None:
    entry = {"theorem": report.theorem, "holds": report.holds, "equality": report.equality,
             "case": report.case}
    if perm is not None:
        entry["perm"] = str(perm)
    if extra:
        entry.update(extra)
    res.checks.append(entry)
    if not report.holds:
        res.violations.append({**entry, "trial": res.index, "seed": res.seed,
                               "report": report.to_json(), **_instance_json(inst)})


def run_trial(cfg: FuzzConfig, index: int) -> TrialResult:
    seed = derive_seed(cfg.seed, index)
    rng = SplitMix64(derive_seed(seed, "campaign"))
    n = cfg.n_min + rng.below(cfg.n_max - cfg.n_min + 1)
    params: dict = {}
    if cfg.rank is not None:
        params["rank"] = min(cfg.rank, n)
    if cfg.sizes:
        params["sizes"] = list(cfg.sizes)
        params["block_diagonal"] = bool(cfg.block_diagonal_every) and index % cfg.block_diagonal_every == 0
    if cfg.family == "rankOneOrbit" and cfg.perm:
        params["perm"] = Permutation.parse(cfg.perm)
    res = TrialResult(index, seed)
    inst = generate(GeneratorSpec(cfg.family, n, seed, params))
    A = inst["matrix"]
    try:
        for thm in cfg.theorems:
            _run_theorem(thm, cfg, rng, inst, res)
    except ClassificationError as exc:
        res.failures.append({"trial": index, "seed": seed, "error": str(exc),
                             **_instance_json(inst)})
    except InputError as exc:
        res.skipped.append({"trial": index, "reason": str(exc), "n": A.n})
    return res


def _run_theorem(thm: str, cfg: FuzzConfig, rng: SplitMix64, inst: dict, res: TrialResult) -> None:
    A = inst["matrix"]
    n = A.n
    if thm == "hadamard":
        _record(res, check_hadamard(A), inst)
    elif thm == "fischer":
        splits = ([G for k in range(1, n) for G in combinations(range(n), k)] if cfg.all_perms
                  else [tuple(sorted(rng.shuffle(list(range(n)))[:1 + rng.below(n - 1)]))])
        for G in splits:
            _record(res, check_fischer(A, G), inst, extra={"G": [g + 1 for g in G]})
    elif thm == "zy":
        for sigma in _perms_for(n, cfg, rng, inst, derangement=False):
            _record(res, check_zy(A, sigma), inst, sigma)
    elif thm in ("refined", "hprod"):
        check = check_refined if thm == "refined" else check_hadamard_product_form
        for tau in _perms_for(n, cfg, rng, inst, derangement=True):
            _record(res, check(A, tau), inst, tau)
    elif thm == "frameProduct":
        _record(res, check_frame_product(inst["lambda"], A), inst)
    elif thm == "frameZY":
        gram = A.H @ A
        allowed = [tau for tau in derangements(n)
                   if all(gram[i, j].is_zero() for i, j in enumerate(tau.image))]
        if not allowed:
            res.skipped.append({"trial": res.index, "theorem": thm,
                                "reason": "no derangement fits the zero pattern of V*V"})
            return
        taus = allowed if cfg.all_perms else [rng.choice(allowed)]
        for tau in taus:
            _record(res, check_frame_zy(inst["lambda"], A, tau), inst, tau)
    elif thm == "lemmaPQ":
        lam = inst["lambda"]
        t = min(lam) - Fraction(rng.below(3), 4)
        s = t - Fraction(1 + rng.below(8), 4)
        pq = check_lemma_pq(lam, A, s, t)
        report = VerdictReport("lemmaPQ", pq.holds and pq.consistent, pq.gap_t,
                               Fraction(0), pq.equality, "unclassified" if pq.equality else "notEqual",
                               {"s": format_rational(s), "t": format_rational(t)})
        _record(res, report, inst, extra={"spectrum_permutation": pq.spectrum_permutation})
    elif thm == "thompson":
        _record(res, check_thompson(A, inst["partition"]), inst)
    elif thm == "blockZY":
        part = inst["partition"]
        for tau in derangements(part.count):
            _record(res, check_block_zy(A, part, tau), inst, tau)


def _run_chunk(args: tuple[FuzzConfig, list[int]]) -> list[TrialResult]:
    cfg, indices = args
    return [run_trial(cfg, i) for i in indices]


def run_campaign(cfg: FuzzConfig, on_trial=None) -> dict:
    """Run all trials and merge them in trial order into a summary dict."""
    start = time.perf_counter()
    results: list[TrialResult] = []

    def consume(batch):
        for r in batch:
            results.append(r)
            if on_trial is not None:
                on_trial(r)
            if cfg.fail_fast and (r.violations or r.failures):
                return True
        return False

    if cfg.jobs <= 1:
        for i in range(cfg.trials):
            if consume([run_trial(cfg, i)]):
                break
    else:
        chunk = max(1, min(64, cfg.trials // (cfg.jobs * 4) or 1))
        chunks = [(cfg, list(range(i, min(i + chunk, cfg.trials))))
                  for i in range(0, cfg.trials, chunk)]
        with multiprocessing.Pool(cfg.jobs) as pool:
            for batch in pool.imap(_run_chunk, chunks):
                if consume(batch):
                    pool.terminate()
                    break
    return summarize(cfg, results, time.perf_counter() - start)


def summarize(cfg: FuzzConfig, results: list[TrialResult], elapsed: float) -> dict:
    histogram: Counter = Counter()
    per_theorem: dict[str, Counter] = {t: Counter() for t in cfg.theorems}
    violations, failures, skipped = [], [], []
    equality_trials = 0
    for r in results:
        for c in r.checks:
            tally = per_theorem[c["theorem"]]
            tally["checks"] += 1
            tally["holds"] += c["holds"]
            tally["violations"] += not c["holds"]
            tally["equalities"] += c["equality"]
            if c["equality"]:
                histogram[c["case"]] += 1
        if r.checks and all(c["equality"] for c in r.checks):
            equality_trials += 1
        violations.extend(r.violations)
        failures.extend(r.failures)
        skipped.extend(r.skipped)
    return {
        "config": cfg.summary(),
        "trialsRun": len(results),
        "checksRun": sum(len(r.checks) for r in results),
        "violationCount": len(violations),
        "violations": violations,
        "classifierFailureCount": len(failures),
        "classifierFailures": failures,
        "skippedCount": len(skipped),
        "skipped": skipped[:20],
        "equalityCount": equality_trials,
        "classifierHistogram": dict(sorted(histogram.items())),
        "perTheoremBreakdown": {t: dict(sorted(c.items())) for t, c in per_theorem.items()},
        "elapsed": round(elapsed, 3),
    }


def report_bytes(report: dict, drop_elapsed: bool = False) -> bytes:
    if drop_elapsed:
        report = {k: v for k, v in report.items() if k != "elapsed"}
    return json.dumps(report, sort_keys=True, indent=2).encode()


def campaign_passed(report: dict) -> bool:
    return report["violationCount"] == 0 and report["classifierFailureCount"] == 0
