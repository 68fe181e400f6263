"""Command-line front end: ``detineq check | fuzz | generate | example``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from itertools import combinations

from .combinatorics import MAX_ENUMERATION_N, Permutation, all_permutations, derangements
from .exact import InputError, format_rational, parse_rational
from .fuzz import ALL_THEOREMS, FuzzConfig, campaign_passed, canonical_theorem, run_campaign
from .generators import (
    GeneratorSpec,
    derive_seed,
    generate,
    gram_psd,
    pad_frame,
    rotation_frame,
    sqrt_block_frame,
)
from .inequalities import (
    ClassificationError,
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
from .majorization import SpectrumVector, check_lemma_pq, frame_to_ds
from .matrix import BlockPartition, Matrix

log = logging.getLogger("detineq")

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _seed(args) -> int:
    env = os.environ.get("DETINEQ_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"DETINEQ_SEED must be an integer, got {env!r}") from None
    return args.seed


def _rational(tok: str) -> Fraction:
    tok = tok.strip()
    return parse_rational(tok if "/" in tok else tok + "/1")


def _rationals(text: str) -> list[Fraction]:
    return [_rational(tok) for tok in text.split(",")]


def _dimension(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition("-")
    try:
        lo_i = int(lo)
        return lo_i, int(hi) if hi else lo_i
    except ValueError:
        raise InputError(f"--n expects N or LO-HI, got {text!r}") from None


# -- check ---------------------------------------------------------------------

def _load_instance(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise InputError("input must be a JSON object")
    inst = {"matrix": Matrix.from_json(obj)}
    if "lambda" in obj:
        inst["lambda"] = SpectrumVector.from_json(obj)
    if "partition" in obj:
        inst["partition"] = BlockPartition.from_json(obj["partition"])
    if "perm" in obj:
        inst["perm"] = Permutation.parse(obj["perm"])
    return inst


def _enumerable(n: int) -> None:
    if n > MAX_ENUMERATION_N:
        raise InputError(f"n={n} is too large to enumerate permutations; pass --perm")


def cmd_check(args) -> int:
    inst = _load_instance(args.input)
    A = inst["matrix"]
    theorem = canonical_theorem(args.theorem)
    perm = Permutation.parse(args.perm) if args.perm else inst.get("perm")
    part = BlockPartition.parse(args.partition) if args.partition else inst.get("partition")
    lam = SpectrumVector(_rationals(args.spectrum)) if args.spectrum else inst.get("lambda")
    if perm is not None and theorem not in ("blockZY",) and perm.n != A.n:
        raise InputError(f"permutation has size {perm.n}, matrix is {A.n}x{A.n}")

    reports = []
    if theorem == "hadamard":
        reports.append(check_hadamard(A).to_json())
    elif theorem == "fischer":
        if args.subset:
            subsets = [tuple(int(t) - 1 for t in args.subset.split(","))]
        else:
            _enumerable(A.n)
            subsets = [G for k in range(1, A.n) for G in combinations(range(A.n), k)]
        for G in subsets:
            reports.append({**check_fischer(A, G).to_json(), "G": [g + 1 for g in G]})
    elif theorem in ("zy", "refined", "hprod"):
        fn = {"zy": check_zy, "refined": check_refined, "hprod": check_hadamard_product_form}[theorem]
        if perm is not None:
            perms = [perm]
        else:
            _enumerable(A.n)
            perms = (derangements(A.n) if theorem != "zy"
                     else [p for p in all_permutations(A.n) if not p.is_identity()])
        for p in perms:
            reports.append({**fn(A, p).to_json(), "perm": str(p)})
    elif theorem in ("frameProduct", "frameZY", "lemmaPQ"):
        if lam is None:
            raise InputError(f"theorem {theorem} needs a spectrum (--lambda or a 'lambda' field)")
        if theorem == "frameProduct":
            reports.append(check_frame_product(lam, A).to_json())
        elif theorem == "frameZY":
            if perm is None:
                raise InputError("theorem frameZY needs --perm")
            reports.append({**check_frame_zy(lam, A, perm).to_json(), "perm": str(perm)})
        else:
            if args.s is None or args.t is None:
                raise InputError("theorem lemmaPQ needs --s and --t")
            reports.append(check_lemma_pq(lam, A, _rational(args.s), _rational(args.t)).to_json())
    else:
        if part is None:
            raise InputError(f"theorem {theorem} needs --partition")
        if theorem == "thompson":
            reports.append(check_thompson(A, part).to_json())
        else:
            taus = [perm] if perm is not None else derangements(part.count)
            for tau in taus:
                reports.append({**check_block_zy(A, part, tau).to_json(), "perm": str(tau)})

    holds = all(r["holds"] for r in reports)
    _dump(reports[0] if len(reports) == 1 else {"theorem": theorem, "holds": holds,
                                                 "count": len(reports), "reports": reports})
    return EXIT_OK if holds else EXIT_VIOLATION


# -- fuzz ----------------------------------------------------------------------

def cmd_fuzz(args) -> int:
    n_min, n_max = _dimension(args.n) if args.n else (4, 4)
    cfg = FuzzConfig(
        family=args.family,
        trials=args.trials,
        theorems=tuple(t for t in args.theorems.split(",") if t.strip()),
        seed=_seed(args),
        n_min=n_min,
        n_max=n_max,
        rank=args.rank,
        sizes=tuple(BlockPartition.parse(args.sizes).sizes) if args.sizes else None,
        perm=args.perm,
        all_perms=args.all_perms,
        block_diagonal_every=args.block_diagonal_every,
        jobs=args.jobs,
        fail_fast=args.fail_fast,
    )

    def emit(trial):
        print(json.dumps(trial.to_json(), sort_keys=True))

    report = run_campaign(cfg, on_trial=emit if args.verbose else None)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if campaign_passed(report) else EXIT_VIOLATION


# -- generate ------------------------------------------------------------------

def cmd_generate(args) -> int:
    seed = _seed(args)
    params: dict = {}
    if args.rank is not None:
        params["rank"] = args.rank
    if args.sizes:
        params["sizes"] = list(BlockPartition.parse(args.sizes).sizes)
    if args.block_diagonal:
        params["block_diagonal"] = True
    if args.perm:
        params["perm"] = Permutation.parse(args.perm)
    inst = generate(GeneratorSpec(args.family, args.n, seed, params))
    obj = {"family": GeneratorSpec(args.family, args.n, seed).family, "seed": seed,
           **inst["matrix"].to_json()}
    if "lambda" in inst:
        obj["lambda"] = inst["lambda"].to_json()["lambda"]
    if "partition" in inst:
        obj["partition"] = inst["partition"].to_json()
    if "perm" in inst:
        obj["perm"] = str(inst["perm"])
    text = json.dumps(obj, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


# -- example -------------------------------------------------------------------

def _claim(text: str, confirmed: bool, **data) -> dict:
    return {"claim": text, "confirmed": bool(confirmed), **data}


def _ds_json(V: Matrix) -> list[list[str]]:
    return [[format_rational(x) for x in row] for row in frame_to_ds(V).entries]


def example_eg1(params: list[Fraction]) -> dict:
    c, s = params if params else (Fraction(4, 5), Fraction(3, 5))
    lam, V = rotation_frame(c, s)
    rep = check_frame_product(lam, V)
    unitary = V.H @ V == Matrix.identity(3) and V @ V.H == Matrix.identity(3)
    return {"id": "eg1", "params": [format_rational(c), format_rational(s)],
            "V": V.to_json()["data"], "S": _ds_json(V), "report": rep.to_json(),
            "claims": [
                _claim("V is a frame (unit rows and columns)", True),
                _claim("V is not unitary when 2cs != 0 and c != s", not unitary or c == s or c * s == 0),
                _claim("equality holds in the frame product inequality", rep.equality),
                _claim("S = (|v_ij|^2) is not a permutation matrix",
                       not rep.detail["s_is_permutation"]),
            ]}


def example_eg2(params: list[Fraction]) -> dict:
    c, s = params if params else (Fraction(4, 5), Fraction(3, 5))
    lam, V = pad_frame(*rotation_frame(c, s))
    rep = check_frame_product(lam, V)
    return {"id": "eg2", "params": [format_rational(c), format_rational(s)],
            "lambda": lam.to_json()["lambda"], "V": V.to_json()["data"], "S": _ds_json(V),
            "report": rep.to_json(),
            "claims": [
                _claim("both sides of the frame product inequality are zero",
                       rep.detail["lhs"] == "0/1" and rep.detail["rhs"] == "0/1"),
                _claim("S is not a permutation matrix", not rep.detail["s_is_permutation"]),
            ]}


def example_eg3(params: list[Fraction], seed: int) -> dict:
    import numpy as np

    from .approx import float_frame_product, psd_sqrt, random_contraction_hermitian

    a, b = params if params else (Fraction(4, 5), Fraction(3, 5))
    V = sqrt_block_frame([(a, b), None])
    lam = SpectrumVector([3, 2, 1])
    exact = check_frame_product(lam, V)
    n = 4
    T = random_contraction_hermitian(n, seed)
    Vf = psd_sqrt(np.eye(n) + T)
    gram = Vf.conj().T @ Vf
    lam_f = np.array([4.0, 3.0, 2.0, 1.0])
    lhs, rhs = float_frame_product(lam_f, Vf)
    return {"id": "eg3", "params": [format_rational(a), format_rational(b)], "seed": seed,
            "exact": {"V": V.to_json()["data"], "lambda": lam.to_json()["lambda"],
                      "report": exact.to_json()},
            "float": {"lhs": lhs, "rhs": rhs,
                      "max_abs_diag_error": float(np.max(np.abs(np.diag(gram) - 1.0))),
                      "residual": float(np.linalg.norm(Vf @ Vf - (np.eye(n) + T)))},
            "claims": [
                _claim("the rational square-root frame satisfies the product inequality",
                       exact.holds),
                _claim("V = (I+T)^(1/2) has unit diagonal in V*V",
                       np.allclose(np.diag(gram), 1.0, atol=1e-9)),
                _claim("V = (I+T)^(1/2) is not unitary",
                       not np.allclose(gram, np.eye(n), atol=1e-9)),
                _claim("the floating product inequality holds within 1e-9", lhs <= rhs + 1e-9),
            ]}


def example_n2(seed: int) -> dict:
    rank_ = 1 + derive_seed(seed, "n2rank") % 2
    A = gram_psd(2, rank_, seed)
    rep = check_zy(A, Permutation((1, 0)))
    return {"id": "n2-equality", "seed": seed, "matrix": A.to_json()["data"],
            "report": rep.to_json(),
            "claims": [_claim("for n = 2 the sharpened inequality is an equality",
                              rep.slack == 0, slack=format_rational(rep.slack))]}


def cmd_example(args) -> int:
    params = _rationals(args.params) if args.params else []
    if params and len(params) != 2:
        raise InputError("--params expects two rationals, e.g. 4/5,3/5")
    if args.id == "eg1":
        out = example_eg1(params)
    elif args.id == "eg2":
        out = example_eg2(params)
    elif args.id == "eg3":
        out = example_eg3(params, _seed(args))
    else:
        out = example_n2(_seed(args))
    _dump(out)
    return EXIT_OK if all(c["confirmed"] for c in out["claims"]) else EXIT_VIOLATION


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="detineq", description=__doc__)
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one verifier on a matrix file")
    p.add_argument("--input", required=True)
    p.add_argument("--theorem", required=True, help=", ".join(sorted(ALL_THEOREMS)))
    p.add_argument("--perm", help='1-based permutation, e.g. "2,3,1"')
    p.add_argument("--partition", help="block sizes, e.g. 2,2")
    p.add_argument("--subset", help="1-based index set G for fischer, e.g. 1,3")
    p.add_argument("--lambda", dest="spectrum", help="spectrum for frame theorems, e.g. 3,2,1")
    p.add_argument("--s")
    p.add_argument("--t")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fuzz", help="run a seeded campaign")
    p.add_argument("--family", required=True)
    p.add_argument("--n", help="dimension N or range LO-HI (default 4)")
    p.add_argument("--rank", type=int)
    p.add_argument("--sizes", help="block sizes for blockPD")
    p.add_argument("--perm")
    p.add_argument("--all-perms", action="store_true", help="enumerate every permutation")
    p.add_argument("--block-diagonal-every", type=int, default=5,
                   help="every K-th blockPD trial is block diagonal (0 disables)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--theorems", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--fail-fast", action="store_true")
    p.add_argument("--verbose", action="store_true", help="print one JSON line per trial")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("generate", help="write a generated instance as JSON")
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--rank", type=int)
    p.add_argument("--sizes")
    p.add_argument("--block-diagonal", action="store_true")
    p.add_argument("--perm")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("example", help="reconstruct a worked example")
    p.add_argument("--id", required=True, choices=["eg1", "eg2", "eg3", "n2-equality"])
    p.add_argument("--params")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ClassificationError as exc:
        print(f"classification failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
