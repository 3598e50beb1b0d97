"""Batch command-line front end.

Subcommands wrap the library one-to-one and emit deterministic JSON records
(or aligned tables) with a provenance field naming the rule behind each
verdict.  Exit codes: 0 success, 1 input error, 2 inconclusive or budget
exhausted (with partial output).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import curves as curves_mod
from . import galois, indexsets, treegroup
from .dynamics import (
    DegeneracyError,
    PCF,
    QuadPair,
    adjusted_orbit,
    in_post_critical_orbit,
    is_exceptional,
    is_pcf,
    orbit_valuations,
    parse_rational,
)
from .primes import DEFAULT_BUDGET, BudgetExceeded
from .squares import square_class
from .treegroup import CapExceeded

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2

EXCEPTIONAL_NOTE = (
    "derived closed form: a finite backward orbit forces the normal form (x^2, 0)"
)


@dataclass
class RunConfig:
    orbit_budget: int = 24
    factor_budget: int = DEFAULT_BUDGET
    prime_bound: int = 100
    seed: int = 0
    output: str = "json"
    dim_N: int = 12


def _frac_str(q: Fraction) -> str:
    return str(q)


def _pcf_json(verdict) -> dict:
    if isinstance(verdict, PCF):
        return {"kind": "pcf", "preperiod": verdict.preperiod, "period": verdict.period}
    return {
        "kind": "pci",
        "witness": verdict.witness,
        "index": verdict.index,
        "value": _frac_str(verdict.value),
        "prime": verdict.prime,
    }


def classify_pair(pair: QuadPair, config: RunConfig) -> dict:
    """Full classification record for one pair."""
    c, beta = pair.normal_form()
    record: dict = {
        "pair": {"a": str(pair.a), "b": str(pair.b), "alpha": str(pair.alpha)},
        "normal_form": {"c": str(c), "beta": str(beta)},
    }
    pcf_verdict = is_pcf(pair)
    record["pcf"] = _pcf_json(pcf_verdict)
    record["exceptional"] = is_exceptional(pair)
    record["degenerate"] = in_post_critical_orbit(pair)
    verdict = galois.classify_abelian(
        pair,
        prime_bound=config.prime_bound,
        dim_N=config.dim_N,
        budget=config.factor_budget,
        seed=config.seed,
    )
    record["abelian"] = verdict.to_json()
    inconclusive = False
    try:
        record["ab_dimension"] = galois.ab_dimension(
            pair, config.dim_N, config.factor_budget, config.seed
        )
        record["ab_dimension_N"] = config.dim_N
    except DegeneracyError as exc:
        record["ab_dimension"] = None
        record["ab_dimension_note"] = str(exc)
    except BudgetExceeded as exc:
        record["ab_dimension"] = None
        record["ab_dimension_note"] = str(exc)
        inconclusive = True
    try:
        data = galois.level2_data(pair, config.factor_budget, config.seed)
        record["level2"] = data.group.value
        record["level2_case"] = data.case
    except DegeneracyError as exc:
        record["level2"] = None
        record["level2_note"] = str(exc)
    except BudgetExceeded as exc:
        record["level2"] = None
        record["level2_note"] = str(exc)
        inconclusive = True
    record["inconclusive"] = inconclusive
    record["provenance"] = {
        "pcf": "orbit-iteration-with-escape-and-valuation-bounds",
        "exceptional": EXCEPTIONAL_NOTE,
        "abelian": verdict.provenance,
        "level2": "splitting-field-case-analysis",
        "ab_dimension": "square-class-span",
    }
    return record


def _emit(records: List[dict], config: RunConfig, table_fields: Sequence[str]) -> None:
    if config.output == "json":
        print(json.dumps(records, indent=2, sort_keys=True))
        return
    for record in records:
        cells = []
        for f in table_fields:
            value = record
            for part in f.split("."):
                value = value.get(part) if isinstance(value, dict) else None
            cells.append(str(value))
        print("\t".join(cells))


def _parse_pairs(args) -> List[QuadPair]:
    texts: List[str] = list(args.pairs or [])
    if getattr(args, "csv", None):
        with open(args.csv, newline="") as fh:
            for row in csv.reader(fh):
                if row:
                    texts.append(",".join(row))
    if not texts:
        raise ValueError("no pairs given")
    return [QuadPair.parse(t) for t in texts]


def _config(args) -> RunConfig:
    return RunConfig(
        orbit_budget=args.orbit_budget,
        factor_budget=args.factor_budget,
        prime_bound=args.prime_bound,
        seed=args.seed,
        output=args.format,
        dim_N=args.dim_n,
    )


def rationals_of_height(H: int) -> List[Fraction]:
    """All rationals p/q in lowest terms with |p| <= H and 1 <= q <= H.

    Height 0 still contains 0, so the smallest grid is {0} x {0}.
    """
    values = {Fraction(p, q) for q in range(1, max(H, 1) + 1) for p in range(-H, H + 1)}
    return sorted(v for v in values if abs(v.numerator) <= H and v.denominator <= max(H, 1))


def run_survey(c_height: int, alpha_height: int, config: RunConfig) -> dict:
    """Classify every normal-form pair (x^2 + c, alpha) on the height grid."""
    abelian: List[dict] = []
    counts = {"abelian": 0, "nonabelian": 0, "not_applicable": 0}
    rows: List[dict] = []
    for c in rationals_of_height(c_height):
        for alpha in rationals_of_height(alpha_height):
            pair = QuadPair.from_normal(c, alpha)
            verdict = galois.classify_abelian(
                pair,
                prime_bound=config.prime_bound,
                dim_N=config.dim_N,
                budget=config.factor_budget,
                seed=config.seed,
            )
            counts[verdict.status] += 1
            row = {
                "c": str(c),
                "alpha": str(alpha),
                "status": verdict.status,
                "provenance": verdict.provenance,
            }
            rows.append(row)
            if verdict.status == "abelian":
                abelian.append({"c": str(c), "alpha": str(alpha), "tag": verdict.tag})
    return {
        "grid": {"c_height": c_height, "alpha_height": alpha_height},
        "counts": counts,
        "abelian_pairs": abelian,
        "rows": rows,
    }


def _cmd_classify(args) -> int:
    config = _config(args)
    pairs = _parse_pairs(args)
    records = [classify_pair(p, config) for p in pairs]
    _emit(records, config, ("normal_form.c", "normal_form.beta", "abelian.status"))
    if any(r["inconclusive"] for r in records):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_survey(args) -> int:
    config = _config(args)
    result = run_survey(args.c_height, args.alpha_height, config)
    if config.output == "json":
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        for row in result["rows"]:
            print("\t".join([row["c"], row["alpha"], row["status"]]))
        print(
            "summary: abelian=%d nonabelian=%d not_applicable=%d"
            % (
                result["counts"]["abelian"],
                result["counts"]["nonabelian"],
                result["counts"]["not_applicable"],
            )
        )
    return EXIT_OK


def _cmd_orbit(args) -> int:
    config = _config(args)
    pair = QuadPair.parse(args.pair)
    orbit = adjusted_orbit(pair, args.n)
    record = {
        "pair": pair.describe(),
        "raw": [str(v) for v in orbit.raw],
        "adjusted": [str(v) for v in orbit.adjusted],
        "degeneracy_index": orbit.degeneracy_index,
    }
    _emit([record], config, ("pair", "degeneracy_index"))
    return EXIT_OK


def _cmd_pcf(args) -> int:
    config = _config(args)
    records = []
    for text in args.pairs:
        pair = QuadPair.parse(text if "," in text else text + ",0")
        records.append({"input": text, "verdict": _pcf_json(is_pcf(pair))})
    _emit(records, config, ("input", "verdict.kind"))
    return EXIT_OK


def _cmd_contain(args) -> int:
    config = _config(args)
    pair = QuadPair.parse(args.pair)
    vector = indexsets.IndexVector.parse(args.vector)
    try:
        result = galois.contained_in_Mv(pair, vector, config.orbit_budget)
    except DegeneracyError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return EXIT_INCONCLUSIVE
    record = {
        "pair": pair.describe(),
        "vector": list(vector.support),
        "contained": result,
        "provenance": "square-product-containment",
    }
    _emit([record], config, ("pair", "contained"))
    return EXIT_OK


def _cmd_abdim(args) -> int:
    config = _config(args)
    pair = QuadPair.parse(args.pair)
    try:
        dim = galois.ab_dimension(pair, args.n, config.factor_budget, config.seed)
    except DegeneracyError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return EXIT_INCONCLUSIVE
    record = {"pair": pair.describe(), "N": args.n, "dimension": dim}
    try:
        orbit = adjusted_orbit(pair, args.n)
        record["classes"] = [
            square_class(v, config.factor_budget, config.seed).to_vector().to_json()
            for v in orbit.adjusted
        ]
    except BudgetExceeded:
        record["classes"] = None  # dimension came from the gcd-free route
    _emit([record], config, ("pair", "dimension"))
    return EXIT_OK


def _cmd_group2(args) -> int:
    config = _config(args)
    pair = QuadPair.parse(args.pair)
    try:
        data = galois.level2_data(pair, config.factor_budget, config.seed)
    except DegeneracyError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return EXIT_INCONCLUSIVE
    record = {
        "pair": pair.describe(),
        "group": data.group.value,
        "case": data.case,
        "c1": str(data.c1),
        "c2": str(data.c2),
    }
    if args.frobenius:
        primes = galois.good_primes(pair, 2, args.frobenius)
        report = galois.frobenius_sample(pair, 2, primes)
        record["frobenius"] = {
            "primes": len(report.primes),
            "partitions": {
                "+".join(map(str, part)): count
                for part, count in sorted(report.partitions.items())
            },
            "compatible": sorted(g.value for g in report.compatible or ()),
        }
    _emit([record], config, ("pair", "group"))
    return EXIT_OK


def _cmd_valuations(args) -> int:
    config = _config(args)
    try:
        report = orbit_valuations(parse_rational(args.c), args.p, args.n)
    except DegeneracyError as exc:
        print(json.dumps({"error": str(exc)}, sort_keys=True))
        return EXIT_INCONCLUSIVE
    record = {
        "c": str(report.c),
        "p": report.p,
        "values": list(report.values),
        "pattern": report.pattern,
        "n0": report.n0,
        "conformant": report.conformant,
        "mismatches": list(report.mismatches),
    }
    _emit([record], config, ("c", "p", "pattern", "conformant"))
    return EXIT_OK


def _cmd_poonen(args) -> int:
    config = _config(args)
    result = galois.poonen_check(parse_rational(args.c), parse_rational(args.alpha), args.p)
    record = {
        "c": args.c,
        "alpha": args.alpha,
        "p": args.p,
        "infinitely_ramified": result.infinitely_ramified,
        "condition": result.condition,
        "details": result.details,
        "provenance": "odd-place-ramification-test",
    }
    _emit([record], config, ("p", "infinitely_ramified", "condition"))
    return EXIT_OK if result.infinitely_ramified else EXIT_INCONCLUSIVE


def _parse_family(text: Optional[str], path: Optional[str]) -> indexsets.IndexFamily:
    vectors: List[indexsets.IndexVector] = []
    if text:
        for part in text.split(";"):
            part = part.strip()
            if part:
                vectors.append(indexsets.IndexVector.parse(part))
    if path:
        with open(path) as fh:
            content = fh.read().strip()
        if content.startswith("["):
            # JSON array: entries are arrays of indices or "{...}" strings
            for entry in json.loads(content):
                if isinstance(entry, str):
                    vectors.append(indexsets.IndexVector.parse(entry))
                else:
                    vectors.append(indexsets.IndexVector(entry))
        else:
            for line in content.splitlines():
                line = line.strip()
                if line:
                    vectors.append(indexsets.IndexVector.parse(line))
    if not vectors:
        raise ValueError("no index vectors given")
    return indexsets.IndexFamily(vectors)


def _cmd_indexset(args) -> int:
    config = _config(args)
    family = _parse_family(args.family, args.family_file)
    records = []
    code = EXIT_OK
    if args.progression:
        k, length = (int(t) for t in args.progression.split(","))
        targets = [indexsets.IndexVector.parse(t) for t in args.span or []]
        report = indexsets.progressing_witness(family, k, length, targets)
        records.append(
            {
                "check": "progressing",
                "k": k,
                "length": length,
                "ok": report.ok,
                "offenders": list(report.offenders),
                "span": [
                    {"in_span": inside, "certificate": list(cert) if cert is not None else None, "progression": prog}
                    for inside, cert, prog in report.span_results
                ],
            }
        )
    if args.coprime is not None:
        report = indexsets.m_coprime_witness(family, args.coprime)
        records.append(
            {
                "check": "m-coprime",
                "M": args.coprime,
                "ok": report.ok,
                "witnesses": list(report.witnesses),
                "max_witness_sequence": list(report.max_witness_sequence),
                "unbounded_evidence": report.unbounded_evidence,
                "failures": list(report.failures),
            }
        )
    if not records:
        raise ValueError("choose --progression k,l and/or --coprime M")
    _emit(records, config, ("check", "ok"))
    return code


def _cmd_bertrand(args) -> int:
    config = _config(args)
    if args.upto:
        terms = list(range(1, args.upto + 1))
    elif args.terms:
        terms = [int(t) for t in args.terms.split(",")]
    else:
        raise ValueError("give --terms or --upto")
    built = indexsets.bertrand_family(terms)
    record = {
        "terms": len(terms),
        "witnesses": list(built.witnesses) if len(terms) <= 200 else None,
        "max_witness": max(built.witnesses),
        "postulate_margin_ok": all(
            2 * w > t for t, w in zip(terms, built.witnesses) if t >= 2
        ),
    }
    if args.check_coprime:
        report = indexsets.m_coprime_witness(built.family, 0)
        record["coprime_ok"] = report.ok
        record["witnesses_match"] = tuple(report.witnesses) == built.witnesses
        record["unbounded_evidence"] = report.unbounded_evidence
    _emit([record], config, ("terms", "max_witness"))
    return EXIT_OK


def _cmd_tree_verify(args) -> int:
    config = _config(args)
    counterexamples, scanned = treegroup.verify_noncommutation(
        args.depth, sample=args.sample, seed=config.seed
    )
    record = {
        "depth": args.depth,
        "pairs_scanned": scanned,
        "mode": "exhaustive" if args.depth <= 3 and args.sample is None else "sampled",
        "counterexamples": [
            {"sigma": str(s), "tau": str(t)} for s, t in counterexamples
        ],
    }
    if config.output == "table":
        if counterexamples:
            print("counterexamples found: %d" % len(counterexamples))
        else:
            print("no counterexamples (%d pairs)" % scanned)
    else:
        print(json.dumps([record], indent=2, sort_keys=True))
    return EXIT_OK if not counterexamples else EXIT_INCONCLUSIVE


def _cmd_curve(args) -> int:
    config = _config(args)
    pair = QuadPair.parse(args.pair)
    record: dict = {"pair": pair.describe()}
    curve = None
    if args.vector:
        vector = indexsets.IndexVector.parse(args.vector)
        point = curves_mod.construct_point(pair, vector, args.i0, args.k)
        if point is None:
            record["constructed_point"] = None
        else:
            curve = point.curve
            record["constructed_point"] = {"x": str(point.x), "y": str(point.y)}
    if curve is None:
        curve = curves_mod.CurveSpec(pair, args.k or 1, args.l, args.i0)
    record["curve"] = curve.describe()
    record["genus"] = curve.genus
    record["genus_at_least_2"] = curve.genus >= 2
    record["smooth"] = curves_mod.is_smooth(curve)
    if args.x is not None:
        record["rhs_at_x"] = str(curves_mod.rhs_eval(curve, parse_rational(args.x)))
    if args.search is not None:
        points = curves_mod.naive_point_search(curve, args.search)
        record["points"] = [[str(x), str(y)] for x, y in points]
        record["search_height"] = args.search
    _emit([record], config, ("pair", "genus", "smooth"))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arboreal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def env_default(name: str, fallback: int) -> int:
        return int(os.environ.get(name, fallback))

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--orbit-budget", type=int, default=env_default("ARBOREAL_ORBIT_BUDGET", 24))
        p.add_argument(
            "--factor-budget", type=int, default=env_default("ARBOREAL_FACTOR_BUDGET", DEFAULT_BUDGET)
        )
        p.add_argument("--prime-bound", type=int, default=env_default("ARBOREAL_PRIME_BOUND", 100))
        p.add_argument("--seed", type=int, default=env_default("ARBOREAL_SEED", 0))
        p.add_argument("--dim-n", type=int, default=env_default("ARBOREAL_DIM_N", 12))
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("classify", help="full classification records")
    p.add_argument("pairs", nargs="*", help="pairs as 'a,b,alpha' or 'c,alpha'")
    p.add_argument("--csv", help="CSV file of pairs")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("survey", help="abelian survey over a height grid")
    p.add_argument("--c-height", type=int, required=True)
    p.add_argument("--alpha-height", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("orbit", help="adjusted post-critical orbit")
    p.add_argument("pair")
    p.add_argument("-N", "--n", type=int, default=10)
    common(p)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("pcf", help="post-critical finiteness verdicts")
    p.add_argument("pairs", nargs="+", help="pairs, or bare c values")
    common(p)
    p.set_defaults(func=_cmd_pcf)

    p = sub.add_parser("contain", help="containment in a maximal subgroup")
    p.add_argument("pair")
    p.add_argument("vector", help="index vector like '{1,2}'")
    common(p)
    p.set_defaults(func=_cmd_contain)

    p = sub.add_parser("abdim", help="orbit span dimension modulo squares")
    p.add_argument("pair")
    p.add_argument("-N", "--n", type=int, default=12)
    common(p)
    p.set_defaults(func=_cmd_abdim)

    p = sub.add_parser("group2", help="exact level-2 Galois group")
    p.add_argument("pair")
    p.add_argument("--frobenius", type=int, default=0, help="cross-validate over N good primes")
    common(p)
    p.set_defaults(func=_cmd_group2)

    p = sub.add_parser("valuations", help="orbit valuations and divisibility pattern")
    p.add_argument("-c", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-N", "--n", type=int, default=12)
    common(p)
    p.set_defaults(func=_cmd_valuations)

    p = sub.add_parser("poonen", help="odd-place infinite-ramification test")
    p.add_argument("-c", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("-p", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_poonen)

    p = sub.add_parser("indexset", help="progression / coprimality checks")
    p.add_argument("--family", help="semicolon-separated vectors '{1,2};{2,3}'")
    p.add_argument("--family-file", help="file with one vector per line")
    p.add_argument("--progression", help="'k,l'")
    p.add_argument("--span", action="append", help="span target (repeatable)")
    p.add_argument("--coprime", type=int, help="threshold M")
    common(p)
    p.set_defaults(func=_cmd_indexset)

    p = sub.add_parser("bertrand", help="prefix family with prime witnesses")
    p.add_argument("--terms", help="comma-separated strictly increasing a_n")
    p.add_argument("--upto", type=int, help="use a_n = n for n <= UPTO")
    p.add_argument("--check-coprime", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_bertrand)

    p = sub.add_parser("tree-verify", help="non-commutation search in the tree group")
    p.add_argument("depth", type=int)
    p.add_argument("--sample", type=int, default=None)
    common(p)
    p.set_defaults(func=_cmd_tree_verify)

    p = sub.add_parser("curve", help="orbit curves: points and search")
    p.add_argument("pair")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--i0", type=int, default=1)
    p.add_argument("--x", help="evaluate the right-hand side at x")
    p.add_argument("--vector", help="progression support like '{2,3}'")
    p.add_argument("--search", type=int, help="naive point search height")
    common(p)
    p.set_defaults(func=_cmd_curve)

    return parser


_NUMERIC_TOKEN = re.compile(r"^-\d[-\d,/]*$")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    # keep argparse from reading "-2,1" or "-5/2" as option switches
    argv = [(" " + a) if _NUMERIC_TOKEN.match(a) else a for a in argv]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"arboreal: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, CapExceeded, DegeneracyError) as exc:
        print(f"arboreal: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    raise SystemExit(main())
