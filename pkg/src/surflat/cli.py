"""Command line interface: deterministic JSON reports over scene files.

Every command prints a single JSON document with stable key order and
rationals rendered as normalized strings, so identical inputs produce
identical bytes.  Exit codes: 0 success, 2 input or format error, 3
verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .birational import (
    chain_log_discrepancy,
    chain_names,
    chain_order,
    pull_back_combination,
)
from .dualgraph import DualGraph, classify, enumerate_and_verify
from .errors import SceneFormatError, SurflatError
from .lattice import DivisorClass
from .pairs import (
    PairModel,
    check_mmp_redundant_factorization,
    is_redundant_point,
    pklt_certificate,
    potential_log_discrepancy,
    redundant_blow_up,
    run_anticanonical_mmp,
)
from .scene import BUILTIN_SCENES, load_bundle
from .zariski import ZariskiDecomp, sigma, zariski_decompose

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3


def _vec(cls: DivisorClass) -> list[str]:
    return [str(v) for v in cls.coords]


def _coeffs(mapping: Mapping[str, Fraction]) -> dict[str, str]:
    return {name: str(value) for name, value in sorted(mapping.items())}


def _decomposition_report(decomposition: ZariskiDecomp) -> dict:
    certificate = decomposition.certificate
    names = [decomposition.model.curves[i].name for i in certificate.curve_indices]
    return {
        "positive": _vec(decomposition.positive),
        "negative": _coeffs(decomposition.negative_coeffs),
        "negative_class": _vec(decomposition.negative_class),
        "is_nef": decomposition.is_nef_trivial(),
        "nef_scope": decomposition.nef_scope,
        "certificate": {
            "support": names,
            "leading_minors": [str(m) for m in certificate.minors],
            "negative_definite": certificate.valid,
        },
    }


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")


def _parse_terms(text: str, flag: str) -> list[tuple[str, str | None]]:
    terms = []
    for raw in text.split(","):
        part = raw.strip()
        if not part:
            raise SceneFormatError(flag, f"empty term in {text!r}")
        name, sep, value = part.partition(":")
        name = name.strip()
        if not name:
            raise SceneFormatError(flag, f"missing curve name in term {part!r}")
        terms.append((name, value.strip() if sep else None))
    return terms


def parse_combination(text: str, flag: str = "--divisor") -> dict[str, Fraction]:
    """Parse "C:1/2,E" into rational coefficients (default 1)."""
    out: dict[str, Fraction] = {}
    for name, value in _parse_terms(text, flag):
        if name in out:
            raise SceneFormatError(flag, f"duplicate curve {name!r}")
        try:
            out[name] = Fraction(value) if value is not None else Fraction(1)
        except (ValueError, ZeroDivisionError):
            raise SceneFormatError(flag, f"invalid coefficient {value!r}") from None
    return out


def parse_point(text: str, flag: str = "--point") -> dict[str, int]:
    """Parse "C:2,E" into integer multiplicities (default 1)."""
    out: dict[str, int] = {}
    for name, value in _parse_terms(text, flag):
        if name in out:
            raise SceneFormatError(flag, f"duplicate curve {name!r}")
        if value is None:
            out[name] = 1
            continue
        try:
            mult = int(value)
        except ValueError:
            raise SceneFormatError(flag, f"invalid multiplicity {value!r}") from None
        if mult < 1:
            raise SceneFormatError(flag, f"multiplicity must be >= 1, got {mult}")
        out[name] = mult
    return out


def parse_chain(text: str, flag: str = "--chain") -> list[dict[str, int]]:
    """Parse "C:1,E:1;C,E,X1" into a chain of point specs; exceptionals of
    earlier steps are named X1, X2, ... in order."""
    points = []
    for raw in text.split(";"):
        if not raw.strip():
            raise SceneFormatError(flag, f"empty point in {text!r}")
        points.append(parse_point(raw, flag))
    return points


def parse_weights(text: str, flag: str = "--chain") -> list[int]:
    weights = []
    for raw in text.split(","):
        part = raw.strip()
        try:
            weights.append(int(part))
        except ValueError:
            raise SceneFormatError(flag, f"invalid weight {part!r}") from None
    if not weights:
        raise SceneFormatError(flag, "expected at least one weight")
    return weights


def _graph_from_file(path: str) -> DualGraph:
    """Read {"weights": [...], "edges": [[i,j],...], "names": [...]} (indices
    0-based; names optional)."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as err:
        raise SceneFormatError(path, str(err)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SceneFormatError(f"{path}: line {err.lineno}", err.msg) from None
    if not isinstance(data, dict):
        raise SceneFormatError(path, "expected a JSON object")
    unknown = set(data) - {"weights", "edges", "names"}
    if unknown:
        raise SceneFormatError(path, f"unknown field(s): {', '.join(sorted(unknown))}")
    if "weights" not in data:
        raise SceneFormatError(path, "missing required field: weights")
    weights = data["weights"]
    edges = data.get("edges", [])
    names = data.get("names", ())
    if not isinstance(weights, list) or not all(
        isinstance(w, int) and not isinstance(w, bool) for w in weights
    ):
        raise SceneFormatError(f"{path}: weights", "expected an array of integers")
    if not isinstance(edges, list) or not all(
        isinstance(e, list)
        and len(e) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in e)
        for e in edges
    ):
        raise SceneFormatError(f"{path}: edges", "expected an array of [i, j] pairs")
    if not isinstance(names, (list, tuple)) or not all(isinstance(n, str) for n in names):
        raise SceneFormatError(f"{path}: names", "expected an array of strings")
    return DualGraph(tuple(weights), tuple((a, b) for a, b in edges), tuple(names))


# --- subcommands -------------------------------------------------------------


def cmd_zariski(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.scene)
    surface = bundle.surface
    if args.divisor is not None:
        combination = parse_combination(args.divisor)
        divisor_class = surface.class_of_combination(combination)
        decomposition = zariski_decompose(surface, divisor_class)
        divisor_report: dict = {"combination": _coeffs(combination)}
    else:
        divisor_class = bundle.pair.anti_log_canonical_class()
        decomposition = bundle.pair.decomposition()
        divisor_report = {"combination": None}
    divisor_report["class"] = _vec(divisor_class)
    _emit(
        {
            "command": "zariski",
            "scene": args.scene,
            "divisor": divisor_report,
            "decomposition": _decomposition_report(decomposition),
        }
    )
    return EXIT_OK


def cmd_mmp(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.scene)
    trace = run_anticanonical_mmp(bundle.pair)
    certificate = pklt_certificate(bundle.pair)
    factorization = check_mmp_redundant_factorization(trace)
    _emit(
        {
            "command": "mmp",
            "scene": args.scene,
            "steps": [
                {
                    "index": step.index,
                    "curve": step.curve,
                    "self_intersection": str(step.self_intersection),
                    "anti_degree": str(step.anti_degree),
                    "boundary_coefficient": str(step.boundary_coefficient),
                    "discrepancy": str(step.discrepancy),
                    "was_smooth": step.was_smooth,
                }
                for step in trace.steps
            ],
            "contracted": list(trace.contracted),
            "final_rank": trace.final_pair.surface.lattice.rank,
            "final_model_nef": trace.final_model_nef,
            "final_klt": trace.final_klt,
            "total_discrepancies": _coeffs(trace.total_discrepancies),
            "pklt": {
                "certified": certificate.certified,
                "witness_contracted": list(certificate.witness.contracted),
                "max_coefficient": (
                    None
                    if certificate.max_coefficient is None
                    else str(certificate.max_coefficient)
                ),
            },
            "factorization": {
                "ok": factorization.ok,
                "steps": [
                    {"curve": step.curve, "kind": step.kind, "verified": step.verified}
                    for step in factorization.steps
                ],
            },
        }
    )
    return EXIT_OK


def cmd_redundant(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.scene)
    point = parse_point(args.point)
    verdict = is_redundant_point(bundle.pair, point)
    report = {
        "command": "redundant",
        "scene": args.scene,
        "point": {name: mult for name, mult in sorted(point.items())},
        "redundant": bool(verdict),
        "mult_negative": str(verdict.mult_negative),
        "mult_boundary": str(verdict.mult_boundary),
        "total": str(verdict.total),
    }
    if verdict:
        new_pair, transported = redundant_blow_up(bundle.pair, point)
        recomputed = new_pair.decomposition()
        report["transport"] = {
            "exceptional": new_pair.surface.curves[-1].name,
            "decomposition": _decomposition_report(transported),
            "matches_recompute": (
                transported.positive == recomputed.positive
                and transported.negative_coeffs == recomputed.negative_coeffs
            ),
        }
    _emit(report)
    return EXIT_OK


def cmd_discrepancy(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.scene)
    surface = bundle.surface
    chain = parse_chain(args.chain)
    boundary = dict(bundle.pair.boundary) if args.boundary else {}
    names = chain_names(surface, len(chain))
    log_disc = chain_log_discrepancy(surface, chain, boundary=boundary, names=names)
    target = bundle.pair if args.boundary else PairModel(surface, {})
    order = sigma(surface, target.anti_log_canonical_class(), chain, names=names)
    _emit(
        {
            "command": "discrepancy",
            "scene": args.scene,
            "chain": [
                {name: mult for name, mult in sorted(point.items())} for point in chain
            ],
            "exceptional_names": names,
            "boundary_used": _coeffs(boundary),
            "log_discrepancy": str(log_disc),
            "sigma": str(order),
            "potential_log_discrepancy": str(log_disc - order),
        }
    )
    return EXIT_OK


def cmd_classify_graph(args: argparse.Namespace) -> int:
    if args.chain is not None:
        graph = DualGraph.chain(parse_weights(args.chain))
    else:
        graph = _graph_from_file(args.graph)
    verdict = classify(graph)
    _emit(
        {
            "command": "classify-graph",
            "vertices": [
                {"name": name, "weight": weight}
                for name, weight in zip(graph.names, graph.weights)
            ],
            "edges": [[a, b] for a, b in graph.edges],
            "b": _coeffs(verdict.b),
            "klt": verdict.klt,
            "canonical": verdict.canonical,
            "redundant_free": verdict.redundant_free,
            "matched_family": verdict.matched_family,
        }
    )
    return EXIT_OK


def cmd_verify_theorem(args: argparse.Namespace) -> int:
    report = enumerate_and_verify(args.max_vertices, args.min_weight)
    free = sorted(report.redundant_free, key=lambda r: (len(r.weights), r.describe()))
    _emit(
        {
            "command": "verify-theorem-1.4",
            "max_vertices": report.max_vertices,
            "min_weight": report.min_weight,
            "counts": {
                "considered": report.considered,
                "canonical": len(report.canonical),
                "redundant_free_noncanonical": len(free),
                "redundant_found": len(report.redundant_found),
            },
            "redundant_free_noncanonical": [
                {
                    "graph": record.describe(),
                    "family": record.verdict.matched_family,
                    "b": _coeffs(record.verdict.b),
                }
                for record in free
            ],
            "missing_families": list(report.missing),
            "unexpected": list(report.unexpected),
            "monotonicity_failures": len(report.monotonicity_failures),
            "match": report.match,
        }
    )
    return EXIT_OK if report.match else EXIT_VERIFY


# --- example verification -----------------------------------------------------

Check = dict


def _check(checks: list[Check], label: str, actual: object, expected: object) -> None:
    checks.append(
        {
            "label": label,
            "expected": str(expected),
            "actual": str(actual),
            "ok": actual == expected,
        }
    )


def _verify_43(checks: list[Check]) -> None:
    bundle = load_bundle("example-4.3")
    surface, pair = bundle.surface, bundle.pair
    anti = pair.anti_log_canonical_class()
    _check(checks, "C.C = -4", surface.curve_pair("C", "C"), Fraction(-4))
    _check(checks, "C.E = 2", surface.curve_pair("C", "E"), Fraction(2))
    _check(checks, "E.E = -1", surface.curve_pair("E", "E"), Fraction(-1))
    _check(
        checks,
        "(-K).C = (C+E).C = -2",
        surface.pair(anti, surface.curve_class("C")),
        Fraction(-2),
    )
    _check(
        checks,
        "-K = C + E as classes",
        surface.class_of_combination({"C": 1, "E": 1}),
        anti,
    )
    _check(
        checks,
        "pullback of the base fiber is C + 2E",
        pull_back_combination(bundle.base, {"C": 1}, {"C": 2}, "E"),
        {"C": Fraction(1), "E": Fraction(2)},
    )
    decomposition = pair.decomposition()
    _check(
        checks, "negative part N = (1/2)C", decomposition.negative_coeffs,
        {"C": Fraction(1, 2)},
    )
    _check(
        checks,
        "positive part P = (1/2)C + E",
        decomposition.positive,
        surface.class_of_combination({"C": Fraction(1, 2), "E": 1}),
    )
    _check(checks, "sigma_C(-K) = 1/2", sigma(surface, anti, "C"), Fraction(1, 2))

    contraction = surface.contract(["C"])
    _check(
        checks, "contraction discrepancy a(C) = -1/2",
        contraction.discrepancies, {"C": Fraction(-1, 2)},
    )
    _check(checks, "contracted model is klt", contraction.is_klt, True)

    trace = run_anticanonical_mmp(pair)
    _check(checks, "MMP has exactly one step", len(trace.steps), 1)
    _check(checks, "MMP contracts C", trace.contracted, ("C",))
    _check(checks, "MMP step discrepancy = -1/2", trace.steps[0].discrepancy, Fraction(-1, 2))
    _check(checks, "final model klt", trace.final_klt, True)

    chain = [{"C": 1, "E": 1}, {"C": 1, "E": 1, "X1": 1}]
    _check(checks, "A_X(F) = 3", chain_log_discrepancy(surface, chain), Fraction(3))
    _check(
        checks, "ord_F(C + E) = 4",
        chain_order(surface, {"C": 1, "E": 1}, chain), Fraction(4),
    )
    _check(
        checks,
        "A_{X, C+E}(F) = -1",
        chain_log_discrepancy(surface, chain, boundary={"C": 1, "E": 1}),
        Fraction(-1),
    )
    _check(checks, "sigma_F(-K) = 1", sigma(surface, anti, chain), Fraction(1))
    _check(
        checks, "abar(F) = 2",
        potential_log_discrepancy(pair, chain), Fraction(2),
    )

    certificate = pklt_certificate(pair)
    _check(checks, "pklt certified", certificate.certified, True)
    _check(checks, "max N-coefficient = 1/2", certificate.max_coefficient, Fraction(1, 2))
    _check(
        checks, "factorization check passes",
        check_mmp_redundant_factorization(trace).ok, True,
    )

    base_pair = PairModel(bundle.base, {"C": 1})
    verdict = is_redundant_point(base_pair, {"C": 2})
    _check(
        checks,
        "double point of the fiber is redundant for (S, C)",
        verdict.total,
        Fraction(2),
    )
    new_pair, transported = redundant_blow_up(base_pair, {"C": 2})
    recomputed = new_pair.decomposition()
    _check(
        checks,
        "transported negative part is the exceptional",
        transported.negative_coeffs,
        {new_pair.surface.curves[-1].name: Fraction(1)},
    )
    _check(
        checks,
        "transported decomposition matches recomputation",
        (transported.positive, transported.negative_coeffs),
        (recomputed.positive, recomputed.negative_coeffs),
    )


def _verify_42(checks: list[Check]) -> None:
    bundle = load_bundle("example-4.2")
    surface, pair, base = bundle.surface, bundle.pair, bundle.base
    marks = {"C1": 1, "C2": 2, "C3": 3, "C4": 4, "C5": 5, "C6": 6, "C7": 4, "C8": 3, "C9": 2}
    anti = pair.anti_log_canonical_class()

    pulled = pull_back_combination(base, marks, {"C5": 1, "C6": 1}, "E")
    _check(checks, "E-coefficient of the pulled-back fiber c = 11", pulled["E"], Fraction(11))
    _check(checks, "(-K).C5' = -1", surface.pair(anti, surface.curve_class("C5")), Fraction(-1))
    _check(checks, "(-K).C6' = -1", surface.pair(anti, surface.curve_class("C6")), Fraction(-1))

    base_pair = PairModel(base, {})
    _check(
        checks, "base -K is nef (empty negative part)",
        base_pair.decomposition().negative_coeffs, {},
    )
    _check(
        checks,
        "blown-up point is not redundant on the base",
        is_redundant_point(base_pair, {"C5": 1, "C6": 1}).total,
        Fraction(0),
    )

    decomposition = pair.decomposition()
    _check(
        checks,
        "N-coefficients are a_i/11",
        decomposition.negative_coeffs,
        {name: Fraction(mark, 11) for name, mark in marks.items()},
    )
    fiber_up = base.class_of_combination(marks).pad(surface.lattice.rank)
    _check(
        checks, "P = (10/11) f*D",
        decomposition.positive, fiber_up.scale(Fraction(10, 11)),
    )

    trace = run_anticanonical_mmp(pair)
    _check(checks, "MMP contracts exactly 9 curves", len(trace.steps), 9)
    _check(
        checks, "MMP contracts the nine fiber components",
        sorted(trace.contracted), sorted(marks),
    )
    _check(checks, "final rank 14 - 9 = 5", trace.final_pair.surface.lattice.rank, 5)
    _check(checks, "final -K model-nef", trace.final_model_nef, True)
    _check(checks, "final model klt", trace.final_klt, True)
    _check(
        checks,
        "total discrepancies are -a_i/11",
        trace.total_discrepancies,
        {name: Fraction(-mark, 11) for name, mark in marks.items()},
    )

    certificate = pklt_certificate(pair)
    _check(checks, "pklt certified", certificate.certified, True)
    _check(checks, "max N-coefficient = 6/11", certificate.max_coefficient, Fraction(6, 11))
    _check(
        checks, "factorization check passes",
        check_mmp_redundant_factorization(trace).ok, True,
    )


def _verify_41(checks: list[Check]) -> None:
    bundle = load_bundle("example-4.1")
    surface, pair = bundle.surface, bundle.pair
    lines = [c.name for c in bundle.base.curves]

    _check(
        checks,
        "each strict transform has self-intersection -3",
        sorted({str(surface.curve_pair(name, name)) for name in lines}),
        ["-3"],
    )
    off_diagonal = {
        surface.curve_pair(a, b) for a in lines for b in lines if a < b
    }
    _check(checks, "distinct strict transforms are disjoint", off_diagonal, {Fraction(0)})
    _check(
        checks,
        "sum of the nine classes is -3K",
        surface.class_of_combination({name: 1 for name in lines}),
        surface.canonical.scale(-3),
    )
    _check(
        checks,
        "the nine classes are negative definite",
        surface.negative_definite_curves(lines)[0],
        True,
    )
    _check(
        checks,
        "negative part N = (1/3) of each line",
        pair.decomposition().negative_coeffs,
        {name: Fraction(1, 3) for name in lines},
    )

    single = surface.contract([lines[0]])
    _check(
        checks, "one (-3)-curve contracts with discrepancy -1/3",
        single.discrepancies, {lines[0]: Fraction(-1, 3)},
    )

    contraction = surface.contract(lines)
    _check(
        checks,
        "nine discrepancies all equal to -1/3",
        contraction.discrepancies,
        {name: Fraction(-1, 3) for name in lines},
    )
    _check(checks, "contracted model is klt", contraction.is_klt, True)
    _check(checks, "quotient rank is 4", contraction.model.lattice.rank, 4)

    anti3 = surface.canonical.scale(-3)
    descended = contraction.push_forward(anti3)
    _check(
        checks,
        "pullback of the descended -3K is the zero class",
        contraction.pull_back(descended),
        DivisorClass.zero(surface.lattice.rank),
    )

    trace = run_anticanonical_mmp(pair)
    _check(checks, "MMP contracts exactly 9 curves", len(trace.steps), 9)
    _check(
        checks,
        "all MMP discrepancies equal -1/3",
        sorted({str(step.discrepancy) for step in trace.steps}),
        ["-1/3"],
    )
    _check(checks, "final model klt", trace.final_klt, True)


_VERIFIERS: dict[str, Callable[[list[Check]], None]] = {
    "4.1": _verify_41,
    "4.2": _verify_42,
    "4.3": _verify_43,
}


def verify_example(key: str) -> list[Check]:
    """Run the reference checks for a built-in example; returns check records."""
    if key not in _VERIFIERS:
        raise SceneFormatError(key, "unknown example (choose 4.1, 4.2, or 4.3)")
    checks: list[Check] = []
    _VERIFIERS[key](checks)
    return checks


def cmd_verify_example(args: argparse.Namespace) -> int:
    checks = verify_example(args.example)
    ok = all(check["ok"] for check in checks)
    _emit(
        {
            "command": "verify-example",
            "example": args.example,
            "checks": checks,
            "passed": sum(1 for check in checks if check["ok"]),
            "failed": sum(1 for check in checks if not check["ok"]),
            "ok": ok,
        }
    )
    return EXIT_OK if ok else EXIT_VERIFY


# --- dispatch ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surflat",
        description=(
            "Exact-arithmetic birational geometry of surfaces via intersection "
            "lattices: Zariski decompositions, discrepancies, redundant points, "
            "anticanonical MMPs, and dual graph classification."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    scene_help = (
        "scene file path or built-in name (" + ", ".join(BUILTIN_SCENES) + ")"
    )

    p = sub.add_parser("zariski", help="Zariski decomposition of -(K + boundary) or a given divisor")
    p.add_argument("scene", help=scene_help)
    p.add_argument(
        "--divisor",
        help='curve combination "C:1/2,E:2" (coefficients default to 1)',
    )
    p.set_defaults(handler=cmd_zariski)

    p = sub.add_parser("mmp", help="run the anticanonical MMP and report the trace")
    p.add_argument("scene", help=scene_help)
    p.set_defaults(handler=cmd_mmp)

    p = sub.add_parser("redundant", help="decide whether a point is redundant")
    p.add_argument("scene", help=scene_help)
    p.add_argument(
        "--point",
        required=True,
        help='point spec "C:2,E:1" (multiplicities default to 1)',
    )
    p.set_defaults(handler=cmd_redundant)

    p = sub.add_parser(
        "discrepancy", help="log discrepancy, asymptotic order, and their gap for a chain"
    )
    p.add_argument("scene", help=scene_help)
    p.add_argument(
        "--chain",
        required=True,
        help='chain of point specs "C:1,E:1;C,E,X1" (steps separated by ";")',
    )
    p.add_argument(
        "--boundary",
        action="store_true",
        help="measure against -(K + boundary) instead of -K",
    )
    p.set_defaults(handler=cmd_discrepancy)

    p = sub.add_parser("classify-graph", help="classify a resolution dual graph")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--chain", help='chain weights "-2,-3,-2"')
    group.add_argument(
        "--graph", help="JSON file with weights, edges (0-based), optional names"
    )
    p.set_defaults(handler=cmd_classify_graph)

    p = sub.add_parser(
        "verify-theorem-1.4",
        help="enumerate klt germ graphs within bounds and compare with the listed families",
    )
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--min-weight", type=int, required=True)
    p.set_defaults(handler=cmd_verify_theorem)

    p = sub.add_parser("verify-example", help="check the reference values of a built-in example")
    p.add_argument("example", choices=sorted(_VERIFIERS))
    p.set_defaults(handler=cmd_verify_example)

    return parser


def _merge_weight_values(argv: list[str]) -> list[str]:
    """Turn `--chain -2,-4` into `--chain=-2,-4` so argparse does not read
    the leading minus sign as an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--chain" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--chain={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_weight_values(list(argv)))
    try:
        return args.handler(args)
    except SceneFormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except SurflatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
