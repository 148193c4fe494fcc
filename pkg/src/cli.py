import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.clients.rigidity_client import RigidityClient
from src.clients.verification_client import VerificationClient
from src.utils.constants import (DEFAULT_STEP_SIZE, DEFAULT_TRIALS, EXIT_DISAGREEMENT, EXIT_INPUT_ERROR, EXIT_OK,
                                 EXIT_PROPERTY_FALSE, SCHEMA_VERSION)
from src.utils.exceptions import (InvalidInput, NoNontrivialFlex, NotLaman, NotLamanPlusOne, NotType2Maximal,
                                  RigidityToolkitError)
from src.utils.flex_utils import flex_path_to_frame, noncongruence_witness, trace_flex
from src.utils.graph_io import read_graph_file
from src.utils.graph_utils import relabel
from src.utils.moves_utils import (derive_laman_labeled, derive_laman_plus_one_labeled, derive_type2_labeled,
                                   replay, sequence_to_dict)
from src.utils.rigidity_utils import analyze, framework_from_dict, matrix_to_csv, relative_rigidity_matrix
from src.utils.sparsity_utils import (check_point_line, check_point_plane, check_tight_3_6, check_type,
                                      is_laman_plus_one)
from src.utils.visualizations import flex_path_frame_at, plot_flex_path, plot_framework, plot_verification_summary

logger = logging.getLogger(__name__)

CHECK_TYPES = ["laman", "type2", "laman-plus-one", "tight36", "point-line", "point-plane"]
DERIVE_CLASSES = {
    "laman": derive_laman_labeled,
    "laman-plus-one": derive_laman_plus_one_labeled,
    "type2": derive_type2_labeled,
}
THEOREMS = ["planes", "spheres", "cylinder", "concentric-cylinders", "cone", "point-line", "trees", "laman-trees"]


def _emit(payload: Dict[str, Any]):
    print(json.dumps({"schema": SCHEMA_VERSION, **payload}, sort_keys=True))


def _split(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


def _read_framework(path: str):
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"Could not load framework {path} - Error: {exc}")
    return framework_from_dict(data)


def cmd_check(args) -> int:
    G = read_graph_file(args.input)
    apex = G.vertex_count - 1 if args.apex is None else args.apex
    if args.type in ("laman", "type2"):
        verdict = check_type(G, 3 if args.type == "laman" else 2)
        _emit({"type": args.type, **verdict.to_dict()})
        return EXIT_OK if verdict.maximal else EXIT_PROPERTY_FALSE
    if args.type == "laman-plus-one":
        extra = is_laman_plus_one(G)
        holds = extra is not None
        _emit({"type": args.type, "holds": holds, "extra_edge": list(extra) if holds else None})
    elif args.type == "tight36":
        holds = check_tight_3_6(G)
        _emit({"type": args.type, "holds": holds})
    elif args.type == "point-line":
        holds = check_point_line(G, apex)
        _emit({"type": args.type, "holds": holds, "line_vertex": apex})
    else:
        holds = check_point_plane(G, apex)
        _emit({"type": args.type, "holds": holds, "plane_vertex": apex})
    return EXIT_OK if holds else EXIT_PROPERTY_FALSE


def cmd_derive(args) -> int:
    G = read_graph_file(args.input)
    try:
        seq, labels = DERIVE_CLASSES[args.graph_class](G)
    except (NotLaman, NotLamanPlusOne, NotType2Maximal) as exc:
        logger.warning(str(exc))
        _emit({"class": args.graph_class, "derivation": None, "error": str(exc)})
        return EXIT_PROPERTY_FALSE
    if relabel(replay(seq), dict(enumerate(labels))) != G:
        raise RigidityToolkitError(f"Derivation for {G} does not replay to the input")
    _emit({"class": args.graph_class, "derivation": sequence_to_dict(seq), "labels": labels})
    return EXIT_OK


def cmd_rank(args) -> int:
    if args.framework:
        F = _read_framework(args.framework)
        report = analyze(F)
    else:
        if not args.input or not args.surface:
            raise InvalidInput("rank needs --framework, or --in together with --surface")
        G = read_graph_file(args.input)
        client = RigidityClient(args.surface, _split(args.params), args.trials, args.seed, args.verbose)
        assignment = [int(s) for s in _split(args.assignment)] if args.assignment else None
        report = client.analyze_graph(G, assignment)
        # the sample that decided the verdict
        F = report.framework
    if args.matrix_csv:
        Path(args.matrix_csv).write_text(matrix_to_csv(relative_rigidity_matrix(F)))
    _emit({"report": report.to_dict()})
    return EXIT_OK


def cmd_verify(args) -> int:
    client = VerificationClient(args.max_n, args.seed, args.trials, args.threads, args.verbose)
    results_df = client.run(args.theorem, args.graphs)
    summary = client.summarize(args.theorem, results_df)
    if args.csv:
        results_df.to_csv(args.csv, index=False)
    if args.plot and not results_df.empty:
        plot_verification_summary(results_df).write_html(args.plot)
    _emit(summary.to_dict())
    return EXIT_OK if not summary.disagreements else EXIT_DISAGREEMENT


def cmd_flex(args) -> int:
    F = _read_framework(args.framework)
    try:
        path = trace_flex(F, args.steps, args.step_size, args.seed)
    except NoNontrivialFlex as exc:
        logger.warning(str(exc))
        return EXIT_PROPERTY_FALSE
    flex_df = flex_path_to_frame(path)
    csv_text = flex_df.to_csv(index=False)
    if args.out:
        Path(args.out).write_text(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        plot_flex_path(flex_df).write_html(args.plot)
    if args.snapshot:
        last = flex_path_frame_at(flex_df, len(path.samples) - 1)
        plot_framework(last, F.graph.edges).write_html(args.snapshot)
    witness = noncongruence_witness(path, F)
    if witness is not None:
        logger.info(f"Non-edge pair {witness[0]} moves by {witness[1]:.3e}")
    if args.json:
        payload = {"schema": SCHEMA_VERSION, **path.to_dict(),
                   "witness": {"pair": list(witness[0]), "delta": witness[1]} if witness is not None else None}
        Path(args.json).write_text(json.dumps(payload))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surface-rigidity",
                                     description="Rigidity of frameworks on planes, spheres and cylinders")
    parser.add_argument("--verbose", action="store_true", help="log progress at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="combinatorial counts")
    check.add_argument("--type", required=True, choices=CHECK_TYPES)
    check.add_argument("--in", dest="input", required=True, help="graph6 or JSON graph file")
    check.add_argument("--apex", type=int, default=None, help="line or plane vertex (default: last vertex)")
    check.set_defaults(handler=cmd_check)

    derive = sub.add_parser("derive", help="Henneberg derivation certificate")
    derive.add_argument("--class", dest="graph_class", required=True, choices=sorted(DERIVE_CLASSES))
    derive.add_argument("--in", dest="input", required=True)
    derive.set_defaults(handler=cmd_derive)

    rank = sub.add_parser("rank", help="relative rigidity matrix rank")
    rank.add_argument("--surface", choices=["planes", "spheres", "cylinders"])
    rank.add_argument("--params", help="comma separated rationals, e.g. 1,3/2")
    rank.add_argument("--assignment", help="comma separated sheet indices, one per vertex")
    rank.add_argument("--in", dest="input")
    rank.add_argument("--framework", help="framework JSON with explicit points")
    rank.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    rank.add_argument("--seed", type=int, default=0)
    rank.add_argument("--matrix-csv", dest="matrix_csv", help="write the exact matrix as CSV")
    rank.set_defaults(handler=cmd_rank)

    verify = sub.add_parser("verify", help="compare combinatorial and numerical verdicts exhaustively")
    verify.add_argument("--theorem", required=True, choices=THEOREMS)
    verify.add_argument("--max-n", dest="max_n", type=int, default=7)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    verify.add_argument("--threads", type=int, default=None)
    verify.add_argument("--graphs", help="graph6 stream to use instead of the built-in enumeration")
    verify.add_argument("--csv", help="write per-graph results as CSV")
    verify.add_argument("--plot", help="write an HTML summary chart")
    verify.set_defaults(handler=cmd_verify)

    flex = sub.add_parser("flex", help="trace a continuous flex")
    flex.add_argument("--framework", required=True)
    flex.add_argument("--steps", type=int, default=200)
    flex.add_argument("--step-size", dest="step_size", type=float, default=DEFAULT_STEP_SIZE)
    flex.add_argument("--seed", type=int, default=1, help="sign picks the direction of travel")
    flex.add_argument("--out", help="CSV output file (default: stdout)")
    flex.add_argument("--plot", help="write an HTML trajectory chart")
    flex.add_argument("--snapshot", help="write an HTML chart of the last pose")
    flex.add_argument("--json", help="write the path and its witness as JSON")
    flex.set_defaults(handler=cmd_flex)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    logging.getLogger().setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.handler(args)
    except ValueError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except RigidityToolkitError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_PROPERTY_FALSE


if __name__ == "__main__":
    sys.exit(main())
