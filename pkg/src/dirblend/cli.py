"""Command-line surface tying the pipeline together.

Subcommands: split, synth, eval, fit, report. Exit codes are a stable
scripting contract: 0 success, 1 validation or parse failure, 2 usage
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io as dio
from .core import ClassCatalog, WeightVector
from .ensemble import (
    SearchConfig,
    evaluate_ensemble,
    run_repeated,
    search_weights,
)
from .errors import DirblendError
from .metrics import summarize
from .split import SplitSpec, stratified_split
from .synth import SynthMemberSpec, gen_member_set


def _add_report_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("structured", "table-text"),
        default="table-text",
        help="report rendering (default: table-text)",
    )
    parser.add_argument(
        "--out", type=Path, default=None, help="write the report here instead of stdout"
    )


def _add_search_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--trials", type=int, default=1000, help="Dirichlet draws to score")
    parser.add_argument("--alpha", type=float, default=1.0, help="symmetric concentration")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    parser.add_argument(
        "--no-vertices",
        action="store_true",
        help="skip scoring the K one-hot weight vectors before sampling",
    )


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        trials=args.trials,
        alpha=args.alpha,
        seed=args.seed,
        include_vertices=not args.no_vertices,
    )


def _config_echo(cfg: SearchConfig, **extra) -> dict:
    echo = {
        "trials": cfg.trials,
        "alpha": cfg.alpha,
        "seed": cfg.seed,
        "include_vertices": cfg.include_vertices,
        "objective": cfg.objective,
    }
    echo.update(extra)
    return echo


def _emit(report: dio.ReportDocument, args: argparse.Namespace) -> None:
    data = dio.emit_report(report, args.format)
    if args.out is None:
        sys.stdout.write(data.decode("utf-8"))
    else:
        args.out.write_bytes(data)


def _member_reports(members, labels_val, labels_test) -> tuple[dio.MemberReport, ...]:
    return tuple(
        dio.MemberReport(
            name=m.name,
            validation=summarize(m.validation, labels_val),
            test=summarize(m.test, labels_test),
        )
        for m in members.members
    )


def cmd_split(args: argparse.Namespace) -> int:
    labels = dio.read_labels(args.labels, args.classes)
    spec = SplitSpec(
        test_fraction=args.test_fraction,
        validation_fraction_of_remainder=args.val_fraction,
        seed=args.seed,
    )
    assignment = stratified_split(labels, spec)
    dio.write_assignment(args.out, assignment)
    n_train, n_val, n_test = assignment.counts()
    print(f"train={n_train} validation={n_val} test={n_test} -> {args.out}")
    return 0


def _parse_member_spec(text: str) -> tuple[str, SynthMemberSpec]:
    parts = text.split(":")
    if not 2 <= len(parts) <= 4 or not parts[0]:
        raise DirblendError(
            f"bad --member {text!r}; expected NAME:ACCURACY[:CONFIDENCE[:GROUP]]"
        )
    try:
        accuracy = float(parts[1])
        confidence = float(parts[2]) if len(parts) > 2 else 0.9
        group = int(parts[3]) if len(parts) > 3 else None
    except ValueError as err:
        raise DirblendError(f"bad --member {text!r}: {err}") from None
    return parts[0], SynthMemberSpec(
        target_accuracy=accuracy,
        confidence=confidence,
        error_correlation_group=group,
    )


def cmd_synth(args: argparse.Namespace) -> int:
    specs = [_parse_member_spec(m) for m in args.member]
    members, labels_val, labels_test = gen_member_set(
        specs,
        n_val=args.val_samples,
        n_test=args.test_samples,
        c=args.classes,
        seed=args.seed,
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dio.write_labels(out / "labels_val.txt", labels_val)
    dio.write_labels(out / "labels_test.txt", labels_test)
    manifest_members = []
    for member in members.members:
        val_rel = f"{member.name}.val.csv"
        test_rel = f"{member.name}.test.csv"
        dio.write_predictions(out / val_rel, member.validation, members.catalog)
        dio.write_predictions(out / test_rel, member.test, members.catalog)
        manifest_members.append(
            dio.ManifestMember(
                name=member.name,
                val_predictions_path=val_rel,
                test_predictions_path=test_rel,
            )
        )
    manifest = dio.Manifest(
        catalog=members.catalog,
        members=tuple(manifest_members),
        val_labels_path="labels_val.txt",
        test_labels_path="labels_test.txt",
    )
    dio.write_manifest(out / "manifest.json", manifest)
    print(f"wrote {len(manifest_members)} members to {out / 'manifest.json'}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    members, labels_val, labels_test = dio.load_manifest(args.manifest)
    report = dio.ReportDocument(
        config={"command": "eval"},
        members=_member_reports(members, labels_val, labels_test),
    )
    _emit(report, args)
    return 0


def cmd_fit(args: argparse.Namespace) -> int:
    members, labels_val, labels_test = dio.load_manifest(args.manifest)
    cfg = _search_config(args)
    result = search_weights(members, labels_val, cfg)
    dio.write_weights(args.weights_out, members.names, result.weights.weights)
    summary, cm = evaluate_ensemble(members, result.weights, labels_test)
    report = dio.ReportDocument(
        config=_config_echo(cfg, command="fit"),
        members=_member_reports(members, labels_val, labels_test),
        weights=tuple(zip(members.names, (float(w) for w in result.weights.weights))),
        search=dio.SearchSummary(
            validation_accuracy=result.validation_accuracy,
            validation_loss=result.validation_loss,
            trial_index=result.trial_index,
        ),
        ensemble_test=summary,
        confusion_matrix=tuple(tuple(int(v) for v in row) for row in cm.counts),
    )
    _emit(report, args)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    members, labels_val, labels_test = dio.load_manifest(args.manifest)
    if args.weights is not None:
        names, weights = dio.read_weights(args.weights, expected_names=members.names)
        weight_vector = WeightVector(weights)
        summary, cm = evaluate_ensemble(members, weight_vector, labels_test)
        report = dio.ReportDocument(
            config={"command": "report"},
            members=_member_reports(members, labels_val, labels_test),
            weights=tuple(zip(names, (float(w) for w in weights))),
            ensemble_test=summary,
            confusion_matrix=tuple(tuple(int(v) for v in row) for row in cm.counts),
        )
    else:
        cfg = _search_config(args)
        repeats = run_repeated(members, labels_val, labels_test, cfg, args.repeats)
        report = dio.ReportDocument(
            config=_config_echo(cfg, command="report", repeats=args.repeats),
            members=_member_reports(members, labels_val, labels_test),
            repeats=repeats,
        )
    _emit(report, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirblend",
        description="Weighted-average ensembling with Dirichlet-randomized weight search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="stratified train/validation/test assignment")
    p.add_argument("--labels", type=Path, required=True, help="label file, one index per line")
    p.add_argument("--classes", type=int, required=True, help="number of classes C")
    p.add_argument("--out", type=Path, required=True, help="assignment file to write")
    p.add_argument("--test-fraction", type=float, default=0.10)
    p.add_argument(
        "--val-fraction",
        type=float,
        default=0.20,
        help="fraction of the non-test remainder",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("synth", help="generate a synthetic manifest bundle")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--classes", type=int, default=14)
    p.add_argument("--val-samples", type=int, default=500)
    p.add_argument("--test-samples", type=int, default=500)
    p.add_argument(
        "--member",
        action="append",
        required=True,
        metavar="NAME:ACCURACY[:CONFIDENCE[:GROUP]]",
        help="repeatable synthetic member spec",
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="per-member metrics on both splits")
    p.add_argument("--manifest", type=Path, required=True)
    _add_report_output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("fit", help="search ensemble weights on the validation split")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--weights-out", type=Path, required=True, help="weights file to write")
    _add_search_flags(p)
    _add_report_output(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser(
        "report", help="evaluate stored weights, or repeat search-and-test runs"
    )
    p.add_argument("--manifest", type=Path, required=True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--weights", type=Path, help="weights file to evaluate on test")
    mode.add_argument(
        "--repeats",
        type=int,
        help="run the search this many times with seeds seed..seed+N-1",
    )
    _add_search_flags(p)
    _add_report_output(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse handles usage errors and --help
        return int(exit_.code or 0)
    try:
        return args.func(args)
    except DirblendError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
