"""Command-line entry point.

One subcommand, ``export``, which runs a single training job and writes
an artifact directory consumable by the ensembling CLI (``dirblend eval
--manifest <out>/manifest.json`` and friends).  Exit codes: 0 success,
1 bad input or failed run, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from dirblend import SplitSpec
from dirblend.errors import DirblendError

from .errors import TrainerError
from .recipe import FineTuneRecipe, backbone_names
from .export import run_export


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirblend-trainer",
        description="Train one image classifier and export its prediction matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    exp = sub.add_parser("export", help="train a backbone and export artifacts")
    exp.add_argument("--backbone", required=True, help=f"one of: {', '.join(backbone_names())}")
    exp.add_argument("--data", required=True, help="directory-per-class image root")
    exp.add_argument("--out", required=True, help="output directory (must not exist)")
    exp.add_argument("--assignment", help="split assignment file; generated when omitted")
    exp.add_argument("--epochs", type=int, default=50)
    exp.add_argument("--batch", type=int, default=20)
    exp.add_argument("--resolution", type=int, default=128)
    exp.add_argument("--dropout", type=float, default=0.5)
    exp.add_argument("--head-width", type=int, default=512)
    exp.add_argument(
        "--weights",
        choices=("imagenet", "none"),
        default="imagenet",
        help="backbone initialization; 'none' trains from scratch",
    )
    exp.add_argument("--name", help="member name in the manifest (default: backbone, lowercased)")
    exp.add_argument("--seed", type=int, help="pin framework RNGs and the generated split")
    exp.add_argument("--verbose", action="store_true", help="show per-epoch progress")
    return parser


def _cmd_export(args) -> int:
    from .data import scan_image_tree  # deferred with the rest of the heavy path

    num_classes = scan_image_tree(args.data).catalog.num_classes
    recipe = FineTuneRecipe(
        backbone_name=args.backbone,
        num_classes=num_classes,
        input_resolution=args.resolution,
        batch_size=args.batch,
        epochs=args.epochs,
        dropout_rate=args.dropout,
        head_width=args.head_width,
        weights_origin=None if args.weights == "none" else args.weights,
    )
    result = run_export(
        recipe,
        args.data,
        args.out,
        assignment_path=args.assignment,
        split_spec=SplitSpec(seed=args.seed) if args.seed is not None else None,
        member_name=args.name,
        seed=args.seed,
        verbose=1 if args.verbose else 0,
    )
    train_n, val_n, test_n = result.counts
    print(
        f"member={result.member_name} train={train_n} validation={val_n} "
        f"test={test_n} -> {result.manifest_path}"
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse uses 2 for usage errors, 0 for --help
        return int(exit_.code or 0)
    try:
        return _cmd_export(args)
    except (TrainerError, DirblendError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main(sys.argv[1:]))
