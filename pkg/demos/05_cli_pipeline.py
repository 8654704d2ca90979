"""Drive the whole pipeline through the dirblend command-line interface.

Generates a synthetic manifest bundle, fits ensemble weights on the
validation split, re-evaluates the stored weights file, and runs the
repeated-search protocol — all via subprocesses, the way a shell user
would. Run: python3 demos/05_cli_pipeline.py
"""

import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args):
    cmd = [sys.executable, "-m", "dirblend", *args]
    print(f"\n$ dirblend {' '.join(args)}")
    out = subprocess.run(cmd, capture_output=True, text=True)
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(out.returncode)
    print(out.stdout, end="")
    return out.stdout


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    bundle = tmp / "bundle"

    run(
        "synth",
        "--out-dir", str(bundle),
        "--classes", "14",
        "--val-samples", "500",
        "--test-samples", "500",
        "--member", "resnet_like:0.76",
        "--member", "shallow_net:0.55",
        "--member", "big_backbone:0.96:0.92:1",
        "--member", "sibling_tune:0.94:0.9:1",
        "--seed", "7",
    )

    weights = tmp / "weights.json"
    run(
        "fit",
        "--manifest", str(bundle / "manifest.json"),
        "--weights-out", str(weights),
        "--trials", "1000",
        "--seed", "0",
    )

    # the stored weights file reproduces the same ensemble later
    run(
        "report",
        "--manifest", str(bundle / "manifest.json"),
        "--weights", str(weights),
    )

    # stability protocol: ten searches with consecutive seeds
    run(
        "report",
        "--manifest", str(bundle / "manifest.json"),
        "--repeats", "10",
        "--trials", "300",
        "--seed", "100",
    )
