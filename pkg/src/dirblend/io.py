"""File formats, manifest handling, and report documents.

All formats are UTF-8 text:

- prediction CSV: header row of class names, then one row of C
  probabilities per sample, written with 17 significant digits so doubles
  round-trip exactly. Files carry no sample ids; row order is the
  alignment contract (row i of every member file is the same sample).
- label file: one integer class index per line.
- assignment file: one ``<sample_id>,<train|validation|test>`` line per
  sample (ids may contain commas; the tag is split off the right).
- manifest: JSON object naming the class catalog, each member's
  prediction files, and the label files.
- weights file: JSON object pairing member names with searched weights.
- report: JSON document with stable key order and repr-stable floats, or
  a human-readable table rendering. Both emissions are deterministic
  byte-for-byte.

Error messages name the offending file and, where a line makes sense, the
1-based line number.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    ClassCatalog,
    LabelVector,
    Member,
    MemberSet,
    PredictionMatrix,
    validate_matrix,
)
from .errors import (
    InconsistentShapesError,
    MissingFileError,
    OutOfRangeError,
    ParseError,
    UnsupportedVersionError,
    ValidationError,
)
from .metrics import MetricSummary, format_percent
from .ensemble import RepeatReport, RepeatRun
from .split import TAG_CODES, TAG_NAMES, SplitAssignment

MANIFEST_VERSION = 1
WEIGHTS_VERSION = 1
REPORT_VERSION = 1

FLOAT_FORMAT = "%.17g"


def _fmt(value: float) -> str:
    return FLOAT_FORMAT % value


def _require_exists(path: Path) -> Path:
    if not path.is_file():
        raise MissingFileError("file not found", path=path)
    return path


# ---------------------------------------------------------------------------
# prediction CSV


def write_predictions(path, matrix: PredictionMatrix, catalog: ClassCatalog) -> None:
    path = Path(path)
    if matrix.num_classes != catalog.num_classes:
        raise InconsistentShapesError(
            f"matrix has {matrix.num_classes} columns, catalog {catalog.num_classes}",
            path=path,
        )
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(catalog.names)
        for row in matrix.values:
            writer.writerow(_fmt(v) for v in row)


def read_predictions(
    path, catalog: ClassCatalog | None = None, tolerance: float = 1e-6
) -> PredictionMatrix:
    """Parse a prediction CSV and validate it into a PredictionMatrix."""
    path = _require_exists(Path(path))
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty prediction file", path=path) from None
        if len(header) < 2:
            raise ParseError(
                f"header names {len(header)} classes, need at least 2",
                path=path,
                line=1,
            )
        if catalog is not None and tuple(header) != catalog.names:
            raise InconsistentShapesError(
                f"header {header!r} does not match catalog {list(catalog.names)!r}",
                path=path,
                line=1,
            )
        c = len(header)
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != c:
                raise ParseError(
                    f"expected {c} values, found {len(row)}", path=path, line=line_no
                )
            try:
                rows.append([float(v) for v in row])
            except ValueError as err:
                raise ParseError(f"bad float: {err}", path=path, line=line_no) from None
    if not rows:
        raise ParseError("prediction file has a header but no rows", path=path)
    try:
        return validate_matrix(np.array(rows), tolerance=tolerance)
    except ValidationError as err:
        line_no = _locate_bad_row(rows, tolerance)
        raise type(err)(f"{path}:{line_no}: {err}") from err


def _locate_bad_row(rows: list[list[float]], tolerance: float) -> int:
    """1-based file line of the first row failing validation."""
    for i, row in enumerate(rows):
        try:
            validate_matrix(np.array([row]), tolerance=tolerance)
        except ValidationError:
            return i + 2  # +1 header, +1 one-based
    return 2


# ---------------------------------------------------------------------------
# label file


def write_labels(path, labels: LabelVector) -> None:
    Path(path).write_text(
        "".join(f"{int(v)}\n" for v in labels.labels), encoding="utf-8"
    )


def read_labels(path, num_classes: int) -> LabelVector:
    path = _require_exists(Path(path))
    values = []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                value = int(text)
            except ValueError:
                raise ParseError(
                    f"expected an integer label, found {text!r}",
                    path=path,
                    line=line_no,
                ) from None
            if not 0 <= value < num_classes:
                raise OutOfRangeError(
                    f"{path}:{line_no}: label {value} outside [0, {num_classes})"
                )
            values.append(value)
    if not values:
        raise ParseError("label file is empty", path=path)
    return LabelVector(np.array(values), num_classes=num_classes)


# ---------------------------------------------------------------------------
# assignment file


def write_assignment(path, assignment: SplitAssignment, ids=None) -> None:
    names = assignment.tag_names()
    if ids is None:
        ids = [str(i) for i in range(len(assignment))]
    if len(ids) != len(assignment):
        raise InconsistentShapesError(
            f"{len(ids)} ids for {len(assignment)} samples", path=path
        )
    Path(path).write_text(
        "".join(f"{sid},{tag}\n" for sid, tag in zip(ids, names)), encoding="utf-8"
    )


def read_assignment(path) -> tuple[list[str], SplitAssignment]:
    path = _require_exists(Path(path))
    ids, codes = [], []
    with path.open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text:
                continue
            sid, sep, tag = text.rpartition(",")
            if not sep or tag not in TAG_CODES:
                raise ParseError(
                    f"expected '<sample_id>,<{'|'.join(TAG_NAMES)}>', found {text!r}",
                    path=path,
                    line=line_no,
                )
            ids.append(sid)
            codes.append(TAG_CODES[tag])
    if not ids:
        raise ParseError("assignment file is empty", path=path)
    return ids, SplitAssignment(np.array(codes, dtype=np.int8))


# ---------------------------------------------------------------------------
# manifest


@dataclass(frozen=True)
class ManifestMember:
    name: str
    val_predictions_path: str
    test_predictions_path: str


@dataclass(frozen=True)
class Manifest:
    """Names every file of one ensemble run; paths are relative to the
    manifest's own directory unless absolute."""

    catalog: ClassCatalog
    members: tuple[ManifestMember, ...]
    val_labels_path: str
    test_labels_path: str
    format_version: int = MANIFEST_VERSION


def write_manifest(path, manifest: Manifest) -> None:
    doc = {
        "format_version": manifest.format_version,
        "classes": list(manifest.catalog.names),
        "members": [
            {
                "name": m.name,
                "val_predictions_path": m.val_predictions_path,
                "test_predictions_path": m.test_predictions_path,
            }
            for m in manifest.members
        ],
        "labels": {
            "val_path": manifest.val_labels_path,
            "test_path": manifest.test_labels_path,
        },
    }
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_manifest(path) -> Manifest:
    """Parse a manifest file without touching the files it references."""
    path = _require_exists(Path(path))
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err}", path=path, line=err.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("manifest must be a JSON object", path=path)
    version = doc.get("format_version")
    if version != MANIFEST_VERSION:
        raise UnsupportedVersionError(
            f"format_version {version!r}, this release reads {MANIFEST_VERSION}",
            path=path,
        )
    try:
        catalog = ClassCatalog(tuple(doc["classes"]))
        members = tuple(
            ManifestMember(
                name=m["name"],
                val_predictions_path=m["val_predictions_path"],
                test_predictions_path=m["test_predictions_path"],
            )
            for m in doc["members"]
        )
        labels = doc["labels"]
        manifest = Manifest(
            catalog=catalog,
            members=members,
            val_labels_path=labels["val_path"],
            test_labels_path=labels["test_path"],
        )
    except (KeyError, TypeError) as err:
        raise ParseError(f"manifest missing or malformed key: {err}", path=path) from None
    if not manifest.members:
        raise ParseError("manifest lists no members", path=path)
    return manifest


def load_manifest(
    path, tolerance: float = 1e-6
) -> tuple[MemberSet, LabelVector, LabelVector]:
    """Read a manifest plus every file it references, cross-validated.

    Returns (members, labels_val, labels_test). All members must share
    one validation N and one test N matching the label files; every file
    must agree with the catalog's class count.
    """
    path = Path(path)
    manifest = read_manifest(path)
    base = path.parent

    def resolve(p: str) -> Path:
        q = Path(p)
        return q if q.is_absolute() else base / q

    catalog = manifest.catalog
    labels_val = read_labels(resolve(manifest.val_labels_path), catalog.num_classes)
    labels_test = read_labels(resolve(manifest.test_labels_path), catalog.num_classes)
    members = []
    for m in manifest.members:
        val = read_predictions(resolve(m.val_predictions_path), catalog, tolerance)
        test = read_predictions(resolve(m.test_predictions_path), catalog, tolerance)
        if val.n_rows != len(labels_val):
            raise InconsistentShapesError(
                f"member {m.name!r}: {val.n_rows} validation rows, "
                f"labels have {len(labels_val)}",
                path=path,
            )
        if test.n_rows != len(labels_test):
            raise InconsistentShapesError(
                f"member {m.name!r}: {test.n_rows} test rows, "
                f"labels have {len(labels_test)}",
                path=path,
            )
        members.append(Member(name=m.name, validation=val, test=test))
    return MemberSet(tuple(members), catalog), labels_val, labels_test


# ---------------------------------------------------------------------------
# weights file


def write_weights(path, names: tuple[str, ...], weights) -> None:
    values = list(np.asarray(weights, dtype=np.float64))
    if len(values) != len(names):
        raise InconsistentShapesError(
            f"{len(values)} weights for {len(names)} names", path=path
        )
    doc = {
        "format_version": WEIGHTS_VERSION,
        "members": list(names),
        "weights": [float(v) for v in values],
    }
    Path(path).write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_weights(path, expected_names: tuple[str, ...] | None = None):
    """Returns (member_names, weight_array); order follows the file."""
    path = _require_exists(Path(path))
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err}", path=path, line=err.lineno) from None
    if not isinstance(doc, dict) or doc.get("format_version") != WEIGHTS_VERSION:
        raise UnsupportedVersionError(
            f"format_version {doc.get('format_version') if isinstance(doc, dict) else None!r}, "
            f"this release reads {WEIGHTS_VERSION}",
            path=path,
        )
    try:
        names = tuple(str(n) for n in doc["members"])
        weights = np.array([float(w) for w in doc["weights"]])
    except (KeyError, TypeError, ValueError) as err:
        raise ParseError(f"weights file malformed: {err}", path=path) from None
    if len(names) != weights.size:
        raise InconsistentShapesError(
            f"{weights.size} weights for {len(names)} names", path=path
        )
    if expected_names is not None and names != tuple(expected_names):
        raise InconsistentShapesError(
            f"weights name members {list(names)!r}, manifest has "
            f"{list(expected_names)!r}",
            path=path,
        )
    return names, weights


# ---------------------------------------------------------------------------
# report document


@dataclass(frozen=True)
class MemberReport:
    """One member's metrics per split; splits it was not scored on stay None."""

    name: str
    validation: MetricSummary | None = None
    test: MetricSummary | None = None


@dataclass(frozen=True)
class SearchSummary:
    """Selection outcome echoed into reports."""

    validation_accuracy: float
    validation_loss: float
    trial_index: int


@dataclass
class ReportDocument:
    """Everything one run reports; sections are optional and omitted when
    absent. Serializes deterministically in both formats."""

    config: dict = field(default_factory=dict)
    members: tuple[MemberReport, ...] = ()
    weights: tuple[tuple[str, float], ...] | None = None
    search: SearchSummary | None = None
    ensemble_test: MetricSummary | None = None
    confusion_matrix: tuple[tuple[int, ...], ...] | None = None
    repeats: RepeatReport | None = None


def _summary_mapping(s: MetricSummary | None):
    if s is None:
        return None
    return {
        "accuracy": s.accuracy,
        "accuracy_percent": s.accuracy_percent,
        "loss": s.loss,
        "n_samples": s.n_samples,
    }


def _summary_from(mapping) -> MetricSummary | None:
    if mapping is None:
        return None
    return MetricSummary(
        accuracy=float(mapping["accuracy"]),
        loss=float(mapping["loss"]),
        n_samples=int(mapping["n_samples"]),
    )


def report_mapping(report: ReportDocument) -> dict:
    doc = {
        "format_version": REPORT_VERSION,
        "config": report.config,
        "members": [
            {
                "name": m.name,
                "validation": _summary_mapping(m.validation),
                "test": _summary_mapping(m.test),
            }
            for m in report.members
        ],
    }
    if report.weights is not None:
        doc["weights"] = [{"name": n, "weight": w} for n, w in report.weights]
    if report.search is not None:
        doc["search"] = {
            "validation_accuracy": report.search.validation_accuracy,
            "validation_loss": report.search.validation_loss,
            "trial_index": report.search.trial_index,
        }
    if report.ensemble_test is not None:
        doc["ensemble_test"] = _summary_mapping(report.ensemble_test)
    if report.confusion_matrix is not None:
        doc["confusion_matrix"] = [list(row) for row in report.confusion_matrix]
    if report.repeats is not None:
        doc["repeats"] = {
            "runs": [
                {
                    "seed": r.seed,
                    "test_accuracy": r.test_accuracy,
                    "test_loss": r.test_loss,
                }
                for r in report.repeats.runs
            ],
            "mean_accuracy": report.repeats.mean_accuracy,
            "std_accuracy": report.repeats.std_accuracy,
        }
    return doc


def parse_report(data: bytes) -> ReportDocument:
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise ParseError(f"invalid report document: {err}") from None
    version = doc.get("format_version")
    if version != REPORT_VERSION:
        raise UnsupportedVersionError(
            f"format_version {version!r}, this release reads {REPORT_VERSION}"
        )
    report = ReportDocument(config=doc.get("config", {}))
    report.members = tuple(
        MemberReport(
            name=m["name"],
            validation=_summary_from(m.get("validation")),
            test=_summary_from(m.get("test")),
        )
        for m in doc.get("members", [])
    )
    if "weights" in doc:
        report.weights = tuple((w["name"], float(w["weight"])) for w in doc["weights"])
    if "search" in doc:
        s = doc["search"]
        report.search = SearchSummary(
            validation_accuracy=float(s["validation_accuracy"]),
            validation_loss=float(s["validation_loss"]),
            trial_index=int(s["trial_index"]),
        )
    if "ensemble_test" in doc:
        report.ensemble_test = _summary_from(doc["ensemble_test"])
    if "confusion_matrix" in doc:
        report.confusion_matrix = tuple(
            tuple(int(v) for v in row) for row in doc["confusion_matrix"]
        )
    if "repeats" in doc:
        r = doc["repeats"]
        report.repeats = RepeatReport(
            runs=tuple(
                RepeatRun(
                    seed=int(run["seed"]),
                    test_accuracy=float(run["test_accuracy"]),
                    test_loss=float(run["test_loss"]),
                )
                for run in r["runs"]
            ),
            mean_accuracy=float(r["mean_accuracy"]),
            std_accuracy=float(r["std_accuracy"]),
        )
    return report


def _render_table(report: ReportDocument) -> str:
    lines = []

    def rule(width: int = 64):
        lines.append("-" * width)

    if report.members:
        lines.append("PER-MEMBER METRICS")
        lines.append(f"{'member':<20} {'split':<12} {'loss':>10} {'accuracy':>10}")
        rule()
        for m in report.members:
            for split, summary in (("validation", m.validation), ("test", m.test)):
                if summary is None:
                    continue
                lines.append(
                    f"{m.name:<20} {split:<12} {summary.loss:>10.4f} "
                    f"{summary.accuracy_percent:>10}"
                )
        lines.append("")

    if report.weights is not None:
        lines.append("ENSEMBLE (weighted average)")
        lines.append(f"{'member':<20} {'weight':>10} {'accuracy':>10}")
        rule()
        test_acc = {m.name: m.test for m in report.members if m.test is not None}
        for name, weight in report.weights:
            acc = test_acc.get(name)
            acc_text = acc.accuracy_percent if acc is not None else "-"
            lines.append(f"{name:<20} {weight:>10.5f} {acc_text:>10}")
        if report.ensemble_test is not None:
            lines.append(
                f"{'ensemble':<20} {'(all)':>10} "
                f"{report.ensemble_test.accuracy_percent:>10}"
            )
        lines.append("")

    if report.search is not None:
        lines.append(
            "search: validation accuracy "
            f"{format_percent(report.search.validation_accuracy)} "
            f"(loss {report.search.validation_loss:.4f}, "
            f"candidate {report.search.trial_index})"
        )
        lines.append("")

    if report.ensemble_test is not None and report.weights is None:
        lines.append(
            f"ensemble test accuracy {report.ensemble_test.accuracy_percent} "
            f"(loss {report.ensemble_test.loss:.4f}, "
            f"n={report.ensemble_test.n_samples})"
        )
        lines.append("")

    if report.confusion_matrix is not None:
        lines.append("CONFUSION MATRIX (rows true, columns predicted)")
        for row in report.confusion_matrix:
            lines.append(" ".join(f"{v:>6d}" for v in row))
        lines.append("")

    if report.repeats is not None:
        lines.append("REPEATED RUNS")
        lines.append(f"{'seed':<12} {'accuracy':>10} {'loss':>10}")
        rule(36)
        for run in report.repeats.runs:
            lines.append(
                f"{run.seed:<12} {format_percent(run.test_accuracy):>10} "
                f"{run.test_loss:>10.4f}"
            )
        lines.append(
            f"mean accuracy {format_percent(report.repeats.mean_accuracy)} "
            f"(std {report.repeats.std_accuracy:.6f} over "
            f"{len(report.repeats.runs)} runs)"
        )
        lines.append("")

    return "\n".join(lines)


def emit_report(report: ReportDocument, fmt: str = "structured") -> bytes:
    """Serialize a report; identical input yields identical bytes.

    fmt "structured" is the machine-readable JSON form; "table-text" the
    human rendering with accuracies as two-decimal percentages.
    """
    if fmt == "structured":
        text = json.dumps(report_mapping(report), indent=2, sort_keys=True) + "\n"
    elif fmt == "table-text":
        text = _render_table(report)
    else:
        raise ValidationError(f"unknown report format {fmt!r}")
    return text.encode("utf-8")
