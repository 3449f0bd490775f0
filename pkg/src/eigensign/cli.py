"""``eigensign`` command line: debug, train, classify, eval, synth.

Exit status: 0 success, 2 input/model/pipeline error, 3 partial success
(``train`` skipped at least one image).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from pathlib import Path

from . import __version__
from .classifier import classify
from .config import PipelineConfig, load_config
from .errors import EigenSignError
from .evaluator import build_db, format_report, holdout, leave_one_out, report_csv
from .imaging import load_image, save_image
from .model_store import load_db, save_db
from .pipeline import run_pipeline
from .synth import Jitter, synth_corpus

EXIT_OK = 0
EXIT_ERROR = 2
EXIT_PARTIAL = 3


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("pipeline settings (override --config / $EIGENSIGN_CONFIG)")
    g.add_argument("--config", metavar="PATH", help="key=value settings file")
    g.add_argument("--hue-lo", type=float, help="lowest skin hue in degrees (default 0)")
    g.add_argument("--hue-hi", type=float, help="highest skin hue in degrees (default 50)")
    g.add_argument("--sat-lo", type=float, help="lowest skin saturation (default 0.20)")
    g.add_argument("--sat-hi", type=float, help="highest skin saturation (default 0.68)")
    g.add_argument("--smooth-radius", type=int, help="majority filter radius in pixels (default 2)")
    g.add_argument("--crop-side", type=int, help="side of the resampled crop (default 50)")
    g.add_argument("--eigen-count", type=int, help="eigenpairs kept per image (default 5)")
    g.add_argument("--level1-rule", choices=("vote", "first"), help="level-1 decision rule (default vote)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="eigensign",
        description="Static hand-gesture recognition with eigenvalue-weighted eigenvector distances.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("debug", parents=[common], help="dump every pipeline stage of one image")
    p.add_argument("image")
    p.add_argument("out_dir")

    p = sub.add_parser("train", parents=[common], help="build a template model from a corpus")
    p.add_argument("corpus_dir")
    p.add_argument("model")

    p = sub.add_parser("classify", parents=[common], help="recognise one image")
    p.add_argument("model")
    p.add_argument("image")
    p.add_argument("--report", action="store_true", help="print the full per-template distance table")
    p.add_argument("--csv", metavar="PATH", help="also write the distance table as CSV")

    p = sub.add_parser("eval", parents=[common], help="success rates of both levels")
    p.add_argument("source", help="trained model file or corpus directory")
    p.add_argument("--holdout", type=int, metavar="K", help="hold out K samples per class instead of leave-one-out")
    p.add_argument("--out", metavar="PATH", help="write the report as CSV")
    p.add_argument("--confusion", action="store_true", help="print the level-2 confusion matrix")
    p.add_argument("--no-timing", action="store_true", help="omit the latency line")

    p = sub.add_parser("synth", parents=[common], help="write a seeded synthetic corpus")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classes", type=int, default=24)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--translate", type=int, default=Jitter.translate, help="max shift in pixels")
    p.add_argument("--scale", type=float, default=Jitter.scale, help="max relative scale change (<= 0.05)")
    p.add_argument("--noise", type=float, default=Jitter.noise, help="salt-and-pepper fraction (<= 0.02)")
    p.add_argument("--pose", type=float, default=Jitter.pose, help="max finger angle change in degrees")
    return parser


def resolve_config(args) -> PipelineConfig:
    settings = load_config(args.config)
    for key in ("hue_lo", "hue_hi", "sat_lo", "sat_hi", "smooth_radius", "crop_side", "eigen_count", "level1_rule"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return PipelineConfig().updated(**settings)


def _fail(message: str) -> int:
    print(f"eigensign: error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _describe(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def cmd_debug(args, config) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_pipeline(load_image(args.image), config, on_stage=lambda name, raster: save_image(out / name, raster))
    box = result.box
    print(f"box: x {box.x_min}..{box.x_max}, y {box.y_min}..{box.y_max} (wrist side: {result.wrist})")
    print("eigenvalues: " + " ".join(f"{v:.4f}" for v in result.features.values))
    return EXIT_OK


def cmd_train(args, config) -> int:
    build = build_db(args.corpus_dir, config)
    Path(args.model).write_bytes(save_db(build.db))
    for skip in build.skipped:
        print(f"skipped {skip.path}: {skip.error}", file=sys.stderr)
    print(f"{len(build.db)} templates")
    return EXIT_PARTIAL if build.skipped else EXIT_OK


def _distance_table(rows) -> str:
    k = len(rows[0].per_vector)
    width = max(5, max(len(r.label) for r in rows))
    head = [f"{'Image':<{width}}"] + [f"{'ED' + str(i + 1):>7}" for i in range(k)]
    head += [f"{'W' + str(i + 1):>7}" for i in range(k)] + [f"{'Sum':>8}"]
    lines = ["  ".join(head)]
    for r in rows:
        cells = [f"{r.label:<{width}}"] + [f"{x:>7.4f}" for x in r.per_vector]
        cells += [f"{x:>7.4f}" for x in r.weighted] + [f"{r.weighted_sum:>8.4f}"]
        lines.append("  ".join(cells))
    return "\n".join(lines)


def _distance_csv(rows) -> str:
    k = len(rows[0].per_vector)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label"] + [f"ed{i + 1}" for i in range(k)] + [f"weighted{i + 1}" for i in range(k)] + ["sum"])
    for r in rows:
        w.writerow([r.label] + [repr(x) for x in r.per_vector] + [repr(x) for x in r.weighted] + [repr(r.weighted_sum)])
    return buf.getvalue()


def cmd_classify(args, config) -> int:
    db = load_db(Path(args.model).read_bytes())
    if (db.eigen_count, db.vector_len) != (config.eigen_count, config.crop_side):
        config = config.updated(eigen_count=db.eigen_count, crop_side=db.vector_len)
    features = run_pipeline(load_image(args.image), config).features
    result = classify(features, db.templates, config.level1_rule)
    if args.report:
        print(_distance_table(result.rows))
    if args.csv:
        Path(args.csv).write_text(_distance_csv(result.rows), encoding="utf-8")
    best = result.best_row()
    print(f"level 1: {result.level1_label}")
    print(f"level 2: {result.level2_label} (weighted sum {best.weighted_sum:.4f})")
    return EXIT_OK


def cmd_eval(args, config) -> int:
    source = Path(args.source)
    seconds = None
    if source.is_dir():
        build = build_db(source, config)
        for skip in build.skipped:
            print(f"skipped {skip.path}: {skip.error}", file=sys.stderr)
        db, seconds = build.db, build.seconds
    else:
        db = load_db(source.read_bytes())
    if args.holdout:
        report = holdout(db, args.holdout, config.level1_rule, seconds)
    else:
        report = leave_one_out(db, config.level1_rule, seconds)
    sys.stdout.write(format_report(report, timing=not args.no_timing, confusion=args.confusion))
    if args.out:
        Path(args.out).write_text(report_csv(report), encoding="utf-8")
    return EXIT_OK


def cmd_synth(args, config) -> int:
    jitter = Jitter(args.translate, args.scale, args.noise, args.pose)
    paths = synth_corpus(args.out_dir, args.seed, args.classes, args.samples, jitter)
    print(f"{len(paths)} images in {args.classes} classes written to {args.out_dir}")
    return EXIT_OK


COMMANDS = {
    "debug": cmd_debug,
    "train": cmd_train,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config)
    except (EigenSignError, OSError, ValueError) as exc:
        return _fail(_describe(exc))


if __name__ == "__main__":
    sys.exit(main())
