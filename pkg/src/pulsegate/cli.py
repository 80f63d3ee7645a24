"""Command-line front end: synth, estimate, train, features, classify,
pulse-rate and the end-to-end experiment driver.

Exit codes: 0 success, 2 configuration/input error, 3 numerical failure.
The PULSEGATE_SEED environment variable overrides config seeds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import baselines as bl
from .classify import ANOMALOUS, LIVE, SvmModel, fit_one_class, fit_two_class, predict
from .errors import (
    DegenerateCorrelationError,
    DegenerateInputError,
    NumericalDivergenceError,
    PulsegateError,
)
from .estimator import ToyEstimator, TrainConfig, infer_video, train
from .evaluate import error_report, pulse_rate
from .experiment import ExperimentConfig, run_experiment
from .features import extract_features, feature_matrix
from .fileio import (
    dump_json,
    read_cube,
    read_features,
    read_waveform,
    write_cube,
    write_features,
    write_waveform,
)
from .signal_core import (
    DEFAULT_BAND_BPM,
    DEFAULT_NFFT,
    bandpass_brickwall,
    resample_cubic,
)
from .synth import SceneConfig, generate_positive, make_transform, make_negative

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _seed_override(seed):
    env = os.environ.get("PULSEGATE_SEED")
    return int(env) if env is not None else seed


def cmd_synth(args):
    payload = _load_json(args.config)
    scene = SceneConfig(
        duration_s=float(payload["duration_s"]),
        fps=float(payload.get("fps", 90.0)),
        dims=tuple(payload.get("dims", (32, 32))),
        hr_trajectory=payload.get("hr_trajectory", 72.0),
        pulse_amplitude=float(payload.get("pulse_amplitude", 0.02)),
        dicrotic_ratio=float(payload.get("dicrotic_ratio", 0.0)),
        sensor_noise_sigma=float(payload.get("sensor_noise_sigma", 0.0)),
        seed=_seed_override(int(payload.get("seed", 0))),
    )
    cube, truth = generate_positive(scene)
    if args.negative:
        negative = payload.get("negative", {})
        transform = make_transform(
            args.negative,
            seed=_seed_override(int(negative.get("seed", scene.seed))),
            normal_sigma=float(negative.get("normal_sigma", 3.0)),
            uniform_bounds=tuple(negative.get("uniform_bounds", (-3.0, 3.0))))
        cube = make_negative(cube, transform)
    write_cube(cube, args.out)
    if args.gt_out:
        write_waveform(truth, args.gt_out)
    print(f"wrote {args.out} ({cube.data.shape[0]} frames at {cube.fps} fps)")
    return EXIT_OK


def cmd_estimate(args):
    cube = read_cube(args.infile)
    if args.method == "model":
        if not args.model:
            raise PulsegateError("--model is required for --method model")
        model = ToyEstimator.from_dict(_load_json(args.model))
        clip_len = min(args.clip_len, cube.data.shape[0])
        wave = infer_video(model, cube, clip_len, overlap=args.overlap)
    else:
        estimator = {"green": bl.estimate_green, "chrom": bl.estimate_chrom,
                     "pos": bl.estimate_pos}[args.method]
        wave = estimator(bl.trace_from_cube(cube))
    if args.bandpass:
        wave = bandpass_brickwall(wave, DEFAULT_BAND_BPM)
    if args.resample_fps:
        wave = resample_cubic(wave, args.resample_fps)
    write_waveform(wave, args.out)
    print(f"wrote {args.out} ({len(wave)} samples at {wave.fps:g} fps)")
    return EXIT_OK


def _read_corpus_dir(corpus_dir):
    corpus_dir = Path(corpus_dir)
    manifest = _load_json(corpus_dir / "manifest.json")
    samples = []
    for entry in manifest["samples"]:
        cube = read_cube(corpus_dir / entry["cube"])
        truth = read_waveform(corpus_dir / entry["gt"]) if entry.get("gt") else None
        samples.append((cube, truth, bool(entry["positive"])))
    return samples


def cmd_train(args):
    payload = _load_json(args.config)
    payload["seed"] = _seed_override(int(payload.get("seed", 0)))
    estimator_cfg = payload.pop("estimator", {})
    cfg = TrainConfig.from_dict(payload)
    samples = _read_corpus_dir(args.corpus)
    init = ToyEstimator.init(filters=int(estimator_cfg.get("filters", 8)),
                             kernel_len=int(estimator_cfg.get("kernel_len", 11)),
                             scale=float(estimator_cfg.get("init_scale", 0.1)),
                             seed=cfg.seed)
    model, history = train(cfg, samples, model=init)
    dump_json(model.to_dict(), args.out)
    print(f"wrote {args.out} (final batch loss {history[-1]:.4f} "
          f"after {len(history)} steps)")
    return EXIT_OK


def cmd_features(args):
    wave = read_waveform(args.infile)
    windows = extract_features(wave, window_s=args.window_s, stride_s=args.stride_s,
                               nfft=args.nfft)
    t_starts = [t for t, _ in windows]
    matrix = feature_matrix(windows)
    labels = None
    if args.label:
        value = LIVE if args.label == "live" else ANOMALOUS
        labels = [value] * len(t_starts)
    write_features(args.out, t_starts, matrix, labels)
    print(f"wrote {args.out} ({len(t_starts)} windows)")
    return EXIT_OK


def cmd_classify_fit(args):
    matrices, labels = [], []
    for path in args.infiles:
        _, matrix, file_labels = read_features(path)
        matrices.append(matrix)
        labels.append(file_labels)
    x = np.vstack(matrices)
    if args.kind == "two":
        if any(l is None for l in labels):
            raise PulsegateError("two-class fit needs labeled feature files")
        y = np.concatenate(labels)
        model = fit_two_class(x, y, C=args.C)
    else:
        if all(l is not None for l in labels):
            keep = np.concatenate(labels) == LIVE
            x = x[keep]
        model = fit_one_class(x, nu=args.nu)
    dump_json(model.to_dict(), args.out)
    print(f"wrote {args.out} ({model.support_vectors.shape[0]} support vectors)")
    return EXIT_OK


def cmd_classify_predict(args):
    model = SvmModel.from_dict(_load_json(args.model))
    t_starts, matrix, _ = read_features(args.infile)
    labels, decisions = predict(model, matrix)
    with open(args.out, "w") as fh:
        fh.write("t_start,decision,label\n")
        for t0, value, label in zip(t_starts, decisions, labels):
            fh.write(f"{t0!r},{value!r},{int(label)}\n")
    live = int((labels == LIVE).sum())
    print(f"wrote {args.out} ({live}/{len(labels)} windows classified live)")
    return EXIT_OK


def cmd_pulse_rate(args):
    wave = read_waveform(args.infile)
    pred = pulse_rate(wave, window_s=args.window_s, stride_frames=args.stride_frames,
                      nfft=args.nfft)
    payload = {"pred": {"times_s": list(map(float, pred.times_s)),
                        "bpm": [None if np.isnan(v) else float(v) for v in pred.bpm]}}
    if args.truth:
        truth_wave = read_waveform(args.truth)
        truth = pulse_rate(truth_wave, window_s=args.window_s,
                           stride_frames=args.stride_frames, nfft=args.nfft)
        payload["truth"] = {"times_s": list(map(float, truth.times_s)),
                            "bpm": [None if np.isnan(v) else float(v) for v in truth.bpm]}
        try:
            payload["errors"] = error_report(pred, truth).to_dict()
        except DegenerateCorrelationError:
            # constant-rate series: correlation is undefined, the error
            # magnitudes are still meaningful
            valid = np.isfinite(pred.bpm) & np.isfinite(truth.bpm)
            diff = pred.bpm[valid] - truth.bpm[valid]
            payload["errors"] = {"me_bpm": float(diff.mean()),
                                 "mae_bpm": float(np.abs(diff).mean()),
                                 "rmse_bpm": float(np.sqrt(np.mean(diff ** 2))),
                                 "pearson_r": None}
    dump_json(payload, args.report)
    if "errors" in payload:
        err = payload["errors"]
        r_text = "n/a" if err["pearson_r"] is None else f"{err['pearson_r']:.3f}"
        print(f"MAE {err['mae_bpm']:.3f} bpm, RMSE {err['rmse_bpm']:.3f} bpm, "
              f"r {r_text}")
    else:
        valid = [v for v in payload["pred"]["bpm"] if v is not None]
        print(f"median rate {np.median(valid):.1f} bpm over {len(valid)} windows")
    return EXIT_OK


def cmd_experiment(args):
    payload = _load_json(args.config)
    payload["seed"] = _seed_override(int(payload.get("seed", 7)))
    cfg = ExperimentConfig.from_dict(payload)
    if args.dry_run:
        run_experiment(cfg, args.out or ".", dry_run=True)
        print("config ok")
        return EXIT_OK
    if not args.out:
        raise PulsegateError("--out directory is required (unless --dry-run)")
    report = run_experiment(cfg, args.out)
    print((Path(args.out) / "report.txt").read_text())
    print(f"report written to {args.out}/report.json")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="pulsegate",
                                     description="anomaly-aware remote pulse estimation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="render a synthetic scene")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--negative", choices=["normal", "uniform", "shuffle"])
    p.add_argument("--gt-out")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("estimate", help="estimate a pulse waveform from a cube")
    p.add_argument("--method", required=True, choices=["green", "chrom", "pos", "model"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model")
    p.add_argument("--clip-len", type=int, default=270)
    p.add_argument("--overlap", type=float, default=0.5)
    p.add_argument("--bandpass", action="store_true")
    p.add_argument("--resample-fps", type=float)
    p.set_defaults(fn=cmd_estimate)

    p = sub.add_parser("train", help="train the toy estimator on a corpus directory")
    p.add_argument("--config", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("features", help="extract windowed waveform features")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window-s", type=float, default=10.0)
    p.add_argument("--stride-s", type=float, default=1.0)
    p.add_argument("--nfft", type=int, default=DEFAULT_NFFT)
    p.add_argument("--label", choices=["live", "anomalous"])
    p.set_defaults(fn=cmd_features)

    p = sub.add_parser("classify", help="fit or apply an SVM")
    csub = p.add_subparsers(dest="subcommand", required=True)
    pf = csub.add_parser("fit")
    pf.add_argument("--in", dest="infiles", nargs="+", required=True)
    pf.add_argument("--kind", required=True, choices=["one", "two"])
    pf.add_argument("--out", required=True)
    pf.add_argument("--C", type=float, default=1.0)
    pf.add_argument("--nu", type=float, default=0.5)
    pf.set_defaults(fn=cmd_classify_fit)
    pp = csub.add_parser("predict")
    pp.add_argument("--model", required=True)
    pp.add_argument("--in", dest="infile", required=True)
    pp.add_argument("--out", required=True)
    pp.set_defaults(fn=cmd_classify_predict)

    p = sub.add_parser("pulse-rate", help="windowed pulse-rate estimation and errors")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--truth")
    p.add_argument("--report", required=True)
    p.add_argument("--window-s", type=float, default=10.0)
    p.add_argument("--stride-frames", type=int, default=1)
    p.add_argument("--nfft", type=int, default=DEFAULT_NFFT)
    p.set_defaults(fn=cmd_pulse_rate)

    p = sub.add_parser("experiment", help="run the full synthetic study")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--dry-run", action="store_true")
    p.set_defaults(fn=cmd_experiment)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (NumericalDivergenceError, DegenerateInputError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PulsegateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
