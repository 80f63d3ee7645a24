import json
from pathlib import Path

import numpy as np
import pytest

from pulsegate.cli import main
from pulsegate.fileio import read_cube, read_features, read_waveform

SCENE = {"duration_s": 16.0, "fps": 30.0, "dims": [8, 8], "hr_trajectory": 75.0,
         "pulse_amplitude": 0.02, "dicrotic_ratio": 0.2,
         "sensor_noise_sigma": 2.0, "seed": 5}


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    scene_path = root / "scene.json"
    scene_path.write_text(json.dumps(SCENE))
    assert main(["synth", "--config", str(scene_path),
                 "--out", str(root / "pos.bin"), "--gt-out", str(root / "gt.csv")]) == 0
    assert main(["synth", "--config", str(scene_path),
                 "--out", str(root / "neg.bin"), "--negative", "shuffle"]) == 0
    return root


class TestSynth:
    def test_cube_and_gt_written(self, workdir):
        cube = read_cube(workdir / "pos.bin")
        assert cube.data.shape == (480, 8, 8, 3)
        truth = read_waveform(workdir / "gt.csv")
        assert len(truth) == 480

    def test_negative_is_permutation(self, workdir):
        pos = read_cube(workdir / "pos.bin")
        neg = read_cube(workdir / "neg.bin")
        a = sorted(frame.tobytes() for frame in pos.data)
        b = sorted(frame.tobytes() for frame in neg.data)
        assert a == b

    def test_env_seed_override(self, workdir, monkeypatch):
        scene_path = workdir / "scene.json"
        monkeypatch.setenv("PULSEGATE_SEED", "99")
        assert main(["synth", "--config", str(scene_path),
                     "--out", str(workdir / "seeded.bin")]) == 0
        a = read_cube(workdir / "pos.bin")
        b = read_cube(workdir / "seeded.bin")
        assert not np.array_equal(a.data, b.data)


class TestEstimate:
    @pytest.mark.parametrize("method", ["green", "chrom", "pos"])
    def test_baselines(self, workdir, method):
        out = workdir / f"{method}.csv"
        assert main(["estimate", "--method", method,
                     "--in", str(workdir / "pos.bin"), "--out", str(out)]) == 0
        wave = read_waveform(out)
        assert len(wave) == 480

    def test_bandpass_and_resample_flags(self, workdir):
        out = workdir / "resampled.csv"
        assert main(["estimate", "--method", "green", "--in", str(workdir / "pos.bin"),
                     "--out", str(out), "--bandpass", "--resample-fps", "90"]) == 0
        wave = read_waveform(out)
        assert wave.fps == pytest.approx(90.0, rel=1e-3)

    def test_model_without_path_is_config_error(self, workdir):
        code = main(["estimate", "--method", "model",
                     "--in", str(workdir / "pos.bin"), "--out", str(workdir / "x.csv")])
        assert code == 2


class TestFeaturesAndClassify:
    def test_features_and_svm_round_trip(self, workdir):
        live = workdir / "feats_live.csv"
        anom = workdir / "feats_anom.csv"
        assert main(["estimate", "--method", "chrom", "--in", str(workdir / "pos.bin"),
                     "--out", str(workdir / "wave_pos.csv")]) == 0
        assert main(["estimate", "--method", "chrom", "--in", str(workdir / "neg.bin"),
                     "--out", str(workdir / "wave_neg.csv")]) == 0
        assert main(["features", "--in", str(workdir / "wave_pos.csv"),
                     "--out", str(live), "--label", "live"]) == 0
        assert main(["features", "--in", str(workdir / "wave_neg.csv"),
                     "--out", str(anom), "--label", "anomalous"]) == 0
        _, matrix, labels = read_features(live)
        assert matrix.shape[1] == 8
        assert np.all(labels == 1)

        svm2 = workdir / "svm2.json"
        assert main(["classify", "fit", "--in", str(live), str(anom),
                     "--kind", "two", "--out", str(svm2)]) == 0
        svm1 = workdir / "svm1.json"
        assert main(["classify", "fit", "--in", str(live),
                     "--kind", "one", "--out", str(svm1)]) == 0
        preds = workdir / "preds.csv"
        assert main(["classify", "predict", "--model", str(svm2),
                     "--in", str(live), "--out", str(preds)]) == 0
        rows = preds.read_text().strip().splitlines()
        assert rows[0] == "t_start,decision,label"
        assert len(rows) == 1 + len(matrix)


class TestPulseRate:
    def test_report_written(self, workdir):
        report = workdir / "rate.json"
        assert main(["pulse-rate", "--in", str(workdir / "wave_pos.csv"),
                     "--truth", str(workdir / "gt.csv"),
                     "--report", str(report)]) == 0
        payload = json.loads(report.read_text())
        assert payload["errors"]["mae_bpm"] < 2.0


class TestTrain:
    def test_train_on_corpus_dir(self, workdir, tmp_path):
        # build a minimal corpus directory via the library
        from pulsegate.fileio import dump_json, write_cube, write_waveform
        from pulsegate.synth import NegativeTransform, SceneConfig, generate_positive, make_negative
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        manifest = []
        for i in range(2):
            cube, truth = generate_positive(SceneConfig(
                duration_s=12.0, fps=20.0, dims=(6, 6), hr_trajectory=75.0,
                pulse_amplitude=0.02, sensor_noise_sigma=4.0, seed=i))
            write_cube(cube, corpus / f"pos_{i}.bin")
            write_waveform(truth, corpus / f"pos_{i}_gt.csv")
            manifest.append({"cube": f"pos_{i}.bin", "gt": f"pos_{i}_gt.csv",
                             "positive": True})
            neg = make_negative(cube, NegativeTransform(kind="normal", seed=i))
            write_cube(neg, corpus / f"neg_{i}.bin")
            manifest.append({"cube": f"neg_{i}.bin", "gt": None, "positive": False})
        dump_json({"samples": manifest}, corpus / "manifest.json")

        train_cfg = tmp_path / "train.json"
        train_cfg.write_text(json.dumps({
            "clip_len": 150, "batch_size": 2, "steps": 10, "learning_rate": 0.01,
            "momentum": 0.9, "seed": 3, "negative_mix": 0.5, "val_every": 5,
            "loss": {"positive_loss": "neg_pearson", "negative_loss": "std",
                     "nfft": 5400},
            "estimator": {"filters": 4, "kernel_len": 21}}))
        model_path = tmp_path / "model.json"
        assert main(["train", "--config", str(train_cfg),
                     "--corpus", str(corpus), "--out", str(model_path)]) == 0
        payload = json.loads(model_path.read_text())
        assert payload["filters"] == 4

        wave_out = tmp_path / "model_wave.csv"
        assert main(["estimate", "--method", "model", "--model", str(model_path),
                     "--in", str(corpus / "pos_0.bin"), "--out", str(wave_out),
                     "--clip-len", "150"]) == 0
        assert len(read_waveform(wave_out)) == 240


class TestExperiment:
    def test_dry_run(self):
        assert main(["experiment", "--config", "configs/smoke.json", "--dry-run"]) == 0

    def test_smoke_experiment_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        assert main(["experiment", "--config", "configs/smoke.json",
                     "--out", str(out1)]) == 0
        assert main(["experiment", "--config", "configs/smoke.json",
                     "--out", str(out2)]) == 0
        assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
        report = json.loads((out1 / "report.json").read_text())
        assert set(report["variants"]) == {"none", "std"}
        for variant in report["variants"].values():
            assert 0.0 <= variant["two_class"]["combined_frame_accuracy"] <= 1.0
        assert report["manifest"]
        # artifact hashes hold
        from pulsegate.fileio import sha256_file
        some = list(report["manifest"].items())[:5]
        for rel, digest in some:
            assert sha256_file(out1 / rel) == digest

    def test_bad_config_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"variants": ["nonsense"]}))
        assert main(["experiment", "--config", str(bad), "--dry-run"]) == 2
