import json

import numpy as np
import pytest

from conftest import SR, speechish, tone
from vicaug.augment import AugmentRecord
from vicaug.cli import main
from vicaug.wavio import read_wav, write_wav


@pytest.fixture
def wav_in(tmp_path):
    path = tmp_path / "in.wav"
    write_wav(path, speechish(seconds=0.5))
    return path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAugmentCommand:
    def test_deterministic_output(self, tmp_path, wav_in, capsys):
        out1 = tmp_path / "o1.wav"
        out2 = tmp_path / "o2.wav"
        for out in (out1, out2):
            code, stdout, _ = run(
                capsys, "augment", "--scheme", "bandlimited", "--seed", "7",
                str(wav_in), str(out),
            )
            assert code == 0
            assert stdout.startswith("scheme=bandlimited")
        assert out1.read_bytes() == out2.read_bytes()

    def test_record_line_parses(self, tmp_path, wav_in, capsys):
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "3",
            str(wav_in), str(tmp_path / "o.wav"),
        )
        assert code == 0
        record = AugmentRecord.from_line(stdout.strip())
        assert record.scheme == "notch"
        assert 5000.0 <= record.params["dip_hz"] <= 8000.0

    def test_random_scheme_is_seeded(self, tmp_path, wav_in, capsys):
        lines = []
        for _ in range(2):
            code, stdout, _ = run(
                capsys, "augment", "--seed", "11", str(wav_in),
                str(tmp_path / "r.wav"),
            )
            assert code == 0
            lines.append(stdout)
        assert lines[0] == lines[1]

    def test_nyquist_violation_exit_2(self, tmp_path, capsys):
        low_rate = tmp_path / "low.wav"
        write_wav(low_rate, tone(900.0, seconds=0.5, sr=8000))
        code, _, stderr = run(
            capsys, "augment", "--scheme", "widepass", str(low_rate),
            str(tmp_path / "o.wav"),
        )
        assert code == 2
        assert stderr.startswith("vicaug: error:")
        assert "Nyquist" in stderr

    def test_unknown_flag_exit_1(self, tmp_path, wav_in, capsys):
        code, _, stderr = run(
            capsys, "augment", "--bogus", str(wav_in), str(tmp_path / "o.wav")
        )
        assert code == 1
        assert "usage" in stderr

    def test_snr_flag_overrides(self, tmp_path, wav_in, capsys):
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "widepass", "--seed", "5",
            "--snr-min", "12", "--snr-max", "12",
            str(wav_in), str(tmp_path / "o.wav"),
        )
        assert code == 0
        assert AugmentRecord.from_line(stdout.strip()).gamma_db == 12.0

    def test_batch_mode(self, tmp_path, capsys):
        indir = tmp_path / "in"
        outdir = tmp_path / "out"
        indir.mkdir()
        for name, seed in (("b.wav", 1), ("a.wav", 2)):
            write_wav(indir / name, speechish(seconds=0.3, seed=seed))
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "9",
            str(indir), str(outdir),
        )
        assert code == 0
        lines = stdout.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("file=a.wav ")
        assert lines[1].startswith("file=b.wav ")
        assert (outdir / "a.wav").exists() and (outdir / "b.wav").exists()
        # rerun reproduces bytes
        outdir2 = tmp_path / "out2"
        code, stdout2, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "9",
            str(indir), str(outdir2),
        )
        assert stdout2 == stdout
        assert (outdir / "a.wav").read_bytes() == (outdir2 / "a.wav").read_bytes()


class TestConfigPrecedence:
    def test_three_layers(self, tmp_path, wav_in, capsys):
        # layer 1: shipped default SNR range is [8, 32]
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"snr_min": 10.0, "snr_max": 10.0}))
        # layer 2: config file pins SNR to 10
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "4",
            "--config", str(cfg), str(wav_in), str(tmp_path / "o.wav"),
        )
        assert AugmentRecord.from_line(stdout.strip()).gamma_db == 10.0
        # layer 3: flags beat the file
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "4",
            "--config", str(cfg), "--snr-min", "12", "--snr-max", "12",
            str(wav_in), str(tmp_path / "o.wav"),
        )
        assert AugmentRecord.from_line(stdout.strip()).gamma_db == 12.0

    def test_scheme_section(self, tmp_path, wav_in, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(
            json.dumps({"schemes": {"notch": {"omega_min": 6000.0, "omega_max": 7000.0}}})
        )
        code, stdout, _ = run(
            capsys, "augment", "--scheme", "notch", "--seed", "4",
            "--config", str(cfg), str(wav_in), str(tmp_path / "o.wav"),
        )
        assert 6000.0 <= AugmentRecord.from_line(stdout.strip()).params["dip_hz"] <= 7000.0

    def test_unknown_config_key(self, tmp_path, wav_in, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"snr_minimum": 10.0}))
        code, _, stderr = run(
            capsys, "augment", "--config", str(cfg), str(wav_in),
            str(tmp_path / "o.wav"),
        )
        assert code == 2
        assert "unknown config keys" in stderr

    def test_rir_section_resolves(self):
        from vicaug.config import build_config

        cfg = build_config(
            "rir",
            {
                "schemes": {
                    "rir": {
                        "rooms": [[3.0, 3.0, 2.0]],
                        "materials": ["hairy_carpet"],
                        "d_min": 0.1,
                        "d_max": 1.0,
                        "max_order": 4,
                    }
                }
            },
        )
        assert cfg.rooms == ((3.0, 3.0, 2.0),)
        assert cfg.materials == ("hairy_carpet",)
        assert (cfg.d_min, cfg.d_max, cfg.max_order) == (0.1, 1.0, 4)


class TestOtherCommands:
    def test_rir_writes_wav(self, tmp_path, capsys):
        out = tmp_path / "rir.wav"
        code, stdout, _ = run(
            capsys, "rir", str(out), "--room", "4x4x2.5", "--material",
            "hairy_carpet", "--distance", "1.0", "--seed", "2",
        )
        assert code == 0
        assert "alpha=" in stdout
        rir = read_wav(out)
        assert len(rir) > 0

    def test_rir_unknown_material(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "rir", str(tmp_path / "r.wav"), "--material", "velvet")
        assert code == 2
        assert "velvet" in stderr

    def test_design_notch(self, capsys):
        code, stdout, _ = run(
            capsys, "design-filter", "--type", "notch", "--dip-freq", "5000",
            "--sample-rate", "16000",
        )
        assert code == 0
        taps = [float(line) for line in stdout.strip().splitlines()]
        assert len(taps) == 3
        assert taps[1] == pytest.approx(-2.0 * np.cos(2 * np.pi * 5000 / 16000))

    def test_design_parzen(self, capsys):
        code, stdout, _ = run(
            capsys, "design-filter", "--type", "parzen", "--center-freq", "400",
            "--bandwidth", "200", "--sample-rate", "16000",
        )
        assert code == 0
        taps = [float(line) for line in stdout.strip().splitlines()]
        assert len(taps) == 400

    def test_spectrogram_outputs(self, tmp_path, wav_in, capsys):
        pgm = tmp_path / "s.pgm"
        csv = tmp_path / "s.csv"
        code, _, _ = run(capsys, "spectrogram", str(wav_in), str(pgm), str(csv))
        assert code == 0
        assert pgm.read_bytes().startswith(b"P5\n")
        assert csv.exists()

    def test_verify_theorem(self, capsys):
        code, stdout, _ = run(
            capsys, "verify-theorem", "--statistic", "identity", "--sigma", "0.1",
            "--delta", "0.3", "--samples", "10000",
        )
        assert code == 0
        assert "result=PASS" in stdout

    def test_sample_vicinal(self, tmp_path, wav_in, capsys):
        outdir = tmp_path / "vic"
        code, stdout, _ = run(
            capsys, "sample-vicinal", str(wav_in), str(outdir), "--m", "3",
            "--seed", "8",
        )
        assert code == 0
        lines = stdout.strip().splitlines()
        assert len(lines) == 3
        assert (outdir / "sample_000.wav").exists()
        assert (outdir / "sample_002.wav").exists()

    def test_missing_input_exit_2(self, tmp_path, capsys):
        code, _, stderr = run(
            capsys, "augment", str(tmp_path / "nope.wav"), str(tmp_path / "o.wav")
        )
        assert code == 2
        assert stderr.startswith("vicaug: error:")
