import json
import math

import numpy as np
import pytest

from fracstab.cli import EXIT_DISCORDANT, EXIT_IO, EXIT_OK, EXIT_USAGE, main


def read_ppm(path):
    """Parse a binary P6 file back into an array with row 0 at the bottom."""
    data = path.read_bytes()
    assert data.startswith(b"P6\n")
    # header = magic, width, height, maxval, one whitespace byte, then pixels
    tokens, pos, start = [], 3, 3
    while len(tokens) < 3:
        if data[pos : pos + 1].isspace():
            if start < pos:
                tokens.append(int(data[start:pos]))
            start = pos + 1
        pos += 1
    w, h, maxval = tokens
    assert maxval == 255
    img = np.frombuffer(data[pos:], dtype=np.uint8).reshape(h, w, 3)
    return img[::-1]


def read_csv(path):
    lines = path.read_text(encoding="utf-8").strip().splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


class TestDomainCommand:
    def test_outputs_and_schemas(self, tmp_path):
        out = tmp_path / "dom.ppm"
        assert main(["domain", "--q", "0.5", "--size", "96x96", "--out", str(out)]) == EXIT_OK
        img = read_ppm(out)
        assert img.shape == (96, 96, 3)
        header, rows = read_csv(tmp_path / "dom.boundary.csv")
        assert header == ["theta", "x", "y"]
        assert len(rows) == 1024
        header, rows = read_csv(tmp_path / "dom.rays.csv")
        assert header == ["ray", "t", "x", "y"]
        assert len(rows) == 4

    def test_csv_round_trips_exactly(self, tmp_path):
        out = tmp_path / "dom.ppm"
        main(["domain", "--q", "0.37", "--size", "16x16", "--samples", "64", "--out", str(out)])
        path = tmp_path / "dom.boundary.csv"
        _, rows = read_csv(path)
        text = path.read_text(encoding="utf-8")
        rebuilt = "theta,x,y\n" + "\n".join(
            ",".join(f"{v:.17g}" for v in row) for row in rows
        ) + "\n"
        assert text == rebuilt

    @pytest.mark.parametrize("q, expect_white", [(0.5, True), (0.8, True)])
    def test_white_region_lies_inside_the_sector(self, tmp_path, q, expect_white):
        out = tmp_path / "dom.ppm"
        window = (-2.2, 2.2, -2.2, 2.2)
        main(["domain", "--q", str(q), "--size", "128x128", "--out", str(out)])
        img = read_ppm(out)
        white = np.all(img == 255, axis=2)
        assert white.any() == expect_white
        xs = window[0] + (window[1] - window[0]) * (np.arange(128) + 0.5) / 128
        ys = window[2] + (window[3] - window[2]) * (np.arange(128) + 0.5) / 128
        angles = np.abs(np.arctan2(ys[:, None], xs[None, :]))
        assert np.all(angles[white] < q * math.pi / 2 + 1e-12)
        green = np.all(img == np.array([0, 168, 0]), axis=2)
        assert green.any()

    def test_restricted_policy_has_no_white_region(self, tmp_path):
        out = tmp_path / "dom.ppm"
        main(["domain", "--q", "0.8", "--size", "64x64", "--policy", "restricted",
              "--out", str(out)])
        img = read_ppm(out)
        assert not np.all(img == 255, axis=2).any()

    def test_invalid_order_is_a_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["domain", "--q", "1.5", "--out", str(tmp_path / "x.ppm")])
        assert err.value.code == EXIT_USAGE

    def test_unwritable_path_is_an_io_error(self):
        code = main(["domain", "--q", "0.5", "--size", "8x8",
                     "--out", "/nonexistent-dir/x.ppm"])
        assert code == EXIT_IO


class TestMandelbrotCommand:
    def test_outputs_manifest_and_overlay(self, tmp_path):
        out = tmp_path / "set.ppm"
        code = main(["mandelbrot", "--q", "0.85", "--size", "48x32", "--iters", "80",
                     "--overlay", "gamma", "--out", str(out)])
        assert code == EXIT_OK
        assert read_ppm(out).shape == (32, 48, 3)
        header, rows = read_csv(tmp_path / "set.overlay.csv")
        assert header == ["theta", "cx", "cy"]
        assert len(rows) == 1024
        manifest = [json.loads(line) for line in
                    (tmp_path / "set.manifest.jsonl").read_text().splitlines()]
        assert manifest[0]["event"] == "config"
        assert manifest[0]["map"] == "fractional"
        assert manifest[1]["event"] == "result"
        assert manifest[1]["pixels"] == 48 * 32

    def test_order_one_renders_the_classic_set_with_cardioid(self, tmp_path):
        out = tmp_path / "classic.ppm"
        code = main(["mandelbrot", "--q", "1", "--size", "64x64", "--iters", "150",
                     "--overlay", "cardioid", "--out", str(out)])
        assert code == EXIT_OK
        manifest = [json.loads(line) for line in
                    (tmp_path / "classic.manifest.jsonl").read_text().splitlines()]
        assert manifest[0]["map"] == "classic"
        assert manifest[0]["escape"] == 2.0
        header, rows = read_csv(tmp_path / "classic.overlay.csv")
        # cusp of the main cardioid sits at theta = 0
        cusp = min(rows, key=lambda r: abs(r[0]))
        assert cusp[1] == pytest.approx(0.25, abs=1e-5)
        assert cusp[2] == pytest.approx(0.0, abs=1e-5)

    def test_single_pixel_render(self, tmp_path):
        out = tmp_path / "px.ppm"
        assert main(["mandelbrot", "--q", "0.85", "--size", "1x1", "--iters", "30",
                     "--out", str(out)]) == EXIT_OK
        assert read_ppm(out).shape == (1, 1, 3)

    def test_png_sidecar(self, tmp_path):
        out = tmp_path / "set.ppm"
        assert main(["mandelbrot", "--q", "0.85", "--size", "24x24", "--iters", "40",
                     "--png", "--out", str(out)]) == EXIT_OK
        png = tmp_path / "set.png"
        assert png.exists()
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestVerifyCommand:
    @pytest.mark.parametrize(
        "lx, ly",
        [(-0.5701, 0.3019), (0.1464, -0.2268), (0.1231, 0.5590)],
    )
    def test_reported_pipelines_are_concordant(self, lx, ly, capsys):
        code = main(["verify", "--lambda-x", str(lx), "--lambda-y", str(ly), "--q", "0.85"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "concordant       = yes" in out

    def test_magenta_report_content(self, capsys):
        main(["verify", "--lambda-x", "-0.5701", "--lambda-y", "0.3019", "--q", "0.85"])
        out = capsys.readouterr().out
        assert "stable_interior" in out
        assert "converged" in out

    def test_unachievable_tolerance_is_discordant(self, capsys):
        code = main(["verify", "--lambda-x", "-0.5701", "--lambda-y", "0.3019",
                     "--q", "0.85", "--tol", "1e-12"])
        assert code == EXIT_DISCORDANT


class TestSweepCommand:
    def test_frame_and_row_counts(self, tmp_path):
        out_dir = tmp_path / "sweep"
        code = main(["sweep", "--q-start", "0.1", "--q-end", "0.5", "--steps", "3",
                     "--size", "160x160", "--iters", "150", "--out-dir", str(out_dir)])
        assert code == EXIT_OK
        frames = sorted(out_dir.glob("frame_*.ppm"))
        assert len(frames) == 3
        header, rows = read_csv(out_dir / "coverage.csv")
        assert header == ["q", "main_body_pixels", "region_pixels", "intersection", "ratio"]
        assert len(rows) == 3
        # Coverage shrinks as the order falls below one half: with rows in
        # ascending order, the ratio column rises with q.
        ratios = [r[4] for r in rows]
        assert ratios == sorted(ratios)
        assert all(0.0 <= r <= 1.0 for r in ratios)

    def test_single_step(self, tmp_path):
        out_dir = tmp_path / "single"
        code = main(["sweep", "--q-start", "0.4", "--q-end", "0.9", "--steps", "1",
                     "--size", "96x96", "--iters", "100", "--out-dir", str(out_dir)])
        assert code == EXIT_OK
        assert len(list(out_dir.glob("frame_*.ppm"))) == 1
        _, rows = read_csv(out_dir / "coverage.csv")
        assert len(rows) == 1
        assert rows[0][0] == pytest.approx(0.4)


class TestSimulateCommand:
    def test_zero_matrix_constant_norm(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["simulate", "--q", "0.5", "--matrix", "0,0,0,0", "--y0", "1,2",
                     "--iters", "50", "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["n", "norm", "y0", "y1"]
        assert len(rows) == 51
        norms = {r[1] for r in rows}
        assert len(norms) == 1

    def test_decaying_scalar_system(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["simulate", "--q", "0.5", "--matrix", "-0.5", "--y0", "1",
                     "--iters", "4000", "--out", str(out)])
        assert code == EXIT_OK
        report = capsys.readouterr().out
        assert "stability        = decaying" in report
        slope = float(report.split("slope ")[1].split(",")[0])
        assert -0.65 <= slope <= -0.35

    def test_unstable_scalar_system_is_flagged(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main(["simulate", "--q", "0.5", "--matrix", "-2.5", "--y0", "1",
                     "--iters", "4000", "--out", str(out)])
        assert code == EXIT_OK
        report = capsys.readouterr().out
        assert "flagged unstable" in report

    def test_dimension_mismatch_is_a_usage_error(self, tmp_path):
        code = main(["simulate", "--q", "0.5", "--matrix", "1,2,3", "--y0", "1",
                     "--out", str(tmp_path / "t.csv")])
        assert code == EXIT_USAGE
        code = main(["simulate", "--q", "0.5", "--matrix", "1,0,0,1", "--y0", "1",
                     "--out", str(tmp_path / "t.csv")])
        assert code == EXIT_USAGE


class TestAreaCommand:
    def test_methods_agree(self, tmp_path, capsys):
        out = tmp_path / "area.csv"
        code = main(["area", "--q", "0.5", "--cells", "400", "--samples", "20000",
                     "--out", str(out)])
        assert code == EXIT_OK
        header, rows = read_csv(out)
        assert header == ["q", "grid_cells", "grid_area", "green_samples", "green_area", "rel_gap"]
        (q, cells, grid_area, samples, green_area, gap) = rows[0]
        assert gap < 0.02
        assert grid_area == pytest.approx(green_area, rel=0.02)

    def test_window_must_cover_the_domain(self, tmp_path):
        # values starting with "-" need the --flag=value spelling
        code = main(["area", "--q", "1.0", "--cells", "64", "--samples", "500",
                     "--window=-1.0,1.0,-1.0,1.0", "--out", str(tmp_path / "a.csv")])
        assert code == EXIT_USAGE


class TestDeterminism:
    def test_thread_count_never_changes_outputs(self, tmp_path):
        pairs = []
        for threads in ("1", "8"):
            out = tmp_path / f"dom_t{threads}.ppm"
            main(["domain", "--q", "0.8", "--size", "160x160", "--threads", threads,
                  "--out", str(out)])
            pairs.append((out.read_bytes(),
                          (tmp_path / f"dom_t{threads}.boundary.csv").read_bytes()))
        assert pairs[0] == pairs[1]

        images = []
        for threads in ("1", "8"):
            out = tmp_path / f"set_t{threads}.ppm"
            main(["mandelbrot", "--q", "0.85", "--size", "96x96", "--iters", "120",
                  "--threads", threads, "--out", str(out)])
            images.append(out.read_bytes())
        assert images[0] == images[1]

    def test_repeat_runs_are_byte_identical(self, tmp_path):
        blobs = []
        for tag in ("a", "b"):
            out = tmp_path / f"dom_{tag}.ppm"
            main(["domain", "--q", "0.6", "--size", "64x64", "--out", str(out)])
            blobs.append(out.read_bytes() + (tmp_path / f"dom_{tag}.boundary.csv").read_bytes())
        assert blobs[0] == blobs[1]
