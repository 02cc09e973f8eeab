import json

import pytest

from somqe.cli import main
from somqe.fixtures import paper_fixture
from somqe.imageio import read_image, write_image
from somqe.persist import load_map
from somqe.synth import PhantomSpec, phantom

FAST = ["--map", "4x4", "--iters", "500"]


@pytest.fixture
def images(tmp_path):
    paths = []
    for i in range(3):
        p = tmp_path / f"p{i}.pgm"
        write_image(phantom(PhantomSpec(48, 48), i), p)
        paths.append(str(p))
    return paths


def test_train_and_qe(images, tmp_path, capsys):
    m = tmp_path / "m.somqe"
    assert main(["train", images[0], *FAST, "--out", str(m)]) == 0
    trained = float(capsys.readouterr().out)
    assert load_map(m).rows == 4
    assert main(["qe", "--som", str(m), *images]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    assert float(lines[0].split("\t")[1]) == pytest.approx(trained, abs=1e-4)


def test_series_writes_outputs_and_reruns(images, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["series", *images, *FAST, "--seed", "5", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "train.seed = 5" in text
    csv1 = (out / "series.csv").read_text()
    assert csv1.splitlines()[0] == "index,image,qe"
    assert len(csv1.splitlines()) == 4
    assert (out / "series.svg").exists() and (out / "series.map003.somqe").exists()

    out2 = tmp_path / "rerun"
    assert main(["series", "--from-config", str(out / "series.config.json"), "--out", str(out2)]) == 0
    assert (out2 / "series.csv").read_text() == csv1
    assert (out2 / "series.map001.somqe").read_bytes() == (out / "series.map001.somqe").read_bytes()


def test_series_reference_mode(images, tmp_path, capsys):
    out = tmp_path / "ref"
    assert main(["series", images[0], images[0], *FAST, "--mode", "reference", "--out", str(out)]) == 0
    rows = (out / "series.csv").read_text().splitlines()[1:]
    assert rows[0].split(",")[2] == rows[1].split(",")[2]
    assert not (out / "series.map002.somqe").exists()
    cfg = json.loads((out / "series.config.json").read_text())
    assert cfg["train_mode"] == "reference"


def test_compare_fixture_tables(tmp_path, capsys):
    t1 = paper_fixture("T1")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path, col in ((a, "qe_1st"), (b, "qe_2nd")):
        rows = ["index,image,qe"] + [f"{i},{i},{v}" for i, v in enumerate(t1.column(col), 1)]
        path.write_text("\n".join(rows) + "\n")
    out = tmp_path / "t.csv"
    assert main(["compare", str(a), str(b), "--out", str(out)]) == 0
    kind, stat, df1, df2, p = out.read_text().splitlines()[1].split(",")
    assert kind == "t_test" and float(df2) == 38
    assert float(stat) == pytest.approx(3.336, abs=0.01)
    assert float(p) < 0.01
    assert "t(38)" in capsys.readouterr().out


def test_stats_commands(tmp_path, capsys):
    p = tmp_path / "g.csv"
    p.write_text("a,b,c\n1,4,7\n2,5,8\n3,6,9\n")
    out = tmp_path / "f.csv"
    assert main(["stats", "anova", str(p), "--out", str(out)]) == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[0] == "anova"
    assert [float(v) for v in row[1:4]] == [27.0, 2.0, 6.0]
    assert main(["stats", "ttest", str(p)]) == 0
    assert "t(4)" in capsys.readouterr().out


def test_fixtures_dump(capsys):
    assert main(["fixtures", "dump", "t2"]) == 0
    out = capsys.readouterr().out
    assert out == paper_fixture("T2").to_csv()
    assert main(["fixtures", "dump", "T9"]) == 1


def test_synth_commands_write_manifests(images, tmp_path):
    les = tmp_path / "l.pgm"
    assert main(["synth", "lesion", images[0], "--center", "24,24", "--a", "10", "--b", "6",
                 "--out", str(les)]) == 0
    manifest = (tmp_path / "l.pgm.manifest").read_text()
    assert "semi_axis_a=10" in manifest and "center=24,24" in manifest.replace(" ", "")
    assert read_image(les) != read_image(images[0])

    noise = tmp_path / "n.pgm"
    assert main(["synth", "noise", images[0], "--seed", "4", "--out", str(noise)]) == 0
    assert "seed=4" in (tmp_path / "n.pgm.manifest").read_text()

    dots = tmp_path / "d.pgm"
    assert main(["synth", "dots", "--size", "96x96", "--n-dots", "4", "--radius", "8",
                 "--out", str(dots)]) == 0
    assert read_image(dots).width == 96

    ph = tmp_path / "ph.pgm"
    assert main(["synth", "phantom", "--size", "32", "--out", str(ph)]) == 0
    assert read_image(ph).height == 32


def test_plot_command(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("index,image,qe\n1,x,1.0\n2,y,2.0\n")
    out = tmp_path / "a.svg"
    assert main(["plot", str(a), "--out", str(out)]) == 0
    assert out.read_text().lstrip().startswith("<?xml")


# --- exit codes ---------------------------------------------------------------------

def test_usage_errors_exit_1(images, tmp_path):
    assert main(["train", images[0], "--map", "sixteen"]) == 1
    assert main(["train", images[0], "--feature", "patch:4"]) == 1
    assert main(["train", images[0], "--radius", "0.5", "--radius-final", "1.0"]) == 1
    assert main(["series"]) == 1
    assert main(["nosuchcommand"]) == 1
    assert main(["synth", "lesion", images[0], "--center", "0,0", "--out",
                 str(tmp_path / "x.pgm")]) == 1


def test_io_errors_exit_2(tmp_path):
    assert main(["train", str(tmp_path / "missing.pgm")]) == 2
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P5\n2 2\n300\n")
    assert main(["train", str(bad)]) == 2
    bad_csv = tmp_path / "r.csv"
    bad_csv.write_text("a,b\n1,2\n")
    assert main(["compare", str(bad_csv), str(bad_csv)]) == 2
    assert main(["qe", "--som", str(bad), str(bad)]) == 2


def test_reproduction_failure_exits_3(monkeypatch):
    from somqe import reproduce

    class Failed:
        passed = False

        def to_text(self):
            return "result: FAIL\n"

    monkeypatch.setattr(reproduce, "run", lambda *a, **k: Failed())
    assert main(["reproduce", "poisson_noise"]) == 3


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "series" in capsys.readouterr().out
