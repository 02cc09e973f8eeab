"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 I/O or format error,
3 reproduction assertion failure.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import reproduce as repro
from . import som
from .errors import FormatError, ReproductionError
from .fixtures import TABLE_IDS, paper_fixture
from .imageio import FeatureMode, extract_samples, read_image, write_image
from .persist import load_map, save_map
from .series import QeSeriesReport, SeriesConfig, compare_series, run_series, write_outputs
from .stats import CSV_HEADER, StatResult, one_way_anova, two_sample_t
from . import synth

EXIT_USAGE, EXIT_IO, EXIT_REPRO = 1, 2, 3


def _parse_map_size(text: str) -> tuple[int, int]:
    try:
        r, c = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"expected RxC, got {text!r}") from None
    return r, c


def train_options(fn):
    opts = [
        click.option("--map", "map_size", default="16x16", show_default=True, help="Map size RxC."),
        click.option("--radius", default=5.0, show_default=True, help="Initial neighborhood radius."),
        click.option("--radius-final", default=1.0, show_default=True),
        click.option("--alpha", default=0.2, show_default=True, help="Initial learning rate."),
        click.option("--alpha-final", default=0.01, show_default=True),
        click.option("--iters", default=10000, show_default=True, help="Training iterations."),
        click.option("--neighborhood", type=click.Choice(som.NEIGHBORHOODS), default="gaussian",
                     show_default=True),
        click.option("--topology", type=click.Choice(som.TOPOLOGIES), default="rectangular",
                     show_default=True),
        click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1)),
        click.option("--feature", default="pixel", show_default=True, help="pixel or patch:K."),
        click.option("--normalize", type=click.Choice(["none", "unit_range"]), default="none",
                      show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _configs(kw) -> tuple[som.TrainConfig, FeatureMode]:
    rows, cols = _parse_map_size(kw.pop("map_size"))
    try:
        cfg = som.TrainConfig(rows=rows, cols=cols, radius0=kw.pop("radius"),
                              radius_final=kw.pop("radius_final"), alpha0=kw.pop("alpha"),
                              alpha_final=kw.pop("alpha_final"), iterations=kw.pop("iters"),
                              neighborhood=kw.pop("neighborhood"), topology=kw.pop("topology"),
                              seed=kw.pop("seed"))
        feature = FeatureMode.parse(kw.pop("feature"), kw.pop("normalize"))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    return cfg, feature


@click.group()
def cli():
    """Quantization-error change detection with self-organizing maps."""


@cli.command()
@click.argument("image", type=click.Path(dir_okay=False))
@train_options
@click.option("--out", type=click.Path(dir_okay=False), help="Write the trained map (SOMQE1).")
def train(image, out, **kw):
    """Train a map on IMAGE and print its QE."""
    cfg, feature = _configs(kw)
    x = extract_samples(read_image(image), feature)
    m = som.train(cfg, x)
    if out:
        save_map(m, out)
    click.echo(f"{som.quantization_error(m, x):.4f}")


@cli.command()
@click.argument("images", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option("--som", "som_path", required=True, type=click.Path(dir_okay=False),
              help="Map file written by `train --out`.")
@click.option("--feature", default="pixel", show_default=True)
@click.option("--normalize", type=click.Choice(["none", "unit_range"]), default="none")
@click.option("--topology", type=click.Choice(som.TOPOLOGIES), default="rectangular")
def qe(images, som_path, feature, normalize, topology):
    """QE of IMAGES against a saved map."""
    m = load_map(som_path, topology)
    mode = FeatureMode.parse(feature, normalize)
    for path in images:
        click.echo(f"{path}\t{som.quantization_error(m, extract_samples(read_image(path), mode)):.4f}")


@cli.command()
@click.argument("images", nargs=-1, type=click.Path(dir_okay=False))
@train_options
@click.option("--mode", type=click.Choice(["per-image", "reference"]), default="per-image",
              show_default=True)
@click.option("--repeats", default=1, show_default=True, type=click.IntRange(1))
@click.option("--workers", default=1, show_default=True, type=click.IntRange(1))
@click.option("--from-config", type=click.Path(dir_okay=False),
              help="Re-run a series from its echoed .config.json (other options ignored).")
@click.option("--out", type=click.Path(file_okay=False), help="Directory for CSV/TXT/SVG/maps.")
@click.option("--no-maps", is_flag=True, help="Do not write SOMQE1 map files.")
def series(images, mode, repeats, workers, from_config, out, no_maps, **kw):
    """One QE per image over an ordered series."""
    if from_config:
        cfg = SeriesConfig.from_dict(json.loads(Path(from_config).read_text()))
    else:
        if not images:
            raise click.UsageError("give at least one image")
        train_cfg, feature = _configs(kw)
        cfg = SeriesConfig(list(images), train_cfg, feature, mode.replace("-", "_"), repeats)
    report = run_series(cfg, workers=workers)
    if out:
        write_outputs(report, out, save_maps=not no_maps)
    click.echo(report.to_text(), nl=False)


def _read_report(path) -> QeSeriesReport:
    try:
        return QeSeriesReport.from_csv(Path(path).read_text())
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def _emit_stat(res: StatResult, out):
    click.echo(res.describe())
    if out:
        Path(out).write_text(CSV_HEADER + "\n" + res.csv_row() + "\n")


@cli.command()
@click.argument("a", type=click.Path(dir_okay=False))
@click.argument("b", type=click.Path(dir_okay=False))
@click.option("--welch", is_flag=True, help="Unequal-variance t instead of pooled.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write kind,statistic,df1,df2,p CSV.")
def compare(a, b, welch, out):
    """t-test of series B against series A (QE CSV reports)."""
    ra, rb = _read_report(a), _read_report(b)
    _emit_stat(compare_series(rb, ra, pooled=not welch), out)


def _read_groups(path) -> tuple[list[str], list[list[float]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise FormatError(f"{path}: need a header row and data")
    header = rows[0]
    groups = [[] for _ in header]
    for lineno, row in enumerate(rows[1:], start=2):
        for j, cell in enumerate(row[:len(header)]):
            if cell.strip():
                try:
                    groups[j].append(float(cell))
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: not a number: {cell!r}") from None
    return header, groups


@cli.group()
def stats():
    """Statistics on group CSVs (one column per group, header row)."""


@stats.command("ttest")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--welch", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False))
def stats_ttest(path, welch, out):
    """Two-sample t-test of the first two columns (first minus second)."""
    header, groups = _read_groups(path)
    if len(groups) < 2:
        raise click.UsageError("t-test needs two columns")
    _emit_stat(two_sample_t(groups[0], groups[1], pooled=not welch), out)


@stats.command("anova")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
def stats_anova(path, out):
    """One-way ANOVA over all columns."""
    _, groups = _read_groups(path)
    _emit_stat(one_way_anova(groups), out)


@cli.group()
def fixtures():
    """Published result tables."""


@fixtures.command("dump")
@click.argument("table_id", type=click.Choice(TABLE_IDS, case_sensitive=False))
def fixtures_dump(table_id):
    """Print table T1..T7 as CSV."""
    click.echo(paper_fixture(table_id).to_csv(), nl=False)


def _write_manifest(path: Path, fields: dict) -> None:
    lines = [f"{k}={v}" for k, v in fields.items()]
    Path(str(path) + ".manifest").write_text("\n".join(lines) + "\n")


@cli.group("synth")
def synth_group():
    """Generate manipulated images (PGM plus a key=value manifest)."""


def _parse_pair(text, name) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise click.BadParameter(f"{name} must be A,B integers, got {text!r}") from None
    return a, b


@synth_group.command("lesion")
@click.argument("image", type=click.Path(dir_okay=False))
@click.option("--center", required=True, help="X,Y pixel centre.")
@click.option("--a", "semi_a", default=22, show_default=True, help="Horizontal semi-axis (px).")
@click.option("--b", "semi_b", default=13, show_default=True, help="Vertical semi-axis (px).")
@click.option("--pattern", type=click.Choice(["checker2", "solid"]), default="checker2")
@click.option("--levels", default="96,160", show_default=True, help="Two gray levels.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def synth_lesion(image, center, semi_a, semi_b, pattern, levels, out):
    """Inject an elliptical lesion into a grayscale IMAGE."""
    try:
        spec = synth.LesionSpec(_parse_pair(center, "center"), semi_a, semi_b, pattern,
                                _parse_pair(levels, "levels"))
        img = synth.inject_lesion(read_image(image), spec)
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise click.UsageError(str(exc)) from None
    write_image(img, out)
    _write_manifest(Path(out), {"source": image, **spec.manifest()})


@synth_group.command("noise")
@click.argument("image", type=click.Path(dir_okay=False))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def synth_noise(image, seed, out):
    """Replace every pixel by a Poisson draw with that pixel's mean."""
    write_image(synth.add_poisson_noise(read_image(image), seed), out)
    _write_manifest(Path(out), {"kind": "poisson", "source": image, "seed": seed,
                                "knuth_limit": synth.KNUTH_LIMIT})


@synth_group.command("dots")
@click.option("--size", default="512x512", show_default=True, help="WxH.")
@click.option("--n-dots", default=50, show_default=True)
@click.option("--radius", default=5.0, show_default=True)
@click.option("--background", default=255, show_default=True)
@click.option("--michelson", default=0.7, show_default=True)
@click.option("--target", default=0, show_default=True, help="Index of the scaled dot.")
@click.option("--scale", default=1.0, show_default=True)
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def synth_dots(size, n_dots, radius, background, michelson, target, scale, seed, out):
    """Random-dot field with one dot enlarged by SCALE."""
    w, h = _parse_map_size(size)
    try:
        spec = synth.DotFieldSpec(w, h, n_dots, radius, background, michelson, target, scale)
        img = synth.generate_dot_field(spec, seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    write_image(img, out)
    _write_manifest(Path(out), {**spec.manifest(), "seed": seed})


@synth_group.command("phantom")
@click.option("--size", default=128, show_default=True)
@click.option("--seed", default=0, show_default=True, type=click.IntRange(0, 2**64 - 1))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def synth_phantom(size, seed, out):
    """Smooth organ-like base image for lesion and noise experiments."""
    write_image(synth.phantom(synth.PhantomSpec(size, size), seed), out)
    _write_manifest(Path(out), {"kind": "phantom", "size": size, "seed": seed})


@cli.command("reproduce")
@click.argument("name", type=click.Choice(repro.EXPERIMENTS))
@click.option("--seed", default=repro.DEFAULT_SEED, show_default=True, type=click.IntRange(0))
@click.option("--workers", default=1, show_default=True, type=click.IntRange(1))
@click.option("--out", type=click.Path(file_okay=False), help="Directory for TXT/CSV/SVG.")
def reproduce_cmd(name, seed, workers, out):
    """Run a synthetic reproduction; exit 3 if its ordering check fails."""
    rep = repro.run(name, seed=seed, workers=workers)
    if out:
        rep.write(out)
    click.echo(rep.to_text(), nl=False)
    if not rep.passed:
        raise ReproductionError(f"{name} failed its ordering check for seed {seed}")


@cli.command()
@click.argument("reports", nargs=-1, required=True, type=click.Path(dir_okay=False))
@click.option("--title", default="")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def plot(reports, title, out):
    """SVG chart of QE against image index, one line per CSV report."""
    from .plotting import emit_plot

    emit_plot({Path(p).stem: _read_report(p) for p in reports}, out, title=title)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="somqe", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_IO
    except ReproductionError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_REPRO
    except (FormatError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_IO
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
