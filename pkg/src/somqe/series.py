"""Run a SOM over an ordered image series and collect one QE per image."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from . import som
from .imageio import FeatureMode, ImageBuffer, extract_samples, read_image
from .persist import save_map
from .stats import StatResult, describe, two_sample_t

TRAIN_MODES = ("per_image", "reference")
CSV_COLUMNS = ("index", "image", "qe")


@dataclass
class SeriesConfig:
    inputs: list[str]
    train: som.TrainConfig = field(default_factory=som.TrainConfig)
    feature: FeatureMode = field(default_factory=FeatureMode)
    train_mode: str = "per_image"
    repeats: int = 1

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("series needs at least one image")
        if self.train_mode not in TRAIN_MODES:
            raise ValueError(f"unknown train mode {self.train_mode!r}")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")

    def to_dict(self) -> dict:
        return {
            "train_mode": self.train_mode,
            "repeats": self.repeats,
            "feature": asdict(self.feature),
            "train": self.train.to_dict(),
            "inputs": [str(p) for p in self.inputs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SeriesConfig:
        return cls(inputs=list(d["inputs"]), train=som.TrainConfig(**d["train"]),
                   feature=FeatureMode(**d["feature"]), train_mode=d["train_mode"],
                   repeats=int(d["repeats"]))


@dataclass
class QeEntry:
    image: str
    qe: float
    qe_sd: float = 0.0


@dataclass
class QeSeriesReport:
    entries: list[QeEntry]
    config: dict = field(default_factory=dict)
    maps: list[som.SomMap] = field(default_factory=list, repr=False, compare=False)

    @property
    def qes(self) -> list[float]:
        return [e.qe for e in self.entries]

    @property
    def summary(self) -> tuple[float, float, float]:
        """(mean, sd, sem) of the QE column."""
        return describe(self.qes)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for i, e in enumerate(self.entries, start=1):
            w.writerow([i, e.image, f"{e.qe:.4f}"])
        return buf.getvalue()

    def to_text(self) -> str:
        mean, sd, sem = self.summary
        lines = ["QE series report", "", "config:"]
        lines += [f"  {k} = {v}" for k, v in _flatten(self.config)]
        lines += ["", f"{'#':>4}  {'qe':>14}  {'sd':>10}  image"]
        for i, e in enumerate(self.entries, start=1):
            lines.append(f"{i:>4}  {e.qe:14.4f}  {e.qe_sd:10.4f}  {e.image}")
        lines += ["", f"n = {len(self.entries)}  mean = {mean:.4f}  sd = {sd:.4f}  sem = {sem:.4f}"]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> QeSeriesReport:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_COLUMNS:
            raise ValueError(f"expected CSV header {','.join(CSV_COLUMNS)}")
        entries = [QeEntry(r[1], float(r[2])) for r in rows[1:] if r]
        if not entries:
            raise ValueError("report has no entries")
        return cls(entries)


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        else:
            yield key, v


def _seed_for(train: som.TrainConfig, repeat: int) -> som.TrainConfig:
    return replace(train, seed=(train.seed + repeat) % 2**64)


def _check_consistent(images: list[ImageBuffer], ids: list[str]) -> None:
    first = images[0]
    for img, name in zip(images[1:], ids[1:]):
        if img.pixels.shape != first.pixels.shape:
            raise ValueError(
                f"{name}: dimension mismatch {img.width}x{img.height}x{img.channels}, "
                f"series uses {first.width}x{first.height}x{first.channels}")


def evaluate_images(images: list[ImageBuffer], ids: list[str], train: som.TrainConfig,
                    feature: FeatureMode = FeatureMode(), train_mode: str = "per_image",
                    repeats: int = 1, workers: int = 1, config: dict | None = None
                    ) -> QeSeriesReport:
    """QE of every image; the first repeat's map(s) are kept on the report.

    Repeat ``r`` trains with seed ``train.seed + r``; QE is the repeat mean.
    Results do not depend on ``workers``.
    """
    if not images:
        raise ValueError("series needs at least one image")
    if train_mode not in TRAIN_MODES:
        raise ValueError(f"unknown train mode {train_mode!r}")
    _check_consistent(images, ids)
    samples = [extract_samples(img, feature) for img in images]
    configs = [_seed_for(train, r) for r in range(repeats)]

    def pool_map(fn, items):
        if workers <= 1:
            return list(map(fn, items))
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))

    if train_mode == "per_image":
        def one(x):
            maps = [som.train(c, x) for c in configs]
            return maps[0], [som.quantization_error(m, x) for m in maps]
        results = pool_map(one, samples)
        kept = [m for m, _ in results]
        per_image = [q for _, q in results]
    else:
        ref_maps = pool_map(lambda c: som.train(c, samples[0]), configs)
        kept = [ref_maps[0]]
        per_image = pool_map(lambda x: [som.quantization_error(m, x) for m in ref_maps], samples)

    entries = []
    for name, qs in zip(ids, per_image):
        mean, sd, _ = describe(qs)
        entries.append(QeEntry(name, mean, sd))
    if config is None:
        config = {"train_mode": train_mode, "repeats": repeats,
                  "feature": asdict(feature), "train": train.to_dict()}
    return QeSeriesReport(entries, config, kept)


def run_series(cfg: SeriesConfig, workers: int = 1) -> QeSeriesReport:
    images = [read_image(p) for p in cfg.inputs]
    ids = [Path(p).name for p in cfg.inputs]
    return evaluate_images(images, ids, cfg.train, cfg.feature, cfg.train_mode,
                           cfg.repeats, workers, config=cfg.to_dict())


def compare_series(a: QeSeriesReport, b: QeSeriesReport, pooled: bool = True) -> StatResult:
    if not a.entries or not b.entries:
        raise ValueError("both reports need entries")
    return two_sample_t(a.qes, b.qes, pooled=pooled)


def write_outputs(report: QeSeriesReport, out_dir: str | os.PathLike, stem: str = "series",
                  save_maps: bool = True, plot: bool = True) -> list[Path]:
    """Write ``<stem>.csv``, ``.txt``, ``.config.json``, ``.svg`` and maps."""
    from .plotting import emit_plot

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for suffix, content in ((".csv", report.to_csv()), (".txt", report.to_text()),
                            (".config.json", json.dumps(report.config, indent=2, sort_keys=True) + "\n")):
        p = out / f"{stem}{suffix}"
        p.write_text(content)
        written.append(p)
    if plot:
        p = out / f"{stem}.svg"
        emit_plot({stem: report}, p)
        written.append(p)
    if save_maps:
        for i, m in enumerate(report.maps, start=1):
            p = out / f"{stem}.map{i:03d}.somqe"
            save_map(m, p)
            written.append(p)
    return written
