"""Self-contained reproduction runs on synthetic corpora.

Each experiment generates its own images from ``seed``, runs per-image SOMs
with the default training hyperparameters, and checks a direction claim:

``lesion_growth``
    20 phantoms, the same phantoms with one lesion, then with two lesions.
    Mean QE must increase strictly with lesion count.
``poisson_noise``
    20 phantoms and their Poisson-noised copies. Mean QE must increase.
``random_dots``
    One dot field rendered with the target dot at 100/105/110/130% size.
    QE (mean over repeats) must increase strictly with size.

The absolute QE values of the original study cannot be reproduced because
its images are not available; only these orderings are checked.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .fixtures import paper_fixture
from .imageio import FeatureMode
from .series import QeSeriesReport, compare_series, evaluate_images, write_outputs
from .som import TrainConfig
from .stats import StatResult, detectability
from .synth import (DotFieldSpec, LesionSpec, PhantomSpec, add_poisson_noise,
                    generate_dot_field, inject_lesion, phantom)

EXPERIMENTS = ("lesion_growth", "poisson_noise", "random_dots")
DEFAULT_SEED = 0

# 3x3 patches: with single-pixel features a 256-node map covers every 8-bit
# gray level and the flat lesion fill costs almost nothing to represent
LESION_FEATURE = FeatureMode("patch", 3)
NOISE_FEATURE = FeatureMode("pixel")
# dot fields hold two gray levels only, so pixel features give QE ~ 0
DOTS_FEATURE = FeatureMode("patch", 5)
DOTS_SPEC = DotFieldSpec(width=96, height=96, n_dots=4, base_radius=10.0)
DOT_SCALES = (1.00, 1.05, 1.10, 1.30)


@dataclass
class ReproReport:
    name: str
    seed: int
    passed: bool
    series: dict[str, QeSeriesReport]
    tests: dict[str, StatResult] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)

    @property
    def means(self) -> dict[str, float]:
        return {k: r.summary[0] for k, r in self.series.items()}

    def to_text(self) -> str:
        head = [f"experiment: {self.name}", f"seed: {self.seed}",
                f"result: {'PASS' if self.passed else 'FAIL'}", ""]
        return "\n".join(head + self.lines) + "\n"

    def to_csv(self) -> str:
        labels = list(self.series)
        n = len(self.series[labels[0]].entries)
        rows = ["index," + ",".join(labels)]
        for i in range(n):
            rows.append(f"{i + 1}," + ",".join(f"{self.series[k].entries[i].qe:.4f}" for k in labels))
        return "\n".join(rows) + "\n"

    def write(self, out_dir: str | os.PathLike) -> list[Path]:
        from .plotting import emit_plot

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for suffix, content in ((".txt", self.to_text()), (".csv", self.to_csv())):
            p = out / f"{self.name}{suffix}"
            p.write_text(content)
            paths.append(p)
        p = out / f"{self.name}.svg"
        xlabel = "target dot scale index" if self.name == "random_dots" else "image index"
        emit_plot(self.series, p, title=self.name.replace("_", " "), xlabel=xlabel)
        paths.append(p)
        for label, rep in self.series.items():
            paths += write_outputs(rep, out / "series", stem=f"{self.name}.{label}", plot=False,
                                   save_maps=False)
        return paths


def _strictly_increasing(values) -> bool:
    return all(a < b for a, b in zip(values, values[1:]))


def _mean_lines(report: ReproReport) -> list[str]:
    lines = [f"{'series':<12} {'mean QE':>12} {'sd':>10} {'sem':>10}"]
    for label, rep in report.series.items():
        m, sd, sem = rep.summary
        lines.append(f"{label:<12} {m:12.4f} {sd:10.4f} {sem:10.4f}")
    return lines


def lesion_growth(seed: int = DEFAULT_SEED, n_images: int = 20, size: int = 128,
                  train: TrainConfig = TrainConfig(), feature: FeatureMode = LESION_FEATURE,
                  workers: int = 1) -> ReproReport:
    train = replace(train, seed=seed)
    first = LesionSpec(center=(size // 2 - 24, size // 2))
    second = LesionSpec(center=(size // 2 + 24, size // 2))
    base = [phantom(PhantomSpec(size, size), seed * 1000 + i) for i in range(n_images)]
    one = [inject_lesion(img, first) for img in base]
    two = [inject_lesion(img, second) for img in one]
    ids = [f"phantom {i + 1:04d}" for i in range(n_images)]
    config = {"experiment": "lesion_growth", "seed": seed, "size": size,
              "lesions": [asdict(first), asdict(second)], "feature": asdict(feature),
              "train": train.to_dict(), "train_mode": "per_image"}
    series = {label: evaluate_images(imgs, ids, train, feature, workers=workers, config=config)
              for label, imgs in (("original", base), ("lesion_1", one), ("lesions_2", two))}
    rep = ReproReport("lesion_growth", seed, False, series)
    means = list(rep.means.values())
    rep.passed = _strictly_increasing(means)
    rep.tests = {"original_vs_lesion_1": compare_series(series["lesion_1"], series["original"]),
                 "original_vs_lesions_2": compare_series(series["lesions_2"], series["original"])}
    rep.lines = _mean_lines(rep) + [""]
    rep.lines += [f"{k}: {v.describe()}" for k, v in rep.tests.items()]
    rep.lines += ["", f"mean QE strictly increasing with lesion count: {rep.passed}"]
    return rep


def poisson_noise(seed: int = DEFAULT_SEED, n_images: int = 20, size: int = 128,
                  train: TrainConfig = TrainConfig(), feature: FeatureMode = NOISE_FEATURE,
                  workers: int = 1) -> ReproReport:
    train = replace(train, seed=seed)
    base = [phantom(PhantomSpec(size, size), seed * 1000 + i) for i in range(n_images)]
    noisy = [add_poisson_noise(img, seed * 1000 + i) for i, img in enumerate(base)]
    ids = [f"phantom {i + 1:04d}" for i in range(n_images)]
    config = {"experiment": "poisson_noise", "seed": seed, "size": size,
              "feature": asdict(feature), "train": train.to_dict(), "train_mode": "per_image"}
    series = {label: evaluate_images(imgs, ids, train, feature, workers=workers, config=config)
              for label, imgs in (("clean", base), ("noised", noisy))}
    rep = ReproReport("poisson_noise", seed, False, series)
    clean, noised = series["clean"].qes, series["noised"].qes
    rep.passed = rep.means["noised"] > rep.means["clean"]
    rep.tests = {"clean_vs_noised": compare_series(series["noised"], series["clean"])}
    higher = sum(n > c for c, n in zip(clean, noised))
    rep.lines = _mean_lines(rep) + [
        "", f"clean_vs_noised: {rep.tests['clean_vs_noised'].describe()}",
        f"images with noised QE > clean QE: {higher}/{len(clean)}",
        "", f"mean QE higher after noise: {rep.passed}"]
    return rep


def random_dots(seed: int = DEFAULT_SEED, repeats: int = 5, spec: DotFieldSpec = DOTS_SPEC,
                train: TrainConfig = TrainConfig(), feature: FeatureMode = DOTS_FEATURE,
                workers: int = 1) -> ReproReport:
    train = replace(train, seed=seed)
    images = [generate_dot_field(replace(spec, scale=s), seed) for s in DOT_SCALES]
    ids = [f"scale {s:.2f}" for s in DOT_SCALES]
    config = {"experiment": "random_dots", "seed": seed, "dots": asdict(spec),
              "scales": list(DOT_SCALES), "repeats": repeats, "feature": asdict(feature),
              "train": train.to_dict(), "train_mode": "per_image"}
    report = evaluate_images(images, ids, train, feature, repeats=repeats, workers=workers,
                             config=config)
    rep = ReproReport("random_dots", seed, _strictly_increasing(report.qes), {"dots": report})

    t7 = paper_fixture("T7")
    lines = [f"{'increase':<10} {'QE (this run)':>14} {'QE (published)':>15} "
             f"{'CP-FP 5s':>9} {'CP-FP self':>10}"]
    for entry, row in zip(report.entries, t7.rows):
        label, qe_pub, cp5, fp5, cpo, fpo = row
        d5 = "" if cp5 is None else f"{detectability(cp5, fp5):.1f}"
        do = "" if cpo is None else f"{detectability(cpo, fpo):.1f}"
        lines.append(f"{label:<10} {entry.qe:14.4f} {qe_pub:15.4f} {d5:>9} {do:>10}")
    lines += ["", f"QE strictly increasing with target dot size: {rep.passed}"]
    rep.lines = lines
    return rep


def run(name: str, seed: int = DEFAULT_SEED, workers: int = 1, **kwargs) -> ReproReport:
    funcs = {"lesion_growth": lesion_growth, "poisson_noise": poisson_noise,
             "random_dots": random_dots}
    if name not in funcs:
        raise ValueError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    return funcs[name](seed=seed, workers=workers, **kwargs)
