"""`aertools` command line: feature extraction, training, evaluation, synthetic corpora
and report conversion."""
import enum
import logging
from pathlib import Path
from typing import Optional

import typer

from .. import __project__, __version__
from ..audio.manifest import load_manifest
from ..classify.model import fit_model, save_model
from ..config import ExperimentConfig, load_config
from ..errors import ProtocolError
from ..experiment.depot import FeatureDepot
from ..experiment.protocol import SplitKind, custom_split
from ..experiment.report import ReportFormat, emit_report, load_report
from ..experiment.runner import build_depot, run_experiment, run_protocol
from ..experiment.synth import generate_synthetic, synth_spec_for, write_corpus
from ..features.fractal import FdMethod
from ..features.wavelet import WaveletFamily
from ..status import ExitCode, ExitCodes
from . import logger
from ._common import CONTEXT_SETTINGS, run, version_callback_for

log = logging.getLogger(__name__)

app = typer.Typer(
    context_settings=CONTEXT_SETTINGS,
    add_completion=False,
    help="Audio emotion recognition from wavelet sub-band fractal dimensions.",
)


class Toggle(str, enum.Enum):
    on = "on"
    off = "off"


ConfigOption = typer.Option(
    None, "--config", exists=True, dir_okay=False, help="section.key = value file."
)
ManifestOption = typer.Option(
    ..., "--manifest", exists=True, help="Manifest CSV or dataset root directory."
)
LayoutOption = typer.Option(None, "--layout", help="Manifest layout (csv, savee_dirs).")
WaveletOption = typer.Option(None, "--wavelet", case_sensitive=False)
LevelsOption = typer.Option(None, "--levels", min=1, help="Decomposition depth J.")
KmaxOption = typer.Option(None, "--kmax", min=2, help="Higuchi k_max for sub-bands.")
FdOption = typer.Option(None, "--fd", case_sensitive=False)
WorkersOption = typer.Option(None, "--workers", min=1, help="Extraction threads.")
CacheOption = typer.Option(None, "--cache", dir_okay=False, help="Feature cache CSV.")
MmcDimOption = typer.Option(None, "--mmc-dim", min=1)
KnnKOption = typer.Option(None, "--knn-k", min=1)
CascadeOption = typer.Option(None, "--cascade", case_sensitive=False)


def _experiment_config(config: Optional[Path], **overrides) -> ExperimentConfig:
    base = load_config(config) if config is not None else ExperimentConfig()
    mapping = {
        "layout": overrides.get("layout"),
        "workers": overrides.get("workers"),
        "cache": overrides.get("cache"),
        "seed": overrides.get("seed"),
        "protocol": overrides.get("protocol"),
        "wavelet.family": overrides.get("wavelet"),
        "wavelet.levels": overrides.get("levels"),
        "fd.method": overrides.get("fd"),
        "fd.k_max": overrides.get("kmax"),
        "model.mmc_dim": overrides.get("mmc_dim"),
        "model.knn_k": overrides.get("knn_k"),
        "model.cascade": overrides.get("cascade"),
    }
    if mapping["cache"] is not None:
        mapping["cache"] = str(mapping["cache"])
    if mapping["model.cascade"] is not None:
        mapping["model.cascade"] = Toggle(mapping["model.cascade"]).value
    resolved = base.with_overrides(mapping)
    for key, value in resolved.snapshot().items():
        log.debug(f"{key} = {value}")
    return resolved


@app.callback()
def main_callback(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        callback=version_callback_for(__project__, __version__),
        is_eager=True,
        help="Show the version and exit.",
    ),
    log_file: Optional[Path] = typer.Option(None, "--log-file", dir_okay=False),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log debug records."),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Log warnings and above."),
):
    logger.init(file=log_file, log_level=logger.level_for(verbose, quiet))


@app.command()
def extract(
    manifest: Path = ManifestOption,
    out: Path = typer.Option(..., "--out", dir_okay=False, help="Feature table CSV."),
    config: Optional[Path] = ConfigOption,
    layout: Optional[str] = LayoutOption,
    wavelet: Optional[WaveletFamily] = WaveletOption,
    levels: Optional[int] = LevelsOption,
    kmax: Optional[int] = KmaxOption,
    fd: Optional[FdMethod] = FdOption,
    workers: Optional[int] = WorkersOption,
) -> ExitCode:
    """Compute the feature vector of every manifest entry into a CSV table."""
    cfg = _experiment_config(
        config,
        layout=layout,
        wavelet=wavelet,
        levels=levels,
        kmax=kmax,
        fd=fd,
        workers=workers,
        cache=out,
    )
    dataset = load_manifest(manifest, cfg.layout)
    depot = build_depot(dataset, cfg)
    failed = depot.count(usage_status=FeatureDepot.Status.failed)
    if failed:
        log.warning(f"{failed} utterance(s) could not be processed")
    return ExitCodes.SUCCESS


@app.command()
def train(
    manifest: Path = ManifestOption,
    out: Path = typer.Option(..., "--out", dir_okay=False, help="Model JSON file."),
    speakers: Optional[str] = typer.Option(
        None, "--speakers", help="Comma-separated training speakers (default: all)."
    ),
    config: Optional[Path] = ConfigOption,
    layout: Optional[str] = LayoutOption,
    wavelet: Optional[WaveletFamily] = WaveletOption,
    levels: Optional[int] = LevelsOption,
    kmax: Optional[int] = KmaxOption,
    fd: Optional[FdMethod] = FdOption,
    mmc_dim: Optional[int] = MmcDimOption,
    knn_k: Optional[int] = KnnKOption,
    cascade: Optional[Toggle] = CascadeOption,
    workers: Optional[int] = WorkersOption,
    cache: Optional[Path] = CacheOption,
) -> ExitCode:
    """Fit a model on the utterances of the selected speakers."""
    cfg = _experiment_config(
        config,
        layout=layout,
        wavelet=wavelet,
        levels=levels,
        kmax=kmax,
        fd=fd,
        mmc_dim=mmc_dim,
        knn_k=knn_k,
        cascade=cascade,
        workers=workers,
        cache=cache,
    )
    dataset = load_manifest(manifest, cfg.layout)
    selected = dataset.speakers
    if speakers is not None:
        selected = tuple(s.strip() for s in speakers.split(","))
        unknown = set(selected) - set(dataset.speakers)
        if unknown:
            raise ProtocolError(f"Speakers {sorted(unknown)} are not in the manifest")
    depot = build_depot(dataset.for_speakers(selected), cfg)
    model = fit_model(depot.labelled(selected), cfg.model)
    save_model(model, out)
    return ExitCodes.SUCCESS


@app.command("eval")
def evaluate(
    manifest: Path = ManifestOption,
    protocol: Optional[SplitKind] = typer.Option(None, "--protocol"),
    train_speakers: Optional[str] = typer.Option(
        None, "--train", help="Comma-separated training speakers (custom protocol)."
    ),
    out: Optional[Path] = typer.Option(None, "--out", dir_okay=False),
    format: ReportFormat = typer.Option(ReportFormat.text, "--format"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    config: Optional[Path] = ConfigOption,
    layout: Optional[str] = LayoutOption,
    wavelet: Optional[WaveletFamily] = WaveletOption,
    levels: Optional[int] = LevelsOption,
    kmax: Optional[int] = KmaxOption,
    fd: Optional[FdMethod] = FdOption,
    mmc_dim: Optional[int] = MmcDimOption,
    knn_k: Optional[int] = KnnKOption,
    cascade: Optional[Toggle] = CascadeOption,
    workers: Optional[int] = WorkersOption,
    cache: Optional[Path] = CacheOption,
) -> ExitCode:
    """Run every split of a speaker protocol and report the results."""
    cfg = _experiment_config(
        config,
        layout=layout,
        protocol=protocol,
        seed=seed,
        wavelet=wavelet,
        levels=levels,
        kmax=kmax,
        fd=fd,
        mmc_dim=mmc_dim,
        knn_k=knn_k,
        cascade=cascade,
        workers=workers,
        cache=cache,
    )
    dataset = load_manifest(manifest, cfg.layout)
    if cfg.protocol is SplitKind.custom:
        if not train_speakers:
            raise typer.BadParameter("--train is required with --protocol custom")
        chosen = {s.strip() for s in train_speakers.split(",")}
        split = custom_split(chosen, set(dataset.speakers) - chosen)
        reports = [run_experiment(dataset, split, cfg)]
    else:
        reports = run_protocol(dataset, cfg)
    document = emit_report(reports, format, out)
    if out is None:
        typer.echo(document, nl=False)
    return ExitCodes.SUCCESS


@app.command()
def synth(
    out: Path = typer.Option(..., "--out", file_okay=False, help="Corpus directory."),
    seed: int = typer.Option(0, "--seed"),
    count: Optional[int] = typer.Option(
        None, "--count", min=2, help="Clips per class."
    ),
    length: Optional[int] = typer.Option(None, "--length", min=64),
) -> ExitCode:
    """Generate the seeded six-class fBm corpus with a `csv` manifest."""
    spec = synth_spec_for(per_class_count=count, length=length, seed=seed)
    dataset, clips = generate_synthetic(spec)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = write_corpus(dataset, clips, out)
    typer.echo(str(manifest_path))
    return ExitCodes.SUCCESS


@app.command()
def report(
    source: Path = typer.Option(..., "--input", exists=True, help="JSON report."),
    format: ReportFormat = typer.Option(ReportFormat.text, "--format"),
    out: Optional[Path] = typer.Option(None, "--out", dir_okay=False),
) -> ExitCode:
    """Re-render a JSON report as text, CSV or JSON."""
    document = emit_report(load_report(source), format, out)
    if out is None:
        typer.echo(document, nl=False)
    return ExitCodes.SUCCESS


def main():
    run(app)


if __name__ == "__main__":
    main()
