# `runner` is imported explicitly (aertools.experiment.runner): it depends on
# aertools.config, which itself imports `protocol` from this package.
from .depot import FeatureDepot, FeatureRecord
from .protocol import SplitKind, SplitProtocol, custom_split, make_splits
from .report import EvalReport, ReportFormat, emit_report, load_report
from .synth import (
    SynthClass,
    SynthSpec,
    fractional_brownian_motion,
    fractional_gaussian_noise,
    generate_synthetic,
    write_corpus,
)
