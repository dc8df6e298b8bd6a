"""Monte Carlo sweeps, records, summaries and plots."""
from .analysis import logistic_fit, loglog_slope, summarize
from .config import ESTIMATORS, ExperimentConfig, sigma_scale
from .instance import (
    Instance,
    read_candidate,
    read_instance,
    write_candidate,
    write_instance,
)
from .plots import emit_plots
from .records import (
    COLUMNS,
    SCHEMA_VERSION,
    RecordWriter,
    TrialRecord,
    parse_records,
    read_records,
    write_records,
)
from .runner import run_cell_trial, run_sweep, run_trial, trial_seed
