"""Trial records and the versioned ``records.csv`` format.

The file starts with a ``# schema_version=1`` comment line followed by a
header row. Floats are written with ``repr`` (shortest round-trip form),
booleans as ``true``/``false``, missing values as empty cells.
"""
import csv
import io
import math
from dataclasses import dataclass, fields

from ..errors import RecordParseError

SCHEMA_VERSION = 1
SCHEMA_LINE = f"# schema_version={SCHEMA_VERSION}"


@dataclass
class TrialRecord:
    n: int
    sigma: float
    sigma_rel: float
    sigma_index: int
    trial: int
    seed: int
    noise_kind: str
    estimator: str
    status: str = "ok"
    l2_err: float | None = None
    linf_err: float | None = None
    iterations: int | None = None
    converged: bool | None = None
    cert_psd: bool | None = None
    cert_rank_ok: bool | None = None
    lambda2: float | None = None
    kernel_residual: float | None = None
    contraction_max: float | None = None
    region_n1_max: float | None = None
    region_n2_max: float | None = None
    proximity_max: float | None = None
    wallclock_ms: float | None = None

    @property
    def ok(self):
        return self.status == "ok"

    @property
    def cell(self):
        return (self.n, self.sigma_index, self.estimator)


COLUMNS = [f.name for f in fields(TrialRecord)]
_TYPES = {f.name: f.type for f in fields(TrialRecord)}


def _kind(name):
    t = _TYPES[name]
    t = t if isinstance(t, str) else getattr(t, "__name__", str(t))
    for base in ("bool", "int", "float", "str"):
        if t.startswith(base):
            return base
    raise AssertionError(t)


_KINDS = {name: _kind(name) for name in COLUMNS}


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(name, text, line):
    kind = _KINDS[name]
    if text == "":
        if kind == "str":
            return ""
        return None
    try:
        if kind == "bool":
            if text not in ("true", "false"):
                raise ValueError(text)
            return text == "true"
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
    except ValueError:
        raise RecordParseError(f"bad {kind} value {text!r} in column {name!r}", line) from None
    return text


def record_row(rec):
    return [format_value(getattr(rec, c)) for c in COLUMNS]


class RecordWriter:
    """Appends records to ``records.csv`` and flushes after each row."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="", encoding="utf-8")
        self._fh.write(SCHEMA_LINE + "\n")
        self._csv = csv.writer(self._fh, lineterminator="\n")
        self._csv.writerow(COLUMNS)
        self._fh.flush()

    def write(self, rec):
        self._csv.writerow(record_row(rec))
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_records(path, records):
    with RecordWriter(path) as w:
        for rec in records:
            w.write(rec)


def parse_records(text):
    """Parse the contents of a records.csv file into TrialRecords."""
    lines = text.splitlines()
    if not lines:
        raise RecordParseError("empty file: missing schema line", 1)
    if lines[0].strip() != SCHEMA_LINE:
        raise RecordParseError(f"expected {SCHEMA_LINE!r}, got {lines[0]!r}", 1)
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    try:
        header = next(reader)
    except StopIteration:
        raise RecordParseError("missing header row", 2) from None
    if header != COLUMNS:
        missing = sorted(set(COLUMNS) - set(header))
        extra = sorted(set(header) - set(COLUMNS))
        raise RecordParseError(f"header mismatch (missing {missing}, unexpected {extra})", 2)
    out = []
    for offset, row in enumerate(reader):
        line = offset + 3
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise RecordParseError(f"expected {len(COLUMNS)} fields, got {len(row)}", line)
        values = {c: _parse_value(c, v, line) for c, v in zip(COLUMNS, row)}
        for key in ("n", "sigma", "sigma_index", "trial", "seed"):
            if values[key] is None:
                raise RecordParseError(f"column {key!r} is required", line)
        out.append(TrialRecord(**values))
    return out


def read_records(path):
    with open(path, encoding="utf-8") as fh:
        return parse_records(fh.read())


def finite_or_none(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None
