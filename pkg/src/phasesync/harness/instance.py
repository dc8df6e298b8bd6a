"""Plain-text instance and candidate files.

Instance layout::

    # phasesync-instance v1
    # n=4 sigma=0.5 kind=complex-gaussian seed=7
    re,im            <- n(n+1)/2 rows, upper triangle of C, row-major

Candidate layout: ``# phasesync-candidate v1`` then n ``re,im`` rows.
"""
import numpy as np

from ..errors import RecordParseError, ValidationError
from ..linalg import hermitian_from_upper
from ..model import NOISE_KINDS, sample_model

INSTANCE_MAGIC = "# phasesync-instance v1"
CANDIDATE_MAGIC = "# phasesync-candidate v1"


class Instance:
    """A measurement matrix plus the header it was generated from."""

    def __init__(self, C, sigma, kind, seed):
        self.C = C
        self.sigma = float(sigma)
        self.kind = kind
        self.seed = seed

    @property
    def n(self):
        return self.C.shape[0]

    def truth(self, rtol=1e-12):
        """Ground-truth signal, when the header regenerates this exact C.

        Returns None for hand-made files or seeds that do not reproduce C.
        """
        if self.seed is None or self.kind not in NOISE_KINDS:
            return None
        model = sample_model(self.n, self.sigma, self.kind, self.seed)
        scale = max(1.0, np.abs(self.C).max())
        if np.abs(model.C - self.C).max() > rtol * scale:
            return None
        return model.z


def _fmt(v):
    return f"{v.real!r},{v.imag!r}"


def write_instance(path, C, sigma, kind, seed):
    C = np.asarray(C, dtype=np.complex128)
    n = C.shape[0]
    rows, cols = np.triu_indices(n)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(INSTANCE_MAGIC + "\n")
        fh.write(f"# n={n} sigma={float(sigma)!r} kind={kind} seed={seed}\n")
        for v in C[rows, cols]:
            fh.write(_fmt(complex(v)) + "\n")


def _pairs(lines, first_line):
    out = np.empty(len(lines), dtype=np.complex128)
    for k, text in enumerate(lines):
        parts = text.split(",")
        if len(parts) != 2:
            raise RecordParseError(f"expected 're,im', got {text!r}", first_line + k)
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise RecordParseError(f"non-numeric entry {text!r}", first_line + k) from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise RecordParseError("non-finite entry", first_line + k)
        out[k] = complex(re, im)
    return out


def _body(text, magic):
    lines = text.splitlines()
    if not lines or lines[0].strip() != magic:
        raise RecordParseError(f"expected first line {magic!r}", 1)
    return lines


def _header(line):
    if not line.startswith("#"):
        raise RecordParseError("expected header '# n=.. sigma=.. kind=.. seed=..'", 2)
    fields = {}
    for tok in line[1:].split():
        key, sep, value = tok.partition("=")
        if not sep:
            raise RecordParseError(f"malformed header token {tok!r}", 2)
        fields[key] = value
    missing = [k for k in ("n", "sigma", "kind", "seed") if k not in fields]
    if missing:
        raise RecordParseError(f"header is missing {missing}", 2)
    try:
        n = int(fields["n"])
        sigma = float(fields["sigma"])
        seed = None if fields["seed"] in ("", "none") else int(fields["seed"])
    except ValueError as exc:
        raise RecordParseError(f"bad header value: {exc}", 2) from None
    if n < 1 or not sigma >= 0:
        raise RecordParseError("header needs n >= 1 and sigma >= 0", 2)
    return n, sigma, fields["kind"], seed


def parse_instance(text):
    lines = _body(text, INSTANCE_MAGIC)
    if len(lines) < 2:
        raise RecordParseError("missing header line", 2)
    n, sigma, kind, seed = _header(lines[1])
    rows = [ln for ln in lines[2:] if ln.strip()]
    need = n * (n + 1) // 2
    if len(rows) != need:
        raise RecordParseError(f"expected {need} entries for n={n}, got {len(rows)}", 3)
    vals = _pairs(rows, 3)
    U = np.zeros((n, n), dtype=np.complex128)
    U[np.triu_indices(n)] = vals
    if np.abs(np.diag(U).imag).max() > 0:
        raise ValidationError("diagonal entries of a Hermitian matrix must be real")
    return Instance(hermitian_from_upper(U), sigma, kind, seed)


def read_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_candidate(path, x):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CANDIDATE_MAGIC + "\n")
        for v in np.asarray(x, dtype=np.complex128):
            fh.write(_fmt(complex(v)) + "\n")


def parse_candidate(text):
    lines = _body(text, CANDIDATE_MAGIC)
    rows = [ln for ln in lines[1:] if ln.strip()]
    if not rows:
        raise RecordParseError("candidate has no entries", 2)
    return _pairs(rows, 2)


def read_candidate(path):
    with open(path, encoding="utf-8") as fh:
        return parse_candidate(fh.read())
