"""Shared parameter and count-table types.

The model family: allele probabilities q over A categories, optionally
extended by a "rest" class that absorbs unlisted mass, and a coancestry
(overdispersion) coefficient theta in [0, 1).  For theta > 0 the derived
Dirichlet parameters are

    alpha_a = q_a (1 - theta) / theta,

so q_a = alpha_a / alpha_total and theta = 1 / (1 + alpha_total).
theta = 0 is a distinguished state, the independent multinomial limit;
alpha does not exist there and downstream entry points dispatch to exact
multinomial/binomial formulas instead.

Everything in this module is immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

import csv
import math
import operator
from dataclasses import dataclass

PROB_SUM_TOL = 1e-12


class MdmixError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(MdmixError, ValueError):
    """A parameter lies outside its mathematical domain."""


class TableError(MdmixError, ValueError):
    """A count table or margin specification is structurally invalid."""


class SizeGuardError(MdmixError, RuntimeError):
    """An exhaustive enumeration would exceed the configured size limit."""


class FrequencyFileError(MdmixError, ValueError):
    """An allele-frequency CSV could not be parsed or validated."""


def _as_int(value, what: str):
    try:
        return operator.index(value)
    except TypeError:
        raise TableError(f"{what} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class AlleleFrequencies:
    """Allele probabilities for one locus, plus an optional rest class.

    probs holds the named alleles, each strictly positive.  If they sum to
    s < 1 and no rest_mass is given, rest_mass = 1 - s is inferred; the
    rest class behaves as an ordinary (A+1)-th category everywhere.  An
    explicit rest_mass is binding and the total must be 1 within 1e-12.
    """

    probs: tuple[float, ...]
    rest_mass: float | None = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if not probs:
            raise ParameterError("at least one allele probability is required")
        for k, p in enumerate(probs):
            if not math.isfinite(p) or p <= 0.0:
                raise ParameterError(f"probs[{k}] = {p} is not strictly positive")
        s = math.fsum(probs)
        if s > 1.0 + PROB_SUM_TOL:
            raise ParameterError(f"probabilities sum to {s} > 1")
        if self.rest_mass is None:
            rest = 1.0 - s if 1.0 - s > PROB_SUM_TOL else 0.0
        else:
            rest = float(self.rest_mass)
            if rest < 0.0:
                raise ParameterError(f"rest_mass = {rest} is negative")
            if abs(s + rest - 1.0) > PROB_SUM_TOL:
                raise ParameterError(
                    f"probs + rest_mass sum to {s + rest}, expected 1"
                )
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "rest_mass", rest)

    @property
    def has_rest(self) -> bool:
        return self.rest_mass > 0.0

    @property
    def extended_probs(self) -> tuple[float, ...]:
        """Named probabilities plus the rest class when it carries mass."""
        if self.has_rest:
            return self.probs + (self.rest_mass,)
        return self.probs

    @property
    def n_categories(self) -> int:
        return len(self.probs) + (1 if self.has_rest else 0)


@dataclass(frozen=True)
class DispersionModel:
    """theta plus the derived Dirichlet parameters over extended categories.

    Construct through theta_to_alpha() or DispersionModel.from_alpha().
    At theta = 0 alpha and alpha_total are None; q lives on in freqs.
    """

    theta: float
    freqs: AlleleFrequencies
    alpha: tuple[float, ...] | None
    alpha_total: float | None

    def __post_init__(self):
        if not (0.0 <= self.theta < 1.0):
            raise ParameterError(f"theta = {self.theta} outside [0, 1)")
        if self.theta == 0.0:
            if self.alpha is not None or self.alpha_total is not None:
                raise ParameterError("theta = 0 admits no finite alpha")
        else:
            if self.alpha is None or self.alpha_total is None:
                raise ParameterError("theta > 0 requires alpha")

    @classmethod
    def from_alpha(cls, alpha) -> "DispersionModel":
        """Recover (theta, q) from explicit Dirichlet parameters."""
        alpha = tuple(float(a) for a in alpha)
        if not alpha:
            raise ParameterError("alpha must be non-empty")
        for k, a in enumerate(alpha):
            if not math.isfinite(a) or a <= 0.0:
                raise ParameterError(f"alpha[{k}] = {a} is not strictly positive")
        total = math.fsum(alpha)
        freqs = AlleleFrequencies(tuple(a / total for a in alpha))
        return cls(theta=1.0 / (1.0 + total), freqs=freqs, alpha=alpha,
                   alpha_total=total)

    @property
    def n_categories(self) -> int:
        return self.freqs.n_categories


def theta_to_alpha(freqs: AlleleFrequencies, theta: float) -> DispersionModel:
    """Map (q, theta) to the Dirichlet parameters alpha_a = q_a (1-theta)/theta.

    theta = 0 yields the multinomial-limit model with alpha = None.
    """
    theta = float(theta)
    if not (0.0 <= theta < 1.0):
        raise ParameterError(f"theta = {theta} outside [0, 1)")
    if theta == 0.0:
        return DispersionModel(theta=0.0, freqs=freqs, alpha=None, alpha_total=None)
    scale = (1.0 - theta) / theta
    alpha = tuple(q * scale for q in freqs.extended_probs)
    return DispersionModel(theta=theta, freqs=freqs, alpha=alpha,
                           alpha_total=math.fsum(alpha))


@dataclass(frozen=True)
class CountTable:
    """An I x A matrix of allele counts, one row per profile.

    Margins are computed on construction; margins passed in explicitly are
    treated as declarations and checked against the counts, so a mismatch
    surfaces as a TableError naming the offending row or column.
    """

    counts: tuple[tuple[int, ...], ...]
    row_sums: tuple[int, ...] | None = None
    col_sums: tuple[int, ...] | None = None
    total: int | None = None

    def __post_init__(self):
        rows = []
        for i, row in enumerate(self.counts):
            rows.append(tuple(_as_int(x, f"counts[{i}][{a}]")
                              for a, x in enumerate(row)))
        counts = tuple(rows)
        if not counts:
            raise TableError("a table needs at least one profile row")
        width = len(counts[0])
        if width == 0:
            raise TableError("a table needs at least one allele column")
        for i, row in enumerate(counts):
            if len(row) != width:
                raise TableError(f"row {i} has {len(row)} entries, expected {width}")
            for a, x in enumerate(row):
                if x < 0:
                    raise TableError(f"counts[{i}][{a}] = {x} is negative")
        row_sums = tuple(sum(row) for row in counts)
        col_sums = tuple(sum(row[a] for row in counts) for a in range(width))
        total = sum(row_sums)
        if self.row_sums is not None:
            declared = tuple(_as_int(x, "row_sums entry") for x in self.row_sums)
            for i, (got, want) in enumerate(zip(row_sums, declared)):
                if got != want:
                    raise TableError(f"row {i} sums to {got}, declared {want}")
            if len(declared) != len(row_sums):
                raise TableError("row_sums length does not match the table")
        if self.col_sums is not None:
            declared = tuple(_as_int(x, "col_sums entry") for x in self.col_sums)
            if len(declared) != width:
                raise TableError("col_sums length does not match the table")
            for a, (got, want) in enumerate(zip(col_sums, declared)):
                if got != want:
                    raise TableError(f"column {a} sums to {got}, declared {want}")
        if self.total is not None and _as_int(self.total, "total") != total:
            raise TableError(f"table sums to {total}, declared {self.total}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "row_sums", row_sums)
        object.__setattr__(self, "col_sums", col_sums)
        object.__setattr__(self, "total", total)

    @property
    def n_profiles(self) -> int:
        return len(self.counts)

    @property
    def n_categories(self) -> int:
        return len(self.counts[0])


def validate_table(table: CountTable) -> None:
    """Re-derive and check every CountTable invariant; raises TableError."""
    if not isinstance(table, CountTable):
        raise TableError(f"expected CountTable, got {type(table).__name__}")
    # Reconstructing from raw counts re-runs every check in __post_init__
    # against the stored margins.
    CountTable(table.counts, row_sums=table.row_sums,
               col_sums=table.col_sums, total=table.total)


@dataclass(frozen=True)
class MarginState:
    """A pooled chain margin: column count n_col after s_prev earlier draws.

    total_capacity defaults to 2 * n_contributors, the diploid genotype
    case; pass it explicitly for other per-profile totals.
    """

    n_col: int
    s_prev: int
    n_contributors: int
    total_capacity: int | None = None

    def __post_init__(self):
        n_col = _as_int(self.n_col, "n_col")
        s_prev = _as_int(self.s_prev, "s_prev")
        contribs = _as_int(self.n_contributors, "n_contributors")
        if contribs < 1:
            raise ParameterError(f"n_contributors = {contribs} must be >= 1")
        if self.total_capacity is None:
            capacity = 2 * contribs
        else:
            capacity = _as_int(self.total_capacity, "total_capacity")
            if capacity < 0:
                raise ParameterError(f"total_capacity = {capacity} is negative")
        if n_col < 0 or s_prev < 0:
            raise ParameterError(f"negative margin state ({n_col}, {s_prev})")
        if n_col + s_prev > capacity:
            raise ParameterError(
                f"margin state ({n_col}, {s_prev}) exceeds capacity {capacity}"
            )
        object.__setattr__(self, "n_col", n_col)
        object.__setattr__(self, "s_prev", s_prev)
        object.__setattr__(self, "n_contributors", contribs)
        object.__setattr__(self, "total_capacity", capacity)

    @property
    def remaining(self) -> int:
        """Draws still to be placed before this column is counted."""
        return self.total_capacity - self.s_prev


@dataclass(frozen=True)
class SubsetSpec:
    """A strictly increasing tuple of 0-based indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(_as_int(k, "subset index") for k in self.indices)
        if not idx:
            raise ParameterError("subset must be non-empty")
        if idx[0] < 0:
            raise ParameterError(f"subset index {idx[0]} is negative")
        for a, b in zip(idx, idx[1:]):
            if b <= a:
                raise ParameterError("subset indices must be strictly increasing")
        object.__setattr__(self, "indices", idx)

    def validate_for(self, size: int) -> None:
        if self.indices[-1] >= size:
            raise ParameterError(
                f"subset index {self.indices[-1]} out of range for size {size}"
            )

    def complement(self, size: int) -> tuple[int, ...]:
        self.validate_for(size)
        inside = set(self.indices)
        return tuple(k for k in range(size) if k not in inside)


@dataclass(frozen=True)
class LocusFrequencies:
    """One locus from a frequency file: allele names and their frequencies."""

    locus: str
    allele_names: tuple[str, ...]
    freqs: AlleleFrequencies


_FREQ_HEADER = ("locus", "allele", "frequency")


def read_frequency_csv(path) -> dict[str, LocusFrequencies]:
    """Parse an allele-frequency CSV with header locus,allele,frequency.

    Rows are grouped by locus in file order.  Frequencies must be strictly
    positive; a locus whose frequencies sum to s < 1 gets a rest class of
    mass 1 - s.  Parse and domain errors carry the offending line number.
    """
    per_locus: dict[str, list[tuple[str, float]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise FrequencyFileError(f"{path}: empty file")
        if tuple(h.strip().lower() for h in header) != _FREQ_HEADER:
            raise FrequencyFileError(
                f"{path}: line 1: expected header locus,allele,frequency, "
                f"got {','.join(header)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 3:
                raise FrequencyFileError(
                    f"{path}: line {lineno}: expected 3 fields, got {len(row)}"
                )
            locus, allele, raw = (cell.strip() for cell in row)
            if not locus or not allele:
                raise FrequencyFileError(
                    f"{path}: line {lineno}: empty locus or allele name"
                )
            try:
                freq = float(raw)
            except ValueError:
                raise FrequencyFileError(
                    f"{path}: line {lineno}: frequency {raw!r} is not a number"
                ) from None
            if not math.isfinite(freq) or freq <= 0.0:
                raise FrequencyFileError(
                    f"{path}: line {lineno}: frequency {freq} is not "
                    "strictly positive"
                )
            entries = per_locus.setdefault(locus, [])
            if any(name == allele for name, _ in entries):
                raise FrequencyFileError(
                    f"{path}: line {lineno}: duplicate allele {allele!r} "
                    f"for locus {locus!r}"
                )
            entries.append((allele, freq))
    if not per_locus:
        raise FrequencyFileError(f"{path}: no frequency rows found")
    result: dict[str, LocusFrequencies] = {}
    for locus, entries in per_locus.items():
        names = tuple(name for name, _ in entries)
        try:
            freqs = AlleleFrequencies(tuple(f for _, f in entries))
        except ParameterError as err:
            raise FrequencyFileError(f"{path}: locus {locus!r}: {err}") from None
        result[locus] = LocusFrequencies(locus=locus, allele_names=names,
                                         freqs=freqs)
    return result
