"""Exhaustive enumeration, brute-force oracles, and an exact sampler.

Everything closed-form in this package can be cross-checked against plain
summation over the finite support: for fixed row sums the support is the
product of per-row compositions, of size prod_i C(n_i. + A - 1, A - 1).
Enumeration order is deterministic: row 1 varies slowest, and within a row
compositions descend lexicographically, (2,0), (1,1), (0,2).

The sampler draws the pooled allele sequence one trial at a time with urn
weights alpha_a + (previous draws of a) -- the plain q_a at theta = 0 --
and deals the sequence into consecutive profile slots.  Urn sequences are
exchangeable, so given the pooled multiset every arrangement is equally
likely and the dealt table follows the joint law exactly.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator

import numpy as np

from .mdm import MdmParams, mdm_log_pmf
from .model import CountTable, SizeGuardError, SubsetSpec, TableError, _as_int
from .moments import FactorialOrder

MAX_TABLES = 10 ** 8


def count_tables(row_sums, n_categories: int) -> int:
    """Number of tables with the given row sums: prod_i C(n_i.+A-1, A-1)."""
    n_categories = _as_int(n_categories, "n_categories")
    if n_categories < 1:
        raise TableError("n_categories must be >= 1")
    total = 1
    for s in row_sums:
        s = _as_int(s, "row sum")
        if s < 0:
            raise TableError(f"row sum {s} is negative")
        total *= math.comb(s + n_categories - 1, n_categories - 1)
    return total


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # first cell descending, so (total, 0, ...) comes first
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _raw_tables(row_sums, parts: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not row_sums:
        yield ()
        return
    for head in _compositions(row_sums[0], parts):
        for rest in _raw_tables(row_sums[1:], parts):
            yield (head,) + rest


def enumerate_tables(row_sums, n_categories: int) -> Iterator[CountTable]:
    """Every table with the given row sums, exactly once, in a fixed order."""
    n = count_tables(row_sums, n_categories)
    if n > MAX_TABLES:
        raise SizeGuardError(
            f"{n} tables exceed the enumeration limit of {MAX_TABLES}"
        )
    rows = tuple(_as_int(s, "row sum") for s in row_sums)
    for counts in _raw_tables(rows, n_categories):
        yield CountTable(counts)


def _bounded_compositions(total: int, bounds) -> Iterator[tuple[int, ...]]:
    # compositions of `total` with cell a capped at bounds[a], same order
    if total > sum(bounds):
        return
    if len(bounds) == 1:
        yield (total,)
        return
    tail_room = sum(bounds[1:])
    hi = min(total, bounds[0])
    lo = max(0, total - tail_room)
    for first in range(hi, lo - 1, -1):
        for rest in _bounded_compositions(total - first, bounds[1:]):
            yield (first,) + rest


def enumerate_tables_with_margins(row_sums, col_sums) -> Iterator[CountTable]:
    """Every table with both margins fixed, exactly once, in a fixed order."""
    rows = tuple(_as_int(s, "row sum") for s in row_sums)
    cols = tuple(_as_int(s, "col sum") for s in col_sums)
    if any(s < 0 for s in rows) or any(s < 0 for s in cols):
        raise TableError("margins must be non-negative")
    if not rows or not cols:
        raise TableError("margins must be non-empty")
    if sum(rows) != sum(cols):
        raise TableError(
            f"row sums total {sum(rows)}, column sums total {sum(cols)}"
        )
    if count_tables(rows, len(cols)) > MAX_TABLES:
        raise SizeGuardError(
            "margin-constrained enumeration exceeds the "
            f"{MAX_TABLES}-table limit"
        )

    def rec(i: int, remaining: tuple[int, ...]):
        if i == len(rows):
            yield ()
            return
        for head in _bounded_compositions(rows[i], remaining):
            left = tuple(r - h for r, h in zip(remaining, head))
            for rest in rec(i + 1, left):
                yield (head,) + rest

    for counts in rec(0, cols):
        yield CountTable(counts)


def oracle_pmf_sum(params: MdmParams) -> float:
    """Sum of exp(mdm_log_pmf) over the full support; should be 1."""
    return math.fsum(
        math.exp(mdm_log_pmf(t, params))
        for t in enumerate_tables(params.row_sums, params.n_categories)
    )


@lru_cache(maxsize=128)
def _support_and_probs(params: MdmParams):
    tables = []
    probs = []
    for t in enumerate_tables(params.row_sums, params.n_categories):
        tables.append(t.counts)
        probs.append(math.exp(mdm_log_pmf(t, params)))
    return np.asarray(tables, dtype=np.int64), np.asarray(probs)


def oracle_moment(order: FactorialOrder, params: MdmParams) -> float:
    """E prod n_ia^(r_ia) by direct summation over the support."""
    tables, probs = _support_and_probs(params)
    weight = probs.copy()
    for i, row in enumerate(order.orders):
        for a, r in enumerate(row):
            cell = tables[:, i, a].astype(float)
            for k in range(r):
                weight *= cell - k
    return float(weight.sum())


def oracle_marginal_over_alleles(params: MdmParams, keep: SubsetSpec,
                                 collapsed: CountTable) -> float:
    """P(kept columns and the collapsed remainder equal `collapsed`),
    by summing the full pmf over matching tables."""
    width = params.n_categories
    keep.validate_for(width)
    dropped = keep.complement(width)
    if collapsed.n_categories != len(keep.indices) + 1:
        raise TableError(
            f"collapsed table must have {len(keep.indices) + 1} columns"
        )
    acc = []
    for t in enumerate_tables(params.row_sums, width):
        match = True
        for i, row in enumerate(t.counts):
            img = tuple(row[a] for a in keep.indices) + (
                sum(row[a] for a in dropped),)
            if img != collapsed.counts[i]:
                match = False
                break
        if match:
            acc.append(math.exp(mdm_log_pmf(t, params)))
    return math.fsum(acc)


def oracle_marginal_over_profiles(params: MdmParams, keep: SubsetSpec,
                                  sub_table: CountTable) -> float:
    """P(rows in `keep` equal `sub_table`), by summing the full pmf."""
    keep.validate_for(params.n_profiles)
    if sub_table.n_profiles != len(keep.indices):
        raise TableError(
            f"sub table must have {len(keep.indices)} rows"
        )
    acc = []
    for t in enumerate_tables(params.row_sums, params.n_categories):
        if all(t.counts[i] == sub_table.counts[k]
               for k, i in enumerate(keep.indices)):
            acc.append(math.exp(mdm_log_pmf(t, params)))
    return math.fsum(acc)


class MdmSampler:
    """Streaming exact sampler for one parameter set.

    Two samplers built with the same seed produce the same table sequence.
    Randomness comes from numpy's PCG64 as a buffered uniform stream; the
    identifier below is recorded in CLI output metadata.
    """

    algorithm = "pcg64-urn-deal-v1"
    _BUF = 8192

    def __init__(self, params: MdmParams, seed: int):
        self.params = params
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))
        model = params.model
        if model.theta == 0.0:
            self._weights = list(model.freqs.extended_probs)
            self._urn = False
            self._w_total = math.fsum(self._weights)
        else:
            self._weights = list(model.alpha)
            self._urn = True
            self._w_total = model.alpha_total
        self._rows = params.row_sums
        self._n_total = params.n_total
        self._width = params.n_categories
        self._buf = self._rng.random(self._BUF)
        self._pos = 0

    def _uniform(self) -> float:
        if self._pos == len(self._buf):
            self._buf = self._rng.random(self._BUF)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u

    def draw_counts(self) -> tuple[tuple[int, ...], ...]:
        """One table as a raw tuple matrix."""
        width = self._width
        extra = [0] * width
        seq = []
        total_w = self._w_total
        weights = self._weights
        urn = self._urn
        for _ in range(self._n_total):
            pick = self._uniform() * total_w
            acc = 0.0
            a = width - 1
            for b in range(width):
                acc += weights[b] + extra[b] if urn else weights[b]
                if pick < acc:
                    a = b
                    break
            seq.append(a)
            if urn:
                extra[a] += 1
                total_w += 1.0
        counts = []
        pos = 0
        for r in self._rows:
            row = [0] * width
            for a in seq[pos:pos + r]:
                row[a] += 1
            counts.append(tuple(row))
            pos += r
        return tuple(counts)

    def draw(self) -> CountTable:
        return CountTable(self.draw_counts())


def sequential_sample(params: MdmParams, rng_seed: int) -> CountTable:
    """One exact draw; the same seed always returns the same table."""
    return MdmSampler(params, rng_seed).draw()
