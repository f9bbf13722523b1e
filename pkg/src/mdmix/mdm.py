"""Joint counts for several profiles sharing one latent Dirichlet draw.

For an I x A table n with fixed row sums n_i. and theta > 0,

    P(n) = { prod_i C(n_i.; n_i1 .. n_iA) }
           * Gamma(a.) / Gamma(n.. + a.)
           * prod_a Gamma(n.a + a_a) / Gamma(a_a),

i.e. the pooled column counts are Dirichlet-multinomial and, given the
column sums, tables follow the exact multivariate hypergeometric law
(which is free of alpha).  At theta = 0 rows are independent multinomials
and the entry points below dispatch to that product.

Marginalizing rows, conditioning on rows, and collapsing columns all stay
inside the family; the helpers here return the transformed parameter sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma

from .dirmult import ProfileCounts, multinomial_log_pmf
from .logspace import log_binomial, log_factorial
from .model import (
    AlleleFrequencies,
    CountTable,
    DispersionModel,
    MarginState,
    ParameterError,
    SubsetSpec,
    TableError,
    theta_to_alpha,
    _as_int,
)


@dataclass(frozen=True)
class MdmParams:
    """Fixed row sums plus the shared dispersion model."""

    row_sums: tuple[int, ...]
    model: DispersionModel

    def __post_init__(self):
        rows = tuple(_as_int(x, f"row_sums[{i}]")
                     for i, x in enumerate(self.row_sums))
        if not rows:
            raise ParameterError("at least one profile row is required")
        if any(x < 0 for x in rows):
            raise ParameterError(f"row sums {rows} contain a negative entry")
        object.__setattr__(self, "row_sums", rows)

    @property
    def n_profiles(self) -> int:
        return len(self.row_sums)

    @property
    def n_total(self) -> int:
        return sum(self.row_sums)

    @property
    def n_categories(self) -> int:
        return self.model.n_categories


def _check_table(table: CountTable, params: MdmParams) -> None:
    if table.n_profiles != params.n_profiles:
        raise TableError(
            f"table has {table.n_profiles} rows, params expect "
            f"{params.n_profiles}"
        )
    if table.n_categories != params.n_categories:
        raise TableError(
            f"table has {table.n_categories} columns, model has "
            f"{params.n_categories}"
        )
    if table.row_sums != params.row_sums:
        raise TableError(
            f"table row sums {table.row_sums} do not match params "
            f"{params.row_sums}"
        )


def mdm_log_pmf(table: CountTable, params: MdmParams) -> float:
    """Log pmf of the joint table; independent multinomials at theta = 0."""
    _check_table(table, params)
    model = params.model
    if model.theta == 0.0:
        return math.fsum(
            multinomial_log_pmf(ProfileCounts(row), model.freqs)
            for row in table.counts
        )
    terms = [lgamma(model.alpha_total),
             -lgamma(table.total + model.alpha_total)]
    for i, row in enumerate(table.counts):
        terms.append(log_factorial(table.row_sums[i]))
        for x in row:
            terms.append(-log_factorial(x))
    for a, a_a in zip(table.col_sums, model.alpha):
        terms.append(lgamma(a + a_a))
        terms.append(-lgamma(a_a))
    return math.fsum(terms)


def joint_step_conditional(margin: MarginState, alpha_a: float,
                           alpha_tail: float, per_profile,
                           row_sums=None) -> float:
    """Log mass of one pooled chain step across profiles.

    per_profile lists (n_ia, s_prev_i) for each profile; row_sums gives the
    per-profile totals and defaults to 2 each (diploid genotypes).  The
    pooled column count is beta-binomial over the remaining capacity and
    the split across profiles is hypergeometric, which multiplies into

        { prod_i C(cap_i - s_prev_i, n_ia) }
        * B-ratio(n_col, remaining; alpha_a, alpha_tail).
    """
    if not (alpha_a > 0.0 and alpha_tail > 0.0):
        raise ParameterError(
            f"alpha_a = {alpha_a}, alpha_tail = {alpha_tail} must be positive"
        )
    pairs = [(_as_int(n, f"n[{i}]"), _as_int(s, f"s_prev[{i}]"))
             for i, (n, s) in enumerate(per_profile)]
    if len(pairs) != margin.n_contributors:
        raise ParameterError(
            f"{len(pairs)} per-profile entries for "
            f"{margin.n_contributors} contributors"
        )
    if row_sums is None:
        caps = (2,) * len(pairs)
    else:
        caps = tuple(_as_int(c, "row sum") for c in row_sums)
        if len(caps) != len(pairs):
            raise ParameterError("row_sums length does not match per_profile")
    if sum(caps) != margin.total_capacity:
        raise ParameterError(
            f"row sums {caps} total {sum(caps)}, margin capacity is "
            f"{margin.total_capacity}"
        )
    n_col = 0
    s_prev = 0
    terms = []
    for (n_i, s_i), cap_i in zip(pairs, caps):
        if n_i < 0 or s_i < 0 or s_i + n_i > cap_i:
            raise ParameterError(
                f"per-profile state ({n_i}, {s_i}) infeasible for row sum "
                f"{cap_i}"
            )
        n_col += n_i
        s_prev += s_i
        terms.append(log_binomial(cap_i - s_i, n_i))
    if n_col != margin.n_col or s_prev != margin.s_prev:
        raise ParameterError(
            f"per-profile totals ({n_col}, {s_prev}) do not match margin "
            f"({margin.n_col}, {margin.s_prev})"
        )
    rem = margin.remaining
    pooled = alpha_a + alpha_tail
    terms.extend([
        lgamma(pooled), -lgamma(alpha_a), -lgamma(alpha_tail),
        lgamma(n_col + alpha_a), lgamma(rem - n_col + alpha_tail),
        -lgamma(rem + pooled),
    ])
    return math.fsum(terms)


def mdm_chain_log_pmf(table: CountTable, params: MdmParams) -> float:
    """Log pmf assembled column by column from joint_step_conditional.

    Telescopes to mdm_log_pmf; independent code path for cross-checks.
    At theta = 0 it is the product of per-row binomial chains.
    """
    _check_table(table, params)
    model = params.model
    if model.theta == 0.0:
        from .dirmult import binomial_chain_log_pmf

        return math.fsum(
            binomial_chain_log_pmf(ProfileCounts(row), model.freqs)
            for row in table.counts
        )
    alpha = model.alpha
    width = table.n_categories
    suffix = [0.0] * (width + 1)
    for a in range(width - 1, -1, -1):
        suffix[a] = suffix[a + 1] + alpha[a]
    capacity = table.total
    s_rows = [0] * table.n_profiles
    terms = []
    for a in range(width - 1):
        per_profile = [(row[a], s_rows[i]) for i, row in enumerate(table.counts)]
        margin = MarginState(n_col=table.col_sums[a], s_prev=sum(s_rows),
                             n_contributors=table.n_profiles,
                             total_capacity=capacity)
        terms.append(joint_step_conditional(margin, alpha[a], suffix[a + 1],
                                            per_profile,
                                            row_sums=table.row_sums))
        for i, row in enumerate(table.counts):
            s_rows[i] += row[a]
    return math.fsum(terms)


def marginal_over_alleles(params: MdmParams, keep: SubsetSpec) -> MdmParams:
    """Collapse the complement of `keep` into one category.

    The kept columns retain their parameters and the collapsed category
    gets the summed parameter, so row sums and theta are unchanged.
    """
    width = params.n_categories
    keep.validate_for(width)
    dropped = keep.complement(width)
    if not dropped:
        raise ParameterError("keep must be a proper subset of the categories")
    model = params.model
    if model.theta == 0.0:
        q = model.freqs.extended_probs
        probs = tuple(q[a] for a in keep.indices) + (
            math.fsum(q[a] for a in dropped),)
        new_model = theta_to_alpha(AlleleFrequencies(probs), 0.0)
    else:
        alpha = model.alpha
        new_alpha = tuple(alpha[a] for a in keep.indices) + (
            math.fsum(alpha[a] for a in dropped),)
        new_model = DispersionModel.from_alpha(new_alpha)
    return MdmParams(row_sums=params.row_sums, model=new_model)


def conditional_over_alleles(params: MdmParams, observed: CountTable,
                             observed_subset: SubsetSpec) -> MdmParams:
    """Condition on the counts of the observed category subset.

    The remaining columns follow the same family with row sums reduced by
    the observed rows; for theta > 0 their parameters are simply the
    remaining alphas (the implied theta changes), for theta = 0 the
    remaining probabilities renormalize.
    """
    width = params.n_categories
    observed_subset.validate_for(width)
    kept = observed_subset.complement(width)
    if not kept:
        raise ParameterError("conditioning on every category leaves nothing")
    if observed.n_profiles != params.n_profiles:
        raise TableError(
            f"observed table has {observed.n_profiles} rows, params expect "
            f"{params.n_profiles}"
        )
    if observed.n_categories != len(observed_subset.indices):
        raise TableError(
            f"observed table has {observed.n_categories} columns, subset "
            f"names {len(observed_subset.indices)}"
        )
    new_rows = []
    for i, (full, part) in enumerate(zip(params.row_sums, observed.row_sums)):
        if part > full:
            raise TableError(
                f"observed row {i} sums to {part} > row sum {full}"
            )
        new_rows.append(full - part)
    model = params.model
    if model.theta == 0.0:
        q = model.freqs.extended_probs
        kept_q = [q[a] for a in kept]
        norm = math.fsum(kept_q)
        new_model = theta_to_alpha(
            AlleleFrequencies(tuple(x / norm for x in kept_q)), 0.0)
    else:
        new_model = DispersionModel.from_alpha(
            tuple(model.alpha[a] for a in kept))
    return MdmParams(row_sums=tuple(new_rows), model=new_model)


def marginal_over_profiles(params: MdmParams, keep: SubsetSpec) -> MdmParams:
    """Drop every profile outside `keep`; the model is unchanged."""
    keep.validate_for(params.n_profiles)
    rows = tuple(params.row_sums[i] for i in keep.indices)
    return MdmParams(row_sums=rows, model=params.model)


def conditional_over_profiles(params: MdmParams, observed: CountTable,
                              observed_subset: SubsetSpec) -> MdmParams:
    """Condition on fully observed profile rows.

    The remaining rows follow the same family with each alpha shifted by
    the observed column sums (posterior updating of the shared Dirichlet
    draw); at theta = 0 rows are independent and the model is unchanged.
    """
    observed_subset.validate_for(params.n_profiles)
    kept = observed_subset.complement(params.n_profiles)
    if not kept:
        raise ParameterError("conditioning on every profile leaves nothing")
    if observed.n_profiles != len(observed_subset.indices):
        raise TableError(
            f"observed table has {observed.n_profiles} rows, subset names "
            f"{len(observed_subset.indices)}"
        )
    if observed.n_categories != params.n_categories:
        raise TableError(
            f"observed table has {observed.n_categories} columns, model has "
            f"{params.n_categories}"
        )
    for row_i, i in zip(observed.row_sums, observed_subset.indices):
        if row_i != params.row_sums[i]:
            raise TableError(
                f"observed row for profile {i} sums to {row_i}, expected "
                f"{params.row_sums[i]}"
            )
    rows = tuple(params.row_sums[i] for i in kept)
    model = params.model
    if model.theta == 0.0:
        return MdmParams(row_sums=rows, model=model)
    new_alpha = tuple(a + c for a, c in zip(model.alpha, observed.col_sums))
    return MdmParams(row_sums=rows, model=DispersionModel.from_alpha(new_alpha))


def hypergeometric_log_pmf(table: CountTable) -> float:
    """Log probability of the table given both margins; free of alpha.

    P(n | rows, cols) = prod_i n_i.! prod_a n.a! / (n..! prod_ia n_ia!).
    """
    terms = [-log_factorial(table.total)]
    for r in table.row_sums:
        terms.append(log_factorial(r))
    for c in table.col_sums:
        terms.append(log_factorial(c))
    for row in table.counts:
        for x in row:
            terms.append(-log_factorial(x))
    return math.fsum(terms)


def sufficient_statistics(table: CountTable):
    """(row_sums, col_sums, total): all the pmf depends on besides the
    within-row multinomial coefficients."""
    return table.row_sums, table.col_sums, table.total
