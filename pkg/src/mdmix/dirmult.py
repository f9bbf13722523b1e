"""Single-profile count distributions.

For counts n = (n_1 .. n_A) with total n and Dirichlet parameters alpha,

    P(n) = n! Gamma(a.) / Gamma(n + a.)
           * prod_b Gamma(n_b + a_b) / (n_b! Gamma(a_b)),

where a. = sum(alpha).  The same mass factors into a chain of
beta-binomial conditionals over the cumulative sums, and in the theta = 0
limit into a chain of plain binomials with tail-scaled success
probabilities Q_a = q_a / sum_{b >= a} q_b, which multiplies out to the
multinomial pmf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import lgamma

from .logspace import LOG_ZERO, log_binomial, log_factorial
from .model import (
    AlleleFrequencies,
    DispersionModel,
    ParameterError,
    TableError,
    _as_int,
)


@dataclass(frozen=True)
class ProfileCounts:
    """Allele counts for a single profile, with cumulative sums attached."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(_as_int(x, f"counts[{a}]") for a, x in enumerate(self.counts))
        if not counts:
            raise TableError("a profile needs at least one allele category")
        for a, x in enumerate(counts):
            if x < 0:
                raise TableError(f"counts[{a}] = {x} is negative")
        object.__setattr__(self, "counts", counts)

    @property
    def n_total(self) -> int:
        return sum(self.counts)

    @property
    def cumulative(self) -> tuple[int, ...]:
        """S_a = n_1 + ... + n_a for a = 1 .. A."""
        out = []
        s = 0
        for x in self.counts:
            s += x
            out.append(s)
        return tuple(out)

    @property
    def n_categories(self) -> int:
        return len(self.counts)


def _require_dispersed(model: DispersionModel, caller: str) -> None:
    if model.theta == 0.0:
        raise ParameterError(
            f"{caller} is undefined at theta = 0; use binomial_chain_log_pmf "
            "or multinomial_log_pmf for the independent limit"
        )


def _check_width(profile: ProfileCounts, model: DispersionModel) -> None:
    if profile.n_categories != model.n_categories:
        raise ParameterError(
            f"profile has {profile.n_categories} categories, model has "
            f"{model.n_categories}"
        )


def dirmult_log_pmf(profile: ProfileCounts, model: DispersionModel) -> float:
    """Log pmf of the Dirichlet-multinomial for one profile."""
    _require_dispersed(model, "dirmult_log_pmf")
    _check_width(profile, model)
    alpha = model.alpha
    n = profile.n_total
    terms = [log_factorial(n), lgamma(model.alpha_total),
             -lgamma(n + model.alpha_total)]
    for n_b, a_b in zip(profile.counts, alpha):
        terms.append(lgamma(n_b + a_b))
        terms.append(-log_factorial(n_b))
        terms.append(-lgamma(a_b))
    return math.fsum(terms)


def dirmult_collapsed_log_pmf(prefix_counts, model: DispersionModel,
                              n_total: int = 2) -> float:
    """Log pmf of a leading block (n_1 .. n_a), a < A, under a fixed total.

    The trailing categories collapse into one with parameter
    sum_{b > a} alpha_b and count n_total - (n_1 + ... + n_a).
    """
    _require_dispersed(model, "dirmult_collapsed_log_pmf")
    prefix = tuple(_as_int(x, "prefix count") for x in prefix_counts)
    a = len(prefix)
    if not 0 < a < model.n_categories:
        raise ParameterError(
            f"prefix length {a} must satisfy 0 < a < A = {model.n_categories}"
        )
    if any(x < 0 for x in prefix):
        raise ParameterError("prefix counts must be non-negative")
    n_total = _as_int(n_total, "n_total")
    s = sum(prefix)
    if s > n_total:
        raise ParameterError(f"prefix sums to {s} > n_total = {n_total}")
    tail = math.fsum(model.alpha[a:])
    collapsed = DispersionModel.from_alpha(model.alpha[:a] + (tail,))
    return dirmult_log_pmf(ProfileCounts(prefix + (n_total - s,)), collapsed)


def beta_binomial_step(n_a: int, s_prev: int, alpha_a: float,
                       alpha_tail: float, n_total: int) -> float:
    """Log mass of one chain step: n_a of the n_total - s_prev remaining
    draws land in the current category, beta-binomial(alpha_a, alpha_tail).
    """
    n_a = _as_int(n_a, "n_a")
    s_prev = _as_int(s_prev, "s_prev")
    n_total = _as_int(n_total, "n_total")
    if not (alpha_a > 0.0 and alpha_tail > 0.0):
        raise ParameterError(
            f"alpha_a = {alpha_a}, alpha_tail = {alpha_tail} must be positive"
        )
    if not 0 <= s_prev <= n_total:
        raise ParameterError(f"s_prev = {s_prev} outside [0, {n_total}]")
    rem = n_total - s_prev
    if not 0 <= n_a <= rem:
        raise ParameterError(f"n_a = {n_a} outside [0, {rem}]")
    pooled = alpha_a + alpha_tail
    return math.fsum([
        log_binomial(rem, n_a),
        lgamma(pooled), -lgamma(alpha_a), -lgamma(alpha_tail),
        lgamma(n_a + alpha_a), lgamma(rem - n_a + alpha_tail),
        -lgamma(rem + pooled),
    ])


def chain_log_pmf(profile: ProfileCounts, model: DispersionModel) -> float:
    """Log pmf assembled as the product of beta-binomial chain steps.

    Equal to dirmult_log_pmf by telescoping; kept as an independent code
    path for cross-checks.
    """
    _require_dispersed(model, "chain_log_pmf")
    _check_width(profile, model)
    alpha = model.alpha
    n_total = profile.n_total
    width = profile.n_categories
    # alpha tail sums; suffix[a] = sum of alpha[a:]
    suffix = [0.0] * (width + 1)
    for a in range(width - 1, -1, -1):
        suffix[a] = suffix[a + 1] + alpha[a]
    terms = []
    s_prev = 0
    for a in range(width - 1):
        terms.append(beta_binomial_step(profile.counts[a], s_prev, alpha[a],
                                        suffix[a + 1], n_total))
        s_prev += profile.counts[a]
    return math.fsum(terms)


def multinomial_log_pmf(profile: ProfileCounts,
                        freqs: AlleleFrequencies) -> float:
    """Log pmf of the plain multinomial over extended categories."""
    q = freqs.extended_probs
    if profile.n_categories != len(q):
        raise ParameterError(
            f"profile has {profile.n_categories} categories, frequencies "
            f"have {len(q)}"
        )
    terms = [log_factorial(profile.n_total)]
    for n_a, q_a in zip(profile.counts, q):
        terms.append(-log_factorial(n_a))
        if n_a > 0:
            terms.append(n_a * math.log(q_a))
    return math.fsum(terms)


def binomial_chain_log_pmf(profile: ProfileCounts,
                           freqs: AlleleFrequencies) -> float:
    """Log pmf of the theta = 0 chain of binomials with Q_a = q_a / tail_a.

    Multiplies out to multinomial_log_pmf; a step with no remaining
    probability mass but remaining positive counts yields LOG_ZERO.
    """
    q = freqs.extended_probs
    if profile.n_categories != len(q):
        raise ParameterError(
            f"profile has {profile.n_categories} categories, frequencies "
            f"have {len(q)}"
        )
    width = len(q)
    suffix = [0.0] * (width + 1)
    for a in range(width - 1, -1, -1):
        suffix[a] = suffix[a + 1] + q[a]
    n_total = profile.n_total
    terms = []
    s_prev = 0
    for a in range(width - 1):
        n_a = profile.counts[a]
        rem = n_total - s_prev
        coef = log_binomial(rem, n_a)
        if coef == LOG_ZERO:
            return LOG_ZERO
        terms.append(coef)
        if n_a > 0:
            terms.append(n_a * math.log(q[a] / suffix[a]))
        left = rem - n_a
        if left > 0:
            stay = suffix[a + 1] / suffix[a]
            if stay == 0.0:
                return LOG_ZERO
            terms.append(left * math.log(stay))
        s_prev += n_a
    return math.fsum(terms)
