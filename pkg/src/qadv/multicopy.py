"""Finite-copy machinery: types, symmetrized states, and per-copy estimates.

Everything here is desk scale with hard caps; exceeding a cap raises instead
of silently truncating so downstream exponent tables stay trustworthy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .divergences import relative_entropy
from .errors import CapExceededError, ValidationError
from .linalg import dominates
from .optimize import OptResult, minimize_inf, minimize_informed
from .qobjects import (
    Channel,
    CQChannel,
    DensityMatrix,
    ProbDist,
    channel_power,
    cq_apply,
    state_power,
)

#: largest number of type vectors we will enumerate
TYPES_CAP = 10**6

#: largest output dimension for explicit multi-copy states
DIM_CAP = 4096

#: largest number of sequences mixed into one type state
SEQUENCES_CAP = 10**5

#: largest optimizer dimension for regularized estimates
OPT_DIM_CAP = 64


def type_count(d: int, n: int) -> int:
    """Number of types: compositions of n into d nonnegative parts."""
    return math.comb(n + d - 1, d - 1)


def types_enumerate(d: int, n: int) -> list[tuple[int, ...]]:
    """All compositions of n into d parts, lexicographically ascending."""
    if d < 1 or n < 1:
        raise ValidationError("need d >= 1 and n >= 1")
    total = type_count(d, n)
    if total > TYPES_CAP:
        raise CapExceededError(f"{total} types exceed the cap {TYPES_CAP}")

    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], remaining: int, slots: int):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for first in range(remaining + 1):
            rec(prefix + (first,), remaining - first, slots - 1)

    rec((), n, d)
    return out


def multinomial(counts) -> int:
    """Number of sequences with the given symbol counts."""
    n = sum(counts)
    out = math.factorial(n)
    for c in counts:
        out //= math.factorial(c)
    return out


def _check_type_vector(w: CQChannel, counts) -> tuple[int, ...]:
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(w.alphabet):
        raise ValidationError("type vector length must match the alphabet")
    if any(c < 0 for c in counts):
        raise ValidationError("type counts must be nonnegative")
    if sum(counts) < 1:
        raise ValidationError("type must cover at least one copy")
    return counts


def sequence_output(w: CQChannel, xs) -> DensityMatrix:
    """Product output state rho_{x_1} (x) ... (x) rho_{x_n}."""
    symbols = [str(x) for x in xs]
    if not symbols:
        raise ValidationError("sequence must be nonempty")
    if w.dim ** len(symbols) > DIM_CAP:
        raise CapExceededError(
            f"output dimension {w.dim ** len(symbols)} exceeds the cap {DIM_CAP}"
        )
    out = w.output(symbols[0]).mat
    for sym in symbols[1:]:
        out = np.kron(out, w.output(sym).mat)
    return DensityMatrix(out)


def _multiset_permutations(symbols: list[str]):
    """Distinct orderings of a multiset, lexicographic in symbol order."""
    counts: dict[str, int] = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    keys = sorted(counts)
    n = len(symbols)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k] > 0:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1

    yield from rec([])


def type_uniform_state(w: CQChannel, counts) -> DensityMatrix:
    """Uniform mixture of product outputs over every sequence of the type."""
    counts = _check_type_vector(w, counts)
    n = sum(counts)
    if w.dim**n > DIM_CAP:
        raise CapExceededError(f"output dimension {w.dim**n} exceeds the cap {DIM_CAP}")
    seqs = multinomial(counts)
    if seqs > SEQUENCES_CAP:
        raise CapExceededError(f"{seqs} sequences exceed the cap {SEQUENCES_CAP}")
    base = [sym for sym, c in zip(w.alphabet, counts) for _ in range(c)]
    dim = w.dim**n
    acc = np.zeros((dim, dim), dtype=complex)
    for seq in _multiset_permutations(base):
        acc += sequence_output(w, seq).mat
    return DensityMatrix(acc / seqs)


def type_domination_check(w: CQChannel, counts) -> bool:
    """Is the type state dominated by |types| times the power of its mixture?

    Checks rho_p^(n) <= c * (sum_x p(x) rho_x)^(x n) with p the empirical
    frequency counts/n and c the number of types.
    """
    counts = _check_type_vector(w, counts)
    n = sum(counts)
    freq = ProbDist(w.alphabet, np.asarray(counts, dtype=float) / n)
    mixture = cq_apply(w, freq)
    c = float(type_count(len(w.alphabet), n))
    return dominates(type_uniform_state(w, counts).mat, state_power(mixture, n).mat, c)


@dataclass(frozen=True, eq=False)
class RegularizedEstimate:
    """Per-copy divergence estimate of an n-fold tensor-power channel pair."""

    n: int
    value: float
    witness: object
    solver_gap: float


def regularized_estimate(
    n1: Channel,
    n2: Channel,
    n: int,
    kind: str = "informed",
    tol: float = 1e-6,
) -> RegularizedEstimate:
    """(1/n) inf D(N1^n(.) || N2^n(.)) over one input (informed) or a pair (inf)."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    if n1.in_dim**n > OPT_DIM_CAP:
        raise CapExceededError(
            f"optimizer dimension {n1.in_dim ** n} exceeds the cap {OPT_DIM_CAP}"
        )
    big1 = channel_power(n1, n)
    big2 = channel_power(n2, n)
    if kind == "informed":
        res: OptResult = minimize_informed(big1, big2, tol)
    elif kind == "inf":
        res = minimize_inf(big1, big2, tol)
    else:
        raise ValidationError(f"kind must be 'informed' or 'inf', got {kind!r}")
    value = res.value / n if math.isfinite(res.value) else res.value
    return RegularizedEstimate(n, value, res.argument, res.gap)


def mixing_upper_bound(
    n1: Channel,
    n2: Channel,
    rho: DensityMatrix,
    sigma: DensityMatrix,
    eps_mix: float,
    n: int,
) -> float:
    """Per-copy bound from feeding (1-e) rho^n + e sigma^n into the channels.

    (1-e) D(N1(rho)||N2(sigma)) + e D(N1(sigma)||N2(sigma)) - log(e)/n; +inf
    when either single-copy divergence already diverges.
    """
    if not 0.0 < eps_mix < 1.0:
        raise ValidationError(f"eps_mix must lie in (0,1), got {eps_mix}")
    if n < 1:
        raise ValidationError("n must be >= 1")
    from .qobjects import apply_matrix

    cross = relative_entropy(apply_matrix(n1, rho.mat), apply_matrix(n2, sigma.mat))
    anchor = relative_entropy(apply_matrix(n1, sigma.mat), apply_matrix(n2, sigma.mat))
    if not (math.isfinite(cross) and math.isfinite(anchor)):
        return math.inf
    return (1.0 - eps_mix) * cross + eps_mix * anchor - math.log(eps_mix) / n
