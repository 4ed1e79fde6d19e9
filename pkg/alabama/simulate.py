"""
Seat-by-seat simulation of Hamilton's method over house sizes 1..N.

The paradox scan works on integer remainders n * P_i mod P, a block of house
sizes at a time, so long horizons run in O(N * m) time with memory bounded by
the block. Rows with a tie at the rounding cutoff are decided by the core
allocator so that the tie policy is applied exactly.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy
import pandas

import alabama
import alabama.exceptions
from alabama.core import (
    Allocation,
    PopulationProfile,
    TiePolicy,
    allocate_remainders,
    boundary_tie,
)

#: seat changes recorded in the delta histogram
DELTAS = (-1, 0, 1, 2)

#: denominator used for shares standing in for irrational numbers
GENERIC_DENOMINATOR = 2**62


@dataclass(frozen=True)
class ParadoxReport(object):
    """
    Paradox statistics over the steps n -> n+1 for 1 <= n < N.
    """

    horizon: int
    counts: Tuple[int, ...]
    gains: Tuple[int, ...]
    multi_histogram: Dict[int, int]
    delta_histogram: Dict[int, Tuple[int, ...]]
    names: Tuple[str, ...] = ()

    @property
    def frequencies(self) -> Tuple[float, ...]:
        """nu_i(N) / N"""
        return tuple(c / self.horizon for c in self.counts)

    @property
    def gain_frequencies(self) -> Tuple[float, ...]:
        return tuple(g / self.horizon for g in self.gains)

    @property
    def steps_with_paradox(self) -> int:
        """number of steps at which at least one state lost a seat"""
        return sum(self.multi_histogram.values())

    @property
    def any_paradox_frequency(self) -> float:
        return self.steps_with_paradox / self.horizon

    @property
    def simultaneous_frequency(self) -> float:
        """average number of states losing a seat per step"""
        return sum(self.counts) / self.horizon

    def to_frame(self) -> pandas.DataFrame:
        """
        Returns the per-state table (state, count, frequency).
        """

        return pandas.DataFrame(
            {
                "state": list(self.names) if self.names else list(range(len(self.counts))),
                "count": list(self.counts),
                "frequency": list(self.frequencies),
            }
        )

    def histogram_frame(self) -> pandas.DataFrame:
        """
        Returns the multi-paradox histogram (k, steps).
        """

        keys = sorted(self.multi_histogram)
        return pandas.DataFrame({"k": keys, "steps": [self.multi_histogram[k] for k in keys]})

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "states": list(self.names),
            "counts": list(self.counts),
            "frequencies": list(self.frequencies),
            "gains": list(self.gains),
            "multi_histogram": {str(k): v for k, v in sorted(self.multi_histogram.items())},
            "delta_histogram": {str(d): list(v) for d, v in sorted(self.delta_histogram.items())},
        }


@dataclass(frozen=True)
class PeriodicExactResult(object):
    """
    Exact paradox probabilities of a rational profile, averaged over one period.
    """

    period: int
    per_state_probability: Tuple[Fraction, ...]
    expected_simultaneous: Fraction
    names: Tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "states": list(self.names),
            "per_state_probability": [str(q) for q in self.per_state_probability],
            "expected_simultaneous": str(self.expected_simultaneous),
        }


def seat_sequence(profile: PopulationProfile, N: int, policy: TiePolicy | None = None) -> Iterator[Allocation]:
    """
    Yield the allocations for n = 1..N, one seat at a time.
    Only the current remainders are kept, so memory is O(m).

    Args:
        profile: population profile
        N: last house size
        policy: tie policy, default error-on-tie
    """

    if N < 1:
        raise alabama.exceptions.InputError(f"horizon must be at least 1: {N}")
    if policy is None:
        policy = TiePolicy.error_on_tie()
    policy.check(profile.m)

    total = profile.total
    populations = profile.populations
    floors = [0] * profile.m
    remainders = [0] * profile.m

    for n in range(1, N + 1):
        for i, p in enumerate(populations):
            r = remainders[i] + p
            if r >= total:
                r -= total
                floors[i] += 1
            remainders[i] = r
        seats, rounded_up = allocate_remainders(floors, remainders, n, policy)
        yield Allocation(n, seats, rounded_up)


class _RemainderBlocks(object):
    """
    Integer remainders n * P_i mod P for blocks of house sizes.

    Denominators which are powers of two use wrapping uint64 products and a
    mask, moderate denominators use int64, anything else Python integers.
    """

    def __init__(self, profile: PopulationProfile, N: int):
        self.total = profile.total
        self.m = profile.m
        populations = profile.populations

        if self.total & (self.total - 1) == 0 and self.total <= 2**62:
            self.mode = "mask"
            self.a = numpy.array(populations, dtype=numpy.uint64)
            self.mask = numpy.uint64(self.total - 1)
        elif (N + 1) * self.total < 2**62:
            self.mode = "int64"
            self.a = numpy.array(populations, dtype=numpy.int64)
        else:
            self.mode = "object"
            self.a = numpy.array(populations, dtype=object)

    def remainders(self, n_values: numpy.ndarray) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """
        Returns (remainders, leftover seats) for the house sizes in n_values.
        """

        if self.mode == "mask":
            rem = (n_values.astype(numpy.uint64)[:, None] * self.a[None, :]) & self.mask
        elif self.mode == "int64":
            rem = (n_values.astype(numpy.int64)[:, None] * self.a[None, :]) % self.total
        else:
            rem = (n_values.astype(object)[:, None] * self.a[None, :]) % self.total

        if self.mode == "object":
            leftover = numpy.array([int(s) // self.total for s in rem.sum(axis=1)], dtype=numpy.int64)
        else:
            # the sum is an exact integer, float error is far below 1/2
            leftover = numpy.rint(rem.astype(numpy.float64).sum(axis=1) / self.total).astype(numpy.int64)

        return rem, leftover

    def carries(self, rem: numpy.ndarray) -> numpy.ndarray:
        """
        Returns True where floor(n * p_i) grew from n-1 to n.
        """

        return rem < self.a[None, :]


def _rounded_up_block(
    rem: numpy.ndarray, leftover: numpy.ndarray, n_values: numpy.ndarray, policy: TiePolicy
) -> Tuple[numpy.ndarray, int]:
    """
    Returns the boolean rounded-up matrix of a block and the number of tie rows.
    """

    rows, m = rem.shape
    srt = numpy.sort(rem, axis=1)
    active = leftover > 0
    index = numpy.clip(m - leftover, 0, m - 1)
    cutoff = srt[numpy.arange(rows), index]

    above = (rem > cutoff[:, None]) & active[:, None]
    at = (rem == cutoff[:, None]) & active[:, None]
    contested = leftover - above.sum(axis=1)
    tie_rows = numpy.nonzero(active & (contested < at.sum(axis=1)))[0]

    up = above | at
    for r in tie_rows:
        n = int(n_values[r])
        _, tie = boundary_tie([int(x) for x in rem[r]], int(leftover[r]), n)
        row = above[r].copy()
        row[sorted(policy.resolve(tie))] = True
        up[r] = row

    return up, len(tie_rows)


def paradox_events(profile: PopulationProfile, N: int, policy: TiePolicy | None = None) -> ParadoxReport:
    """
    Count the steps n -> n+1 (1 <= n < N) at which each state loses a seat.

    Args:
        profile: population profile
        N: horizon
        policy: tie policy, default error-on-tie
    Returns:
        ParadoxReport
    """

    if N < 2:
        raise alabama.exceptions.InputError(f"horizon must be at least 2: {N}")
    if policy is None:
        policy = TiePolicy.error_on_tie()
    policy.check(profile.m)

    m = profile.m
    blocks = _RemainderBlocks(profile, N)
    block_rows = max(1, min(alabama.db.block_size, 2**22 // m))

    counts = numpy.zeros(m, dtype=numpy.int64)
    gains = numpy.zeros(m, dtype=numpy.int64)
    delta_counts = {d: numpy.zeros(m, dtype=numpy.int64) for d in DELTAS}
    losers_histogram = numpy.zeros(m + 1, dtype=numpy.int64)
    prev_up = None
    ties = 0

    alabama.log(f"Scanning {m} states to N={N} ({blocks.mode} remainders)", level=2)

    for start in range(1, N + 1, block_rows):
        n_values = numpy.arange(start, min(start + block_rows, N + 1), dtype=numpy.int64)
        rem, leftover = blocks.remainders(n_values)
        up, block_ties = _rounded_up_block(rem, leftover, n_values, policy)
        ties += block_ties
        carry = blocks.carries(rem)

        # step n-1 -> n is counted for n >= 2
        if prev_up is None:
            before = up[:-1]
            up_now = up[1:]
            carry = carry[1:]
        else:
            before = numpy.vstack([prev_up[None, :], up[:-1]])
            up_now = up
        prev_up = up[-1]
        if len(up_now) == 0:
            continue

        delta = carry.astype(numpy.int8) + up_now.astype(numpy.int8) - before.astype(numpy.int8)
        loss = delta < 0
        counts += loss.sum(axis=0)
        gains += (delta > 0).sum(axis=0)
        for d in DELTAS:
            delta_counts[d] += (delta == d).sum(axis=0)
        losers_histogram += numpy.bincount(loss.sum(axis=1), minlength=m + 1)

        if alabama.db.verbosity >= 3:
            alabama.log(f"n={int(n_values[-1])} losses={int(counts.sum())}", prefix="sim-> ", level=3)

    if ties > 0:
        alabama.log(f"{ties} tie(s) resolved by {policy.variant} policy", level=2)

    return ParadoxReport(
        horizon=N,
        counts=tuple(int(c) for c in counts),
        gains=tuple(int(g) for g in gains),
        multi_histogram={k: int(v) for k, v in enumerate(losers_histogram) if k >= 1 and v > 0},
        delta_histogram={d: tuple(int(c) for c in delta_counts[d]) for d in DELTAS},
        names=profile.state_names,
    )


def _class_cdf(status: tuple, size: int) -> List[Fraction] | None:
    """
    CDF P(J <= r), r = 0..size-1, of the number J of class members rounded up.
    None stands for "all up" and an empty list for "none up".
    """

    kind = status[0]
    if kind == "up":
        return None
    if kind == "down":
        return []

    # multivariate hypergeometric marginal: `draws` of `group` tied states
    _, group, draws = status
    total = math.comb(group, draws)
    cdf = []
    acc = 0
    for j in range(size):
        if j <= draws:
            acc += math.comb(size, j) * math.comb(group - size, draws - j)
        cdf.append(Fraction(acc, total))

    return cdf


def _expected_losers(before: List[Fraction] | None, after: List[Fraction] | None, size: int) -> Fraction:
    """
    Expected number of class members rounded up at n and not at n+1,
    members ordered by one fixed priority list and lots independent across n.
    """

    if before == [] or after is None:
        return Fraction(0)
    if before is None and after == []:
        return Fraction(size)

    total = Fraction(0)
    for r in range(size):
        p_up = 1 if before is None else 1 - before[r]
        p_down = 1 if after == [] else after[r]
        total += p_up * p_down

    return total


def _class_status(remainders: Sequence[int], sizes: Sequence[int], leftover: int) -> List[tuple]:
    """
    Status of every population class at one house size:
    ("up",), ("down",) or ("tie", group_size, contested_seats).
    """

    if leftover <= 0:
        return [("down",)] * len(remainders)

    order = sorted(range(len(remainders)), key=lambda c: remainders[c], reverse=True)
    seen = 0
    cutoff = None
    for c in order:
        seen += sizes[c]
        if seen >= leftover:
            cutoff = remainders[c]
            break

    above = sum(sizes[c] for c in order if remainders[c] > cutoff)
    group = sum(sizes[c] for c in order if remainders[c] == cutoff)
    contested = leftover - above

    status = []
    for c, r in enumerate(remainders):
        if r > cutoff or (r == cutoff and contested == group):
            status.append(("up",))
        elif r < cutoff:
            status.append(("down",))
        else:
            status.append(("tie", group, contested))

    return status


def periodic_exact(profile: PopulationProfile, start: int = 1) -> PeriodicExactResult:
    """
    Exact paradox probabilities for integer populations.

    After division by the gcd the seat pattern repeats with period P, the total
    population, so one period of steps n -> n+1 is enumerated. States with
    equal populations share one priority list drawn once and for all; other
    ties are settled by lots independent at each n, a tied state being rounded
    up with probability contested_seats / |tied_states|.

    Args:
        profile: population profile
        start: first house size of the enumerated period
    Returns:
        PeriodicExactResult with exact Fractions
    """

    reduced = profile.reduced()
    period = reduced.total
    if period > alabama.db.period_cap:
        raise alabama.exceptions.PeriodTooLarge(f"period {period} exceeds cap {alabama.db.period_cap}")
    if start < 0:
        raise alabama.exceptions.InputError(f"start must be nonnegative: {start}")

    # population classes: states with equal populations
    values = sorted(set(reduced.populations))
    class_of = [values.index(p) for p in reduced.populations]
    sizes = [class_of.count(c) for c in range(len(values))]

    alabama.log(f"Enumerating period {period} with {len(values)} population classes", level=2)

    def state_at(n):
        rems = [(n * v) % period for v in values]
        floors = [(n * v) // period for v in values]
        leftover = n - sum(f * s for f, s in zip(floors, sizes))
        status = _class_status(rems, sizes, leftover)
        return floors, [_class_cdf(st, s) for st, s in zip(status, sizes)]

    losers = [Fraction(0)] * len(values)
    floors, cdfs = state_at(start)
    for n in range(start, start + period):
        next_floors, next_cdfs = state_at(n + 1)
        for c in range(len(values)):
            if next_floors[c] == floors[c]:
                losers[c] += _expected_losers(cdfs[c], next_cdfs[c], sizes[c])
        floors, cdfs = next_floors, next_cdfs

    per_class = [losers[c] / (sizes[c] * period) for c in range(len(values))]
    per_state = tuple(per_class[c] for c in class_of)
    expected = sum(losers, Fraction(0)) / period

    return PeriodicExactResult(period, per_state, expected, profile.state_names)


def generic_shares(m: int, seed: int) -> Tuple[Fraction, ...]:
    """
    Sample m positive shares with denominator 2**62 summing to 1,
    uniformly on the discretised simplex (spacings of m-1 distinct uniform cut points).

    Args:
        m: number of states
        seed: random seed
    """

    if m < 1:
        raise alabama.exceptions.InputError(f"number of states must be at least 1: {m}")

    numerators = _spacings(numpy.random.default_rng(seed), m, GENERIC_DENOMINATOR)

    return tuple(Fraction(a, GENERIC_DENOMINATOR) for a in numerators)


def _spacings(rng: numpy.random.Generator, m: int, total: int) -> List[int]:
    """
    Split total into m positive integer parts at m-1 distinct uniform cut points.
    """

    while True:
        cuts = sorted(int(x) for x in rng.integers(1, total, size=m - 1, dtype=numpy.int64))
        if len(set(cuts)) == m - 1:
            break
    points = [0] + cuts + [total]

    return [points[k + 1] - points[k] for k in range(m)]


def empirical_frequency(shares: Sequence, N: int, policy: TiePolicy | None = None) -> ParadoxReport:
    """
    Simulate house sizes 1..N for shares with huge denominators and report frequencies.

    Args:
        shares: exact rational shares summing to 1
        N: horizon, at least 10**4
        policy: tie policy, default seeded lot with seed 0
    """

    if N < 10**4:
        raise alabama.exceptions.InputError(f"empirical horizon must be at least 10**4: {N}")
    if policy is None:
        policy = TiePolicy.seeded_lot(0)

    profile = PopulationProfile.from_shares(shares)

    return paradox_events(profile, N, policy)


def fluid_shares(medium: int = 4, tiny: int = 400, tiny_total: Fraction = Fraction(1, 100), seed: int = 0):
    """
    Shares for the regime of many tiny states and a few medium states
    carrying almost all of the population. All shares are distinct, with
    denominator 2**62.

    Args:
        medium: number of medium states
        tiny: number of tiny states
        tiny_total: combined share of the tiny states
        seed: random seed
    """

    if medium < 1 or tiny < 1 or not 0 < tiny_total < 1:
        raise alabama.exceptions.InputError("need medium >= 1, tiny >= 1 and 0 < tiny_total < 1")

    rng = numpy.random.default_rng(seed)
    denominator = GENERIC_DENOMINATOR
    tiny_part = int(denominator * tiny_total)
    medium_part = denominator - tiny_part

    # medium states: near-equal with a small generic jitter
    base = medium_part // medium
    jitter = base // 1000
    medium_numerators = [base + int(rng.integers(-jitter, jitter + 1)) for _ in range(medium - 1)]
    medium_numerators.append(medium_part - sum(medium_numerators))

    tiny_numerators = _spacings(rng, tiny, tiny_part)

    return tuple(Fraction(a, denominator) for a in medium_numerators + tiny_numerators)


def is_admissible(x: int, y: int) -> bool:
    """
    True when x >= 2, gcd(x, y-1) = 1 and x**2 - 3x < y.
    """

    return x >= 2 and y >= 1 and math.gcd(x, y - 1) == 1 and x * x - 3 * x < y


def highE_profile(x: int, y: int) -> PopulationProfile:
    """
    The rational family with x-1 states of population y and y states of population 1
    (shares 1/x and 1/(xy)).
    """

    if not is_admissible(x, y):
        raise alabama.exceptions.InputError(f"(x, y) = ({x}, {y}) is not admissible")

    return PopulationProfile((y,) * (x - 1) + (1,) * y)


def highE_expected(x: int, y: int) -> Fraction:
    """
    Expected number of states suffering per step for highE_profile(x, y).
    """

    return Fraction((x - 2) * (y - x + 1), x * y)


def delta_support(report: ParadoxReport) -> List[int]:
    """
    Returns the seat changes observed in a report.
    """

    return [d for d in DELTAS if sum(report.delta_histogram[d]) > 0]


def loss_multiplicity(report: ParadoxReport) -> Counter:
    """
    Returns the multi-paradox histogram as a Counter.
    """

    return Counter(report.multi_histogram)
