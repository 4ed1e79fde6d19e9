"""
Hamilton (largest remainder) apportionment in exact rational arithmetic.

All quota arithmetic is done with integers over the common denominator P (the
total population), so remainders are compared exactly and ties at the rounding
cutoff are found without numeric noise.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy

import alabama
import alabama.exceptions


@dataclass(frozen=True)
class PopulationProfile(object):
    """
    A list of states with exact integer populations.
    Shares p_i = P_i / P are exact Fractions.
    """

    populations: Tuple[int, ...]
    names: Tuple[str, ...] | None = None

    def __post_init__(self):
        populations = tuple(int(p) for p in self.populations)
        if len(populations) == 0:
            raise alabama.exceptions.InputError("a profile needs at least one state")
        if any(p < 1 for p in populations):
            raise alabama.exceptions.InputError(f"populations must be positive integers: {populations}")
        object.__setattr__(self, "populations", populations)

        if self.names is not None:
            names = tuple(str(x) for x in self.names)
            if len(names) != len(populations):
                raise alabama.exceptions.InputError("number of names and populations differ")
            object.__setattr__(self, "names", names)

    @property
    def m(self) -> int:
        """number of states"""
        return len(self.populations)

    @property
    def total(self) -> int:
        """total population P"""
        return sum(self.populations)

    @property
    def shares(self) -> Tuple[Fraction, ...]:
        """exact shares p_i"""
        total = self.total
        return tuple(Fraction(p, total) for p in self.populations)

    @property
    def state_names(self) -> Tuple[str, ...]:
        """names, defaulting to A, B, C, ..."""
        if self.names is not None:
            return self.names
        return tuple(default_name(i) for i in range(self.m))

    def reduced(self) -> "PopulationProfile":
        """
        Returns the profile with populations divided by their gcd.
        """

        g = math.gcd(*self.populations)
        return PopulationProfile(tuple(p // g for p in self.populations), self.names)

    def scaled(self, factor: int) -> "PopulationProfile":
        """
        Returns the profile with every population multiplied by factor.
        """

        return PopulationProfile(tuple(p * factor for p in self.populations), self.names)

    def permuted(self, order: Sequence[int]) -> "PopulationProfile":
        """
        Returns the profile with state order[k] moved to position k.
        """

        names = None if self.names is None else tuple(self.names[i] for i in order)
        return PopulationProfile(tuple(self.populations[i] for i in order), names)

    @classmethod
    def from_shares(cls, shares: Iterable, names: Sequence[str] | None = None) -> "PopulationProfile":
        """
        Build a profile from exact rational shares summing to 1.
        Populations are the numerators over the least common denominator.

        Args:
            shares: Fractions (or ints / decimal strings) summing to 1
            names: optional state names
        """

        shares = [Fraction(s) for s in shares]
        if sum(shares) != 1:
            raise alabama.exceptions.InputError(f"shares sum to {sum(shares)}, not 1")
        if any(s <= 0 for s in shares):
            raise alabama.exceptions.InputError("shares must be positive")

        denominator = math.lcm(*(s.denominator for s in shares))
        populations = tuple(s.numerator * (denominator // s.denominator) for s in shares)

        return cls(populations, None if names is None else tuple(names))


def default_name(index: int) -> str:
    """
    State name for index: A..Z, then S27, S28, ...
    """

    if index < 26:
        return chr(ord("A") + index)
    return f"S{index + 1}"


@dataclass(frozen=True)
class Quota(object):
    """
    Exact quotas mu_i = n * p_i with their floors and remainders.
    """

    values: Tuple[Fraction, ...]
    floors: Tuple[int, ...]
    remainders: Tuple[Fraction, ...]

    @property
    def house_size(self) -> int:
        return int(sum(self.values))

    @property
    def leftover(self) -> int:
        """seats left after the floors are assigned"""
        return self.house_size - sum(self.floors)


@dataclass(frozen=True)
class TieEvent(object):
    """
    A group of states sharing the boundary remainder at house size n,
    of which contested_seats must be rounded up.
    """

    house_size: int
    tied_states: frozenset
    contested_seats: int

    def to_dict(self) -> dict:
        return {
            "house_size": self.house_size,
            "tied_states": sorted(self.tied_states),
            "contested_seats": self.contested_seats,
        }


@dataclass(frozen=True)
class Allocation(object):
    """
    A seat vector for house size n. rounded_up holds the states given
    floor(mu_i) + 1 seats.
    """

    house_size: int
    seats: Tuple[int, ...]
    rounded_up: frozenset
    quota: Quota | None = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "house_size": self.house_size,
            "seats": list(self.seats),
            "rounded_up": sorted(self.rounded_up),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Allocation":
        return cls(int(data["house_size"]), tuple(int(s) for s in data["seats"]), frozenset(data["rounded_up"]))


@dataclass(frozen=True)
class TiePolicy(object):
    """
    How ties at the rounding cutoff are resolved.

    variant is one of "error" (raise TieUnresolved), "priority" (the fixed
    permutation in priority, earlier is rounded up first, the same list at
    every n) or "lot" (one uniform permutation of the tied group per tie
    event, drawn from a counter-based generator keyed by (seed, n)).
    """

    variant: str = "error"
    priority: Tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.variant not in ("error", "priority", "lot"):
            raise alabama.exceptions.InputError(f"unknown tie policy {self.variant!r}")
        if self.variant == "priority":
            priority = tuple(int(i) for i in self.priority)
            if sorted(priority) != list(range(len(priority))):
                raise alabama.exceptions.InputError(f"priority is not a permutation: {priority}")
            object.__setattr__(self, "priority", priority)
        if self.variant == "lot":
            object.__setattr__(self, "seed", int(self.seed) % 2**64)

    @classmethod
    def error_on_tie(cls) -> "TiePolicy":
        return cls("error")

    @classmethod
    def fixed_priority(cls, order: Sequence[int]) -> "TiePolicy":
        return cls("priority", tuple(order))

    @classmethod
    def seeded_lot(cls, seed: int) -> "TiePolicy":
        return cls("lot", (), seed)

    @classmethod
    def parse(cls, text: str) -> "TiePolicy":
        """
        Parse "error", "priority:0,1,2" or "lot:SEED".
        """

        text = text.strip()
        name, _, arg = text.partition(":")
        if name == "error" and arg == "":
            return cls.error_on_tie()
        try:
            if name == "priority":
                return cls.fixed_priority([int(x) for x in arg.split(",")])
            if name == "lot":
                return cls.seeded_lot(int(arg))
        except ValueError:
            pass
        raise alabama.exceptions.InputError(f"bad tie policy {text!r}")

    @property
    def is_stochastic(self) -> bool:
        return self.variant == "lot"

    def check(self, m: int) -> None:
        """
        Check the policy can be used with m states.
        """

        if self.variant == "priority" and len(self.priority) != m:
            raise alabama.exceptions.InputError(f"priority list has {len(self.priority)} entries for {m} states")

        return

    def resolve(self, tie: TieEvent) -> frozenset:
        """
        Returns the tied states which are rounded up.
        """

        tied = sorted(tie.tied_states)

        if self.variant == "error":
            raise alabama.exceptions.TieUnresolved(
                f"tie between states {tied} for {tie.contested_seats} seat(s) at n={tie.house_size}",
                tie,
            )

        if self.variant == "priority":
            chosen = sorted(tied, key=lambda i: self.priority.index(i))[: tie.contested_seats]
        else:
            rng = lot_generator(self.seed, tie.house_size)
            chosen = [tied[k] for k in rng.permutation(len(tied))[: tie.contested_seats]]

        return frozenset(int(i) for i in chosen)


def lot_generator(seed: int, n: int) -> numpy.random.Generator:
    """
    Returns the counter-based generator used for the lot at house size n.
    Lots at different n are independent and reproducible.
    """

    key = numpy.array([seed % 2**64, n % 2**64], dtype=numpy.uint64)

    return numpy.random.Generator(numpy.random.Philox(key=key))


def compute_quota(profile: PopulationProfile, n: int) -> Quota:
    """
    Calculate the exact quotas mu_i = n * P_i / P.

    Args:
        profile: population profile
        n: house size
    Returns:
        Quota with values, floors and remainders
    """

    n = _check_house_size(n)
    total = profile.total

    values = tuple(Fraction(n * p, total) for p in profile.populations)
    floors = tuple((n * p) // total for p in profile.populations)
    remainders = tuple(Fraction((n * p) % total, total) for p in profile.populations)

    return Quota(values, floors, remainders)


def boundary_tie(remainders: Sequence, leftover: int, n: int) -> Tuple[frozenset, TieEvent | None]:
    """
    Find the states strictly above the rounding cutoff and the tie at the cutoff.

    Remainders may be Fractions or integer numerators over a common
    denominator; only their order and equality matter.

    Args:
        remainders: remainder of every state
        leftover: number of seats to hand out by remainder
        n: house size, recorded in the TieEvent
    Returns:
        tuple of (states rounded up for sure, TieEvent or None)
    """

    if leftover <= 0:
        return frozenset(), None

    cutoff = sorted(remainders, reverse=True)[leftover - 1]
    above = frozenset(i for i, r in enumerate(remainders) if r > cutoff)
    group = frozenset(i for i, r in enumerate(remainders) if r == cutoff)
    contested = leftover - len(above)

    if contested == len(group):
        return above | group, None

    return above, TieEvent(n, group, contested)


def detect_ties(quota: Quota, n: int) -> List[TieEvent]:
    """
    Return the tie groups straddling the rounding cutoff.
    The list is empty when the cutoff is strict.

    Args:
        quota: quota computed for n
        n: house size
    """

    _, tie = boundary_tie(quota.remainders, n - sum(quota.floors), n)

    return [] if tie is None else [tie]


def allocate_remainders(
    floors: Sequence[int], remainders: Sequence, n: int, policy: TiePolicy
) -> Tuple[Tuple[int, ...], frozenset]:
    """
    Round up the states with largest remainders, resolving a boundary tie by policy.

    Returns:
        tuple of (seats, rounded_up)
    """

    leftover = n - sum(floors)
    rounded_up, tie = boundary_tie(remainders, leftover, n)
    if tie is not None:
        rounded_up = rounded_up | policy.resolve(tie)

    seats = tuple(f + 1 if i in rounded_up else f for i, f in enumerate(floors))

    return seats, rounded_up


def hamilton_allocate(profile: PopulationProfile, n: int, policy: TiePolicy | None = None) -> Allocation:
    """
    Distribute n seats by Hamilton's method.
    Floors are assigned first, then the remaining seats go to the states with
    the largest remainders.

    Args:
        profile: population profile
        n: house size
        policy: tie policy, default error-on-tie
    Returns:
        Allocation
    """

    if policy is None:
        policy = TiePolicy.error_on_tie()
    policy.check(profile.m)

    quota = compute_quota(profile, n)
    seats, rounded_up = allocate_remainders(quota.floors, quota.remainders, n, policy)

    return Allocation(n, seats, rounded_up, quota)


def _check_house_size(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise alabama.exceptions.InputError(f"house size must be a nonnegative integer: {n!r}")

    return int(n)
