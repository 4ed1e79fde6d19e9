"""
Closed-form asymptotic probabilities of the Alabama paradox for shares which
are linearly independent over the rationals.

For state i, every other state j contributes an independent indicator with
success probability |p_i - p_j|: those larger than i form S-, those smaller
form S+, and

    q_i = E(S- - S+ - 1)_+ / m.

Routes: sequential Bernoulli convolution (the reference), elementary
symmetric polynomials, exhaustive enumeration, and a Poisson approximation
with an explicit error bound. Functions accept floats or exact Fractions;
Fractions give exact results wherever no exponential is involved.

Tied shares (p_j == p_i) contribute an indicator which is always 0.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Sequence, Tuple

import numpy
from scipy import stats

import alabama
import alabama.exceptions

METHODS = ("dp", "esp", "brute", "poisson")


@dataclass(frozen=True)
class GapVector(object):
    """
    Bernoulli parameters of the indicators around state `center`.
    gaps_above: p_j - p_i for larger states, gaps_below: p_i - p_j for smaller states.
    """

    center: int
    gaps_above: Tuple
    gaps_below: Tuple


@dataclass(frozen=True)
class SignedCountDistribution(object):
    """
    Distribution of S- - S+ as {d: probability}.
    """

    pmf: Dict[int, object]

    def expected_excess(self):
        """E(S- - S+ - 1)_+"""
        return sum((d - 1) * p for d, p in self.pmf.items() if d > 1)


@dataclass(frozen=True)
class PoissonParams(object):
    """
    Means of the Poisson variables replacing S- and S+.
    """

    lambda_minus: object
    lambda_plus: object


@dataclass(frozen=True)
class ProbabilityVector(object):
    """
    Per-state paradox probabilities with method metadata.
    """

    values: Tuple
    method: str
    exact: bool = False
    error_bounds: Tuple | None = None
    names: Tuple[str, ...] = field(default=(), compare=False)

    @property
    def total(self):
        """expected number of states suffering per step"""
        return sum(self.values)

    def to_dict(self) -> dict:
        data = {
            "method": self.method,
            "exact": self.exact,
            "states": list(self.names),
            "values": [str(v) if isinstance(v, Fraction) else float(v) for v in self.values],
        }
        if self.error_bounds is not None:
            data["error_bounds"] = [float(b) for b in self.error_bounds]

        return data


def _shares(shares: Sequence) -> List:
    """
    Validate shares and return them as a list of Fractions (exact input) or floats.
    """

    values = list(shares)
    if len(values) == 0:
        raise alabama.exceptions.InputError("no shares given")

    exact = all(isinstance(p, Rational) for p in values)
    if exact:
        values = [Fraction(p) for p in values]
        ok = sum(values) == 1
    else:
        values = [float(p) for p in values]
        ok = abs(math.fsum(values) - 1.0) < 1e-9

    if not ok:
        raise alabama.exceptions.InputError(f"shares must sum to 1, got {sum(values)}")
    if any(p < 0 for p in values):
        raise alabama.exceptions.InputError("shares must be nonnegative")

    return values


def _check_index(values: Sequence, i: int) -> None:
    if not 0 <= i < len(values):
        raise alabama.exceptions.InputError(f"state index {i} out of range for {len(values)} states")

    return


def gap_vector(shares: Sequence, i: int) -> GapVector:
    """
    Returns the gaps to the larger and smaller states around state i.
    """

    values = _shares(shares)
    _check_index(values, i)
    p = values[i]

    above = tuple(q - p for q in values if q > p)
    below = tuple(p - q for q in values if q < p)
    tied = sum(1 for q in values if q == p) - 1
    if tied > 0:
        alabama.exceptions.warning(f"state {i} shares its value with {tied} other state(s); they add no gap")

    return GapVector(i, above, below)


def bernoulli_sum_pmf(probabilities: Sequence) -> List:
    """
    PMF of a sum of independent Bernoulli variables, by sequential convolution.
    """

    pmf = [1]
    for g in probabilities:
        new = [c * (1 - g) for c in pmf] + [0]
        for k, c in enumerate(pmf):
            new[k + 1] += c * g
        pmf = new

    return pmf


def elementary_symmetric(values: Sequence, order: int | None = None) -> List:
    """
    Elementary symmetric polynomials e_0..e_order of values,
    by the triangular recurrence over the variables.
    """

    if order is None:
        order = len(values)
    e = [1] + [0] * order
    for j, x in enumerate(values):
        for k in range(min(j + 1, order), 0, -1):
            e[k] += x * e[k - 1]

    return e


def signed_count_distribution(shares: Sequence, i: int) -> SignedCountDistribution:
    """
    Returns the distribution of S- - S+ for state i.
    """

    gaps = gap_vector(shares, i)
    minus = bernoulli_sum_pmf(gaps.gaps_above)
    plus = bernoulli_sum_pmf(gaps.gaps_below)

    pmf = {}
    for a, pa in enumerate(minus):
        for b, pb in enumerate(plus):
            pmf[a - b] = pmf.get(a - b, 0) + pa * pb

    return SignedCountDistribution(pmf)


def q_exact_dp(shares: Sequence, i: int):
    """
    Probability that state i suffers from the Alabama paradox,
    (1/m) E(S- - S+ - 1)_+ with exact PMFs from Bernoulli convolution.

    Args:
        shares: shares summing to 1
        i: state index
    """

    values = _shares(shares)
    gaps = gap_vector(values, i)
    minus = bernoulli_sum_pmf(gaps.gaps_above)
    plus = bernoulli_sum_pmf(gaps.gaps_below)

    excess = values[0] * 0
    for a, pa in enumerate(minus):
        for b, pb in enumerate(plus):
            if a - b > 1:
                excess += (a - b - 1) * pa * pb

    return _scale(excess, len(values))


def q_exact_esp(shares: Sequence, i: int):
    """
    The same probability from the alternating sum of elementary symmetric
    polynomials of the gaps to the larger (e_k) and smaller (e_s) states.

    Args:
        shares: shares summing to 1
        i: state index
    """

    values = _shares(shares)
    gaps = gap_vector(values, i)
    e_above = elementary_symmetric(gaps.gaps_above)
    e_below = elementary_symmetric(gaps.gaps_below)

    total = values[0] * 0
    for k in range(2, len(e_above)):
        for s in range(len(e_below)):
            term = math.comb(s + k - 2, s) * e_above[k] * e_below[s]
            total += term if (s + k) % 2 == 0 else -term

    return _scale(total, len(values))


def q_bruteforce(shares: Sequence, i: int):
    """
    The same probability by enumerating all 2**(m-1) outcomes of the indicators.

    Args:
        shares: shares summing to 1
        i: state index
    Raises:
        TooManyStates: for more than db.brute_max_states states
    """

    values = _shares(shares)
    _check_index(values, i)
    m = len(values)
    if m > alabama.db.brute_max_states:
        raise alabama.exceptions.TooManyStates(f"{m} states is too many to enumerate")

    exact = isinstance(values[0], Fraction)
    p = values[i]
    others = [q for j, q in enumerate(values) if j != i]
    gaps = numpy.array([abs(q - p) for q in others], dtype=object if exact else numpy.float64)
    signs = numpy.array([1 if q > p else -1 for q in others], dtype=numpy.int64)

    outcomes = numpy.arange(2 ** (m - 1), dtype=numpy.int64)[:, None]
    bits = ((outcomes >> numpy.arange(m - 1, dtype=numpy.int64)[None, :]) & 1).astype(bool)
    probs = numpy.where(bits, gaps[None, :], 1 - gaps[None, :]).prod(axis=1)
    excess = numpy.maximum((bits * signs[None, :]).sum(axis=1) - 1, 0)

    total = (probs * excess).sum()
    if not exact:
        total = float(total)

    return _scale(total, m)


def q_three_states(shares: Sequence):
    """
    Three-state closed form for the smallest state, (1/3)(p1 - p3)(p2 - p3)
    with p1 >= p2 >= p3.
    """

    values = sorted(_shares(shares), reverse=True)
    if len(values) != 3:
        raise alabama.exceptions.WrongArity(f"three states required, got {len(values)}")

    return _scale((values[0] - values[2]) * (values[1] - values[2]), 3)


def q_largest_closed_form(shares: Sequence):
    """
    Probability for the smallest state,
    (1/m) prod_{j != min} (1 - (p_j - p_min)) - p_min.
    """

    values = _shares(shares)
    m = len(values)
    k = min(range(m), key=lambda j: values[j])
    p_min = values[k]

    product = 1
    for j, p in enumerate(values):
        if j != k:
            product *= 1 - (p - p_min)

    return _scale(product, m) - p_min


def q_bounds(shares: Sequence, i: int) -> Tuple[float, float]:
    """
    Lower and upper bounds for the probability of state i:
    (1/m)(e^-1 - m p_i - sum p_j^2 / 2) <= q_i < (1/m)(1 - 1/(m-1))^(m-1) < 1/(m e).

    Args:
        shares: shares summing to 1, at least three states
        i: state index
    """

    values = _shares(shares)
    _check_index(values, i)
    m = len(values)
    if m < 3:
        raise alabama.exceptions.InputError("bounds need at least three states")

    squares = math.fsum(float(p) ** 2 for p in values)
    lower = (math.exp(-1) - m * float(values[i]) - 0.5 * squares) / m
    upper = (1 - 1 / (m - 1)) ** (m - 1) / m

    return lower, upper


def poisson_params(shares: Sequence, i: int) -> PoissonParams:
    """
    Returns lambda- = sum of gaps to larger states and lambda+ = sum of gaps to smaller states.
    lambda- - lambda+ = 1 - m p_i.
    """

    gaps = gap_vector(shares, i)

    return PoissonParams(sum(gaps.gaps_above, 0), sum(gaps.gaps_below, 0))


def _poisson_cutoff(lam: float, tol: float) -> int:
    """
    Smallest J with sum_{j > J} j P(Po(lam) = j) = lam P(Po(lam) >= J) < tol.
    """

    if lam <= 0:
        return 0
    J = max(2, int(stats.poisson.isf(min(tol / lam, 0.5), lam)) + 1)
    while lam * stats.poisson.sf(J - 1, lam) >= tol:
        J += 1

    return J


def phi_series(lambda_minus: float, lambda_plus: float, tol: float | None = None, form: str = "plus") -> float:
    """
    Truncated double series for independent Poisson variables S- ~ Po(lambda-), S+ ~ Po(lambda+).

    form "plus": sum_{j >= k+2} (j - k - 1) P(S- = j) P(S+ = k)
    form "minus": sum_{j <= k} (k + 1 - j) P(S- = j) P(S+ = k)

    Args:
        lambda_minus: mean of S-
        lambda_plus: mean of S+
        tol: truncation tolerance, default db.phi_tol
        form: "plus" or "minus"
    """

    if tol is None:
        tol = alabama.db.phi_tol
    if not 0 < tol <= 1e-6:
        raise alabama.exceptions.InputError(f"tolerance must be in (0, 1e-6]: {tol}")
    lambda_minus = float(lambda_minus)
    lambda_plus = float(lambda_plus)
    if lambda_minus < 0 or lambda_plus < 0:
        raise alabama.exceptions.InputError("Poisson means must be nonnegative")

    if form == "plus":
        if lambda_minus == 0:
            return 0.0
        J = _poisson_cutoff(lambda_minus, tol)
        j = numpy.arange(J + 1)
        p_minus = stats.poisson.pmf(j, lambda_minus)
        p_plus = stats.poisson.pmf(j, lambda_plus)
        c0 = numpy.cumsum(p_plus)
        c1 = numpy.cumsum(j * p_plus)
        jj = j[2:]
        inner = (jj - 1) * c0[jj - 2] - c1[jj - 2]
        return float(numpy.sum(p_minus[2:] * inner))

    if form == "minus":
        K = _poisson_cutoff(max(lambda_plus, 1.0), tol) + 1
        k = numpy.arange(K + 1)
        p_minus = stats.poisson.pmf(k, lambda_minus)
        p_plus = stats.poisson.pmf(k, lambda_plus)
        c0 = numpy.cumsum(p_minus)
        c1 = numpy.cumsum(k * p_minus)
        inner = (k + 1) * c0 - c1
        return float(numpy.sum(p_plus * inner))

    raise alabama.exceptions.InputError(f"unknown series form {form!r}")


def phi(lambda_minus: float, lambda_plus: float, tol: float | None = None) -> float:
    """
    Phi(lambda-, lambda+) = E(S- - S+ - 1)_+ for independent Poisson S-, S+.
    """

    return phi_series(lambda_minus, lambda_plus, tol, "plus")


def phi_complement(lambda_minus: float, lambda_plus: float, tol: float | None = None) -> float:
    """
    Phi from the complementary series:
    sum_{j <= k} (k + 1 - j) P(S- = j) P(S+ = k) + lambda- - lambda+ - 1.
    """

    series = phi_series(lambda_minus, lambda_plus, tol, "minus")

    return series + float(lambda_minus) - float(lambda_plus) - 1.0


def psi(x: float, tol: float | None = None) -> float:
    """
    Psi(x) = Phi(e^-x, e^-x - 1 + x), x >= 0.
    """

    if x < 0:
        raise alabama.exceptions.InputError(f"psi needs x >= 0: {x}")
    x = float(x)

    return phi(math.exp(-x), math.expm1(-x) + x, tol)


def q_poisson(shares: Sequence, i: int, tol: float | None = None) -> Tuple[float, float]:
    """
    Poisson approximation Phi(lambda-, lambda+) / m of the probability of
    state i, with the error bound (1/m) sum_j (p_j - p_i)^2.

    Returns:
        tuple of (approximation, error_bound)
    """

    values = _shares(shares)
    _check_index(values, i)
    m = len(values)
    params = poisson_params(values, i)

    approx = phi(params.lambda_minus, params.lambda_plus, tol) / m
    bound = math.fsum(float(p - values[i]) ** 2 for p in values) / m

    return approx, bound


def q_vector(shares: Sequence, method: str = "dp", tol: float | None = None) -> ProbabilityVector:
    """
    Returns the probabilities of every state by one of the routes dp, esp, brute, poisson.
    """

    values = _shares(shares)
    exact = isinstance(values[0], Fraction)
    m = len(values)

    if method == "dp":
        probs = tuple(q_exact_dp(values, i) for i in range(m))
    elif method == "esp":
        probs = tuple(q_exact_esp(values, i) for i in range(m))
    elif method == "brute":
        probs = tuple(q_bruteforce(values, i) for i in range(m))
    elif method == "poisson":
        pairs = [q_poisson(values, i, tol) for i in range(m)]
        return ProbabilityVector(tuple(a for a, _ in pairs), method, False, tuple(b for _, b in pairs))
    else:
        raise alabama.exceptions.InputError(f"unknown method {method!r}")

    return ProbabilityVector(probs, method, exact)


def expected_count(shares: Sequence):
    """
    Expected number of states suffering from the paradox per step, sum_i q_i.
    """

    return q_vector(shares, "dp").total


def double_paradox_m5(shares: Sequence):
    """
    Probability that the two smallest of five states suffer simultaneously.

    With p1 >= ... >= p5 the probability is one fifth of
      int_0^{p3-p4} (p3-p4-x)(p2-p4-x)(p1-p4-x) dx
      + (p4-p5)(p3-p4)(p2-p4)(p1-p4)
      + int_{p4-p5}^{p3-p5} (p3-p5-x)(p2-p5-x)(p1-p5-x) dx,
    evaluated by exact antiderivatives (Fractions stay exact).

    Raises:
        WrongArity: unless there are five states
    """

    values = _shares(shares)
    if len(values) != 5:
        raise alabama.exceptions.WrongArity(f"five states required, got {len(values)}")
    p1, p2, p3, p4, p5 = sorted(values, reverse=True)

    first = _cubic_integral((p3 - p4, p2 - p4, p1 - p4), p4 - p4, p3 - p4)
    middle = (p4 - p5) * (p3 - p4) * (p2 - p4) * (p1 - p4)
    last = _cubic_integral((p3 - p5, p2 - p5, p1 - p5), p4 - p5, p3 - p5)

    return _scale(first + middle + last, 5)


def _cubic_integral(roots: Sequence, lower, upper):
    """
    int_lower^upper (a - x)(b - x)(c - x) dx for roots (a, b, c).
    """

    _, e1, e2, e3 = elementary_symmetric(roots)

    def antiderivative(x):
        return -(x**4) / 4 + e1 * x**3 / 3 - e2 * x**2 / 2 + e3 * x

    return antiderivative(upper) - antiderivative(lower)


def _scale(value, m: int):
    """
    value / m, exact for Fractions and ints.
    """

    if isinstance(value, int):
        return Fraction(value, m)

    return value / m


def q_exact_dp_batch(share_matrix: numpy.ndarray) -> numpy.ndarray:
    """
    Probabilities of every state for many share vectors at once.

    Args:
        share_matrix: array (samples, m) of shares
    Returns:
        array (samples, m) of probabilities
    """

    shares = numpy.asarray(share_matrix, dtype=numpy.float64)
    samples, m = shares.shape
    result = numpy.zeros((samples, m))
    if m < 3:
        return result

    steps = numpy.arange(m + 1)
    weights = numpy.maximum(steps[:, None] - steps[None, :] - 1, 0).astype(numpy.float64)

    for i in range(m):
        gaps = shares - shares[:, i : i + 1]
        above = numpy.maximum(gaps, 0.0)
        below = numpy.maximum(-gaps, 0.0)
        minus = _bernoulli_sum_batch(above)
        plus = _bernoulli_sum_batch(below)
        result[:, i] = numpy.einsum("sa,ab,sb->s", minus, weights, plus) / m

    return result


def _bernoulli_sum_batch(probabilities: numpy.ndarray) -> numpy.ndarray:
    samples, m = probabilities.shape
    pmf = numpy.zeros((samples, m + 1))
    pmf[:, 0] = 1.0
    for j in range(m):
        g = probabilities[:, j : j + 1]
        new = pmf * (1.0 - g)
        new[:, 1:] += pmf[:, :-1] * g
        pmf = new

    return pmf
