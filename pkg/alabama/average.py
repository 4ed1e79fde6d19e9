"""
Expected Alabama paradox probabilities for uniformly random population shares.

Exact fractions for the smallest state and for a given state, the limit
constant b = lim m E q_m, the curve Psi and Monte Carlo cross-checks.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy
import pandas
from scipy import integrate

import alabama
import alabama.exceptions
from alabama import formula

ExactFraction = Fraction
"""reduced rational with positive denominator"""

QUADRATURE_END = 40.0


@dataclass(frozen=True)
class MonteCarloEstimate(object):
    """
    Sample mean with its standard error (sample standard deviation / sqrt(samples)).
    """

    mean: float
    std_error: float
    samples: int
    seed: int

    def agrees_with(self, value, sigmas: float = 3.0) -> bool:
        """True if value lies within sigmas standard errors of the mean."""
        return abs(self.mean - float(value)) <= sigmas * self.std_error

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std_error": self.std_error, "samples": self.samples, "seed": self.seed}


def _check_m(m: int, smallest: int = 2) -> int:
    if isinstance(m, bool) or int(m) != m or m < smallest:
        raise alabama.exceptions.InputError(f"number of states must be an integer >= {smallest}: {m!r}")

    return int(m)


def rising_factorial(x: int, k: int) -> int:
    """
    x (x+1) ... (x+k-1)
    """

    result = 1
    for j in range(k):
        result *= x + j

    return result


def expected_min_probability(m: int) -> ExactFraction:
    """
    Expected probability that the smallest of m states suffers from the paradox,
    (1/m) sum_{k=2}^{m-1} (-1)^k C(m-1, k) / m^(k) with the rising factorial m^(k).

    Args:
        m: number of states, at least 2
    """

    m = _check_m(m)

    total = Fraction(0)
    for k in range(2, m):
        term = Fraction(math.comb(m - 1, k), rising_factorial(m, k))
        total += term if k % 2 == 0 else -term

    return total / m


def _tail_table(m: int) -> List[List[Fraction]]:
    """
    B[r][c] = sum_{j=0}^{r} (-1)^j c^(-j-1) / (r-j)! for r < m, 1 <= c <= m,
    from B(r, c) = 1 / (c r!) - B(r-1, c) / c.
    """

    table = [[Fraction(0)] * (m + 1) for _ in range(m)]
    for c in range(1, m + 1):
        table[0][c] = Fraction(1, c)
        for r in range(1, m):
            table[r][c] = Fraction(1, c * math.factorial(r)) - table[r - 1][c] / c

    return table


def expected_probability(m: int) -> ExactFraction:
    """
    Expected probability that a given state among m states suffers from the paradox.

    Evaluates the alternating sum over (s, k, i, j),
      (1/m) sum (-1)^(k+i+j) C(s+k-2, s) (m-1)!^2 (i+k+1)^(-j-1)
            / (k! i! (s-i-j)! (m-1-k-s)! (m-1+k+s)!),
    with the sum over j folded into a table of tails.

    Args:
        m: number of states, at least 2
    """

    m = _check_m(m)
    if m < 3:
        return Fraction(0)

    tails = _tail_table(m)
    factorial = [math.factorial(x) for x in range(2 * m)]
    square = factorial[m - 1] ** 2

    total = Fraction(0)
    for s in range(0, m - 2):
        for k in range(2, m - s):
            inner = Fraction(0)
            for i in range(0, s + 1):
                term = tails[s - i][i + k + 1] / factorial[i]
                inner += term if i % 2 == 0 else -term
            weight = Fraction(
                math.comb(s + k - 2, s) * square,
                factorial[k] * factorial[m - 1 - k - s] * factorial[m - 1 + k + s],
            )
            total += weight * inner if k % 2 == 0 else -weight * inner

    alabama.log(f"E q_{m} evaluated exactly", level=3)

    return total / m


def ratio_table(m_values: Sequence[int]) -> List[Tuple[int, float]]:
    """
    Returns (m, E q_m / E q_(m)) rounded to 5 decimals for each m >= 3.
    """

    rows = []
    for m in m_values:
        m = _check_m(m, 3)
        ratio = expected_probability(m) / expected_min_probability(m)
        rows.append((m, round(float(ratio), 5)))

    return rows


def expected_min_table(m_values: Sequence[int]) -> pandas.DataFrame:
    """
    Table of E q_(m) with exact fractions as strings.
    """

    values = [expected_min_probability(m) for m in m_values]

    return pandas.DataFrame({"m": list(m_values), "fraction": [str(v) for v in values], "value": [float(v) for v in values]})


def expected_table(m_values: Sequence[int]) -> pandas.DataFrame:
    """
    Table of E q_m with exact fractions as strings.
    """

    values = [expected_probability(m) for m in m_values]

    return pandas.DataFrame({"m": list(m_values), "fraction": [str(v) for v in values], "value": [float(v) for v in values]})


def asymptotic_fit(m_values: Sequence[int]) -> Tuple[float, pandas.DataFrame]:
    """
    Fit the constant C in E q_(m) = e^-1/m - 1/m^2 + C/m^3 by least squares.

    Returns:
        tuple of (C, frame with m, residual and scaled residual m^3 * residual)
    """

    m_values = [_check_m(m, 3) for m in m_values]
    residuals = numpy.array([float(expected_min_probability(m)) - (math.exp(-1) / m - 1 / m**2) for m in m_values])
    inverse_cubes = numpy.array([1.0 / m**3 for m in m_values])

    constant = float(numpy.dot(residuals, inverse_cubes) / numpy.dot(inverse_cubes, inverse_cubes))
    frame = pandas.DataFrame(
        {"m": m_values, "residual": residuals, "scaled": residuals / inverse_cubes},
    )

    return constant, frame


def _neville(h: Sequence[float], values: Sequence[float]) -> float:
    """
    Value at h = 0 of the interpolating polynomial through (h, values).
    """

    p = list(values)
    n = len(p)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i])

    return p[0]


def b_sequence_limit(tol: float | None = None, first: int = 8, step: int = 4, order: int = 5, last: int = 80) -> float:
    """
    Richardson extrapolation of m E q_m in h = 1/m to h = 0.
    Points are added until two successive extrapolations agree within tol / 10.
    """

    if tol is None:
        tol = alabama.db.b_tol

    h = []
    values = []
    previous = None
    for m in range(first, last + 1, step):
        h.append(1.0 / m)
        values.append(float(m * expected_probability(m)))
        if len(values) < order:
            continue
        estimate = _neville(h[-order:], values[-order:])
        alabama.log(f"m={m} extrapolated b={estimate:.8f}", prefix="b-> ", level=2)
        if previous is not None and abs(estimate - previous) < tol / 10:
            return estimate
        previous = estimate

    raise alabama.exceptions.NoConvergence(f"extrapolation of m E q_m did not settle within {tol} by m={last}")


def b_integral(tol: float | None = None, psi_function=None) -> float:
    """
    b = int_0^inf Psi(x) e^-x dx by adaptive quadrature on [0, 40].
    The tail beyond 40 is below e^-40 since Psi <= e^-1.

    Args:
        tol: absolute tolerance
        psi_function: integrand factor, default formula.psi
    """

    if tol is None:
        tol = alabama.db.b_tol
    if psi_function is None:
        psi_function = formula.psi

    value, error = integrate.quad(lambda x: psi_function(x) * math.exp(-x), 0.0, QUADRATURE_END, epsabs=tol / 100, limit=200)
    if error > tol:
        raise alabama.exceptions.NoConvergence(f"quadrature error {error:.3g} exceeds {tol}")

    return value


def b_estimates(tol: float | None = None) -> Tuple[float, float]:
    """
    Both estimates of b, checked against each other.

    Returns:
        tuple of (integral, sequence limit)
    Raises:
        NoConvergence: the two estimates disagree by more than tol
    """

    if tol is None:
        tol = alabama.db.b_tol
    if not 1e-6 <= tol <= 1e-3:
        raise alabama.exceptions.InputError(f"tolerance must be in [1e-6, 1e-3]: {tol}")

    by_integral = b_integral(tol)
    by_sequence = b_sequence_limit(tol)
    alabama.log(f"b: integral {by_integral:.8f}, sequence limit {by_sequence:.8f}", level=1)

    if abs(by_integral - by_sequence) > tol:
        raise alabama.exceptions.NoConvergence(f"b estimates disagree: {by_integral} and {by_sequence}")

    return by_integral, by_sequence


def limit_constant_b(method: str = "integral", tol: float | None = None) -> float:
    """
    The limit b of m E q_m as m grows, computed by the requested method and
    checked against the other one.

    Args:
        method: "integral" or "sequence-limit"
        tol: agreement tolerance in [1e-6, 1e-3], default db.b_tol
    Raises:
        NoConvergence: the two methods disagree by more than tol
    """

    if method not in ("integral", "sequence-limit"):
        raise alabama.exceptions.InputError(f"unknown method {method!r}")

    by_integral, by_sequence = b_estimates(tol)

    return by_integral if method == "integral" else by_sequence


def psi_curve(x_max: float, step: float) -> List[Tuple[float, float]]:
    """
    Tabulate Psi on 0, step, 2 step, ... <= x_max.
    """

    if x_max < 0 or step <= 0:
        raise alabama.exceptions.InputError("psi curve needs x_max >= 0 and step > 0")

    count = int(math.floor(x_max / step + 1e-9)) + 1

    return [(k * step, formula.psi(k * step)) for k in range(count)]


def _chunk_generator(seed: int, chunk: int) -> numpy.random.Generator:
    key = numpy.array([seed % 2**64, chunk], dtype=numpy.uint64)

    return numpy.random.Generator(numpy.random.Philox(key=key))


def sample_simplex(m: int, samples: int, seed: int, chunk: int = 0) -> numpy.ndarray:
    """
    Uniform share vectors on the simplex as normalised unit-rate exponentials.
    Chunk k of a run with a given seed always draws the same vectors.
    """

    rng = _chunk_generator(seed, chunk)
    t = rng.standard_exponential((samples, m))

    return t / t.sum(axis=1, keepdims=True)


def _chunk_sizes(samples: int) -> List[int]:
    size = alabama.db.mc_chunk
    sizes = [size] * (samples // size)
    if samples % size:
        sizes.append(samples % size)

    return sizes


def _map_chunks(function, sizes: Sequence[int]) -> list:
    """
    Run function(chunk_index, size) over all chunks, results in chunk order.
    """

    workers = max(1, min(alabama.db.threads, len(sizes)))
    if workers == 1:
        return [function(k, size) for k, size in enumerate(sizes)]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, range(len(sizes)), sizes))


def monte_carlo_expected(m: int, samples: int, seed: int) -> Tuple[MonteCarloEstimate, MonteCarloEstimate]:
    """
    Monte Carlo estimates of E q_m (averaged over the states of each vector)
    and E q_(m) (the smallest state of each vector).

    Args:
        m: number of states
        samples: number of share vectors, at least 1000
        seed: random seed
    Returns:
        tuple of (estimate for a given state, estimate for the smallest state)
    """

    m = _check_m(m)
    if samples < 1000:
        raise alabama.exceptions.InputError(f"at least 1000 samples required: {samples}")

    def run_chunk(chunk, size):
        shares = sample_simplex(m, size, seed, chunk)
        q = formula.q_exact_dp_batch(shares)
        given = q.mean(axis=1)
        smallest = q[numpy.arange(size), shares.argmin(axis=1)]
        alabama.log(f"chunk {chunk} done", prefix="mc-> ", level=3)
        return [(given.sum(), (given**2).sum()), (smallest.sum(), (smallest**2).sum())]

    sizes = _chunk_sizes(samples)
    alabama.log(f"Monte Carlo m={m} with {samples} samples in {len(sizes)} chunks", level=2)
    results = _map_chunks(run_chunk, sizes)

    estimates = []
    for which in range(2):
        total = math.fsum(r[which][0] for r in results)
        squares = math.fsum(r[which][1] for r in results)
        mean = total / samples
        variance = max(squares - samples * mean**2, 0.0) / (samples - 1)
        estimates.append(MonteCarloEstimate(mean, math.sqrt(variance / samples), samples, seed))

    return estimates[0], estimates[1]


def scaled_scatter(m: int, samples: int, seed: int) -> List[Tuple[float, float]]:
    """
    Scaled pairs (m p_i, m q_i) for every state of samples random share vectors.
    """

    m = _check_m(m)
    if samples < 1:
        raise alabama.exceptions.InputError("at least one sample required")

    def run_chunk(chunk, size):
        shares = sample_simplex(m, size, seed, chunk)
        return shares, formula.q_exact_dp_batch(shares)

    points = []
    for shares, q in _map_chunks(run_chunk, _chunk_sizes(samples)):
        points.extend(zip((m * shares).ravel().tolist(), (m * q).ravel().tolist()))

    return points


def scatter_deviation(points: Sequence[Tuple[float, float]]) -> numpy.ndarray:
    """
    |m q_i - Psi(m p_i)| for every scatter point.
    """

    return numpy.array([abs(y - formula.psi(x)) for x, y in points])
