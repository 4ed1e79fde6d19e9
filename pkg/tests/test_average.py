import math
from fractions import Fraction

import numpy
import pytest

from alabama import average
from alabama.exceptions import InputError, NoConvergence

MIN_TABLE = {
    2: Fraction(0),
    3: Fraction(1, 36),
    4: Fraction(17, 480),
    5: Fraction(61, 1680),
    6: Fraction(907, 25920),
    7: Fraction(153709, 4656960),
    8: Fraction(855383, 27675648),
    9: Fraction(134964353, 4670265600),
}

GIVEN_TABLE = {
    2: Fraction(0),
    3: Fraction(1, 108),
    4: Fraction(17, 1440),
    5: Fraction(523, 43200),
    6: Fraction(2287039, 195955200),
    7: Fraction(100704757, 9144576000),
    8: Fraction(404675341849, 39230231040000),
}


@pytest.mark.parametrize("m", sorted(MIN_TABLE))
def test_expected_min_table(m):
    assert average.expected_min_probability(m) == MIN_TABLE[m]


@pytest.mark.parametrize("m", sorted(GIVEN_TABLE))
def test_expected_table(m):
    assert average.expected_probability(m) == GIVEN_TABLE[m]


def test_expected_ordering():
    for m in range(3, 16):
        smallest = average.expected_min_probability(m)
        given = average.expected_probability(m)
        assert 0 < given < smallest < math.exp(-1) / m


def test_expected_checks_m():
    for m in (1, 2.5, True):
        with pytest.raises(InputError):
            average.expected_min_probability(m)


def _unfolded_expected_probability(m):
    factorial = math.factorial
    total = Fraction(0)
    for s in range(0, m - 2):
        for k in range(2, m - s):
            for i in range(0, s + 1):
                for j in range(0, s - i + 1):
                    term = Fraction(
                        math.comb(s + k - 2, s) * factorial(m - 1) ** 2,
                        factorial(k) * factorial(i) * factorial(s - i - j) * factorial(m - 1 - k - s) * factorial(m - 1 + k + s),
                    ) / (i + k + 1) ** (j + 1)
                    total += -term if (k + i + j) % 2 else term

    return total / m


@pytest.mark.parametrize("m", [3, 5, 9, 12])
def test_expected_matches_unfolded_sum(m):
    assert average.expected_probability(m) == _unfolded_expected_probability(m)


def test_ratio_table():
    rows = average.ratio_table([3, 10, 20, 30])

    assert rows == [(3, 0.33333), (10, 0.33392), (20, 0.33439), (30, 0.33458)]

    with pytest.raises(InputError):
        average.ratio_table([2])


@pytest.mark.slow
def test_ratio_table_large():
    assert average.ratio_table([50, 100]) == [(50, 0.33474), (100, 0.33487)]


def test_tables_as_frames():
    frame = average.expected_min_table([3, 4])

    assert list(frame["fraction"]) == ["1/36", "17/480"]
    assert list(average.expected_table([3])["fraction"]) == ["1/108"]


def test_asymptotic_fit():
    m_values = [20, 50, 100, 200]
    constant, frame = average.asymptotic_fit(m_values)

    for m, residual in zip(frame["m"], frame["residual"]):
        assert abs(residual) <= 2 * abs(constant) / m**3


def test_psi_curve():
    curve = average.psi_curve(5.0, 0.5)

    assert len(curve) == 11
    assert curve[0] == (0.0, pytest.approx(math.exp(-1), abs=1e-12))
    values = [y for _, y in curve]
    assert all(y >= 0 for y in values)
    assert values[-1] < values[0]

    assert len(average.psi_curve(0.0, 1.0)) == 1

    with pytest.raises(InputError):
        average.psi_curve(1.0, 0.0)


def test_b_integral_sanity():
    value = average.b_integral(1e-6, psi_function=lambda x: math.exp(-1))

    assert value == pytest.approx(math.exp(-1), abs=1e-9)


def test_b_integral():
    assert average.b_integral(1e-4) == pytest.approx(0.12324, abs=1e-4)


def test_b_sequence_at_eight():
    assert float(8 * average.expected_probability(8)) == pytest.approx(0.08252, abs=1e-5)


def test_b_tolerance_checked():
    with pytest.raises(InputError):
        average.limit_constant_b("integral", 1e-2)

    with pytest.raises(InputError):
        average.limit_constant_b("guess", 1e-4)


def test_b_sequence_gives_up(reset_db):
    with pytest.raises(NoConvergence):
        average.b_sequence_limit(1e-6, first=4, step=1, order=3, last=8)


@pytest.mark.slow
def test_limit_constant_b():
    by_integral, by_sequence = average.b_estimates(1e-4)

    assert by_integral == pytest.approx(0.12324, abs=1e-3)
    assert by_sequence == pytest.approx(0.12324, abs=1e-3)
    assert abs(by_integral - by_sequence) <= 1e-4
    assert by_integral * math.e == pytest.approx(0.33501, abs=3e-3)
    assert average.limit_constant_b("sequence-limit", 1e-4) == by_sequence


def test_sample_simplex():
    a = average.sample_simplex(4, 100, seed=3, chunk=2)
    b = average.sample_simplex(4, 100, seed=3, chunk=2)

    assert numpy.array_equal(a, b)
    assert numpy.allclose(a.sum(axis=1), 1.0)
    assert not numpy.array_equal(a, average.sample_simplex(4, 100, seed=3, chunk=3))


def test_monte_carlo_two_states():
    given, smallest = average.monte_carlo_expected(2, 1000, 1)

    assert given.mean == 0 and smallest.mean == 0
    assert given.samples == 1000 and given.seed == 1


def test_monte_carlo_thread_count_irrelevant(reset_db):
    reset_db.mc_chunk = 1000
    reset_db.threads = 1
    one = average.monte_carlo_expected(4, 5000, 7)
    reset_db.threads = 4
    four = average.monte_carlo_expected(4, 5000, 7)

    assert one == four


def test_monte_carlo_small():
    given, smallest = average.monte_carlo_expected(3, 20000, 11)

    assert smallest.agrees_with(Fraction(1, 36), 4.0)
    assert given.agrees_with(Fraction(1, 108), 4.0)

    with pytest.raises(InputError):
        average.monte_carlo_expected(3, 999, 11)


@pytest.mark.slow
@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_monte_carlo_matches_exact(m):
    given, smallest = average.monte_carlo_expected(m, 10**6, 2024)

    assert smallest.agrees_with(MIN_TABLE[m])
    assert given.agrees_with(GIVEN_TABLE[m])


def test_scaled_scatter_two_states():
    points = average.scaled_scatter(2, 5, 1)

    assert len(points) == 10
    assert all(y == 0 for _, y in points)


@pytest.mark.slow
def test_scaled_scatter_follows_psi():
    points = average.scaled_scatter(200, 50, 5)
    deviation = average.scatter_deviation(points)

    assert len(points) == 200 * 50
    assert numpy.mean(deviation <= 0.05) >= 0.99

    smallest = min(points)
    assert smallest[1] == pytest.approx(math.exp(-1), abs=0.05)
