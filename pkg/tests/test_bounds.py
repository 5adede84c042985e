import math

import pytest

import oracles
from holey import bounds
from holey._budget import CapacityError
from holey.builder import cube_polyomino_volume
from holey.polyomino import CellSet, face_census, holes

# fixed polyomino and polycube counts, independent of this package
FIXED_2D = [1, 2, 6, 19, 63, 216, 760, 2725, 9910, 36446]
FIXED_3D = [1, 3, 15, 86, 534, 3481, 23502]


def scan_upper(d, n):
    """Linear scan of the implicit inequality in floating point."""
    best = 0
    for h in range(0, n * (d - 1) + 1):
        if 2 * d * h <= 2 * d * n - 2 * (n - 1) - 2 * d * (n + h) ** ((d - 1) / d) + 1e-9:
            best = h
    return best


@pytest.mark.parametrize("d, n, expected", [(2, 7, 1), (2, 100, 38), (2, 1, 0)])
def test_upper_bound_examples(d, n, expected):
    assert bounds.upper_bound(d, n) == expected


def test_upper_bound_hand_values():
    # h = 1: 4 <= 16 - 4 sqrt(8); h = 2: 8 > 16 - 12
    assert 4 <= 16 - 4 * math.sqrt(8)
    assert 8 > 16 - 4 * math.sqrt(9)
    # n = 100: h = 38 satisfies h <= 50.5 - sqrt(100 + h), h = 39 does not
    assert 38 <= 50.5 - math.sqrt(138) and 39 > 50.5 - math.sqrt(139)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_upper_bound_matches_float_scan(d):
    for n in range(1, 300):
        assert bounds.upper_bound(d, n) == scan_upper(d, n), n


@pytest.mark.parametrize("d", [2, 3, 4])
def test_upper_bound_monotone(d):
    vals = [bounds.upper_bound(d, n) for n in range(1, 3000)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_displayed_bound_is_violated_at_seven():
    assert bounds.displayed_upper_bound(2, 7) < 1
    assert bounds.displayed_upper_floor(2, 7) == 0
    rep = bounds.bound_report(2, 7, exact=True)
    assert rep.exact == 1
    assert rep.displayed_upper_violated


@pytest.mark.parametrize("d", [2, 3])
def test_displayed_floor_exact(d):
    for n in range(1, 500):
        assert bounds.displayed_upper_floor(d, n) == math.floor(bounds.displayed_upper_bound(d, n))


@pytest.mark.parametrize("d, n, expected", [(2, 12, 6), (3, 90, 60), (2, 1, 1)])
def test_toric_upper_bound(d, n, expected):
    assert bounds.toric_upper_bound(d, n) == expected


def test_toric_bound_is_integer_form_of_inequality():
    for d in (2, 3, 4):
        for n in range(1, 200):
            h = bounds.toric_upper_bound(d, n)
            assert 2 * d * h <= 2 * d * n - 2 * (n - 1) < 2 * d * (h + 1)


@pytest.mark.parametrize("n", range(1, 11))
def test_enumeration_counts_2d(n):
    assert sum(1 for _ in bounds.iter_fixed(2, n)) == FIXED_2D[n - 1]


@pytest.mark.parametrize("n", range(1, 8))
def test_enumeration_counts_3d(n):
    assert bounds.brute_force(3, n)["count"] == FIXED_3D[n - 1]


def test_enumeration_is_canonical():
    seen = set()
    for p in bounds.iter_fixed(2, 6):
        assert min(p) == (0, 0)
        key = frozenset(p)
        assert key not in seen
        seen.add(key)
        assert oracles.connected(p)


@pytest.mark.parametrize("n, expected", [(1, 0), (6, 0), (7, 1)])
def test_brute_force_examples(n, expected):
    assert bounds.brute_force_max_holes(2, n) == expected


def test_brute_force_witness_has_the_holes():
    r = bounds.brute_force(2, 7)
    cells = [tuple(c) for c in r["witness"]]
    assert len(cells) == 7
    assert oracles.holes_bfs(cells) == 1
    assert holes(CellSet(cells)).count == 1


def test_brute_force_parallel_matches_serial():
    a = bounds.brute_force(2, 8, jobs=1)
    b = bounds.brute_force(2, 8, jobs=2)
    assert (a["max_holes"], a["count"]) == (b["max_holes"], b["count"])


def test_brute_force_budget():
    with pytest.raises(CapacityError):
        bounds.brute_force(2, 13)
    assert bounds.brute_force(2, 5, max_n=5)["max_holes"] == 0
    with pytest.raises(CapacityError):
        bounds.brute_force(2, 6, max_n=5)


def test_face_census_spot_check_one_percent():
    polys = list(bounds.iter_fixed(2, 9))
    for p in polys[::100]:
        assert face_census(CellSet(p)).identity_ok


@pytest.mark.parametrize("n", range(1, 11))
def test_sandwich_2d(n):
    f = bounds.brute_force_max_holes(2, n)
    assert bounds.lower_bound(2, n) <= f <= bounds.upper_bound(2, n)


def test_lower_bound_examples():
    assert bounds.lower_bound(2, 52) == 12
    assert bounds.lower_bound(3, 1328) == 400
    assert bounds.lower_bound(2, 7) <= bounds.brute_force_max_holes(2, 7)


def test_asymptotic_ratio_2d():
    for i in range(1, 7):
        n = cube_polyomino_volume(2, i)
        ratio = bounds.lower_bound(2, n) / n
        assert 0.5 - 5 * n**-0.5 <= ratio <= 0.5


@pytest.mark.parametrize("d, ns", [(2, range(52, 1100, 29)), (3, [1328, 1700, 2500, 4000, 6000])])
def test_lower_display_with_reported_constant(d, ns):
    ns = list(ns)
    C = bounds.fitted_constant(d, ns)
    print(f"d={d}: fitted O-term constant C = {C:.3f}")
    for n in ns:
        lb = bounds.lower_bound(d, n)
        assert lb >= bounds.lower_display(d, n) - C * n ** ((d - 2) / d) - 1e-9
        assert lb <= bounds.upper_bound(d, n)


def test_bound_report_consistent():
    rep = bounds.bound_report(2, 200)
    assert rep.consistent()
    assert rep.exact is None
    assert isinstance(rep.displayed_upper, int)
