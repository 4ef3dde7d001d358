from fractions import Fraction

import pytest

from percoplane.geometry import (
    ccw_less,
    point_in_polygon,
    polygon_signed_area2,
    segments_conflict,
    to_fraction,
)

F = Fraction


def pt(x, y):
    return (F(x), F(y))


def test_to_fraction_decimal_uses_powers_of_ten():
    assert to_fraction(0.3) == F(3, 10)
    assert to_fraction("0.25") == F(1, 4)
    assert to_fraction("2/7") == F(2, 7)
    assert to_fraction(3) == F(3)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_segments_conflict_cases():
    # proper crossing
    assert segments_conflict(pt(0, 0), pt(2, 2), pt(0, 2), pt(2, 0))
    # disjoint
    assert not segments_conflict(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1))
    # shared endpoint only
    assert not segments_conflict(pt(0, 0), pt(1, 0), pt(0, 0), pt(0, 1))
    # collinear overlap from a shared endpoint
    assert segments_conflict(pt(0, 0), pt(1, 0), pt(0, 0), pt(2, 0))
    # T-touching in the interior
    assert segments_conflict(pt(0, 0), pt(2, 0), pt(1, 0), pt(1, 1))
    # duplicate
    assert segments_conflict(pt(0, 0), pt(1, 1), pt(1, 1), pt(0, 0))


def test_ccw_order():
    east, north, west, south = (F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1))
    assert ccw_less(east, north)
    assert ccw_less(north, west)
    assert ccw_less(west, south)
    assert not ccw_less(south, east)
    with pytest.raises(ValueError):
        ccw_less(east, (F(2), F(0)))


def test_signed_area_orientation():
    ccw = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]
    assert polygon_signed_area2(ccw) == 2
    assert polygon_signed_area2(list(reversed(ccw))) == -2


def test_point_in_polygon():
    poly = [pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)]
    assert point_in_polygon(pt(1, 1), poly)
    assert not point_in_polygon(pt(5, 1), poly)
    with pytest.raises(ValueError):
        point_in_polygon(pt(2, 0), poly)  # on the boundary
