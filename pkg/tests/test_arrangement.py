import json

import pytest

from rigidsurf.arrangement import (
    Arrangement,
    BASE_POINTS,
    HeartData,
    arrangement_from_json,
    arrangement_to_json,
    check_structure,
    closure,
    double_points,
    format_label_table,
    heart_tsv_roundtrip,
    height_report,
    intersection_points,
    parse_label_table,
    singular_points,
)
from rigidsurf.projective import height, join, line, point


def test_closure_counts_from_base_points():
    stages = closure(BASE_POINTS, 3)
    assert [len(s.lines) for s in stages] == [6, 9, 25]
    assert [len(s.points) for s in stages] == [7, 13, 97]


def test_closure_two_points():
    stages = closure([point(1, 0, 0), point(0, 1, 0)], 1)
    assert stages[0].lines == (line(0, 0, 1),)
    assert stages[0].points == ()


def test_closure_rejects_single_point():
    with pytest.raises(ValueError):
        closure([point(1, 1, 1)], 1)


def test_closure_monotone():
    stages = closure(BASE_POINTS, 3)
    for earlier, later in zip(stages, stages[1:]):
        assert set(earlier.lines) <= set(later.lines)
        assert set(earlier.points) <= set(later.points)


def test_closure_heights_stay_small():
    stages = closure(BASE_POINTS, 3)
    assert max(height(p) for p in stages[-1].points) <= 5
    assert max(height(l) for l in stages[-1].lines) <= 25


def test_singular_points_of_triangle():
    arr = Arrangement((line(1, 0, 0), line(0, 1, 0), line(0, 0, 1)))
    table = singular_points(arr)
    assert table.num_points == 0
    assert len(double_points(arr)) == 3


def test_heart_is_table(heart):
    assert len(heart.arrangement.lines) == 34
    assert heart.pair_line_indices == tuple(range(25, 31))
    assert heart.triangle_line_indices == (31, 32, 33)
    assert heart.arrangement.lines[31] == line(8, 9, -22)
    assert heart.arrangement.lines[32] == line(20, -9, 22)
    assert heart.arrangement.lines[33] == line(20, -9, -55)


def test_heart_pair_lines(heart):
    expected = [(6, -4, 5), (6, -2, 1), (5, -3, 9), (1, -3, 13), (2, -1, -3), (9, -5, -1)]
    assert [heart.arrangement.lines[i].coeffs for i in heart.pair_line_indices] == expected


def test_heart_singular_points(heart, table):
    assert table.num_points == 51
    k = table.point_index(point(1, 0, 0))
    assert table.mu[k] == 6


def test_heart_tsv_byte_roundtrip():
    bundled, recomputed = heart_tsv_roundtrip()
    assert bundled == recomputed


def test_mu_consistency(table):
    # mu is recomputable from the membership relation
    for k in range(table.num_points):
        assert table.mu[k] == sum(
            table.is_member(i, k) for i in range(len(table.arrangement.lines))
        )
        assert table.mu[k] >= 3


def test_incidence_count_bookkeeping(heart, table):
    # total pairwise coincidences split into singular classes and doubles
    crossings = intersection_points(heart.arrangement.lines)
    n_pairs = sum(
        len(through) * (len(through) - 1) // 2 for through in crossings.values()
    )
    assert n_pairs == 34 * 33 // 2
    doubles = [p for p, through in crossings.items() if len(through) == 2]
    assert sum(table.mu) + 2 * len(doubles) == sum(
        len(through) for through in crossings.values()
    )


def test_structure_checks_pass(heart):
    report = check_structure(heart)
    assert report.all_ok
    assert report.witnesses["plus_point_count"] == 218


def test_structure_detects_perturbed_closing_line(heart):
    # closing line through P and a closure point: condition (3) must fail
    stages = closure(BASE_POINTS, 3)
    bad = join(heart.P, stages[-1].points[0])
    lines = list(heart.arrangement.lines)
    lines[31] = bad
    perturbed = HeartData(
        arrangement=Arrangement(tuple(lines)),
        line_labels=heart.line_labels,
        p=heart.p,
        r=heart.r,
        P=heart.P,
        Q=heart.Q,
        R=heart.R,
        closure_line_indices=heart.closure_line_indices,
        pair_line_indices=heart.pair_line_indices,
        triangle_line_indices=heart.triangle_line_indices,
    )
    report = check_structure(perturbed)
    assert not report.triangle_lines_avoid_extras
    assert report.witnesses["triangle_line_extra_points"]


def test_structure_detects_pair_lines_missing_closure_points(heart):
    # generic lines meeting only at P, Q, R: condition (1) must fail
    far = [point(101, 1, 1), point(1, 103, 2), point(2, 1, 107)]
    lines = list(heart.arrangement.lines)
    for slot, (designated, extra) in enumerate(zip((heart.P, heart.Q, heart.R), far)):
        lines[25 + 2 * slot] = join(designated, extra)
    perturbed = HeartData(
        arrangement=Arrangement(tuple(lines)),
        line_labels=heart.line_labels,
        p=heart.p,
        r=heart.r,
        P=heart.P,
        Q=heart.Q,
        R=heart.R,
        closure_line_indices=heart.closure_line_indices,
        pair_line_indices=heart.pair_line_indices,
        triangle_line_indices=heart.triangle_line_indices,
    )
    report = check_structure(perturbed)
    assert not report.pair_lines_hit_closure_points


def test_height_report(heart):
    rep = height_report(heart)
    assert rep["closure_points_max_height"] <= 5
    assert rep["closure_lines_max_height"] <= 25
    assert rep["pqr_heights"] == [4, 14, 25]


def test_json_roundtrip(heart):
    text = arrangement_to_json(heart.arrangement, pqr=heart.pqr)
    arr, pqr = arrangement_from_json(text)
    assert arr.lines == heart.arrangement.lines
    assert pqr == heart.pqr
    assert json.loads(text)["lines"][0] == [0, 0, 1]


def test_label_table_roundtrip(heart):
    text = format_label_table(heart.arrangement.lines, heart.line_labels)
    lines, labels = parse_label_table(text)
    assert tuple(lines) == heart.arrangement.lines
    assert tuple(labels) == heart.line_labels


def test_duplicate_lines_rejected():
    with pytest.raises(ValueError):
        Arrangement((line(1, 0, 0), line(2, 0, 0)))
