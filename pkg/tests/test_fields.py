"""Field realizations: grammar, determinism, support discipline, the shared
multiplier, effective-dimension collapse, and reduction-vs-enumeration
equality."""

import math

import numpy as np
import pytest

from smt import (
    BoxSpec,
    FieldSpec,
    RngStream,
    SupportError,
    field_spec_string,
    make_field_spec,
    parse_field_kind,
    realize,
    subgaussian_scale,
)
from smt.fields import KIND_MA


def box(center, hw):
    return BoxSpec(center=center, half_width=hw)


def brute_max_abs(r, b):
    return max(abs(r.value_at(p)) for p in b.iter_points())


# -------------------------------------------------------------------- BoxSpec


def test_box_point_count_and_bounds():
    b = box((1, -2), 3)
    assert b.npoints == 49
    assert b.lo() == (-2, -5) and b.hi() == (4, 1)
    assert len(list(b.iter_points())) == 49
    assert b.contains_point((4, 1)) and not b.contains_point((5, 1))
    assert b.contains_box(box((1, -2), 2)) and not b.contains_box(box((2, -2), 3))


def test_box_validation():
    with pytest.raises(ValueError):
        BoxSpec(center=(), half_width=1)
    with pytest.raises(ValueError):
        BoxSpec(center=(0,), half_width=-1)


def test_box_dim_mismatch_is_not_contained():
    assert not box((0, 0), 2).contains_point((0,))
    assert not box((0, 0), 2).contains_box(box((0,), 1))


# -------------------------------------------------------------------- grammar


def test_parse_simple_kinds():
    assert parse_field_kind("iid") == ("iid", None, None)
    assert parse_field_kind(" subgaussian ") == ("subgaussian", None, None)
    assert parse_field_kind("effdim-iid") == ("effdim-iid", None, 3)
    assert parse_field_kind("effdim-ma1") == ("effdim-ma1", None, 3)


def test_parse_ma_kernel():
    kind, kernel, dim = parse_field_kind("ma:[0 0]=1,[1 0]=1")
    assert kind == KIND_MA
    assert kernel == (((0, 0), 1.0), ((1, 0), 1.0))
    assert dim == 2


def test_parse_ma_negative_offsets_and_floats():
    _, kernel, dim = parse_field_kind("ma:[-1 2 0]=0.5,[0 0 0]=-1.25e-1")
    assert kernel == (((-1, 2, 0), 0.5), ((0, 0, 0), -0.125))
    assert dim == 3


@pytest.mark.parametrize(
    "bad",
    [
        "ma:",
        "ma:[0 0]",
        "ma:[0 0]=x",
        "ma:[a b]=1",
        "ma:[]=1",
        "ma:[0 0]=1,[0]=1",  # mixed dims
        "ma:(0 0)=1",
        "gaussian",
        "",
    ],
)
def test_parse_rejects_malformed_specs(bad):
    with pytest.raises(ValueError):
        parse_field_kind(bad)


def test_make_field_spec_dim_inference():
    assert make_field_spec("iid", 1.0).dim == 2
    assert make_field_spec("iid", 1.0, dim=3).dim == 3
    assert make_field_spec("effdim-iid", 1.0).dim == 3
    assert make_field_spec("ma:[0 0 0]=1", 1.0).dim == 3
    with pytest.raises(ValueError):
        make_field_spec("effdim-iid", 1.0, dim=2)
    with pytest.raises(ValueError):
        make_field_spec("ma:[0 0]=1", 1.0, dim=3)


def test_field_spec_string_roundtrip():
    for text in ("iid", "subgaussian", "effdim-iid", "effdim-ma1", "ma:[0 0]=1.0,[1 -2]=-0.5"):
        spec = make_field_spec(text, 1.3)
        again = make_field_spec(field_spec_string(spec), 1.3, dim=spec.dim)
        assert again == spec


def test_field_spec_validation():
    with pytest.raises(ValueError):
        FieldSpec("nope", 1.0, 2)
    with pytest.raises(ValueError):
        FieldSpec("effdim-iid", 1.0, 2)
    with pytest.raises(ValueError):
        FieldSpec("ma", 1.0, 2)  # no kernel
    with pytest.raises(ValueError):
        FieldSpec("ma", 1.0, 2, kernel=(((0, 0), 1.0), ((0, 0), 2.0)))  # dup offset
    with pytest.raises(ValueError):
        FieldSpec("ma", 1.0, 2, kernel=(((0, 0), 0.0),))  # all-zero
    with pytest.raises(ValueError):
        FieldSpec("ma", 1.0, 2, kernel=(((0,), 1.0),))  # offset dim
    with pytest.raises(ValueError):
        FieldSpec("iid", 1.0, 2, kernel=(((0, 0), 1.0),))  # kernel on non-ma
    with pytest.raises(ValueError):
        FieldSpec("iid", 2.0, 2)
    with pytest.raises(ValueError):
        FieldSpec("iid", 1.0, 0)


# ------------------------------------------------------------------ realize


KINDS_2D = ["iid", "subgaussian", "ma:[0 0]=1,[1 0]=1"]
KINDS_3D = ["effdim-iid", "effdim-ma1"]


@pytest.mark.parametrize("text", KINDS_2D + KINDS_3D)
def test_realize_is_deterministic(text):
    spec = make_field_spec(text, 0.9)
    sup = [box((0,) * spec.dim, 3)]
    a = realize(spec, RngStream(11, 4), sup)
    b = realize(spec, RngStream(11, 4), sup)
    for p in sup[0].iter_points():
        assert a.value_at(p) == b.value_at(p)
    assert a.max_abs_over_box(sup[0]) == b.max_abs_over_box(sup[0])


def test_realize_different_streams_differ():
    spec = make_field_spec("iid", 0.9)
    sup = [box((0, 0), 2)]
    a = realize(spec, RngStream(11, 4), sup)
    b = realize(spec, RngStream(11, 5), sup)
    assert a.value_at((0, 0)) != b.value_at((0, 0))


def test_realize_requires_support():
    spec = make_field_spec("iid", 1.0)
    with pytest.raises(SupportError):
        realize(spec, RngStream(0), [])
    with pytest.raises(SupportError):
        realize(spec, RngStream(0), [box((0, 0, 0), 1)])  # dim mismatch


def test_queries_outside_support_fail():
    spec = make_field_spec("iid", 1.0)
    r = realize(spec, RngStream(0), [box((0, 0), 2)])
    with pytest.raises(SupportError):
        r.value_at((3, 0))
    with pytest.raises(SupportError):
        r.raw_max_abs_over_box(box((0, 0), 3))
    with pytest.raises(SupportError):
        r.raw_max_abs_over_box(box((0,), 1))
    # in-support queries fine, including sub-boxes
    r.value_at((2, -2))
    r.raw_max_abs_over_box(box((1, 1), 1))


def test_iid_values_pairwise_distinct():
    spec = make_field_spec("iid", 1.5)
    r = realize(spec, RngStream(3), [box((0, 0), 3)])
    vals = [r.value_at(p) for p in box((0, 0), 3).iter_points()]
    assert len(set(vals)) == len(vals)


@pytest.mark.parametrize("text", KINDS_2D + KINDS_3D)
def test_max_query_equals_enumeration(text):
    # the reduced scan must agree exactly with brute-force point enumeration
    spec = make_field_spec(text, 0.7)
    b1 = box((0,) * spec.dim, 3)
    b2 = box((9,) + (0,) * (spec.dim - 1), 2)
    r = realize(spec, RngStream(21, 8), [b1, b2])
    for b in (b1, b2):
        assert r.max_abs_over_box(b) == brute_max_abs(r, b)


@pytest.mark.parametrize("text", KINDS_2D)
def test_sub_box_max_queries_are_consistent(text):
    # strided slices of the component arrays must agree with enumeration
    spec = make_field_spec(text, 1.1)
    outer = box((0, 0), 4)
    r = realize(spec, RngStream(5, 1), [outer])
    for sub in (box((0, 0), 1), box((2, -2), 2), box((-3, 3), 1), box((0, 0), 4)):
        assert r.max_abs_over_box(sub) == brute_max_abs(r, sub)


def test_overlapping_support_boxes_share_one_path():
    spec = make_field_spec("iid", 1.0)
    b1, b2 = box((0, 0), 3), box((2, 0), 3)
    r = realize(spec, RngStream(9), [b1, b2])
    for p in ((0, 0), (2, 2), (1, -1)):  # points in the overlap
        assert b1.contains_point(p) and b2.contains_point(p)
    # one sample path: overlap values identical no matter which box found them
    assert r.raw_max_abs_over_box(box((1, 0), 1)) == brute_max_abs(r, box((1, 0), 1))


def test_disjoint_support_groups_are_independent_blocks():
    spec = make_field_spec("iid", 1.0)
    b1, b2 = box((0, 0), 2), box((50, 0), 2)
    r = realize(spec, RngStream(9), [b1, b2])
    v1 = [r.value_at(p) for p in b1.iter_points()]
    v2 = [r.value_at(p) for p in b2.iter_points()]
    assert not set(v1) & set(v2)


# -------------------------------------------------------------- subgaussian


def test_subgaussian_multiplier_factorization():
    spec = make_field_spec("subgaussian", 1.3)
    sup = [box((0, 0), 3)]
    sampled = realize(spec, RngStream(17, 2), sup)
    forced = realize(spec, RngStream(17, 2), sup, _force_a=1.0)
    # forcing A consumes the same draws, so the Gaussian layer is untouched
    assert forced.shared_multiplier == subgaussian_scale(1.3)
    ratio = sampled.shared_multiplier / forced.shared_multiplier
    for p in sup[0].iter_points():
        assert sampled.value_at(p) == pytest.approx(ratio * forced.value_at(p), rel=1e-15)
    # raw maxima identical: the multiplier is outside the raw layer
    assert sampled.raw_max_abs_over_box(sup[0]) == forced.raw_max_abs_over_box(sup[0])


def test_subgaussian_force_a_value():
    spec = make_field_spec("subgaussian", 0.7)
    r = realize(spec, RngStream(1), [box((0, 0), 1)], _force_a=4.0)
    assert r.shared_multiplier == subgaussian_scale(0.7) * 2.0


def test_force_a_rejected_for_other_kinds():
    with pytest.raises(ValueError):
        realize(make_field_spec("iid", 1.0), RngStream(0), [box((0, 0), 1)], _force_a=1.0)


def test_non_subgaussian_multiplier_is_exactly_one():
    for text in ("iid", "ma:[0 0]=2.5", "effdim-iid", "effdim-ma1"):
        spec = make_field_spec(text, 0.8)
        r = realize(spec, RngStream(2), [box((0,) * spec.dim, 2)])
        assert r.shared_multiplier == 1.0


# ------------------------------------------------------------ moving average


def test_ma_identity_kernel_equals_iid_bitwise():
    sup = [box((0, 0), 4)]
    iid = realize(make_field_spec("iid", 0.9), RngStream(33, 7), sup)
    ma = realize(make_field_spec("ma:[0 0]=1", 0.9), RngStream(33, 7), sup)
    for p in sup[0].iter_points():
        assert iid.value_at(p) == ma.value_at(p)
    assert iid.max_abs_over_box(sup[0]) == ma.max_abs_over_box(sup[0])


def test_ma_coefficient_scales_values_exactly():
    # [0 0]=2.5 keeps the innovation grid aligned with iid, so values are the
    # iid values times 2.5 bitwise (one correctly rounded product each)
    sup = [box((0, 0), 3)]
    iid = realize(make_field_spec("iid", 1.2), RngStream(8, 1), sup)
    y = realize(make_field_spec("ma:[0 0]=2.5", 1.2), RngStream(8, 1), sup)
    for p in sup[0].iter_points():
        assert y.value_at(p) == 2.5 * iid.value_at(p)


def test_ma_one_dimensional_kernel():
    spec = make_field_spec("ma:[0]=1,[1]=1,[2]=1", 1.0)
    assert spec.dim == 1
    r = realize(spec, RngStream(4), [box((0,), 5)])
    assert r.max_abs_over_box(box((0,), 5)) == brute_max_abs(r, box((0,), 5))


# ------------------------------------------------- effective-dimension kinds


@pytest.mark.parametrize("text", KINDS_3D)
def test_plane_constancy_exact(text):
    spec = make_field_spec(text, 0.7)
    sup = [box((0, 0, 0), 9)]
    r = realize(spec, RngStream(13), sup)
    assert r.value_at((5, 2, 9)) == r.value_at((3, 0, -7))  # both on c = 3
    assert r.value_at((0, 0, 0)) == r.value_at((-4, -4, 8))  # both on c = 0
    assert r.value_at((5, 2, 9)) != r.value_at((2, 0, 0))  # c = 3 vs c = 2


@pytest.mark.parametrize("text", KINDS_3D)
def test_effdim_box_max_equals_enumeration(text):
    # n <= 3: the one-dimensional scan against full 3-d enumeration
    for n in (1, 2, 3):
        spec = make_field_spec(text, 0.7)
        b = box((0, 0, 0), n)
        r = realize(spec, RngStream(n, 77), [b])
        assert r.max_abs_over_box(b) == brute_max_abs(r, b)


def test_effdim_shifted_box_shares_the_path():
    # c-ranges of the two test boxes overlap on [2n - s, 2n]; any point pairs
    # on a shared plane must agree across boxes
    n, s = 6, 2
    spec = make_field_spec("effdim-iid", 1.1)
    b1 = box((0, 0, 0), n)
    b2 = box((2 * n + s, 0, 0), s)
    r = realize(spec, RngStream(19), [b1, b2])
    # plane c = 2n reached from b1 at (n, -n, *) and from b2 at (2n+s, s, *)
    assert r.value_at((n, -n, 0)) == r.value_at((2 * n + s, s, -s))
    # plane c = 2n - s from both boxes
    assert r.value_at((n, s - n, 0)) == r.value_at((2 * n, s, 0))


def test_effdim_path_covers_union_of_c_ranges():
    n, s = 5, 2
    spec = make_field_spec("effdim-ma1", 0.9)
    b1 = box((0, 0, 0), n)
    b2 = box((2 * n + s, 0, 0), s)
    r = realize(spec, RngStream(19), [b1, b2])
    # extreme planes are reachable: c = -2n and c = 2n + 3s
    assert math.isfinite(r.value_at((-n, n, 0)))
    assert math.isfinite(r.value_at((2 * n + 2 * s, -s, 0)))


def test_effdim_ma1_differs_from_effdim_iid():
    # same stream, different path law: the ma1 path sums adjacent innovations
    sup = [box((0, 0, 0), 4)]
    iid = realize(make_field_spec("effdim-iid", 1.0), RngStream(6, 3), sup)
    ma1 = realize(make_field_spec("effdim-ma1", 1.0), RngStream(6, 3), sup)
    vals_iid = {c: iid.value_at((c, 0, 0)) for c in range(-4, 5)}
    vals_ma1 = {c: ma1.value_at((c, 0, 0)) for c in range(-4, 5)}
    assert vals_iid != vals_ma1
