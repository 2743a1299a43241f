import json
import math

import numpy as np
import pytest

from selfaffine.errors import InvalidInputError, ParseError
from selfaffine.ifs import (
    IFS,
    AffineMap,
    bounding_radius,
    compose,
    dumps_ifs,
    loads_ifs,
    validate_ifs,
)
from selfaffine.linalg_small import operator_norm

from conftest import random_affine_system


def two_maps():
    return IFS.from_arrays(
        [[[0.3, -0.2], [0.1, 0.4]], [[0.5, 0.1], [-0.2, 0.2]]],
        [(0.7, -0.1), (-0.3, 0.9)],
    )


class TestValidate:
    def test_single_contraction(self):
        report = validate_ifs(IFS.from_arrays([0.5 * np.eye(2)], [(0, 0)]))
        assert report.ok
        assert report.maps[0].norm == pytest.approx(0.5)

    def test_identity_not_contractive(self):
        report = validate_ifs(IFS.from_arrays([np.eye(2)], [(0, 0)]))
        assert not report.ok
        assert not report.maps[0].contractive
        assert "map 0" in report.summary()

    def test_sierpinski(self, sierpinski):
        report = validate_ifs(sierpinski)
        assert report.ok
        assert [m.norm for m in report.maps] == pytest.approx([0.5] * 3)

    def test_singular_rejected(self):
        report = validate_ifs(IFS.from_arrays([np.diag([0.5, 1e-13])], [(0, 0)]))
        assert not report.ok and not report.maps[0].invertible

    def test_dimension_mismatch_names_map(self):
        with pytest.raises(InvalidInputError, match=r"\[1\]"):
            IFS((AffineMap(0.5 * np.eye(2), [0, 0]), AffineMap(0.5 * np.eye(3), [0, 0, 0])))

    def test_translation_length_checked(self):
        with pytest.raises(InvalidInputError):
            AffineMap(np.eye(2) * 0.5, [0, 0, 0])

    def test_require_valid_raises(self):
        with pytest.raises(InvalidInputError, match="not contractive"):
            IFS.from_arrays([np.eye(2)], [(0, 0)]).require_valid()


class TestCompose:
    def test_empty_word_is_identity(self, sierpinski):
        f = compose(sierpinski, ())
        np.testing.assert_array_equal(f.linear, np.eye(2))
        np.testing.assert_array_equal(f.translation, np.zeros(2))

    def test_single_letter(self, sierpinski):
        for i, m in enumerate(sierpinski.maps):
            f = compose(sierpinski, (i,))
            np.testing.assert_array_equal(f.linear, m.linear)
            np.testing.assert_array_equal(f.translation, m.translation)

    def test_two_letters_pointwise(self):
        ifs = two_maps()
        f = compose(ifs, (0, 1))
        f1, f2 = ifs.maps
        np.testing.assert_allclose(f.linear, f1.linear @ f2.linear, atol=1e-15)
        np.testing.assert_allclose(f.translation, f1.linear @ f2.translation + f1.translation, atol=1e-15)
        xs = np.random.default_rng(0).uniform(-3, 3, size=(10, 2))
        for x in xs:
            np.testing.assert_allclose(f(x), f1(f2(x)), atol=1e-12)

    def test_out_of_range(self, sierpinski):
        with pytest.raises(InvalidInputError):
            compose(sierpinski, (0, 3))

    def test_concatenation(self):
        rng = np.random.default_rng(3)
        ifs = random_affine_system(rng, k=3)
        for _ in range(50):
            u = tuple(rng.integers(0, 3, size=rng.integers(0, 6)))
            v = tuple(rng.integers(0, 3, size=rng.integers(0, 6)))
            fu, fv, fuv = compose(ifs, u), compose(ifs, v), compose(ifs, u + v)
            np.testing.assert_allclose(fuv.linear, fu.linear @ fv.linear, atol=1e-12)
            np.testing.assert_allclose(fuv.translation, fu(fv.translation), atol=1e-12)

    def test_norm_bounded_by_ratio_product(self):
        rng = np.random.default_rng(4)
        ifs = random_affine_system(rng, k=3)
        lam = ifs.ratios()
        for _ in range(100):
            w = tuple(rng.integers(0, 3, size=rng.integers(1, 10)))
            assert operator_norm(compose(ifs, w).linear) <= np.prod(lam[list(w)]) + 1e-12


class TestBoundingRadius:
    def test_single_map(self):
        assert bounding_radius(IFS.from_arrays([0.5 * np.eye(2)], [(1, 0)])) == pytest.approx(2.0)

    def test_zero_translations_floor(self):
        assert bounding_radius(IFS.from_arrays([0.5 * np.eye(2)] * 2, [(0, 0)] * 2)) == 1e-9

    def test_sierpinski(self, sierpinski):
        R = bounding_radius(sierpinski)
        assert R == pytest.approx(1.0)
        theta = np.linspace(0, 2 * np.pi, 100, endpoint=False)
        boundary = R * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        for m in sierpinski.maps:
            assert np.all(np.linalg.norm(m(boundary), axis=1) <= R + 1e-12)

    def test_random_systems_map_ball_into_itself(self):
        rng = np.random.default_rng(5)
        theta = np.linspace(0, 2 * np.pi, 64, endpoint=False)
        for _ in range(50):
            ifs = random_affine_system(rng, k=int(rng.integers(1, 5)), max_norm=0.9)
            R = bounding_radius(ifs)
            boundary = R * np.stack([np.cos(theta), np.sin(theta)], axis=1)
            for m in ifs.maps:
                assert np.all(np.linalg.norm(m(boundary), axis=1) <= R + 1e-9)


class TestJson:
    def test_round_trip(self, sierpinski):
        back = loads_ifs(dumps_ifs(sierpinski))
        np.testing.assert_array_equal(back.linears, sierpinski.linears)
        np.testing.assert_array_equal(back.translations, sierpinski.translations)

    def test_syntax_error_location(self):
        text = '{"d": 2,\n "maps": [ {"A": [[1,0],[0,1]] "a": [0,0]} ]}'
        with pytest.raises(ParseError) as exc:
            loads_ifs(text)
        assert "line 2" in str(exc.value)
        assert "byte" in exc.value.location

    @pytest.mark.parametrize(
        "doc, where",
        [
            ({"d": 2}, "maps"),
            ({"d": "2", "maps": []}, "d"),
            ({"d": 2, "maps": [{"A": [[1, 0]], "a": [0, 0]}]}, "maps[0].A"),
            ({"d": 2, "maps": [{"A": [[1, 0], [0, 1]]}]}, "maps[0].a"),
            ({"d": 2, "maps": [{"A": [[1, 0], [0, 1]], "a": ["x", 0]}]}, "maps[0].a"),
        ],
    )
    def test_field_errors(self, doc, where):
        with pytest.raises(ParseError) as exc:
            loads_ifs(json.dumps(doc))
        assert exc.value.location == where

    def test_three_dimensional(self):
        doc = {"d": 3, "maps": [{"A": (0.5 * np.eye(3)).tolist(), "a": [0, 0, 1]}]}
        ifs = loads_ifs(json.dumps(doc))
        assert ifs.d == 3 and ifs.k == 1
        assert bounding_radius(ifs) == pytest.approx(2.0)


def test_similarity_ratio():
    from selfaffine.ifs import similarity

    m = similarity(0.3, angle=1.1, reflect=True)
    assert operator_norm(m.linear) == pytest.approx(0.3)
    assert abs(np.linalg.det(m.linear)) == pytest.approx(0.09)
    assert math.isclose(np.linalg.svd(m.linear, compute_uv=False)[1], 0.3)
