import unittest
from fractions import Fraction

from src.toric_amplitudes.errors import (
    DimensionError,
    EmptyPolytopeError,
    NotSimpleError,
    PreconditionError,
    UnboundedError,
)
from src.toric_amplitudes.exact import Mat
from src.toric_amplitudes.fixture_data import load_fixture
from src.toric_amplitudes.polytope import (
    FaceRef,
    HPolytope,
    active_rows,
    dual_volume_oracle,
    face_vertices,
    faces,
    facets_of,
    is_bounded,
    is_simplex_face,
    normal_fan,
    placing_volume,
    require_irredundant,
    vertices,
)

F = Fraction
SQUARE_ROWS = [[1, 0], [0, 1], [-1, 0], [0, -1]]


def ones(n):
    return [F(1)] * n


class TestVertices(unittest.TestCase):
    def test_square(self):
        p = load_fixture("square.poly")
        points = sorted(v.point for v in vertices(p))
        self.assertEqual(points, [(0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertTrue(all(len(v.active) == 2 for v in vertices(p)))
        self.assertTrue(is_bounded(p))
        self.assertEqual(p.slacks([F(1, 2), F(1, 2)]), [F(1, 2)] * 4)

    def test_cube_faces(self):
        p = load_fixture("cube.poly")
        self.assertEqual(len(vertices(p)), 8)
        self.assertEqual(len(faces(p, 0)), 8)
        self.assertEqual(len(faces(p, 1)), 12)
        self.assertEqual(len(faces(p, 2)), 6)
        self.assertEqual(faces(p, 4), [])

    def test_unbounded(self):
        self.assertFalse(is_bounded(load_fixture("unbounded_pentagon.poly")))

    def test_not_simple(self):
        p = HPolytope(Mat.from_rows(SQUARE_ROWS + [[1, 1]]), [0, 0, 1, 1, 0])
        with self.assertRaises(NotSimpleError) as ctx:
            vertices(p)
        self.assertEqual(ctx.exception.active, (0, 1, 4))
        self.assertEqual(facets_of(p), [0, 1, 2, 3])

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            HPolytope(Mat.from_rows(SQUARE_ROWS), [1, 1, 1])


class TestNormalFan(unittest.TestCase):
    def test_square(self):
        fan = normal_fan(load_fixture("square.poly"))
        self.assertEqual(fan.max_cones, ((0, 1), (0, 3), (1, 2), (2, 3)))
        self.assertEqual(fan.rays, Mat.from_rows(SQUARE_ROWS))

    def test_redundant_row_is_dropped(self):
        p = HPolytope(Mat.from_rows(SQUARE_ROWS + [[1, 0]]), [0, 0, 1, 1, 5])
        self.assertEqual(active_rows(p), [0, 1, 2, 3])
        fan = normal_fan(p)
        self.assertEqual(fan.n, 4)
        with self.assertRaises(PreconditionError):
            require_irredundant(p)
        require_irredundant(load_fixture("pentagon.poly"))

    def test_empty(self):
        p = HPolytope(Mat.from_rows(SQUARE_ROWS), [0, 1, -1, 1])
        with self.assertRaises(EmptyPolytopeError):
            normal_fan(p)

    def test_labels_follow_rows(self):
        fan = normal_fan(load_fixture("abhy3.poly"))
        self.assertEqual(fan.labels[0], "x13")
        self.assertEqual(fan.labels[-1], "x46")


class TestFaces(unittest.TestCase):
    def test_simplex_faces(self):
        cube = load_fixture("cube.poly")
        self.assertTrue(is_simplex_face(cube, FaceRef((0, 2), 1)))
        self.assertFalse(is_simplex_face(cube, FaceRef((0,), 2)))
        self.assertEqual(len(face_vertices(cube, FaceRef((0,), 2))), 4)
        triangle = load_fixture("simplex2.poly")
        self.assertTrue(is_simplex_face(triangle, FaceRef((0,), 1)))

    def test_face_str_is_one_based(self):
        self.assertEqual(str(FaceRef((0, 3), 1)), "{1,4}")


class TestDualVolume(unittest.TestCase):
    def test_placing_volume(self):
        square = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))]
        self.assertEqual(placing_volume(square), 2)
        self.assertEqual(placing_volume(square[:3]), 1)
        self.assertEqual(placing_volume([(F(0), F(0)), (F(1), F(1)), (F(2), F(2))]), 0)

    def test_square_and_pentagon(self):
        self.assertEqual(dual_volume_oracle(load_fixture("square.poly"), ones(4)), 4)
        self.assertEqual(dual_volume_oracle(load_fixture("pentagon.poly"), ones(5)), 5)

    def test_scaling(self):
        p = load_fixture("square.poly")
        self.assertEqual(dual_volume_oracle(p, [F(2)] * 4), 1)

    def test_preconditions(self):
        p = load_fixture("square.poly")
        with self.assertRaises(PreconditionError):
            dual_volume_oracle(p, [F(1), F(0), F(1), F(1)])
        with self.assertRaises(DimensionError):
            dual_volume_oracle(p, ones(3))
        with self.assertRaises(UnboundedError):
            dual_volume_oracle(load_fixture("unbounded_pentagon.poly"), ones(5))


if __name__ == "__main__":
    unittest.main()
