import unittest
from fractions import Fraction

from src.toric_amplitudes.amplitude import (
    adjoint,
    amplitude,
    euler_check,
    evaluate_amplitude,
    face_restrict,
    linear_images,
    residue,
    restrict_adjoint,
    scaled_terms,
    vanishes_on_imU,
    warren_adjoint,
    y_variables,
)
from src.toric_amplitudes.errors import DimensionError, NotAConeError, PoleError
from src.toric_amplitudes.fixture_data import load_fixture
from src.toric_amplitudes.poly import SparsePoly
from src.toric_amplitudes.polytope import FaceRef, normal_fan

F = Fraction
PENTAGON_ADJOINT = "x3*x4*x5 + x1*x4*x5 + x1*x2*x5 + x1*x2*x3 + x2*x3*x4"


class TestAdjoint(unittest.TestCase):
    def setUp(self):
        self.pentagon = load_fixture("pentagon.fan")

    def test_pentagon(self):
        adj = adjoint(self.pentagon)
        self.assertEqual(adj, SparsePoly.parse(PENTAGON_ADJOINT, self.pentagon.variables))
        self.assertTrue(adj.is_homogeneous())
        self.assertEqual(adj.total_degree(), 3)

    def test_coefficients_are_determinants(self):
        fan = load_fixture("square_scaled.fan")
        expected = SparsePoly.parse("3*x3*x4 + 3*x2*x3 + x1*x4 + x1*x2", fan.variables)
        self.assertEqual(adjoint(fan), expected)
        square = load_fixture("square.fan")
        self.assertEqual(scaled_terms(square, 0, F(3)).terms, expected.terms)

    def test_low_dimensional_cones_contribute_nothing(self):
        fan = load_fixture("cone_over_square.fan")
        adj = adjoint(fan)
        self.assertEqual(len(adj), 4)
        self.assertEqual(adj.degree_in("x6"), 1)

    def test_identities(self):
        for name in ("pentagon.fan", "hexagon.fan", "fulton.fan", "cube.poly"):
            obj = load_fixture(name)
            fan = obj if name.endswith(".fan") else normal_fan(obj)
            self.assertTrue(euler_check(fan), name)
            self.assertTrue(vanishes_on_imU(fan), name)


class TestAmplitude(unittest.TestCase):
    def setUp(self):
        self.pentagon = load_fixture("pentagon.fan")

    def test_terms(self):
        amp = amplitude(self.pentagon)
        self.assertEqual(
            str(amp),
            "1/(x1*x2) + 1/(x1*x5) + 1/(x2*x3) + 1/(x3*x4) + 1/(x4*x5)",
        )

    def test_evaluate(self):
        x = [F(1), F(2), F(3), F(4), F(5)]
        self.assertEqual(evaluate_amplitude(self.pentagon, x), 1)
        product = F(120)
        self.assertEqual(adjoint(self.pentagon).evaluate(x) / product, 1)
        self.assertEqual(amplitude(self.pentagon).evaluate(x), 1)

    def test_pole(self):
        with self.assertRaises(PoleError) as ctx:
            evaluate_amplitude(self.pentagon, [F(0), F(1), F(1), F(1), F(1)])
        self.assertEqual(ctx.exception.cone, (0, 1))

    def test_wrong_length(self):
        with self.assertRaises(DimensionError):
            evaluate_amplitude(self.pentagon, [F(1)] * 4)


class TestRestriction(unittest.TestCase):
    def test_pentagon_ray(self):
        fan = load_fixture("pentagon.fan")
        result = restrict_adjoint(fan, [0])
        x = fan.variables
        self.assertEqual(result.prefactor, SparsePoly.parse("x3*x4", x))
        self.assertEqual(result.star_adjoint, SparsePoly.parse("x2 + x5", x))
        self.assertEqual(result.c_tau, 1)
        self.assertEqual(result.expand(), SparsePoly.parse("x2*x3*x4 + x3*x4*x5", x))

    def test_not_a_cone(self):
        with self.assertRaises(NotAConeError):
            restrict_adjoint(load_fixture("pentagon.fan"), [0, 2])

    def test_residue_scale(self):
        res = residue(load_fixture("square_scaled.fan"), [0])
        self.assertEqual(res.c_inv, 3)
        self.assertEqual([coef for coef, _ in res.amplitude.terms], [1, 1])

    def test_cube_facet(self):
        cube = load_fixture("cube.poly")
        result = face_restrict(cube, FaceRef((0,), 2))
        x = normal_fan(cube).variables

        def v(label):
            return SparsePoly.variable(x, label)

        self.assertEqual(result.prefactor, v("x2"))
        self.assertEqual(result.expand(), v("x2") * (v("x3") + v("x4")) * (v("x5") + v("x6")))


class TestWarren(unittest.TestCase):
    def test_pentagon(self):
        p = load_fixture("pentagon.poly")
        w = warren_adjoint(normal_fan(p), p.z)
        expected = SparsePoly.parse("5 - 3*y1 + 3*y2 - y1*y2", y_variables(2))
        self.assertEqual(w.poly, expected)
        self.assertEqual(w.degree, 2)

    def test_degree_bound(self):
        for name in ("hexagon.poly", "cube.poly", "cuboid.poly"):
            p = load_fixture(name)
            fan = normal_fan(p)
            w = warren_adjoint(fan, p.z)
            self.assertLessEqual(w.degree, fan.n - fan.dim - 1, name)

    def test_linear_images(self):
        fan = load_fixture("pentagon.fan")
        images = linear_images(fan, [F(1)] * 5)
        self.assertEqual(str(images["x3"]), "-y1 + y2 + 1")

    def test_wrong_length(self):
        with self.assertRaises(DimensionError):
            warren_adjoint(load_fixture("pentagon.fan"), [F(1)] * 3)


if __name__ == "__main__":
    unittest.main()
