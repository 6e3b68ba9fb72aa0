import random
import unittest
from fractions import Fraction

from src.toric_amplitudes.errors import FanValidationError, NotAConeError
from src.toric_amplitudes.exact import Mat
from src.toric_amplitudes.fan import (
    SimplicialFan,
    bar_fan,
    is_complete,
    product_fan,
    star_fan,
    trivial_fan,
    validate,
)
from src.toric_amplitudes.fixture_data import load_fixture, random_polygon_fan, random_simple_polytope
from src.toric_amplitudes.polytope import normal_fan


def line_fan():
    return SimplicialFan(1, Mat.from_rows([[1], [-1]]), [[0], [1]])


class TestSimplicialFan(unittest.TestCase):
    def test_pentagon_faces(self):
        fan = load_fixture("pentagon.fan")
        validate(fan, strict=True)
        self.assertEqual(fan.n, 5)
        self.assertEqual(fan.labels, ("x1", "x2", "x3", "x4", "x5"))
        self.assertEqual(len(fan.cones_of_dim(2)), 5)
        self.assertEqual(fan.cones_of_dim(1), [(0,), (1,), (2,), (3,), (4,)])
        self.assertTrue(fan.is_cone([4, 0]))
        self.assertFalse(fan.is_cone([0, 2]))
        self.assertEqual(fan.neighbours([0]), [1, 4])
        self.assertEqual(fan.det_abs((1, 2)), 1)

    def test_cone_order_is_canonical(self):
        fan = SimplicialFan(1, Mat.from_rows([[1], [-1]]), [[1], [0], [0]])
        self.assertEqual(fan.max_cones, ((0,), (1,)))

    def test_completeness(self):
        self.assertTrue(is_complete(load_fixture("pentagon.fan")))
        self.assertTrue(is_complete(load_fixture("fulton.fan")))
        self.assertFalse(is_complete(load_fixture("square_two_cones.fan")))
        self.assertFalse(is_complete(load_fixture("cone_over_square.fan")))

    def test_one_based_file(self):
        fan = load_fixture("fulton.fan")
        validate(fan)
        self.assertEqual(fan.n, 7)
        self.assertEqual(len(fan.max_cones), 10)
        self.assertIn((0, 1, 2), fan.max_cones)


class TestValidation(unittest.TestCase):
    def test_duplicate_ray(self):
        fan = SimplicialFan(2, Mat.from_rows([[1, 0], [2, 0], [0, 1]]), [[0, 2], [1, 2]])
        with self.assertRaises(FanValidationError) as ctx:
            validate(fan)
        self.assertTrue(any("duplicate ray" in d for d in ctx.exception.diagnostics))

    def test_unused_ray_and_bad_cone(self):
        fan = SimplicialFan(2, Mat.from_rows([[1, 0], [0, 1], [-1, 0], [0, -1]]), [[0, 1, 2]])
        with self.assertRaises(FanValidationError) as ctx:
            validate(fan)
        messages = " ".join(ctx.exception.diagnostics)
        self.assertIn("more than 2 rays", messages)
        self.assertIn("ray 4 lies in no cone", messages)

    def test_overlap_only_in_strict_mode(self):
        fan = SimplicialFan(2, Mat.from_rows([[1, 0], [0, 1], [1, 2], [-1, -1]]), [[0, 1], [2, 3]])
        validate(fan)
        with self.assertRaises(FanValidationError):
            validate(fan, strict=True)


class TestConstructions(unittest.TestCase):
    def test_star_fan(self):
        star = star_fan(load_fixture("pentagon.fan"), [0])
        self.assertEqual(star.ray_map, (1, 4))
        self.assertEqual(star.c_tau, 1)
        self.assertEqual(star.base.dim, 1)
        self.assertEqual(star.base.rays.to_rows(), [[1], [-1]])
        self.assertEqual(star.base.labels, ("x2", "x5"))
        self.assertTrue(is_complete(star.base))

    def test_star_fan_scale(self):
        star = star_fan(load_fixture("square_scaled.fan"), [0])
        self.assertEqual(star.c_tau, Fraction(1, 3))

    def test_star_fan_needs_a_cone(self):
        with self.assertRaises(NotAConeError):
            star_fan(load_fixture("pentagon.fan"), [0, 2])

    def test_product(self):
        square = product_fan(line_fan(), line_fan())
        self.assertEqual(square.dim, 2)
        self.assertEqual(square.n, 4)
        self.assertEqual(len(square.max_cones), 4)
        self.assertTrue(is_complete(square))
        self.assertEqual(square.labels, ("x1", "x2", "x3", "x4"))

    def test_trivial(self):
        fan = trivial_fan()
        self.assertEqual(fan.n, 0)
        self.assertTrue(is_complete(fan))

    def test_bar_fan_drops_low_dimensional_cones(self):
        bar = bar_fan(load_fixture("cone_over_square.fan"))
        self.assertEqual(bar.dropped, (5,))
        self.assertEqual(bar.ray_map, (0, 1, 2, 3, 4))
        self.assertEqual(len(bar.fan.max_cones), 4)


def random_complete_fans(seed):
    rng = random.Random(seed)
    fans = [random_polygon_fan(rng, n) for n in range(3, 9)]
    fans += [normal_fan(random_simple_polytope(rng, 3, n)) for n in (4, 5, 6, 7)]
    return fans


class TestRandomFans(unittest.TestCase):
    def setUp(self):
        self.fans = random_complete_fans(7)

    def test_random_fans_are_complete(self):
        for fan in self.fans:
            self.assertTrue(is_complete(fan), repr(fan))

    def test_stars_of_complete_fans_are_complete(self):
        for fan in self.fans:
            for tau in fan.faces:
                if tau:
                    star = star_fan(fan, tau)
                    self.assertEqual(star.base.dim, fan.dim - len(tau))
                    self.assertTrue(is_complete(star.base), f"{fan!r} at {sorted(tau)}")

    def test_star_determinants_scale_by_c_tau(self):
        for fan in self.fans:
            for tau in fan.faces:
                if not tau:
                    continue
                star = star_fan(fan, tau)
                for sigma in fan.full_cones:
                    if not tau <= set(sigma):
                        continue
                    sigma_bar = [star.ray_map.index(r) for r in sigma if r not in tau]
                    self.assertEqual(star.base.det_abs(sigma_bar), star.c_tau * fan.det_abs(sigma))

    def test_product_with_trivial_fan(self):
        for fan in self.fans:
            self.assertEqual(product_fan(fan, trivial_fan()), fan)
            self.assertEqual(product_fan(trivial_fan(), fan), fan)

    def test_pentagon_times_segment(self):
        prism = product_fan(load_fixture("pentagon.fan"), line_fan())
        self.assertEqual(prism.dim, 3)
        self.assertEqual(len(prism.max_cones), 10)
        self.assertTrue(is_complete(prism))
        validate(prism, strict=True)


if __name__ == "__main__":
    unittest.main()
