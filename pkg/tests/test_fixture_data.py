import random
import unittest

from src.toric_amplitudes.errors import PreconditionError
from src.toric_amplitudes.fan import is_complete, validate
from src.toric_amplitudes.fixture_data import (
    fixture_names,
    fixture_path,
    load_fixture,
    random_polygon_fan,
    random_simple_polytope,
)
from src.toric_amplitudes.polytope import active_rows, is_bounded, vertices


class TestFixtures(unittest.TestCase):
    def test_every_fixture_loads(self):
        names = fixture_names()
        self.assertIn("pentagon.fan", names)
        self.assertIn("cuboid.poly", names)
        for name in names:
            load_fixture(name)

    def test_missing(self):
        with self.assertRaises(PreconditionError):
            fixture_path("heptagon.fan")

    def test_fans_are_valid(self):
        for name in fixture_names():
            if name.endswith(".fan"):
                validate(load_fixture(name))


class TestRandomData(unittest.TestCase):
    def test_simple_polytopes(self):
        rng = random.Random(7)
        for d, n in ((2, 5), (3, 6), (3, 7)):
            p = random_simple_polytope(rng, d, n)
            self.assertEqual((p.d, p.n), (d, n))
            self.assertTrue(is_bounded(p))
            self.assertTrue(all(len(v.active) == d for v in vertices(p)))
            self.assertEqual(active_rows(p), list(range(n)))

    def test_seeded(self):
        a = random_simple_polytope(random.Random(3), 2, 4)
        b = random_simple_polytope(random.Random(3), 2, 4)
        self.assertEqual(a.U, b.U)
        self.assertEqual(a.z, b.z)

    def test_polygon_fans(self):
        rng = random.Random(11)
        for n in range(3, 10):
            fan = random_polygon_fan(rng, n)
            self.assertEqual(fan.n, n)
            self.assertTrue(is_complete(fan))
            validate(fan, strict=True)


if __name__ == "__main__":
    unittest.main()
