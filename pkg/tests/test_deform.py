import random
import unittest
from fractions import Fraction

from src.toric_amplitudes.amplitude import y_variables
from src.toric_amplitudes.deform import (
    Status,
    chamber_space,
    chamber_spaces,
    degeneration_check,
    deformation_cone,
    facet_defining,
    membership,
    shrink_vertex,
    wall_form,
)
from src.toric_amplitudes.errors import NotASimplexError, ToricError, WallNotActiveError
from src.toric_amplitudes.fixture_data import load_fixture, random_simple_polytope
from src.toric_amplitudes.poly import SparsePoly
from src.toric_amplitudes.polytope import FaceRef, normal_fan
from src.toric_amplitudes.verification import CUBOID_Z0, CUBOID_Z1

F = Fraction
BOUNDARY_Z = [F(1), F(1), F(1), F(2), F(1)]


def fractions(values):
    return [F(v) for v in values]


class TestWalls(unittest.TestCase):
    def setUp(self):
        self.pentagon = load_fixture("pentagon.poly")

    def test_pentagon_walls(self):
        walls = deformation_cone(self.pentagon)
        self.assertEqual([w.face for w in walls], [FaceRef((i,), 1) for i in range(5)])
        self.assertEqual(str(walls[3]), "{4}: x3 - x4 + x5 >= 0")
        self.assertEqual([w.value(self.pentagon.z) for w in walls], [2, 1, 1, 1, 2])

    def test_redundant_walls(self):
        # the first and last edge lengths are sums of two others
        walls = deformation_cone(self.pentagon)
        self.assertEqual(facet_defining(walls), [False, True, True, True, False])

    def test_membership(self):
        walls = deformation_cone(self.pentagon)
        self.assertIs(membership(walls, self.pentagon.z).status, Status.INTERIOR)
        boundary = membership(walls, BOUNDARY_Z)
        self.assertIs(boundary.status, Status.BOUNDARY)
        self.assertEqual(boundary.walls, (3,))
        self.assertEqual(str(boundary), "boundary (active walls: 4)")
        outside = membership(walls, fractions([1, 1, 1, 3, 1]))
        self.assertIs(outside.status, Status.OUTSIDE)

    def test_faces_that_carry_no_wall(self):
        with self.assertRaises(NotASimplexError):
            wall_form(self.pentagon, FaceRef((0, 1), 0))
        with self.assertRaises(NotASimplexError):
            wall_form(load_fixture("cube.poly"), FaceRef((0,), 2))

    def test_cuboid_redundant_wall(self):
        walls = deformation_cone(load_fixture("cuboid.poly"))
        defining = facet_defining(walls)
        (index,) = [i for i, w in enumerate(walls) if w.face.facets == (2, 4)]
        self.assertFalse(defining[index])


class TestChamberSpaces(unittest.TestCase):
    def test_pentagon(self):
        found = chamber_spaces(load_fixture("pentagon.poly"))
        self.assertEqual(len(found), 5)
        self.assertTrue(all(space.dimension == 2 for _, space in found))

    def test_cuboid(self):
        p = load_fixture("cuboid.poly")
        self.assertEqual(len(chamber_spaces(p)), 14)
        space = chamber_space(p, FaceRef((2, 3), 1))
        self.assertEqual(space.dimension, 2)


class TestDegeneration(unittest.TestCase):
    def setUp(self):
        self.pentagon = load_fixture("pentagon.poly")

    def test_shrink_vertex(self):
        self.assertEqual(shrink_vertex(self.pentagon, FaceRef((3,), 1), BOUNDARY_Z), (2, 1))
        with self.assertRaises(WallNotActiveError):
            shrink_vertex(self.pentagon, FaceRef((3,), 1), self.pentagon.z)

    def test_interior_point(self):
        report = degeneration_check(self.pentagon, FaceRef((3,), 1), self.pentagon.z)
        self.assertFalse(report.degenerate)
        self.assertEqual(str(report), "no degeneration")

    def test_outside_point(self):
        with self.assertRaises(WallNotActiveError):
            degeneration_check(self.pentagon, FaceRef((3,), 1), fractions([1, 1, 1, 3, 1]))

    def test_lost_edge_splits_off(self):
        report = degeneration_check(self.pentagon, FaceRef((3,), 1), BOUNDARY_Z)
        self.assertTrue(report.degenerate)
        self.assertEqual(report.lost_facets, (3,))
        (split,) = report.splits
        self.assertEqual(split.factor, SparsePoly.parse("-y1 + 2", y_variables(2)))
        self.assertEqual(split.factor * split.quotient, report.adjoint.poly)

    def test_cuboid_lost_facet(self):
        report = degeneration_check(load_fixture("cuboid.poly"), FaceRef((0,), 2), fractions(CUBOID_Z0))
        self.assertEqual(report.lost_facets, (0,))
        factor = SparsePoly.parse("-8*y1 - 11*y2 - 7*y3 + 7", y_variables(3))
        self.assertEqual(report.splits[0].factor, factor)

    def test_cuboid_shrunk_vertex(self):
        report = degeneration_check(load_fixture("cuboid.poly"), FaceRef((2, 3), 1), fractions(CUBOID_Z1))
        self.assertEqual(report.vertex, (0, 3, 0))
        self.assertEqual(report.adjoint.poly.evaluate([0, 3, 0]), 0)
        self.assertEqual(report.lost_facets, ())


def same_normal_fan(p, z):
    try:
        return normal_fan(p.with_z(z)) == normal_fan(p)
    except ToricError:
        return False


class TestConeProperties(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(11)

    def check_interior_iff_same_fan(self, p, draws):
        walls = deformation_cone(p)
        seen = set()
        for z in draws:
            status = membership(walls, z).status
            seen.add(status)
            self.assertEqual(status is Status.INTERIOR, same_normal_fan(p, z), f"{p!r} at {z}")
        return seen

    def test_pentagon_interior_iff_same_normal_fan(self):
        p = load_fixture("pentagon.poly")
        draws = [fractions([self.rng.randint(0, 3) for _ in range(5)]) for _ in range(60)]
        draws += [p.z, BOUNDARY_Z, fractions([1, 1, 1, 3, 1])]
        seen = self.check_interior_iff_same_fan(p, draws)
        self.assertEqual(seen, {Status.INTERIOR, Status.BOUNDARY, Status.OUTSIDE})

    def test_random_polytopes_interior_iff_same_normal_fan(self):
        for d, n in ((2, 5), (2, 6), (3, 5), (3, 6)):
            p = random_simple_polytope(self.rng, d, n)
            draws = [[c + self.rng.randint(-4, 4) for c in p.z] for _ in range(15)]
            self.check_interior_iff_same_fan(p, [p.z] + draws)

    def test_redundant_walls_cut_nothing(self):
        p = load_fixture("cuboid.poly")
        walls = deformation_cone(p)
        defining = [w for w, keep in zip(walls, facet_defining(walls)) if keep]
        self.assertLess(len(defining), len(walls))
        for _ in range(40):
            z = [c + self.rng.randint(-40, 40) for c in p.z]
            self.assertEqual(
                membership(walls, z).status is Status.OUTSIDE,
                membership(defining, z).status is Status.OUTSIDE,
            )

    def test_wall_hyperplanes_contain_the_image_of_U(self):
        for name in ("pentagon.poly", "cuboid.poly", "cube.poly"):
            p = load_fixture(name)
            for face, _ in chamber_spaces(p):
                wall = wall_form(p, face)
                for j in range(p.d):
                    self.assertEqual(wall.form.evaluate(p.U.column(j)), 0, f"{name} {face}")


if __name__ == "__main__":
    unittest.main()
