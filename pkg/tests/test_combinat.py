import unittest

from src.toric_amplitudes.amplitude import adjoint
from src.toric_amplitudes.combinat import (
    PrimitiveCollection,
    adj_in_irrelevant,
    bar_fan_components,
    coordinate_components,
    edge_hyperplanes,
    interpolate_adjoint,
    irrelevant_generators,
    lift_face_space,
    primitive_collections,
    split_restriction,
)
from src.toric_amplitudes.errors import PreconditionError
from src.toric_amplitudes.fan import star_fan
from src.toric_amplitudes.fixture_data import load_fixture
from src.toric_amplitudes.linear_variety import LinearVariety
from src.toric_amplitudes.poly import SparsePoly
from src.toric_amplitudes.polytope import FaceRef, normal_fan


class TestPrimitiveCollections(unittest.TestCase):
    def test_pentagon(self):
        found = [pc.rays for pc in primitive_collections(load_fixture("pentagon.fan"))]
        self.assertEqual(found, [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)])

    def test_cube(self):
        fan = normal_fan(load_fixture("cube.poly"))
        found = primitive_collections(fan)
        self.assertEqual(found, [PrimitiveCollection((0, 1)), PrimitiveCollection((2, 3)), PrimitiveCollection((4, 5))])
        self.assertEqual(str(found[0]), "{1,2}")

    def test_abhy_pairs(self):
        found = primitive_collections(normal_fan(load_fixture("abhy3.poly")))
        self.assertEqual(len(found), 15)
        self.assertTrue(all(len(pc) == 2 for pc in found))

    def test_coordinate_components(self):
        spaces = coordinate_components(load_fixture("pentagon.fan"))
        self.assertEqual(len(spaces), 5)
        self.assertTrue(all(s.dimension == 2 for s in spaces))

    def test_bar_fan_components(self):
        fan = load_fixture("cone_over_square.fan")
        spaces = bar_fan_components(fan)
        x = fan.variables
        self.assertEqual(spaces[0], LinearVariety.coordinate(x, ["x6"]))
        self.assertEqual(spaces[1:], [LinearVariety.coordinate(x, ["x1", "x3"]), LinearVariety.coordinate(x, ["x2", "x4"])])


class TestIrrelevantIdeal(unittest.TestCase):
    def test_pentagon(self):
        fan = load_fixture("pentagon.fan")
        gens = irrelevant_generators(fan)
        self.assertEqual(str(gens), "<x1*x2*x3, x1*x2*x5, x1*x4*x5, x2*x3*x4, x3*x4*x5>")
        self.assertEqual(sum(gens.monomials(fan.variables), SparsePoly.zero(fan.variables)), adjoint(fan))

    def test_membership(self):
        fan = load_fixture("pentagon.fan")
        self.assertTrue(adj_in_irrelevant(fan))
        self.assertFalse(adj_in_irrelevant(fan, SparsePoly.parse("x1*x2*x4", fan.variables)))

    def test_mixed_cone_sizes(self):
        gens = irrelevant_generators(load_fixture("cone_over_square.fan"))
        self.assertEqual(str(gens), "<x1*x2*x6, x1*x4*x6, x2*x3*x6, x3*x4*x6, x1*x2*x3*x5, x1*x2*x4*x5>")
        self.assertTrue(all(len(g) <= 4 for g in gens.generators))


class TestInterpolation(unittest.TestCase):
    def test_matches_adjoint(self):
        for name in ("pentagon.poly", "square.poly", "cube.poly", "cuboid.poly", "simplex2.poly"):
            p = load_fixture(name)
            self.assertEqual(interpolate_adjoint(p), adjoint(normal_fan(p)), name)

    def test_edge_planes(self):
        p = load_fixture("pentagon.poly")
        edges = edge_hyperplanes(p)
        self.assertEqual(len(edges), 5)
        adj = adjoint(normal_fan(p))
        for e in edges:
            space = e.space(adj.vars)
            self.assertEqual(space.dimension, 2)
            self.assertTrue(space.vanishes(adj))


class TestSplitRestriction(unittest.TestCase):
    def test_cube_facet(self):
        cube = load_fixture("cube.poly")
        split = split_restriction(cube, FaceRef((0,), 2))
        self.assertEqual(str(split), "x2*(x3 + x4)*(x5 + x6)")
        x = normal_fan(cube).variables
        restricted = adjoint(normal_fan(cube)).evaluate({**{label: 2 for label in x}, "x1": 0})
        self.assertEqual(split.expand().evaluate([0, 2, 2, 2, 2, 2]), restricted)

    def test_vertex(self):
        split = split_restriction(load_fixture("pentagon.poly"), FaceRef((0, 1), 0))
        self.assertEqual(split.factors, ())
        self.assertEqual(str(split), "x3*x4*x5")

    def test_pentagonal_facet_does_not_split(self):
        self.assertIsNone(split_restriction(load_fixture("abhy3.poly"), FaceRef((0,), 2)))


class TestLiftFaceSpace(unittest.TestCase):
    def test_cube_facet(self):
        cube = load_fixture("cube.poly")
        fan = normal_fan(cube)
        star_vars = star_fan(fan, (0,)).base.variables
        space = LinearVariety.from_forms([SparsePoly.parse("x3 + x4", star_vars)])
        lifted = lift_face_space(cube, FaceRef((0,), 2), space)
        self.assertEqual(lifted.dimension, 3)
        self.assertTrue(lifted.vanishes(adjoint(fan)))

    def test_space_off_the_face_hypersurface(self):
        cube = load_fixture("cube.poly")
        star_vars = star_fan(normal_fan(cube), (0,)).base.variables
        space = LinearVariety.coordinate(star_vars, ["x3"])
        with self.assertRaises(PreconditionError):
            lift_face_space(cube, FaceRef((0,), 2), space)


if __name__ == "__main__":
    unittest.main()
