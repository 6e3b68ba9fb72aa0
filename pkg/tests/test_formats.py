import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from src.toric_amplitudes.errors import ParseError
from src.toric_amplitudes.fan import SimplicialFan
from src.toric_amplitudes.fixture_data import fixture_path
from src.toric_amplitudes.formats import (
    dump_fan,
    dump_polytope,
    format_vector,
    jsonable,
    load,
    load_json,
    parse_fan,
    parse_indices,
    parse_polytope,
    parse_vector,
)
from src.toric_amplitudes.polytope import HPolytope, normal_fan

F = Fraction

SQUARE = {"kind": "fan", "d": 2, "rays": [[1, 0], [0, 1], [-1, 0], [0, -1]], "max_cones": [[0, 1], [1, 2], [2, 3], [0, 3]]}


class TestFanFiles(unittest.TestCase):
    def test_parse(self):
        fan = parse_fan(SQUARE)
        self.assertEqual(fan.n, 4)
        self.assertEqual(fan.max_cones, ((0, 1), (0, 3), (1, 2), (2, 3)))

    def test_one_based(self):
        data = dict(SQUARE, max_cones=[[1, 2], [2, 3], [3, 4], [1, 4]])
        self.assertEqual(parse_fan(data, one_based=True), parse_fan(SQUARE))
        self.assertEqual(parse_fan(dict(data, one_based=True)), parse_fan(SQUARE))

    def test_rationals(self):
        data = dict(SQUARE, rays=[["1/2", 0], [0, 1], [-1, 0], [0, -1]])
        self.assertEqual(parse_fan(data).ray(0), (F(1, 2), 0))

    def test_errors(self):
        bad = [
            dict(SQUARE, kind="polytope"),
            {k: v for k, v in SQUARE.items() if k != "rays"},
            dict(SQUARE, d=-1),
            dict(SQUARE, rays=[[1, 0], [0, 1], [-1, 0], [0]]),
            dict(SQUARE, max_cones=[[0, 4]]),
            dict(SQUARE, max_cones=[[0, "1"]]),
            dict(SQUARE, labels=["a", "a", "b", "c"]),
        ]
        for data in bad:
            with self.assertRaises(ParseError, msg=str(data)):
                parse_fan(data)

    def test_labels(self):
        fan = parse_fan(dict(SQUARE, labels=["a", "b", "c", "d"]))
        self.assertEqual(fan.labels, ("a", "b", "c", "d"))
        self.assertEqual(dump_fan(fan)["labels"], ["a", "b", "c", "d"])
        self.assertNotIn("labels", dump_fan(parse_fan(SQUARE)))


class TestJson(unittest.TestCase):
    def test_floats_rejected(self):
        with self.assertRaises(ParseError):
            load_json('{"kind": "fan", "d": 2, "rays": [[1.5, 0]]}')
        with self.assertRaises(ParseError):
            load_json('{"x": NaN}')

    def test_top_level_object(self):
        with self.assertRaises(ParseError):
            load_json("[1, 2]")
        with self.assertRaises(ParseError) as ctx:
            load_json("{", "broken.fan")
        self.assertIn("broken.fan", str(ctx.exception))

    def test_jsonable(self):
        self.assertEqual(jsonable({"a": [F(2), F(1, 3)], "b": (F(0),)}), {"a": [2, "1/3"], "b": [0]})


class TestLoad(unittest.TestCase):
    def test_dispatch(self):
        self.assertIsInstance(load(fixture_path("pentagon.fan")), SimplicialFan)
        self.assertIsInstance(load(fixture_path("pentagon.poly")), HPolytope)
        self.assertEqual(normal_fan(load(fixture_path("pentagon.poly"))), load(fixture_path("pentagon.fan")))

    def test_missing_file(self):
        with self.assertRaises(ParseError):
            load("no/such/file.fan")

    def test_polytope_dump_reloads(self):
        p = load(fixture_path("abhy3.poly"))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "abhy.poly"
            path.write_text(json.dumps(dump_polytope(p)))
            again = load(path)
        self.assertEqual(again.U, p.U)
        self.assertEqual(again.z, p.z)
        self.assertEqual(again.labels, p.labels)

    def test_polytope_errors(self):
        with self.assertRaises(ParseError):
            parse_polytope({"kind": "polytope", "U": [[1, 0], [0, 1]], "z": [1]})


class TestCommandLineValues(unittest.TestCase):
    def test_vector(self):
        self.assertEqual(parse_vector("1, 2/3,-4"), [1, F(2, 3), -4])
        with self.assertRaises(ParseError):
            parse_vector("")
        with self.assertRaises(ParseError):
            parse_vector("1,0.5")
        self.assertEqual(format_vector([F(1), F(-1, 2)]), "(1, -1/2)")

    def test_indices(self):
        self.assertEqual(parse_indices("1,3", 5), [0, 2])
        for bad in ("0", "6", "1,1", "a"):
            with self.assertRaises(ParseError, msg=bad):
                parse_indices(bad, 5)


if __name__ == "__main__":
    unittest.main()
