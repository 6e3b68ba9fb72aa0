import unittest

from src.toric_amplitudes.config import ConfigManager
from src.toric_amplitudes.verification import CheckResult, checks, format_table, run_checks


def small_config():
    conf = ConfigManager()
    conf["verify.random_samples"] = 10
    conf["verify.random_polytopes"] = 3
    conf["verify.random_fans"] = 5
    return conf


class TestChecks(unittest.TestCase):
    conf = small_config()

    def assert_passes(self, name):
        (result,) = run_checks(self.conf, [name])
        self.assertTrue(result.passed, f"{name}: {result.detail}")

    def test_registry(self):
        self.assertEqual(
            list(checks),
            [
                "pentagon",
                "abhy",
                "hexagon",
                "octagon",
                "m-matrix",
                "image-of-U",
                "warren",
                "dual-volume",
                "interpolation",
                "product",
                "cuboid",
                "santalo",
                "smoothness",
            ],
        )

    def test_pentagon(self):
        self.assert_passes("pentagon")

    def test_abhy(self):
        self.assert_passes("abhy")

    def test_hexagon(self):
        self.assert_passes("hexagon")

    def test_octagon(self):
        self.assert_passes("octagon")

    def test_m_matrix(self):
        self.assert_passes("m-matrix")

    def test_image_of_u(self):
        self.assert_passes("image-of-U")

    def test_warren(self):
        self.assert_passes("warren")

    def test_dual_volume(self):
        self.assert_passes("dual-volume")

    def test_interpolation(self):
        self.assert_passes("interpolation")

    def test_product(self):
        self.assert_passes("product")

    def test_cuboid(self):
        self.assert_passes("cuboid")

    def test_santalo(self):
        self.assert_passes("santalo")

    def test_smoothness(self):
        self.assert_passes("smoothness")


class TestTable(unittest.TestCase):
    def test_format(self):
        results = [
            CheckResult("pentagon", "", True, "ok", 0.1),
            CheckResult("octagon", "", False, "mismatch", 0.2),
        ]
        lines = format_table(results).splitlines()
        self.assertEqual(lines[0], " 1  pentagon  pass  ok")
        self.assertEqual(lines[1], " 2  octagon   FAIL  mismatch")
        self.assertEqual(lines[-1], "1/2 checks passed")


if __name__ == "__main__":
    unittest.main()
