import json
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from app.core.utils.error_handler import InputError
from app.core.utils.fixtures import FixtureManager
from app.core.utils.io_utils import fraction_from_json, fraction_to_json, load_json, write_json_atomic

PACKAGED = Path(__file__).resolve().parent.parent / "fixtures"


class TestPackagedFixtures(unittest.TestCase):
    def setUp(self):
        self.fixtures = FixtureManager(PACKAGED)

    def test_demo_sections(self):
        """测试打包的演示参数齐全"""
        self.assertIn("demos", self.fixtures.list_fixtures())
        for name in ("combination3", "two_user", "korner_marton", "cover", "nair_elgamal", "marton", "covering"):
            self.assertIsInstance(self.fixtures.section("demos", name), dict)
        self.assertEqual(self.fixtures.section("demos", "combination3")["expected_inequalities"], 15)
        self.assertEqual(self.fixtures.section("demos", "covering")["seed"], 700)

    def test_stats(self):
        """测试固定数据统计信息"""
        stats = self.fixtures.get_stats()
        self.assertGreaterEqual(stats["demos"], 7)

    def test_missing(self):
        """测试缺失的文件与条目"""
        with self.assertRaises(InputError):
            self.fixtures.section("demos", "nonexistent")
        with self.assertRaises(InputError):
            self.fixtures.load("nonexistent")


class TestFixtureRoundTrip(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def test_save_refreshes_cache(self):
        """测试保存后缓存失效"""
        fixtures = FixtureManager(self.root / "nested")
        self.assertEqual(fixtures.list_fixtures(), [])
        fixtures.save("seeds", {"a": {"seed": 1}})
        self.assertEqual(fixtures.section("seeds", "a")["seed"], 1)
        fixtures.save("seeds", {"a": {"seed": 2}})
        self.assertEqual(fixtures.section("seeds", "a")["seed"], 2)
        self.assertEqual(fixtures.get_stats(), {"seeds": 1})

    def test_atomic_write(self):
        """测试原子写入不留下临时文件"""
        path = write_json_atomic(self.root / "out" / "x.json", {"value": "3/2"})
        self.assertEqual(load_json(path), {"value": "3/2"})
        self.assertEqual([p.name for p in path.parent.iterdir()], ["x.json"])
        self.assertTrue(path.read_text(encoding="utf-8").endswith("\n"))

    def test_invalid_json(self):
        """测试损坏的 JSON 文件"""
        path = self.root / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with self.assertRaises(InputError):
            load_json(path)
        with self.assertRaises(InputError):
            load_json(self.root / "missing.json")


class TestRationals(unittest.TestCase):
    def test_fraction_forms(self):
        """测试有理数的几种输入形式"""
        self.assertEqual(fraction_to_json(Fraction(3)), "3/1")
        self.assertEqual(fraction_to_json(Fraction(-1, 2)), "-1/2")
        self.assertEqual(fraction_from_json("3/2"), Fraction(3, 2))
        self.assertEqual(fraction_from_json(" 0.25 "), Fraction(1, 4))
        self.assertEqual(fraction_from_json(7), Fraction(7))
        self.assertEqual(fraction_from_json(json.loads("0.5")), Fraction(1, 2))
        for bad in (True, "x/2", "1/0", None):
            with self.assertRaises(InputError):
                fraction_from_json(bad)


if __name__ == '__main__':
    unittest.main()
