import unittest

import numpy as np
from pydantic import ValidationError

from app.core.covering.codebook import (
    exhaustive_joint_typicality,
    generation_conditionals,
    is_jointly_typical,
)
from app.core.covering.experiment import CoveringExperiment, covering_experiment
from app.core.covering.simulate import (
    codebook_set,
    covering_ladder,
    empirical_conditionals,
    run_covering,
    wilson_interval,
)
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.superposition import make_order
from app.core.utils.error_handler import DimensionMismatchError, ResourceCapError


def L(tag):
    return SubsetLabel.parse(tag)


UNIFORM = np.full((2, 2), 0.25)
NESTED = np.array([[0.1, 0.3], [0.2, 0.4]])


def discrete_pair():
    return make_order(MessageIndexFamily.of(2, ["1", "2"]), "discrete")


def nested_pair():
    return make_order(MessageIndexFamily.of(2, ["1", "12"]), "inclusion")


class TestWilsonInterval(unittest.TestCase):
    def test_symmetric_case(self):
        """测试成功率一半时的区间"""
        center, half = wilson_interval(50, 100, 0.95)
        self.assertAlmostEqual(center, 0.5)
        self.assertGreater(half, 0.09)
        self.assertLess(half, 0.1)

    def test_zero_successes(self):
        """测试零次成功时下界为零"""
        center, half = wilson_interval(0, 10, 0.95)
        self.assertGreater(center, 0.0)
        self.assertAlmostEqual(center - half, 0.0)


class TestCoveringExperiment(unittest.TestCase):
    def test_codebook_sizes(self):
        """测试码本大小取 2^ceil(n r)"""
        exp = covering_experiment(discrete_pair(), UNIFORM, {L("1"): 0.5, L("2"): 0.55}, n=10)
        self.assertEqual(exp.codebook_sizes(), {L("1"): 32, L("2"): 64})
        self.assertEqual(exp.superposition_order().kind, "discrete")

    def test_validation(self):
        """测试速率、目标分布与标签不一致"""
        base = dict(K=2, labels=["1", "2"], target=UNIFORM.tolist(), n=4)
        with self.assertRaises(ValidationError):
            CoveringExperiment(**base, rates={"1": 0.5})
        with self.assertRaises(ValidationError):
            CoveringExperiment(**base, rates={"1": 0.5, "2": -0.1})
        with self.assertRaises(ValidationError):
            CoveringExperiment(**{**base, "target": [0.5, 0.5]}, rates={"1": 0.5, "2": 0.5})
        with self.assertRaises(ValidationError):
            CoveringExperiment(**{**base, "target": [[0.5, 0.5], [0.5, 0.5]]}, rates={"1": 0.5, "2": 0.5})

    def test_with_params(self):
        """测试参数覆盖不修改原实验"""
        exp = covering_experiment(discrete_pair(), UNIFORM, {L("1"): 0.5, L("2"): 0.5}, n=4, seed=1)
        other = exp.with_params(seed=2, n=8)
        self.assertEqual((exp.seed, exp.n), (1, 4))
        self.assertEqual((other.seed, other.n), (2, 8))


class TestCodebooks(unittest.TestCase):
    def test_generation_conditionals(self):
        """测试生成条件分布来自目标的边缘"""
        conditionals = generation_conditionals(NESTED, nested_pair())
        self.assertTrue(np.allclose(conditionals[L("12")], [0.3, 0.7]))
        self.assertTrue(np.allclose(conditionals[L("1")], [[1 / 3, 2 / 3], [3 / 7, 4 / 7]]))
        independent = generation_conditionals(NESTED, discrete_pair())
        self.assertTrue(np.allclose(independent[L("1")], [0.4, 0.6]))
        with self.assertRaises(DimensionMismatchError):
            generation_conditionals(np.array([0.5, 0.5]), nested_pair())

    def test_reproducible_codebooks(self):
        """测试同一种子与试验编号给出同一码本"""
        exp = covering_experiment(discrete_pair(), UNIFORM, {L("1"): 0.5, L("2"): 0.5}, n=16, seed=7)
        first = codebook_set(exp, 0).codebook(L("1"))
        again = codebook_set(exp, 0).codebook(L("1"))
        other = codebook_set(exp, 1).codebook(L("1"))
        self.assertEqual(first.shape, (256, 16))
        self.assertTrue(np.array_equal(first, again))
        self.assertFalse(np.array_equal(first, other))

    def test_superposition_statistics(self):
        """测试卫星码字的经验条件分布接近生成律"""
        exp = covering_experiment(nested_pair(), NESTED, {L("1"): 10 / 64, L("12"): 1 / 64}, n=64, seed=3)
        books = codebook_set(exp)
        self.assertEqual(books.generation_order, (L("12"), L("1")))
        empirical = empirical_conditionals(books, L("1"), {L("12"): 0})
        seen = ~np.isnan(empirical)
        self.assertTrue(seen.any())
        self.assertTrue(np.allclose(empirical[seen], books.conditionals[L("1")][seen], atol=0.05))

    def test_codebook_cap(self):
        """测试码本索引空间超过上限"""
        exp = covering_experiment(discrete_pair(), UNIFORM, {L("1"): 0.5, L("2"): 0.5}, n=4, codebook_cap=8)
        with self.assertRaises(ResourceCapError):
            run_covering(exp)


class TestJointTypicality(unittest.TestCase):
    def setUp(self):
        self.a = np.array([0, 0, 1, 1])
        self.b = np.array([0, 1, 0, 1])

    def test_single_tuple(self):
        """测试单个元组的稳健典型性"""
        self.assertTrue(is_jointly_typical([self.a, self.b], UNIFORM, 0.1))
        self.assertFalse(is_jointly_typical([self.a, self.a], UNIFORM, 0.1))

    def test_exhaustive_search(self):
        """测试穷举搜索与元组上限"""
        self.assertTrue(exhaustive_joint_typicality([[self.a], [self.a, self.b]], UNIFORM, 0.1))
        self.assertFalse(exhaustive_joint_typicality([[self.a], [self.a]], UNIFORM, 0.1))
        books = [np.tile(self.a, (4, 1)), np.tile(self.b, (4, 1))]
        with self.assertRaises(ResourceCapError):
            exhaustive_joint_typicality(books, UNIFORM, 0.1, cap=8)
        with self.assertRaises(DimensionMismatchError):
            exhaustive_joint_typicality([[self.a]], UNIFORM, 0.1)


class TestRunCovering(unittest.TestCase):
    def setUp(self):
        self.exp = covering_experiment(discrete_pair(), UNIFORM, {L("1"): 0.25, L("2"): 0.25}, n=8,
                                       trials=5, seed=11)

    def test_reproducible_estimate(self):
        """测试固定种子下估计可复现"""
        first = run_covering(self.exp)
        second = run_covering(self.exp)
        self.assertEqual(first.successes, second.successes)
        self.assertEqual(first.examined, second.examined)
        self.assertEqual(first.trials, 5)
        lo, hi = first.interval
        self.assertLessEqual(0.0, lo)
        self.assertLessEqual(hi, 1.0)

    def test_tuple_cap_counts_as_failure(self):
        """测试达到元组上限的试验记为失败"""
        estimate = run_covering(self.exp.with_params(tuple_cap=1))
        self.assertEqual(estimate.successes + estimate.capped_trials, estimate.trials)
        self.assertTrue(all(count == 1 for count in estimate.examined))

    def test_ladder(self):
        """测试码长阶梯的表格"""
        ladder = covering_ladder(self.exp, [4, 8])
        self.assertEqual(list(ladder["n"]), [4, 8])
        self.assertEqual(list(ladder.columns), ["n", "estimate", "half_width", "lower", "upper", "capped_trials"])


if __name__ == '__main__':
    unittest.main()
