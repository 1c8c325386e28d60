import unittest
from dataclasses import replace
from itertools import combinations

import numpy as np

from app.core.info.admissible import (
    AdmissibleSpec,
    assemble_joint,
    check_admissible,
    generation_law,
    label_distribution,
    random_admissible_spec,
    random_target_pmf,
)
from app.core.info.distribution import (
    JointDistribution,
    VariableUniverse,
    check_table_size,
    cond_mutual_information,
    mi_symbol,
)
from app.core.info.symbols import label_of, u_name
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.superposition import make_order
from app.core.utils.error_handler import (
    DimensionMismatchError,
    DomainError,
    EvaluationError,
    InputError,
    ResourceCapError,
)


def L(tag):
    return SubsetLabel.parse(tag)


def xor_distribution():
    pmf = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            pmf[a, b, a ^ b] = 0.25
    return JointDistribution.from_table(["A", "B", "C"], pmf)


class TestJointDistribution(unittest.TestCase):
    def test_entropies(self):
        """测试均匀分布的熵"""
        dist = JointDistribution.from_table(["A", "B"], np.full((2, 2), 0.25))
        self.assertAlmostEqual(dist.entropy({"A", "B"}), 2.0)
        self.assertAlmostEqual(dist.entropy({"A"}), 1.0)
        self.assertEqual(dist.entropy(set()), 0.0)
        self.assertAlmostEqual(dist.conditional_entropy({"A"}, {"B"}), 1.0)

    def test_xor_mutual_information(self):
        """测试异或结构下的条件互信息"""
        dist = xor_distribution()
        self.assertAlmostEqual(cond_mutual_information(dist, {"A"}, {"B"}), 0.0)
        self.assertAlmostEqual(cond_mutual_information(dist, {"A"}, {"B"}, {"C"}), 1.0)
        expr = mi_symbol({"A"}, {"B"}, {"C"})
        self.assertAlmostEqual(dist.evaluate(expr), 1.0)

    def test_marginal(self):
        """测试边缘分布保持原符号顺序"""
        marginal = xor_distribution().marginal(["C", "A"])
        self.assertEqual(marginal.symbols, ("A", "C"))
        self.assertTrue(np.allclose(marginal.pmf, 0.25))

    def test_invalid_tables(self):
        """测试负概率、总质量错误与形状不符"""
        with self.assertRaises(DomainError):
            JointDistribution.from_table(["A"], np.array([1.5, -0.5]))
        with self.assertRaises(DomainError):
            JointDistribution.from_table(["A"], np.array([0.5, 0.4]))
        with self.assertRaises(DimensionMismatchError):
            JointDistribution(VariableUniverse(("A",), (3,)), np.array([0.5, 0.5]))
        with self.assertRaises(DomainError):
            VariableUniverse(("A", "A"), (2, 2))
        with self.assertRaises(EvaluationError):
            xor_distribution().entropy({"D"})

    def test_json_input_errors(self):
        """测试 JSON 输入中的字母表声明"""
        data = xor_distribution().to_json()
        self.assertEqual(data["alphabets"], [2, 2, 2])
        with self.assertRaises(InputError):
            JointDistribution.from_json({**data, "alphabets": [2, 2]})
        with self.assertRaises(InputError):
            JointDistribution.from_json({"symbols": ["A"]})

    def test_table_cap(self):
        """测试联合表大小上限"""
        check_table_size((2, 2, 2))
        with self.assertRaises(ResourceCapError):
            check_table_size((2 ** 13, 2 ** 12))


class TestShannonMeasures(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(31)
        self.symbols = ["A", "B", "C"]

    def random_dist(self):
        shape = tuple(int(k) for k in self.rng.integers(2, 4, size=len(self.symbols)))
        pmf = self.rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
        return JointDistribution.from_table(self.symbols, pmf)

    def test_cmi_matches_symbol(self):
        """测试条件互信息与符号展开的求值一致且不为负"""
        cases = [({"A"}, {"B"}, set()), ({"A"}, {"B"}, {"C"}), ({"A", "C"}, {"B"}, set()), ({"A"}, {"A", "B"}, {"C"})]
        for _ in range(20):
            dist = self.random_dist()
            for A, B, C in cases:
                value = cond_mutual_information(dist, A, B, C)
                self.assertGreaterEqual(value, -1e-12)
                self.assertAlmostEqual(value, mi_symbol(A, B, C).evaluate(dist), places=12)

    def test_independent_pair_is_exactly_zero(self):
        """测试独立变量的互信息精确为零"""
        pmf = np.outer(self.rng.dirichlet(np.ones(3)), self.rng.dirichlet(np.ones(2)))
        dist = JointDistribution.from_table(["A", "B"], pmf)
        self.assertEqual(cond_mutual_information(dist, {"A"}, {"B"}), 0.0)
        self.assertEqual(mi_symbol({"A"}, {"B"}).evaluate_exact(dist), 0)

    def test_entropy_is_monotone_and_submodular(self):
        """测试熵函数单调且子模"""
        subsets = [frozenset(c) for r in range(len(self.symbols) + 1) for c in combinations(self.symbols, r)]
        for _ in range(10):
            dist = self.random_dist()
            h = {S: dist.entropy(S) for S in subsets}
            for S in subsets:
                for T in subsets:
                    self.assertLessEqual(h[S | T] + h[S & T], h[S] + h[T] + 1e-12)
                    if S <= T:
                        self.assertLessEqual(h[S], h[T] + 1e-12)

    def test_independent_auxiliaries_identity(self):
        """测试给定 Q 条件独立时 I(U_B;U_C,Y|Q) = I(U_B;Y|U_C,Q)"""
        order = make_order(MessageIndexFamily.full(2), "discrete")
        for _ in range(5):
            joint = assemble_joint(random_admissible_spec(order, self.rng, max_alphabet=2, q_size=2))
            for j in (1, 2):
                window = [u_name(s) for s in order.labels if s.contains(j)]
                for r in range(1, len(window) + 1):
                    for B in combinations(window, r):
                        C = set(window) - set(B)
                        joint_side = cond_mutual_information(joint, B, C | {f"Y_{j}"}, {"Q"})
                        conditioned = cond_mutual_information(joint, B, {f"Y_{j}"}, C | {"Q"})
                        self.assertAlmostEqual(joint_side, conditioned, places=9)


class TestSymbols(unittest.TestCase):
    def test_label_round_trip(self):
        """测试辅助变量名与标签互换"""
        self.assertEqual(u_name(L("12")), "U_12")
        self.assertEqual(label_of("U_12"), L("12"))
        self.assertIsNone(label_of("X"))
        self.assertIsNone(label_of("Y_1"))


class TestAdmissible(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.order = make_order(MessageIndexFamily.full(2), "inclusion")
        self.spec = random_admissible_spec(self.order, self.rng, max_alphabet=2)

    def test_assembled_joint_is_admissible(self):
        """测试按生成律组装的分布满足叠加条件"""
        joint = assemble_joint(self.spec)
        self.assertEqual(joint.symbols, ("Q", "U_1", "U_2", "U_12", "X", "Y_1", "Y_2"))
        self.assertAlmostEqual(float(joint.pmf.sum()), 1.0)
        verdict = check_admissible(joint, self.order)
        self.assertTrue(verdict)
        self.assertLess(verdict.determinism_gap, 1e-9)
        self.assertLess(verdict.factorization_gap, 1e-9)

    def test_generation_law(self):
        """测试生成律是 (Q, U_F) 上的概率表"""
        law = generation_law(self.spec)
        self.assertEqual(law.shape, (1,) + tuple(self.spec.u_alphabets[s] for s in self.spec.labels))
        self.assertAlmostEqual(float(law.sum()), 1.0)
        self.assertTrue(np.all(law >= 0))

    def test_correlated_target_rejected(self):
        """测试离散序下相关的辅助变量不能分解"""
        order = make_order(MessageIndexFamily.of(2, ["1", "2"]), "discrete")
        dist = label_distribution(order.labels, np.array([[0.5, 0.0], [0.0, 0.5]]))
        verdict = check_admissible(dist, order)
        self.assertFalse(verdict)
        self.assertAlmostEqual(verdict.factorization_gap, 1.0)
        self.assertEqual(verdict.determinism_gap, 0.0)
        self.assertEqual(len(verdict.reasons), 1)

    def test_random_input_rejected(self):
        """测试 X 不是 (U_F, Q) 的函数"""
        order = make_order(MessageIndexFamily.of(1, ["1"]), "discrete")
        dist = JointDistribution.from_table(["U_1", "X"], np.full((2, 2), 0.25))
        verdict = check_admissible(dist, order)
        self.assertFalse(verdict)
        self.assertAlmostEqual(verdict.determinism_gap, 1.0)
        self.assertIn("not a function", verdict.reasons[0])

    def test_missing_auxiliary(self):
        """测试分布缺少辅助变量"""
        dist = JointDistribution.from_table(["U_1"], np.array([0.5, 0.5]))
        with self.assertRaises(DomainError):
            check_admissible(dist, self.order)

    def test_shape_validation(self):
        """测试输入映射与信道的形状检查"""
        with self.assertRaises(DimensionMismatchError):
            replace(self.spec, input_map=np.zeros((1,), dtype=int))
        with self.assertRaises(DomainError):
            replace(self.spec, input_map=self.spec.input_map + self.spec.x_alphabet)
        with self.assertRaises(DimensionMismatchError):
            self.spec.with_channel((2,), self.spec.channel)
        with self.assertRaises(DomainError):
            replace(self.spec, q_pmf=np.array([0.7]))

    def test_json_preserves_joint(self):
        """测试 X' 的 JSON 形式给出同一联合分布"""
        again = AdmissibleSpec.from_json(self.spec.to_json())
        self.assertTrue(np.allclose(assemble_joint(again).pmf, assemble_joint(self.spec).pmf))
        with self.assertRaises(InputError):
            AdmissibleSpec.from_json({"order": "inclusion"})

    def test_label_distribution_order(self):
        """测试目标分布的轴按标签规范顺序"""
        dist = label_distribution([L("12"), L("1")], np.full((2, 3), 1 / 6))
        self.assertEqual(dist.symbols, ("U_1", "U_12"))
        target = random_target_pmf([L("1"), L("2")], self.rng, max_alphabet=3)
        self.assertAlmostEqual(float(target.pmf.sum()), 1.0)
        self.assertEqual(target.symbols, ("U_1", "U_2"))


if __name__ == '__main__':
    unittest.main()
