"""
End-to-end checks on the worked examples: combination networks, the two-user
and three-user superposition regions, binning and covering.
"""

import unittest
from pathlib import Path

import numpy as np

from app.core.covering.experiment import covering_experiment
from app.core.covering.simulate import covering_ladder, run_covering
from app.core.geometry.compare import region_equal
from app.core.geometry.matroid import polymatroid_check
from app.core.info.admissible import assemble_joint, label_distribution, random_admissible_spec, random_target_pmf
from app.core.order.labels import MessageIndexFamily
from app.core.order.superposition import order_from_json
from app.core.regions.binning import gamma, gamma_table, project_theorem4, random_binning_joint
from app.core.regions.known import known_problem, known_region
from app.core.regions.problem import random_problem_spec
from app.core.regions.receiver import intersect_receivers, receiver_rank_function
from app.core.regions.superposition import project_theorem1, theorem2_region
from app.core.utils.fixtures import FixtureManager
from app.modules.demos import run_demo

FIXTURES = FixtureManager(Path(__file__).resolve().parent.parent / "fixtures")
TOL = 1e-9


class TestCombinationNetwork(unittest.TestCase):
    def test_fifteen_inequalities(self):
        """测试三用户组合网络的容量区域恰有 15 条不等式"""
        result = run_demo("combination3", fixtures=FIXTURES)
        self.assertTrue(result.passed, msg="\n".join(result.summary))


class TestLiteratureRegions(unittest.TestCase):
    def test_two_user_projection(self):
        """测试两用户消去结果与手写区域一致"""
        rng = np.random.default_rng(1500)
        base = known_problem("two_user_fm")
        for _ in range(20):
            x_prime = random_admissible_spec(base.order, rng, max_alphabet=3, q_size=2)
            joint = assemble_joint(x_prime)
            built = project_theorem1(base.with_x_prime(x_prime), joint)
            verdict = region_equal(built, known_region("two_user_fm", joint), tol=TOL)
            self.assertTrue(verdict, msg=str(verdict.to_json()))

    def test_degraded_message_sets(self):
        """测试 Körner–Marton 与 Cover 区域"""
        for name in ("korner_marton", "cover"):
            result = run_demo(name, fixtures=FIXTURES)
            self.assertTrue(result.passed, msg="\n".join(result.summary))

    def test_three_user_vertices(self):
        """测试三用户退化实例的采样顶点落在容量区域内且两区域相等"""
        for seed in range(1601, 1606):
            result = run_demo("nair_elgamal", seed=seed, fixtures=FIXTURES)
            self.assertTrue(result.passed, msg="\n".join(result.summary))

    def test_marton(self):
        """测试无分裂的分箱区域等于 Marton 区域"""
        rng = np.random.default_rng(2400)
        spec = known_problem("marton")
        for _ in range(10):
            joint = random_binning_joint(spec.F.labels, spec.K, rng, max_alphabet=2)
            verdict = region_equal(project_theorem4(spec, joint), known_region("marton", joint), tol=TOL)
            self.assertTrue(verdict, msg=str(verdict.to_json()))


class TestRandomInstances(unittest.TestCase):
    def test_split_and_exchange_forms_agree(self):
        """测试分裂形式与交换形式给出同一区域"""
        rng = np.random.default_rng(4000)
        for _ in range(30):
            spec = random_problem_spec(rng)
            joint = spec.assignment
            verdict = region_equal(project_theorem1(spec, joint), theorem2_region(spec, joint), tol=TOL)
            self.assertTrue(verdict, msg=f"{spec.describe()}: {verdict.to_json()}")

    def test_rank_functions(self):
        """测试译码秩函数是多拟阵"""
        rng = np.random.default_rng(5000)
        for _ in range(50):
            spec = random_problem_spec(rng)
            for j in range(1, spec.K + 1):
                lattice, values = receiver_rank_function(spec, j)
                result = polymatroid_check(lattice, values, TOL)
                self.assertTrue(result, msg=f"{spec.describe()} receiver {j}: {result.reasons}")

    def test_gamma_tables(self):
        """测试任意目标分布的 gamma 是反多拟阵"""
        rng = np.random.default_rng(5100)
        for _ in range(50):
            order = random_problem_spec(rng).order
            target = random_target_pmf(order.labels, rng, max_alphabet=3)
            result = gamma_table(target, order).check(TOL)
            self.assertTrue(result, msg=f"{order}: {result.reasons}")

    def test_down_sets_suffice(self):
        """测试全部子集的译码约束与只用下集的约束等价"""
        rng = np.random.default_rng(8000)
        for _ in range(20):
            spec = random_problem_spec(rng)
            joint = spec.assignment
            reduced = intersect_receivers(spec).bind(joint)
            full = intersect_receivers(spec, all_subsets=True).bind(joint)
            self.assertTrue(region_equal(reduced, full, tol=TOL), msg=spec.describe())



class TestCoveringSimulation(unittest.TestCase):
    def setUp(self):
        params = FIXTURES.section("demos", "covering")
        family = MessageIndexFamily.of(params["K"], params["labels"])
        self.order = order_from_json(family, params["order"])
        self.target = np.asarray(params["target"], dtype=float)
        threshold = gamma(label_distribution(family.labels, self.target), self.order, family.labels)
        per_label = (threshold + 0.2) / len(family)
        self.exp = covering_experiment(self.order, self.target, {s: per_label for s in family}, n=200,
                                       trials=500, seed=params["seed"], epsilon=params["epsilon"])

    def test_success_above_threshold(self):
        """测试速率高于 gamma 时覆盖成功率随码长上升"""
        ladder = covering_ladder(self.exp, [50, 100, 200])
        self.assertGreaterEqual(ladder["estimate"].iloc[-1], 0.9)
        for i in range(len(ladder) - 1):
            lo, hi = ladder.iloc[i], ladder.iloc[i + 1]
            self.assertGreaterEqual(hi["estimate"] + hi["half_width"] + lo["half_width"], lo["estimate"])

    def test_same_seed_same_estimate(self):
        """测试相同种子给出相同估计"""
        exp = self.exp.with_params(n=50, trials=50)
        self.assertEqual(run_covering(exp).successes, run_covering(exp).successes)


if __name__ == '__main__':
    unittest.main()
