import math
import unittest
from fractions import Fraction

import numpy as np

from app.core.geometry.compare import (
    contained_in,
    evaluate,
    feasible_point,
    is_feasible,
    region_equal,
    remove_redundant,
    sample_vertices,
)
from app.core.geometry.cone import ConeGenerators, minkowski_sum_with_cone
from app.core.geometry.entropy_expr import EntropyExpr, MappingSource
from app.core.geometry.fme import fm_eliminate, prune_rows, restrict_to_embedding
from app.core.geometry.matroid import contrapolymatroid_check, polymatroid_check
from app.core.geometry.simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, maximize
from app.core.geometry.system import Inequality, InequalitySystem, VariableName, nonnegativity, parse_variables
from app.core.info.distribution import mi_symbol
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.lattice import enumerate_down_sets, enumerate_up_sets
from app.core.order.superposition import make_order
from app.core.utils.error_handler import DimensionMismatchError, DomainError, EvaluationError, InputError

x = VariableName.plain("x")
y = VariableName.plain("y")
s = VariableName.plain("s")


def R(tag):
    return VariableName.rate(SubsetLabel.parse(tag))


def system(variables, rows, nonneg=True):
    rows = list(rows) + (nonnegativity(variables) if nonneg else [])
    return InequalitySystem.of(variables, rows)


def lp_value(sys_, objective):
    """maximize objective over every row of a numeric system, all variables free"""
    variables = list(sys_.variables)
    index = {v: i for i, v in enumerate(variables)}
    A, b = [], []
    for row in sys_.rows:
        vec = [Fraction(0)] * len(variables)
        for v, c in row.coeffs:
            vec[index[v]] = c
        A.append(vec)
        b.append(row.rhs.constant)
    return maximize([Fraction(objective.get(v, 0)) for v in variables], A, b)


class TestEntropyExpr(unittest.TestCase):
    def test_canonical_form(self):
        """测试熵表达式的规范形式"""
        a = EntropyExpr.h("U_1", "Q")
        b = EntropyExpr.h("Q", "U_1")
        self.assertEqual(a, b)
        self.assertTrue(EntropyExpr.h().is_zero())
        self.assertTrue((a - b).is_zero())
        self.assertEqual((a + a).terms[frozenset({"Q", "U_1"})], Fraction(2))

    def test_mutual_information_symbol(self):
        """测试条件互信息的展开"""
        expr = mi_symbol(["U_1"], ["Y_1"], ["Q"])
        expected = (EntropyExpr.h("U_1", "Q") + EntropyExpr.h("Y_1", "Q")
                    - EntropyExpr.h("U_1", "Y_1", "Q") - EntropyExpr.h("Q"))
        self.assertEqual(expr, expected)
        self.assertEqual(mi_symbol(["U_1"], ["U_1"]), EntropyExpr.h("U_1"))

    def test_evaluate_with_mapping(self):
        """测试用熵赋值表求值"""
        source = MappingSource({"H(A)": Fraction(1), "H(B)": Fraction(1), "H(A,B)": Fraction(3, 2)})
        self.assertEqual(mi_symbol(["A"], ["B"]).evaluate_exact(source), Fraction(1, 2))
        with self.assertRaises(EvaluationError):
            EntropyExpr.h("C").evaluate(source)

    def test_json(self):
        """测试 JSON 序列化保持有理数"""
        expr = EntropyExpr.h("A").scale(Fraction(1, 3)) + 2
        self.assertEqual(EntropyExpr.from_json(expr.to_json()), expr)


class TestInequalitySystem(unittest.TestCase):
    def test_row_forms(self):
        """测试 >= 行与归一化"""
        row = Inequality.geq({x: 1}, 2)
        self.assertEqual(row.coeff(x), -1)
        self.assertEqual(row.rhs, EntropyExpr.const(-2))
        norm = Inequality.leq({x: 2, y: 4}, 6).normalized()
        self.assertEqual(norm.coeff_map, {x: 1, y: 2})
        self.assertEqual(norm.rhs.constant, 3)
        self.assertTrue(Inequality.nonnegative(x).is_bound())

    def test_undeclared_variable(self):
        """测试未声明变量被拒绝"""
        with self.assertRaises(DimensionMismatchError):
            InequalitySystem.of([x], [Inequality.leq({y: 1}, 1)])

    def test_variable_names(self):
        """测试变量名解析"""
        names = parse_variables("R_12, r_1->12 lam_1->12 x")
        self.assertEqual([str(v) for v in names], ["R_12", "r_1->12", "lam_1->12", "x"])
        self.assertEqual(names[1].kind, "split")
        with self.assertRaises(DomainError):
            VariableName.parse("r_12->1")

    def test_bind(self):
        """测试绑定熵赋值后右端为常数"""
        sys_ = system([x], [Inequality.leq({x: 1}, EntropyExpr.h("A"))])
        bound = sys_.bind({frozenset({"A"}): Fraction(5, 4)})
        self.assertTrue(bound.is_numeric())
        self.assertEqual(bound.rows[0].rhs.constant, Fraction(5, 4))

    def test_unit_scale_and_snap(self):
        """测试按最大系数缩放与右端零点吸附"""
        row = Inequality.leq({x: 4, y: -8}, 2)
        self.assertEqual(row.unit_scaled().coeff_map, {x: Fraction(1, 2), y: -1})
        self.assertEqual(row.unit_scaled().rhs.constant, Fraction(1, 4))
        self.assertTrue(Inequality.leq({x: 10 ** 6}, Fraction(-1, 10 ** 9)).snapped(1e-12).rhs.is_zero())
        self.assertFalse(Inequality.leq({x: 1}, Fraction(-1, 10 ** 9)).snapped(1e-12).rhs.is_zero())
        self.assertTrue(Inequality.leq({}, Fraction(-1, 10 ** 15)).snapped(1e-12).is_vacuous())

    def test_bound_zero_information(self):
        """测试恒为零的互信息绑定后右端精确为零"""
        # A and B independent with uneven marginals
        pa, pb = (0.2, 0.3, 0.5), (0.35, 0.65)
        values = {frozenset({"A"}): -sum(p * math.log2(p) for p in pa),
                  frozenset({"B"}): -sum(p * math.log2(p) for p in pb),
                  frozenset({"A", "B"}): -sum(p * q * math.log2(p * q) for p in pa for q in pb)}
        sys_ = system([x], [Inequality.leq({x: 1}, mi_symbol(["A"], ["B"]))])
        bound = sys_.bind(values)
        self.assertEqual(bound.rows[0].rhs.constant, 0)
        self.assertFalse(bound.is_empty())

    def test_json(self):
        """测试系统的 JSON 形式"""
        sys_ = system([x, y], [Inequality.leq({x: 1, y: Fraction(1, 2)}, EntropyExpr.h("A"), "row")])
        again = InequalitySystem.from_json(sys_.to_json())
        self.assertEqual(again.rows, sys_.rows)
        with self.assertRaises(InputError):
            InequalitySystem.from_json({"rows": []})


class TestSimplex(unittest.TestCase):
    def test_optimal(self):
        """测试有界最优解"""
        F = Fraction
        result = maximize([F(1), F(1)], [[F(1), F(0)], [F(0), F(1)], [F(1), F(2)]], [F(1), F(2), F(4)], [True, True])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.value, F(5, 2))

    def test_infeasible_and_unbounded(self):
        """测试不可行与无界"""
        F = Fraction
        self.assertEqual(maximize([F(1)], [[F(1)]], [F(-1)], [True]).status, INFEASIBLE)
        self.assertEqual(maximize([F(1)], [[F(-1)]], [F(0)]).status, UNBOUNDED)

    def test_degenerate(self):
        """测试退化问题也能终止"""
        F = Fraction
        A = [[F(1), F(1)], [F(1), F(-1)], [F(-1), F(1)], [F(1), F(0)]]
        b = [F(0), F(0), F(0), F(0)]
        result = maximize([F(1), F(1)], A, b, [True, True])
        self.assertEqual(result.status, OPTIMAL)
        self.assertEqual(result.value, 0)


class TestFourierMotzkin(unittest.TestCase):
    def test_numeric_elimination(self):
        """测试数值系统的投影"""
        sys_ = system([x, y], [Inequality.leq({x: 1, y: 1}, 3), Inequality.leq({x: -1, y: 1}, 1)])
        projected = fm_eliminate(sys_, [y])
        self.assertEqual(projected.variables, (x,))
        expected = system([x], [Inequality.leq({x: 1}, 3)])
        self.assertTrue(region_equal(projected, expected))

    def test_symbolic_elimination(self):
        """测试符号右端在消元中保持精确"""
        rows = [Inequality.leq({x: 1, s: -1}, 0), Inequality.leq({s: 1}, EntropyExpr.h("A"))]
        projected = fm_eliminate(system([x, s], rows), [s])
        keys = {(r.coeffs, r.rhs) for r in projected.constraint_rows()}
        self.assertIn((((x, Fraction(1)),), EntropyExpr.h("A")), keys)

    def test_equality_substitution(self):
        """测试经等式代入消元"""
        a, b = VariableName.plain("a"), VariableName.plain("b")
        rows = [*Inequality.equality({x: 1, a: -1, b: -1}, 0), Inequality.leq({a: 1}, 1), Inequality.leq({b: 1}, 2)]
        projected = fm_eliminate(system([x, a, b], rows), [a, b])
        expected = system([x], [Inequality.leq({x: 1}, 3)])
        self.assertTrue(region_equal(projected, expected))

    def test_infeasible_projection(self):
        """测试不可行系统投影后被标记为空区域"""
        rows = [Inequality.leq({x: 1}, -1)]
        projected = fm_eliminate(system([x, y], rows), [x])
        self.assertTrue(projected.is_empty())
        self.assertEqual(len(projected.rows), 1)
        self.assertIn("infeasible", projected.rows[0].note)
        self.assertTrue(projected.to_json()["empty"])
        with self.assertRaises(DomainError):
            fm_eliminate(system([x, y], rows), [x], strict=True)

    def test_rounding_residue_is_not_infeasible(self):
        """测试右端的舍入残差不会让区域变空"""
        residue = Fraction(-17, 10 ** 17)
        rows = [Inequality.leq({x: 1, s: -1}, residue), Inequality.leq({s: 1}, 0)]
        projected = fm_eliminate(system([x, s], rows), [s])
        self.assertFalse(projected.is_empty())
        self.assertTrue(region_equal(projected, system([x], [Inequality.leq({x: 1}, 0)])))
        restricted = restrict_to_embedding(system([x, y], [Inequality.leq({x: 1}, residue)], nonneg=False), [x])
        self.assertFalse(restricted.is_empty())
        self.assertEqual(restricted.rows, ())

    def test_projection_matches_lifted_lp(self):
        """测试随机系统投影后各方向的最优值与原系统一致"""
        rng = np.random.default_rng(77)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            variables = [VariableName.plain(f"v{i}") for i in range(n)]
            rows = []
            for _ in range(int(rng.integers(1, 11))):
                coeffs = {v: int(c) for v, c in zip(variables, rng.integers(-3, 4, size=n))}
                rows.append(Inequality.leq(coeffs, int(rng.integers(-2, 7))))
            sys_ = system(variables, rows, nonneg=bool(rng.random() < 0.5))
            k = int(rng.integers(1, min(n - 1, 3) + 1))
            eliminated = [variables[i] for i in sorted(rng.choice(n, size=k, replace=False))]
            modes = ("none", "syntactic", "exact") if k == 1 else ("syntactic", "exact")
            for mode in modes:
                projected = fm_eliminate(sys_, eliminated, mode)
                self.assertEqual(set(projected.variables), set(variables) - set(eliminated))
                for _ in range(4):
                    weights = rng.integers(-2, 3, size=len(projected.variables))
                    objective = {v: int(c) for v, c in zip(projected.variables, weights)}
                    lifted, shadow = lp_value(sys_, objective), lp_value(projected, objective)
                    self.assertEqual(lifted.status, shadow.status, msg=f"{mode}: {sys_.render()}")
                    if lifted.status == OPTIMAL:
                        self.assertEqual(lifted.value, shadow.value)

    def test_errors(self):
        """测试未知变量与未知模式"""
        sys_ = system([x], [Inequality.leq({x: 1}, 1)])
        with self.assertRaises(DomainError):
            fm_eliminate(sys_, [y])
        with self.assertRaises(InputError):
            fm_eliminate(sys_, [x], "aggressive")

    def test_prune_rows(self):
        """测试语法剪枝去掉倍数行与被支配行"""
        rows = [Inequality.leq({x: 1}, 2), Inequality.leq({x: 2}, 4), Inequality.leq({x: 1}, 3),
                Inequality.nonnegative(x), Inequality.leq({x: -1}, 1)]
        pruned = prune_rows(rows)
        self.assertEqual(len([r for r in pruned if not r.is_bound()]), 1)
        self.assertEqual(len(prune_rows(rows, "none")), 4)

    def test_restrict_to_embedding(self):
        """测试把变量置零"""
        sys_ = system([x, y], [Inequality.leq({x: 1, y: 1}, 2)])
        restricted = restrict_to_embedding(sys_, [y])
        self.assertEqual(restricted.variables, (x,))
        self.assertTrue(region_equal(restricted, system([x], [Inequality.leq({x: 1}, 2)])))


class TestCompare(unittest.TestCase):
    def setUp(self):
        self.box = system([x, y], [Inequality.leq({x: 1}, 1), Inequality.leq({y: 1}, 1)])
        self.triangle = system([x, y], [Inequality.leq({x: 1, y: 1}, 1)])

    def test_region_equal(self):
        """测试区域相等与反例"""
        self.assertTrue(region_equal(self.box, self.box))
        result = region_equal(self.box, self.triangle)
        self.assertFalse(result)
        self.assertEqual(result.direction, "A_not_in_B")
        self.assertIsNotNone(result.witness)
        self.assertFalse(evaluate(self.triangle, None, result.witness))
        with self.assertRaises(DimensionMismatchError):
            region_equal(self.box, system([x], []))

    def test_tolerance_ignores_row_scale(self):
        """测试容差作用在最大系数为 1 的行上，与行的整体倍数无关"""
        big = Fraction(10 ** 30)
        scaled = system([x, y], [Inequality.leq({x: big, y: 3 * big}, 2 * big)])
        nearby = system([x, y], [Inequality.leq({x: 1, y: 3}, 2 + Fraction(1, 10 ** 20))])
        self.assertTrue(region_equal(scaled, nearby))
        self.assertTrue(region_equal(nearby, scaled))
        wider = system([x, y], [Inequality.leq({x: 1, y: 3}, Fraction(21, 10))])
        result = region_equal(scaled, wider)
        self.assertFalse(result)
        self.assertEqual(result.direction, "B_not_in_A")
        self.assertEqual(result.excess, Fraction(1, 30))
        self.assertTrue(evaluate(scaled, None, {x: 0, y: Fraction(2, 3) + Fraction(1, 10 ** 10)}))
        self.assertFalse(evaluate(scaled, None, {x: 0, y: Fraction(2, 3) + Fraction(1, 10 ** 6)}))

    def test_evaluate(self):
        """测试点的成员判断"""
        self.assertTrue(evaluate(self.box, None, {x: 1, y: Fraction(1, 2)}))
        verdict = evaluate(self.box, None, {"x": 2, "y": 0})
        self.assertFalse(verdict)
        self.assertEqual(len(verdict.violations), 1)
        with self.assertRaises(EvaluationError):
            evaluate(self.box, None, {x: 0})

    def test_remove_redundant(self):
        """测试精确冗余删除"""
        sys_ = self.box.extend([Inequality.leq({x: 1, y: 1}, 3), Inequality.leq({x: 1}, 2)])
        reduced = remove_redundant(sys_)
        self.assertEqual(len(reduced.rows), 4)
        self.assertTrue(region_equal(reduced, self.box))

    def test_feasibility(self):
        """测试可行性与可行点"""
        self.assertTrue(is_feasible(self.box))
        empty = self.box.extend([Inequality.geq({x: 1}, 2)])
        self.assertFalse(is_feasible(empty))
        self.assertIsNone(feasible_point(empty))

    def test_sample_vertices(self):
        """测试沿方向取顶点"""
        points = sample_vertices(self.triangle, [{x: 1}, {y: 1}, {x: 1, y: 2}])
        self.assertIn({x: Fraction(1), y: Fraction(0)}, points)
        self.assertIn({x: Fraction(0), y: Fraction(1)}, points)


class TestCone(unittest.TestCase):
    def test_minkowski_sum(self):
        """测试多面体与速率交换锥的 Minkowski 和"""
        one, twelve = SubsetLabel.parse("1"), SubsetLabel.parse("12")
        P = system([R("1"), R("12")], [Inequality.leq({R("1"): 1}, 1), Inequality.leq({R("12"): 1}, 1)])
        C = ConeGenerators.from_pairs(P.variables, [(one, twelve)])
        summed = minkowski_sum_with_cone(P, C)
        clipped = summed.extend(nonnegativity(summed.variables))
        expected = system([R("1"), R("12")], [Inequality.leq({R("12"): 1}, 1), Inequality.leq({R("1"): 1, R("12"): 1}, 2)])
        self.assertTrue(region_equal(clipped, expected))
        # R_12 may go negative before clipping
        self.assertTrue(evaluate(summed, None, {R("1"): 2, R("12"): -1}))

    def test_no_generators(self):
        """测试没有生成元时 Minkowski 和就是原多面体"""
        P = system([R("1"), R("12")], [Inequality.leq({R("1"): 1, R("12"): 2}, 3)])
        summed = minkowski_sum_with_cone(P, ConeGenerators.from_pairs(P.variables, []))
        self.assertTrue(region_equal(summed, P))

    def test_sum_is_monotone(self):
        """测试多面体或生成元变大时 Minkowski 和不缩小"""
        one, two, twelve = (SubsetLabel.parse(t) for t in ("1", "2", "12"))
        variables = [R("1"), R("2"), R("12")]

        def polytope(bound):
            return system(variables, [Inequality.leq({R("1"): 1, R("12"): 1}, bound),
                                      Inequality.leq({R("2"): 1, R("12"): 1}, bound),
                                      Inequality.leq({R("12"): 1}, Fraction(bound, 2))])

        small, large = polytope(1), polytope(2)
        few = ConeGenerators.from_pairs(small.variables, [(one, twelve)])
        many = ConeGenerators.from_pairs(small.variables, [(one, twelve), (two, twelve)])
        self.assertTrue(contained_in(minkowski_sum_with_cone(small, few), minkowski_sum_with_cone(large, few)))
        self.assertFalse(contained_in(minkowski_sum_with_cone(large, few), minkowski_sum_with_cone(small, few)))
        self.assertTrue(contained_in(minkowski_sum_with_cone(small, few), minkowski_sum_with_cone(small, many)))
        self.assertTrue(contained_in(small, minkowski_sum_with_cone(small, many)))

    def test_generator_validation(self):
        """测试生成向量的合法性"""
        one, two = SubsetLabel.parse("1"), SubsetLabel.parse("2")
        with self.assertRaises(DomainError):
            ConeGenerators((R("1"), R("2")), ((Fraction(1), Fraction(-1)),), ((one, two),))
        with self.assertRaises(DimensionMismatchError):
            ConeGenerators.from_pairs([R("1")], [(one, SubsetLabel.parse("12"))])


class TestMatroid(unittest.TestCase):
    def setUp(self):
        order = make_order(MessageIndexFamily.of(2, ["1", "2"]), "discrete")
        self.down = enumerate_down_sets(order)
        self.up = enumerate_up_sets(order)

    def test_polymatroid(self):
        """测试多拟阵判定"""
        self.assertTrue(polymatroid_check(self.down, lambda A: min(len(A), 1)))
        result = polymatroid_check(self.down, lambda A: len(A) ** 2)
        self.assertFalse(result)
        self.assertTrue(any("submodular" in r for r in result.reasons))
        self.assertFalse(polymatroid_check(self.down, lambda A: len(A) + 1))

    def test_contrapolymatroid(self):
        """测试反多拟阵判定"""
        self.assertTrue(contrapolymatroid_check(self.up, lambda A: len(A) ** 2))
        self.assertFalse(contrapolymatroid_check(self.up, lambda A: min(len(A), 1)))


if __name__ == '__main__':
    unittest.main()
