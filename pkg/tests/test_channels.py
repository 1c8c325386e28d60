import itertools
import unittest

import numpy as np

from app.core.channels.binding import bind_channel, channel_from_json
from app.core.channels.combination import CombinationNetwork, combination_uniform_aux
from app.core.channels.tabular import (
    TabularBC,
    binary_symmetric_cascade,
    bsc,
    degraded_bc_instance,
    degradedness_certificate,
    identity_bc,
)
from app.core.info.admissible import assemble_joint, random_admissible_spec
from app.core.info.distribution import mi_symbol
from app.core.order.labels import MessageIndexFamily, SubsetLabel
from app.core.order.superposition import make_order
from app.core.utils.error_handler import DimensionMismatchError, DomainError, EvaluationError, InputError


def L(tag):
    return SubsetLabel.parse(tag)


class TestTabularBC(unittest.TestCase):
    def test_validation(self):
        """测试信道表的形状与随机性检查"""
        with self.assertRaises(DimensionMismatchError):
            TabularBC(np.array([0.5, 0.5]))
        with self.assertRaises(DomainError):
            TabularBC(np.array([[0.5, 0.4], [0.5, 0.5]]))
        with self.assertRaises(DomainError):
            TabularBC(np.array([[1.5, -0.5], [0.5, 0.5]]))

    def test_cascade_marginals(self):
        """测试二元对称级联信道的边缘"""
        chan = binary_symmetric_cascade(0.1, 0.2)
        self.assertEqual(chan.K, 2)
        self.assertEqual(chan.output_alphabets, (2, 2))
        self.assertTrue(np.allclose(chan.marginal(1), bsc(0.1)))
        self.assertTrue(np.allclose(chan.marginal(2), bsc(0.26)))
        with self.assertRaises(DomainError):
            chan.marginal(3)

    def test_side_receiver(self):
        """测试带旁路接收端的级联"""
        chan = degraded_bc_instance([bsc(0.1), bsc(0.2)], side=bsc(0.3))
        self.assertEqual(chan.K, 3)
        self.assertTrue(np.allclose(chan.marginal(3), bsc(0.3)))
        with self.assertRaises(DimensionMismatchError):
            degraded_bc_instance([bsc(0.1), np.eye(3)])

    def test_degradedness(self):
        """测试退化性证书及其转移矩阵"""
        chan = binary_symmetric_cascade(0.1, 0.2)
        cert = degradedness_certificate(chan, 1, 2)
        self.assertTrue(cert)
        self.assertTrue(np.allclose(cert.transfer, bsc(0.2), atol=1e-6))
        self.assertFalse(degradedness_certificate(chan, 2, 1))

    def test_identity(self):
        """测试所有接收端都看到 X"""
        chan = identity_bc(3, K=2)
        self.assertTrue(np.allclose(chan.marginal(1), np.eye(3)))
        self.assertTrue(np.allclose(chan.marginal(2), np.eye(3)))

    def test_json(self):
        """测试信道 JSON 的分派"""
        chan = channel_from_json(binary_symmetric_cascade(0.1, 0.2).to_json())
        self.assertIsInstance(chan, TabularBC)
        self.assertTrue(np.allclose(chan.marginal(2), bsc(0.26)))
        with self.assertRaises(DimensionMismatchError):
            TabularBC.from_json({"table": {"input_alphabet": 2, "output_alphabets": [3], "W": [0.5, 0.5, 0.5, 0.5]}})
        with self.assertRaises(InputError):
            channel_from_json({"wires": []})
        with self.assertRaises(InputError):
            channel_from_json([1, 2])


class TestCombinationNetwork(unittest.TestCase):
    def test_alphabets(self):
        """测试组合网络的输入输出字母表"""
        net = CombinationNetwork.full(2)
        self.assertEqual(net.input_alphabet, 8)
        self.assertEqual(net.output_alphabets, (4, 4))
        self.assertEqual(net.output_entropy(1), 2)
        self.assertEqual([s.tag for s in net.window(2)], ["2", "12"])
        W = net.to_tabular().W
        self.assertTrue(np.all((W == 0) | (W == 1)))

    def test_component_validation(self):
        """测试分量标签与比特数的检查"""
        with self.assertRaises(DomainError):
            CombinationNetwork(2, {"13": 1})
        with self.assertRaises(DomainError):
            CombinationNetwork(2, {"1": -1})
        net = CombinationNetwork.from_json({"combination": {"K": 2, "components": {"[1, 2]": 2, "1": 1}}})
        self.assertEqual(net.capacity(L("12")), 2)
        self.assertEqual(net.capacity(L("2")), 0)
        with self.assertRaises(InputError):
            CombinationNetwork.from_json({"combination": {"components": {}}})

    def test_oracle_matches_tables(self):
        """测试熵预言与显式联合分布给出相同的熵"""
        net = CombinationNetwork.full(2, {"1": 1, "2": 1, "12": 2})
        for family in (["1", "2", "12"], ["1", "12"]):
            labels = [L(t) for t in family]
            oracle = net.oracle(labels)
            joint = assemble_joint(bind_channel(combination_uniform_aux(net, labels), net))
            symbols = [s for s in joint.symbols if s != "Q"]
            for r in range(1, len(symbols) + 1):
                for subset in itertools.combinations(symbols, r):
                    self.assertAlmostEqual(oracle.entropy(subset), joint.entropy(subset), places=9,
                                           msg=f"family {family}, symbols {subset}")

    def test_decoding_bounds_are_capacity_sums(self):
        """测试译码界等于所含分量的比特数之和"""
        net = CombinationNetwork(2, {"1": 2, "12": 3})
        oracle = net.oracle([L("1"), L("12")])
        self.assertEqual(mi_symbol(["U_1", "U_12"], ["Y_1"]).evaluate(oracle), 5)
        self.assertEqual(mi_symbol(["U_1"], ["Y_1"], ["U_12"]).evaluate(oracle), 2)
        full = CombinationNetwork.full(3)
        oracle = full.oracle(MessageIndexFamily.full(3).labels)
        self.assertEqual(mi_symbol(["U_12"], ["Y_1"], ["U_1", "U_13", "U_123"]).evaluate(oracle), 1)
        sparse = CombinationNetwork(2, {"1": 0, "12": 1})
        self.assertEqual(mi_symbol(["U_1"], ["Y_1"], ["U_12"]).evaluate(sparse.oracle([L("1"), L("12")])), 0)

    def test_oracle_errors(self):
        """测试预言对未知符号报错"""
        net = CombinationNetwork.full(2)
        oracle = net.oracle([L("1"), L("12")])
        self.assertEqual(oracle.entropy({"Q"}), 0)
        with self.assertRaises(EvaluationError):
            oracle.entropy({"Y_3"})
        with self.assertRaises(EvaluationError):
            oracle.entropy({"U_2"})
        with self.assertRaises(DomainError):
            CombinationNetwork(2, {"1": 1}).oracle([L("12")])


class TestBinding(unittest.TestCase):
    def test_bind_mismatch(self):
        """测试信道与 X' 的字母表不一致"""
        order = make_order(MessageIndexFamily.full(2), "inclusion")
        spec = random_admissible_spec(order, np.random.default_rng(5), with_channel=False)
        with self.assertRaises(DimensionMismatchError):
            bind_channel(spec, identity_bc(3, K=2))
        with self.assertRaises(DimensionMismatchError):
            bind_channel(spec, identity_bc(2, K=3))
        bound = bind_channel(spec, binary_symmetric_cascade(0.1, 0.2))
        self.assertTrue(bound.has_channel)
        self.assertEqual(bound.y_alphabets, (2, 2))


if __name__ == '__main__':
    unittest.main()
