import unittest

from photonics.weakvalues.fockengine.modes import ModeRegistry
from photonics.weakvalues.utils.errors import UnknownModeError


class ModeRegistryTestCase(unittest.TestCase):
    def setUp(self):
        self.registry = ModeRegistry(["sH", "sV", "mH", "mV"])

    def test_indices_follow_registration_order(self):
        self.assertEqual(0, self.registry.index("sH"))
        self.assertEqual((3, 1), self.registry.indices(["mV", "sV"]))
        self.assertEqual(4, self.registry.size)
        self.assertEqual(["sH", "sV", "mH", "mV"], list(self.registry))

    def test_unknown_mode(self):
        with self.assertRaises(UnknownModeError):
            self.registry.index("loss")
        self.assertNotIn("loss", self.registry)

    def test_duplicate_labels_rejected(self):
        with self.assertRaises(ValueError):
            ModeRegistry(["a", "b", "a"])

    def test_with_modes_returns_new_registry(self):
        extended = self.registry.with_modes("loss_s", "loss_m")

        self.assertEqual(6, extended.size)
        self.assertEqual(4, extended.index("loss_s"))
        self.assertEqual(4, self.registry.size)
        self.assertNotEqual(self.registry, extended)

    def test_equality_by_labels(self):
        self.assertEqual(self.registry, ModeRegistry(("sH", "sV", "mH", "mV")))
        self.assertEqual(hash(self.registry), hash(ModeRegistry(("sH", "sV", "mH", "mV"))))
        self.assertNotEqual(self.registry, ModeRegistry(["sV", "sH", "mH", "mV"]))


if __name__ == "__main__":
    unittest.main()
