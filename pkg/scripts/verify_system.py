"""
System Verification Script
Quick numerical smoke checks across the receiver chain
"""

import sys
import math
from pathlib import Path

import numpy as np

# Add the repository root to path
sys.path.append(str(Path(__file__).parent.parent))


def test_imports():
    """Test that all major modules can be imported"""
    print("Testing imports...")

    try:
        from src.config.settings import APP_CONFIG, DATA_CONFIG, NUMERIC_CONFIG
        from src.cli.main import cli
        from src.turbo import TurboReceiver
        from src.gepnet import WeightArchive
        print("✓ All imports successful")
        return True
    except Exception as e:
        print(f"✗ Import error: {e}")
        return False


def test_complexity():
    """Reference multiplication counts"""
    print("Testing complexity calculator...")

    try:
        from src.cli.complexity import ComplexityQuery, complexity_rvm

        expected = {'mmse-pic': 2896, 'ep': 9008, 'dep': 9168, 'gepnet': 6479552}
        found = {name: complexity_rvm(ComplexityQuery(algorithm=name)) for name in expected}
        if all(found[name] == value for name, value in expected.items()):
            print(f"✓ Complexity counts match: {found}")
            return True
        print(f"✗ Complexity mismatch: {found}")
        return False
    except Exception as e:
        print(f"✗ Complexity error: {e}")
        return False


def test_ia_lookup():
    """J_A inversion at the training grid"""
    print("Testing I_A lookup table...")

    try:
        from src.training.ia_lut import build_ia_lut, j_function

        lut = build_ia_lut()
        worst = max(abs(j_function(mu) - ia) for ia, mu in zip(lut.ia_values, lut.mu_values)
                    if 0.0 < ia < 1.0)
        if worst < 1e-9:
            print(f"✓ Lookup table consistent (worst error {worst:.1e})")
            return True
        print(f"✗ Lookup table error {worst:.1e}")
        return False
    except Exception as e:
        print(f"✗ Lookup table error: {e}")
        return False


def test_noiseless_receiver():
    """EP turbo receiver must decode a noiseless codeword"""
    print("Testing noiseless turbo receiver...")

    try:
        from src.channel.models import ChannelModelSpec
        from src.modem.constellation import Constellation
        from src.numerics.rng import SeededRng
        from src.turbo import CodeConfig, SoftDetector, TurboConfig, TurboReceiver

        const = Constellation.from_name('16qam')
        config = TurboConfig(iterations=2, detector='ep', code=CodeConfig(kind='cc', message_length=32))
        receiver = TurboReceiver(ChannelModelSpec(4, 4), const, config, SoftDetector('ep', const))
        outcome = receiver.run_idd(receiver.transmit(SeededRng(1), math.inf))
        errors = int(np.sum(outcome.decisions[-1] != outcome.message))
        if errors == 0:
            print("✓ Noiseless codeword decoded without errors")
            return True
        print(f"✗ Noiseless codeword decoded with {errors} bit errors")
        return False
    except Exception as e:
        print(f"✗ Receiver error: {e}")
        return False


def test_archive_roundtrip():
    """Weight archive write and checksum verification"""
    print("Testing weight archives...")

    try:
        import tempfile
        from src.gepnet.archive import WeightArchive, deserialize, serialize
        from src.gnn.params import GnnHyperparams, glorot_init
        from src.numerics.rng import SeededRng

        hyperparams = GnnHyperparams(n_u=4, n_h1=8, n_h2=6, rounds=2)
        params = glorot_init(hyperparams, 4, SeededRng(2))
        with tempfile.TemporaryDirectory() as tmp:
            path = serialize(WeightArchive(params, {'step': 1}), Path(tmp) / 'check.gepw')
            reloaded = deserialize(path, num_classes=4)
        if all(np.array_equal(tensor, reloaded.params[name]) for name, tensor in params.items()):
            print("✓ Archive round trip successful")
            return True
        print("✗ Archive tensors changed on reload")
        return False
    except Exception as e:
        print(f"✗ Archive error: {e}")
        return False


def main():
    """Run all verification tests"""
    print("GEPNet Lab System Verification")
    print("=" * 50)

    tests = [
        ("Import Tests", test_imports),
        ("Complexity Calculator", test_complexity),
        ("I_A Lookup", test_ia_lookup),
        ("Noiseless Receiver", test_noiseless_receiver),
        ("Weight Archives", test_archive_roundtrip)
    ]

    passed = 0
    total = len(tests)

    for test_name, test_func in tests:
        print(f"\n{test_name}:")
        if test_func():
            passed += 1

    print("\n" + "=" * 50)
    print(f"Verification Results: {passed}/{total} tests passed")

    if passed == total:
        print("🎉 All systems working correctly!")
        return True
    else:
        print("⚠️  Some issues found. Check the errors above.")
        return False


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
