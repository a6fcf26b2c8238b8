import math

import pytest

from trelliskit import DepthFunctionTable, build_spc_trellis


def rel_err(a: float, b: float) -> float:
    """Relative error with a unit floor, symmetric in both arguments."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def assert_close(a, b, tol=1e-9, msg=""):
    assert rel_err(a, b) <= tol, f"{msg} {a} vs {b} (rel err {rel_err(a, b):.3e})"


def dist_as_dict(dist) -> dict:
    """Value -> mass mapping of an exact or quantized distribution."""
    return {
        v: w for v, w in zip(dist.values(), dist.mass) if w != 0.0
    }


def assert_same_mass(actual: dict, expected: dict, tol=1e-9, value_tol=1e-9):
    """Compare two value->mass mappings up to small value drift."""
    remaining = dict(actual)
    for value, weight in expected.items():
        hit = None
        for v in remaining:
            if abs(v - value) <= value_tol * max(1.0, abs(value)):
                hit = v
                break
        assert hit is not None, f"no mass near {value} (have {sorted(remaining)})"
        assert rel_err(remaining.pop(hit), weight) <= tol, (
            f"mass at {value}: {actual.get(hit)} vs {weight}"
        )
    leftover = sum(abs(w) for w in remaining.values())
    assert leftover <= tol, f"unexpected extra mass {remaining}"


@pytest.fixture(scope="session")
def spc4():
    return build_spc_trellis(4)


@pytest.fixture(scope="session")
def spc4_clabel_g(spc4):
    return DepthFunctionTable.from_clabels(spc4)


def entropy_bits(probabilities) -> float:
    return -sum(p * math.log2(p) for p in probabilities if p > 0)
