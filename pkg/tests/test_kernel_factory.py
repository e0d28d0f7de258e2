from unittest.mock import patch

import pytest

from src.core.config import KernelMode, ProblemType
from src.core.errors import UnsupportedModeError
from src.core.kernel_factory import FamilyKernel, GraphKernel, KernelFactory
from src.core.model import BUILTIN_PATTERNS, PatternSet

TRIANGLES = PatternSet(patterns=[BUILTIN_PATTERNS["k3"]])


def test_logspace_hitting_set_reports_bound(e1):
    result = KernelFactory.get_kernel("hs").kernelize(e1)
    assert result.instance.family == ((1, 2), (1, 3))
    assert result.bound == 4
    assert result.report.sets_emitted == 2
    assert result.linear_stats is None


def test_linear_mode_returns_trie_stats(e1):
    result = KernelFactory.get_kernel(ProblemType.HITTING_SET, KernelMode.LINEAR).kernelize(e1)
    assert result.instance.family == ((1, 2), (1, 3))
    assert result.linear_stats.tape_reads == 3
    assert result.linear_stats.stored == 2


def test_selected_layer_is_emitted(e1):
    kernel = KernelFactory.get_kernel("hs", "logspace", layer=2)
    assert kernel.kernelize(e1).instance.m == 3


def test_layer_needs_logspace_family_problem():
    with pytest.raises(UnsupportedModeError, match="--layer"):
        KernelFactory.get_kernel("hs", "linear", layer=1)
    with pytest.raises(UnsupportedModeError, match="--layer"):
        KernelFactory.get_kernel("eds", "logspace", layer=1)


def test_layer_outside_the_instance_range_is_rejected(e1):
    with pytest.raises(UnsupportedModeError, match="is negative"):
        KernelFactory.get_kernel("hs", "logspace", layer=-1)

    kernel = KernelFactory.get_kernel("hs", "logspace", layer=5)
    with pytest.raises(UnsupportedModeError, match=r"--layer 5 outside 0\.\.2"):
        kernel.kernelize(e1)


def test_graph_problems_have_no_linear_mode():
    with patch("src.core.kernel_factory.logger") as mock_logger:
        with pytest.raises(UnsupportedModeError, match="linear mode unavailable for eds"):
            KernelFactory.get_kernel("eds", "linear")
    mock_logger.error.assert_called_once()


def test_pattern_problems_need_patterns():
    with pytest.raises(UnsupportedModeError, match="needs --pattern"):
        KernelFactory.get_kernel("hfree")


def test_packing_takes_one_pattern():
    two = PatternSet(patterns=[BUILTIN_PATTERNS["k3"], BUILTIN_PATTERNS["p3"]])
    with pytest.raises(UnsupportedModeError, match="exactly one pattern"):
        KernelFactory.get_kernel("hpack", patterns=two)


def test_kernel_classes(triangle):
    assert isinstance(KernelFactory.get_kernel("sp"), FamilyKernel)
    hfree = KernelFactory.get_kernel("hfree", patterns=TRIANGLES)
    assert isinstance(hfree, GraphKernel)
    assert hfree.kernelize(triangle).bound == 3 * 8


def test_instance_kind_must_match(e1, triangle):
    with pytest.raises(UnsupportedModeError, match="expected a 'sp' instance"):
        KernelFactory.get_kernel("sp").kernelize(e1)
    with pytest.raises(UnsupportedModeError, match="expected a 'gr' instance"):
        KernelFactory.get_kernel("eds").kernelize(e1)
    with pytest.raises(UnsupportedModeError, match="expected a 'hs' instance"):
        KernelFactory.get_kernel("hs").kernelize(triangle)


def test_unknown_problem_is_rejected():
    with pytest.raises(ValueError):
        KernelFactory.get_kernel("vertex-cover")
