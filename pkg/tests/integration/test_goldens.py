"""Every golden listing against a fresh rendering."""

import pytest

from leveltrees.storage.golden import GoldenStore

GOLDENS = (
    "qw_s21",
    "psi_s21",
    "tq_t22_q22",
    "psi_x22_t22",
    "yt_y23_t23",
    "psi_r23_y23",
    "iota_tqu",
    "iota_ytq",
)


@pytest.mark.parametrize("name", GOLDENS)
def test_golden_listing(name):
    """The rendered listing equals its golden file byte for byte."""
    diff = GoldenStore().check(name)
    assert diff is None, str(diff)
