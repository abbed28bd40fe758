"""Runs last (collection order): the whole suite must fit the wall-time budget."""

from conftest import session_elapsed


def test_full_suite_wall_time_under_60s():
    assert session_elapsed() < 60.0
