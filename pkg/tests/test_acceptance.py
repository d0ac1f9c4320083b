"""Acceptance criteria, one test each; a PASS/FAIL line is printed per criterion."""
import pytest

from circleflow import acceptance, pac


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def _inverse_with_sign_bug(self):
    return pac.Affine(1 / self.slope, self.offset / self.slope)  # offset sign dropped


def test_isometry_suite_catches_broken_inverse(monkeypatch):
    monkeypatch.setattr(pac.Affine, "inverse", _inverse_with_sign_bug)
    fails = acceptance.property_failures(count=40, seed=0)
    assert fails["isometry"] > 0
    monkeypatch.undo()
    assert acceptance.property_failures(count=40, seed=0)["isometry"] == 0
