"""Acceptance criteria, each at its full required size.

Every test prints one ``ACCEPT <name> PASS|FAIL`` line (run with ``-s``
to see them live; they also land in the captured output on failure).
"""

import pytest

from piregulation import campaigns
from piregulation.cli import GOLDEN, format_scenario
from piregulation import appendix


def report(result, limit=None):
    line = result.format()
    if limit is not None and result.seconds > limit:
        line += f" [over time limit {limit}s]"
    print(line)
    assert result.passed, line
    if limit is not None:
        assert result.seconds <= limit, line


def test_1_appendix_golden():
    report(campaigns.appendix_golden(), limit=1)
    assert format_scenario(appendix.scenario()) == GOLDEN


def test_2_theorem1_equivalence():
    result = campaigns.theorem1_campaign(10_000)
    report(result, limit=60)
    # both verdicts occur for both curve families, and so do ties in dates
    for key in ("affine-conform", "affine-violate", "staircase-conform", "staircase-violate", "simultaneous"):
        assert result.counts.get(key, 0) > 0, key


@pytest.mark.parametrize("mode", ["per-flow", "interleaved"])
def test_3_shaping_for_free(mode):
    report(campaigns.shaping_campaign(mode, 5_000), limit=120)


@pytest.mark.parametrize("mode", ["per-flow", "interleaved"])
def test_4_minimality_and_tightness(mode):
    result = campaigns.minimality_campaign(mode, 5_000)
    report(result)
    assert result.counts.get("dominates", 0) > 0


def test_5_dominance():
    result = campaigns.dominance_campaign(5_000)
    report(result)
    assert "appendix strict at 3,6,9" in result.detail


def test_6_pseudo_inverse_lemmas():
    report(campaigns.lemma_campaign(1_000))


def test_7_non_equivalence_witness():
    report(campaigns.non_equivalence())


@pytest.mark.parametrize("kind", campaigns.catalog_kinds())
def test_8_c_conditions(kind):
    report(campaigns.c_conditions_campaign(kind, 1_000))
