"""One line per acceptance criterion; every comparison is exact equality."""

from __future__ import annotations

import pytest

from soint import suite

CRITERIA = [
    (1, "gl2-oracle"),
    (2, "gl3-oracle"),
    (3, "u2-sp4"),
    (4, "counts"),
    (5, "fibers"),
    (6, "symbolic"),
    (7, "bounds"),
    (8, "conjecture"),
]


@pytest.mark.parametrize("number,key", CRITERIA, ids=[k for _, k in CRITERIA])
def test_criterion(number, key, capsys):
    title, check = suite.CRITERIA[key]
    records = check()
    failed = [r for r in records if not r.match]
    evidence = all(r.evidence for r in records)
    status = "PASS" if not failed else "FAIL"
    tag = " (evidence)" if evidence else ""
    with capsys.disabled():
        print(f"\ncriterion {number}: {status}{tag} {title}: {len(records) - len(failed)}/{len(records)} checks")
        for r in failed[:8]:
            print(f"    {r.instance}: expected {r.formula_value}, got {r.oracle_value}")
    if evidence:
        # conjecture evidence is reported, not asserted
        return
    assert not failed
