"""Acceptance harness: every quantitative claim at its stated tolerance.

One criterion per test, one PASS/FAIL line per criterion on stdout (visible
with -s, or in captured output when a criterion misses).  The underlying
verdicts come from the verification suites, run once for the whole module.
"""

import pytest

from fraclap.verify import run_suite

CRITERIA = [
    ("C1", "operator realizations agree on smooth data"),
    ("C2", "linear evolution matches the fundamental solution"),
    ("C3", "conservation, contraction, and positivity of the flow"),
    ("C4", "sup-norm decay at the self-similar rate"),
    ("C5", "rescaled attraction to the source-type profile"),
    ("C6", "algebraic spatial tails at the predicted powers"),
    ("C7", "finite-time extinction with calibrated recovery"),
    ("C8", "weighted-mass growth scaling in the extinction range"),
    ("C9", "rearranged data stays more concentrated"),
    ("C10", "reaction fronts spread at the predicted rates"),
    ("C11", "interval problem: decay rate and boundary separation"),
    ("C12", "exponent table identities on a parameter lattice"),
]


@pytest.fixture(scope="module")
def all_verdicts():
    return run_suite("all", threads=2)["verdicts"]


@pytest.mark.parametrize("cid,label", CRITERIA, ids=[c for c, _ in CRITERIA])
def test_criterion(cid, label, all_verdicts):
    mine = [v for v in all_verdicts if v["claim"].startswith(cid + "-")]
    assert mine, f"no verdicts recorded for {cid}"
    ok = all(v["pass"] for v in mine)
    print(f"{'PASS' if ok else 'FAIL'} {cid} {label} ({len(mine)} checks)")
    for v in mine:
        if not v["pass"]:
            print(f"  miss {v['claim']}: fitted={v['fitted']} "
                  f"target={v['target']} tolerance={v['tolerance']}")
    assert ok, f"{cid} missed: " + ", ".join(
        v["claim"] for v in mine if not v["pass"])


def test_every_verdict_is_claimed(all_verdicts):
    prefixes = tuple(cid + "-" for cid, _ in CRITERIA)
    orphans = [v["claim"] for v in all_verdicts
               if not v["claim"].startswith(prefixes)]
    assert not orphans, f"verdicts outside the criterion map: {orphans}"
