import math

import pytest

from app.geometry.bertrand import BertrandParams
from app.geometry.catalog import CATALOG, catalog
from app.geometry.verify import SUITES, example_suite, identities_suite, frames_suite, run_suites, verify_corollaries
from app.schemas.report import CheckStatus, RunReport

PARAMS = BertrandParams(a=1.0, theta=math.pi / 4)


def _by_name(records):
    return {r.name: r for r in records}


def test_helix_passes_every_suite(helix21):
    records = run_suites(helix21, "all", PARAMS, n=48)
    failures = [r for r in records if r.status is CheckStatus.FAIL]
    assert not failures, failures
    report = RunReport(command="verify", checks=records)
    assert report.exit_code == 0


def test_helix_corollaries_hold(helix21):
    records = _by_name(verify_corollaries(helix21, PARAMS, n=48))
    assert records["source.kind"].value == "circular"
    for row in ("corollary2.circular-helix", "corollary3.circular-helix", "corollary4.circular-helix",
                "corollary5.bertrand-fit"):
        assert records[row].status is CheckStatus.PASS, records[row]
    # C-индикатриса круговой винтовой линии - одна точка
    assert records["theorem.C.bertrand-fit"].status is CheckStatus.SKIP


def test_planar_source_does_not_meet_premises(unit_circle):
    records = _by_name(verify_corollaries(unit_circle, PARAMS, n=48))
    assert records["source.kind"].value == "planar"
    for row in ("corollary2.circular-helix", "corollary3.circular-helix", "corollary4.circular-helix",
                "corollary5.bertrand-fit"):
        assert records[row].status is CheckStatus.PREMISE_NOT_MET
    assert records["theorem.B.bertrand-fit"].status is CheckStatus.SKIP
    assert RunReport(command="verify", checks=list(records.values())).exit_code == 0


def test_example_identities_hold(worked_example):
    records = identities_suite(worked_example, 48)
    assert records
    assert all(r.status is not CheckStatus.FAIL for r in records), records


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_identities_never_fail_on_catalog(name):
    records = identities_suite(catalog(name), 32)
    assert records
    assert {r.status for r in records} <= {CheckStatus.PASS, CheckStatus.SKIP}, records


def test_example_frames_hold(worked_example):
    records = [r for r in frames_suite(worked_example, 48) if r.name.startswith("frame.")]
    assert {"frame.orthonormality", "frame.frenet-residual"} <= {r.name for r in records}
    assert all(r.status is CheckStatus.PASS for r in records), records


def test_example_suite_passes(worked_example):
    records = example_suite(worked_example, 48)
    assert [r.status for r in records] == [CheckStatus.PASS] * len(records)


def test_example_suite_skips_other_curves(helix11):
    [record] = example_suite(helix11, 48)
    assert record.status is CheckStatus.SKIP


def test_unknown_suite_name(helix11):
    with pytest.raises(ValueError):
        run_suites(helix11, "nonsense", PARAMS, n=16)
    assert "corollaries" in SUITES
