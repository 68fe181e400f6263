import dataclasses

import pytest

from detineq.exact import InputError
from detineq.fuzz import FuzzConfig, campaign_passed, report_bytes, run_campaign, run_trial


def test_config_validation():
    with pytest.raises(InputError):
        FuzzConfig(family="psd", trials=0, theorems=("zy",), seed=1)
    with pytest.raises(InputError):
        FuzzConfig(family="psd", trials=1, theorems=(), seed=1)
    with pytest.raises(InputError):
        FuzzConfig(family="psd", trials=1, theorems=("thompson",), seed=1)
    with pytest.raises(InputError):
        FuzzConfig(family="blockPD", trials=1, theorems=("thompson",), seed=1)
    with pytest.raises(InputError):
        FuzzConfig(family="psd", trials=1, theorems=("zz",), seed=1)
    cfg = FuzzConfig(family="BLOCKPD", trials=1, theorems=("BlockZY",), seed=1, sizes=(2, 2))
    assert cfg.family == "blockPD" and cfg.theorems == ("blockZY",)


def test_trials_are_pure_functions_of_index():
    cfg = FuzzConfig(family="pd", trials=5, theorems=("zy", "hprod"), seed=4, n_min=3, n_max=5)
    assert run_trial(cfg, 3) == run_trial(cfg, 3)
    assert run_trial(cfg, 3).seed != run_trial(cfg, 2).seed


def test_rank_one_orbit_campaign_is_all_equality():
    cfg = FuzzConfig(family="rankOneOrbit", trials=30, theorems=("zy", "hprod"), seed=2,
                     n_min=6, n_max=6)
    rep = run_campaign(cfg)
    assert campaign_passed(rep)
    assert rep["equalityCount"] == rep["trialsRun"] == 30
    assert set(rep["classifierHistogram"]) == {"collinearOrbits"}


def test_block_campaign_counts_block_diagonal_trials():
    cfg = FuzzConfig(family="blockPD", trials=20, theorems=("thompson", "blockZY"), seed=2,
                     sizes=(2, 2, 2))
    rep = run_campaign(cfg)
    assert campaign_passed(rep)
    assert rep["equalityCount"] == 4  # every fifth trial is block diagonal
    assert rep["perTheoremBreakdown"]["blockZY"]["checks"] == 20 * 2


def test_frame_campaign_skips_inapplicable_zero_patterns():
    cfg = FuzzConfig(family="eg1", trials=3, theorems=("frameProduct", "frameZY"), seed=0)
    rep = run_campaign(cfg)
    assert rep["skippedCount"] == 3
    assert rep["perTheoremBreakdown"]["frameProduct"]["equalities"] == 3


def test_report_independent_of_jobs():
    cfg = FuzzConfig(family="psd", trials=24, theorems=("hadamard", "zy"), seed=8,
                     n_min=2, n_max=5)
    a = report_bytes(run_campaign(cfg), drop_elapsed=True)
    b = report_bytes(run_campaign(dataclasses.replace(cfg, jobs=3)), drop_elapsed=True)
    assert a == b


def test_all_perms_enumerates():
    cfg = FuzzConfig(family="pd", trials=2, theorems=("zy",), seed=1, n_min=4, n_max=4,
                     all_perms=True)
    assert run_campaign(cfg)["checksRun"] == 2 * 23
