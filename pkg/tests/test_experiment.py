import json

import pytest

from hsbm.core import ModelParams
from hsbm.errors import InvalidParams
from hsbm.experiment import (CSV_COLUMNS, ExperimentConfig, cells_to_csv, cells_to_json,
                             config_from_mapping, parse_config_text, phase_diagram,
                             read_cells_csv, run_trial, trial_seed)
from hsbm.rng import mix_seed


def test_run_trial_certificate_complete():
    params = ModelParams.from_probabilities(20, 3, 1.0, 0.0)
    rec = run_trial(params, "certificate", 5)
    assert rec.success and rec.lambda3 == pytest.approx(80, abs=1e-6)


@pytest.mark.parametrize("method", ["certificate", "spectral", "ml", "trunc", "trunc-local"])
def test_run_trial_empty_fails(method):
    rec = run_trial(ModelParams(12, 3, 0, 0), method, 1)
    assert not rec.success


def test_run_trial_deterministic_and_replayable():
    params = ModelParams(60, 3, 12, 2)
    a = run_trial(params, "trunc-local", 77)
    b = run_trial(ModelParams(a.n, a.k, a.alpha, a.beta), a.method, a.seed)
    assert a == b


def test_run_trial_records_errors():
    rec = run_trial(ModelParams(12, 3, 1, 1), "ml", 0)
    assert not rec.success and rec.error.startswith("DegenerateModel")
    with pytest.raises(InvalidParams):
        run_trial(ModelParams(12, 3, 1, 1), "nope", 0)


def test_config_validation():
    with pytest.raises(InvalidParams):
        ExperimentConfig(alpha_steps=0)
    with pytest.raises(InvalidParams):
        ExperimentConfig(trials=0)
    with pytest.raises(InvalidParams):
        ExperimentConfig(alpha_range=(5, 1))
    with pytest.raises(InvalidParams):
        ExperimentConfig(n=500, method="ml")
    with pytest.raises(InvalidParams):
        ExperimentConfig(method="magic")


def test_trial_seed_is_mix():
    assert trial_seed(3, 1, 2, 4) == mix_seed(3, 1, 2, 4)
    assert len({trial_seed(0, i, j, t) for i in range(4) for j in range(4) for t in range(4)}) == 64


def small_config(**kw):
    base = dict(n=40, k=3, alpha_range=(2.0, 30.0), beta_range=(0.0, 4.0), alpha_steps=3,
                beta_steps=2, trials=4, base_seed=9, method="certificate", workers=1)
    base.update(kw)
    return ExperimentConfig(**base)


def test_single_cell_wraps_run_trial():
    cfg = small_config(alpha_steps=1, beta_steps=1, trials=1, alpha_range=(20, 20), beta_range=(1, 1))
    [cell] = phase_diagram(cfg)
    rec = run_trial(ModelParams(40, 3, 20.0, 1.0), "certificate", trial_seed(9, 0, 0, 0))
    assert cell.records == (rec,)
    assert cell.successes == int(rec.success) and cell.mean_lambda3 == rec.lambda3


def test_aggregation_exact():
    cells = phase_diagram(small_config())
    assert len(cells) == 6
    for cell in cells:
        assert cell.successes == sum(r.success for r in cell.records)
        assert 0 <= cell.successes <= cell.trials == 4
        assert cell.success_rate == cell.successes / cell.trials
        assert cell.mean_hamming_error is None


def test_parallel_matches_serial():
    serial = cells_to_csv(phase_diagram(small_config(workers=1)))
    parallel = cells_to_csv(phase_diagram(small_config(workers=2)))
    assert serial == parallel


def test_per_cell_errors_not_fatal():
    # alpha = 2000 pushes p above 1 for n = 12, k = 3
    cfg = small_config(n=12, alpha_range=(1.0, 2000.0), alpha_steps=2, beta_steps=1, trials=2)
    cells = phase_diagram(cfg)
    assert cells[0].errors == []
    assert cells[1].successes == 0 and all("OutOfRange" in e for e in cells[1].errors)


def test_csv_and_json_schema():
    cells = phase_diagram(small_config(method="spectral", alpha_steps=2, beta_steps=1))
    text = cells_to_csv(cells)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    rows = read_cells_csv(text)
    assert all(r["mean_lambda3"] is None and r["mean_hamming_error"] is not None for r in rows)
    js = json.loads(cells_to_json(cells))
    assert [list(d) for d in js] == [list(CSV_COLUMNS)] * len(cells)
    assert js[0]["alpha"] == rows[0]["alpha"]


def test_config_text():
    text = "# sweep\nn = 40\nk=3\nalpha_max=30\nsteps=2\nmethod=spectral\nformat=json\n"
    cfg = config_from_mapping(parse_config_text(text))
    assert (cfg.n, cfg.k, cfg.alpha_range[1], cfg.alpha_steps, cfg.beta_steps) == (40, 3, 30.0, 2, 2)
    assert cfg.method == "spectral" and cfg.fmt == "json"
    cfg2 = config_from_mapping({"trials": 7}, cfg)
    assert cfg2.trials == 7 and cfg2.n == 40
    with pytest.raises(InvalidParams):
        parse_config_text("bogus=1")
    with pytest.raises(InvalidParams):
        parse_config_text("n=forty")
    with pytest.raises(InvalidParams):
        parse_config_text("just text")
