import csv
import json

import pytest

from kacwalk import ConfigError
from kacwalk.experiments import (
    SUMMARY_COLUMNS,
    ExperimentConfig,
    ResultRecord,
    config_from_dict,
    emit_results,
    load_config,
    run_experiment,
)


def test_defaults_and_echo():
    cfg = ExperimentConfig()
    echo = cfg.echo()
    assert "workers" not in echo and "output_dir" not in echo
    assert ExperimentConfig(**echo, workers=3) .echo() == echo


@pytest.mark.parametrize("key,value", [("n", "ten"), ("n", 1), ("replicas", 0), ("kind", "x"),
                                       ("t_grid", [1.5]), ("stop_early", 1), ("alpha", 2.0),
                                       ("start", "middle"), ("seed", -1), ("n_grid", [1])])
def test_bad_values_name_their_key(key, value):
    with pytest.raises(ConfigError) as exc:
        config_from_dict({key: value})
    assert exc.value.key == key


def test_unknown_and_nested_keys():
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"colour": 1})
    assert exc.value.key == "colour"
    with pytest.raises(ConfigError) as exc:
        config_from_dict({"n": {"x": 1}})
    assert exc.value.key == "n"


def test_load_config_with_overrides(tmp_path):
    p = tmp_path / "c.toml"
    p.write_text('kind = "coupon"\nn = 12\nt_grid = [5, 10]\nseed = 3\n')
    cfg = load_config(p, seed=9, n=None)
    assert (cfg.kind, cfg.n, cfg.t_grid, cfg.seed) == ("coupon", 12, [5, 10], 9)
    p.write_text("n = = 2\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_empty_records_write_valid_files(tmp_path):
    out = emit_results([], tmp_path, stem="empty")
    assert (tmp_path / "empty.jsonl").read_text() == ""
    rows = list(csv.reader(open(out["csv"])))
    assert rows == [list(SUMMARY_COLUMNS)]


def test_record_roundtrip_and_replica_rows(tmp_path):
    cfg = ExperimentConfig(kind="coupon", n=5, replicas=37, chunk_size=10, per_replica=True,
                           t_grid=[10])
    rec = run_experiment(cfg)
    out = emit_results([rec], tmp_path)
    name = out["jsonl"].rsplit("/", 1)[1]
    assert name.startswith("coupon_n5_seed0_")
    payload = json.loads(open(out["jsonl"]).read())
    again = run_experiment(ExperimentConfig(**payload["config"]))
    assert again.rows == rec.rows
    with open(out["replicas_csv"]) as fh:
        assert sum(1 for _ in csv.DictReader(fh)) == 37
    with open(out["csv"]) as fh:
        assert len(list(csv.DictReader(fh))) == len(rec.rows)


def test_nan_written_as_null():
    rec = ResultRecord("x", {}, [{"estimate": float("nan")}])
    assert json.loads(rec.to_json())["rows"][0]["estimate"] is None
