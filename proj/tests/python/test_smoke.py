import csv
import math
import os
from pathlib import Path

import pytest

import due

SOURCE_DIR = Path(os.environ.get("DUE_SOURCE_DIR", Path(__file__).resolve().parents[2]))
HOUSEHOLD = SOURCE_DIR / "data" / "households" / "ukdale_house1.profile"


def write_simulation_config(path, out, days=6):
    path.write_text(
        f"household = {HOUSEHOLD}\n"
        f"simulation.days = {days}\n"
        "simulation.start = 2015-04-06\n"
        "seed = 11\n"
        f"out = {out}\n"
    )


def test_categories_and_table():
    assert due.categories() == [
        "Cooking", "Entertainment", "Fridge", "Heating", "Housekeeping", "ICT", "Light", "Standby",
    ]
    table = {row["name"]: row for row in due.appliance_table()}
    assert table["kettle"]["beta1"] == pytest.approx(0.3)
    assert table["lighting"]["nominal_power"] == pytest.approx(137)


def test_scores():
    assert due.est_acc([1.0, 1.0], [2.0, 0.0]) == pytest.approx(0.5)
    assert due.est_acc([1.0], [0.0]) is None
    overall = due.overall_est_acc({"Fridge": [1.0, 1.0]}, {"Fridge": [1.0, 1.0], "Light": [2.0, 0.0]})
    assert overall == pytest.approx(0.75)


def test_errors_map_to_exception_classes(tmp_path):
    with pytest.raises(due.ConfigError):
        due.run(tmp_path / "missing.conf")
    assert issubclass(due.DataError, due.Error)
    with pytest.raises(due.DataError):
        due.est_acc([1.0, 2.0], [1.0])


def test_simulate_then_run(tmp_path):
    write_simulation_config(tmp_path / "sim.conf", tmp_path / "sim")
    info = due.simulate(tmp_path / "sim.conf")
    assert info["days"] == 6
    scores = due.run(tmp_path / "sim" / "run.conf", out=tmp_path / "reports")
    assert set(scores) == {"due", "co"}
    for value in scores.values():
        assert 0.0 <= value <= 1.0
    assert (tmp_path / "reports" / "metrics.tsv").exists()


def test_disaggregate_conserves_energy(tmp_path):
    write_simulation_config(tmp_path / "sim.conf", tmp_path / "sim", days=3)
    due.simulate(tmp_path / "sim.conf")
    with open(tmp_path / "sim" / "aggregate.csv") as f:
        rows = [r for r in csv.reader(f) if r and not r[0].startswith("#")]
    rows = [r for r in rows if r[0].lstrip("-").isdigit()]
    start = int(rows[0][0])
    minute = [float(r[1]) for r in rows]
    values = [sum(minute[i:i + 15]) / 15 for i in range(0, len(minute), 15)]
    out = due.disaggregate(values, start, HOUSEHOLD, seed=3)
    assert set(out) == set(due.categories())
    for i in range(0, len(values), 17):
        total = sum(series[i] for series in out.values())
        assert math.isclose(total, values[i], rel_tol=1e-9, abs_tol=1e-6)
