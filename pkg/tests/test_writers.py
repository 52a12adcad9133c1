import json

import numpy as np
import pandas as pd

from contagion.cli.writers import frame_records, write_csv, write_json, write_table


def sample_frame() -> pd.DataFrame:
    return pd.DataFrame(
        {
            "name": ["lb1", "neumann"],
            "value": [0.1, np.nan],
            "bound": pd.array([1.5, None], dtype="Float64"),
        }
    )


def test_csv_format(tmp_path) -> None:
    path = write_csv(sample_frame(), str(tmp_path / "nested" / "t.csv"))
    with open(path, "rb") as f:
        data = f.read()
    assert data == b"name,value,bound\nlb1,0.10000000000000001,1.5\nneumann,,\n"


def test_json_nulls(tmp_path) -> None:
    path = write_json({"x": float("nan"), "y": [np.float64(2.0), pd.NA], "z": np.int64(3)}, str(tmp_path / "a.json"))
    with open(path, encoding="utf-8") as f:
        assert json.load(f) == {"x": None, "y": [2.0, None], "z": 3}


def test_frame_records() -> None:
    assert frame_records(sample_frame()) == [
        {"name": "lb1", "value": 0.1, "bound": 1.5},
        {"name": "neumann", "value": None, "bound": None},
    ]


def test_write_table_picks_the_extension(tmp_path) -> None:
    frame = sample_frame()
    assert write_table(frame, str(tmp_path), "bounds", "csv").endswith("bounds.csv")
    path = write_table(frame, str(tmp_path), "bounds", "json")
    assert path.endswith("bounds.json")
    with open(path, encoding="utf-8") as f:
        assert json.load(f)[1]["name"] == "neumann"
