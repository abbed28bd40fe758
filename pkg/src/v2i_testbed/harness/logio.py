"""Time-series log export and import.

CSV columns are exactly the time-series fields in order. Floats are written
with ``repr`` so a re-imported log is bit-identical to the original; the
PLOTDATA JSON adds the light-state bands used to color plot backgrounds.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from ..errors import IoError
from ..messages import SignalState
from .runner import TimeSeriesLog, TimeSeriesRow

CSV_COLUMNS = (
    "t",
    "d_int",
    "v_kmh",
    "light",
    "state",
    "warn",
    "v_min",
    "v_max",
    "time_to_green",
)


def _row_to_strings(row: TimeSeriesRow) -> list[str]:
    return [
        repr(row.t),
        repr(row.d_int),
        repr(row.v_kmh),
        row.light.name,
        str(row.state),
        "1" if row.warn else "0",
        repr(row.v_min),
        repr(row.v_max),
        repr(row.time_to_green),
    ]


def export_csv(log: TimeSeriesLog, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in log.rows:
                writer.writerow(_row_to_strings(row))
    except OSError as exc:
        raise IoError(f"cannot write CSV {path}: {exc}") from exc


def import_csv(path) -> list[TimeSeriesRow]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != list(CSV_COLUMNS):
                raise IoError(f"unexpected CSV header in {path}: {header}")
            rows = []
            for record in reader:
                rows.append(
                    TimeSeriesRow(
                        t=float(record[0]),
                        d_int=float(record[1]),
                        v_kmh=float(record[2]),
                        light=SignalState[record[3]],
                        state=int(record[4]),
                        warn=record[5] == "1",
                        v_min=float(record[6]),
                        v_max=float(record[7]),
                        time_to_green=float(record[8]),
                    )
                )
            return rows
    except OSError as exc:
        raise IoError(f"cannot read CSV {path}: {exc}") from exc
    except (KeyError, ValueError, IndexError) as exc:
        raise IoError(f"malformed CSV {path}: {exc}") from exc


def light_bands(log: TimeSeriesLog) -> list[dict]:
    """Contiguous intervals of constant light state, for plot backgrounds."""
    bands = []
    for row in log.rows:
        if bands and bands[-1]["state"] == row.light.name:
            bands[-1]["t1"] = row.t
        else:
            bands.append({"state": row.light.name, "t0": row.t, "t1": row.t})
    return bands


_BAND_COLORS = {"GREEN": "#2ca02c", "YELLOW": "#ffbf00", "RED": "#d62728"}


def export_plotdata(log: TimeSeriesLog, path) -> None:
    obj = {
        "scenario": log.scenario,
        "dt": log.dt,
        "columns": {
            name: [getattr(row, name) if name != "light" else row.light.name for row in log.rows]
            for name in CSV_COLUMNS
        },
        "light_bands": [
            {**band, "color": _BAND_COLORS[band["state"]]} for band in light_bands(log)
        ],
    }
    try:
        Path(path).write_text(json.dumps(obj, indent=2), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write plot data {path}: {exc}") from exc
