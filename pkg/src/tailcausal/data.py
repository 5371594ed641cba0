"""Time-series panel ingestion and multivariate declustering.

The declustering pass keeps one peak day per window so that retained rows are
approximately independent in time: within each segment it repeatedly centres
an l-day window on the largest remaining observation (largest across stations
after rank standardisation), keeps that day, and consumes the window.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

__all__ = ["TimeSeriesPanel", "load_csv", "decluster"]


@dataclass(frozen=True)
class TimeSeriesPanel:
    """n x d station values with time indices and optional segment starts."""

    values: np.ndarray
    timestamps: np.ndarray
    segments: tuple[int, ...] = (0,)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        timestamps = np.asarray(self.timestamps)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array")
        if timestamps.shape != (values.shape[0],):
            raise ValueError("timestamps must have one entry per row")
        segs = tuple(int(s) for s in self.segments)
        n = values.shape[0]
        if not segs or segs[0] != 0:
            raise ValueError("segment starts must begin at row 0")
        if any(a >= b for a, b in zip(segs, segs[1:])) or (n and segs[-1] >= n):
            raise ValueError("segment starts must be strictly increasing row indices")
        bounds = segs + (n,)
        for a, b in zip(bounds, bounds[1:]):
            ts = timestamps[a:b]
            if ts.size > 1 and np.any(np.diff(ts.astype(float)) <= 0):
                raise ValueError("timestamps must increase strictly within segments")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "segments", segs)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


def load_csv(
    path,
    header: bool = False,
    timestamp_col: int | None = None,
    segment_col: int | None = None,
    na_policy: str = "error",
) -> TimeSeriesPanel:
    """Read a numeric panel from a delimited text file.

    timestamp_col / segment_col are 0-based column positions consumed into the
    panel metadata; remaining columns form the payload. na_policy is either
    "error" or "drop" (dropped rows are logged). Segments start wherever the
    segment column changes value.
    """
    if na_policy not in ("error", "drop"):
        raise ValueError(f"na policy must be 'error' or 'drop', got {na_policy!r}")
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        width = None
        for lineno, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if header and lineno == 1:
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ValueError(f"line {lineno}: expected {width} columns, got {len(cells)}")
            parsed = []
            bad = False
            for cell in cells:
                cell = cell.strip()
                if cell == "" or cell.upper() in ("NA", "NAN"):
                    bad = True
                    parsed.append(np.nan)
                    continue
                try:
                    parsed.append(float(cell))
                except ValueError as exc:
                    raise ValueError(f"line {lineno}: non-numeric cell {cell!r}") from exc
            if bad:
                if na_policy == "error":
                    raise ValueError(f"line {lineno}: missing value")
                logger.info("dropping line %d with missing values", lineno)
                continue
            rows.append(parsed)
    if not rows:
        raise ValueError(f"no data rows in {path}")
    table = np.asarray(rows, dtype=float)
    meta_cols = [c for c in (timestamp_col, segment_col) if c is not None]
    if len(set(meta_cols)) != len(meta_cols):
        raise ValueError("timestamp and segment columns must differ")
    payload_cols = [c for c in range(table.shape[1]) if c not in meta_cols]
    if not payload_cols:
        raise ValueError("no payload columns left")
    timestamps = (
        table[:, timestamp_col] if timestamp_col is not None else np.arange(table.shape[0])
    )
    if segment_col is not None:
        labels = table[:, segment_col]
        starts = [0] + [t for t in range(1, len(labels)) if labels[t] != labels[t - 1]]
        segments = tuple(starts)
    else:
        segments = (0,)
    return TimeSeriesPanel(
        values=table[:, payload_cols], timestamps=timestamps, segments=segments
    )


def _rank_standardise(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    out = np.empty_like(values)
    for col in range(values.shape[1]):
        x = values[:, col]
        out[:, col] = np.searchsorted(np.sort(x), x, side="right") / (n + 1.0)
    return out


def decluster(panel: TimeSeriesPanel, window: int) -> TimeSeriesPanel:
    """Retain one peak day per non-overlapping window of the given width.

    Per segment, while some run of at least `window` consecutive unconsumed
    days remains: among the days of such runs, the one with the largest
    cross-station rank-standardised value is retained, and a full window of
    exactly `window` days around it (floor(window/2) before the peak, shifted
    as needed to stay inside the peak's run) is consumed. Runs shorter than
    the window are never touched, so a too-short segment yields no rows.
    Retained rows come out in time order. Peak comparability across stations
    uses the per-station rank transform, so heterogeneous scales contribute
    equally.
    """
    if window < 1:
        raise ValueError(f"window width must be >= 1, got {window}")
    magnitudes = _rank_standardise(panel.values).max(axis=1)
    bounds = panel.segments + (panel.n,)
    keep: list[int] = []
    for seg_start, seg_end in zip(bounds, bounds[1:]):
        free = np.ones(seg_end - seg_start, dtype=bool)
        mags = magnitudes[seg_start:seg_end]
        while True:
            eligible = _eligible_days(free, window)
            if eligible.size == 0:
                break
            peak = int(eligible[np.argmax(mags[eligible])])
            lo = peak
            while lo > 0 and free[lo - 1]:
                lo -= 1
            hi = peak
            while hi + 1 < free.size and free[hi + 1]:
                hi += 1
            start = min(max(lo, peak - window // 2), hi - window + 1)
            free[start : start + window] = False
            keep.append(seg_start + peak)
    keep.sort()
    idx = np.asarray(keep, dtype=int)
    starts = sorted({int(np.searchsorted(idx, s)) for s in panel.segments})
    new_bounds = tuple(s for s in starts if s < len(idx)) or (0,)
    return TimeSeriesPanel(
        values=panel.values[idx],
        timestamps=panel.timestamps[idx],
        segments=new_bounds,
    )


def _eligible_days(free: np.ndarray, window: int) -> np.ndarray:
    """Indices of free days lying in a run of at least `window` free days."""
    out = []
    start = None
    for t in range(free.size + 1):
        if t < free.size and free[t]:
            if start is None:
                start = t
        elif start is not None:
            if t - start >= window:
                out.extend(range(start, t))
            start = None
    return np.asarray(out, dtype=int)
