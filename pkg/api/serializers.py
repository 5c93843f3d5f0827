"""
JSON and CSV emission for CLI results.

JSON documents are {schema_version, command, config, results[, warnings]}
with sorted keys and every float written to 17 significant digits.  Values
that are not finite become the strings "nan", "inf" and "-inf" and the
document gains a warning entry.
"""

import json
import logging
import math
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from core.exceptions import IoError
from models.dynamics import LimitCycle, PhasePortrait, Trajectory
from models.geometry import CurveSample

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"
FLOAT_FORMAT = "%.17g"
NON_FINITE_WARNING = "non-finite values serialized as strings"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def to_jsonable(value: Any) -> Any:
    """Plain dicts, lists, strings, numbers; pydantic models and numpy values unwrapped."""
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k.value if isinstance(k, Enum) else k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def _encode(value: Any, flags: dict[str, bool]) -> str:
    if value is None or isinstance(value, bool):
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            flags["non_finite"] = True
            return json.dumps("nan" if math.isnan(value) else ("inf" if value > 0 else "-inf"))
        return FLOAT_FORMAT % value
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted(value.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v, flags)}" for k, v in items) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v, flags) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps_json(command: str, config: Any, results: Any) -> str:
    flags: dict[str, bool] = {}
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": to_jsonable(config),
        "results": to_jsonable(results),
    }
    body = _encode(document, flags)
    if flags.get("non_finite"):
        logger.warning(f"{command}: {NON_FINITE_WARNING}")
        document["warnings"] = [NON_FINITE_WARNING]
        body = _encode(document, flags)
    return body + "\n"


# ============================================================================
# Tables
# ============================================================================

def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    return pd.DataFrame({"t": trajectory.t, "x": trajectory.x, "y": trajectory.y})


def portrait_frame(portrait: PhasePortrait) -> pd.DataFrame:
    frames = [
        trajectory_frame(trajectory).assign(start=index)
        for index, trajectory in enumerate(portrait.trajectories)
    ]
    if not frames:
        return pd.DataFrame(columns=["start", "t", "x", "y"])
    return pd.concat(frames, ignore_index=True)[["start", "t", "x", "y"]]


def cycles_frame(cycles: Sequence[LimitCycle]) -> pd.DataFrame:
    rows = [
        {"x0": c.x0, "period": c.period, "stability": c.stability.value, "slope": c.slope}
        for c in sorted(cycles, key=lambda c: c.x0)
    ]
    return pd.DataFrame(rows, columns=["x0", "period", "stability", "slope"])


def sample_frame(sample: CurveSample) -> pd.DataFrame:
    """One row per point; columns c0.. named by coordinate index, plus the label."""
    columns = [f"c{i}" for i in range(sample.dimension)]
    frame = pd.DataFrame(sample.points, columns=columns)
    frame.insert(0, "label", sample.label.value)
    return frame


def samples_frame(samples: Sequence[CurveSample]) -> pd.DataFrame:
    frames = [sample_frame(s) for s in samples if s.points]
    if not frames:
        return pd.DataFrame(columns=["label"])
    return pd.concat(frames, ignore_index=True)


def to_frame(result: Any) -> pd.DataFrame:
    if isinstance(result, pd.DataFrame):
        return result
    if isinstance(result, Trajectory):
        return trajectory_frame(result)
    if isinstance(result, PhasePortrait):
        return portrait_frame(result)
    if isinstance(result, CurveSample):
        return sample_frame(result)
    if isinstance(result, (list, tuple)):
        if all(isinstance(r, LimitCycle) for r in result):
            return cycles_frame(result)
        if all(isinstance(r, CurveSample) for r in result):
            return samples_frame(result)
        return pd.DataFrame([to_jsonable(r) for r in result])
    raise TypeError(f"no tabular form for {type(result).__name__}")


def dumps_csv(result: Any) -> str:
    return to_frame(result).to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


# ============================================================================
# Files
# ============================================================================

def serialize(
    result: Any,
    fmt: OutputFormat | str,
    path: Optional[Path | str],
    command: str = "",
    config: Any = None,
) -> str:
    """Render ``result`` and write it to ``path`` (returned text only when path is None)."""
    fmt = OutputFormat(fmt)
    text = dumps_json(command, config or {}, result) if fmt is OutputFormat.JSON else dumps_csv(result)
    if path is None:
        return text
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}", {"path": str(path)}) from e
    logger.info(f"Wrote {fmt.value} to {path}")
    return text
