"""JSON serialization of trained models.

Floats are written with ``repr`` precision, so save -> load round trips
are exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .adaptive import AwModel
from .baselines import BaselineModel

FORMAT_VERSION = 1

Model = Union[AwModel, BaselineModel]


def model_to_dict(model: Model) -> dict:
    if isinstance(model, AwModel):
        return {"format_version": FORMAT_VERSION, "kind": "aw_lssvm", "model": model.to_dict()}
    return {"format_version": FORMAT_VERSION, "kind": model.kind, "model": model.to_dict()}


def model_from_dict(d: dict) -> Model:
    if d.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {d.get('format_version')!r}")
    if d["kind"] == "aw_lssvm":
        return AwModel.from_dict(d["model"])
    return BaselineModel.from_dict(d["model"])


def save_model(model: Model, path) -> None:
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh)
        fh.write("\n")


def load_model(path) -> Model:
    with open(Path(path), encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
