"""Table detection, structure recognition and QA evaluation toolkit.

Grids are dicts shaped like ``{"n_rows", "n_cols", "cells": [...]}`` and
object lists are ``[{"class": "table row", "bbox": [x1, y1, x2, y2]}, ...]``,
the same shapes the JSONL corpora use.
"""

import json

from . import _tabkit
from ._tabkit import TabkitError, bbox_iou, detection_prf, tqa_accuracy, tqa_correct

__all__ = [
    "TabkitError",
    "bbox_iou",
    "canonicalize",
    "convert",
    "crop_to_page",
    "detection_prf",
    "emit_html",
    "eval_run",
    "gen_fixtures",
    "grid_to_objects",
    "grid_validate",
    "grits",
    "objects_to_grid",
    "parse_html_table",
    "parse_td_response",
    "parse_tsr_response",
    "serialize_tsr",
    "steds",
    "tqa_accuracy",
    "tqa_correct",
]


def _dump(value):
    return value if isinstance(value, str) else json.dumps(value)


def parse_td_response(text):
    """Returns (boxes, diagnostics)."""
    boxes, diagnostics = _tabkit.parse_td_response(text)
    return [tuple(b) for b in boxes], diagnostics


def parse_tsr_response(text):
    """Returns (objects, diagnostics)."""
    objects, diagnostics = _tabkit.parse_tsr_response(text)
    return json.loads(objects), diagnostics


def serialize_tsr(objects):
    return _tabkit.serialize_tsr(_dump(objects))


def canonicalize(objects):
    return json.loads(_tabkit.canonicalize(_dump(objects)))


def parse_html_table(html):
    """Returns (grid, diagnostics)."""
    grid, diagnostics = _tabkit.parse_html_table(html)
    return json.loads(grid), diagnostics


def emit_html(grid):
    return _tabkit.emit_html(_dump(grid))


def grid_validate(grid):
    return _tabkit.grid_validate(_dump(grid))


def objects_to_grid(objects):
    """Returns (grid, diagnostics)."""
    grid, diagnostics = _tabkit.objects_to_grid(_dump(objects))
    return json.loads(grid), diagnostics


def grid_to_objects(grid, table_bbox=(0.0, 0.0, 1.0, 1.0)):
    return json.loads(_tabkit.grid_to_objects(_dump(grid), list(table_bbox)))


def crop_to_page(objects, region):
    return json.loads(_tabkit.crop_to_page(_dump(objects), list(region)))


def steds(gt, pred, header_sections=True):
    return _tabkit.steds(_dump(gt), _dump(pred), header_sections)


def grits(gt, pred, kind="top"):
    return _tabkit.grits(_dump(gt), _dump(pred), kind)


def convert(text, from_format, to_format, table_bbox=None, remap="none"):
    """Returns (output, warnings)."""
    bbox = None if table_bbox is None else list(table_bbox)
    return _tabkit.convert(text, from_format, to_format, bbox, remap)


def eval_run(gt_path, pred_path, task, iou_threshold=0.75, metrics=(), workers=1):
    """Returns (report, table): the report as a dict, the table as text."""
    report, table = _tabkit.eval_run(str(gt_path), str(pred_path), task, iou_threshold, list(metrics), workers)
    return json.loads(report), table


def gen_fixtures(seed, count=50, corruption_rate=0.0, max_rows=8, max_cols=8, task="tsr"):
    """Returns (gt_jsonl, pred_jsonl) text."""
    return _tabkit.gen_fixtures(seed, count, corruption_rate, max_rows, max_cols, task)
