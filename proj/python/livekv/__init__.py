"""Python bindings for the livekv simulator."""

import json

from ._core import (
    diff_fields,
    field_root,
    merge_sparse,
    preference_list,
    ring_position,
    run_scenario,
)

__all__ = [
    "diff_fields",
    "field_root",
    "merge_sparse",
    "preference_list",
    "ring_position",
    "run_scenario",
    "run_records",
]


def run_records(text, **config):
    """Run a scenario and return (exit_code, list of decoded records)."""
    code, jsonl = run_scenario(text, **config)
    return code, [json.loads(line) for line in jsonl.splitlines()]
