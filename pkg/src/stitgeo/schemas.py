"""JSON schemas for the file formats written by the CLI.

Kept as plain dicts so tests can validate outputs with ``jsonschema`` and
docs stay in sync with the code (see docs/file_formats.md).
"""

_VECTOR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 3}

POLYTOPE_SCHEMA = {
    "type": "object",
    "required": ["vertices", "facets"],
    "properties": {
        "vertices": {"type": "array", "items": _VECTOR},
        "facets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tag", "vertex_indices"],
                "properties": {
                    "tag": {"type": "integer"},
                    "vertex_indices": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
    },
}

EVENT_SCHEMA = {
    "type": "object",
    "required": ["id", "birth_time", "hyperplane", "face_vertices", "face_tags"],
    "properties": {
        "id": {"type": "integer", "minimum": 0},
        "birth_time": {"type": "number", "minimum": 0},
        "parent_cell_id": {"type": "integer"},
        "hyperplane": {
            "type": "object",
            "required": ["normal", "offset"],
            "properties": {"normal": _VECTOR, "offset": {"type": "number"}},
        },
        "face_vertices": {"type": "array", "items": _VECTOR},
        "face_tags": {"type": "array", "items": {"type": "integer"}},
    },
}

TESSELLATION_SCHEMA = {
    "type": "object",
    "required": ["dim", "window", "q", "t", "kind", "events", "cells"],
    "properties": {
        "dim": {"enum": [2, 3]},
        "window": {
            "type": "object",
            "required": ["lo", "hi"],
            "properties": {"lo": _VECTOR, "hi": _VECTOR},
        },
        "q": {"type": "string"},
        "t": {"type": "number", "exclusiveMinimum": 0},
        "kind": {"enum": ["stit", "pht", "iteration"]},
        "events": {"type": "array", "items": EVENT_SCHEMA},
        "cells": {"type": "array", "items": POLYTOPE_SCHEMA},
        "frozen_cells": {"type": "array", "items": {"type": "integer"}},
    },
}

ESTIMATE_SCHEMA = {
    "type": "object",
    "required": ["statistic", "mode", "estimate", "stderr", "ci95"],
    "properties": {
        "statistic": {"type": "string"},
        "mode": {"type": "string"},
        "estimate": {"type": "number"},
        "stderr": {"type": "number", "minimum": 0},
        "ci95": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "effective_sample_size": {"type": "number"},
        "replicates": {"type": "integer", "minimum": 1},
    },
}

# every CLI output document is wrapped in an envelope with the resolved
# configuration and the tool version
ENVELOPE_SCHEMA = {
    "type": "object",
    "required": ["tool", "version", "config", "result"],
    "properties": {
        "tool": {"const": "stitgeo"},
        "version": {"type": "string"},
        "config": {"type": "object"},
        "result": {},
    },
}
