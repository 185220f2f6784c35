"""Published JSON Schemas for the CLI's machine-readable reports."""

from __future__ import annotations

__all__ = ["REPORT_SCHEMAS", "validate_report"]

_VERIFIER_ROW = {
    "type": "object",
    "required": ["node", "index", "accepts", "kernel_rank"],
    "properties": {
        "node": {"type": "string"},
        "index": {"type": "integer", "minimum": 1},
        "accepts": {"type": "array", "items": {"type": "boolean"}},
        "kernel_rank": {"type": "integer", "minimum": 0},
    },
}

_SINK_ROW = {
    "type": "object",
    "required": ["node", "kernel_rank", "full_rank", "recovered"],
    "properties": {
        "node": {"type": "string"},
        "kernel_rank": {"type": "integer", "minimum": 0},
        "full_rank": {"type": "boolean"},
        "recovered": {"type": ["boolean", "null"]},
    },
}

_EC_ROW = {
    "type": "object",
    "required": ["coalition", "target", "kind", "against_target", "span_agrees"],
    "properties": {
        "coalition": {"type": "array", "items": {"type": "integer"}},
        "target": {"type": "integer"},
        "kind": {"type": "string"},
        "against_target": {"type": "boolean"},
        "span_agrees": {"type": "boolean"},
    },
}

REPORT_SCHEMAS: dict[str, dict] = {
    "setup": {
        "type": "object",
        "required": ["format", "path", "q", "l", "n", "M", "V", "kdim", "packet_symbols"],
        "properties": {
            "format": {"const": "subtag-report/setup/1"},
            "path": {"type": "string"},
            "q": {"type": "integer", "minimum": 2},
            "l": {"type": "integer", "minimum": 1},
            "n": {"type": "integer", "minimum": 1},
            "M": {"type": "integer", "minimum": 1},
            "V": {"type": "integer", "minimum": 1},
            "kdim": {"type": "integer", "minimum": 1},
            "packet_symbols": {"type": "integer", "minimum": 3},
        },
    },
    "simulate": {
        "type": "object",
        "required": [
            "format",
            "seed",
            "topology",
            "packet_symbols",
            "verifiers",
            "sinks",
            "all_accepted",
            "injected_at",
        ],
        "properties": {
            "format": {"const": "subtag-report/simulate/1"},
            "seed": {"type": "integer"},
            "topology": {"type": "string"},
            "packet_symbols": {"type": "integer"},
            "verifiers": {"type": "array", "items": _VERIFIER_ROW},
            "sinks": {"type": "array", "items": _SINK_ROW},
            "all_accepted": {"type": "boolean"},
            "injected_at": {"type": ["string", "null"]},
        },
    },
    "attack": {
        "type": "object",
        "required": [
            "format",
            "seed",
            "mode",
            "coalition",
            "target",
            "r0",
            "k0",
            "predicted_keys",
            "measured_keys",
            "outcome",
        ],
        "properties": {
            "format": {"const": "subtag-report/attack/1"},
            "seed": {"type": "integer"},
            "mode": {"enum": ["deterministic", "guess", "histogram"]},
            "coalition": {"type": "array", "items": {"type": "integer"}},
            "target": {"type": "integer"},
            "r0": {"type": "integer", "minimum": 0},
            "k0": {"type": "integer", "minimum": 0},
            "predicted_keys": {"type": "integer", "minimum": 1},
            "measured_keys": {"type": "integer", "minimum": 1},
            "outcome": {"type": "string"},
            "payload": {"type": "array", "items": {"type": "integer"}},
            "target_accepts": {"type": ["boolean", "null"]},
            "others_accept": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["index", "accepts"],
                    "properties": {
                        "index": {"type": "integer"},
                        "accepts": {"type": "boolean"},
                    },
                },
            },
            "acceptance": {
                "type": "object",
                "required": ["trials", "accepted", "rate", "expected_rate"],
                "properties": {
                    "trials": {"type": "integer", "minimum": 1},
                    "accepted": {"type": "integer", "minimum": 0},
                    "rate": {"type": "number"},
                    "expected_rate": {"type": "number"},
                },
            },
            "histogram": {
                "type": "object",
                "required": ["labels", "min_count", "max_count", "uniform"],
                "properties": {
                    "labels": {"type": "integer"},
                    "min_count": {"type": "integer"},
                    "max_count": {"type": "integer"},
                    "uniform": {"type": "boolean"},
                    "counts": {"type": "object"},
                },
            },
            "ec_classification": {
                "type": "object",
                "required": ["kind", "against_target"],
                "properties": {
                    "kind": {"type": "string"},
                    "against_target": {"type": "boolean"},
                    "complement_sum": {"type": ["array", "string"]},
                },
            },
        },
    },
    "analyze": {
        "type": "object",
        "required": [
            "format",
            "length",
            "kdim",
            "dual_distance",
            "mds",
            "target",
            "access_structure",
        ],
        "properties": {
            "format": {"const": "subtag-report/analyze/1"},
            "length": {"type": "integer"},
            "kdim": {"type": "integer"},
            "dual_distance": {"type": "integer"},
            "mds": {"type": "boolean"},
            "target": {"type": "integer"},
            "minimal_dual_codewords": {"type": "array"},
            "access_structure": {
                "type": "array",
                "items": {"type": "array", "items": {"type": "integer"}},
            },
            "ec_table": {"type": "array", "items": _EC_ROW},
        },
    },
    "ec-code": {
        "type": "object",
        "required": ["format", "path", "num_points", "degree", "length", "kdim"],
        "properties": {
            "format": {"const": "subtag-report/ec-code/1"},
            "path": {"type": "string"},
            "num_points": {"type": "integer"},
            "degree": {"type": "integer"},
            "length": {"type": "integer"},
            "kdim": {"type": "integer"},
            "curve_points": {"type": "integer"},
        },
    },
}


def validate_report(kind: str, report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, REPORT_SCHEMAS[kind])
