"""JSON schemas for CLI payloads (schema version descent0/v1)."""

_INT = {"type": "integer"}
_BOOL = {"type": "boolean"}
_STR = {"type": "string"}
_CLASS = {"type": "string", "pattern": "^-?[0-9]+$"}
_FRACTION = {"type": "string", "pattern": "^-?[0-9]+(/[0-9]+)?$"}
_PLACE = {"anyOf": [{"const": "inf"}, {"type": "integer", "minimum": 2}]}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
    }


CURVE = _obj(
    {"a": _INT, "b": _INT, "twist_by": _INT, "A": _INT, "B": _INT},
    required=["a", "b", "twist_by"],
)

SELMER_ROW = _obj({
    "curve": CURVE,
    "selmer_phi": {"type": "array", "items": _CLASS, "minItems": 1},
    "selmer_phihat": {"type": "array", "items": _CLASS, "minItems": 1},
    "dim_phi": _INT,
    "dim_phihat": _INT,
    "rank_upper_bound": _INT,
    "bad_places": {"type": "array", "items": _PLACE},
})

RANK_ROW = _obj({"curve": CURVE, "dim_phi": _INT, "dim_phihat": _INT, "rank_upper_bound": _INT})

REPORT = _obj({
    "theorem": {"enum": ["T2", "T3", "T4"]},
    "variant": _STR,
    "params": {"type": "object"},
    "overall": _BOOL,
    "items": {
        "type": "array",
        "items": _obj({
            "condition_id": _STR,
            "description": _STR,
            "holds": _BOOL,
            "mandatory": _BOOL,
            "evidence": {"type": "object"},
        }),
    },
})

CERTIFICATE = _obj({
    "curve": CURVE,
    "r": _INT,
    "selmer_phi": {"type": "array", "items": _CLASS},
    "selmer_phihat": {"type": "array", "items": _CLASS},
    "dims": {"type": "array", "items": _INT},
    "expected_dims": {"type": "array", "items": _INT},
    "rank_upper_bound": _INT,
    "pass": _BOOL,
})

FAMILY = _obj({"family": {"enum": ["T2", "T3", "T4"]}}, required=["family"])

POINTS_ROW = _obj({
    "curve": CURVE,
    "H": _INT,
    "points": {"type": "array", "items": _obj({"x": _FRACTION, "y": _FRACTION, "torsion": _BOOL})},
})


def _rows_or(row: dict) -> dict:
    return {"anyOf": [row, _obj({"rows": {"type": "array", "items": row}})]}


PAYLOADS = {
    "selmer": _rows_or(SELMER_ROW),
    "rank-bound": _rows_or(RANK_ROW),
    "check-thm2": REPORT,
    "check-thm3": REPORT,
    "check-thm4": REPORT,
    "search": _obj(
        {
            "family": FAMILY,
            "limit": _INT,
            "modulus": _INT,
            "predicted_density": _FRACTION,
            "primes": {"type": "array", "items": _INT},
            "certificates": {"type": "array", "items": CERTIFICATE},
        },
        required=["family", "limit", "modulus", "predicted_density", "primes"],
    ),
    "density": _obj({
        "family": FAMILY,
        "limit": _INT,
        "count": _INT,
        "prime_count": _INT,
        "empirical": _FRACTION,
        "predicted": _FRACTION,
        "relative_error": {"type": "number", "minimum": 0},
    }),
    "simultaneous": _obj({
        "families": {"type": "array", "items": FAMILY, "minItems": 1},
        "limit": _INT,
        "joint_density": _FRACTION,
        "found": _BOOL,
        "r": {"type": ["integer", "null"]},
        "certificates": {"type": "array", "items": CERTIFICATE},
    }),
    "thm1-demo": {
        "anyOf": [
            _obj({
                "k": _INT,
                "variant": _STR,
                "found": {"const": True},
                "q": _INT,
                "ps": {"type": "array", "items": _INT},
                "r": _INT,
                "joint_density": _FRACTION,
                "attempts": {"type": "array", "items": _obj({"limit": _INT, "found": _BOOL})},
                "certificates": {"type": "array", "items": CERTIFICATE},
            }),
            _obj({"k": _INT, "variant": _STR, "found": {"const": False}, "message": _STR, "limit": _INT}),
        ]
    },
    "oracle-validate": _obj({
        "seed": _INT,
        "count": _INT,
        "sound_disagreements": {"type": "array", "items": {"type": "object"}},
        "decided_at_max_k": _INT,
        "decided_fraction": {"type": "number"},
        "by_prime": {"type": "object"},
    }),
    "point-search": _rows_or(POINTS_ROW),
}

ERROR = _obj({"error": _STR})


def document_schema(command: str, status: str) -> dict:
    payload = ERROR if status == "usage_error" else {"anyOf": [PAYLOADS[command], ERROR]}
    return _obj({
        "schema": {"const": "descent0/v1"},
        "command": _STR,
        "status": {"enum": ["ok", "mismatch", "usage_error"]},
        "payload": payload,
    })
