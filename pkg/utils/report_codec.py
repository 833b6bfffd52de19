"""
JSON documents written by the chebdyn CLI.

Complex numbers are encoded as {"re": float, "im": float}; the point at
infinity is the string "infinity". Every top-level document carries
"schema_version". Python's float repr round-trips doubles, so decoding an
encoded document gives back the same numbers bit for bit.

Key functions:
- encode_value / decode_complex: value-level codec
- analysis_document: fixed/critical point tables for one map
- claim_report_to_dict / claim_report_from_dict: verify output
- dumps_document / loads_document: text form (indent 2, trailing newline)
"""

import json
import math
from dataclasses import fields, is_dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from chebdyn.config import SCHEMA_VERSION
from chebdyn.types import (
    ClaimReport,
    ComplexPoly,
    CriticalPointRecord,
    ExpPolyFunction,
    FixedPointRecord,
    InfinitySeries,
    RationalMap,
    RealLineProfile,
)

INFINITY_TOKEN = "infinity"


class SchemaError(ValueError):
    """Raised when a document does not have the expected shape or version."""


def encode_complex(z: complex) -> Any:
    z = complex(z)
    if math.isinf(z.real) or math.isinf(z.imag):
        return INFINITY_TOKEN
    return {"re": z.real, "im": z.imag}


def decode_complex(value: Any) -> complex:
    if value == INFINITY_TOKEN:
        return complex(math.inf, 0.0)
    if isinstance(value, dict) and set(value) == {"re", "im"}:
        return complex(float(value["re"]), float(value["im"]))
    raise SchemaError(f"not an encoded complex number: {value!r}")


def encode_value(value: Any) -> Any:
    """Recursively turn numbers, numpy scalars, tuples and dataclasses into JSON values."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, str) or value is None:
        return value
    if isinstance(value, ComplexPoly):
        return [encode_complex(c) for c in value.coeffs]
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode_value(v) for v in value]
    if is_dataclass(value):
        return {f.name: encode_value(getattr(value, f.name)) for f in fields(value)}
    raise TypeError(f"cannot encode {type(value).__name__}")


def _fixed_point_entry(record: FixedPointRecord) -> Dict[str, Any]:
    return {
        "location": encode_complex(record.location),
        "multiplier": encode_complex(record.multiplier),
        "multiplicity": record.multiplicity,
        "kind": record.kind,
        "classification": record.classification,
    }


def _critical_point_entry(record: CriticalPointRecord) -> Dict[str, Any]:
    entry = {
        "location": encode_complex(record.location),
        "multiplicity": record.multiplicity,
        "category": record.category,
    }
    if record.tag is not None:
        entry["tag"] = record.tag
    return entry


def analysis_document(
    f: ExpPolyFunction,
    R: RationalMap,
    fixed: Sequence[FixedPointRecord],
    critical: Sequence[CriticalPointRecord],
    series: Optional[InfinitySeries],
    method: str = "chebyshev",
) -> Dict[str, Any]:
    """The document printed by ``runner.py analyze``."""
    return {
        "schema_version": SCHEMA_VERSION,
        "input": {"p": encode_value(f.p), "q": encode_value(f.q), "method": method},
        "map": {"degree": R.degree, "num": encode_value(R.num), "den": encode_value(R.den)},
        "fixed_points": [_fixed_point_entry(r) for r in fixed],
        "critical_points": [_critical_point_entry(r) for r in critical],
        "infinity_series": None if series is None else {
            "coefficients": [encode_complex(c) for c in series.coefficients],
            "multiplicity": series.multiplicity,
        },
    }


def fixed_points_from_document(document: Dict[str, Any]) -> List[FixedPointRecord]:
    check_schema(document)
    return [
        FixedPointRecord(
            location=decode_complex(e["location"]),
            multiplier=decode_complex(e["multiplier"]),
            multiplicity=int(e["multiplicity"]),
            kind=e["kind"],
            classification=e["classification"],
        )
        for e in document["fixed_points"]
    ]


def claim_report_to_dict(report: ClaimReport) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "claim_id": report.claim_id,
        "parameters": encode_value(report.parameters),
        "verdict": report.verdict,
        "witnesses": encode_value(report.witnesses),
        "tolerance": report.tolerance,
        "notes": report.notes,
    }


def _decode_witness(value: Any) -> Any:
    if isinstance(value, list):
        return [_decode_witness(v) for v in value]
    try:
        return decode_complex(value)
    except SchemaError:
        return value


def claim_report_from_dict(data: Dict[str, Any]) -> ClaimReport:
    check_schema(data)
    return ClaimReport(
        claim_id=data["claim_id"],
        parameters=dict(data["parameters"]),
        verdict=data["verdict"],
        witnesses={k: _decode_witness(v) for k, v in data["witnesses"].items()},
        tolerance=float(data["tolerance"]),
        notes=data.get("notes", ""),
    )


def profile_document(profile: RealLineProfile) -> Dict[str, Any]:
    """The document printed by ``runner.py profile``."""
    return {
        "schema_version": SCHEMA_VERSION,
        "n": profile.n,
        "breakpoints": [{"label": label, "value": value} for label, value in profile.breakpoints],
        "intervals": [encode_value(iv) for iv in profile.intervals],
        "ordered": profile.ordered,
        "even_displacement_ok": profile.even_displacement_ok,
    }


def check_schema(document: Any) -> None:
    if not isinstance(document, dict):
        raise SchemaError(f"expected a JSON object, got {type(document).__name__}")
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")


def dumps_document(document: Any) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2) + "\n"


def loads_document(text: str) -> Any:
    return json.loads(text)
