"""Deterministic JSON/CSV output: 9 significant digits, stable key order."""

import csv
import io
import json

SCHEMA_VERSION = 1


def round9(value):
    """Round a float to 9 significant digits (the serialization contract)."""
    return float(f"{value:.9g}")


def _normalize(obj):
    if isinstance(obj, float):
        return round9(obj)
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    import numpy as np
    if isinstance(obj, np.floating):
        return round9(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_normalize(v) for v in obj.tolist()]
    return obj


def to_json_text(document: dict) -> str:
    """Serialize with the schema version stamped in; byte-stable."""
    payload = {"schema_version": SCHEMA_VERSION}
    payload.update(_normalize(document))
    return json.dumps(payload, indent=2) + "\n"


def write_json(path, document: dict):
    text = to_json_text(document)
    with open(path, "w") as fh:
        fh.write(text)
    return text


def _format_cell(value):
    if isinstance(value, float):
        return f"{value:.9g}"
    import numpy as np
    if isinstance(value, np.floating):
        return f"{float(value):.9g}"
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def to_csv_text(header, rows) -> str:
    """CSV with a header row; cells rendered at 9 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows):
    text = to_csv_text(header, rows)
    with open(path, "w") as fh:
        fh.write(text)
    return text
