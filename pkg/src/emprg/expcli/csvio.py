"""Flat CSV output with ``#``-prefixed metadata lines.

Layout: metadata lines ``# key: value``, then one header row, then data rows.
Floats are written with 12 significant digits, booleans as ``0``/``1``.
"""
import csv
import io
import math

import numpy as np

DIGITS = 12


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "nan"
        if x == 0.0:
            # no negative zeros in the output
            return "0"
        return f"{x:.{DIGITS}g}"
    return str(v)


def parse_value(text):
    """Inverse of :func:`format_value` for numeric cells; other text is returned as is."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def dumps(header, rows, metadata=None):
    buf = io.StringIO()
    for key, value in (metadata or {}).items():
        text = format_value(value).replace("\n", " ")
        buf.write(f"# {key}: {text}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def loads(text):
    """Return ``(metadata, header, rows)``; metadata values stay strings."""
    metadata = {}
    body = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            metadata[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    rows = [[parse_value(c) for c in r] for r in reader]
    return metadata, header, rows


def write_csv(path, header, rows, metadata=None):
    text = dumps(header, rows, metadata)
    if path is None or path == "-":
        return text
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def read_csv(path):
    with open(path) as fh:
        return loads(fh.read())
