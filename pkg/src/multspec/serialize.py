"""Flat-file export: CSV with ``.`` decimals and ``,`` separators, plus JSON.

Floats are written with ``%.17g`` so every value round-trips exactly and
repeated runs produce byte-identical files.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .spectral import SpectralSample
from .symbols import FourierCoeffTable

__all__ = [
    "fmt",
    "dumps_json",
    "write_json",
    "sample_to_csv",
    "sample_from_csv",
    "sample_to_json",
    "table_to_json",
    "table_from_json",
    "dense_to_csv",
    "dense_from_csv",
    "circulant_to_csv",
    "circulant_to_json",
    "structured_to_json",
    "reconstruction_to_csv",
    "reconstruction_from_csv",
]


def fmt(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _clean(obj):
    """Make an object JSON-friendly (numpy scalars, complex, inf)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return fmt(x)
        return x
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj):
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def _write_rows(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _read_rows(path_or_text):
    text = path_or_text
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str) and "\n" not in path_or_text):
        text = Path(path_or_text).read_text(encoding="utf-8")
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


# spectral samples

def sample_to_csv(sample, path=None):
    d = 0 if sample.grid is None else sample.grid.shape[1]
    header = ["index", "re", "im"] + [f"x{k + 1}" for k in range(d)]
    vals = np.asarray(sample.values, dtype=complex)
    rows = []
    for i, z in enumerate(vals):
        row = [str(i), fmt(z.real), fmt(z.imag)]
        if d:
            row += [fmt(c) for c in sample.grid[i]]
        rows.append(row)
    return _write_rows(path, header, rows)


def sample_from_csv(source, kind="eigen", block_size=1):
    header, rows = _read_rows(source)
    if header[:3] != ["index", "re", "im"]:
        raise DomainError(f"unexpected spectral sample header {header}")
    data = np.array([[float(c) for c in r[1:]] for r in rows]).reshape(len(rows), -1)
    vals = data[:, 0] + 1j * data[:, 1]
    if kind == "singular" or not np.any(data[:, 1]):
        vals = vals.real
    grid = data[:, 2:] if data.shape[1] > 2 else None
    return SpectralSample(vals, kind, len(vals) // block_size, grid=grid, block_size=block_size)


def sample_to_json(sample):
    vals = np.asarray(sample.values)
    return {
        "kind": sample.kind,
        "order": sample.order,
        "block_size": sample.block_size,
        "source": sample.source,
        "values": [complex(v) if np.iscomplexobj(vals) else float(v) for v in vals],
        "grid": None if sample.grid is None else sample.grid,
    }


# Fourier coefficient tables

def table_to_json(table):
    """``{"radius": [...], "block": [p, q], "entries": [{"index": [...], "re": .., "im": ..}]}``.

    Block tables store ``re``/``im`` as nested ``p x q`` lists.
    """
    entries = []
    for pos in np.ndindex(*table.coeffs.shape[:table.d]):
        idx = [int(a - r) for a, r in zip(pos, table.radius)]
        v = table.coeffs[pos]
        if table.is_block:
            entries.append({"index": idx, "re": v.real.tolist(), "im": np.imag(v).tolist()})
        else:
            z = complex(v[0, 0])
            entries.append({"index": idx, "re": z.real, "im": z.imag})
    return {"radius": list(table.radius), "block": list(table.block_dims), "entries": entries}


def table_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    radius = tuple(obj["radius"])
    p, q = obj.get("block", [1, 1])
    shape = tuple(2 * r + 1 for r in radius) + (p, q)
    out = np.zeros(shape, dtype=complex)
    for e in obj["entries"]:
        pos = tuple(i + r for i, r in zip(e["index"], radius))
        out[pos] = np.reshape(np.asarray(e["re"], dtype=float) + 1j * np.asarray(e["im"], dtype=float), (p, q))
    if not np.any(out.imag):
        out = out.real
    return FourierCoeffTable(out, radius)


# dense matrices

def _cell(z):
    z = complex(z)
    if z.imag == 0:
        return fmt(z.real)
    sign = "+" if z.imag >= 0 or math.isnan(z.imag) else "-"
    return f"{fmt(z.real)}{sign}{fmt(abs(z.imag))}j"


def dense_to_csv(A, path=None):
    """Dense matrix in its natural row/column layout, without a header.

    Complex entries are written as ``a+bj`` (readable by ``complex()``).
    """
    A = np.asarray(A)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in A:
        w.writerow([_cell(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def dense_from_csv(source):
    text = source
    if isinstance(source, Path) or "\n" not in str(source):
        text = Path(source).read_text(encoding="utf-8")
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    A = np.array([[complex(c) for c in r] for r in rows])
    return A.real if not np.any(A.imag) else A


# circulants

def circulant_to_csv(C, path=None):
    """First column as ``m1..md, a, b, re, im`` rows."""
    col = C.first_column
    d = len(C.order)
    header = [f"m{k + 1}" for k in range(d)] + ["a", "b", "re", "im"]
    rows = []
    for pos in np.ndindex(*col.shape):
        z = complex(col[pos])
        rows.append([str(i) for i in pos] + [fmt(z.real), fmt(z.imag)])
    return _write_rows(path, header, rows)


def circulant_to_json(C):
    col = C.first_column
    return {
        "order": list(C.order),
        "block": list(col.shape[-2:]),
        "re": col.real.tolist(),
        "im": np.imag(col).tolist(),
    }


def structured_to_json(A):
    """Defining data of a Toeplitz, Hankel or circulant matrix."""
    from .structured import CirculantMatrix, HankelMatrix, ToeplitzMatrix

    if isinstance(A, CirculantMatrix):
        return {"kind": "circulant", **circulant_to_json(A)}
    if isinstance(A, HankelMatrix):
        return {"kind": "hankel", "order": list(A.order), "shift": A.shift,
                "levels": [bool(v) for v in A.levels], "table": table_to_json(A.coeffs)}
    if isinstance(A, ToeplitzMatrix):
        return {"kind": "toeplitz", "order": list(A.order), "table": table_to_json(A.coeffs)}
    raise DomainError(f"not a structured matrix: {type(A).__name__}")


# reconstruction results

def _recon_columns(result):
    d = result.grid.shape[1]
    f = np.asarray(result.f_values)
    blocked = f.ndim == 3
    header = [f"x{k + 1}" for k in range(d)]
    if blocked:
        p, q = f.shape[1:]
        for s in range(p):
            for t in range(q):
                header += [f"f_re_{s}{t}", f"f_im_{s}{t}", f"phi_re_{s}{t}", f"phi_im_{s}{t}"]
    else:
        header += ["f_re", "f_im", "phi_re", "phi_im"]
    header += ["excluded", "residual"]
    return header, blocked


def reconstruction_to_csv(result, path=None):
    header, blocked = _recon_columns(result)
    excluded = ~result.included
    f = np.asarray(result.f_values)
    phi = np.asarray(result.phi_values)
    rows = []
    for i in range(len(result.grid)):
        row = [fmt(c) for c in result.grid[i]]
        fi = f[i].ravel() if blocked else [f[i]]
        pi_ = phi[i].ravel() if blocked else [phi[i]]
        for a, b in zip(fi, pi_):
            row += [fmt(np.real(a)), fmt(np.imag(a)), fmt(np.real(b)), fmt(np.imag(b))]
        row.append("1" if excluded[i] else "0")
        if result.residuals is None:
            row.append("")
        else:
            r = np.asarray(result.residuals[i])
            row.append(fmt(np.max(r)) if not excluded[i] else "nan")
        rows.append(row)
    return _write_rows(path, header, rows)


def reconstruction_from_csv(source):
    """Parse a reconstruction CSV back into plain arrays (scalar results)."""
    header, rows = _read_rows(source)
    d = sum(1 for h in header if h.startswith("x"))
    grid = np.array([[float(c) for c in r[:d]] for r in rows]).reshape(len(rows), d)
    f = np.array([float(r[d]) + 1j * float(r[d + 1]) for r in rows])
    phi = np.array([float(r[d + 2]) + 1j * float(r[d + 3]) for r in rows])
    excluded = np.array([r[-2] == "1" for r in rows])
    residual = np.array([float(r[-1]) if r[-1] else np.nan for r in rows])
    return {"grid": grid, "f_values": f, "phi_values": phi, "excluded": excluded, "residual": residual}
