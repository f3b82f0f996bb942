"""Finitely supported complex signals on Z^d and their text format."""
from __future__ import annotations

import io
import math
from typing import Iterable

import numpy as np

from .errors import ParameterError


class Signal:
    """Sparse map Z^d -> C; zero values are never stored."""

    __slots__ = ("dim", "_data")

    def __init__(self, data=None, dim=None):
        data = dict(data or {})
        if dim is None:
            if not data:
                raise ParameterError("an empty signal needs an explicit dimension")
            dim = len(next(iter(data)))
        self.dim = int(dim)
        clean = {}
        for key, v in data.items():
            key = tuple(int(c) for c in key)
            if len(key) != self.dim:
                raise ParameterError(f"point {key} is not in Z^{self.dim}")
            v = complex(v)
            if v != 0:
                clean[key] = v
        self._data = clean

    # construction -----------------------------------------------------------

    @classmethod
    def delta(cls, dim, at=None, value=1.0):
        at = tuple(at) if at is not None else (0,) * dim
        return cls({at: value}, dim)

    @classmethod
    def zero(cls, dim):
        return cls({}, dim)

    @classmethod
    def from_arrays(cls, coords, values, dim=None):
        coords = np.asarray(coords, dtype=np.int64)
        values = np.asarray(values, dtype=complex)
        if dim is None:
            dim = coords.shape[1]
        out = cls.zero(dim)
        nz = values != 0
        out._data = {tuple(c): complex(v) for c, v in zip(coords[nz].tolist(), values[nz].tolist())}
        return out

    # access -------------------------------------------------------------------

    def __len__(self):
        return len(self._data)

    def __getitem__(self, key):
        return self._data.get(tuple(key), 0j)

    def __iter__(self):
        return iter(sorted(self._data))

    def items(self):
        return [(k, self._data[k]) for k in sorted(self._data)]

    @property
    def support(self):
        return sorted(self._data)

    def arrays(self):
        """(coords, values) in lexicographic order of the support."""
        keys = sorted(self._data)
        coords = np.array(keys, dtype=np.int64).reshape(len(keys), self.dim)
        values = np.array([self._data[k] for k in keys], dtype=complex)
        return coords, values

    def is_real(self):
        return all(v.imag == 0 for v in self._data.values())

    def bounding_box(self):
        c, _ = self.arrays()
        if len(c) == 0:
            return np.zeros(self.dim, dtype=np.int64), np.zeros(self.dim, dtype=np.int64)
        return c.min(axis=0), c.max(axis=0)

    # algebra ----------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Signal) or other.dim != self.dim:
            raise ParameterError("signals must share a dimension")

    def __add__(self, other):
        self._check(other)
        out = dict(self._data)
        for k, v in other._data.items():
            out[k] = out.get(k, 0j) + v
        return Signal(out, self.dim)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, scalar):
        return Signal({k: scalar * v for k, v in self._data.items()}, self.dim)

    __rmul__ = __mul__

    def __neg__(self):
        return -1 * self

    def __abs__(self):
        return Signal({k: abs(v) for k, v in self._data.items()}, self.dim)

    def shift(self, v):
        """f(. - v): the signal translated by +v."""
        v = tuple(int(c) for c in v)
        return Signal({tuple(a + b for a, b in zip(k, v)): x for k, x in self._data.items()}, self.dim)

    def norm(self, p=2):
        vals = np.abs(np.array(list(self._data.values()), dtype=complex))
        if len(vals) == 0:
            return 0.0
        if p == math.inf:
            return float(vals.max())
        if p < 1:
            raise ParameterError("l^p norms need p >= 1")
        return math.fsum((vals**p).tolist()) ** (1.0 / p)

    def max_abs_diff(self, other):
        self._check(other)
        keys = set(self._data) | set(other._data)
        return max((abs(self[k] - other[k]) for k in keys), default=0.0)

    def __eq__(self, other):
        return isinstance(other, Signal) and self.dim == other.dim and self._data == other._data

    def __repr__(self):
        return f"Signal(dim={self.dim}, support={len(self)})"


def accumulate(coords, values, dim):
    """Sum values landing on equal coordinates; deterministic in input order."""
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, dim)
    values = np.asarray(values, dtype=complex).ravel()
    if len(values) == 0:
        return Signal.zero(dim)
    lo = coords.min(axis=0)
    span = coords.max(axis=0) - lo + 1
    if math.prod(int(s) for s in span) < 2**62:
        strides = np.cumprod(np.concatenate([[1], span[::-1][:-1]]))[::-1]
        keys = (coords - lo) @ strides
        uniq, inv = np.unique(keys, return_inverse=True)
        re = np.bincount(inv, weights=values.real, minlength=len(uniq))
        im = np.bincount(inv, weights=values.imag, minlength=len(uniq))
        pts = np.empty((len(uniq), dim), dtype=np.int64)
        rem = uniq.copy()
        for i in range(dim):
            pts[:, i], rem = np.divmod(rem, strides[i])
        pts += lo
    else:
        pts, inv = np.unique(coords, axis=0, return_inverse=True)
        inv = inv.ravel()
        re = np.bincount(inv, weights=values.real, minlength=len(pts))
        im = np.bincount(inv, weights=values.imag, minlength=len(pts))
    return Signal.from_arrays(pts, re + 1j * im, dim)


def random_signal(dim, radius, size, rng, p=2.0):
    """Complex Gaussian values on ``size`` random points of [-radius, radius]^dim, unit l^p norm."""
    coords = rng.integers(-radius, radius + 1, size=(size, dim))
    values = rng.normal(size=size) + 1j * rng.normal(size=size)
    f = accumulate(coords, values, dim)
    n = f.norm(p)
    return f * (1.0 / n) if n > 0 else f


# ---------------------------------------------------------------------------
# text format: integer coordinates, then real and imaginary parts


def parse_signal(lines: Iterable[str]) -> Signal:
    data = {}
    dim = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) < 3:
            raise ParameterError(f"line {lineno}: need coordinates plus real and imaginary parts")
        if dim is None:
            dim = len(fields) - 2
        elif len(fields) - 2 != dim:
            raise ParameterError(f"line {lineno}: expected {dim} coordinates")
        try:
            key = tuple(int(c) for c in fields[:-2])
            val = complex(float(fields[-2]), float(fields[-1]))
        except ValueError as exc:
            raise ParameterError(f"line {lineno}: {exc}") from None
        data[key] = data.get(key, 0j) + val
    if dim is None:
        raise ParameterError("signal file has no data lines")
    return Signal(data, dim)


def read_signal(path) -> Signal:
    with open(path) as fh:
        return parse_signal(fh)


def format_signal(f: Signal, fmt="{:.17g}") -> str:
    out = io.StringIO()
    out.write(f"# dim={f.dim} support={len(f)}\n")
    for key, v in f.items():
        coords = " ".join(str(c) for c in key)
        out.write(f"{coords} {fmt.format(v.real)} {fmt.format(v.imag)}\n")
    return out.getvalue()


def write_signal(f: Signal, path, fmt="{:.17g}"):
    with open(path, "w") as fh:
        fh.write(format_signal(f, fmt))
