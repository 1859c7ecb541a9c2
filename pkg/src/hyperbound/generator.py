"""Synthetic ownership hypergraphs, deterministic in the seed.

Randomness is ``mix64(seed, i)`` in counter mode. Edge ``j`` owns the block of
counters starting at ``j * STRIDE``: counter ``j * STRIDE`` draws its size and
counters ``j * STRIDE + 1, + 2, ...`` draw owner candidates, skipping repeats,
until the edge is full. Users are ``0..n-1``, edges ``0..m-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import Unsatisfiable
from .hypergraph import Hypergraph
from .ordering import mix64, mix64_array

STRIDE = 1 << 24


@dataclass(frozen=True)
class Fixed:
    k: int = 3


@dataclass(frozen=True)
class ZipfSize:
    """P(size = k) proportional to k**-s for k in 1..max_size."""

    s: float = 2.0
    max_size: int = 8


@dataclass(frozen=True)
class Uniform:
    pass


@dataclass(frozen=True)
class ZipfPopularity:
    """User ``i`` is drawn with probability proportional to (i + 1)**-alpha."""

    alpha: float = 1.0


EdgeSize = Union[Fixed, ZipfSize]
Popularity = Union[Uniform, ZipfPopularity]


@dataclass(frozen=True)
class GeneratorSpec:
    users: int
    edges: int
    edge_size: EdgeSize = field(default_factory=Fixed)
    popularity: Popularity = field(default_factory=Uniform)
    seed: int = 0

    def __post_init__(self):
        if self.users < 1:
            raise ValueError("users must be >= 1")
        if self.edges < 0:
            raise ValueError("edges must be >= 0")
        if self.edges >= 1 << 40:
            raise ValueError("too many edges for the counter layout")
        if isinstance(self.edge_size, Fixed) and self.edge_size.k < 1:
            raise ValueError("edge size must be >= 1")
        if isinstance(self.edge_size, ZipfSize) and self.edge_size.max_size < 1:
            raise ValueError("max edge size must be >= 1")


def _unit(x):
    """Map 64-bit stream values to floats in [0, 1)."""
    return (x >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _zipf_cdf(n: int, exponent: float) -> np.ndarray:
    p = np.arange(1, n + 1, dtype=np.float64) ** -exponent
    cdf = np.cumsum(p)
    return cdf / cdf[-1]


class _Sampler:
    def __init__(self, spec: GeneratorSpec):
        self.n = spec.users
        self.cdf = _zipf_cdf(spec.users, spec.popularity.alpha) \
            if isinstance(spec.popularity, ZipfPopularity) else None

    def __call__(self, u):
        if self.cdf is None:
            idx = np.floor(u * self.n).astype(np.int64)
        else:
            idx = np.searchsorted(self.cdf, u, side="right").astype(np.int64)
        return np.minimum(idx, self.n - 1)


def generate(spec: GeneratorSpec) -> Hypergraph:
    """Random hypergraph per ``spec``.

    Raises:
        Unsatisfiable: edges must be larger than the number of users.
    """
    n, m, seed = spec.users, spec.edges, spec.seed
    size_spec = spec.edge_size
    max_k = size_spec.k if isinstance(size_spec, Fixed) else size_spec.max_size
    if max_k > n:
        raise Unsatisfiable(f"edge size up to {max_k} exceeds {n} users")

    base = np.arange(m, dtype=np.uint64) * np.uint64(STRIDE)
    if isinstance(size_spec, Fixed):
        sizes = np.full(m, size_spec.k, dtype=np.int64)
    else:
        cdf = _zipf_cdf(size_spec.max_size, size_spec.s)
        u = _unit(mix64_array(seed, base))
        sizes = np.minimum(np.searchsorted(cdf, u, side="right"), size_spec.max_size - 1) + 1

    sample = _Sampler(spec)
    t = np.arange(1, max_k + 1, dtype=np.uint64)
    cand = sample(_unit(mix64_array(seed, base[:, None] + t[None, :]))) if m else \
        np.zeros((0, max_k), dtype=np.int64)
    col = np.arange(max_k, dtype=np.int64)
    unused = col[None, :] >= sizes[:, None]
    padded = np.where(unused, -1 - col[None, :], cand)
    padded.sort(axis=1)
    redo = np.flatnonzero((padded[:, 1:] == padded[:, :-1]).any(axis=1)) if max_k > 1 else []

    for j in redo:
        cand[j] = -1
        chosen: list[int] = []
        c = 1
        while len(chosen) < sizes[j]:
            if c >= STRIDE:
                raise Unsatisfiable(f"could not draw {sizes[j]} distinct owners for edge {j}")
            x = mix64(seed, int(j) * STRIDE + c)
            v = int(sample(_unit(np.array([x], dtype=np.uint64)))[0])
            if v not in chosen:
                chosen.append(v)
            c += 1
        cand[j, :sizes[j]] = chosen

    owners = cand[~unused]
    ptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(sizes, out=ptr[1:])
    return Hypergraph.from_arrays(np.arange(m, dtype=np.uint64), ptr, owners.astype(np.uint64))
