"""Truth tables and the brute-force oracles built on them.

Endianness is little: row index ``r`` assigns ``x_i = (r >> i) & 1``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..errors import CapExceeded, ShapeError

MAX_TABLE_VARS = 24
MAX_ORACLE_VARS = 16


class Columns:
    """Lazily materialised assignment columns for all 2^n rows."""

    def __init__(self, num_vars: int):
        if num_vars > MAX_TABLE_VARS:
            raise CapExceeded(f"{num_vars} variables exceeds the truth-table cap of {MAX_TABLE_VARS}")
        self.num_vars = num_vars
        self.size = 1 << num_vars
        self._rows = np.arange(self.size, dtype=np.int64)
        self._cache: dict[int, np.ndarray] = {}

    def __getitem__(self, i: int) -> np.ndarray:
        col = self._cache.get(i)
        if col is None:
            if not 0 <= i < self.num_vars:
                raise ShapeError(f"variable {i} outside {self.num_vars}")
            col = ((self._rows >> i) & 1).astype(bool)
            self._cache[i] = col
        return col


class TruthTable:
    __slots__ = ("num_vars", "bits")

    def __init__(self, num_vars: int, bits):
        if num_vars > MAX_TABLE_VARS:
            raise CapExceeded(f"{num_vars} variables exceeds the truth-table cap of {MAX_TABLE_VARS}")
        if isinstance(bits, str):
            bits = [c == "1" for c in bits]
        arr = np.asarray(bits, dtype=bool)
        if arr.shape != (1 << num_vars,):
            raise ShapeError(f"expected {1 << num_vars} bits, got {arr.shape}")
        self.num_vars = num_vars
        self.bits = arr
        self.bits.flags.writeable = False

    def __eq__(self, other) -> bool:
        return (isinstance(other, TruthTable) and self.num_vars == other.num_vars
                and bool(np.array_equal(self.bits, other.bits)))

    def __hash__(self) -> int:
        return hash((self.num_vars, self.bits.tobytes()))

    def __repr__(self) -> str:
        s = self.to_string()
        return f"TruthTable({self.num_vars}, {s if len(s) <= 64 else s[:61] + '...'!r})"

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def evaluate(self, x) -> int:
        bits = [int(c) for c in x]
        if len(bits) != self.num_vars:
            raise ShapeError(f"assignment has length {len(bits)}, expected {self.num_vars}")
        return int(self.bits[sum(b << i for i, b in enumerate(bits))])

    def evaluate_columns(self, cols) -> np.ndarray:
        idx = np.zeros(cols.size, dtype=np.int64)
        for i in range(self.num_vars):
            idx |= cols[i].astype(np.int64) << i
        return self.bits[idx]

    def is_constant(self) -> int | None:
        if not self.bits.any():
            return 0
        if self.bits.all():
            return 1
        return None

    def cube(self) -> np.ndarray:
        """The table as an n-dimensional 0/1 array with axis i indexed by x_i."""
        n = self.num_vars
        if n == 0:
            return self.bits.reshape(())
        return self.bits.reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1)))

    @classmethod
    def from_cube(cls, arr: np.ndarray) -> "TruthTable":
        n = arr.ndim
        if n == 0:
            return cls(0, arr.reshape(1))
        return cls(n, np.ascontiguousarray(arr.transpose(tuple(range(n - 1, -1, -1)))).reshape(-1))

    def restrict(self, rho: str) -> "TruthTable":
        """Fix the non-star positions of rho; the result is over the star variables in order."""
        if len(rho) != self.num_vars:
            raise ShapeError("restriction length mismatch")
        arr = self.cube()
        index = tuple(slice(None) if c == "*" else int(c) for c in rho)
        return TruthTable.from_cube(arr[index])


def truth_table(f, num_vars: int | None = None) -> TruthTable:
    """Exhaustive evaluation of any object exposing ``evaluate_columns``."""
    n = f.num_vars if num_vars is None else num_vars
    if isinstance(f, TruthTable):
        return f
    cols = Columns(n)
    return TruthTable(n, f.evaluate_columns(cols))


def _drop_irrelevant(arr: np.ndarray) -> np.ndarray:
    ax = 0
    while ax < arr.ndim:
        a0 = np.take(arr, 0, axis=ax)
        if np.array_equal(a0, np.take(arr, 1, axis=ax)):
            arr = a0
        else:
            ax += 1
    return arr


@lru_cache(maxsize=1 << 16)
def _dt_depth(ndim: int, data: bytes) -> int:
    arr = np.frombuffer(data, dtype=bool).reshape((2,) * ndim)
    best = ndim
    for ax in range(ndim):
        d0 = _cube_depth(np.take(arr, 0, axis=ax))
        if 1 + d0 >= best:
            continue
        d1 = _cube_depth(np.take(arr, 1, axis=ax))
        best = min(best, 1 + max(d0, d1))
    return best


def _cube_depth(arr: np.ndarray) -> int:
    if arr.all() or not arr.any():
        return 0
    arr = np.ascontiguousarray(_drop_irrelevant(arr))
    return _dt_depth(arr.ndim, arr.tobytes())


def optimal_dt_depth(t: TruthTable) -> int:
    """Minimum decision-tree depth of t, by memoised recursion over subfunctions."""
    if t.num_vars > MAX_ORACLE_VARS:
        raise CapExceeded(f"decision-tree oracle capped at {MAX_ORACLE_VARS} variables")
    return _cube_depth(t.cube())


def is_subfunction(g: TruthTable, f: TruthTable) -> bool:
    """Exhaustive search for a restriction of f plus an injection of g's variables
    into f's free variables under which f becomes g."""
    if f.num_vars > MAX_ORACLE_VARS:
        raise CapExceeded(f"subfunction oracle capped at {MAX_ORACLE_VARS} variables")
    m, n = g.num_vars, f.num_vars
    if m > n:
        return False
    target = g.cube()
    ones = int(g.bits.sum())
    fc = f.cube()
    for free in itertools.combinations(range(n), m):
        fixed = [i for i in range(n) if i not in free]
        for vals in itertools.product((0, 1), repeat=len(fixed)):
            index = [slice(None)] * n
            for i, v in zip(fixed, vals):
                index[i] = v
            sub = fc[tuple(index)]
            if int(sub.sum()) != ones:
                continue
            for perm in itertools.permutations(range(m)):
                # g's variable j is placed on f's free variable free[perm[j]]
                if np.array_equal(np.transpose(sub, perm), target):
                    return True
    return False
