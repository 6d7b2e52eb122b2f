"""Boolean functions on {-1,+1}^n and their Walsh-Hadamard spectra.

Index convention, shared across the package: tables have length 2^n and are
indexed by a bitmask where bit i set means coordinate x_{i+1} equals -1.
Characters are chi_T(x) = prod_{i in T} x_i, so chi_T(x) = (-1)^popcount(T&x).

Fourier coefficients carry the 1/2^n normalization:
coeffs[T] = 2^-n * sum_x f(x) chi_T(x).  Inner products of point tables, by
contrast, are plain sums sum_x u(x) v(x); both conventions are used side by
side and named explicitly where it matters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEGREE_ZERO_TEST = 0.5  # coefficients are multiples of 2^-n; test vs 2^-(n+1)


class BoolFunction:
    """Truth table of f: {-1,+1}^n -> {-1,+1}."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table):
        arr = np.asarray(table, dtype=np.int64)
        if n < 0 or arr.shape != (2 ** n,):
            raise ValueError(f"table must have length 2^{n}")
        if not np.isin(arr, (-1, 1)).all():
            raise ValueError("Boolean function values must be -1 or +1")
        arr = arr.copy()
        arr.setflags(write=False)
        self.n = n
        self.table = arr

    def __call__(self, mask: int) -> int:
        return int(self.table[mask])

    def __eq__(self, other):
        return (isinstance(other, BoolFunction) and self.n == other.n
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return f"BoolFunction(n={self.n})"

    @classmethod
    def from_text(cls, text: str) -> "BoolFunction":
        return parse_truth_table(text)

    def to_text(self) -> str:
        return format_truth_table(self)


class RealPointFunction:
    """Real-valued table on {-1,+1}^n (same mask indexing as BoolFunction)."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table):
        arr = np.asarray(table, dtype=float)
        if n < 0 or arr.shape != (2 ** n,):
            raise ValueError(f"table must have length 2^{n}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.n = n
        self.table = arr

    def __call__(self, mask: int) -> float:
        return float(self.table[mask])

    def __repr__(self):
        return f"RealPointFunction(n={self.n})"


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients f_hat[T] indexed by subset mask T, 2^-n normalized."""

    n: int
    coeffs: tuple

    def coeff(self, T: int) -> float:
        return self.coeffs[T]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)


def character_eval(T: int, x: int) -> int:
    """chi_T(x) = (-1)^popcount(T & x)."""
    return -1 if bin(T & x).count("1") % 2 else 1


def _fwht_inplace(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard butterfly, O(n 2^n)."""
    h = 1
    size = a.shape[0]
    while h < size:
        for start in range(0, size, 2 * h):
            x = a[start:start + h].copy()
            y = a[start + h:start + 2 * h]
            a[start:start + h] = x + y
            a[start + h:start + 2 * h] = x - y
        h *= 2
    return a


def wht(f) -> FourierSpectrum:
    """Walsh-Hadamard transform: coeffs[T] = 2^-n sum_x f(x) chi_T(x)."""
    table = np.asarray(f.table, dtype=float).copy()
    sums = _fwht_inplace(table)
    coeffs = sums / (2 ** f.n)
    return FourierSpectrum(n=f.n, coeffs=tuple(float(c) for c in coeffs))


def character_sums(f) -> np.ndarray:
    """Integer plain sums sum_x f(x) chi_T(x) for a +-1 table (exact)."""
    return _fwht_inplace(np.asarray(f.table, dtype=np.int64).copy())


def iwht(s: FourierSpectrum) -> RealPointFunction:
    """Inverse transform: f(x) = sum_T coeffs[T] chi_T(x)."""
    table = _fwht_inplace(s.as_array().copy())
    return RealPointFunction(s.n, table)


def degree(f: BoolFunction) -> int:
    """Largest |T| with a nonzero Fourier coefficient.

    Coefficients of +-1 functions are multiples of 2^-n, so zero is tested
    exactly against 2^-(n+1).
    """
    sums = character_sums(f)
    deg = 0
    for T in range(2 ** f.n):
        if sums[T] != 0:
            deg = max(deg, bin(T).count("1"))
    return deg


# ---------------------------------------------------------------------------
# built-in functions and text format

def _parity(n):
    return [(-1 if bin(x).count("1") % 2 else 1) for x in range(2 ** n)]


def _and(n):
    # -1 exactly when every input is -1 (all mask bits set)
    return [(-1 if x == 2 ** n - 1 else 1) for x in range(2 ** n)]


def _or(n):
    # -1 as soon as any input is -1
    return [(-1 if x != 0 else 1) for x in range(2 ** n)]


def _maj(n):
    if n % 2 == 0:
        raise ValueError("MAJ needs odd arity")
    return [(-1 if 2 * bin(x).count("1") > n else 1) for x in range(2 ** n)]


BUILTIN_FUNCTIONS = {
    "PARITY": _parity,
    "AND": _and,
    "OR": _or,
    "MAJ": _maj,
}


def builtin_function(name: str, arity: int) -> BoolFunction:
    key = name.upper()
    if key not in BUILTIN_FUNCTIONS:
        raise ValueError(f"unknown builtin function {name!r}; "
                         f"choose from {sorted(BUILTIN_FUNCTIONS)}")
    if arity < 1:
        raise ValueError("arity must be at least 1")
    return BoolFunction(arity, BUILTIN_FUNCTIONS[key](arity))


def parse_function_spec(spec: str) -> BoolFunction:
    """Parse "NAME:arity" into a builtin BoolFunction (e.g. PARITY:3)."""
    if ":" not in spec:
        raise ValueError(f"function spec must look like NAME:arity, got {spec!r}")
    name, _, arity = spec.partition(":")
    try:
        k = int(arity)
    except ValueError:
        raise ValueError(f"bad arity in function spec {spec!r}") from None
    return builtin_function(name, k)


def parse_truth_table(text: str) -> BoolFunction:
    """Truth-table format: "n=<arity>" then a 2^n string of 0/1, 1 meaning -1."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n="):
        raise ValueError('truth table must start with an "n=<arity>" line')
    n = int(lines[0][2:])
    bits = "".join(lines[1:])
    if len(bits) != 2 ** n:
        raise ValueError(f"expected {2 ** n} table bits, got {len(bits)}")
    if set(bits) - {"0", "1"}:
        raise ValueError("table bits must be 0 or 1")
    return BoolFunction(n, [(-1 if b == "1" else 1) for b in bits])


def format_truth_table(f: BoolFunction) -> str:
    bits = "".join("1" if v == -1 else "0" for v in f.table)
    return f"n={f.n}\n{bits}\n"


def load_function(path_or_spec: str) -> BoolFunction:
    """Load a function from a file path, or from a NAME:arity builtin spec."""
    import os

    if os.path.exists(path_or_spec):
        with open(path_or_spec, "r", encoding="utf-8") as fh:
            return parse_truth_table(fh.read())
    return parse_function_spec(path_or_spec)


def all_functions(n: int):
    """Yield every BoolFunction of arity n (2^2^n of them; keep n small)."""
    N = 2 ** n
    for bits in range(2 ** N):
        yield BoolFunction(n, [1 - 2 * ((bits >> x) & 1) for x in range(N)])
