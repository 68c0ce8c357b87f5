"""Measurement matrices with entries in {0, +1, -1} and constant column
weight, plus exact coherence certification.

Columns are stored as sorted (row, sign) support tuples and never
normalized: every column has squared norm w, so the coherence of a pair
is just |<c_i, c_j>| / w and the maximum over all pairs is an exact
rational.  The pairwise scan is exhaustive (a single integer Gram
matrix, no early exit) and the certified value is compared against the
construction's theoretical bound every time; a violation raises, it is
never waived.

Two text formats round-trip byte-exactly: 'dense-csv' (one CSV row per
matrix row) and 'support-list' (a short '#' header, then one signed
support per line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .codes import BinaryCWCode, TernaryCWCode
from .errors import BudgetError, FormatError, ParameterError
from .field import factor_prime_power, make_field, poly_eval

DEVORE_CAP = 1_000_000

Column = tuple[tuple[int, int], ...]


class MeasurementMatrix:
    """n x N sensing matrix with constant column weight w.

    bound is the theoretical coherence bound inherited from the source
    construction (None for raw ingested matrices).  The exact coherence
    is computed once on demand and cached.
    """

    __slots__ = ("n", "N", "w", "columns", "provenance", "bound",
                 "_mu", "_dense_int", "_dense_float")

    def __init__(self, n: int, columns: Sequence[Column], w: int,
                 provenance: str, bound: Fraction | None = None):
        if n < 1:
            raise ParameterError(f"need at least one row, got n={n}")
        if not columns:
            raise ParameterError("a measurement matrix needs at least one column")
        for j, col in enumerate(columns):
            rows = [r for r, _ in col]
            if len(col) != w or len(set(rows)) != w:
                raise ParameterError(f"column {j} does not have weight {w}")
            if any(not 0 <= r < n for r in rows):
                raise ParameterError(f"column {j} has rows outside [0, {n})")
            if any(s not in (1, -1) for _, s in col):
                raise ParameterError(f"column {j} has signs outside {{+1, -1}}")
            if list(col) != sorted(col):
                raise ParameterError(f"column {j} support is not sorted")
        self.n = n
        self.N = len(columns)
        self.w = w
        self.columns = [tuple(col) for col in columns]
        self.provenance = provenance
        self.bound = bound
        self._mu: Fraction | None = None
        self._dense_int: np.ndarray | None = None
        self._dense_float: np.ndarray | None = None

    def to_dense(self, dtype=np.float64) -> np.ndarray:
        """Dense copy; int64 and float64 views are cached internally."""
        if self._dense_int is None:
            a = np.zeros((self.n, self.N), dtype=np.int64)
            for j, col in enumerate(self.columns):
                for r, s in col:
                    a[r, j] = s
            self._dense_int = a
        if dtype == np.int64:
            return self._dense_int
        if self._dense_float is None:
            self._dense_float = self._dense_int.astype(np.float64)
        if dtype == np.float64:
            return self._dense_float
        return self._dense_int.astype(dtype)

    def __repr__(self) -> str:
        return (f"MeasurementMatrix({self.n}x{self.N}, w={self.w}, "
                f"{self.provenance!r})")


@dataclass
class WelchBound:
    """Lower bound on coherence for an n x N unit-norm frame.

    value is the standard sqrt((N - n) / (n (N - 1))); alt_value is the
    variant expression sqrt(N / (n (N - n))) that some references print,
    reported alongside for comparison.  Both degenerate to 0 (flagged)
    when N <= n.
    """
    value: float
    alt_value: float
    degenerate: bool


def welch_bound(n: int, N: int) -> WelchBound:
    if n < 1 or N < 1:
        raise ParameterError(f"need positive dimensions, got n={n} N={N}")
    if N <= n:
        return WelchBound(0.0, 0.0, True)
    value = math.sqrt((N - n) / (n * (N - 1)))
    alt = math.sqrt(N / (n * (N - n)))
    return WelchBound(value, alt, False)


@dataclass
class CoherenceReport:
    """Exact coherence plus the derived guarantees.

    mu is exact (Fraction); order is the sparsity order floor(1/mu) + 1,
    taken as n when mu = 0.  delta_k = (k - 1) * mu is filled in when a
    k was asked for.
    """
    mu: Fraction
    bound: Fraction | None
    welch: WelchBound
    order: int
    k: int | None = None
    delta_k: Fraction | None = None


def coherence(matrix: MeasurementMatrix, k: int | None = None) -> CoherenceReport:
    """Certify the exact coherence of the matrix.

    Integer Gram matrix over all column pairs, exhaustive by
    construction.  Raises RuntimeError if the exact value exceeds the
    matrix's theoretical bound; that check is a hard assertion and is
    never skipped.
    """
    if matrix._mu is None:
        a = matrix.to_dense(np.int64)
        gram = a.T @ a
        if not np.all(np.diag(gram) == matrix.w):
            raise RuntimeError("column norms disagree with the stated weight")
        if matrix.N == 1:
            top = 0
        else:
            off = np.abs(gram)
            np.fill_diagonal(off, 0)
            top = int(off.max())
        matrix._mu = Fraction(top, matrix.w)
    mu = matrix._mu
    if matrix.bound is not None and mu > matrix.bound:
        raise RuntimeError(
            f"exact coherence {mu} exceeds the theoretical bound "
            f"{matrix.bound} ({matrix.provenance})")
    order = matrix.n if mu == 0 else math.floor(1 / mu) + 1
    report = CoherenceReport(mu=mu, bound=matrix.bound,
                             welch=welch_bound(matrix.n, matrix.N),
                             order=order)
    if k is not None:
        if k < 1:
            raise ParameterError(f"k must be >= 1, got {k}")
        report.k = k
        report.delta_k = (k - 1) * mu
    return report


# -- constructions --------------------------------------------------------

def _code_bound(code: BinaryCWCode | TernaryCWCode) -> Fraction:
    # 1 - d/(2w); clamped at 0 because a single-word code's sentinel
    # distance n + 1 can push the expression negative.
    return max(Fraction(0), 1 - Fraction(code.d, 2 * code.w))


def from_binary_code(code: BinaryCWCode) -> MeasurementMatrix:
    """Codewords as columns (all signs +1).  Coherence <= 1 - d/(2w)."""
    columns = [tuple((r, 1) for r in word) for word in code.words]
    return MeasurementMatrix(code.n, columns, code.w,
                             provenance=f"binary {code.provenance}",
                             bound=_code_bound(code))


def from_binary_code_signed(code: BinaryCWCode, seed: int = 0,
                            sign_stream: Callable[[], int] | None = None
                            ) -> MeasurementMatrix:
    """Codewords as columns with independently randomized signs.

    Signs come from numpy's PCG64 generator seeded with `seed`: one draw
    per support position, column by column, positions ascending, with
    bit 0 -> +1 and bit 1 -> -1.  The stream layout is part of the
    format, so a given (code, seed) pair always yields the same matrix.
    Coherence keeps the unsigned bound 1 - d/(2w): sign flips never
    increase the magnitude of an integer inner product bounded by the
    support intersection.

    sign_stream is a test hook: a callable returning +1/-1 that replaces
    the generator (e.g. lambda: 1 reproduces the unsigned matrix).
    """
    if seed < 0:
        raise ParameterError(f"seed must be >= 0, got {seed}")
    if sign_stream is None:
        rng = np.random.default_rng(seed)

        def sign_stream() -> int:
            return 1 if int(rng.integers(0, 2)) == 0 else -1

    columns = []
    for word in code.words:
        columns.append(tuple((r, sign_stream()) for r in word))
    return MeasurementMatrix(code.n, columns, code.w,
                             provenance=f"signed seed={seed} binary {code.provenance}",
                             bound=_code_bound(code))


def from_ternary_code(code: TernaryCWCode) -> MeasurementMatrix:
    """Signed codewords as columns.  Coherence <= min(1, 2 - d/w).

    The inner product of two codewords with s common support positions
    and D sign disagreements among them is s - 2D, while the distance
    works out to 2(w - s) + D.  Distance >= d therefore pins the inner
    product into [-(2w - d), w - d/2]: the positive side matches the
    binary bound, but sign flips are cheap (cost 1 each, not 2) and
    the negative side only vanishes once d >= 2w.  The attached bound
    is the sharp two-sided one, min(w, 2w - d)/w, clamped at 0.
    """
    columns = [tuple(word) for word in code.words]
    bound = Fraction(max(0, min(code.w, 2 * code.w - code.d)), code.w)
    return MeasurementMatrix(code.n, columns, code.w,
                             provenance=f"ternary {code.provenance}",
                             bound=bound)


def devore(p: int, r: int) -> MeasurementMatrix:
    """Polynomial evaluation matrix over GF(p): p^2 rows, p^r columns.

    Rows are pairs (a, b); the column of a polynomial f of degree < r
    has ones exactly on the rows (a, f(a)).  Column j uses the base-p
    digits of j as coefficients (constant term least significant).
    Distinct polynomials of degree < r agree on at most r - 1 points,
    so coherence <= (r - 1)/p; for r = 2 the value 1/p is attained.
    p may be a prime power, in which case GF(p) is the extension field.
    """
    if r < 2:
        raise ParameterError(f"need polynomial degree bound r >= 2, got {r}")
    base, m = factor_prime_power(p)
    if p ** r > DEVORE_CAP:
        raise BudgetError(f"p^r = {p ** r} columns exceed cap {DEVORE_CAP}")
    field = make_field(base, m)
    elems = field.elements()
    columns: list[Column] = []
    for j in range(p ** r):
        e = j
        coeffs = []
        for _ in range(r):
            coeffs.append(elems[e % p])
            e //= p
        col = tuple((int(a) * p + int(poly_eval(coeffs, a)), 1) for a in elems)
        columns.append(col)
    return MeasurementMatrix(p * p, columns, p,
                             provenance=f"devore p={p} r={r}",
                             bound=Fraction(r - 1, p))


# -- text formats ---------------------------------------------------------

FORMATS = ("support-list", "dense-csv")


def dumps_matrix(matrix: MeasurementMatrix, fmt: str = "support-list") -> str:
    if fmt == "dense-csv":
        a = matrix.to_dense(np.int64)
        return "".join(",".join(str(int(v)) for v in row) + "\n" for row in a)
    if fmt == "support-list":
        lines = [f"# provenance: {matrix.provenance}",
                 f"# n {matrix.n} w {matrix.w}" + (
                     f" bound {matrix.bound}" if matrix.bound is not None else "")]
        for col in matrix.columns:
            lines.append(" ".join(f"{'+' if s > 0 else '-'}{r}" for r, s in col))
        return "\n".join(lines) + "\n"
    raise ParameterError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def loads_matrix(text: str) -> MeasurementMatrix:
    stripped = text.lstrip()
    if not stripped:
        raise FormatError("empty matrix file")
    if stripped.startswith("#"):
        return _loads_support_list(text)
    if "," in stripped.splitlines()[0]:
        return _loads_dense_csv(text)
    raise FormatError("unrecognized matrix format: expected a '#' header "
                      "(support-list) or a CSV row (dense-csv)")


def _loads_support_list(text: str) -> MeasurementMatrix:
    provenance = "ingested"
    n = w = None
    bound: Fraction | None = None
    columns: list[Column] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("provenance:"):
                provenance = body[len("provenance:"):].strip()
            elif body.startswith("n "):
                tokens = body.split()
                try:
                    pairs = dict(zip(tokens[0::2], tokens[1::2]))
                    n = int(pairs["n"])
                    w = int(pairs["w"])
                    if "bound" in pairs:
                        bound = Fraction(pairs["bound"])
                except (KeyError, ValueError):
                    raise FormatError(
                        f"line {lineno}: bad dimension header") from None
            continue
        col = []
        for tok in line.split():
            if tok[0] not in "+-":
                raise FormatError(f"line {lineno}: entries must be signed")
            try:
                row = int(tok[1:])
            except ValueError:
                raise FormatError(f"line {lineno}: bad row {tok!r}") from None
            col.append((row, 1 if tok[0] == "+" else -1))
        columns.append(tuple(sorted(col)))
    if n is None or w is None:
        raise FormatError("missing '# n <n> w <w>' header")
    try:
        return MeasurementMatrix(n, columns, w, provenance=provenance,
                                 bound=bound)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None


def _loads_dense_csv(text: str) -> MeasurementMatrix:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = [int(tok) for tok in line.split(",")]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer entry") from None
        if any(v not in (-1, 0, 1) for v in row):
            raise FormatError(f"line {lineno}: entries must be in {{-1, 0, 1}}")
        rows.append(row)
    if not rows:
        raise FormatError("empty matrix file")
    if len({len(r) for r in rows}) != 1:
        raise FormatError("rows have differing lengths")
    n = len(rows)
    N = len(rows[0])
    columns = []
    weights = set()
    for j in range(N):
        col = tuple((i, rows[i][j]) for i in range(n) if rows[i][j] != 0)
        weights.add(len(col))
        columns.append(col)
    if len(weights) != 1:
        raise FormatError(f"column weights differ: {sorted(weights)}")
    try:
        return MeasurementMatrix(n, columns, weights.pop(),
                                 provenance="dense-csv")
    except ParameterError as exc:
        raise FormatError(str(exc)) from None


def save_matrix(matrix: MeasurementMatrix, path, fmt: str = "support-list") -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_matrix(matrix, fmt))


def load_matrix(path) -> MeasurementMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return loads_matrix(fh.read())
