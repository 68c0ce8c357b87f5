"""Constant-weight codes: exact validation, size bounds, constructions.

Binary codewords are sorted support tuples (positions of the ones);
ternary codewords are sorted (position, sign) tuples with signs in
{+1, -1}.  Every code object carries a certified minimum distance d
that was recomputed by an exhaustive pairwise scan, never taken on
trust from a header or a construction argument.

Distances are even for binary constant-weight codes, d = 2(w - |A & B|)
for supports A and B, so the binary bound and construction routines
take the full distance and insist that it is even.  Ternary distances
count positions whose symbols differ and can be odd.

All bound values are computed in arbitrary-precision integer
arithmetic with a single floor division at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import BudgetError, FormatError, ParameterError
from .field import is_prime

ENUM_BUDGET = 10_000_000

BinaryWord = tuple[int, ...]
TernaryWord = tuple[tuple[int, int], ...]


@dataclass
class BinaryCWCode:
    """A binary constant-weight code with a certified exact distance.

    d is the exact minimum pairwise distance; a code with fewer than two
    words gets the sentinel n + 1 (no pair exists, distance unbounded).
    """
    n: int
    w: int
    d: int
    words: list[BinaryWord]
    provenance: str = "ingested"

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class TernaryCWCode:
    """A ternary constant-weight code over {0, +1, -1}."""
    n: int
    w: int
    d: int
    words: list[TernaryWord]
    provenance: str = "ingested"

    def __len__(self) -> int:
        return len(self.words)


@dataclass
class BoundReport:
    """A named lower bound value together with the parameters it used."""
    name: str
    params: dict
    value: int


# -- exact distances ----------------------------------------------------

def binary_distance(a: BinaryWord, b: BinaryWord, w: int) -> int:
    """Hamming distance between two weight-w supports: 2(w - |A & B|)."""
    return 2 * (w - len(set(a) & set(b)))


def ternary_distance(a: TernaryWord, b: TernaryWord) -> int:
    """Number of positions whose symbols differ, alphabet {0, +1, -1}."""
    da = dict(a)
    db = dict(b)
    dist = 0
    for pos, sign in da.items():
        if db.get(pos, 0) != sign:
            dist += 1
    for pos in db:
        if pos not in da:
            dist += 1
    return dist


def _check_support(word: Iterable[int], n: int, w: int, line: str) -> BinaryWord:
    sup = tuple(sorted(word))
    if len(sup) != w or len(set(sup)) != w:
        raise ParameterError(f"word {line} does not have weight {w}")
    if sup and (sup[0] < 0 or sup[-1] >= n):
        raise ParameterError(f"word {line} has positions outside [0, {n})")
    return sup


def validate_binary(code: BinaryCWCode) -> int:
    """Exhaustively recompute the minimum distance and certify it.

    Checks weights, position ranges and duplicates, scans every pair
    (no early exit), writes the exact distance back into code.d and
    returns it.  A code with fewer than two words certifies n + 1.
    """
    n, w = code.n, code.w
    if not 1 <= w <= n:
        raise ParameterError(f"need 1 <= w <= n, got w={w} n={n}")
    masks = []
    seen = set()
    for i, word in enumerate(code.words):
        sup = _check_support(word, n, w, f"#{i}")
        if sup in seen:
            raise ParameterError(f"duplicate codeword #{i}")
        seen.add(sup)
        m = 0
        for pos in sup:
            m |= 1 << pos
        masks.append(m)
    if len(masks) < 2:
        code.d = n + 1
        return code.d
    mx = 0  # largest pairwise intersection; distance = 2(w - mx)
    for i in range(len(masks)):
        mi = masks[i]
        for j in range(i + 1, len(masks)):
            inter = (mi & masks[j]).bit_count()
            if inter > mx:
                mx = inter
    code.d = 2 * (w - mx)
    if code.d == 0:
        raise ParameterError("duplicate codewords (distance 0)")
    return code.d


def validate_ternary(code: TernaryCWCode) -> int:
    """Ternary counterpart of validate_binary (symbol-wise distances)."""
    n, w = code.n, code.w
    if not 1 <= w <= n:
        raise ParameterError(f"need 1 <= w <= n, got w={w} n={n}")
    seen = set()
    for i, word in enumerate(code.words):
        positions = [p for p, _ in word]
        if len(word) != w or len(set(positions)) != w:
            raise ParameterError(f"word #{i} does not have weight {w}")
        if any(not 0 <= p < n for p in positions):
            raise ParameterError(f"word #{i} has positions outside [0, {n})")
        if any(s not in (1, -1) for _, s in word):
            raise ParameterError(f"word #{i} has signs outside {{+1, -1}}")
        if tuple(word) != tuple(sorted(word)):
            raise ParameterError(f"word #{i} is not sorted by position")
        if tuple(word) in seen:
            raise ParameterError(f"duplicate codeword #{i}")
        seen.add(tuple(word))
    if len(code.words) < 2:
        code.d = n + 1
        return code.d
    dmin = n + 1
    for a, b in combinations(code.words, 2):
        dist = ternary_distance(a, b)
        if dist < dmin:
            dmin = dist
    if dmin == 0:
        raise ParameterError("duplicate codewords (distance 0)")
    code.d = dmin
    return code.d


def certify_binary(n: int, w: int, words: Iterable[Iterable[int]],
                   provenance: str = "ingested") -> BinaryCWCode:
    """Build a BinaryCWCode and certify its exact distance."""
    code = BinaryCWCode(n=n, w=w, d=0,
                        words=[tuple(sorted(word)) for word in words],
                        provenance=provenance)
    validate_binary(code)
    return code


def certify_ternary(n: int, w: int, words: Iterable[Iterable[tuple[int, int]]],
                    provenance: str = "ingested") -> TernaryCWCode:
    code = TernaryCWCode(n=n, w=w, d=0,
                         words=[tuple(sorted(word)) for word in words],
                         provenance=provenance)
    validate_ternary(code)
    return code


# -- lower bounds --------------------------------------------------------

def _comb0(a: int, b: int) -> int:
    # comb that is 0 outside the usual domain instead of raising
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def _check_nwd(n: int, dist: int, w: int, even: bool) -> None:
    if not 1 <= w <= n:
        raise ParameterError(f"need 1 <= w <= n, got w={w} n={n}")
    if dist < 1:
        raise ParameterError(f"distance must be positive, got {dist}")
    if even and dist % 2:
        raise ParameterError(
            f"binary constant-weight distances are even, got {dist}")


def gilbert_bound(n: int, dist: int, w: int) -> BoundReport:
    """Gilbert-style lower bound on the size of a binary (n, dist, w) code.

    floor(C(n, w) / sum_{i<dist/2} C(w, i) * C(n-w, i)); dist must be even.
    """
    _check_nwd(n, dist, w, even=True)
    d = dist // 2
    denom = sum(_comb0(w, i) * _comb0(n - w, i) for i in range(d))
    value = math.comb(n, w) // denom
    return BoundReport("gilbert", {"n": n, "dist": dist, "w": w}, value)


def smallest_prime_at_least(n: int) -> int:
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


def graham_sloane_bound(n: int, dist: int, w: int) -> BoundReport:
    """Moment-bucket lower bound: floor(C(n, w) / q^(dist/2 - 1)).

    q is the smallest prime >= n, the same prime the matching
    construction buckets with, so bound and construction agree.
    """
    _check_nwd(n, dist, w, even=True)
    q = smallest_prime_at_least(n)
    d = dist // 2
    value = math.comb(n, w) // q ** (d - 1)
    return BoundReport("graham-sloane", {"n": n, "dist": dist, "w": w, "q": q},
                       value)


def _ternary_sphere(n: int, w: int, radius: int) -> int:
    """Number of ternary words within the given distance of a fixed
    weight-w word: sum over i <= radius of
    C(w, j) * C(n-w, j) * C(w-j, i-2j) * 2^j, j up to min(i // 2, n - w).
    """
    total = 0
    for i in range(radius + 1):
        for j in range(min(i // 2, n - w) + 1):
            total += (_comb0(w, j) * _comb0(n - w, j)
                      * _comb0(w - j, i - 2 * j) * (1 << j))
    return total


def ternary_gilbert_bound(n: int, dist: int, w: int) -> BoundReport:
    """Gilbert-style bound for ternary constant-weight codes:
    floor(C(n, w) * 2^w / sphere(dist - 1)).  dist may be odd.
    """
    _check_nwd(n, dist, w, even=False)
    value = (math.comb(n, w) << w) // _ternary_sphere(n, w, dist - 1)
    return BoundReport("ternary-gilbert", {"n": n, "dist": dist, "w": w},
                       value)


# -- constructions -------------------------------------------------------

def greedy_binary(n: int, dist: int, w: int) -> BinaryCWCode:
    """Lexicographic greedy: scan weight-w supports in lex order, keep a
    word when it sits at distance >= dist from everything kept so far.

    For even dist the result is at least as large as gilbert_bound.
    """
    _check_nwd(n, dist, w, even=False)  # odd dist allowed, bound not claimed
    if math.comb(n, w) > ENUM_BUDGET:
        raise BudgetError(
            f"C({n},{w}) = {math.comb(n, w)} supports exceed budget {ENUM_BUDGET}")
    # distance 2(w - inter) >= dist  <=>  inter <= w - ceil(dist / 2)
    max_inter = w - (dist + 1) // 2
    kept_masks: list[int] = []
    kept: list[BinaryWord] = []
    for sup in combinations(range(n), w):
        m = 0
        for pos in sup:
            m |= 1 << pos
        ok = True
        for km in kept_masks:
            if (m & km).bit_count() > max_inter:
                ok = False
                break
        if ok:
            kept_masks.append(m)
            kept.append(sup)
    return certify_binary(n, w, kept,
                          provenance=f"greedy n={n} d={dist} w={w}")


_SIGNS = (1, -1)  # enumeration order: plus before minus


def greedy_ternary(n: int, dist: int, w: int) -> TernaryCWCode:
    """Greedy over signed supports: supports in lex order (major key),
    sign patterns with + before - at each position (minor key)."""
    _check_nwd(n, dist, w, even=False)
    if math.comb(n, w) * (1 << w) > ENUM_BUDGET:
        raise BudgetError(
            f"{math.comb(n, w)} * 2^{w} signed supports exceed budget {ENUM_BUDGET}")
    kept: list[TernaryWord] = []
    for sup in combinations(range(n), w):
        for signs in product(_SIGNS, repeat=w):
            word = tuple(zip(sup, signs))
            if all(ternary_distance(word, other) >= dist for other in kept):
                kept.append(word)
    return certify_ternary(n, w, kept,
                           provenance=f"greedy-ternary n={n} d={dist} w={w}")


def graham_sloane_construct(n: int, dist: int, w: int) -> BinaryCWCode:
    """Moment-bucket construction certified to distance >= dist.

    Buckets every weight-w support by its power-sum moments
    (sum s, sum s^2, ..., sum s^(dist/2 - 1)) mod q with q the smallest
    prime >= n, and returns the largest bucket (ties broken by the
    smallest moment key).  Distinct supports in one bucket differ in
    more than dist/2 - 1 positions, which forces distance >= dist; the
    certification scan double-checks that and a failure would mean an
    implementation bug, so it raises RuntimeError rather than a
    parameter error.
    """
    _check_nwd(n, dist, w, even=True)
    if math.comb(n, w) > ENUM_BUDGET:
        raise BudgetError(
            f"C({n},{w}) = {math.comb(n, w)} supports exceed budget {ENUM_BUDGET}")
    q = smallest_prime_at_least(n)
    d = dist // 2
    buckets: dict[tuple[int, ...], list[BinaryWord]] = {}
    for sup in combinations(range(n), w):
        key = tuple(sum(pow(s, e, q) for s in sup) % q for e in range(1, d))
        buckets.setdefault(key, []).append(sup)
    best_key = min(buckets, key=lambda k: (-len(buckets[k]), k))
    code = certify_binary(n, w, buckets[best_key],
                          provenance=f"graham-sloane n={n} d={dist} w={w} q={q}")
    if len(code) >= 2 and code.d < dist:
        # a single word carries the sentinel distance n + 1, which can sit
        # below dist at tiny n without any promise being broken
        raise RuntimeError(
            f"moment bucket violated its distance promise: {code.d} < {dist}")
    return code


# -- dimension calculators ----------------------------------------------
#
# For a measurement matrix built from an (n, 2(k-1)t, kt) code the
# coherence bound 1 - d/(2w) works out to (1 - 1/k)/t and the usable
# sparsity order is controlled by k and t alone.  These calculators
# answer "how many columns can such a matrix have" directly from
# (n, k, t).

def _check_nkt(n: int, k: int, t: int) -> None:
    if k < 2 or t < 1:
        raise ParameterError(f"need k >= 2 and t >= 1, got k={k} t={t}")
    if n < k * t:
        raise ParameterError(f"need n >= k*t, got n={n} k*t={k * t}")


def dimension_binary_gilbert(n: int, k: int, t: int) -> int:
    """floor(C(n, kt) / sum_{i<(k-1)t} C(kt, i) * C(n-kt, i))."""
    _check_nkt(n, k, t)
    w = k * t
    denom = sum(_comb0(w, i) * _comb0(n - w, i) for i in range((k - 1) * t))
    return math.comb(n, w) // denom


def dimension_binary_gs(n: int, k: int, t: int) -> int:
    """floor(C(n, kt) / n^((k-1)t - 1)).

    Note the denominator uses n itself, not a prime rounded up from n;
    graham_sloane_bound(n, 2(k-1)t, kt) is the prime-based variant and
    the CLI prints both so the difference stays visible.
    """
    _check_nkt(n, k, t)
    w = k * t
    return math.comb(n, w) // n ** ((k - 1) * t - 1)


def dimension_ternary_gilbert(n: int, k: int, t: int) -> int:
    """floor(C(n, kt) * 2^kt / sphere(2(k-1)t - 1)), the ternary analogue."""
    _check_nkt(n, k, t)
    w = k * t
    return (math.comb(n, w) << w) // _ternary_sphere(n, w, 2 * (k - 1) * t - 1)


# -- file format ---------------------------------------------------------
#
# Line-oriented text.  Optional leading comment lines starting with '#'
# ('# provenance: <tag>' is read back), then a header 'n d w', then one
# codeword per line: bare support positions for binary codes, signed
# positions like '+3 -7 +9' for ternary ones.  Loading recomputes the
# distance and rejects files whose header claims more than the words
# deliver.

def dumps_code(code: BinaryCWCode | TernaryCWCode) -> str:
    lines = [f"# provenance: {code.provenance}",
             f"{code.n} {code.d} {code.w}"]
    if isinstance(code, BinaryCWCode):
        for word in code.words:
            lines.append(" ".join(str(p) for p in word))
    else:
        for word in code.words:
            lines.append(" ".join(f"{'+' if s > 0 else '-'}{p}"
                                  for p, s in word))
    return "\n".join(lines) + "\n"


def loads_code(text: str) -> BinaryCWCode | TernaryCWCode:
    provenance = "ingested"
    header: tuple[int, int, int] | None = None
    raw_words: list[tuple[int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("provenance:"):
                provenance = body[len("provenance:"):].strip()
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3:
                raise FormatError(f"line {lineno}: header must be 'n d w'")
            try:
                header = (int(tokens[0]), int(tokens[1]), int(tokens[2]))
            except ValueError:
                raise FormatError(f"line {lineno}: non-integer header") from None
            continue
        raw_words.append((lineno, tokens))
    if header is None:
        raise FormatError("missing 'n d w' header")
    n, claimed_d, w = header
    if n < 1 or w < 1 or claimed_d < 1:
        raise FormatError(f"header values must be positive: {header}")
    ternary = any(tok[0] in "+-" for _, tokens in raw_words for tok in tokens)
    try:
        if ternary:
            words_t: list[list[tuple[int, int]]] = []
            for lineno, tokens in raw_words:
                word = []
                for tok in tokens:
                    if tok[0] not in "+-":
                        raise FormatError(
                            f"line {lineno}: mixed signed and unsigned positions")
                    try:
                        pos = int(tok[1:])
                    except ValueError:
                        raise FormatError(
                            f"line {lineno}: bad position {tok!r}") from None
                    word.append((pos, 1 if tok[0] == "+" else -1))
                words_t.append(word)
            code: BinaryCWCode | TernaryCWCode = certify_ternary(
                n, w, words_t, provenance=provenance)
        else:
            words_b: list[list[int]] = []
            for lineno, tokens in raw_words:
                try:
                    words_b.append([int(tok) for tok in tokens])
                except ValueError:
                    raise FormatError(
                        f"line {lineno}: bad position in {tokens!r}") from None
            code = certify_binary(n, w, words_b, provenance=provenance)
    except ParameterError as exc:
        raise FormatError(str(exc)) from None
    if code.d < claimed_d:
        raise FormatError(
            f"header claims distance {claimed_d} but the words only "
            f"achieve {code.d}")
    return code


def save_code(code: BinaryCWCode | TernaryCWCode, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_code(code))


def load_code(path) -> BinaryCWCode | TernaryCWCode:
    with open(path, "r", encoding="ascii") as fh:
        return loads_code(fh.read())
