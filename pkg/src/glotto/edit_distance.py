"""Levenshtein distance kernels and the length-renormalized word distance.

Characters are Unicode scalar values, i.e. Python ``str`` items. Three
kernels give identical results:

* ``bitparallel`` (default) -- Myers/Hyyrö bit-vector algorithm, one pass
  of integer bit operations per character of the longer word;
* ``tworow`` -- classic dynamic programme keeping two rows, with an
  optional diagonal band;
* ``full`` -- the full (m+1) x (n+1) table; kept as a reference.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence


def _levenshtein_bitparallel(a: str, b: str) -> int:
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    if m == 0:
        return len(b)
    peq: dict[str, int] = {}
    bit = 1
    for ch in a:
        peq[ch] = peq.get(ch, 0) | bit
        bit <<= 1
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv, score = mask, 0, m
    for ch in b:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | ~(xh | pv)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        # top row of the DP grows by one per column, hence the carried-in 1
        ph = (ph << 1) | 1
        mh = mh << 1
        pv = (mh | ~(xv | ph)) & mask
        mv = ph & xv & mask
    return score


def _levenshtein_tworow(a: str, b: str, band: int | None = None) -> int:
    if len(a) < len(b):
        a, b = b, a
    n, m = len(a), len(b)
    if band is not None:
        if band < 0:
            raise ValueError("band must be >= 0")
        if n - m > band:
            return band + 1
    if m == 0:
        return n
    big = n + m + 1
    prev = list(range(m + 1))
    cur = [0] * (m + 1)
    for i in range(1, n + 1):
        ca = a[i - 1]
        if band is None:
            lo, hi = 1, m
        else:
            # cells off the band read as +inf; stale entries are fenced off
            lo, hi = max(1, i - band), min(m, i + band)
        cur[0] = i if (band is None or i <= band) else big
        if lo > 1:
            cur[lo - 1] = big
        for j in range(lo, hi + 1):
            cost = prev[j - 1] + (ca != b[j - 1])
            up = prev[j] + 1
            left = cur[j - 1] + 1
            if up < cost:
                cost = up
            if left < cost:
                cost = left
            cur[j] = cost
        if band is not None and hi < m:
            cur[hi + 1] = big
        prev, cur = cur, prev
    result = prev[m]
    if band is not None and result > band:
        return band + 1
    return result


def _levenshtein_full(a: str, b: str) -> int:
    n, m = len(a), len(b)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[n][m]


KERNELS = {
    "bitparallel": _levenshtein_bitparallel,
    "tworow": _levenshtein_tworow,
    "full": _levenshtein_full,
}


def levenshtein(w1: str, w2: str, kernel: str = "bitparallel", band: int | None = None) -> int:
    """Unit-cost edit distance (insert, delete, substitute; no transpositions).

    With ``band=k`` the two-row kernel only fills cells within ``k`` of the
    diagonal and returns ``k + 1`` whenever the true distance exceeds ``k``.
    """
    if w1 == w2:
        return 0
    if band is not None:
        return _levenshtein_tworow(w1, w2, band)
    try:
        fn = KERNELS[kernel]
    except KeyError:
        raise ValueError(f"unknown kernel {kernel!r}") from None
    return fn(w1, w2)


def word_distance(w1: str, w2: str) -> float:
    """Levenshtein distance divided by the length of the longer word.

    >>> word_distance("ab", "ax"), word_distance("abcdefgh", "abcdefgx")
    (0.5, 0.125)
    """
    longest = max(len(w1), len(w2))
    if longest == 0:
        raise ValueError("word_distance needs at least one nonempty word")
    if w1 == w2:
        return 0.0
    return _levenshtein_bitparallel(w1, w2) / longest


def _chunk_distances(pairs: Sequence[tuple[str, str]]) -> list[float]:
    return [word_distance(a, b) for a, b in pairs]


def batch_word_distances(
    pairs: Iterable[tuple[str, str]],
    workers: int | None = None,
    chunk_size: int = 2048,
) -> list[float]:
    """:func:`word_distance` over ``pairs``, in order.

    ``workers > 1`` splits the input into chunks evaluated in worker
    processes; results are reassembled in input order.
    """
    pairs = list(pairs)
    if not workers or workers <= 1 or len(pairs) <= chunk_size:
        return _chunk_distances(pairs)
    chunks = [pairs[i:i + chunk_size] for i in range(0, len(pairs), chunk_size)]
    out: list[float] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_chunk_distances, chunks):
            out.extend(part)
    return out
