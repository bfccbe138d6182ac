"""Permutations and the type-A Hecke algebra acting on braiding tails.

A tail of a basis word lives in the Iwahori-Hecke algebra H_n(q) of type A.
We store it as the underlying permutation in one-line notation, 0-indexed,
with trailing fixed points trimmed so the empty tuple is the identity and
keys do not depend on the ambient strand count.

The canonical reduced word attached to a permutation is the "staircase"
form (g_{i_1} g_{i_1 - 1} ... g_{i_1 - k_1})(g_{i_2} ...) ... with strictly
increasing run tops i_1 < i_2 < ...; these words biject with permutations
and are exactly the basis words used for printing.

Generator letters are 1-based: g_i swaps strands i and i+1, i.e. 0-based
positions i-1 and i.
"""

from __future__ import annotations

from functools import lru_cache

from .rings import LaurentPoly, ONE, Q, Q_MINUS_1

Perm = tuple[int, ...]

IDENTITY: Perm = ()


def _trim(values: list[int]) -> Perm:
    while values and values[-1] == len(values) - 1:
        values.pop()
    return tuple(values)


def perm_apply(p: Perm, i: int) -> int:
    return p[i] if i < len(p) else i


def perm_compose(p: Perm, r: Perm) -> Perm:
    """(p o r)(i) = p(r(i))."""
    n = max(len(p), len(r))
    return _trim([perm_apply(p, perm_apply(r, i)) for i in range(n)])


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return _trim(out)


def perm_length(p: Perm) -> int:
    """Coxeter length = inversion count."""
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def perm_rmul_s(p: Perm, i: int) -> Perm:
    """p * s_i (swap entries at positions i-1, i of the one-line tuple)."""
    n = max(len(p), i + 1)
    vals = [perm_apply(p, k) for k in range(n)]
    vals[i - 1], vals[i] = vals[i], vals[i - 1]
    return _trim(vals)


def perm_lmul_s(p: Perm, i: int) -> Perm:
    """s_i * p (swap the values i-1 and i)."""
    n = max(len(p), i + 1)
    vals = [perm_apply(p, k) for k in range(n)]
    for k in range(n):
        if vals[k] == i - 1:
            vals[k] = i
        elif vals[k] == i:
            vals[k] = i - 1
    return _trim(vals)


def has_right_descent(p: Perm, i: int) -> bool:
    return perm_apply(p, i - 1) > perm_apply(p, i)


def has_left_descent(p: Perm, i: int) -> bool:
    inv = perm_inverse(p)
    return perm_apply(inv, i - 1) > perm_apply(inv, i)


def perm_of_word(letters) -> Perm:
    p = IDENTITY
    for i in letters:
        p = perm_rmul_s(p, i)
    return p


@lru_cache(maxsize=None)
def sword(p: Perm) -> tuple[int, ...]:
    """Canonical staircase word of p, runs ordered by increasing top letter.

    Decomposes p = u * (g_m g_{m-1} ... g_{j+1}) where m+1 is the largest
    moved strand and j is the position holding the value m, then recurses
    on u, which fixes strand m+1.
    """
    if not p:
        return ()
    m = len(p) - 1  # largest moved 0-based point
    j = p.index(m)
    run = tuple(range(m, j, -1))  # letters g_m, g_{m-1}, ..., g_{j+1}
    u = p
    for letter in reversed(run):
        u = perm_rmul_s(u, letter)
    return sword(u) + run


def word_str(letters, sep: str = " ") -> str:
    return sep.join(f"g{i}" for i in letters)


# -- Hecke multiplication ----------------------------------------------------

def hecke_rmul(p: Perm, i: int) -> tuple[tuple[Perm, LaurentPoly], ...]:
    """T_p * T_{g_i} expanded in the T-basis (one or two terms)."""
    q_suffix = perm_rmul_s(p, i)
    if has_right_descent(p, i):
        return ((p, Q_MINUS_1), (q_suffix, Q))
    return ((q_suffix, ONE),)


def hecke_lmul(i: int, p: Perm) -> tuple[tuple[Perm, LaurentPoly], ...]:
    """T_{g_i} * T_p expanded in the T-basis."""
    q_prefix = perm_lmul_s(p, i)
    if has_left_descent(p, i):
        return ((p, Q_MINUS_1), (q_prefix, Q))
    return ((q_prefix, ONE),)


def hecke_mult(p: Perm, r: Perm) -> dict[Perm, LaurentPoly]:
    """T_p * T_r as a map perm -> coefficient."""
    out: dict[Perm, LaurentPoly] = {p: ONE}
    for letter in sword(r):
        nxt: dict[Perm, LaurentPoly] = {}
        for base, c in out.items():
            for p2, c2 in hecke_rmul(base, letter):
                prev = nxt.get(p2)
                acc = c * c2 if prev is None else prev + c * c2
                if acc.is_zero():
                    nxt.pop(p2, None)
                else:
                    nxt[p2] = acc
        out = nxt
    return out


def max_letter(p: Perm) -> int:
    """Largest generator index appearing in the canonical word (0 if none)."""
    return len(p) - 1 if p else 0
