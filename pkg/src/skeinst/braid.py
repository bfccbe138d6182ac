"""Mixed braid words in B_{1,n} and the moves of the braid equivalence.

A word is a sequence of letters over the generators t (the loop around the
fixed strand) and sigma_1 ... sigma_{n-1}; we store merged (generator,
exponent) pairs with nonzero exponents.  Generator 0 denotes t and i >= 1
denotes sigma_i.

Grammar for parsing and printing (whitespace separated):

    t       the loop generator            t^-2       powers
    g3      sigma_3                       g1^-1
    t2      looping element t_2 = g2 g1 t g1 g2   (expanded on input)
    u2      looping element t'_2 = g2 g1 t g1^-1 g2^-1

Printing only ever emits t and g<i> letters; the loop letters are an input
convenience and are expanded via the looping-element definitions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

Letter = tuple[int, int]  # (generator, exponent); generator 0 is t

T_FAMILY = "t"
TPRIME_FAMILY = "tprime"


class WordError(ValueError):
    """Malformed word text or an out-of-range generator index."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class MoveError(ValueError):
    """Invalid parameters for a braid move."""


def _merge(letters) -> tuple[Letter, ...]:
    """Free reduction: merge adjacent equal generators, drop zero exponents."""
    out: list[Letter] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            total = out[-1][1] + exp
            out.pop()
            if total:
                out.append((gen, total))
            elif out:
                # a cancellation may expose a new mergeable pair; re-scan tail
                prev = out.pop()
                out = _merge_list(out, [prev])
        else:
            out.append((gen, exp))
    return tuple(out)


def _merge_list(done: list[Letter], pending: list[Letter]) -> list[Letter]:
    for gen, exp in pending:
        if exp == 0:
            continue
        if done and done[-1][0] == gen:
            total = done[-1][1] + exp
            done.pop()
            if total:
                done.append((gen, total))
        else:
            done.append((gen, exp))
    return done


@dataclass(frozen=True)
class MixedBraidWord:
    """A word in B_{1,n}; ``strands`` is the number of moving strands n."""

    strands: int
    letters: tuple[Letter, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise WordError(f"strand count must be >= 1, got {self.strands}")
        object.__setattr__(self, "letters", _merge(self.letters))
        for gen, _ in self.letters:
            if gen < 0 or gen > self.strands - 1:
                raise WordError(
                    f"generator index {gen} out of range for n={self.strands}")

    # -- basic data ----------------------------------------------------------

    def sigma_exponent_sum(self) -> int:
        """Exponent sum e of the sigma_i letters (the abelianized image)."""
        return sum(exp for gen, exp in self.letters if gen >= 1)

    def t_exponent_sum(self) -> int:
        return sum(exp for gen, exp in self.letters if gen == 0)

    def inverse(self) -> MixedBraidWord:
        return MixedBraidWord(
            self.strands, tuple((g, -e) for g, e in reversed(self.letters)))

    def concat(self, other: MixedBraidWord) -> MixedBraidWord:
        n = max(self.strands, other.strands)
        return MixedBraidWord(n, self.letters + other.letters)

    def embed(self, strands: int) -> MixedBraidWord:
        if strands < self.strands:
            raise MoveError(f"cannot embed n={self.strands} into n={strands}")
        return MixedBraidWord(strands, self.letters)

    def rotate(self, k: int) -> MixedBraidWord:
        """Cyclic rotation of the letter sequence (a conjugation)."""
        if not self.letters:
            return self
        k %= len(self.letters)
        return MixedBraidWord(self.strands, self.letters[k:] + self.letters[:k])

    # -- the alpha -> alpha_+ index shift -------------------------------------

    def shift_indices(self) -> MixedBraidWord:
        """sigma_i -> sigma_{i+1}, t -> t_1 (expanded), n -> n+1."""
        out: list[Letter] = []
        for gen, exp in self.letters:
            if gen == 0:
                out.extend(loop_letters(1, T_FAMILY, exp))
            else:
                out.append((gen + 1, exp))
        return MixedBraidWord(self.strands + 1, tuple(out))

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        bits = []
        for gen, exp in self.letters:
            name = "t" if gen == 0 else f"g{gen}"
            bits.append(name if exp == 1 else f"{name}^{exp}")
        return " ".join(bits)


def word(text: str, strands: int) -> MixedBraidWord:
    return parse_word(text, strands)


_TOKEN = re.compile(r"^(t|u(\d+)|t(\d+)|g(\d+))(\^(-?\d+))?$")


def parse_word(text: str, strands: int) -> MixedBraidWord:
    """Parse the word grammar; loop letters t<i>/u<i> are expanded."""
    letters: list[Letter] = []
    pos = 0
    stripped = text.strip()
    if stripped == "1" or stripped == "":
        return MixedBraidWord(strands, ())
    for token in text.split():
        pos = text.index(token, pos)
        m = _TOKEN.match(token)
        if not m:
            raise WordError(f"unknown token {token!r}", pos)
        exp = int(m.group(6)) if m.group(6) else 1
        if m.group(6) == "0" or exp == 0:
            pos += len(token)
            continue
        if token.startswith("g"):
            idx = int(m.group(4))
            if idx < 1 or idx > strands - 1:
                raise WordError(f"generator index out of range: {token!r}", pos)
            letters.append((idx, exp))
        elif token == "t" or token.startswith("t^"):
            letters.append((0, exp))
        else:
            family = TPRIME_FAMILY if token[0] == "u" else T_FAMILY
            idx = int(m.group(2) or m.group(3))
            if idx > strands - 1:
                raise WordError(f"loop index out of range: {token!r}", pos)
            letters.extend(loop_letters(idx, family, exp))
        pos += len(token)
    return MixedBraidWord(strands, tuple(letters))


def loop_letters(i: int, family: str, k: int) -> tuple[Letter, ...]:
    """The word for the k-th power of the looping element t_i or t'_i.

    t_i  = g_i ... g_1 t g_1 ... g_i          (not a conjugate; powers repeat)
    t'_i = g_i ... g_1 t g_1^-1 ... g_i^-1    (a conjugate; powers telescope)
    """
    if k == 0:
        return ()
    if i == 0:
        return ((0, k),)
    down = tuple((j, 1) for j in range(i, 0, -1))
    up = tuple((j, 1) for j in range(1, i + 1))
    up_inv = tuple((j, -1) for j in range(1, i + 1))
    if family == TPRIME_FAMILY:
        return _merge(down + ((0, k),) + up_inv)
    if k > 0:
        return _merge((down + ((0, 1),) + up) * k)
    down_inv = tuple((j, -1) for j in range(i, 0, -1))
    return _merge((down_inv + ((0, -1),) + up_inv) * (-k))


def loop_word(i: int, family: str, k: int, strands: int | None = None) -> MixedBraidWord:
    n = strands if strands is not None else max(i + 1, 1)
    return MixedBraidWord(n, loop_letters(i, family, k))


# -- the braid moves of the L(p,1) equivalence --------------------------------

@dataclass(frozen=True)
class Conjugate:
    by: MixedBraidWord


@dataclass(frozen=True)
class Stabilize:
    sign: int = 1


@dataclass(frozen=True)
class LoopConjugate:
    sign: int = 1


@dataclass(frozen=True)
class Bbm:
    """Braid band move on moving strand ``strand`` with twist sign and p."""

    strand: int
    sign: int = 1
    p: int = 1


Move = Conjugate | Stabilize | LoopConjugate | Bbm


def apply_move(w: MixedBraidWord, move: Move) -> MixedBraidWord:
    if isinstance(move, Conjugate):
        if move.by.strands != w.strands:
            raise MoveError("conjugating word must share the strand count")
        return move.by.inverse().concat(w).concat(move.by)
    if isinstance(move, Stabilize):
        if move.sign not in (1, -1):
            raise MoveError(f"stabilization sign must be +-1, got {move.sign}")
        return MixedBraidWord(w.strands + 1, w.letters + ((w.strands, move.sign),))
    if isinstance(move, LoopConjugate):
        if move.sign not in (1, -1):
            raise MoveError(f"loop conjugation sign must be +-1, got {move.sign}")
        return MixedBraidWord(
            w.strands, ((0, move.sign),) + w.letters + ((0, -move.sign),))
    if isinstance(move, Bbm):
        return braid_band_move(w, move.strand, move.sign, move.p)
    raise MoveError(f"unknown move {move!r}")


def braid_band_move(w: MixedBraidWord, strand: int, sign: int, p: int) -> MixedBraidWord:
    """bbm on the m-th moving strand:

        alpha  ->  t^p alpha_+ sigma_m sigma_{m-1} ... sigma_2 sigma_1^e
                   sigma_2^-1 ... sigma_m^-1

    For m = 1 the tail degenerates to sigma_1^e.  Words on fewer strands are
    first embedded with trivial extra strands.
    """
    if sign not in (1, -1):
        raise MoveError(f"bbm sign must be +-1, got {sign}")
    if strand < 1:
        raise MoveError(f"bbm strand must be >= 1, got {strand}")
    base = w.embed(max(w.strands, strand))
    shifted = base.shift_indices()
    tail: list[Letter] = [(j, 1) for j in range(strand, 1, -1)]
    tail.append((1, sign))
    tail.extend((j, -1) for j in range(2, strand + 1))
    letters = ((0, p),) + shifted.letters + tuple(tail)
    return MixedBraidWord(shifted.strands, letters)
