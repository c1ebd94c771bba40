"""Reduced words in the free group of finite rank.

Generators are numbered from 1; the signed index -i stands for the inverse of
generator i. In the ASCII format generator 1 is `a`, generator 2 is `b` and so
on, with the upper case letter standing for the inverse.
"""
from __future__ import annotations
import string

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from coarse_maps.errors import DegenerateInputError, GroupMismatchError, MalformedInputError


MAX_RANK = len(string.ascii_lowercase)
IDENTITY_LITERALS = ('', '1')


@dataclass(frozen=True)
class Word:
    """An immutable, freely reduced word. Construct words with `reduce` or
    `parse_word`; the constructor itself trusts its input so that the
    arithmetic below stays cheap."""
    letters: Tuple[int, ...]
    rank: int

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f'Word({format_word(self)!r}, rank={self.rank})'

    @property
    def length(self) -> int:
        return len(self.letters)

    def is_identity(self) -> bool:
        return not self.letters


def identity(rank: int) -> Word:
    _check_rank_value(rank)
    return Word((), rank)


def generator(index: int, rank: int) -> Word:
    """Returns the word of length one for the signed generator index."""
    return reduce([index], rank)


def _check_rank_value(rank: int):
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise TypeError('rank must be an integer')
    if rank < 1 or rank > MAX_RANK:
        raise MalformedInputError(f'rank must be between 1 and {MAX_RANK}, got {rank}')


def _check_same_rank(u: Word, v: Word):
    if u.rank != v.rank:
        raise GroupMismatchError(f'rank mismatch: {u.rank} != {v.rank}')


def _free_reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def reduce(letters: Sequence[int], rank: int) -> Word:
    """Freely reduces a raw sequence of signed generator indices."""
    _check_rank_value(rank)
    for letter in letters:
        if not isinstance(letter, int) or isinstance(letter, bool):
            raise MalformedInputError(f'letter {letter!r} is not an integer')
        if letter == 0 or abs(letter) > rank:
            raise MalformedInputError(f'letter {letter} is out of range for rank {rank}')
    return Word(_free_reduce(letters), rank)


def mul(u: Word, v: Word) -> Word:
    """Concatenates two reduced words and cancels at the seam."""
    _check_same_rank(u, v)
    left, right = u.letters, v.letters
    limit = min(len(left), len(right))
    cancelled = 0
    while cancelled < limit and left[-1 - cancelled] == -right[cancelled]:
        cancelled += 1
    return Word(left[:len(left) - cancelled] + right[cancelled:], u.rank)


def inv(w: Word) -> Word:
    return Word(tuple(-letter for letter in reversed(w.letters)), w.rank)


def power(w: Word, exponent: int) -> Word:
    """w raised to an integer exponent, negative exponents included."""
    base = w if exponent >= 0 else inv(w)
    result = Word((), w.rank)
    for _ in range(abs(exponent)):
        result = mul(result, base)
    return result


def conj(x: Word, b: Word) -> Word:
    """x^b = b⁻¹xb."""
    return mul(mul(inv(b), x), b)


def commutator(a: Word, b: Word) -> Word:
    """[a,b] = a⁻¹b⁻¹ab."""
    return mul(mul(inv(a), inv(b)), mul(a, b))


def commutes(u: Word, v: Word) -> bool:
    return mul(u, v) == mul(v, u)


def cyclic_reduction(w: Word) -> Tuple[Word, Word]:
    """Splits w as c⁻¹·core·c with core cyclically reduced. Returns (core, c)."""
    letters = w.letters
    k = 0
    while 2 * k + 1 < len(letters) and letters[k] == -letters[-1 - k]:
        k += 1
    core = Word(letters[k:len(letters) - k], w.rank)
    conjugator = Word(letters[len(letters) - k:], w.rank)
    return core, conjugator


def root(w: Word) -> Tuple[Word, int]:
    """Returns (primitive, exponent) with primitive^exponent = w and primitive
    not a proper power."""
    if w.is_identity():
        raise DegenerateInputError('the identity has no primitive root')
    core, conjugator = cyclic_reduction(w)
    letters = core.letters
    size = len(letters)
    for period in range(1, size + 1):
        if size % period:
            continue
        if letters[:period] * (size // period) == letters:
            primitive = Word(letters[:period], w.rank)
            return conj(primitive, conjugator), size // period
    raise AssertionError('unreachable: the full word is always a period')


def power_exponent(w: Word, base: Word) -> int:
    """Returns n with base^n = w, for a primitive `base`. Raises ValueError when
    w is not a power of base."""
    _check_same_rank(w, base)
    if w.is_identity():
        return 0
    primitive, exponent = root(w)
    if primitive == base:
        return exponent
    if primitive == inv(base):
        return -exponent
    raise ValueError(f'{w} is not a power of {base}')


def letter_key(letter: int) -> int:
    """Position of a signed index in the order 1 < -1 < 2 < -2 < ..."""
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


def shortlex_key(w: Word) -> Tuple[int, Tuple[int, ...]]:
    return len(w.letters), tuple(letter_key(letter) for letter in w.letters)


def _letter_order(rank: int) -> List[int]:
    order = []
    for index in range(1, rank + 1):
        order.extend((index, -index))
    return order


@lru_cache(maxsize=None)
def _spheres(rank: int, radius: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    if radius == 0:
        return (((),),)
    previous = _spheres(rank, radius - 1)
    order = _letter_order(rank)
    sphere = []
    for letters in previous[-1]:
        for letter in order:
            if letters and letters[-1] == -letter:
                continue
            sphere.append(letters + (letter,))
    return previous + (tuple(sphere),)


def ball(rank: int, radius: int) -> List[Word]:
    """All reduced words of length at most `radius`, in shortlex order."""
    _check_rank_value(rank)
    if radius < 0:
        raise ValueError('radius must be non-negative')
    return [Word(letters, rank) for sphere in _spheres(rank, radius) for letters in sphere]


def ball_size(rank: int, radius: int) -> int:
    """Closed form 1 + sum of 2k(2k-1)^(i-1)."""
    return 1 + sum(2 * rank * (2 * rank - 1) ** (i - 1) for i in range(1, radius + 1))


def parse_word(text: str, rank: int) -> Word:
    """Reads the ASCII format. Both the empty string and `1` denote the identity."""
    _check_rank_value(rank)
    text = text.strip()
    if text in IDENTITY_LITERALS:
        return Word((), rank)
    letters = []
    for char in text:
        if char not in string.ascii_letters:
            raise MalformedInputError(f'{char!r} is not a word letter in {text!r}')
        index = string.ascii_lowercase.index(char.lower()) + 1
        if index > rank:
            raise MalformedInputError(f'letter {char!r} exceeds rank {rank}')
        letters.append(index if char.islower() else -index)
    return Word(_free_reduce(letters), rank)


def format_word(w: Word) -> str:
    chars = []
    for letter in w.letters:
        char = string.ascii_lowercase[abs(letter) - 1]
        chars.append(char if letter > 0 else char.upper())
    return ''.join(chars)
