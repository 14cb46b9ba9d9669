"""Exact symbolic dynamics on the full two-shift.

Sequences are written with an optional dot between ``s_0`` (end of the head)
and ``s_1`` (start of the tail), e.g. ``"10.100"`` means
``s_{-1} s_0 . s_1 s_2 s_3 = 1 0 . 1 0 0``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Word",
    "BlockSwap",
    "Flip",
    "FLIP",
    "Automorphism",
    "MarginError",
    "InvalidAutomorphism",
    "PeriodicSeq",
    "EPSeq",
    "SFT",
    "apply",
    "apply_periodic",
    "hedlund_x",
    "hedlund_orbit",
    "fix_to_sft",
    "count_fixed",
    "count_fixed_transfer",
    "count_fixed_enumerate",
    "PAPER_COLUMNS",
    "PAPER_TABLE",
    "table",
    "compare_to_paper",
]


class MarginError(ValueError):
    """The window is too short for every output symbol to be determined."""


class InvalidAutomorphism(ValueError):
    pass


def _check_bits(bits: str):
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a nonempty binary word: {bits!r}")


@dataclass(frozen=True)
class Word:
    """Binary word with an optional dot; ``dot`` counts symbols in the head."""

    bits: str
    dot: int | None = None

    def __post_init__(self):
        _check_bits(self.bits)
        if self.dot is not None and not (0 < self.dot < len(self.bits)):
            raise ValueError("the dot must sit strictly between two symbols")

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text.count(".") > 1:
            raise ValueError(f"more than one dot in {text!r}")
        if "." in text:
            head, tail = text.split(".")
            return cls(head + tail, len(head))
        return cls(text)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        if self.dot is None:
            return self.bits
        return self.bits[: self.dot] + "." + self.bits[self.dot:]


@dataclass(frozen=True)
class BlockSwap:
    """Marker automorphism interchanging two words that differ in one place.

    The output symbol at ``i`` is rewritten iff the window ``s[i-j : i-j+L]``
    equals ``u`` or ``v``, where ``j`` is the differing position.
    """

    u: str
    v: str

    def __post_init__(self):
        _check_bits(self.u)
        _check_bits(self.v)
        if len(self.u) != len(self.v):
            raise InvalidAutomorphism("swapped words must have equal length")
        if self.u == self.v:
            raise InvalidAutomorphism("swapped words must differ")
        if len(self.diff_positions) != 1:
            raise InvalidAutomorphism(
                f"{self.u} <-> {self.v}: only single-position swaps are supported")

    @classmethod
    def parse(cls, u: str, v: str) -> "BlockSwap":
        wu, wv = Word.parse(u), Word.parse(v)
        if wu.dot != wv.dot:
            raise InvalidAutomorphism("paired words need the same dot position")
        swap = cls(wu.bits, wv.bits)
        if wu.dot is not None and wu.dot - 1 != swap.position:
            raise InvalidAutomorphism("the dot must follow the swapped symbol s_0")
        return swap

    @property
    def diff_positions(self) -> list[int]:
        return [k for k, (x, y) in enumerate(zip(self.u, self.v)) if x != y]

    @property
    def position(self) -> int:
        return self.diff_positions[0]

    @property
    def length(self) -> int:
        return len(self.u)

    @property
    def left(self) -> int:
        return self.position

    @property
    def right(self) -> int:
        return self.length - 1 - self.position

    def dotted(self) -> tuple[str, str]:
        d = self.position + 1
        if d >= self.length:
            return self.u, self.v
        return (str(Word(self.u, d)), str(Word(self.v, d)))

    def window_out(self, window: str, center: int) -> str:
        """New symbol at ``center`` of ``window``."""
        w = window[center - self.left: center + self.right + 1]
        if w == self.u:
            return self.v[self.position]
        if w == self.v:
            return self.u[self.position]
        return window[center]

    def is_marker(self) -> bool:
        """Exhaustive well-definedness check on all windows of length ``2L``.

        Fails if two rewritten coordinates can see each other's symbol, i.e.
        the rewrite of one would change whether the other matches.
        """
        L = self.length
        for bits in itertools.product("01", repeat=2 * L):
            w = "".join(bits)
            hits = [i for i in range(self.left, 2 * L - self.right)
                    if w[i - self.left: i + self.right + 1] in (self.u, self.v)]
            for i, k in itertools.combinations(hits, 2):
                if abs(i - k) <= max(self.left, self.right):
                    return False
        return True

    def __str__(self):
        u, v = self.dotted()
        return f"{u} <-> {v}"


@dataclass(frozen=True)
class Flip:
    """The global symbol exchange ``s_i -> 1 - s_i``."""

    left: int = 0
    right: int = 0

    def window_out(self, window: str, center: int) -> str:
        return "1" if window[center] == "0" else "0"

    def __str__(self):
        return "flip"


FLIP = Flip()


@dataclass(frozen=True)
class Automorphism:
    """Composition of atoms, applied in list order (first atom first)."""

    atoms: tuple = field(default_factory=tuple)

    def __init__(self, atoms: Iterable = ()):
        object.__setattr__(self, "atoms", tuple(atoms))

    @property
    def radius(self) -> tuple[int, int]:
        return (sum(a.left for a in self.atoms), sum(a.right for a in self.atoms))

    def then(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.atoms + other.atoms)

    def __str__(self):
        return " ; ".join(map(str, self.atoms)) if self.atoms else "identity"


def _apply_atom(atom, window: str) -> str:
    lo, hi = atom.left, len(window) - atom.right
    if hi <= lo:
        raise MarginError("window shorter than the atom's marker")
    return "".join(atom.window_out(window, i) for i in range(lo, hi))


def _atoms(auto) -> tuple:
    if isinstance(auto, Automorphism):
        return auto.atoms
    return (auto,)


def apply(auto, window: str, margins: tuple[int, int] | None = None) -> str:
    """Image of a finite window; the output drops the symbols the margins feed.

    ``margins`` defaults to the automorphism radius; a smaller value raises
    :class:`MarginError` because some output symbols would be undetermined.
    """
    _check_bits(window)
    atoms = _atoms(auto)
    need = (sum(a.left for a in atoms), sum(a.right for a in atoms))
    if margins is not None and (margins[0] < need[0] or margins[1] < need[1]):
        raise MarginError(f"margins {margins} smaller than radius {need}")
    if len(window) <= need[0] + need[1]:
        raise MarginError("window too short for the automorphism radius")
    out = window
    for atom in atoms:
        out = _apply_atom(atom, out)
    return out


@dataclass(frozen=True)
class PeriodicSeq:
    """The bi-infinite sequence ``...www.www...`` with ``s_0 .. s_{n-1} = word``."""

    word: str

    def __post_init__(self):
        _check_bits(self.word)

    @property
    def n(self) -> int:
        return len(self.word)

    def rotate(self, k: int = 1) -> "PeriodicSeq":
        k %= self.n
        return PeriodicSeq(self.word[k:] + self.word[:k])


def apply_periodic(auto, x: PeriodicSeq) -> PeriodicSeq:
    n = x.n
    out = x.word
    for atom in _atoms(auto):
        reps = (atom.left + atom.right) // n + 2
        ext = out * (2 * reps + 1)
        base = reps * n
        out = "".join(atom.window_out(ext, base + i) for i in range(n))
    return PeriodicSeq(out)


def _primitive(p: str) -> str:
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and p[:d] * (n // d) == p:
            return p[:d]
    return p


class EPSeq:
    """Eventually periodic bi-infinite sequence, kept in a canonical form.

    ``left`` repeats towards -infinity ending just before ``start``; ``mid``
    occupies positions ``start .. start+len(mid)-1``; ``right`` repeats from
    there on.  Two instances are equal iff they are the same sequence.
    """

    __slots__ = ("left", "mid", "right", "start")

    def __init__(self, left: str, mid: str, right: str, start: int):
        _check_bits(left)
        _check_bits(right)
        if mid and set(mid) - {"0", "1"}:
            raise ValueError("mid must be binary")
        self.left, self.mid, self.right, self.start = left, mid, right, start
        self._canonicalize()

    @classmethod
    def parse(cls, left: str, middle: str, right: str) -> "EPSeq":
        """``(left)^inf middle (right)^inf`` with a dot in ``middle`` before ``s_1``."""
        w = Word.parse(middle)
        if w.dot is None:
            raise ValueError("middle needs a dot")
        return cls(left, w.bits, right, 1 - w.dot)

    def __getitem__(self, i: int) -> str:
        end = self.start + len(self.mid)
        if i < self.start:
            return self.left[(i - self.start) % len(self.left)]
        if i >= end:
            return self.right[(i - end) % len(self.right)]
        return self.mid[i - self.start]

    def window(self, lo: int, hi: int) -> str:
        return "".join(self[i] for i in range(lo, hi))

    def _canonicalize(self):
        # primitive periods, rotated so they still describe the same tails
        end = self.start + len(self.mid)
        L = _primitive(self.window(self.start - len(self.left), self.start))
        R = _primitive(self.window(end, end + len(self.right)))
        self.left, self.right = L, R
        mid, start = self.mid, self.start
        while mid and mid[0] == self.left[0]:
            mid = mid[1:]
            start += 1
            self.left = self.left[1:] + self.left[0]
        while mid and mid[-1] == self.right[-1]:
            mid = mid[:-1]
            self.right = self.right[-1] + self.right[:-1]
        self.mid, self.start = mid, start
        if not mid and len(self.left) == len(self.right):
            # fully periodic if the tails continue each other
            if self.left == self.right:
                p = len(self.left)
                k = self.start % p
                self.left = self.right = (self.right[-k:] + self.right[:-k]) if k else self.right
                self.start = 0

    def _key(self):
        return (self.left, self.mid, self.right, self.start)

    def __eq__(self, other):
        return isinstance(other, EPSeq) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        head_len = 1 - self.start
        if 0 <= head_len <= len(self.mid):
            mid = self.mid[:head_len] + "." + self.mid[head_len:]
        else:
            mid = self.mid + f"@{self.start}"
        return f"({self.left})^inf {mid} ({self.right})^inf"

    def shift(self, k: int = 1) -> "EPSeq":
        """``sigma^k``: the symbol at ``i + k`` moves to ``i``."""
        return EPSeq(self.left, self.mid, self.right, self.start - k)

    def flip(self) -> "EPSeq":
        t = str.maketrans("01", "10")
        return EPSeq(self.left.translate(t), self.mid.translate(t), self.right.translate(t), self.start)


def _apply_atom_ep(atom, x: EPSeq) -> EPSeq:
    m = atom.left + atom.right + len(x.left) + len(x.right)
    lo = x.start - m
    hi = x.start + len(x.mid) + m
    ctx_lo = lo - len(x.left) - atom.left
    ctx_hi = hi + len(x.right) + atom.right
    ctx = x.window(ctx_lo, ctx_hi)
    out = [atom.window_out(ctx, i - ctx_lo) for i in range(lo - len(x.left), hi + len(x.right))]
    out = "".join(out)
    nl, nr = len(x.left), len(x.right)
    return EPSeq(out[:nl], out[nl:len(out) - nr], out[len(out) - nr:], lo)


def apply_ep(auto, x: EPSeq) -> EPSeq:
    for atom in _atoms(auto):
        x = _apply_atom_ep(atom, x)
    return x


# -- the infinite-order element --------------------------------------------------------

SWAP_S = BlockSwap("0010", "0110")
PSI = Automorphism([SWAP_S, FLIP])


def hedlund_x(n: int) -> EPSeq:
    """``x^(n)``: ``...0101 0110110 (10)^p . 1111...`` (n = 2p) or ``...(10)^p 1 . 0000...``."""
    p, odd = divmod(n, 2)
    if odd:
        return EPSeq.parse("01", "0110110" + "10" * p + "1." + "0", "0")
    return EPSeq.parse("01", "0110110" + "10" * p + ".1", "1")


@dataclass
class HedlundVerdict:
    bound: int
    matches_pattern: bool
    all_distinct: bool
    period: int | None
    first_mismatch: int | None = None

    @property
    def infinite_order_evidence(self) -> bool:
        return self.matches_pattern and self.all_distinct


def hedlund_orbit(bound: int, psi: Automorphism = PSI) -> HedlundVerdict:
    """Iterate ``psi`` on ``x^(0)`` exactly and compare with ``x^(n)``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    x = hedlund_x(0)
    seen = {x: 0}
    mismatch = None
    period = None
    for n in range(1, bound + 1):
        x = apply_ep(psi, x)
        if mismatch is None and x != hedlund_x(n):
            mismatch = n
        if x in seen and period is None:
            period = n - seen[x]
        seen.setdefault(x, n)
    return HedlundVerdict(bound, mismatch is None, period is None, period, mismatch)


# -- subshifts of finite type ------------------------------------------------------------

@dataclass(frozen=True)
class SFT:
    forbidden: tuple[str, ...]

    def __init__(self, forbidden: Iterable[str] = ()):
        words = []
        for w in forbidden:
            w = Word.parse(w).bits
            if w not in words:
                words.append(w)
        object.__setattr__(self, "forbidden", tuple(words))

    @property
    def max_len(self) -> int:
        return max((len(w) for w in self.forbidden), default=0)

    def allows_periodic(self, word: str) -> bool:
        n = len(word)
        for f in self.forbidden:
            ext = word * (len(f) // n + 2)
            if any(ext.startswith(f, i) for i in range(n)):
                return False
        return True

    def __str__(self):
        return "{" + ", ".join(self.forbidden) + "}" if self.forbidden else "full shift"


def fix_to_sft(swap: BlockSwap) -> SFT:
    """The points fixed by a single-position swap are exactly those avoiding both words."""
    if not isinstance(swap, BlockSwap):
        raise InvalidAutomorphism("only single-position block swaps map to SFTs")
    return SFT([swap.u, swap.v])


def _words_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int8)


def count_fixed_enumerate(sft: SFT, n: int) -> int:
    """Brute force over all ``2**n`` fundamental words."""
    if n < 1:
        raise ValueError("n must be >= 1")
    W = _words_matrix(n)
    ok = np.ones(W.shape[0], dtype=bool)
    for f in sft.forbidden:
        fb = np.array([int(ch) for ch in f], dtype=np.int8)
        for i in range(n):
            cols = (i + np.arange(len(f))) % n
            ok &= ~np.all(W[:, cols] == fb, axis=1)
    return int(ok.sum())


def _debruijn_matrix(sft: SFT, m: int) -> np.ndarray:
    """Transfer matrix on words of length ``m``; edges carry allowed ``m+1``-words."""
    N = 1 << m
    A = np.zeros((N, N), dtype=object)
    for w in range(N):
        for b in (0, 1):
            word = format(w, f"0{m}b") + str(b) if m else str(b)
            if any(f in word for f in sft.forbidden):
                continue
            nxt = ((w << 1) | b) & (N - 1)
            A[w, nxt] += 1
    return A


def count_fixed_transfer(sft: SFT, n: int) -> int:
    """``trace(A**n)`` on the de Bruijn graph of order ``L-1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = max(sft.max_len - 1, 0)
    if m == 0:
        allowed = 2 - sum(1 for f in sft.forbidden if len(f) == 1)
        return allowed ** n
    A = _debruijn_matrix(sft, m)
    P = np.identity(A.shape[0], dtype=object)
    base, e = A, n
    while e:
        if e & 1:
            P = P.dot(base)
        base = base.dot(base)
        e >>= 1
    return int(np.trace(P))


def count_fixed(sft: SFT, n: int) -> int:
    """``|Fix(sigma^n) ∩ X|``: transfer matrix for ``n >= L-1``, enumeration below."""
    if n < max(sft.max_len - 1, 1):
        return count_fixed_enumerate(sft, n)
    return count_fixed_transfer(sft, n)


PAPER_COLUMNS = {
    "DN": SFT(),
    "L_p": SFT(["0010100", "0011100"]),
    "L_q": SFT(["10100", "11100"]),
    "L_r": SFT(["10010", "10110"]),
    "L_s": SFT(["0010", "0110"]),
    "EMP": None,
}

PAPER_TABLE = {
    "DN": [8, 16, 32, 64, 128],
    "L_p": [8, 16, 22, 52, 114],
    "L_q": [8, 16, 22, 40, 72],
    "L_r": [2, 16, 22, 52, 72],
    "L_s": [2, 8, 12, 28, 44],
    "EMP": [0, 0, 0, 0, 0],
}
PAPER_NS = (3, 4, 5, 6, 7)


def table(columns: Sequence[str] | dict | None = None, ns: Sequence[int] = PAPER_NS) -> dict:
    """Count table ``{column: [count(n) for n in ns]}``; EMP is the empty set."""
    if columns is None:
        columns = PAPER_COLUMNS
    elif not isinstance(columns, dict):
        columns = {name: PAPER_COLUMNS[name] for name in columns}
    out = {}
    for name, sft in columns.items():
        out[name] = [0 if sft is None else count_fixed(sft, n) for n in ns]
    return out


def compare_to_paper() -> dict:
    """Per-cell pass/fail for the published periodic-point table."""
    got = table()
    return {(name, n): got[name][k] == PAPER_TABLE[name][k]
            for name in PAPER_TABLE for k, n in enumerate(PAPER_NS)}


def format_table(tab: dict, ns: Sequence[int] = PAPER_NS) -> str:
    names = list(tab)
    width = max(6, *(len(n) for n in names))
    lines = ["n".rjust(3) + "".join(name.rjust(width + 1) for name in names)]
    for k, n in enumerate(ns):
        lines.append(str(n).rjust(3) + "".join(str(tab[name][k]).rjust(width + 1) for name in names))
    return "\n".join(lines)
