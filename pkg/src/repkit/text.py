"""Sentinel-terminated texts and the closed-form string families.

Internally every text ends with the sentinel byte 0, which is strictly
smaller than every other symbol and occurs nowhere else.  Inputs that
already contain byte 0 are rejected instead of re-encoded.  Alphabet
symbols live in 1..sigma; the Fibonacci letters map a->1, b->2 (the CLI
renders them back as a/b).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameter, SentinelCollision, SizeLimit

SENTINEL = 0

#: default cap on generated/loaded text size, in symbols
BYTE_BUDGET = 1 << 28

# f_1 .. : 1, 1, 2, 3, 5, 8, ...
def fib_number(k: int) -> int:
    if k < 1:
        raise InvalidParameter(f"Fibonacci index must be >= 1, got {k}")
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class Text:
    """A sentinel-terminated byte string.

    ``n`` includes the sentinel; ``sigma`` is the largest symbol value
    (0 for the text that is just the sentinel).
    """

    data: bytes

    def __post_init__(self):
        if not self.data or self.data[-1] != SENTINEL:
            raise InvalidParameter("text must end with the sentinel byte")
        if SENTINEL in self.data[:-1]:
            raise SentinelCollision("sentinel byte occurs before the end")

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def sigma(self) -> int:
        return max(self.data) if len(self.data) > 1 else 0

    @property
    def distinct_symbols(self) -> int:
        """Number of distinct symbols, the sentinel not counted."""
        return len(set(self.data)) - 1

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class FamilySpec:
    """Parameters selecting one member of a generated string family."""

    family: str  # "fib" | "fib-alt" | "debruijn" | "planted"
    k: int = 0
    sigma: int = 0

    def generate(self) -> Text:
        if self.family == "fib":
            return fibonacci_word(self.k)
        if self.family == "fib-alt":
            return fibonacci_word(self.k, variant="alt")
        if self.family == "debruijn":
            return de_bruijn(self.k, self.sigma)
        if self.family == "planted":
            return planted_text(self.sigma)
        raise InvalidParameter(f"unknown family {self.family!r}")

    @property
    def name(self) -> str:
        if self.family in ("fib", "fib-alt"):
            return f"{self.family}-k{self.k}"
        if self.family == "debruijn":
            return f"debruijn-k{self.k}-s{self.sigma}"
        return f"{self.family}-s{self.sigma}"


def load_text(raw: bytes | str, *, budget: int = BYTE_BUDGET) -> Text:
    """Wrap raw input as a Text, appending the sentinel."""
    if isinstance(raw, str):
        raw = raw.encode("utf-8")
    if len(raw) + 1 > budget:
        raise SizeLimit(f"input of {len(raw)} symbols exceeds budget {budget}")
    if SENTINEL in raw:
        raise SentinelCollision("input contains the reserved byte 0")
    return Text(bytes(raw) + bytes([SENTINEL]))


A, B = 1, 2  # Fibonacci letters


def fibonacci_word(k: int, variant: str = "standard", *, budget: int = BYTE_BUDGET) -> Text:
    """k-th Fibonacci word plus sentinel.

    standard: F_1 = b, F_2 = a, F_k = F_{k-1} F_{k-2}.
    alt:      F_1 = a, F_2 = ba, F_k = F_{k-2} F_{k-1}  (the convention some
              benchmark files use; same language of factors, different
              indexing).
    """
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k}")
    if fib_number(k + (1 if variant == "alt" else 0)) + 1 > budget:
        raise SizeLimit(f"F_{k} exceeds budget {budget}")
    if variant == "standard":
        prev, cur = bytes([B]), bytes([A])  # F_1, F_2
        if k == 1:
            return Text(prev + bytes([SENTINEL]))
        for _ in range(k - 2):
            prev, cur = cur, cur + prev
    elif variant == "alt":
        prev, cur = bytes([A]), bytes([B, A])  # F_1, F_2
        if k == 1:
            return Text(prev + bytes([SENTINEL]))
        for _ in range(k - 2):
            prev, cur = cur, prev + cur
    else:
        raise InvalidParameter(f"unknown variant {variant!r}")
    return Text(cur + bytes([SENTINEL]))


def de_bruijn(k: int, sigma: int, *, budget: int = BYTE_BUDGET) -> Text:
    """Shortest linear sequence containing every k-mer over 1..sigma once.

    Standard Lyndon-word concatenation; the cyclic sequence of length
    sigma^k is unrolled by appending its first k-1 symbols, for a total
    length of sigma^k + k - 1 (plus the sentinel).
    """
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k}")
    if sigma < 2 or sigma > 255:
        raise InvalidParameter(f"sigma must be in 2..255, got {sigma}")
    total = sigma**k + k - 1
    if total + 1 > budget:
        raise SizeLimit(f"de Bruijn text of {total} symbols exceeds budget {budget}")

    a = [0] * (k + 1)
    seq = bytearray()

    def db(t: int, p: int):
        if t > k:
            if k % p == 0:
                seq.extend(x + 1 for x in a[1 : p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, sigma):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    assert len(seq) == sigma**k
    seq.extend(seq[: k - 1])
    seq.append(SENTINEL)
    return Text(bytes(seq))


def planted_text(sigma: int, *, budget: int = BYTE_BUDGET) -> Text:
    """Concatenation S_1 ... S_sigma of edited copies of (2 3 ... sigma 1)^3.

    S_1 is the periodic block; S_{i+1} is S_i with one further position,
    3*sigma - 3*i (1-based), changed to the fresh symbol sigma+1.  Edits
    accumulate, so S_sigma holds the new symbol at every third position.
    Length 3*sigma^2 plus sentinel.  Requires sigma >= 4 and sigma not a
    multiple of 3 (the edits must never land on a 1).
    """
    if sigma < 4:
        raise InvalidParameter(f"sigma must be >= 4, got {sigma}")
    if sigma % 3 == 0:
        raise InvalidParameter("sigma must not be a multiple of 3")
    if sigma + 1 > 255:
        raise InvalidParameter(f"sigma+1 = {sigma + 1} does not fit in a byte")
    if 3 * sigma * sigma + 1 > budget:
        raise SizeLimit(f"planted text of {3 * sigma * sigma} symbols exceeds budget {budget}")

    block = bytes(list(range(2, sigma + 1)) + [1])
    cur = bytearray(block * 3)
    out = bytearray(cur)
    for i in range(1, sigma):
        cur[3 * sigma - 3 * i - 1] = sigma + 1  # 0-based
        out.extend(cur)
    out.append(SENTINEL)
    return Text(bytes(out))


def render(t: Text) -> str:
    """Human-readable form: 1->a, 2->b for small alphabets, '$' sentinel."""
    if t.sigma <= 2:
        table = {SENTINEL: "$", A: "a", B: "b"}
        return "".join(table[c] for c in t.data)
    return " ".join("$" if c == SENTINEL else str(c) for c in t.data)
