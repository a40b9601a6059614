"""The infinitary operation ω on X = Z2^N x Z, on a decidable fragment of X^N.

Elements of X with finite support are :class:`OmegaElement` values.  A
sequence in X^N is described by a finite prefix followed by a tail that is
either constant or a constant plus a moving unit vector delta_n.  That class
is closed under pointwise addition and ω is decidable on it.
"""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from selab.errors import InputError
from selab.theorems import FAILS, HOLDS, CheckReport


@dataclass(frozen=True)
class OmegaElement:
    """(x, z) with x in Z2^N given by its finite support and z an integer."""

    support: frozenset[int] = frozenset()
    z: int = 0

    def __post_init__(self):
        support = frozenset(int(i) for i in self.support)
        if any(i < 0 for i in support):
            raise InputError("support indices must be natural numbers")
        object.__setattr__(self, "support", support)

    def __add__(self, other: OmegaElement) -> OmegaElement:
        return OmegaElement(self.support ^ other.support, self.z + other.z)

    def __neg__(self) -> OmegaElement:
        return OmegaElement(self.support, -self.z)

    def __sub__(self, other: OmegaElement) -> OmegaElement:
        return self + (-other)

    def flip(self, n: int) -> OmegaElement:
        return OmegaElement(self.support ^ {n}, self.z)

    @property
    def is_zero(self) -> bool:
        return not self.support and self.z == 0

    def __repr__(self):
        return f"({sorted(self.support)}, {self.z})"

    def __lt__(self, other):
        return (sorted(self.support), self.z) < (sorted(other.support), other.z)


ZERO = OmegaElement()


def elem(support: Iterable[int] = (), z: int = 0) -> OmegaElement:
    return OmegaElement(frozenset(support), z)


@dataclass(frozen=True)
class Constant:
    e: OmegaElement

    def term(self, n: int) -> OmegaElement:
        return self.e


@dataclass(frozen=True)
class ShiftedDelta:
    """Tail whose n-th term is e with coordinate n flipped."""

    e: OmegaElement

    def term(self, n: int) -> OmegaElement:
        return self.e.flip(n)


Tail = Constant | ShiftedDelta


@dataclass(frozen=True, eq=False)
class SeqDescriptor:
    prefix: tuple[OmegaElement, ...]
    tail: Tail

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if not isinstance(self.tail, (Constant, ShiftedDelta)):
            raise InputError(f"unknown tail {self.tail!r}")

    def term(self, n: int) -> OmegaElement:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail.term(n)

    def unfold(self, length: int) -> SeqDescriptor:
        """Same sequence with the prefix extended to at least ``length`` terms."""
        extra = tuple(self.tail.term(n) for n in range(len(self.prefix), length))
        return SeqDescriptor(self.prefix + extra, self.tail)

    def normalized(self) -> SeqDescriptor:
        """Shortest prefix describing the same sequence."""
        prefix = list(self.prefix)
        while prefix and prefix[-1] == self.tail.term(len(prefix) - 1):
            prefix.pop()
        return SeqDescriptor(tuple(prefix), self.tail)

    def __eq__(self, other):
        if not isinstance(other, SeqDescriptor):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.prefix == b.prefix and a.tail == b.tail

    def __hash__(self):
        n = self.normalized()
        return hash((n.prefix, n.tail))

    def __add__(self, other: SeqDescriptor) -> SeqDescriptor:
        return seq_add(self, other)

    def __repr__(self):
        return format_descriptor(self)


def const(e: OmegaElement = ZERO) -> SeqDescriptor:
    return SeqDescriptor((), Constant(e))


def sdelta(e: OmegaElement = ZERO) -> SeqDescriptor:
    return SeqDescriptor((), ShiftedDelta(e))


def seq_add(d1: SeqDescriptor, d2: SeqDescriptor) -> SeqDescriptor:
    """Pointwise sum; the two moving deltas cancel when both tails have one."""
    n = max(len(d1.prefix), len(d2.prefix))
    a, b = d1.unfold(n), d2.unfold(n)
    prefix = tuple(x + y for x, y in zip(a.prefix, b.prefix))
    e = a.tail.e + b.tail.e
    moving = isinstance(a.tail, ShiftedDelta) + isinstance(b.tail, ShiftedDelta)
    tail = ShiftedDelta(e) if moving == 1 else Constant(e)
    return SeqDescriptor(prefix, tail).normalized()


def seq_neg(d: SeqDescriptor) -> SeqDescriptor:
    tail = type(d.tail)(-d.tail.e)
    return SeqDescriptor(tuple(-x for x in d.prefix), tail)


def omega_eval(d: SeqDescriptor) -> OmegaElement:
    """ω: zero when the set of terms is finite or every integer part is zero, else (0, 1).

    A constant tail takes one value, so the value set is finite.  A moving
    delta makes every tail term distinct, so the value set is infinite and
    the answer depends only on the integer parts.
    """
    if isinstance(d.tail, Constant):
        return ZERO
    if d.tail.e.z == 0 and all(x.z == 0 for x in d.prefix):
        return ZERO
    return OmegaElement(frozenset(), 1)


def member_Ni(e: OmegaElement, i: int) -> bool:
    """e lies in N_i: integer part zero and no coordinate at or beyond i."""
    return e.z == 0 and all(m < i for m in e.support)


def descriptor_in_Ni(d: SeqDescriptor, i: int) -> bool:
    """Every term of d lies in N_i.  A moving delta eventually leaves every N_i."""
    if isinstance(d.tail, ShiftedDelta):
        return False
    return member_Ni(d.tail.e, i) and all(member_Ni(x, i) for x in d.prefix)


# -- checks ----------------------------------------------------------------------


def verify_witness(
    alpha: SeqDescriptor | None = None,
    beta: SeqDescriptor | None = None,
    max_i: int = 64,
) -> CheckReport:
    """ω(α+β) - ω(α) lies outside every N_i although each β_n lies in N_{n+1}.

    Defaults to α = constant (0, 1) and β = (delta_n, 0).  The report holds
    when the difference is (0, 1) and is excluded from N_i for i ≤ max_i.
    """
    start = time.perf_counter()
    alpha = const(elem((), 1)) if alpha is None else alpha
    beta = sdelta() if beta is None else beta
    diff = omega_eval(seq_add(alpha, beta)) - omega_eval(alpha)
    inst = f"alpha={format_descriptor(alpha)}; beta={format_descriptor(beta)}"
    in_some = [i for i in range(max_i + 1) if member_Ni(diff, i)]
    ok = diff == OmegaElement(frozenset(), 1) and not in_some
    millis = (time.perf_counter() - start) * 1000
    detail = f"difference {format_element(diff)}"
    if ok:
        return CheckReport("omega_witness", inst, HOLDS, None, millis, detail)
    return CheckReport("omega_witness", inst, FAILS, {"difference": format_element(diff), "in_N_i": in_some[:5]}, millis, detail)


def verify_Ni_invariance(i: int, samples: Sequence[tuple[SeqDescriptor, SeqDescriptor]]) -> CheckReport:
    """ω(α+β) = ω(α) whenever every term of β lies in N_i."""
    start = time.perf_counter()
    for alpha, beta in samples:
        if not descriptor_in_Ni(beta, i):
            raise InputError(f"{format_descriptor(beta)} has terms outside N_{i}")
        if omega_eval(seq_add(alpha, beta)) != omega_eval(alpha):
            witness = {"alpha": format_descriptor(alpha), "beta": format_descriptor(beta)}
            return CheckReport("omega_Ni_invariance", f"i={i}", FAILS, witness, (time.perf_counter() - start) * 1000)
    return CheckReport(
        "omega_Ni_invariance", f"i={i}", HOLDS, None, (time.perf_counter() - start) * 1000, f"{len(samples)} samples"
    )


def random_element(rng: random.Random, width: int, z_range: int = 3) -> OmegaElement:
    support = {m for m in range(width) if rng.random() < 0.4}
    return OmegaElement(frozenset(support), rng.randint(-z_range, z_range))


def random_descriptor(rng: random.Random, width: int = 8, max_prefix: int = 6) -> SeqDescriptor:
    prefix = tuple(random_element(rng, width) for _ in range(rng.randint(0, max_prefix)))
    e = random_element(rng, width)
    if rng.random() < 0.5:
        e = OmegaElement(e.support, 0)
    tail = Constant(e) if rng.random() < 0.5 else ShiftedDelta(e)
    return SeqDescriptor(prefix, tail)


def random_Ni_descriptor(rng: random.Random, i: int, max_prefix: int = 6) -> SeqDescriptor:
    def pick() -> OmegaElement:
        return OmegaElement(frozenset(m for m in range(i) if rng.random() < 0.5), 0)

    return SeqDescriptor(tuple(pick() for _ in range(rng.randint(0, max_prefix))), Constant(pick()))


def Ni_samples(i: int, count: int = 1000, seed: int = 0xC0FFEE) -> list[tuple[SeqDescriptor, SeqDescriptor]]:
    rng = random.Random(f"{seed}:{i}")
    return [(random_descriptor(rng, width=i + 4), random_Ni_descriptor(rng, i)) for _ in range(count)]


# -- text syntax -------------------------------------------------------------------


def format_element(e: OmegaElement) -> str:
    return "{" + ",".join(str(m) for m in sorted(e.support)) + ";" + str(e.z) + "}"


def format_descriptor(d: SeqDescriptor) -> str:
    kind = "const" if isinstance(d.tail, Constant) else "sdelta"
    tail = kind + format_element(d.tail.e)
    if not d.prefix:
        return tail
    return "prefix[" + ",".join(format_element(x) for x in d.prefix) + "]+" + tail


_ELEM = r"\{\s*([0-9,\s]*?)\s*;\s*(-?\d+)\s*\}"
_ELEM_RE = re.compile(_ELEM)
_TAIL_RE = re.compile(r"(const|sdelta)\s*" + _ELEM + r"\s*$")
_PREFIX_RE = re.compile(r"\s*prefix\s*\[(.*)\]\s*\+\s*(.*)$", re.S)


def parse_element(text: str) -> OmegaElement:
    m = _ELEM_RE.fullmatch(text.strip())
    if not m:
        raise InputError(f"malformed element {text!r}; expected {{i,j,...;z}}")
    support = [int(s) for s in m.group(1).replace(" ", "").split(",") if s]
    return OmegaElement(frozenset(support), int(m.group(2)))


def parse_descriptor(text: str) -> SeqDescriptor:
    """Parse ``const{..;z}``, ``sdelta{..;z}`` or ``prefix[{..;z},...]+tail``."""
    prefix: tuple[OmegaElement, ...] = ()
    m = _PREFIX_RE.match(text)
    if m:
        body = m.group(1).strip()
        prefix = tuple(parse_element(x.group(0)) for x in _ELEM_RE.finditer(body))
        if _ELEM_RE.sub("", body).replace(",", "").strip():
            raise InputError(f"malformed prefix {body!r}")
        text = m.group(2)
    t = _TAIL_RE.match(text.strip())
    if not t:
        raise InputError(f"malformed tail {text!r}; expected const{{...;z}} or sdelta{{...;z}}")
    e = parse_element(text.strip()[len(t.group(1)):])
    tail = Constant(e) if t.group(1) == "const" else ShiftedDelta(e)
    return SeqDescriptor(prefix, tail)
