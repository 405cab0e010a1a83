"""Small permutation-group toolkit used as a ground-truth oracle.

Permutations are image tuples on {0, ..., n-1}; ``a * b`` means "apply a,
then b".  Group orders come from a deterministic Schreier-Sims construction.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass
from operator import itemgetter
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .certify import Certificate, Flagged, PrimeOrderPair, PrimePowerPair
from .primes import ResourceError

EXHAUSTIVE_MAX_N = 12
EXHAUSTIVE_MAX_CLASS = 10**7
_DEDUP_MAX_CENTRALIZER = 5000
_DEDUP_MAX_CLASS = 10**6

Perm = Tuple[int, ...]


def _mul(a: Perm, b: Perm) -> Perm:
    if len(a) < 2:
        return a
    return itemgetter(*a)(b)


def _inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def _conj(g: Perm, s: Perm) -> Perm:
    """s^-1 g s, i.e. g with every point relabelled through s."""
    out = [0] * len(g)
    for x, y in enumerate(g):
        out[s[x]] = s[y]
    return tuple(out)


def _parity(a: Perm) -> int:
    seen = [False] * len(a)
    odd = 0
    for i in range(len(a)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = a[j]
                length += 1
            odd += length - 1
    return odd % 2


def _cycle_lengths(a: Perm) -> List[int]:
    seen = [False] * len(a)
    out = []
    for i in range(len(a)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = a[j]
                length += 1
            out.append(length)
    return sorted(out, reverse=True)


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection on 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for k, x in enumerate(cyc):
                img[x] = cyc[(k + 1) % len(cyc)]
        return cls(img)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(_mul(self.images, other.images))

    def inverse(self) -> "Permutation":
        return Permutation(_inv(self.images))

    def conjugate(self, s: "Permutation") -> "Permutation":
        return Permutation(_conj(self.images, s.images))

    def is_even(self) -> bool:
        return _parity(self.images) == 0

    def cycle_type(self) -> "CycleType":
        return CycleType(_cycle_lengths(self.images))

    def order(self) -> int:
        return math.lcm(*_cycle_lengths(self.images)) if self.images else 1

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation<{self.degree}>{body or '()'}"


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths, fixed points included, largest first."""

    parts: Tuple[int, ...]

    def __init__(self, parts: Iterable[int]):
        parts = tuple(sorted((int(x) for x in parts), reverse=True))
        if not parts or parts[-1] < 1:
            raise ValueError(f"cycle lengths must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "CycleType":
        return cls(int(x) for x in text.replace(" ", "").split(",") if x)

    @classmethod
    def of_order(cls, n: int, p: int, t: int) -> "CycleType":
        return cls([p] * t + [1] * (n - p * t))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def is_even(self) -> bool:
        return sum(x - 1 for x in self.parts) % 2 == 0

    def order(self) -> int:
        return math.lcm(*self.parts)

    def centralizer_order(self) -> int:
        out = 1
        for length, k in Counter(self.parts).items():
            out *= length**k * math.factorial(k)
        return out

    def class_size(self) -> int:
        """Size of the S_n conjugacy class."""
        return math.factorial(self.n) // self.centralizer_order()

    def _layout(self) -> List[List[int]]:
        cycles, start = [], 0
        for length in self.parts:
            cycles.append(list(range(start, start + length)))
            start += length
        return cycles

    def representative(self) -> Permutation:
        return Permutation.from_cycles(self.n, *self._layout())

    def iter_class(self) -> Iterator[Perm]:
        """Every permutation of this cycle type, each exactly once."""
        n = self.n
        counts = Counter(self.parts)
        img = list(range(n))

        def rec(free: List[int]) -> Iterator[Perm]:
            if not free:
                yield tuple(img)
                return
            first, rest = free[0], free[1:]
            for length in sorted(counts):
                if counts[length] == 0 or length - 1 > len(rest):
                    continue
                counts[length] -= 1
                for others in itertools.permutations(rest, length - 1):
                    cyc = (first,) + others
                    for k, x in enumerate(cyc):
                        img[x] = cyc[(k + 1) % length]
                    used = set(others)
                    yield from rec([x for x in rest if x not in used])
                counts[length] += 1
            img[first] = first

        return rec(list(range(n)))

    def centralizer_elements(self, cap: int) -> Optional[List[Perm]]:
        """Elements of the centralizer of ``representative()``, or None if
        its order exceeds ``cap``."""
        if self.centralizer_order() > cap:
            return None
        n = self.n
        cycles = self._layout()
        gens = []
        for cyc in cycles:
            if len(cyc) > 1:
                gens.append(Permutation.from_cycles(n, cyc).images)
        for c1, c2 in zip(cycles, cycles[1:]):
            if len(c1) == len(c2):
                img = list(range(n))
                for x, y in zip(c1, c2):
                    img[x], img[y] = y, x
                gens.append(tuple(img))
        return _closure(gens, n)


def _closure(gens: Sequence[Perm], n: int) -> List[Perm]:
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = _mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return sorted(seen)


# -- Schreier-Sims -----------------------------------------------------------


def _moved_point(g: Perm) -> int:
    for i, x in enumerate(g):
        if i != x:
            return i
    raise ValueError("identity moves no point")


def _orbit_transversal(b: int, gens: Sequence[Perm], n: int) -> Dict[int, Tuple[Perm, Perm]]:
    """point -> (u, u^-1) with b^u = point."""
    identity = tuple(range(n))
    inverses = [_inv(g) for g in gens]
    table = {b: (identity, identity)}
    queue = [b]
    for x in queue:
        u, ui = table[x]
        for g, gi in zip(gens, inverses):
            y = g[x]
            if y not in table:
                table[y] = (_mul(u, g), _mul(gi, ui))
                queue.append(y)
    return table


class GroupBSGS:
    """Base and strong generating set built by deterministic Schreier-Sims."""

    def __init__(self, gens: Sequence[Perm], n: int):
        self.n = n
        identity = tuple(range(n))
        gens = list(dict.fromkeys(g for g in gens if g != identity))
        base: List[int] = []
        for g in gens:
            if all(g[b] == b for b in base):
                base.append(_moved_point(g))
        strong = [[g for g in gens if all(g[b] == b for b in base[:l])]
                  for l in range(len(base))]
        trans = [_orbit_transversal(base[l], strong[l], n) for l in range(len(base))]
        self.base, self.strong, self.trans = base, strong, trans
        i = len(base) - 1
        while i >= 0:
            hit = self._nonsifting_schreier(i)
            if hit is None:
                i -= 1
                continue
            h, j = hit
            if j == len(self.base):
                self.base.append(_moved_point(h))
                self.strong.append([])
                self.trans.append({})
            for l in range(i + 1, j + 1):
                self.strong[l].append(h)
                self.trans[l] = _orbit_transversal(self.base[l], self.strong[l], n)
            i = j

    def _nonsifting_schreier(self, i: int):
        table = self.trans[i]
        for beta, (u, _) in list(table.items()):
            for x in self.strong[i]:
                ux = _mul(u, x)
                s = _mul(ux, table[x[beta]][1])
                h, j = self.strip(s, i + 1)
                if j < len(self.base) or any(h[k] != k for k in range(self.n)):
                    return h, j
        return None

    def strip(self, g: Perm, start: int = 0) -> Tuple[Perm, int]:
        for l in range(start, len(self.base)):
            x = g[self.base[l]]
            entry = self.trans[l].get(x)
            if entry is None:
                return g, l
            g = _mul(g, entry[1])
        return g, len(self.base)

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def contains(self, g: Perm) -> bool:
        h, j = self.strip(tuple(g))
        return j == len(self.base) and h == tuple(range(self.n))


def _as_tuples(gens, n: int) -> List[Perm]:
    out = []
    for g in gens:
        g = g.images if isinstance(g, Permutation) else tuple(g)
        if len(g) != n or sorted(g) != list(range(n)):
            raise ValueError(f"generator {g} is not a permutation of {n} points")
        out.append(g)
    return out


def group_order(gens, n: int) -> int:
    """Exact order of the group generated by ``gens`` on n points."""
    if n < 1 or not gens:
        raise ValueError("need n >= 1 and at least one generator")
    return GroupBSGS(_as_tuples(gens, n), n).order()


def _is_transitive(gens: Sequence[Perm], n: int) -> bool:
    seen = {0}
    queue = [0]
    for x in queue:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


class _PartialChain:
    """Stabilizer chain grown from sampled elements, with incremental orbits.

    Level l is acted on by every generator stored at levels >= l.
    """

    def __init__(self, n: int):
        self.n = n
        self.identity = tuple(range(n))
        self.base: List[int] = []
        self.gens: List[List[Tuple[Perm, Perm]]] = []
        self.trans: List[Dict[int, Tuple[Perm, Perm]]] = []

    def order_bound(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def _extend(self, k: int, g: Perm, gi: Perm) -> None:
        table = self.trans[k]
        acting = [pair for level in self.gens[k:] for pair in level]
        queue = []
        for x in list(table):
            y = g[x]
            if y not in table:
                u, ui = table[x]
                table[y] = (_mul(u, g), _mul(gi, ui))
                queue.append(y)
        for x in queue:
            u, ui = table[x]
            for h, hi in acting:
                y = h[x]
                if y not in table:
                    table[y] = (_mul(u, h), _mul(hi, ui))
                    queue.append(y)

    def sift_in(self, g: Perm) -> bool:
        """Add the sifted residue of g; False if g already sifts to 1."""
        level = len(self.base)
        for l, b in enumerate(self.base):
            entry = self.trans[l].get(g[b])
            if entry is None:
                level = l
                break
            g = _mul(g, entry[1])
        else:
            if g == self.identity:
                return False
            b = _moved_point(g)
            self.base.append(b)
            self.gens.append([])
            self.trans.append({b: (self.identity, self.identity)})
        gi = _inv(g)
        self.gens[level].append((g, gi))
        for k in range(level + 1):
            self._extend(k, g, gi)
        return True


def _random_lower_bound(gens: Sequence[Perm], n: int, target: int,
                        rng: random.Random, patience: int) -> bool:
    """Sift random elements into a partial stabilizer chain.

    Partial basic orbits are subsets of the true ones, so their product is a
    lower bound on the group order: returning True proves |G| >= target.
    """
    chain = _PartialChain(n)
    for g in gens:
        chain.sift_in(g)
    pool = list(gens) * max(1, 8 // len(gens) + 1)
    acc = chain.identity
    for _ in range(40):
        i, j = rng.sample(range(len(pool)), 2)
        pool[i] = _mul(pool[i], pool[j])
    fails = 0
    while chain.order_bound() < target:
        if fails >= patience:
            return False
        i, j = rng.sample(range(len(pool)), 2)
        pool[i] = _mul(pool[i], pool[j]) if rng.random() < 0.5 else _mul(pool[j], pool[i])
        acc = _mul(acc, pool[i])
        fails = 0 if chain.sift_in(acc) else fails + 1
    return True


def _generates_alternating(gens: Sequence[Perm], n: int) -> bool:
    # All gens even, so <gens> <= A_n and equality is an order comparison.
    if n <= 2:
        return True
    if not _is_transitive(gens, n):
        return False
    target = math.factorial(n) // 2
    if _random_lower_bound(gens, n, target, random.Random(0x5EED), patience=30):
        return True
    return GroupBSGS(list(gens), n).order() == target


def is_alternating(gens, n: int) -> bool:
    """True iff the even permutations ``gens`` generate all of A_n."""
    gens = _as_tuples(gens, n)
    if any(_parity(g) for g in gens):
        raise ValueError("is_alternating requires even generators")
    return _generates_alternating(gens, n)


# -- invariable generation ---------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # proven-true | refuted | sampled-no-refutation
    witness: Optional[Tuple[Permutation, Permutation]] = None
    checked: int = 0
    seed: Optional[int] = None

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"


def _check_types(n: int, ct1: CycleType, ct2: CycleType) -> None:
    if n < 5:
        raise ValueError("invariable generation oracle needs n >= 5")
    for ct in (ct1, ct2):
        if ct.n != n:
            raise ValueError(f"cycle type {ct.parts} does not sum to {n}")
        if not ct.is_even():
            raise ValueError(f"cycle type {ct.parts} is odd")
        if ct.order() == 1:
            raise ValueError("cycle types must have order > 1")


def invariably_generates(n: int, ct1: CycleType, ct2: CycleType,
                         mode: str = "exhaustive", samples: int = 1000,
                         seed: int = 0) -> Verdict:
    """Decide whether every conjugate pair of the two types generates A_n.

    Exhaustive mode fixes a representative of one type and runs over the whole
    S_n-class of the other, which suffices because <g1^x, g2^y> is conjugate
    to <g1^(x y^-1), g2>.  It enumerates whichever class is smaller.  Sample
    mode draws independent uniform conjugates and can only refute.
    """
    _check_types(n, ct1, ct2)
    rep1, rep2 = ct1.representative().images, ct2.representative().images
    if mode == "sample":
        rng = random.Random(seed)
        pts = list(range(n))
        for k in range(samples):
            s1 = pts[:]
            rng.shuffle(s1)
            s2 = pts[:]
            rng.shuffle(s2)
            g1, g2 = _conj(rep1, tuple(s1)), _conj(rep2, tuple(s2))
            if not _generates_alternating((g1, g2), n):
                return Verdict("refuted", (Permutation(g1), Permutation(g2)), k + 1, seed)
        return Verdict("sampled-no-refutation", None, samples, seed)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if n > EXHAUSTIVE_MAX_N:
        raise ResourceError(f"exhaustive mode supports n <= {EXHAUSTIVE_MAX_N}")
    swap = ct2.class_size() < ct1.class_size()
    varying, fixed_type = (ct2, ct1) if swap else (ct1, ct2)
    if varying.class_size() > EXHAUSTIVE_MAX_CLASS:
        raise ResourceError(f"class of {varying.parts} too large to enumerate")
    fixed = fixed_type.representative().images
    cent = None
    if varying.class_size() <= _DEDUP_MAX_CLASS:
        cent = fixed_type.centralizer_elements(_DEDUP_MAX_CENTRALIZER)
    seen = set()
    checked = 0
    for g in varying.iter_class():
        if cent is not None:
            if g in seen:
                continue
            # c centralizes `fixed`, so <g^c, fixed> = <g, fixed>^c.
            seen.update(_conj(g, c) for c in cent)
        checked += 1
        if not _generates_alternating((g, fixed), n):
            pair = (g, fixed) if not swap else (fixed, g)
            return Verdict("refuted", (Permutation(pair[0]), Permutation(pair[1])), checked)
    return Verdict("proven-true", None, checked)


def _partitions(n: int, allowed: Sequence[int]) -> Iterator[List[int]]:
    allowed = sorted(set(allowed), reverse=True)

    def rec(rem: int, idx: int) -> Iterator[List[int]]:
        if rem == 0:
            yield []
            return
        for k in range(idx, len(allowed)):
            part = allowed[k]
            if part <= rem:
                for tail in rec(rem - part, k):
                    yield [part] + tail

    return rec(n, 0)


def even_types_of_order(n: int, order_base: int, exponent: int) -> List[CycleType]:
    """Even cycle types on n points whose order is exactly order_base**exponent
    (order_base prime)."""
    q = order_base**exponent
    allowed = [order_base**k for k in range(exponent + 1)]
    out = []
    for parts in _partitions(n, allowed):
        ct = CycleType(parts)
        if q in parts and ct.is_even():
            out.append(ct)
    return out


def cert_to_witnesses(cert: Certificate) -> List[Tuple[CycleType, CycleType]]:
    """Candidate witness cycle-type pairs for a certificate."""
    if isinstance(cert, Flagged):
        raise ValueError("Flagged results have no witnesses")
    if isinstance(cert, PrimeOrderPair):
        n = cert.n
        return [(CycleType([cert.p] * (n // cert.p)),
                 CycleType([cert.r] * cert.t + [1] * cert.u))]
    if isinstance(cert, PrimePowerPair):
        firsts = even_types_of_order(cert.n, cert.p, cert.a)
        seconds = even_types_of_order(cert.n, cert.r, 1)
        return [(a, b) for a in firsts for b in seconds]
    raise TypeError(f"not a certificate: {cert!r}")
