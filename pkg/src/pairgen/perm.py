"""Permutations and certified stabilizer chains.

Conventions used across the package:

* Points are 0-based everywhere in the API; they appear 1-based only in
  file formats and printed cycle notation.
* Composition reads left to right: ``compose(p, q)`` maps a point c to
  ``q(p(c))``, so ``p * q`` means "apply p, then q".  In image-array form
  the product is ``q.images[p.images]``.
* A stabilizer chain returned by ``build_chain`` is always fully verified:
  ``group_order`` is the exact order of the generated group, certified by
  sifting every Schreier generator.  The randomized construction phase only
  accelerates that deterministic check, it never replaces it.
"""

from __future__ import annotations

import math
import random
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_DEGREE = 1 << 24

__all__ = [
    "MAX_DEGREE",
    "Permutation",
    "StabilizerChain",
    "EnumerationLimitError",
    "identity",
    "compose",
    "inverse",
    "power",
    "element_order",
    "build_chain",
    "contains",
    "enumerate_elements",
    "random_element",
]


class EnumerationLimitError(RuntimeError):
    """Raised when a full enumeration would exceed the caller's limit."""

    def __init__(self, order: int, limit: int):
        self.order = order
        self.limit = limit
        super().__init__(
            f"group order {order} exceeds the enumeration limit {limit}"
        )


def _as_images(images) -> np.ndarray:
    """Validate an image array: a bijection on 0..d-1, d <= MAX_DEGREE."""
    arr = np.array(images, dtype=np.int64, copy=True)
    if arr.ndim != 1:
        raise ValueError("permutation images must be a 1-dimensional sequence")
    d = arr.shape[0]
    if d == 0:
        raise ValueError("permutation degree must be at least 1")
    if d > MAX_DEGREE:
        raise ValueError(f"degree {d} exceeds the supported cap {MAX_DEGREE}")
    if arr.min() < 0 or arr.max() >= d:
        raise ValueError("permutation images out of range")
    seen = np.zeros(d, dtype=bool)
    seen[arr] = True
    if not seen.all():
        raise ValueError("permutation images are not a bijection")
    out = arr.astype(np.int32)
    out.setflags(write=False)
    return out


def _order_of(images: Sequence[int]) -> int:
    """Order of a permutation: lcm of its cycle lengths."""
    n = len(images)
    seen = bytearray(n)
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        c = start
        while not seen[c]:
            seen[c] = 1
            c = images[c]
            length += 1
        if length > 1:
            order = order * length // math.gcd(order, length)
    return order


class Permutation:
    """An immutable permutation of 0..degree-1, stored as an image array."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Iterable[int]):
        self._img = _as_images(images)
        self._hash = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        # trusted constructor: arr must already be a validated int32 bijection
        p = cls.__new__(cls)
        arr.setflags(write=False)
        p._img = arr
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._wrap(np.arange(degree, dtype=np.int32))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from disjoint cycles of 0-based points."""
        img = np.arange(degree, dtype=np.int32)
        touched = set()
        for cyc in cycles:
            for a in cyc:
                if a in touched:
                    raise ValueError(f"point {a} repeated across cycles")
                touched.add(a)
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                if not (0 <= a < degree and 0 <= b < degree):
                    raise ValueError("cycle point out of range")
                img[a] = b
        return cls._wrap(img)

    @property
    def images(self) -> np.ndarray:
        """Read-only image array: point c maps to images[c]."""
        return self._img

    @property
    def degree(self) -> int:
        return self._img.shape[0]

    def __call__(self, point: int) -> int:
        return int(self._img[point])

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, n: int) -> "Permutation":
        return power(self, n)

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._img)
        inv[self._img] = np.arange(self.degree, dtype=np.int32)
        return Permutation._wrap(inv)

    def order(self) -> int:
        return _order_of(self._img.tolist())

    def is_identity(self) -> bool:
        return bool((self._img == np.arange(self.degree, dtype=np.int32)).all())

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles as tuples of 0-based points, smallest point first."""
        img = self._img.tolist()
        seen = bytearray(self.degree)
        out = []
        for start in range(self.degree):
            if seen[start] or img[start] == start:
                seen[start] = 1
                continue
            cyc = []
            c = start
            while not seen[c]:
                seen[c] = 1
                cyc.append(c)
                c = img[c]
            out.append(tuple(cyc))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.degree == other.degree and bool((self._img == other._img).all())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._img.tobytes())
        return self._hash

    def __str__(self) -> str:
        # printed cycle notation is 1-based, matching the file formats
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + ",".join(str(a + 1) for a in cyc) + ")" for cyc in cycs)

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 60:
            text = text[:57] + "..."
        return f"<Permutation degree {self.degree}: {text}>"


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Left-to-right product: the result maps c to q(p(c))."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")
    return Permutation._wrap(q.images[p.images])


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def power(p: Permutation, n: int) -> Permutation:
    """n-th power by binary exponentiation; n may be negative or zero."""
    if n < 0:
        return power(p.inverse(), -n)
    result = np.arange(p.degree, dtype=np.int32)
    base = p.images
    while n:
        if n & 1:
            result = base[result]
        base = base[base]
        n >>= 1
    return Permutation._wrap(result)


def element_order(p: Permutation) -> int:
    return p.order()


# ---------------------------------------------------------------------------
# Stabilizer chains.
#
# Raw image arrays (np.int32 rows) are used throughout the chain internals;
# Permutation objects appear only at the public boundary.  For any partially
# built chain the product of the orbit lengths counts distinct elements of
# the generated group (the base images separate transversal products), so it
# is a certified lower bound for the order; after deterministic verification
# it is the exact order.
# ---------------------------------------------------------------------------


class _Level:
    __slots__ = ("point", "orbit", "tpos", "reps", "ireps", "size", "capacity",
                 "processed")

    def __init__(self, point: int, degree: int, ident: np.ndarray):
        self.point = point
        self.orbit = [point]
        self.tpos = np.full(degree, -1, dtype=np.int32)
        self.tpos[point] = 0
        self.capacity = 16
        self.reps = np.empty((self.capacity, degree), dtype=np.int32)
        self.ireps = np.empty((self.capacity, degree), dtype=np.int32)
        self.reps[0] = ident
        self.ireps[0] = ident
        self.size = 1
        self.processed = set()  # (orbit index, generator serial) pairs verified

    def _grow(self, need: int, degree: int) -> None:
        while self.capacity < need:
            self.capacity *= 2
        reps = np.empty((self.capacity, degree), dtype=np.int32)
        ireps = np.empty((self.capacity, degree), dtype=np.int32)
        reps[: self.size] = self.reps[: self.size]
        ireps[: self.size] = self.ireps[: self.size]
        self.reps = reps
        self.ireps = ireps

    def append(self, point: int, rep: np.ndarray, degree: int) -> None:
        if self.size == self.capacity:
            self._grow(self.size + 1, degree)
        self.tpos[point] = self.size
        self.reps[self.size] = rep
        irep = np.empty_like(rep)
        irep[rep] = np.arange(degree, dtype=np.int32)
        self.ireps[self.size] = irep
        self.orbit.append(point)
        self.size += 1


class _RawChain:
    """Stabilizer chain over raw image arrays.

    ``gens[i]`` holds the strong generators first stuck at level i; the
    effective generating set for the orbit at level m is the union of
    gens[m], gens[m+1], ... (each of those fixes the first m base points).
    """

    __slots__ = ("degree", "ident", "levels", "gens", "gen_serials", "_serial",
                 "verified", "base_hint")

    def __init__(self, degree: int, base_hint: Sequence[int] | None = None):
        self.degree = degree
        self.ident = np.arange(degree, dtype=np.int32)
        self.levels: list[_Level] = []
        self.gens: list[list[np.ndarray]] = []
        self.gen_serials: list[list[int]] = []
        self._serial = 0
        self.verified = False
        self.base_hint = list(base_hint) if base_hint else []
        for point in self.base_hint:
            # hinted base points get their levels up front, in the given
            # order, so stabilizers of point prefixes can be read off
            self.levels.append(_Level(point, degree, self.ident))
            self.gens.append([])
            self.gen_serials.append([])

    # -- basic queries ------------------------------------------------------

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= lv.size
        return n

    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def gens_at(self, m: int) -> list[np.ndarray]:
        out = []
        for i in range(m, len(self.gens)):
            out.extend(self.gens[i])
        return out

    def sift(self, vec: np.ndarray):
        """Reduce vec through the transversals.

        Returns (level, residue) where the walk stopped: level == len(levels)
        with an identity residue means membership; a non-identity residue
        either failed at `level` or moves no base point (level == len(levels)).
        """
        for m, lv in enumerate(self.levels):
            beta = vec[lv.point]
            j = lv.tpos[beta]
            if j < 0:
                return m, vec
            if j > 0:  # position 0 is the identity representative
                vec = lv.ireps[j][vec]
        return len(self.levels), vec

    def contains_vec(self, vec: np.ndarray) -> bool:
        m, res = self.sift(vec)
        return m == len(self.levels) and bool((res == self.ident).all())

    # -- construction -------------------------------------------------------

    def _extend_orbit(self, m: int, new_gens: list[np.ndarray]) -> None:
        """Close level m's orbit after new_gens joined its generating set."""
        lv = self.levels[m]
        queue = []
        orbit_snapshot = np.array(lv.orbit, dtype=np.int32)
        for h in new_gens:
            imgs = h[orbit_snapshot]
            fresh = lv.tpos[imgs] < 0
            for j in np.nonzero(fresh)[0]:
                pt = int(imgs[j])
                if lv.tpos[pt] < 0:
                    lv.append(pt, h[lv.reps[j]], self.degree)
                    queue.append(lv.size - 1)
        all_gens = self.gens_at(m)
        while queue:
            j = queue.pop()
            rep = lv.reps[j]
            for h in all_gens:
                pt = int(h[lv.orbit[j]])
                if lv.tpos[pt] < 0:
                    lv.append(pt, h[rep], self.degree)
                    queue.append(lv.size - 1)

    def _new_level(self, vec: np.ndarray) -> int:
        point = -1
        for hint in self.base_hint:
            if vec[hint] != hint:
                point = hint
                break
        if point < 0:
            point = int(np.nonzero(vec != self.ident)[0][0])
        self.levels.append(_Level(point, self.degree, self.ident))
        self.gens.append([])
        self.gen_serials.append([])
        return len(self.levels) - 1

    def add_generator(self, m: int, vec: np.ndarray) -> None:
        """Install a residue as a strong generator at level m (m may be new)."""
        if m == len(self.levels):
            m = self._new_level(vec)
        self.gens[m].append(vec)
        self.gen_serials[m].append(self._serial)
        self._serial += 1
        for k in range(m, -1, -1):
            self._extend_orbit(k, [vec])
        self.verified = False

    def sift_and_add(self, vec: np.ndarray) -> bool:
        """Sift vec; install the residue if there is one.  True if installed."""
        m, res = self.sift(vec)
        if m == len(self.levels) and (res == self.ident).all():
            return False
        self.add_generator(m, res)
        return True

    # -- deterministic verification ------------------------------------------

    def _pending(self, m: int) -> list[tuple[int, int]]:
        lv = self.levels[m]
        out = []
        for i in range(m, len(self.gens)):
            for g_idx, serial in enumerate(self.gen_serials[i]):
                for j in range(lv.size):
                    if (j, serial) not in lv.processed:
                        out.append((j, i, g_idx, serial))
        return out

    def _gen_lookup(self, i: int, g_idx: int) -> np.ndarray:
        return self.gens[i][g_idx]

    def _verify_level(self, m: int, batch: int = 2048):
        """Sift a batch of level-m Schreier generators.

        Returns None when the level is clean, or the level index where a new
        strong generator was installed.
        """
        pending = self._pending(m)
        if not pending:
            return None
        pending = pending[:batch]
        lv = self.levels[m]
        by_gen: dict[tuple[int, int, int], list[int]] = {}
        for j, i, g_idx, serial in pending:
            by_gen.setdefault((i, g_idx, serial), []).append(j)
        for (i, g_idx, serial), js in by_gen.items():
            s = self._gen_lookup(i, g_idx)
            J = np.array(js, dtype=np.int32)
            W = s[lv.reps[J]]  # rows: u_j followed by s
            alive = list(js)
            for mm in range(m, len(self.levels)):
                lv2 = self.levels[mm]
                beta = W[:, lv2.point]
                jj = lv2.tpos[beta]
                bad = np.nonzero(jj < 0)[0]
                if bad.size:
                    b0 = int(bad[0])
                    residue = W[b0].copy()
                    self.add_generator(mm, residue)
                    lv.processed.add((alive[b0], serial))
                    return mm
                W = np.take_along_axis(lv2.ireps[jj], W, axis=1)
            ok = (W == self.ident).all(axis=1)
            if not ok.all():
                b0 = int(np.nonzero(~ok)[0][0])
                residue = W[b0].copy()
                self.add_generator(len(self.levels), residue)
                lv.processed.add((alive[b0], serial))
                return len(self.levels) - 1
            for j in alive:
                lv.processed.add((j, serial))
        return None

    def verify(self) -> None:
        """Deterministic Schreier-Sims completion; certifies order()."""
        m = len(self.levels) - 1
        while m >= 0:
            touched = self._verify_level(m)
            if touched is None:
                if self._pending(m):
                    continue  # more batches at this level
                m -= 1
            else:
                m = touched
        self.verified = True

    # -- randomized acceleration ---------------------------------------------

    def randomized_fill(self, seeds: list[np.ndarray], rng: random.Random,
                        target: int | None = None, stall: int = 12) -> bool:
        """Product-replacement sifting until `stall` clean sifts in a row.

        Returns True as soon as order() reaches `target` (certified: orbit
        length products count distinct elements, and the group is contained
        in one of order `target` whenever the caller says so).
        """
        if target is not None and self.order() >= target:
            return True
        slots = [s.copy() for s in seeds]
        while len(slots) < 6:
            slots.append(slots[rng.randrange(len(slots))].copy())
        acc = self.ident.copy()
        n = len(slots)

        def step():
            # multiply by a *different* slot: slot updates must stay
            # invertible or the slot span can collapse into a subgroup
            i = rng.randrange(n)
            j = rng.randrange(n - 1)
            if j >= i:
                j += 1
            slots[i] = slots[j][slots[i]]
            return i

        for _ in range(30):
            step()
        clean = 0
        while clean < stall:
            i = step()
            acc = slots[i][acc]
            if self.sift_and_add(acc.copy()):
                clean = 0
                if target is not None and self.order() >= target:
                    return True
            else:
                clean += 1
        return target is not None and self.order() >= target

    @classmethod
    def from_generators(cls, arrays: list[np.ndarray], rng: random.Random,
                        target: int | None = None,
                        verify: bool = True,
                        base_hint: Sequence[int] | None = None) -> "_RawChain":
        degree = arrays[0].shape[0]
        chain = cls(degree, base_hint=base_hint)
        for a in arrays:
            chain.sift_and_add(a.copy())
        if chain.randomized_fill(arrays, rng, target=target) and target is not None:
            return chain
        if verify:
            chain.verify()
        return chain


class StabilizerChain:
    """Verified stabilizer chain: base, transversals, strong generators, order.

    Construct with ``build_chain``; all instances carry a certified
    ``group_order``.
    """

    def __init__(self, raw: _RawChain, generators: list[Permutation]):
        if not raw.verified:
            raise ValueError("internal error: chain must be verified")
        self._raw = raw
        self.generators = list(generators)
        self.degree = raw.degree
        self.group_order = raw.order()
        self.base = tuple(raw.base())

    @property
    def orbit_lengths(self) -> tuple[int, ...]:
        return tuple(lv.size for lv in self._raw.levels)

    def orbits(self) -> list[tuple[int, ...]]:
        """Base-point orbits, in discovery order, one per level."""
        return [tuple(lv.orbit) for lv in self._raw.levels]

    def transversal(self, level: int) -> dict[int, Permutation]:
        """Coset representatives at a level: point -> rep mapping base to it."""
        lv = self._raw.levels[level]
        return {
            pt: Permutation._wrap(lv.reps[j].copy())
            for j, pt in enumerate(lv.orbit)
        }

    def strong_generators(self, level: int) -> list[Permutation]:
        """Strong generators first installed at the given level."""
        return [Permutation._wrap(g.copy()) for g in self._raw.gens[level]]

    def sift(self, p: Permutation) -> Permutation:
        """Residue of p after reduction through the transversals."""
        if p.degree != self.degree:
            raise ValueError(f"degree mismatch: {p.degree} != {self.degree}")
        _, res = self._raw.sift(p.images)
        return Permutation._wrap(res.copy() if res is not p.images else res)

    def __len__(self) -> int:
        return len(self._raw.levels)

    def __repr__(self) -> str:
        return (f"<StabilizerChain degree {self.degree} order {self.group_order} "
                f"base {list(self.base)}>")


def build_chain(generators: Sequence[Permutation], seed: int = 0,
                base_hint: Sequence[int] | None = None) -> StabilizerChain:
    """Build a verified stabilizer chain for the group the generators produce.

    Randomized Schreier-Sims fills the chain, then every Schreier generator
    is sifted deterministically, so ``group_order`` is exact.  The same seed
    reproduces the same base and transversals.  `base_hint` lists points to
    prefer (in order) when new base points are chosen.
    """
    gens = list(generators)
    if not gens or not all(isinstance(g, Permutation) for g in gens):
        raise ValueError("build_chain needs a nonempty list of Permutations")
    degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise ValueError("generators must share a common degree")
    arrays = [g.images.copy() for g in gens if not g.is_identity()]
    rng = random.Random(seed)
    if not arrays:
        raw = _RawChain(degree)
        raw.verified = True
        return StabilizerChain(raw, gens)
    raw = _RawChain.from_generators(arrays, rng, target=None, verify=True,
                                    base_hint=base_hint)
    return StabilizerChain(raw, gens)


def contains(chain: StabilizerChain, p: Permutation) -> bool:
    """Exact membership test by sifting."""
    if p.degree != chain.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {chain.degree}")
    return chain._raw.contains_vec(p.images)


def enumerate_elements(chain: StabilizerChain, limit: int = 10**8) -> Iterator[Permutation]:
    """Stream every group element exactly once as transversal products.

    Elements are emitted in mixed-radix order over the transversal indices
    (deepest level varying slowest); nothing is materialized.  Raises
    EnumerationLimitError when the group order exceeds `limit`.
    """
    if chain.group_order > limit:
        raise EnumerationLimitError(chain.group_order, limit)
    for block in _stream_batches(chain._raw, batch=1024):
        for row in block:
            yield Permutation._wrap(row.copy())


def _stream_batches(raw: _RawChain, batch: int = 1024,
                    start: int = 0, stop: int | None = None) -> Iterator[np.ndarray]:
    """Yield (n x degree) blocks covering the element range [start, stop).

    Index i decomposes little-endian over the orbit lengths: level 0 is the
    fastest digit.  Each element is the product u_deepest * ... * u_level0
    (left-to-right composition), so distinct indices give distinct elements.
    """
    order = raw.order()
    if stop is None:
        stop = order
    if not raw.levels:
        if start == 0 and stop >= 1:
            yield raw.ident.reshape(1, -1).copy()
        return
    sizes = [lv.size for lv in raw.levels]
    i = start
    while i < stop:
        n = min(batch, stop - i)
        idx = np.arange(i, i + n, dtype=np.int64)
        digits = []
        for size in sizes:
            digits.append(idx % size)
            idx //= size
        block = raw.levels[-1].reps[digits[-1]]
        for m in range(len(sizes) - 2, -1, -1):
            # left-to-right compose rows: next maps c -> u_m(block(c))
            block = np.take_along_axis(raw.levels[m].reps[digits[m]], block, axis=1)
        yield block
        i += n


def random_element(chain: StabilizerChain, rng: random.Random | int) -> Permutation:
    """Uniformly random element: product of uniform transversal picks."""
    if isinstance(rng, int):
        rng = random.Random(rng)
    raw = chain._raw
    vec = raw.ident
    for lv in reversed(raw.levels):
        j = rng.randrange(lv.size)
        if j:
            vec = lv.reps[j][vec]
    return Permutation._wrap(vec.copy())
