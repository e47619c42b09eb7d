"""Exact counting of generating pairs with prescribed element orders.

The probability that a random pair (x, y) with order(x) = r, order(y) = s
generates G is counted exactly.  The default algorithm fixes one
representative per conjugacy class of order-r elements and scans every
order-s element of the enumeration stream: the number of generating
partners is constant on each class, so the full pair count is the sum of
class size times per-representative hits.  A naive double loop over all
pairs is kept behind a flag as the oracle.

Each candidate pair is decided by building a stabilizer chain for
<x, y>: the randomized construction stops as soon as the orbit-length
product reaches |G| (that product counts distinct subgroup elements, so
hitting |G| is already a certificate), and otherwise falls through to
deterministic verification, making every decision exact.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .census import DEFAULT_ENUM_LIMIT, ConjugacyClassList, _block_orders
from .io import decimal5
from .perm import (
    EnumerationLimitError,
    Permutation,
    StabilizerChain,
    _RawChain,
    _stream_batches,
    contains,
)

__all__ = [
    "GenerationResult",
    "ScanResult",
    "ClassContribution",
    "is_generating",
    "generating_pair_scan",
    "generating_pair_count",
    "naive_pair_count",
    "gen_probability",
]

# Stream ranges handed to workers; small enough that modest groups still
# split across processes.
_CHUNK = 1 << 16
# Checkpoint flush cadence, in scanned stream elements.
_FLUSH_EVERY = 10**6


@dataclass(frozen=True)
class ClassContribution:
    """Scan outcome for one conjugacy class of order-r elements.

    ``hits`` counts generating partners of the fixed representative; the
    class contributes ``size * hits`` pairs.
    """

    class_index: int
    size: int
    hits: int

    @property
    def pairs(self) -> int:
        return self.size * self.hits


@dataclass(frozen=True)
class ScanResult:
    """Exact generating-pair count, with per-class breakdown.

    ``vacuous`` is set when the group has no elements of order r or none
    of order s, so the count is 0 for lack of candidates.
    """

    r: int
    s: int
    count: int
    vacuous: bool
    per_class: tuple[ClassContribution, ...]


@dataclass(frozen=True)
class GenerationResult:
    """Probability that a random (order r, order s) pair generates."""

    r: int
    s: int
    generating_pairs: int
    total_pairs: int
    probability: Fraction
    decimal5: str

    def __post_init__(self):
        if not 0 <= self.generating_pairs <= self.total_pairs:
            raise ValueError("generating pairs outside 0..total pairs")
        if self.probability != Fraction(self.generating_pairs,
                                        self.total_pairs):
            raise ValueError("probability is not generating/total")


# ---------------------------------------------------------------------------
# Single-pair decision.
# ---------------------------------------------------------------------------


def _orbit_reaches(x_img: np.ndarray, y_img: np.ndarray, start: int,
                   want: int) -> bool:
    """Does the <x, y>-orbit of `start` have at least `want` points?"""
    seen = np.zeros(x_img.shape[0], dtype=bool)
    seen[start] = True
    stack = [start]
    n = 1
    while stack:
        c = stack.pop()
        for img in (x_img, y_img):
            d = int(img[c])
            if not seen[d]:
                seen[d] = True
                n += 1
                stack.append(d)
    return n >= want


def _pair_generates(x_img: np.ndarray, y_img: np.ndarray, target: int,
                    rng: random.Random, prefilter=None) -> bool:
    """Exact test for |<x, y>| = target (target must be the parent order)."""
    if prefilter is not None:
        start, want = prefilter
        if not _orbit_reaches(x_img, y_img, start, want):
            return False
    raw = _RawChain.from_generators([x_img, y_img], rng, target=target,
                                    verify=True)
    return raw.order() == target


def is_generating(chain: StabilizerChain, x: Permutation,
                  y: Permutation) -> bool:
    """True iff x and y together generate the whole group of the chain."""
    for label, g in (("x", x), ("y", y)):
        if not contains(chain, g):
            raise ValueError(f"{label} is not an element of the group")
    return _pair_generates(x.images, y.images, chain.group_order,
                           random.Random("pair"))


# ---------------------------------------------------------------------------
# Checkpoints.
# ---------------------------------------------------------------------------


def _load_checkpoint(path: Path, header: dict) -> dict:
    """Map of "class:chunk" -> [hits, candidates] from an existing file."""
    if not path.exists():
        return {}
    with open(path, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    if {k: doc.get(k) for k in header} != header:
        raise ValueError(f"{path}: checkpoint does not match this scan")
    return {key: tuple(val) for key, val in doc["done"].items()}


def _flush_checkpoint(path: Path, header: dict, done: dict) -> None:
    doc = dict(header)
    doc["done"] = {key: list(val) for key, val in done.items()}
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="ascii") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Class-fixing scan.
# ---------------------------------------------------------------------------


# State shared with forked scan workers (set before the pool is created;
# fork inherits it, so nothing heavy is pickled).
_SHARED: dict = {}


def _scan_chunk(task) -> tuple[str, int, int]:
    """Count generating partners of one representative in [start, stop)."""
    key, class_pos, start, stop = task
    st = _SHARED
    raw = st["raw"]
    x_img = st["reps"][class_pos]
    s = st["s"]
    rng = random.Random(f"{st['seed']}:{key}")
    hits = 0
    cand = 0
    for block in _stream_batches(raw, batch=1024, start=start, stop=stop):
        orders = _block_orders(block)
        for row in np.nonzero(orders == s)[0]:
            cand += 1
            if _pair_generates(x_img, block[row], st["target"], rng,
                               st["prefilter"]):
                hits += 1
    return key, hits, cand


def generating_pair_scan(chain: StabilizerChain, classes: ConjugacyClassList,
                         r: int, s: int, *, seed: int = 0, threads: int = 1,
                         limit: int = DEFAULT_ENUM_LIMIT,
                         checkpoint=None) -> ScanResult:
    """Count pairs (x, y) with order r, s generating the group, class-fixed.

    ``classes`` must describe the same group as ``chain`` and cover orders
    r and s.  ``checkpoint`` names a JSON progress file: completed stream
    chunks are recorded roughly every 10**6 scanned elements, and a rerun
    resumes from whatever the file already covers.  ``threads`` counts
    worker processes (forked, so each owns private chains); the merge is
    an exact integer sum, identical in any order.
    """
    if r < 2 or s < 2:
        raise ValueError("element orders r and s must be at least 2")
    if classes.group_order != chain.group_order:
        raise ValueError(
            f"class data is for a group of order {classes.group_order}, "
            f"chain has order {chain.group_order}")
    if chain.group_order > limit:
        raise EnumerationLimitError(chain.group_order, limit)

    r_classes = classes.of_order(r)
    n_s = sum(c.size for c in classes.of_order(s))
    if not r_classes or n_s == 0:
        return ScanResult(r, s, 0, True, ())

    raw = chain._raw
    order = chain.group_order
    reps = []
    for cls in r_classes:
        pos = classes.classes.index(cls)
        reps.append((pos, cls.size, cls.representative.images))
    prefilter = ((raw.levels[0].point, raw.levels[0].size)
                 if raw.levels else None)

    header = {
        "group_order": str(order),
        "degree": chain.degree,
        "r": r,
        "s": s,
        "chunk": _CHUNK,
        "classes": [[pos, size] for pos, size, _ in reps],
    }
    done: dict[str, tuple[int, int]] = {}
    path = None
    if checkpoint is not None:
        path = Path(checkpoint)
        done = _load_checkpoint(path, header)

    tasks = []
    for class_pos in range(len(reps)):
        for chunk_idx in range(0, order, _CHUNK):
            key = f"{class_pos}:{chunk_idx}"
            if key not in done:
                tasks.append((key, class_pos,
                              chunk_idx, min(chunk_idx + _CHUNK, order)))

    state = {
        "raw": raw,
        "reps": [img for _, _, img in reps],
        "s": s,
        "seed": seed,
        "target": order,
        "prefilter": prefilter,
    }
    _SHARED.clear()
    _SHARED.update(state)
    try:
        results = _run_tasks(tasks, threads)
        unflushed = 0
        for (key, class_pos, start, stop), (hits, cand) in results:
            done[key] = (hits, cand)
            unflushed += stop - start
            if path is not None and unflushed >= _FLUSH_EVERY:
                _flush_checkpoint(path, header, done)
                unflushed = 0
        if path is not None:
            _flush_checkpoint(path, header, done)
    finally:
        _SHARED.clear()

    per_class = []
    count = 0
    for class_pos, (pos, size, _) in enumerate(reps):
        hits = sum(v[0] for k, v in done.items()
                   if k.startswith(f"{class_pos}:"))
        cand = sum(v[1] for k, v in done.items()
                   if k.startswith(f"{class_pos}:"))
        if cand != n_s:
            raise ValueError(
                f"stream holds {cand} elements of order {s}, class data "
                f"says {n_s}; chain and class list disagree")
        per_class.append(ClassContribution(pos, size, hits))
        count += size * hits
    return ScanResult(r, s, count, False, tuple(per_class))


def _run_tasks(tasks, threads):
    """Run scan chunks serially or on forked workers; yields exact counts."""
    if threads <= 1 or len(tasks) <= 1:
        for task in tasks:
            key, hits, cand = _scan_chunk(task)
            yield task, (hits, cand)
        return
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
        for task, (key, hits, cand) in zip(tasks,
                                           pool.map(_scan_chunk, tasks)):
            yield task, (hits, cand)


def generating_pair_count(chain: StabilizerChain,
                          classes: ConjugacyClassList, r: int, s: int, *,
                          naive: bool = False, **kwargs) -> int:
    """Number of generating pairs with orders (r, s).

    ``naive=True`` switches to the all-pairs double loop (the oracle the
    class-fixing reduction is checked against).
    """
    if naive:
        if r < 2 or s < 2:
            raise ValueError("element orders r and s must be at least 2")
        if classes.group_order != chain.group_order:
            raise ValueError("class data is for a different group")
        return naive_pair_count(chain, r, s,
                                limit=kwargs.get("limit",
                                                 DEFAULT_ENUM_LIMIT))
    return generating_pair_scan(chain, classes, r, s, **kwargs).count


def naive_pair_count(chain: StabilizerChain, r: int, s: int,
                     limit: int = DEFAULT_ENUM_LIMIT) -> int:
    """Oracle: test every (x, y) with orders (r, s) by double loop."""
    if chain.group_order > limit:
        raise EnumerationLimitError(chain.group_order, limit)
    xs = []
    ys = []
    for block in _stream_batches(chain._raw, batch=1024):
        orders = _block_orders(block)
        for row in np.nonzero(orders == r)[0]:
            xs.append(block[row].copy())
        for row in np.nonzero(orders == s)[0]:
            ys.append(block[row].copy())
    rng = random.Random("naive")
    target = chain.group_order
    return sum(1 for x in xs for y in ys
               if _pair_generates(x, y, target, rng))


def gen_probability(chain: StabilizerChain, classes: ConjugacyClassList,
                    r: int, s: int, **kwargs) -> GenerationResult:
    """Exact probability that a random order-(r, s) pair generates."""
    scan = generating_pair_scan(chain, classes, r, s, **kwargs)
    n_r = sum(c.size for c in classes.of_order(r))
    n_s = sum(c.size for c in classes.of_order(s))
    total = n_r * n_s
    if total == 0:
        raise ValueError(f"no elements of the given orders ({r}, {s})")
    probability = Fraction(scan.count, total)
    return GenerationResult(r, s, scan.count, total, probability,
                            decimal5(probability))
