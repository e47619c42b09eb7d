"""
Deterministic, resumable pair scans
===================================

Long scans survive interruption: progress goes to a JSON checkpoint
file in ~10^6-element chunks, and a rerun with the same parameters picks
up from whatever the file already covers.  The merged count is an exact
integer sum, so resumed and uninterrupted runs are indistinguishable.
"""

import json
import time
from pathlib import Path

from pairgen.census import conjugacy_classes
from pairgen.genprob import generating_pair_scan
from pairgen.io import load_bundle

m12 = load_bundle("m12").build()
classes = conjugacy_classes(m12)
checkpoint = Path("m12_scan_progress.json")
checkpoint.unlink(missing_ok=True)

# First pass: a fresh scan that writes the checkpoint as it goes.
t0 = time.perf_counter()
first = generating_pair_scan(m12, classes, 2, 11, seed=0,
                             checkpoint=checkpoint)
t1 = time.perf_counter()
print(f"fresh scan:   {first.count} generating pairs  ({t1 - t0:.2f}s)")

doc = json.loads(checkpoint.read_text())
print(f"checkpoint:   {len(doc['done'])} finished chunks on disk")

# Second pass: same parameters, same file.  Every chunk is already
# recorded, so no group element is touched again.
t2 = time.perf_counter()
resumed = generating_pair_scan(m12, classes, 2, 11, seed=0,
                               checkpoint=checkpoint)
t3 = time.perf_counter()
print(f"resumed scan: {resumed.count} generating pairs  ({t3 - t2:.2f}s)")
assert resumed == first

# A checkpoint is bound to its scan: change any parameter and the file
# is rejected instead of silently merged.
try:
    generating_pair_scan(m12, classes, 2, 5, seed=0, checkpoint=checkpoint)
except ValueError as exc:
    print(f"mismatched reuse rejected: {exc}")

checkpoint.unlink()
