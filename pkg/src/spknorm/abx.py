"""Machine ABX phone discrimination over triphone tokens.

A token is the frame span of three consecutive retained phone segments;
two tokens contrast when they share the (left, right) context and the
speaker constraint but differ in the center phone.  The distance between
tokens is dynamic time warping over the angular (arccos-cosine) frame
distance, normalized by the warping path length.

Scoring contract
----------------
A cell fixes an ordered center-phone pair (A, B), a context (l, r), and a
speaker u (within mode) or an ordered speaker pair (u, v) with u != v
(across mode).  A triplet (a, b, x) draws a from the A tokens and b from
the B tokens (both of speaker u); x is another A token, of speaker u with
x != a (within) or of speaker v (across).  Its score is 1 if
d(x, a) > d(x, b), 0.5 on an exact tie, else 0.  The cell error is the
mean over all admissible triplets.

Aggregation: ordered-cell errors are grouped by the unordered phone pair
and averaged over the (at most two) directions present, then averaged
over contexts, then over speakers (within) or ordered speaker pairs
(across), then over unordered phone pairs.  Every average is a plain mean
over the values present at that level, taken in sorted key order; levels
with no surviving value are skipped.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .corpus import AlignmentTable, FrameTable
from .exceptions import DegenerateError

TOKEN_SPANS = ("triphone", "center")


@dataclass(frozen=True)
class TriphoneToken:
    speaker: str
    context: tuple[str, str]  # (left phone, right phone)
    center: str
    frames: np.ndarray  # (T, D)
    utterance: str
    span: tuple[int, int]  # original frame index range, inclusive


@dataclass(frozen=True)
class AbxCell:
    mode: str
    phone_a: str
    phone_b: str
    context: tuple[str, str]
    speaker_key: str | tuple[str, str]
    error: float
    n_triplets: int


@dataclass(frozen=True)
class AbxReport:
    within_error: float | None
    across_error: float | None
    cells: tuple[AbxCell, ...]
    zero_norm_frames: bool = False

    def to_dict(self) -> dict:
        return {
            "within_error": self.within_error,
            "across_error": self.across_error,
            "n_cells": len(self.cells),
            "n_triplets": int(sum(c.n_triplets for c in self.cells)),
            "zero_norm_frames": self.zero_norm_frames,
        }


def extract_triphones(
    t: FrameTable, alignments: AlignmentTable, span: str = "triphone"
) -> list[TriphoneToken]:
    """One token per run of three consecutive retained phone segments.

    Runs slide by one segment, so overlapping tokens are produced.  A run
    is skipped when any of its segments carries an excluded phone, has no
    retained frame, or when a dropped frame interrupts the span.  With
    span="center" the token keeps only the center segment's frames (the
    context still constrains matching).
    """
    if span not in TOKEN_SPANS:
        raise ValueError(f"span must be one of {TOKEN_SPANS}, got {span!r}")
    tokens: list[TriphoneToken] = []
    for utt in dict.fromkeys(t.utterance_of):
        segs = alignments.segments(str(utt))
        starts = np.array([s.start for s in segs])
        rows = np.nonzero(t.utterance_of == utt)[0]
        rows = rows[np.argsort(t.frame_index_of[rows], kind="stable")]
        seg_rows: dict[int, list[int]] = {}
        for row in rows:
            mid = (t.frame_index_of[row] + 0.5) * t.frame_period
            j = int(np.searchsorted(starts, mid, side="right")) - 1
            seg_rows.setdefault(j, []).append(int(row))
        for j in range(len(segs) - 2):
            trio = segs[j : j + 3]
            if any(seg.phone in t.excluded_phones for seg in trio):
                continue
            if any(not seg_rows.get(j + off) for off in range(3)):
                continue
            span_rows = [r for off in range(3) for r in seg_rows[j + off]]
            orig = t.frame_index_of[span_rows]
            if orig[-1] - orig[0] + 1 != len(orig):
                continue  # a dropped frame interrupts the span
            kept = seg_rows[j + 1] if span == "center" else span_rows
            tokens.append(
                TriphoneToken(
                    speaker=str(t.speaker_of[span_rows[0]]),
                    context=(trio[0].phone, trio[2].phone),
                    center=trio[1].phone,
                    frames=t.frames[kept],
                    utterance=str(utt),
                    span=(int(orig[0]), int(orig[-1])),
                )
            )
    return tokens


def frame_distance_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pairwise angular distance arccos(cos_sim)/pi in [0, 1].

    A zero-norm frame is treated as orthogonal to everything (distance 0.5).
    """
    nx = np.linalg.norm(x, axis=1)
    ny = np.linalg.norm(y, axis=1)
    denom = nx[:, None] * ny[None, :]
    cos = np.divide(x @ y.T, denom, out=np.zeros((len(x), len(y))), where=denom > 0)
    return np.arccos(np.clip(cos, -1.0, 1.0)) / np.pi


def dtw_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Path-length-normalized DTW cost with steps (1,0), (0,1), (1,1).

    The optimal path minimizes the accumulated frame cost; exact ties are
    broken toward the shorter (more diagonal) path.  The return value is
    that path's accumulated cost divided by the number of cells it visits.
    """
    delta = frame_distance_matrix(np.atleast_2d(x), np.atleast_2d(y))
    t1, t2 = delta.shape
    cost = np.empty((t1, t2))
    plen = np.empty((t1, t2), dtype=np.int64)
    cost[0, 0] = delta[0, 0]
    plen[0, 0] = 1
    for i in range(1, t1):
        cost[i, 0] = cost[i - 1, 0] + delta[i, 0]
        plen[i, 0] = i + 1
    for j in range(1, t2):
        cost[0, j] = cost[0, j - 1] + delta[0, j]
        plen[0, j] = j + 1
    for i in range(1, t1):
        for j in range(1, t2):
            bc, bl = cost[i - 1, j - 1], plen[i - 1, j - 1]
            for cc, ll in ((cost[i - 1, j], plen[i - 1, j]), (cost[i, j - 1], plen[i, j - 1])):
                if cc < bc or (cc == bc and ll < bl):
                    bc, bl = cc, ll
            cost[i, j] = bc + delta[i, j]
            plen[i, j] = bl + 1
    return float(cost[-1, -1] / plen[-1, -1])


class _DistanceCache:
    """Memoized symmetric token-pair distances; values are pure functions
    of the tokens, so concurrent duplicate computation is harmless."""

    def __init__(self, tokens: list[TriphoneToken]):
        self.tokens = tokens
        self.cache: dict[tuple[int, int], float] = {}

    def __call__(self, i: int, j: int) -> float:
        key = (i, j) if i <= j else (j, i)
        hit = self.cache.get(key)
        if hit is None:
            hit = dtw_distance(self.tokens[key[0]].frames, self.tokens[key[1]].frames)
            self.cache[key] = hit
        return hit


def _cell_error(
    dist: _DistanceCache,
    x_pool: list[int],
    a_pool: list[int],
    b_pool: list[int],
    exclude_identity: bool,
    max_triplets: int | None,
    rng: np.random.Generator | None,
) -> tuple[float, int] | None:
    """Mean triplet score over the cell, or None when no triplet is admissible."""
    d_xa = np.array([[dist(x, a) for a in a_pool] for x in x_pool])
    d_xb = np.array([[dist(x, b) for b in b_pool] for x in x_pool])
    triplets = []
    for xi, x in enumerate(x_pool):
        for ai, a in enumerate(a_pool):
            if exclude_identity and x == a:
                continue
            for bi in range(len(b_pool)):
                triplets.append((xi, ai, bi))
    if not triplets:
        return None
    if max_triplets is not None and len(triplets) > max_triplets:
        pick = rng.choice(len(triplets), size=max_triplets, replace=False)
        triplets = [triplets[i] for i in sorted(pick)]
    n_gt = 0
    n_eq = 0
    for xi, ai, bi in triplets:
        if d_xa[xi, ai] > d_xb[xi, bi]:
            n_gt += 1
        elif d_xa[xi, ai] == d_xb[xi, bi]:
            n_eq += 1
    return (n_gt + 0.5 * n_eq) / len(triplets), len(triplets)


def abx_error(
    tokens: list[TriphoneToken],
    mode: str,
    threads: int = 1,
    max_triplets_per_cell: int | None = None,
    seed: int = 0,
) -> AbxReport:
    """Hierarchical ABX error over all scoreable cells (see module docstring).

    Cells are enumerated and reduced in sorted key order, so the result is
    independent of the thread count.
    """
    if mode not in ("within", "across"):
        raise ValueError(f"mode must be 'within' or 'across', got {mode!r}")
    if not tokens:
        raise DegenerateError("no tokens to score")
    groups: dict[tuple[tuple[str, str], str, str], list[int]] = {}
    for i, tok in enumerate(tokens):
        groups.setdefault((tok.context, tok.center, tok.speaker), []).append(i)
    contexts = sorted({ctx for ctx, _, _ in groups})
    cells_todo = []
    for ctx in contexts:
        speakers = sorted({s for (c, _, s) in groups if c == ctx})
        centers = sorted({p for (c, p, _) in groups if c == ctx})
        if mode == "within":
            for u in speakers:
                for pa in centers:
                    ga = groups.get((ctx, pa, u))
                    if not ga or len(ga) < 2:
                        continue
                    for pb in centers:
                        gb = groups.get((ctx, pb, u))
                        if pb == pa or not gb:
                            continue
                        cells_todo.append(((pa, pb, ctx, u), ga, ga, gb, True))
        else:
            for u in speakers:
                for v in speakers:
                    if u == v:
                        continue
                    for pa in centers:
                        ga_u = groups.get((ctx, pa, u))
                        ga_v = groups.get((ctx, pa, v))
                        if not ga_u or not ga_v:
                            continue
                        for pb in centers:
                            gb_u = groups.get((ctx, pb, u))
                            if pb == pa or not gb_u:
                                continue
                            cells_todo.append(((pa, pb, ctx, (u, v)), ga_v, ga_u, gb_u, False))
    cells_todo.sort(key=lambda c: c[0])
    dist = _DistanceCache(tokens)

    def run(ordinal_cell):
        ordinal, (key, x_pool, a_pool, b_pool, excl) = ordinal_cell
        rng = (
            np.random.default_rng([seed, ordinal])
            if max_triplets_per_cell is not None
            else None
        )
        return key, _cell_error(dist, x_pool, a_pool, b_pool, excl, max_triplets_per_cell, rng)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, enumerate(cells_todo)))
    else:
        results = [run(oc) for oc in enumerate(cells_todo)]

    cells = []
    by_pair_ctx_spk: dict[tuple, dict[tuple, float]] = {}
    for (pa, pb, ctx, spk), res in results:
        if res is None:
            continue
        err, n = res
        cells.append(AbxCell(mode, pa, pb, ctx, spk, err, n))
        pair = (min(pa, pb), max(pa, pb))
        by_pair_ctx_spk.setdefault((pair, ctx, spk), {})[(pa, pb)] = err
    if not cells:
        raise DegenerateError(f"no scoreable {mode}-speaker cell")

    sym = {
        key: float(np.mean([errs[d] for d in sorted(errs)]))
        for key, errs in by_pair_ctx_spk.items()
    }
    by_pair_spk: dict[tuple, list[float]] = {}
    for (pair, ctx, spk) in sorted(sym):
        by_pair_spk.setdefault((pair, spk), []).append(sym[(pair, ctx, spk)])
    by_pair: dict[tuple, list[float]] = {}
    for (pair, spk) in sorted(by_pair_spk):
        by_pair.setdefault(pair, []).append(float(np.mean(by_pair_spk[(pair, spk)])))
    top = float(np.mean([float(np.mean(by_pair[pair])) for pair in sorted(by_pair)]))

    zero_norm = any(np.any(np.linalg.norm(tok.frames, axis=1) == 0) for tok in tokens)
    return AbxReport(
        within_error=top if mode == "within" else None,
        across_error=top if mode == "across" else None,
        cells=tuple(cells),
        zero_norm_frames=zero_norm,
    )


def write_cells_csv(path: str | os.PathLike, report: AbxReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["mode", "phone_a", "phone_b", "left", "right", "speaker_key", "error", "n_triplets"]
        )
        for c in report.cells:
            spk = c.speaker_key if isinstance(c.speaker_key, str) else "|".join(c.speaker_key)
            writer.writerow(
                [c.mode, c.phone_a, c.phone_b, c.context[0], c.context[1], spk, repr(float(c.error)), c.n_triplets]
            )


def write_report_json(path: str | os.PathLike, report: AbxReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
