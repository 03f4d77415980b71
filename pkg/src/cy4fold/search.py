"""Bounded exhaustive search over pairs of admissible involutions.

The search enumerates every admissible matrix whose entries a + b*w have
|a|, |b| <= bound, forms all unordered pairs, keeps those generating an
infinite group, and writes one JSONL record per surviving pair.  Work is split
into fixed pair-index ranges so that the output does not depend on the
number of worker processes; a single writer consumes results in index order
and checkpoints after every range.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .eisenstein import EisensteinInt
from .euler import euler_from_surfaces
from .matrix import (
    CharPoly,
    Mat3,
    char_poly,
    det,
    TORSION_EXPONENT,
    has_finite_order,
    matrix_from_json,
    matrix_to_json,
    render_matrix,
    trace,
    trace_of_product,
)
from .torus import theta_intersection_count

log = logging.getLogger(__name__)

MAX_BOUND = 3
CHUNK_PAIRS = 4096
CONJECTURED_CHI = 108
FORMAT_VERSION = 1


class SearchError(Exception):
    """Bad search configuration, unusable paths, or a checkpoint that does not match."""


# ------------------------------------------------------------------ enumeration


def _coefficient_values(bound: int) -> list[EisensteinInt]:
    return [EisensteinInt(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)]


def _check_bound(bound: int) -> None:
    if not isinstance(bound, int) or not 1 <= bound <= MAX_BOUND:
        raise SearchError(f"coefficient bound must be an integer in [1, {MAX_BOUND}], got {bound!r}")


def enumerate_involutions(bound: int, surface_only: bool = True) -> Iterator[Mat3]:
    """Yield every matrix with coefficients in [-bound, bound] satisfying A^2 = I, det A = -1.

    With ``surface_only`` (the default) only trace-1 matrices are kept, i.e.
    exactly the admissible ones.  Output is sorted lexicographically by the
    row-major coefficient tuple.

    Entries are fixed in the order a00, a01, a10, (a02, a20), a11, (a12, a21),
    a22 so that each diagonal entry of A^2 closes as early as possible: the
    pairs in parentheses are drawn from a table of factorizations of the
    residue that entry still needs, and the off-diagonal entries of A^2 are
    tested as soon as their inputs are known.
    """
    _check_bound(bound)
    values = _coefficient_values(bound)
    in_range = set(values)
    one = EisensteinInt(1, 0)
    minus_one = EisensteinInt(-1, 0)

    factorizations: dict[EisensteinInt, list[tuple[EisensteinInt, EisensteinInt]]] = {}
    for x in values:
        for y in values:
            factorizations.setdefault(x * y, []).append((x, y))
    squares: dict[EisensteinInt, list[EisensteinInt]] = {}
    for x in values:
        squares.setdefault(x * x, []).append(x)

    found = []
    for a00 in values:
        sq00 = a00 * a00
        for a01 in values:
            for a10 in values:
                p0110 = a01 * a10
                for a02, a20 in factorizations.get(one - sq00 - p0110, ()):
                    for a11 in values:
                        if surface_only:
                            a22_forced = one - a00 - a11
                            if a22_forced not in in_range:
                                continue
                        s = a00 + a11
                        for a12, a21 in factorizations.get(one - a11 * a11 - p0110, ()):
                            # (A^2)_{01} and (A^2)_{10}
                            if a01 * s + a02 * a21:
                                continue
                            if a10 * s + a12 * a20:
                                continue
                            need = one - a20 * a02 - a21 * a12
                            if surface_only:
                                candidates = (a22_forced,) if a22_forced * a22_forced == need else ()
                            else:
                                candidates = squares.get(need, ())
                            for a22 in candidates:
                                if a02 * (a00 + a22) + a01 * a12:
                                    continue
                                if a20 * (a00 + a22) + a21 * a10:
                                    continue
                                if a12 * (a11 + a22) + a10 * a02:
                                    continue
                                if a21 * (a11 + a22) + a20 * a01:
                                    continue
                                m = Mat3._raw((a00, a01, a02, a10, a11, a12, a20, a21, a22))
                                if det(m) == minus_one:
                                    found.append(m)
    found.sort(key=Mat3.sort_key)
    yield from found


# --------------------------------------------------------------------- records


def _eis_key(x: EisensteinInt) -> str:
    return f"{x.a},{x.b}"


def _cp_key(cp: CharPoly) -> str:
    return f"{_eis_key(cp.tr)};{_eis_key(cp.c2)};{_eis_key(cp.det)}"


def _pair_key(a1: Mat3, a2: Mat3, theta1: int, theta2: int, product: Mat3 | None = None) -> str:
    b = product if product is not None else a1 @ a2
    b_rev = a2 @ a1
    b2 = b @ b
    words = [
        sorted((tuple(trace(a1)), tuple(trace(a2)))),
        sorted((tuple(trace(b)), tuple(trace(b_rev)))),
        sorted((tuple(trace_of_product(b, a1)), tuple(trace_of_product(b_rev, a2)))),
        sorted((tuple(trace(b2)), tuple(trace_of_product(b_rev, b_rev)))),
    ]
    word_part = "|".join(
        f"w{n}=" + "/".join(f"{a},{b_}" for a, b_ in traces) for n, traces in enumerate(words, 1)
    )
    lo, hi = sorted((theta1, theta2))
    return f"cp={_cp_key(char_poly(b))}|cp2={_cp_key(char_poly(b2))}|{word_part}|theta={lo},{hi}"


def dedup_key(a1: Mat3, a2: Mat3) -> str:
    """Canonical string of conjugacy invariants of the pair, symmetric in (a1, a2).

    Built from the characteristic polynomials of a1 a2 and (a1 a2)^2, traces
    of alternating words of length 1 to 4, and the two theta counts.  It is a
    heuristic: pairs that are not simultaneously conjugate may share a key.
    """
    return _pair_key(a1, a2, theta_intersection_count(a1), theta_intersection_count(a2))


@dataclass(frozen=True)
class SearchRecord:
    idx: int
    a1: Mat3
    a2: Mat3
    chi_s1: int
    chi_s2: int
    chi_m: int
    product_charpoly: CharPoly
    dedup_key: str

    def to_json(self) -> dict:
        return {
            "idx": self.idx,
            "a1": matrix_to_json(self.a1),
            "a2": matrix_to_json(self.a2),
            "chi_s1": self.chi_s1,
            "chi_s2": self.chi_s2,
            "chi_m": self.chi_m,
            "product_charpoly": self.product_charpoly.to_json(),
            "key": self.dedup_key,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict) -> SearchRecord:
        cp = data["product_charpoly"]
        return cls(
            idx=int(data["idx"]),
            a1=matrix_from_json(data["a1"]),
            a2=matrix_from_json(data["a2"]),
            chi_s1=int(data["chi_s1"]),
            chi_s2=int(data["chi_s2"]),
            chi_m=int(data["chi_m"]),
            product_charpoly=CharPoly(
                EisensteinInt.from_json(cp["tr"]),
                EisensteinInt.from_json(cp["c2"]),
                EisensteinInt.from_json(cp["det"]),
            ),
            dedup_key=str(data["key"]),
        )


# ------------------------------------------------------------------- run state


@dataclass(frozen=True)
class SearchConfig:
    coeff_bound: int
    output_path: str
    workers: int = 1
    checkpoint_path: str | None = None
    dedup: bool = True
    # truncate the pair enumeration; for audits and smoke runs
    max_pairs: int | None = None

    def __post_init__(self):
        _check_bound(self.coeff_bound)
        if not isinstance(self.workers, int) or self.workers < 1:
            raise SearchError(f"workers must be a positive integer, got {self.workers!r}")
        if self.max_pairs is not None and self.max_pairs < 0:
            raise SearchError("max_pairs must be non-negative")

    def config_hash(self) -> str:
        # worker count and paths do not change the output, so they stay out
        payload = json.dumps(
            {
                "bound": self.coeff_bound,
                "dedup": self.dedup,
                "max_pairs": self.max_pairs,
                "version": FORMAT_VERSION,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Checkpoint:
    enumeration_cursor: int
    records_emitted: int
    config_hash: str
    pairs_found: int = 0

    def to_json(self) -> dict:
        return {
            "cursor": self.enumeration_cursor,
            "emitted": self.records_emitted,
            "config_hash": self.config_hash,
            "pairs_found": self.pairs_found,
        }

    @classmethod
    def load(cls, path: str) -> Checkpoint | None:
        p = Path(path)
        if not p.exists():
            return None
        try:
            data = json.loads(p.read_text())
            return cls(int(data["cursor"]), int(data["emitted"]), str(data["config_hash"]),
                       int(data.get("pairs_found", 0)))
        except (ValueError, KeyError, TypeError) as exc:
            raise SearchError(f"unreadable checkpoint {path}: {exc}") from None

    def save(self, path: str) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w") as fh:
            json.dump(self.to_json(), fh)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)


# --------------------------------------------------------------------- workers
#
# The pair kernel evaluates one matrix against a run of partners at a time
# with numpy.  Coefficients stay tiny (|entry| <= 3, products of at most four
# matrices), far inside int64.  Only products whose characteristic polynomial
# is compatible with finite order go through the exact has_finite_order test.

_STATE: dict = {}


def _eis_mul(xa, xb, ya, yb):
    bb = xb * yb
    return xa * ya - bb, xa * yb + xb * ya - bb


def _mat_mul(xa, xb, ya, yb):
    bb = xb @ yb
    return xa @ ya - bb, xa @ yb + xb @ ya - bb


def _tr(xa, xb):
    return np.trace(xa, axis1=-2, axis2=-1), np.trace(xb, axis1=-2, axis2=-1)


def _tr_prod(xa, xb, ya, yb):
    # tr(X Y) = sum_ij X_ij Y_ji
    yta, ytb = np.swapaxes(ya, -1, -2), np.swapaxes(yb, -1, -2)
    pa, pb = _eis_mul(xa, xb, yta, ytb)
    return pa.sum(axis=(-2, -1)), pb.sum(axis=(-2, -1))


def _minor(xa, xb, r0, r1, c0, c1):
    pa, pb = _eis_mul(xa[:, r0, c0], xb[:, r0, c0], xa[:, r1, c1], xb[:, r1, c1])
    qa, qb = _eis_mul(xa[:, r0, c1], xb[:, r0, c1], xa[:, r1, c0], xb[:, r1, c0])
    return pa - qa, pb - qb


def _char_poly(xa, xb):
    """(tr, c2, det) coefficient arrays, each an (a, b) pair."""
    tr = _tr(xa, xb)
    m01 = _minor(xa, xb, 0, 1, 0, 1)
    m02 = _minor(xa, xb, 0, 2, 0, 2)
    m12 = _minor(xa, xb, 1, 2, 1, 2)
    c2 = (m01[0] + m02[0] + m12[0], m01[1] + m02[1] + m12[1])
    c0 = _minor(xa, xb, 1, 2, 1, 2)
    c1 = _minor(xa, xb, 1, 2, 0, 2)
    c2_ = _minor(xa, xb, 1, 2, 0, 1)
    t0 = _eis_mul(xa[:, 0, 0], xb[:, 0, 0], *c0)
    t1 = _eis_mul(xa[:, 0, 1], xb[:, 0, 1], *c1)
    t2 = _eis_mul(xa[:, 0, 2], xb[:, 0, 2], *c2_)
    det = (t0[0] - t1[0] + t2[0], t0[1] - t1[1] + t2[1])
    return tr, c2, det


def _norm(a, b):
    return a * a - a * b + b * b


# residues stay below 2**29, so sums of six products fit in int64
SCREEN_PRIME = 536870909


def _power_is_identity_mod_p(xa, xb, exponent=TORSION_EXPONENT, p=SCREEN_PRIME):
    """Boolean mask: X**exponent == I modulo p, for a stack of matrices."""
    ra = np.broadcast_to(np.eye(3, dtype=np.int64), xa.shape).copy()
    rb = np.zeros_like(xb)
    ba, bb = xa % p, xb % p
    k = exponent
    while k:
        if k & 1:
            ra, rb = _mat_mul(ra, rb, ba, bb)
            ra, rb = ra % p, rb % p
        k >>= 1
        if k:
            ba, bb = _mat_mul(ba, bb, ba, bb)
            ba, bb = ba % p, bb % p
    eye = np.eye(3, dtype=np.int64)
    return np.all(ra == eye, axis=(1, 2)) & np.all(rb == 0, axis=(1, 2))


def _init_worker(matrices: list[Mat3], thetas: list[int]) -> None:
    coeffs = np.array([[list(e) for e in m.entries] for m in matrices], dtype=np.int64)
    if coeffs.size and int(np.abs(coeffs).max()) > MAX_BOUND:
        raise OverflowError("matrix coefficients exceed the search kernel's range")
    coeffs = coeffs.reshape(len(matrices), 3, 3, 2)
    _STATE["matrices"] = matrices
    _STATE["thetas"] = thetas
    _STATE["a"] = np.ascontiguousarray(coeffs[..., 0])
    _STATE["b"] = np.ascontiguousarray(coeffs[..., 1])
    _STATE["json"] = [json.dumps(matrix_to_json(m), separators=(",", ":")) for m in matrices]
    _STATE["trace"] = [tuple(trace(m)) for m in matrices]


def _pair_at(idx: int, n: int) -> tuple[int, int]:
    i = 0
    row = n - 1
    while idx >= row:
        idx -= row
        i += 1
        row -= 1
    return i, i + 1 + idx


def _row_start(i: int, n: int) -> int:
    return i * (n - 1) - i * (i - 1) // 2


def _segments(lo: int, hi: int, n: int) -> Iterator[tuple[int, int, int]]:
    """Split the pair-index range [lo, hi) into runs (i, j_lo, j_hi) of a fixed first matrix."""
    if lo >= hi:
        return
    i, j = _pair_at(lo, n)
    idx = lo
    while idx < hi:
        take = min(n - j, hi - idx)
        yield i, j, j + take
        idx += take
        i, j = i + 1, i + 2


def _cp_str(tr, c2, det, k) -> str:
    return f"{tr[0][k]},{tr[1][k]};{c2[0][k]},{c2[1][k]};{det[0][k]},{det[1][k]}"


def _sorted_pair(x, y, k) -> str:
    p, q = (int(x[0][k]), int(x[1][k])), (int(y[0][k]), int(y[1][k]))
    if q < p:
        p, q = q, p
    return f"{p[0]},{p[1]}/{q[0]},{q[1]}"


def _process_range(bounds: tuple[int, int]) -> list[tuple[int, str, str]]:
    """Evaluate pairs with index in [lo, hi); return (idx, key, jsonl line) for infinite-group pairs."""
    lo, hi = bounds
    matrices = _STATE["matrices"]
    thetas = _STATE["thetas"]
    mats_json = _STATE["json"]
    traces = _STATE["trace"]
    ma, mb = _STATE["a"], _STATE["b"]
    n = len(matrices)
    out = []
    for i, j_lo, j_hi in _segments(lo, hi, n):
        base = _row_start(i, n) - (i + 1)
        xa, xb = ma[i], mb[i]
        ya, yb = ma[j_lo:j_hi], mb[j_lo:j_hi]
        pa, pb = _mat_mul(xa, xb, ya, yb)
        tr, c2, det = _char_poly(pa, pb)
        maybe_finite = (_norm(*tr) <= 9) & (_norm(*c2) <= 9) & (_norm(*det) == 1)
        idx_maybe = np.flatnonzero(maybe_finite)
        if idx_maybe.size:
            maybe_finite[idx_maybe] = _power_is_identity_mod_p(pa[idx_maybe], pb[idx_maybe])
        infinite = ~maybe_finite
        for k in np.flatnonzero(maybe_finite):
            if not has_finite_order(matrices[i] @ matrices[j_lo + k]):
                infinite[k] = True
        keep = np.flatnonzero(infinite)
        if not keep.size:
            continue
        ya, yb = ya[keep], yb[keep]
        pa, pb = pa[keep], pb[keep]
        tr, c2, det = _char_poly(pa, pb)
        ra, rb = _mat_mul(ya, yb, xa, xb)
        sqa, sqb = _mat_mul(pa, pb, pa, pb)
        tr2, c22, det2 = _char_poly(sqa, sqb)
        w2r = _tr(ra, rb)
        w3a = _tr_prod(pa, pb, xa, xb)
        w3b = _tr_prod(ra, rb, ya, yb)
        w4b = _tr_prod(ra, rb, ra, rb)
        tr = tuple(t.tolist() for t in tr)
        c2 = tuple(t.tolist() for t in c2)
        det = tuple(t.tolist() for t in det)
        tr2 = tuple(t.tolist() for t in tr2)
        c22 = tuple(t.tolist() for t in c22)
        det2 = tuple(t.tolist() for t in det2)
        t1 = traces[i]
        theta1 = thetas[i]
        for pos, k in enumerate(keep.tolist()):
            j = j_lo + k
            theta2 = thetas[j]
            t2 = traces[j]
            w1 = "/".join(f"{a},{b}" for a, b in sorted((t1, t2)))
            lo_t, hi_t = sorted((theta1, theta2))
            key = (
                f"cp={_cp_str(tr, c2, det, pos)}|cp2={_cp_str(tr2, c22, det2, pos)}"
                f"|w1={w1}|w2={_sorted_pair(tr, w2r, pos)}|w3={_sorted_pair(w3a, w3b, pos)}"
                f"|w4={_sorted_pair(tr2, w4b, pos)}|theta={lo_t},{hi_t}"
            )
            chi_s1, chi_s2 = 2 * theta1, 2 * theta2
            chi_m = 3 * (chi_s1 + chi_s2)
            idx = base + j
            line = (
                f'{{"idx":{idx},"a1":{mats_json[i]},"a2":{mats_json[j]},'
                f'"chi_s1":{chi_s1},"chi_s2":{chi_s2},"chi_m":{chi_m},'
                f'"product_charpoly":{{"tr":[{tr[0][pos]},{tr[1][pos]}],'
                f'"c2":[{c2[0][pos]},{c2[1][pos]}],"det":[{det[0][pos]},{det[1][pos]}]}},'
                f'"key":{json.dumps(key)}}}'
            )
            out.append((idx, key, line))
    return out


def _ranges(start: int, total: int, size: int) -> Iterator[tuple[int, int]]:
    lo = start
    while lo < total:
        hi = min(total, (lo // size + 1) * size)
        yield lo, hi
        lo = hi


# ------------------------------------------------------------------ top level


def _read_existing(path: str, keep: int) -> list[str]:
    p = Path(path)
    if not p.exists():
        return []
    lines = p.read_text().splitlines()
    if len(lines) < keep:
        raise SearchError(f"{path} has {len(lines)} records but the checkpoint expects {keep}")
    return lines[:keep]


def run_search(config: SearchConfig, progress=None) -> dict:
    """Run (or resume) the pair search; return {pairs_found, distinct_keys, chi_histogram, ...}."""
    matrices = list(enumerate_involutions(config.coeff_bound))
    thetas = [theta_intersection_count(m) for m in matrices]
    n = len(matrices)
    total = n * (n - 1) // 2
    if config.max_pairs is not None:
        total = min(total, config.max_pairs)
    chash = config.config_hash()

    cursor = 0
    pairs_found = 0
    kept_lines: list[str] = []
    if config.checkpoint_path:
        ckpt = Checkpoint.load(config.checkpoint_path)
        if ckpt is not None:
            if ckpt.config_hash != chash:
                raise SearchError(
                    f"checkpoint {config.checkpoint_path} was written for a different configuration"
                )
            cursor, pairs_found = ckpt.enumeration_cursor, ckpt.pairs_found
            kept_lines = _read_existing(config.output_path, ckpt.records_emitted)
            log.info("resuming at pair %d with %d records", cursor, len(kept_lines))

    seen = {json.loads(line)["key"] for line in kept_lines}
    emitted = len(kept_lines)
    try:
        out = open(config.output_path, "w")
    except OSError as exc:
        raise SearchError(f"cannot write {config.output_path}: {exc}") from None

    def checkpoint(at: int) -> None:
        if config.checkpoint_path:
            try:
                Checkpoint(at, emitted, chash, pairs_found).save(config.checkpoint_path)
            except OSError as exc:
                raise SearchError(f"cannot write checkpoint {config.checkpoint_path}: {exc}") from None

    with out:
        for line in kept_lines:
            out.write(line + "\n")
        checkpoint(cursor)
        ranges = list(_ranges(cursor, total, CHUNK_PAIRS))
        if config.workers == 1:
            _init_worker(matrices, thetas)
            results: Iterable = map(_process_range, ranges)
            pool = None
        else:
            pool = ProcessPoolExecutor(
                max_workers=config.workers, initializer=_init_worker, initargs=(matrices, thetas)
            )
            results = pool.map(_process_range, ranges)
        try:
            for (lo, hi), chunk in zip(ranges, results):
                for _, key, line in chunk:
                    pairs_found += 1
                    if config.dedup:
                        if key in seen:
                            continue
                        seen.add(key)
                    out.write(line + "\n")
                    emitted += 1
                out.flush()
                checkpoint(hi)
                if progress is not None:
                    progress(hi, total)
        finally:
            if pool is not None:
                pool.shutdown(cancel_futures=True)

    records = list(read_records(config.output_path))
    histogram = Counter(r.chi_m for r in records)
    return {
        "admissible_matrices": n,
        "pairs_examined": total,
        "pairs_found": pairs_found,
        "records_emitted": emitted,
        "distinct_keys": len({r.dedup_key for r in records}),
        "chi_histogram": {str(k): v for k, v in sorted(histogram.items())},
    }


def read_records(path: str) -> Iterator[SearchRecord]:
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield SearchRecord.from_json(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                raise SearchError(f"{path}:{lineno}: malformed record: {exc}") from None


def conjecture_report(records: Iterable[SearchRecord]) -> dict:
    """Tally chi(M) over the records and flag every value other than 108."""
    histogram: Counter = Counter()
    counterexamples = []
    total = 0
    for r in records:
        total += 1
        histogram[r.chi_m] += 1
        if r.chi_m != CONJECTURED_CHI:
            counterexamples.append(
                {
                    "flag": "CONJECTURE_COUNTEREXAMPLE",
                    "idx": r.idx,
                    "a1": render_matrix(r.a1),
                    "a2": render_matrix(r.a2),
                    "a1_json": matrix_to_json(r.a1),
                    "a2_json": matrix_to_json(r.a2),
                    "chi_s1": r.chi_s1,
                    "chi_s2": r.chi_s2,
                    "chi_m": r.chi_m,
                }
            )
    if total == 0:
        verdict = "no records"
    elif counterexamples:
        verdict = f"{len(counterexamples)} counterexample(s) with chi_m != {CONJECTURED_CHI}"
    else:
        verdict = f"all chi_m = {CONJECTURED_CHI}"
    return {
        "pairs": total,
        "chi_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "all_108": total > 0 and not counterexamples,
        "counterexamples": counterexamples,
        "verdict": verdict,
    }
