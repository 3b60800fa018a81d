"""Vectorized pair/triple enumeration over box and full-group domains.

Domains enumerate points in lexicographic coordinate order, which coincides
with the mixed-radix code ``sum(digit_c * stride_c)`` where free coordinates
use ``digit = value + radius`` and torsion coordinates use the residue
itself.  That makes the index of an affine combination ``cx*x + cy*y``
computable coordinate-wise with numpy, so exhaustive quantifier sweeps can
run as array arithmetic instead of Python loops.  Exactness is preserved by
scaling rational tables to a common denominator and working in int64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceededError
from .groups import Box, Domain, FullGroup, GroupSpec

_PAIR_GUARD = 30_000_000  # refuse quadratic sweeps beyond this many pairs


@dataclass
class VecDomain:
    group: GroupSpec
    domain: Domain
    n: int
    coords: np.ndarray          # (n, dim) int32, reduced coordinates
    strides: np.ndarray         # (dim,) int64
    radii: tuple[int, ...]      # free-coordinate radii ('' for FullGroup)


_domain_cache: dict = {}


def domain_info(group: GroupSpec, domain: Domain) -> Optional[VecDomain]:
    """Vectorization data for Box/FullGroup domains; None otherwise."""
    if not isinstance(domain, (Box, FullGroup)):
        return None
    key = (group, domain)
    hit = _domain_cache.get(key)
    if hit is not None:
        return hit
    pts = domain.points(group)
    coords = np.array([p.coords for p in pts], dtype=np.int32)
    if coords.ndim == 1:  # zero-dimensional group
        coords = coords.reshape(len(pts), 0)
    radii = domain.radius if isinstance(domain, Box) else ()
    radix = [2 * r + 1 for r in radii] + list(group.torsion)
    dim = group.dim
    strides = np.ones(dim, dtype=np.int64)
    for c in range(dim - 2, -1, -1):
        strides[c] = strides[c + 1] * radix[c + 1]
    info = VecDomain(group, domain, len(pts), coords, strides, tuple(radii))
    if len(_domain_cache) > 16:
        _domain_cache.clear()
    _domain_cache[key] = info
    return info


def _combo_codes_grid(info: VecDomain, cx: int, cy: int,
                      valid: np.ndarray) -> np.ndarray:
    """Point index of ``cx*x + cy*y`` for every pair, updating ``valid``."""
    group = info.group
    n = info.n
    code = np.zeros((n, n), dtype=np.int64)
    for c in range(group.dim):
        col = info.coords[:, c].astype(np.int64)
        raw = cx * col[:, None] + cy * col[None, :]
        if c < group.rank:
            r = info.radii[c]
            np.logical_and(valid, (raw >= -r) & (raw <= r), out=valid)
            digit = raw + r
        else:
            digit = raw % group.torsion[c - group.rank]
        code += digit * info.strides[c]
    return code


_pair_cache: dict = {}


def pair_maps(info: VecDomain, combos: tuple[tuple[int, int], ...]):
    """In-range pair sweep: returns (I, J, [K_combo...], total_pairs).

    Pairs appear in lexicographic (i, j) order; a pair is kept iff every
    combination point lies in the domain.
    """
    key = (info.group, info.domain, combos)
    hit = _pair_cache.get(key)
    if hit is not None:
        return hit
    n = info.n
    if n * n > _PAIR_GUARD:
        raise BudgetExceededError(
            f"pair sweep over {n}^2 points exceeds the built-in guard"
        )
    valid = np.ones((n, n), dtype=bool)
    codes = [_combo_codes_grid(info, cx, cy, valid) for cx, cy in combos]
    flat = np.flatnonzero(valid.reshape(-1))
    out = (
        (flat // n).astype(np.int64),
        (flat % n).astype(np.int64),
        [code.reshape(-1)[flat] for code in codes],
        n * n,
    )
    if len(_pair_cache) > 6:
        _pair_cache.clear()
    _pair_cache[key] = out
    return out


def triple_maps(info: VecDomain, combos: tuple[tuple[int, int, int], ...],
                full_budget: int, sample_budget: int):
    """Triple sweep, exhaustive when small, deterministically sampled otherwise.

    Returns (X, H, K, [K_combo...], total, exhaustive).
    """
    key = (info.group, info.domain, combos, full_budget, sample_budget)
    hit = _pair_cache.get(key)
    if hit is not None:
        return hit
    out = _triple_maps_build(info, combos, full_budget, sample_budget)
    if len(_pair_cache) > 8:
        _pair_cache.clear()
    _pair_cache[key] = out
    return out


def _triple_maps_build(info, combos, full_budget, sample_budget):
    n = info.n
    total = n * n * n
    if total <= full_budget:
        idx = np.arange(total, dtype=np.int64)
        exhaustive = True
    else:
        m = min(sample_budget, total)
        # fixed multiplicative-hash stride: deterministic, RNG-free
        idx = (np.arange(m, dtype=np.uint64) * np.uint64(2654435761)
               + np.uint64(40507)) % np.uint64(total)
        idx = idx.astype(np.int64)
        exhaustive = False
    X = idx // (n * n)
    H = (idx // n) % n
    K = idx % n
    group = info.group
    valid = np.ones(len(idx), dtype=bool)
    codes = []
    for cx, ch, ck in combos:
        code = np.zeros(len(idx), dtype=np.int64)
        for c in range(group.dim):
            col = info.coords[:, c].astype(np.int64)
            raw = cx * col[X] + ch * col[H] + ck * col[K]
            if c < group.rank:
                r = info.radii[c]
                valid &= (raw >= -r) & (raw <= r)
                digit = raw + r
            else:
                digit = raw % group.torsion[c - group.rank]
            code += digit * info.strides[c]
        codes.append(code)
    keep = np.flatnonzero(valid)
    return (X[keep], H[keep], K[keep], [c[keep] for c in codes],
            len(idx), exhaustive)


# ---------------------------------------------------------------------------
# point-level index maps


def index_of_coords(info: VecDomain, coords: Sequence[int]) -> int:
    """Domain index of an (in-range) reduced coordinate vector."""
    group = info.group
    code = 0
    for c in range(group.dim):
        v = coords[c]
        if c < group.rank:
            if abs(v) > info.radii[c]:
                raise KeyError(f"coordinates {coords} outside the domain")
            digit = v + info.radii[c]
        else:
            digit = v % group.torsion[c - group.rank]
        code += digit * int(info.strides[c])
    return code


def neg_codes(info: VecDomain) -> np.ndarray:
    """Per-point index of the negated point (domains are negation-closed)."""
    key = (info.group, info.domain, "neg")
    hit = _pair_cache.get(key)
    if hit is not None:
        return hit
    group = info.group
    code = np.zeros(info.n, dtype=np.int64)
    for c in range(group.dim):
        col = info.coords[:, c].astype(np.int64)
        if c < group.rank:
            digit = -col + info.radii[c]
        else:
            digit = (-col) % group.torsion[c - group.rank]
        code += digit * info.strides[c]
    _pair_cache[key] = code
    return code


def coset_codes(info: VecDomain, modulus: int) -> tuple[np.ndarray, "callable"]:
    """Per-point coset code modulo ``X^(modulus)`` plus an index encoder.

    The encoder maps a :class:`~kbeq.groups.CosetIndex` to the same code
    space, so arrays indexed by coset code can be filled from coset maps.
    """
    group = info.group
    radix = [modulus] * group.rank + [math.gcd(modulus, n) for n in group.torsion]
    strides = [1] * group.dim
    for c in range(group.dim - 2, -1, -1):
        strides[c] = strides[c + 1] * radix[c + 1]
    code = np.zeros(info.n, dtype=np.int64)
    for c in range(group.dim):
        col = info.coords[:, c].astype(np.int64)
        code += (col % radix[c]) * strides[c]

    def encode(idx) -> int:
        return sum(r * s for r, s in zip(idx.residues, strides))

    return code, encode


def scale_codes(info: VecDomain, factor: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-point index of ``factor * x`` plus an in-domain validity mask."""
    group = info.group
    code = np.zeros(info.n, dtype=np.int64)
    valid = np.ones(info.n, dtype=bool)
    for c in range(group.dim):
        col = info.coords[:, c].astype(np.int64)
        raw = factor * col
        if c < group.rank:
            r = info.radii[c]
            valid &= (raw >= -r) & (raw <= r)
            digit = raw + r
        else:
            digit = raw % group.torsion[c - group.rank]
        code += digit * info.strides[c]
    return code, valid


def turn_arrays(table) -> Optional[tuple[np.ndarray, int]]:
    """Unimodular exact table as integer turns over a common denominator.

    Returns (turn numerators, denominator) or None when any value is not a
    unit-modulus Exact.
    """
    from .functions import Exact

    vals = _dense_values(table)
    denom = 1
    for v in vals:
        if not isinstance(v, Exact) or v.zero or v.log_abs != 0:
            return None
        denom = denom * v.turn.denominator // math.gcd(denom, v.turn.denominator)
    nums = np.array([int(v.turn * denom) for v in vals], dtype=np.int64)
    return nums, denom


# ---------------------------------------------------------------------------
# numeric table encodings


def _dense_values(table) -> list:
    memo = table._memo
    dense = memo.get("dense")
    if dense is None:
        dense = [table.values[p] for p in table.points()]
        memo["dense"] = dense
    return dense


_INT_LIMIT = (1 << 62) // 16


def _table_encoding(table):
    """Canonical numeric encoding of one table, cached on the table.

    Returns ("int", nums, denom) | ("float", arr) | ("parity", arr) | None.
    """
    memo = table._memo
    if "enc" in memo:
        return memo["enc"]
    enc = None
    if table.kind == "sign":
        vals = _dense_values(table)
        arr = np.fromiter(((1 - v) >> 1 for v in vals), dtype=np.int64,
                          count=len(vals))
        enc = ("parity", arr)
    elif table.kind in ("real", "positive"):
        vals = _dense_values(table)
        if any(isinstance(v, float) for v in vals):
            enc = ("float", np.array([float(v) for v in vals], dtype=np.float64))
        else:
            denom = 1
            for v in vals:
                if isinstance(v, Fraction):
                    denom = denom * v.denominator // math.gcd(denom, v.denominator)
            ints = [int(v * denom) if isinstance(v, Fraction) else int(v) * denom
                    for v in vals]
            if max(map(abs, ints), default=0) <= _INT_LIMIT:
                enc = ("int", np.array(ints, dtype=np.int64), denom)
    memo["enc"] = enc
    return enc


def exact_complex_encoding(table):
    """Exact-complex table as integer arrays, cached on the table.

    Returns (log_nums, log_den, turn_nums, turn_den, zero_mask) or None when
    some value is not an :class:`~kbeq.functions.Exact`.  Zero entries carry
    zeros in the numeric arrays and are handled through the mask.
    """
    from .functions import Exact

    memo = table._memo
    if "cenc" in memo:
        return memo["cenc"]
    enc = None
    vals = _dense_values(table)
    if all(isinstance(v, Exact) for v in vals):
        ld = td = 1
        for v in vals:
            if v.zero:
                continue
            ld = ld * v.log_abs.denominator // math.gcd(ld, v.log_abs.denominator)
            td = td * v.turn.denominator // math.gcd(td, v.turn.denominator)
        log_nums = [0 if v.zero else int(v.log_abs * ld) for v in vals]
        turn_nums = [0 if v.zero else int(v.turn * td) for v in vals]
        if (all(abs(n) <= _INT_LIMIT for n in log_nums)
                and all(abs(n) <= _INT_LIMIT for n in turn_nums)):
            enc = (
                np.array(log_nums, dtype=np.int64), ld,
                np.array(turn_nums, dtype=np.int64), td,
                np.array([v.zero for v in vals], dtype=bool),
            )
    memo["cenc"] = enc
    return enc


def numeric_mode(tables: Sequence) -> Optional[tuple[str, list[np.ndarray]]]:
    """Encode tables for exact/tolerant vector arithmetic.

    Returns ("int", arrays) with all tables scaled to one common denominator,
    ("float", arrays) when floats are present, ("parity", arrays) for sign
    tables as 0/1 exponents, or None when values are complex (callers fall
    back to pure Python loops).
    """
    encs = [_table_encoding(t) for t in tables]
    if any(e is None for e in encs):
        return None
    kinds = {e[0] for e in encs}
    if kinds == {"parity"}:
        return "parity", [e[1] for e in encs]
    if "parity" in kinds:
        return None
    if "float" in kinds:
        out = []
        for e in encs:
            if e[0] == "float":
                out.append(e[1])
            else:
                out.append(e[1].astype(np.float64) / e[2])
        return "float", out
    denom = 1
    for _, _, d in encs:
        denom = denom * d // math.gcd(denom, d)
    arrays = []
    for _, nums, d in encs:
        scale = denom // d
        scaled = nums * scale
        if scale != 1 and np.abs(scaled).max(initial=0) > _INT_LIMIT:
            return None
        arrays.append(scaled)
    return "int", arrays


# ---------------------------------------------------------------------------
# structured-form evaluation


def form_log_arrays(P, l, r_entries, info: VecDomain):
    """Values of ``P(x) + l(x) + r(x)`` over the domain as scaled ints.

    ``r_entries`` is an iterable of (CosetIndex, Fraction) covering X^(2).
    Returns (nums int64 array, denom) or None when int64 cannot hold the
    arithmetic exactly.
    """
    group = info.group
    rank = group.rank
    denom = 1
    coeffs = [v for row in P.matrix for v in row]
    coeffs += list(l.coeffs) + [v for _, v in r_entries]
    for v in coeffs:
        denom = denom * v.denominator // math.gcd(denom, v.denominator)
    maxc = int(np.abs(info.coords).max(initial=0))
    bound = max((abs(v) for v in coeffs), default=Fraction(0)) * denom
    bound = int(bound) + 1
    if bound * (group.dim * max(maxc, 1)) ** 2 * 4 > _INT_LIMIT:
        return None
    C = info.coords.astype(np.int64)
    B = np.array([[int(v * denom) for v in row] for row in P.matrix],
                 dtype=np.int64)
    out = np.einsum("ni,ij,nj->n", C, B, C)
    if rank:
        lv = np.array([int(v * denom) for v in l.coeffs], dtype=np.int64)
        out = out + C[:, :rank] @ lv
    codes, encode = coset_codes(info, 2)
    rarr = np.zeros(group.coset_count(2), dtype=np.int64)
    for idx, v in r_entries:
        rarr[encode(idx)] = int(v * denom)
    out = out + rarr[codes]
    return out, denom
