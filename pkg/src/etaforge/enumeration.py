"""Complete enumerations of holomorphic eta quotients and lattice points.

Most work happens in *order space*: an eta quotient with exponent vector X
on Gamma_0(N) is represented by its scaled order vector ``x = A_N X``.  The
holomorphic quotients are the points of the lattice ``L_N = A_N Z^D`` with
nonnegative coordinates, and lattice membership of an integer vector is
decided by its residue in ``Z^D / L_N`` (read off a Smith decomposition of
A_N).  Searches for vectors with a prescribed weighted coordinate sum split
the coordinates in two halves and join the halves on residues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .eta import EtaQuotient
from .lattice import smith_decomposition, unimodular_inverse
from .matrices import b_matrix, c_matrix, denominators, order_matrix, order_matrix_inverse
from .numtheory import (
    IntLike,
    cusp_multiplicity,
    divisor_basis,
    factorize,
    num_divisors,
    omega_count,
    omega_dprime_bound,
    psi,
    rad,
    simplex_volume_term,
)

# largest residue-group order that still encodes into one int64 key
_MAX_GROUP = 2**62
# cap on rows materialised by one half of a meet-in-the-middle search
DEFAULT_HALF_LIMIT = 10_000_000


class GuardError(RuntimeError):
    """A computation would exceed a configured size guard."""


@dataclass(frozen=True)
class OrderLattice:
    """Numerical views of A_N and of the residue map Z^D -> Z^D / A_N Z^D."""

    N: int
    A: np.ndarray = field(repr=False)
    inv_num: np.ndarray = field(repr=False)
    inv_den: int
    cusp_weights: np.ndarray = field(repr=False)
    psi: int
    m: np.ndarray = field(repr=False)
    res_rows: np.ndarray = field(repr=False)  # rows of U reduced mod the moduli
    res_mod: np.ndarray = field(repr=False)  # nontrivial invariant factors
    group_order: int

    @property
    def dim(self) -> int:
        return len(self.m)

    def residues(self, x: np.ndarray) -> np.ndarray:
        """Residue vectors (n x r) of order vectors x (n x D)."""
        x = np.asarray(x, dtype=np.int64)
        if len(self.res_mod) == 0:
            return np.zeros((x.shape[0], 0), dtype=np.int64)
        return (x @ self.res_rows.T) % self.res_mod

    def encode(self, res: np.ndarray) -> np.ndarray:
        """Mixed-radix int64 code of residue vectors."""
        if self.group_order >= _MAX_GROUP:
            raise GuardError(f"residue group of order {self.group_order} too large at N={self.N}")
        code = np.zeros(res.shape[0], dtype=np.int64)
        for j, s in enumerate(self.res_mod):
            code = code * int(s) + res[:, j]
        return code

    def codes(self, x: np.ndarray) -> np.ndarray:
        return self.encode(self.residues(x))

    def contains(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        return ~np.any(self.residues(x), axis=1)

    def exponents(self, x: np.ndarray) -> np.ndarray:
        """Exact A_N^{-1} x for lattice vectors (rows)."""
        x = np.atleast_2d(np.asarray(x, dtype=np.int64))
        num = x @ self.inv_num.T
        if np.any(num % self.inv_den):
            raise ValueError("vector is not in the order lattice")
        return num // self.inv_den

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Weight numerators k of order vectors, via the valence identity."""
        tot = np.asarray(x, dtype=np.int64) @ self.cusp_weights
        return tot // self.psi

    def orders(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=np.int64)) @ self.A.T


@lru_cache(maxsize=128)
def order_lattice(N: IntLike) -> OrderLattice:
    fN = factorize(N)
    Nv = fN.value
    A = order_matrix(Nv)
    inv_num, den = order_matrix_inverse(Nv).scaled()
    u, diag, _ = smith_decomposition(A.entries)
    keep = [i for i, s in enumerate(diag) if abs(s) != 1]
    mods = np.array([abs(diag[i]) for i in keep], dtype=np.int64)
    rows = np.array([[u[i][j] % abs(diag[i]) for j in range(len(u))] for i in keep], dtype=np.int64)
    if not keep:
        rows = np.zeros((0, len(diag)), dtype=np.int64)
    basis = A.basis
    return OrderLattice(
        N=Nv,
        A=A.to_numpy(),
        inv_num=np.array(inv_num, dtype=np.int64),
        inv_den=den,
        cusp_weights=np.array([cusp_multiplicity(t, Nv) for t in basis], dtype=np.int64),
        psi=psi(Nv),
        m=np.array(denominators(Nv), dtype=np.int64),
        res_rows=rows,
        res_mod=mods,
        group_order=math.prod(int(s) for s in mods),
    )


# ---------------------------------------------------------------------------
# small vectorised generators


def _box_grid(upper: np.ndarray) -> np.ndarray:
    """All integer vectors 0 <= y <= upper in lexicographic order."""
    upper = [int(u) for u in upper]
    total = math.prod(u + 1 for u in upper)
    if not upper:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices([u + 1 for u in upper], dtype=np.int64)
    return grids.reshape(len(upper), total).T


def _prefix_grid(weights: np.ndarray, cap: int, upper: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """Vectors y >= 0 (y <= upper) with sum(weights*y) <= cap, and their sums."""
    rows = np.zeros((1, 0), dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for j, w in enumerate(weights):
        w = int(w)
        hi = cap // w
        if upper is not None:
            hi = min(hi, int(upper[j]))
        counts = np.minimum((cap - sums) // w, hi) + 1
        rep = np.repeat(np.arange(len(sums)), counts)
        offs = np.arange(len(rep)) - np.repeat(np.cumsum(counts) - counts, counts)
        rows = np.hstack([rows[rep], offs[:, None]])
        sums = sums[rep] + w * offs
    return rows, sums


def _prefix_count(weights: np.ndarray, cap: int) -> int:
    """Number of rows :func:`_prefix_grid` would build (no upper bounds)."""
    ways = [0] * (cap + 1)
    ways[0] = 1
    for w in (int(v) for v in weights):
        for s in range(w, cap + 1):  # unbounded multiplicity
            ways[s] += ways[s - w]
    return sum(ways)


def weighted_compositions(weights, total: int, upper=None) -> np.ndarray:
    """All y >= 0 with sum(weights * y) == total (and y <= upper)."""
    weights = np.asarray(weights, dtype=np.int64)
    if len(weights) == 0:
        return np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    up = None if upper is None else np.asarray(upper, dtype=np.int64)
    head, sums = _prefix_grid(weights[:-1], total, None if up is None else up[:-1])
    rest = total - sums
    wl = int(weights[-1])
    ok = rest % wl == 0
    last = rest // wl
    if up is not None:
        ok &= last <= up[-1]
    return np.hstack([head[ok], last[ok][:, None]])


def _join(keys_a: np.ndarray, keys_b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All index pairs (i, j) with keys_a[i] == keys_b[j]."""
    if len(keys_a) == 0 or len(keys_b) == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    ob = np.argsort(keys_b, kind="stable")
    sb = keys_b[ob]
    lo = np.searchsorted(sb, keys_a, "left")
    hi = np.searchsorted(sb, keys_a, "right")
    cnt = hi - lo
    ia = np.repeat(np.arange(len(keys_a)), cnt)
    start = np.repeat(lo, cnt)
    offs = np.arange(len(ia)) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    return ia, ob[start + offs]


def _negated_codes(lat: OrderLattice, res: np.ndarray) -> np.ndarray:
    return lat.encode((-res) % lat.res_mod if res.shape[1] else res)


# ---------------------------------------------------------------------------
# enumeration by weight


def order_vectors_of_weight(N: IntLike, k: int, *, half_limit: int = DEFAULT_HALF_LIMIT) -> np.ndarray:
    """Scaled order vectors of every holomorphic eta quotient of weight k/2 on
    Gamma_0(N), as rows sorted lexicographically."""
    lat = order_lattice(N)
    D = lat.dim
    if k < 0:
        return np.zeros((0, D), dtype=np.int64)
    K = k * lat.psi
    w = lat.cusp_weights
    h = (D + 1) // 2
    wa, wb = w[:h], w[h:]
    # prefix grids (all but the last coordinate of each half) carry the work
    need = max(_prefix_count(wa[:-1], K), _prefix_count(wb[:-1], K) if len(wb) else 1)
    if need > half_limit:
        raise GuardError(f"weight {k} search at N={lat.N} needs {need} rows per half")
    pa, sa = _prefix_grid(wa[:-1], K, None)
    pb, sb = _prefix_grid(wb[:-1], K, None) if len(wb) else (np.zeros((1, 0), np.int64), np.zeros(1, np.int64))
    ra = lat.residues(np.hstack([pa, np.zeros((len(pa), D - pa.shape[1]), np.int64)]))
    rb = lat.residues(np.hstack([np.zeros((len(pb), h), np.int64), pb, np.zeros((len(pb), 1 if len(wb) else 0), np.int64)]))
    last_a = lat.res_rows[:, h - 1] if lat.res_rows.size else np.zeros(0, np.int64)
    last_b = lat.res_rows[:, D - 1] if (lat.res_rows.size and len(wb)) else np.zeros(0, np.int64)

    out = []
    for s in range(K + 1):
        # half a: weighted sum exactly s
        rest = s - sa
        ok = (rest >= 0) & (rest % wa[-1] == 0)
        la = rest[ok] // wa[-1]
        ya = np.hstack([pa[ok], la[:, None]])
        res_a = (ra[ok] + la[:, None] * last_a) % lat.res_mod if ra.shape[1] else ra[ok]
        if not len(ya):
            continue
        if len(wb):
            rest = (K - s) - sb
            ok = (rest >= 0) & (rest % wb[-1] == 0)
            lb = rest[ok] // wb[-1]
            yb = np.hstack([pb[ok], lb[:, None]])
            res_b = (rb[ok] + lb[:, None] * last_b) % lat.res_mod if rb.shape[1] else rb[ok]
        else:
            if s != K:
                continue
            yb = np.zeros((1, 0), np.int64)
            res_b = np.zeros((1, ra.shape[1]), np.int64)
        if not len(yb):
            continue
        ia, ib = _join(lat.encode(res_a), _negated_codes(lat, res_b))
        if len(ia):
            out.append(np.hstack([ya[ia], yb[ib]]))
    if not out:
        return np.zeros((0, D), dtype=np.int64)
    res = np.vstack(out)
    return res[np.lexsort(res.T[::-1])]


def _dfs_order_vectors(N: int, k: int, visit: Callable[[tuple[int, ...]], None]) -> None:
    """Plain depth-first search over the valence equation with an
    integrality filter at the leaves."""
    lat = order_lattice(N)
    w = [int(v) for v in lat.cusp_weights]
    K = k * lat.psi
    D = len(w)
    x = [0] * D

    def rec(i: int, remaining: int) -> None:
        if i == D - 1:
            if remaining % w[i] == 0:
                x[i] = remaining // w[i]
                if lat.contains(np.array(x))[0]:
                    visit(tuple(x))
            return
        for v in range(remaining // w[i] + 1):
            x[i] = v
            rec(i + 1, remaining - v * w[i])
        x[i] = 0

    rec(0, K)


def enumerate_by_weight(N: IntLike, k: int, *, method: str = "mitm") -> list[EtaQuotient]:
    """Every holomorphic eta quotient of weight k/2 on Gamma_0(N).

    Results are sorted lexicographically by scaled order vector.  ``method``
    selects the meet-in-the-middle search (default) or the reference
    depth-first search, which is only practical for small levels.
    """
    Nv = int(factorize(N))
    lat = order_lattice(Nv)
    if method == "mitm":
        xs = order_vectors_of_weight(Nv, k)
    elif method == "dfs":
        found: list[tuple[int, ...]] = []
        _dfs_order_vectors(Nv, k, found.append)
        xs = np.array(sorted(found), dtype=np.int64).reshape(-1, lat.dim)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = []
    for X in lat.exponents(xs) if len(xs) else []:
        f = EtaQuotient(Nv, tuple(int(v) for v in X))
        assert f.weight_numerator() == k
        out.append(f)
    return out


def iter_by_weight(N: IntLike, k: int) -> Iterator[EtaQuotient]:
    yield from enumerate_by_weight(N, k)


# ---------------------------------------------------------------------------
# box searches (used for factorization)


def lattice_points_below(
    N: IntLike,
    upper,
    *,
    exclude=(),
    first_only: bool = False,
    half_limit: int = DEFAULT_HALF_LIMIT,
) -> np.ndarray:
    """Lattice order vectors y with 0 <= y <= upper, in lexicographic order.

    Vectors listed in ``exclude`` are skipped.  With ``first_only`` the
    search stops at the lexicographically smallest admissible vector.
    """
    lat = order_lattice(N)
    upper = np.asarray(upper, dtype=np.int64)
    D = len(upper)
    excluded = {tuple(int(v) for v in e) for e in exclude}
    # balance the two halves of the box while keeping a prefix split
    sizes = np.log(upper.astype(float) + 1)
    csum = np.concatenate([[0.0], np.cumsum(sizes)])
    h = int(np.argmin(np.maximum(csum, csum[-1] - csum)))
    na = math.prod(int(u) + 1 for u in upper[:h])
    nb = math.prod(int(u) + 1 for u in upper[h:])
    if max(na, nb) > half_limit:
        raise GuardError(f"box search at N={lat.N} needs {max(na, nb)} rows per half")
    ya = _box_grid(upper[:h])
    yb = _box_grid(upper[h:])
    za = np.hstack([ya, np.zeros((len(ya), D - h), np.int64)])
    zb = np.hstack([np.zeros((len(yb), h), np.int64), yb])
    ka = lat.codes(za)
    kb = _negated_codes(lat, lat.residues(zb))
    ob = np.argsort(kb, kind="stable")  # stable: partners stay in lex order
    sb = kb[ob]
    lo = np.searchsorted(sb, ka, "left")
    hi = np.searchsorted(sb, ka, "right")
    out = []
    for i in np.flatnonzero(hi > lo):
        for j in ob[lo[i]:hi[i]]:
            y = tuple(int(v) for v in ya[i]) + tuple(int(v) for v in yb[j])
            if y in excluded:
                continue
            if first_only:
                return np.array([y], dtype=np.int64)
            out.append(y)
    return np.array(out, dtype=np.int64).reshape(-1, D)


# ---------------------------------------------------------------------------
# the fundamental parallelepiped of B_N


@dataclass(frozen=True)
class _ParallelepipedPlan:
    moduli: tuple[int, ...]
    W: np.ndarray  # A_N U^{-1} restricted to nontrivial columns, reduced mod m


@lru_cache(maxsize=64)
def _parallelepiped_plan(N: int) -> _ParallelepipedPlan:
    B = b_matrix(N)
    u, diag, _ = smith_decomposition(B.entries)
    uinv = unimodular_inverse(u)
    keep = [i for i, s in enumerate(diag) if abs(s) != 1]
    A = order_matrix(N).entries
    ms = denominators(N)
    W = [
        [sum(A[t][r] * uinv[r][i] for r in range(len(uinv))) % ms[t] for i in keep]
        for t in range(len(A))
    ]
    W = np.array(W, dtype=np.int64).reshape(len(A), len(keep))
    return _ParallelepipedPlan(tuple(abs(diag[i]) for i in keep), W)


def iter_box_points(N: IntLike, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Order vectors of all lattice points of B_N [0,1)^D, in chunks.

    In order space the parallelepiped is the box 0 <= x_t < m_{t,N}; each
    residue class of Z^D / B_N Z^D contributes exactly one point.
    """
    Nv = int(factorize(N))
    plan = _parallelepiped_plan(Nv)
    lat = order_lattice(Nv)
    total = math.prod(plan.moduli)
    moduli = np.array(plan.moduli, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        r = np.empty((len(idx), len(moduli)), dtype=np.int64)
        for j in range(len(moduli) - 1, -1, -1):
            r[:, j] = idx % moduli[j]
            idx = idx // moduli[j]
        yield (r @ plan.W.T) % lat.m


def box_points(N: IntLike) -> np.ndarray:
    chunks = list(iter_box_points(N))
    return np.vstack(chunks) if chunks else np.zeros((0, order_lattice(N).dim), np.int64)


def parallelepiped_points(N: IntLike) -> np.ndarray:
    """Exponent vectors X with B_N^{-1} X in [0,1)^D (rows, residue order)."""
    Nv = int(factorize(N))
    if Nv < 2:
        raise ValueError("parallelepiped_points needs N >= 2")
    lat = order_lattice(Nv)
    return np.vstack([lat.exponents(x) for x in iter_box_points(Nv)])


def parallelepiped_count(N: IntLike) -> int:
    return math.prod(_parallelepiped_plan(int(factorize(N))).moduli)


def in_parallelepiped(N: IntLike, X: np.ndarray) -> np.ndarray:
    """Exact membership test B_N^{-1} X in [0,1)^D for integer rows X."""
    lat = order_lattice(N)
    x = lat.orders(X)
    return np.all((x >= 0) & (x < lat.m), axis=1)


def nonneg_offsphere_count(N: IntLike) -> int:
    """Parallelepiped points with nonnegative coordinates off the unit sphere."""
    n = 0
    lat = order_lattice(N)
    for x in iter_box_points(N):
        X = lat.exponents(x)
        ok = np.all(X >= 0, axis=1) & (np.sum(X * X, axis=1) != 1)
        n += int(ok.sum())
    assert n >= omega_dprime_bound(N), f"nonnegative point count below its lower bound at N={lat.N}"
    return n


def count_rad_nondividing_divisors(N: IntLike) -> int:
    """#{t | N : rad(N) does not divide gcd(t, N/t)} by direct count."""
    Nv = int(factorize(N))
    r = rad(Nv)
    return sum(1 for t in divisor_basis(Nv) if math.gcd(t, Nv // t) % r)


def count_rad_nondividing_closed_form(N: IntLike) -> int:
    """2 * sum d(N/p^n) - 2^w (w - 1).  Matches the direct count only while
    at most two primes divide N or every exponent is 1."""
    fN = factorize(N)
    w = omega_count(fN)
    return 2 * sum(num_divisors(fN.value // p**n) for p, n in fN.factors) - 2**w * (w - 1)


def simplex_points(N: IntLike, max_divisors: int = 6) -> np.ndarray:
    """Lattice points of conv(0, columns of C_N), i.e. x >= 0 with
    sum x_t / c_t <= 1 for the diagonal c of C_N."""
    C = c_matrix(N)
    if C.size > max_divisors:
        raise GuardError(f"simplex enumeration limited to d(N) <= {max_divisors}")
    c = [C.entries[i][i] for i in range(C.size)]
    L = math.lcm(*c)
    wts = np.array([L // ci for ci in c], dtype=np.int64)
    pts, sums = _prefix_grid(wts, L, None)
    return pts[np.lexsort(pts.T[::-1])]


def simplex_volume_bound(N: IntLike):
    return simplex_volume_term(N)


# ---------------------------------------------------------------------------
# minimal elements


def dominated_mask(points: np.ndarray, divisors: np.ndarray, budget: int = 1 << 25) -> np.ndarray:
    """mask[i] is True when some row of ``divisors`` is <= points[i]."""
    points = np.asarray(points)
    divisors = np.asarray(divisors)
    out = np.zeros(len(points), dtype=bool)
    if len(points) == 0 or len(divisors) == 0:
        return out
    live = np.arange(len(points))
    D = points.shape[1]
    step = max(1, budget // max(1, len(points) * D))
    for s in range(0, len(divisors), step):
        if len(live) == 0:
            break
        blk = divisors[s:s + step]
        sub = points[live]
        if len(blk) == 1:
            hit = np.all(sub >= blk[0], axis=1)
        else:
            hit = np.any(np.all(sub[:, None, :] >= blk[None, :, :], axis=2), axis=1)
        out[live[hit]] = True
        live = live[~hit]
        step = max(1, budget // max(1, len(live) * D))
    return out


def minimal_box_points(N: IntLike) -> tuple[np.ndarray, np.ndarray]:
    """Minimal nonzero parallelepiped points under the componentwise order.

    Returns ``(order_vectors, weights)``.  A box point is factorizable on
    Gamma_0(N) exactly when it dominates another nonzero box point, and any
    dominated point dominates a minimal one of smaller weight, so the points
    are processed by increasing weight.
    """
    Nv = int(factorize(N))
    lat = order_lattice(Nv)
    P = box_points(Nv)
    small = P.astype(np.int16) if int(lat.m.max()) < 2**15 else P
    wts = lat.weights(P)
    nz = np.any(P != 0, axis=1)
    order = np.flatnonzero(nz)
    order = order[np.argsort(wts[order], kind="stable")]
    alive = np.zeros(len(P), dtype=bool)
    alive[order] = True
    atoms: list[np.ndarray] = []
    ws = wts[order]
    bounds = np.flatnonzero(np.diff(ws)) + 1
    groups = np.split(order, bounds)
    for gi, grp in enumerate(groups):
        cur = grp[alive[grp]]
        if len(cur) == 0:
            continue
        atoms.append(cur)
        higher = np.concatenate(groups[gi + 1:]) if gi + 1 < len(groups) else np.zeros(0, np.int64)
        higher = higher[alive[higher]]
        if len(higher) == 0:
            continue
        hit = dominated_mask(small[higher], small[cur])
        alive[higher[hit]] = False
    idx = np.concatenate(atoms) if atoms else np.zeros(0, np.int64)
    return P[idx], wts[idx]
