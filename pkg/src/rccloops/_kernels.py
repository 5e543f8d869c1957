"""Hot sweep kernels over Cayley tables, with numba and pure-numpy paths.

Every kernel exists in two semantically identical versions: a numba
``@njit`` implementation (default) and a vectorized numpy fallback.  Set
the environment variable ``RCCLOOPS_PURE_NUMPY=1`` to force the fallback;
it is also selected automatically when numba cannot be imported.  The
module attribute ``BACKEND`` reports which path is active.

Conventions: tables are square numpy int16 arrays of 0-based indices;
``ldiv[x, y]`` is the unique z with table[x, z] = y and ``rdiv[y, x]`` the
unique z with table[z, x] = y.  Witness-returning kernels scan in a fixed
row-major order so both backends report identical first witnesses.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("RCCLOOPS_PURE_NUMPY", "").strip().lower()
_force_numpy = _flag not in ("", "0", "false", "no")

if not _force_numpy:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - depends on environment
        _force_numpy = True

BACKEND = "numpy" if _force_numpy else "numba"

NO_WITNESS2 = (-1, -1)
NO_WITNESS3 = (-1, -1, -1)


# -- numpy implementations -------------------------------------------------


def _np_bad_row(table):
    m = table.shape[0]
    sorted_rows = np.sort(table, axis=1)
    ok = (sorted_rows == np.arange(m, dtype=table.dtype)).all(axis=1)
    bad = np.nonzero(~ok)[0]
    return int(bad[0]) if bad.size else -1


def _np_bad_col(table):
    return _np_bad_row(np.ascontiguousarray(table.T))


def _np_translation_agreement(table, e, skip_identity_pairs):
    # first (z, x, y), x < y, with table[z, x] == table[z, y]
    m = table.shape[0]
    for z in range(m):
        row = table[z]
        eq = row[:, None] == row[None, :]
        iu = np.triu_indices(m, k=1)
        hits = eq[iu]
        if skip_identity_pairs:
            hits = hits & (iu[0] != e) & (iu[1] != e)
        idx = np.nonzero(hits)[0]
        if idx.size:
            k = int(idx[0])
            return (z, int(iu[0][k]), int(iu[1][k]))
    return NO_WITNESS3


def _np_rcc1_violation(table, ldiv, rdiv):
    m = table.shape[0]
    for x in range(m):
        zx = rdiv[:, x]  # z -> z / x
        mid = table[zx, :]  # (z, y) -> (z/x) y
        lhs = table[mid, x]  # (z, y) -> ((z/x) y) x
        w = ldiv[x, table[:, x]]  # y -> x \ (y x)
        rhs = table[:, w]  # (z, y) -> z (x \ yx)
        bad = lhs != rhs
        if bad.any():
            ys = np.nonzero(bad.any(axis=0))[0]
            y = int(ys[0])
            return (x, y)
    return NO_WITNESS2


def _np_rcc2_violation(table, ldiv, x_lo, x_hi):
    # (x y) z == (x z) * (z \ (y z)) for all triples
    m = table.shape[0]
    for x in range(x_lo, x_hi):
        for z in range(m):
            col_z = table[:, z]
            lhs = col_z[table[x]]  # y -> (x y) z
            w = ldiv[z, col_z]  # y -> z \ (y z)
            rhs = table[table[x, z], w]  # y -> (x z) (z \ yz)
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                return (x, int(bad[0]), z)
    return NO_WITNESS3


def _np_rip_violation(table, inv):
    m = table.shape[0]
    for x in range(m):
        lhs = table[table[:, x], inv[x]]  # y -> (y x) x^{-1}
        bad = np.nonzero(lhs != np.arange(m, dtype=table.dtype))[0]
        if bad.size:
            return (int(bad[0]), x)
    return NO_WITNESS2


def _np_nucleus_masks(table, a_lo, a_hi):
    count = a_hi - a_lo
    nl = np.zeros(count, dtype=np.bool_)
    nm = np.zeros(count, dtype=np.bool_)
    nr = np.zeros(count, dtype=np.bool_)
    for k, a in enumerate(range(a_lo, a_hi)):
        row_a = table[a]
        col_a = table[:, a]
        # a(xy) == (ax)y
        nl[k] = bool((row_a[table] == table[row_a, :]).all())
        # x(ay) == (xa)y
        nm[k] = bool((table[:, row_a] == table[col_a, :]).all())
        # x(ya) == (xy)a
        nr[k] = bool((table[:, col_a] == col_a[table]).all())
    return nl, nm, nr


def _np_commutant_mask(table):
    return (table == table.T).all(axis=1)


def _np_normality_violation(table, ldiv, rdiv, members):
    m = table.shape[0]
    cols = np.arange(m)
    rows_n = table[:, members]  # (x, i) -> x * n_i
    cols_n = table[members, :]  # (i, x) -> n_i * x
    in_row = np.zeros((m, m), dtype=np.bool_)  # in_row[x, v]: v in x*N
    np.put_along_axis(in_row, rows_n, True, axis=1)
    in_col = np.zeros((m, m), dtype=np.bool_)  # in_col[x, v]: v in N*x
    for i in range(members.shape[0]):
        in_col[cols, cols_n[i]] = True
    # xN == Nx (equal size k, so containment suffices)
    if not in_col[cols[:, None], rows_n].all():
        return 1
    # x(yN) == (xy)N
    for y in range(m):
        y_n = table[y, members]
        vals = table[:, y_n]  # (x, i) -> x * (y n_i)
        if not in_row[table[:, y][:, None], vals].all():
            return 2
    # (Nx)y == N(xy)
    for x in range(m):
        n_x = table[members, x]
        vals = table[n_x, :]  # (i, y) -> (n_i x) y
        if not in_col[table[x][None, :], vals].all():
            return 3
    # x(Ny) == (xN)y
    for x in range(m):
        lhs = table[x, cols_n]  # (i, y) -> x * (n_i y)
        rhs = table[table[x, members], :]  # (i, y) -> (x n_i) * y
        rhs_mask = np.zeros((m, m), dtype=np.bool_)
        rhs_mask[rhs, cols[None, :]] = True
        if not rhs_mask[lhs, cols[None, :]].all():
            return 4
    return 0


def _np_apply_sections(pairs, mats, mul_t, add_t, q):
    m = pairs.shape[0]
    a = pairs[:, 0].astype(np.int64)
    b = pairs[:, 1].astype(np.int64)
    table = np.empty((m, m), dtype=np.int16)
    for v in range(m):
        m11, m12, m21, m22 = (int(c) for c in mats[v])
        na = add_t[mul_t[a, m11], mul_t[b, m21]].astype(np.int64)
        nb = add_t[mul_t[a, m12], mul_t[b, m22]].astype(np.int64)
        table[:, v] = (na * q + nb - 1).astype(np.int16)
    return table


# -- numba implementations --------------------------------------------------

if BACKEND == "numba":

    @njit(cache=True, nogil=True)
    def _nb_bad_row(table):
        m = table.shape[0]
        seen = np.zeros(m, dtype=np.uint8)
        for i in range(m):
            seen[:] = 0
            for j in range(m):
                v = table[i, j]
                if v < 0 or v >= m or seen[v]:
                    return i
                seen[v] = 1
        return -1

    @njit(cache=True, nogil=True)
    def _nb_bad_col(table):
        m = table.shape[0]
        seen = np.zeros(m, dtype=np.uint8)
        for j in range(m):
            seen[:] = 0
            for i in range(m):
                v = table[i, j]
                if v < 0 or v >= m or seen[v]:
                    return j
                seen[v] = 1
        return -1

    @njit(cache=True, nogil=True)
    def _nb_translation_agreement(table, e, skip_identity_pairs):
        m = table.shape[0]
        for z in range(m):
            for x in range(m):
                if skip_identity_pairs and x == e:
                    continue
                for y in range(x + 1, m):
                    if skip_identity_pairs and y == e:
                        continue
                    if table[z, x] == table[z, y]:
                        return (z, x, y)
        return (-1, -1, -1)

    @njit(cache=True, nogil=True)
    def _nb_rcc1_violation(table, ldiv, rdiv):
        m = table.shape[0]
        for x in range(m):
            for y in range(m):
                w = ldiv[x, table[y, x]]
                for z in range(m):
                    if table[table[rdiv[z, x], y], x] != table[z, w]:
                        return (x, y)
        return (-1, -1)

    @njit(cache=True, nogil=True)
    def _nb_rcc2_violation(table, ldiv, x_lo, x_hi):
        m = table.shape[0]
        for x in range(x_lo, x_hi):
            for z in range(m):
                xz = table[x, z]
                for y in range(m):
                    if table[table[x, y], z] != table[xz, ldiv[z, table[y, z]]]:
                        return (x, y, z)
        return (-1, -1, -1)

    @njit(cache=True, nogil=True)
    def _nb_rip_violation(table, inv):
        m = table.shape[0]
        for x in range(m):
            ix = inv[x]
            for y in range(m):
                if table[table[y, x], ix] != y:
                    return (y, x)
        return (-1, -1)

    @njit(cache=True, nogil=True)
    def _nb_nucleus_masks(table, a_lo, a_hi):
        m = table.shape[0]
        count = a_hi - a_lo
        nl = np.zeros(count, dtype=np.bool_)
        nm = np.zeros(count, dtype=np.bool_)
        nr = np.zeros(count, dtype=np.bool_)
        for k in range(count):
            a = a_lo + k
            ok = True
            for x in range(m):
                ax = table[a, x]
                for y in range(m):
                    if table[a, table[x, y]] != table[ax, y]:
                        ok = False
                        break
                if not ok:
                    break
            nl[k] = ok
            ok = True
            for x in range(m):
                xa = table[x, a]
                for y in range(m):
                    if table[x, table[a, y]] != table[xa, y]:
                        ok = False
                        break
                if not ok:
                    break
            nm[k] = ok
            ok = True
            for x in range(m):
                for y in range(m):
                    if table[x, table[y, a]] != table[table[x, y], a]:
                        ok = False
                        break
                if not ok:
                    break
            nr[k] = ok
        return nl, nm, nr

    @njit(cache=True, nogil=True)
    def _nb_commutant_mask(table):
        m = table.shape[0]
        out = np.zeros(m, dtype=np.bool_)
        for a in range(m):
            ok = True
            for x in range(m):
                if table[a, x] != table[x, a]:
                    ok = False
                    break
            out[a] = ok
        return out

    @njit(cache=True, nogil=True)
    def _nb_normality_violation(table, ldiv, rdiv, members):
        m = table.shape[0]
        k = members.shape[0]
        in_row = np.zeros((m, m), dtype=np.uint8)
        in_col = np.zeros((m, m), dtype=np.uint8)
        for x in range(m):
            for i in range(k):
                in_row[x, table[x, members[i]]] = 1
                in_col[x, table[members[i], x]] = 1
        for x in range(m):
            for i in range(k):
                if not in_col[x, table[x, members[i]]]:
                    return 1
        for x in range(m):
            for y in range(m):
                xy = table[x, y]
                for i in range(k):
                    if not in_row[xy, table[x, table[y, members[i]]]]:
                        return 2
        for x in range(m):
            for y in range(m):
                xy = table[x, y]
                for i in range(k):
                    if not in_col[xy, table[table[members[i], x], y]]:
                        return 3
        scratch = np.zeros(m, dtype=np.uint8)
        for x in range(m):
            for y in range(m):
                for i in range(k):
                    scratch[table[table[x, members[i]], y]] = 1
                ok = True
                for i in range(k):
                    if not scratch[table[x, table[members[i], y]]]:
                        ok = False
                for i in range(k):
                    scratch[table[table[x, members[i]], y]] = 0
                if not ok:
                    return 4
        return 0

    @njit(cache=True, nogil=True)
    def _nb_apply_sections(pairs, mats, mul_t, add_t, q):
        m = pairs.shape[0]
        table = np.empty((m, m), dtype=np.int16)
        for v in range(m):
            m11 = mats[v, 0]
            m12 = mats[v, 1]
            m21 = mats[v, 2]
            m22 = mats[v, 3]
            for z in range(m):
                a = pairs[z, 0]
                b = pairs[z, 1]
                na = add_t[mul_t[a, m11], mul_t[b, m21]]
                nb = add_t[mul_t[a, m12], mul_t[b, m22]]
                table[z, v] = na * q + nb - 1
        return table


# -- dispatch ----------------------------------------------------------------

if BACKEND == "numba":
    bad_row = _nb_bad_row
    bad_col = _nb_bad_col
    _translation_agreement = _nb_translation_agreement
    _rcc1_violation = _nb_rcc1_violation
    _rcc2_violation = _nb_rcc2_violation
    _rip_violation = _nb_rip_violation
    _nucleus_masks = _nb_nucleus_masks
    commutant_mask = _nb_commutant_mask
    _normality_violation = _nb_normality_violation
    _apply_sections = _nb_apply_sections
else:
    bad_row = _np_bad_row
    bad_col = _np_bad_col
    _translation_agreement = _np_translation_agreement
    _rcc1_violation = _np_rcc1_violation
    _rcc2_violation = _np_rcc2_violation
    _rip_violation = _np_rip_violation
    _nucleus_masks = _np_nucleus_masks
    commutant_mask = _np_commutant_mask
    _normality_violation = _np_normality_violation
    _apply_sections = _np_apply_sections


def translation_agreement(table, e, skip_identity_pairs=True):
    """First (z, x, y) with x < y and z*x == z*y, or (-1, -1, -1).

    With ``skip_identity_pairs`` the scan omits pairs involving the
    identity, matching the fixed-point-free translation criterion; without
    it the condition is exactly row-injectivity of the table.
    """
    return tuple(
        int(v) for v in _translation_agreement(table, e, skip_identity_pairs)
    )


def rcc1_violation(table, ldiv, rdiv):
    """First (x, y) where conjugating R_y by R_x is not R_{x \\ yx}."""
    return tuple(int(v) for v in _rcc1_violation(table, ldiv, rdiv))


def rcc2_violation(table, ldiv, x_lo=0, x_hi=None):
    """First (x, y, z) violating (xy)z == (xz) * (z \\ (yz))."""
    if x_hi is None:
        x_hi = table.shape[0]
    return tuple(int(v) for v in _rcc2_violation(table, ldiv, x_lo, x_hi))


def rip_violation(table, inv):
    """First (y, x) violating (y x) x^{-1} == y."""
    return tuple(int(v) for v in _rip_violation(table, inv))


def nucleus_masks(table, a_lo=0, a_hi=None):
    """(left, middle, right) nucleus membership for candidates in [a_lo, a_hi)."""
    if a_hi is None:
        a_hi = table.shape[0]
    return _nucleus_masks(table, a_lo, a_hi)


def normality_violation(table, ldiv, rdiv, members):
    """0 if the member set satisfies all four normality conditions, else 1-4."""
    members = np.asarray(members, dtype=np.int16)
    return int(_normality_violation(table, ldiv, rdiv, members))


def apply_sections(pairs, mats, mul_t, add_t, q):
    """Cayley table from per-column 2x2 matrices acting on row vectors."""
    return _apply_sections(pairs, mats, mul_t, add_t, q)
