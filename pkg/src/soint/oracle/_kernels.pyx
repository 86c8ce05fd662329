# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; same contracts as ``_fallback``."""

cdef enum:
    MAXN = 8

ctypedef long long i64


cdef inline i64 _mod(i64 x, i64 m) nogil:
    x %= m
    return x + m if x < 0 else x


cdef void _charpoly(i64 *a, int n, i64 m, i64 *out) nogil:
    """Berkowitz: out[0..n] holds 1, c_1, ..., c_n of det(xI - A) mod m."""
    cdef i64 poly[MAXN + 1]
    cdef i64 newp[MAXN + 1]
    cdef i64 toe[MAXN + 1]
    cdef i64 vec[MAXN]
    cdef i64 tmp[MAXN]
    cdef int k, i, j, r, plen
    cdef i64 s
    poly[0] = 1
    plen = 1
    for k in range(n):
        toe[0] = 1
        toe[1] = _mod(-a[k * n + k], m)
        for i in range(k):
            vec[i] = a[i * n + k]
        for r in range(k):
            s = 0
            for j in range(k):
                s = (s + a[k * n + j] * vec[j]) % m
            toe[r + 2] = _mod(-s, m)
            for i in range(k):
                s = 0
                for j in range(k):
                    s = (s + a[i * n + j] * vec[j]) % m
                tmp[i] = s
            for i in range(k):
                vec[i] = tmp[i]
        for i in range(k + 2):
            s = 0
            for j in range(plen):
                if 0 <= i - j <= k + 1:
                    s = (s + toe[i - j] * poly[j]) % m
            newp[i] = s
        plen = k + 2
        for i in range(plen):
            poly[i] = newp[i]
    for i in range(n + 1):
        out[i] = poly[i]


cdef int _valuation(i64 x, int p, int cap) nogil:
    cdef int k = 0
    if x == 0:
        return cap
    while x % p == 0 and k < cap:
        x //= p
        k += 1
    return k


cdef i64 _inverse(i64 a, i64 m) nogil:
    cdef i64 t = 0, newt = 1, r = m, newr = _mod(a, m), q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    return _mod(t, m)


cdef i64 _count_linear(i64 *mat, i64 *rhs, int n, int p, int prec, i64 m) nogil:
    """Solutions of mat . y = rhs over Z/p^prec for an n x n system (destroys inputs)."""
    cdef int k = 0, i, j, bi, bj, bv, v
    cdef i64 total = 1, pv, f, inv, t
    while k < n:
        bv = -1
        bi = 0
        bj = 0
        for i in range(k, n):
            for j in range(k, n):
                if mat[i * n + j] != 0:
                    v = _valuation(mat[i * n + j], p, prec)
                    if bv < 0 or v < bv:
                        bv = v
                        bi = i
                        bj = j
        if bv < 0:
            break
        if bi != k:
            for j in range(n):
                t = mat[k * n + j]
                mat[k * n + j] = mat[bi * n + j]
                mat[bi * n + j] = t
            t = rhs[k]
            rhs[k] = rhs[bi]
            rhs[bi] = t
        if bj != k:
            for i in range(n):
                t = mat[i * n + k]
                mat[i * n + k] = mat[i * n + bj]
                mat[i * n + bj] = t
        pv = 1
        for i in range(bv):
            pv *= p
        inv = _inverse(mat[k * n + k] // pv, m)
        for i in range(k + 1, n):
            if mat[i * n + k] != 0:
                f = ((mat[i * n + k] // pv) % m) * inv % m
                for j in range(n):
                    mat[i * n + j] = _mod(mat[i * n + j] - f * mat[k * n + j] % m, m)
                rhs[i] = _mod(rhs[i] - f * rhs[k] % m, m)
        if rhs[k] % pv != 0:
            return 0
        total *= pv
        k += 1
    for i in range(k, n):
        if rhs[i] != 0:
            return 0
    for i in range(k, n):
        total *= m
    return total


def count_charpoly_fiber(int n, int p, int prec, target, i64 first_lo, i64 first_hi):
    cdef i64 m = 1
    cdef int i, j, rest
    cdef i64 a[MAXN * MAXN]
    cdef i64 base[MAXN + 1]
    cdef i64 c[MAXN + 1]
    cdef i64 mat[MAXN * MAXN]
    cdef i64 rhs[MAXN]
    cdef i64 tgt[MAXN]
    cdef i64 first, code, ncodes, x, total = 0
    if n > MAXN:
        raise ValueError("matrix too large for the compiled kernel")
    for i in range(prec):
        m *= p
    for i in range(n):
        tgt[i] = _mod(target[i], m)
    if n == 1:
        for first in range(first_lo, first_hi):
            if _mod(-first, m) == tgt[0]:
                total += 1
        return total
    rest = (n - 2) * n
    ncodes = 1
    for i in range(rest):
        ncodes *= m
    with nogil:
        for first in range(first_lo, first_hi):
            x = first
            for j in range(n):
                a[j] = x % m
                x //= m
            for code in range(ncodes):
                x = code
                for i in range(rest):
                    a[n + i] = x % m
                    x //= m
                for j in range(n):
                    a[(n - 1) * n + j] = 0
                _charpoly(a, n, m, base)
                for j in range(n):
                    a[(n - 1) * n + j] = 1
                    _charpoly(a, n, m, c)
                    a[(n - 1) * n + j] = 0
                    for i in range(n):
                        mat[i * n + j] = _mod(c[i + 1] - base[i + 1], m)
                for i in range(n):
                    rhs[i] = _mod(tgt[i] - base[i + 1], m)
                total += _count_linear(mat, rhs, n, p, prec, m)
    return total


def count_charpoly_naive(int n, int p, int prec, target):
    cdef i64 m = 1
    cdef int i
    cdef i64 a[MAXN * MAXN]
    cdef i64 c[MAXN + 1]
    cdef i64 tgt[MAXN]
    cdef i64 code, ncodes = 1, x, total = 0
    cdef bint ok
    for i in range(prec):
        m *= p
    for i in range(n):
        tgt[i] = _mod(target[i], m)
    for i in range(n * n):
        ncodes *= m
    with nogil:
        for code in range(ncodes):
            x = code
            for i in range(n * n):
                a[i] = x % m
                x //= m
            _charpoly(a, n, m, c)
            ok = True
            for i in range(n):
                if c[i + 1] != tgt[i]:
                    ok = False
                    break
            if ok:
                total += 1
    return total


cdef i64 _det_mod_p(i64 *src, int s, int stride, int p) nogil:
    cdef i64 a[MAXN * MAXN]
    cdef int i, j, k, piv
    cdef i64 det = 1, inv, f, t
    for i in range(s):
        for j in range(s):
            a[i * s + j] = _mod(src[i * stride + j], p)
    for k in range(s):
        piv = -1
        for i in range(k, s):
            if a[i * s + k] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != k:
            for j in range(s):
                t = a[k * s + j]
                a[k * s + j] = a[piv * s + j]
                a[piv * s + j] = t
            det = p - det
        det = det * a[k * s + k] % p
        inv = _inverse(a[k * s + k], p)
        for i in range(k + 1, s):
            f = a[i * s + k] * inv % p
            if f != 0:
                for j in range(s):
                    a[i * s + j] = _mod(a[i * s + j] - f * a[k * s + j], p)
    return det % p


cdef int _rank_mod_p(i64 *src, int s, int stride, int p) nogil:
    cdef i64 a[MAXN * MAXN]
    cdef int i, j, c, piv, rank = 0
    cdef i64 inv, f, t
    for i in range(s):
        for j in range(s):
            a[i * s + j] = _mod(src[i * stride + j], p)
    for c in range(s):
        piv = -1
        for i in range(rank, s):
            if a[i * s + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        for j in range(s):
            t = a[rank * s + j]
            a[rank * s + j] = a[piv * s + j]
            a[piv * s + j] = t
        inv = _inverse(a[rank * s + c], p)
        for i in range(s):
            if i != rank and a[i * s + c] != 0:
                f = a[i * s + c] * inv % p
                for j in range(s):
                    a[i * s + j] = _mod(a[i * s + j] - f * a[rank * s + j], p)
        rank += 1
    return rank


cdef i64 _minor_det(i64 *src, int s, int stride, int row, int col, int p) nogil:
    cdef i64 buf[MAXN * MAXN]
    cdef int i, j, r = 0, c
    for i in range(s):
        if i == row:
            continue
        c = 0
        for j in range(s):
            if j == col:
                continue
            buf[r * (s - 1) + c] = src[i * stride + j]
            c += 1
        r += 1
    if s == 1:
        return 1
    return _det_mod_p(buf, s - 1, s - 1, p)


def kappa_fiber_gl(int n, int p, exps, row_exps, coord_exps, modes, values, units,
                   int rank_block, int rank_required, int cof_block, cof_allowed,
                   i64 first_lo, i64 first_hi):
    cdef int i, j, last = n - 1, top_count = n * (n - 1), big = 0, nunits
    cdef i64 m = 1, total = 0, first, code, ncodes, lcode, nl, x, f, d, pw
    cdef int E[MAXN * MAXN]
    cdef bint live[MAXN * MAXN]
    cdef int md[MAXN]
    cdef i64 vals[MAXN]
    cdef i64 pe[MAXN]
    cdef int unit_idx[MAXN * MAXN]
    cdef int allowed[MAXN * MAXN]
    cdef i64 pows[MAXN * MAXN]
    cdef i64 y[MAXN * MAXN]
    cdef i64 red[MAXN * MAXN]
    cdef i64 a[MAXN * MAXN]
    cdef i64 base[MAXN + 1]
    cdef i64 c[MAXN + 1]
    cdef i64 f0[MAXN]
    cdef i64 g[MAXN * MAXN]
    cdef i64 cof[MAXN]
    cdef i64 z[MAXN]
    cdef bint ok
    if n > MAXN or n < 2:
        raise ValueError("unsupported matrix size")
    for i in range(n):
        if coord_exps[i] > big:
            big = coord_exps[i]
    big += 1
    for i in range(big):
        m *= p
    for i in range(n * n):
        E[i] = exps[i]
        live[i] = exps[i] == row_exps[i // n]
        pw = 1
        for j in range(E[i]):
            pw *= p
        pows[i] = pw % m
    for i in range(n):
        md[i] = modes[i]
        vals[i] = _mod(values[i], p)
        pw = 1
        for j in range(coord_exps[i]):
            pw *= p
        pe[i] = pw
    nunits = len(units)
    for i in range(nunits):
        unit_idx[i] = units[i]
    for i in range(cof_block * cof_block):
        allowed[i] = cof_allowed[i]
    ncodes = 1
    for i in range(top_count - n):
        ncodes *= p
    nl = 1
    for i in range(n):
        nl *= p
    with nogil:
        for first in range(first_lo, first_hi):
            x = first
            for j in range(n):
                y[j] = x % p
                x //= p
            for code in range(ncodes):
                x = code
                for i in range(n, top_count):
                    y[i] = x % p
                    x //= p
                ok = True
                for i in range(nunits):
                    if unit_idx[i] < top_count and y[unit_idx[i]] == 0:
                        ok = False
                        break
                if not ok:
                    continue
                for i in range(n * n):
                    red[i] = 0
                for i in range(top_count):
                    if live[i]:
                        red[i] = y[i]
                if rank_block > 0 and _rank_mod_p(red, rank_block, n, p) != rank_required:
                    continue
                if cof_block > 0:
                    ok = False
                    for i in range(cof_block):
                        for j in range(cof_block):
                            if allowed[i * cof_block + j] and _minor_det(red, cof_block, n, i, j, p) != 0:
                                ok = True
                                break
                        if ok:
                            break
                    if not ok:
                        continue
                for i in range(top_count):
                    a[i] = y[i] * pows[i] % m
                for j in range(n):
                    a[last * n + j] = 0
                _charpoly(a, n, m, base)
                for i in range(n):
                    if base[i + 1] % pe[i] != 0:
                        with gil:
                            raise ArithmeticError("shape exponents do not divide the base coefficient")
                    f0[i] = (base[i + 1] // pe[i]) % p
                for j in range(n):
                    a[last * n + j] = pows[last * n + j]
                    _charpoly(a, n, m, c)
                    a[last * n + j] = 0
                    for i in range(n):
                        d = _mod(c[i + 1] - base[i + 1], m)
                        if d % pe[i] != 0:
                            with gil:
                                raise ArithmeticError("shape exponents do not divide a slope coefficient")
                        g[i * n + j] = (d // pe[i]) % p
                for j in range(n):
                    if live[last * n + j]:
                        d = _minor_det(red, n, n, last, j, p)
                        if (last + j) % 2 == 1:
                            d = _mod(-d, p)
                        cof[j] = d
                    else:
                        cof[j] = 0
                for lcode in range(nl):
                    x = lcode
                    for j in range(n):
                        z[j] = x % p
                        x //= p
                    ok = True
                    for i in range(nunits):
                        if unit_idx[i] >= top_count and z[unit_idx[i] - top_count] == 0:
                            ok = False
                            break
                    if not ok:
                        continue
                    d = 0
                    for j in range(n):
                        d += cof[j] * z[j]
                    if d % p == 0:
                        continue
                    for i in range(n):
                        f = f0[i]
                        for j in range(n):
                            f += g[i * n + j] * z[j]
                        f %= p
                        if (md[i] == 0 and f != vals[i]) or (md[i] == 1 and f == 0):
                            ok = False
                            break
                    if ok:
                        total += 1
    return total


cdef inline void _pmul(i64 a0, i64 a1, i64 b0, i64 b1, i64 u, i64 v, i64 m, i64 *r0, i64 *r1) nogil:
    cdef i64 bd = a1 * b1 % m
    r0[0] = (a0 * b0 % m + bd * v) % m
    r1[0] = ((a0 * b1 % m + a1 * b0 % m) % m + bd * u) % m


cdef void _charpoly_pair(i64 *re, i64 *im, int n, i64 m, i64 u, i64 v, i64 *out_re, i64 *out_im) nogil:
    """Berkowitz over (Z/m)[t]/(t^2 - u t - v); entries are re + im * t."""
    cdef i64 pr[MAXN + 1]
    cdef i64 pi[MAXN + 1]
    cdef i64 nr[MAXN + 1]
    cdef i64 ni[MAXN + 1]
    cdef i64 tr[MAXN + 1]
    cdef i64 ti[MAXN + 1]
    cdef i64 vr[MAXN]
    cdef i64 vi[MAXN]
    cdef i64 wr[MAXN]
    cdef i64 wi[MAXN]
    cdef int k, i, j, r, plen
    cdef i64 sr, si, xr, xi
    pr[0] = 1
    pi[0] = 0
    plen = 1
    for k in range(n):
        tr[0] = 1
        ti[0] = 0
        tr[1] = _mod(-re[k * n + k], m)
        ti[1] = _mod(-im[k * n + k], m)
        for i in range(k):
            vr[i] = re[i * n + k]
            vi[i] = im[i * n + k]
        for r in range(k):
            sr = 0
            si = 0
            for j in range(k):
                _pmul(re[k * n + j], im[k * n + j], vr[j], vi[j], u, v, m, &xr, &xi)
                sr = (sr + xr) % m
                si = (si + xi) % m
            tr[r + 2] = _mod(-sr, m)
            ti[r + 2] = _mod(-si, m)
            for i in range(k):
                sr = 0
                si = 0
                for j in range(k):
                    _pmul(re[i * n + j], im[i * n + j], vr[j], vi[j], u, v, m, &xr, &xi)
                    sr = (sr + xr) % m
                    si = (si + xi) % m
                wr[i] = sr
                wi[i] = si
            for i in range(k):
                vr[i] = wr[i]
                vi[i] = wi[i]
        for i in range(k + 2):
            sr = 0
            si = 0
            for j in range(plen):
                if 0 <= i - j <= k + 1:
                    _pmul(tr[i - j], ti[i - j], pr[j], pi[j], u, v, m, &xr, &xi)
                    sr = (sr + xr) % m
                    si = (si + xi) % m
            nr[i] = sr
            ni[i] = si
        plen = k + 2
        for i in range(plen):
            pr[i] = nr[i]
            pi[i] = ni[i]
    for i in range(n + 1):
        out_re[i] = pr[i]
        out_im[i] = pi[i]


def count_u_fiber(int n, int p, int prec, i64 u, i64 v, i64 al_re, i64 al_im, i64 s_total,
                  target, i64 first_lo, i64 first_hi):
    """Anti-hermitian X over (Z/p^prec)[t] with diagonal s_i * alpha, sum s_i = s_total.

    ``target`` is the flat list (re_1, im_1, ..., re_n, im_n) of charpoly
    coefficients.  The partition index is the first diagonal scalar.
    """
    cdef i64 m = 1
    cdef int i, j, k, free_count, npairs
    cdef i64 re[MAXN * MAXN]
    cdef i64 im[MAXN * MAXN]
    cdef i64 cr[MAXN + 1]
    cdef i64 ci[MAXN + 1]
    cdef i64 tgt[2 * MAXN]
    cdef i64 digits[MAXN * MAXN]
    cdef int pos_i[MAXN * MAXN]
    cdef int pos_j[MAXN * MAXN]
    cdef i64 first, code, ncodes, x, s, total = 0
    cdef bint ok
    if n > MAXN:
        raise ValueError("matrix too large for the compiled kernel")
    for i in range(prec):
        m *= p
    u = _mod(u, m)
    v = _mod(v, m)
    for i in range(2 * n):
        tgt[i] = _mod(target[i], m)
    npairs = 0
    for i in range(n):
        for j in range(i + 1, n):
            pos_i[npairs] = i
            pos_j[npairs] = j
            npairs += 1
    # free digits: diagonal scalars 1..n-2, then re/im of each upper entry
    free_count = (n - 2 if n >= 2 else 0) + 2 * npairs
    ncodes = 1
    for i in range(free_count):
        ncodes *= m
    with nogil:
        for first in range(first_lo, first_hi):
            for code in range(ncodes):
                x = code
                for i in range(free_count):
                    digits[i] = x % m
                    x //= m
                if n == 1:
                    s = s_total
                    re[0] = s * al_re % m
                    im[0] = s * al_im % m
                else:
                    s = first
                    re[0] = s * al_re % m
                    im[0] = s * al_im % m
                    for k in range(1, n - 1):
                        s += digits[k - 1]
                        re[k * n + k] = digits[k - 1] * al_re % m
                        im[k * n + k] = digits[k - 1] * al_im % m
                    s = _mod(s_total - s, m)
                    re[(n - 1) * n + n - 1] = s * al_re % m
                    im[(n - 1) * n + n - 1] = s * al_im % m
                for k in range(npairs):
                    i = pos_i[k]
                    j = pos_j[k]
                    re[i * n + j] = digits[(n - 2) + 2 * k]
                    im[i * n + j] = digits[(n - 2) + 2 * k + 1]
                    # below the diagonal: -sigma(x) with sigma(a + b t) = (a + b u) - b t
                    re[j * n + i] = _mod(-(re[i * n + j] + im[i * n + j] * u % m), m)
                    im[j * n + i] = im[i * n + j]
                _charpoly_pair(re, im, n, m, u, v, cr, ci)
                ok = True
                for i in range(n):
                    if cr[i + 1] != tgt[2 * i] or ci[i + 1] != tgt[2 * i + 1]:
                        ok = False
                        break
                if ok:
                    total += 1
    return total
