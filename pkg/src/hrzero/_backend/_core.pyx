# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: adaptive Gauss-Kronrod quadrature and mesh Dijkstra.

Mirrors hrzero._backend._pure step for step; the integrand families of
hrzero._backend._families are re-implemented here in C for speed.
"""

from libc.math cimport (INFINITY, expm1, fabs, isfinite, log, log1p, pow,
                        sinh, sqrt)
from libc.stdlib cimport free, malloc, realloc

import numpy as np

cdef double[7] XGK
cdef double[7] WGK
cdef double[3] WG
XGK[0] = 0.991455371120812639; XGK[1] = 0.949107912342758525
XGK[2] = 0.864864423359769073; XGK[3] = 0.741531185599394440
XGK[4] = 0.586087235467691130; XGK[5] = 0.405845151377397167
XGK[6] = 0.207784955007898468
WGK[0] = 0.022935322010529225; WGK[1] = 0.063092092629978553
WGK[2] = 0.104790010322250184; WGK[3] = 0.140653259715525919
WGK[4] = 0.169004726639267903; WGK[5] = 0.190350578064785410
WGK[6] = 0.204432940075298892
cdef double WGK_CENTER = 0.209482141084727828
WG[0] = 0.129484966168869693; WG[1] = 0.279705391489276668
WG[2] = 0.381830050505118945
cdef double WG_CENTER = 0.417959183673469388

cdef double EXP_CAP = 700.0

cdef int F_PROFILE_SLOPE = 1
cdef int F_HEIGHT_V = 2
cdef int F_HEIGHT_U = 3
cdef int F_DHDA_V = 4
cdef int F_DHDA_U = 5
cdef int F_ARCLEN = 6
cdef int F_ARCLEN_U = 7
cdef int F_HEIGHT_TAIL = 8
cdef int F_DHDA_TAIL = 9


def gauss_kronrod_rule():
    """Return (kronrod_nodes, kronrod_weights, gauss_weights) as arrays."""
    nodes = [-XGK[i] for i in range(7)] + [0.0] + [XGK[6 - i] for i in range(7)]
    wk = [WGK[i] for i in range(7)] + [WGK_CENTER] + [WGK[6 - i] for i in range(7)]
    wg = [0.0] * 15
    for i in (1, 3, 5):
        wg[i] = wg[14 - i] = WG[i // 2]
    wg[7] = WG_CENTER
    return np.array(nodes), np.array(wk), np.array(wg)


cdef inline double _coshpow_minus(double s, double two_q, double shift) nogil:
    cdef double hs = sinh(0.5 * s)
    cdef double arg = two_q * log1p(2.0 * hs * hs)
    if arg > EXP_CAP:
        return INFINITY
    return expm1(arg) - shift


cdef inline double _powm1_over(double w, double two_q) nogil:
    cdef double arg
    if w == 0.0:
        return two_q
    arg = two_q * log1p(w)
    if arg > EXP_CAP:
        return INFINITY
    return expm1(arg) / w


cdef inline double _vpow_minus1(double v, double two_q) nogil:
    cdef double arg = two_q * log(v)
    if arg > EXP_CAP:
        return INFINITY
    return expm1(arg)


cdef double eval_family_c(int fid, const double* p, double x) nogil:
    cdef double den, t1, t2, w, ratio, s
    if fid == F_PROFILE_SLOPE:
        den = _coshpow_minus(x, p[0], p[2])
        if den <= 0.0:
            return INFINITY
        return p[1] / sqrt(den)
    if fid == F_HEIGHT_V:
        t1 = _vpow_minus1(x, p[0])
        t2 = p[2] * x * x - 1.0
        if t1 <= 0.0 or t2 <= 0.0:
            return INFINITY
        return p[1] / (sqrt(t1) * sqrt(t2))
    if fid == F_HEIGHT_U:
        w = x * x
        ratio = _powm1_over(w, p[0])
        t2 = p[2] + p[3] * w * (2.0 + w)
        return 2.0 * p[1] / (sqrt(ratio) * sqrt(t2))
    if fid == F_DHDA_V:
        t1 = _vpow_minus1(x, p[0])
        t2 = p[1] * x * x - 1.0
        if t1 <= 0.0 or t2 <= 0.0:
            return INFINITY
        return 1.0 / (sqrt(t1) * t2 * sqrt(t2))
    if fid == F_DHDA_U:
        w = x * x
        ratio = _powm1_over(w, p[0])
        t2 = p[1] + p[2] * w * (2.0 + w)
        return 2.0 / (sqrt(ratio) * t2 * sqrt(t2))
    if fid == F_ARCLEN:
        den = _coshpow_minus(x, p[0], p[2])
        if den <= 0.0:
            return INFINITY
        return sqrt(1.0 + p[1] * p[1] / den)
    if fid == F_ARCLEN_U:
        s = p[3] + x * x
        den = _coshpow_minus(s, p[0], p[2])
        if den <= 0.0 or x == 0.0:
            return 2.0 * p[1] / sqrt(p[4])
        return 2.0 * x * sqrt(1.0 + p[1] * p[1] / den)
    if fid == F_HEIGHT_TAIL or fid == F_DHDA_TAIL:
        if x <= 0.0:
            return 0.0
        t1 = 1.0 - p[2] * pow(x, p[3])
        t2 = p[4] - p[5] * pow(x, p[6])
        if t1 <= 0.0 or t2 <= 0.0:
            return INFINITY
        if fid == F_HEIGHT_TAIL:
            return p[1] * pow(x, p[0]) / (sqrt(t1) * sqrt(t2))
        return p[1] * pow(x, p[0]) / (sqrt(t1) * t2 * sqrt(t2))
    return INFINITY


def eval_family(int fid, double[::1] params, double x):
    """Evaluate one integrand family (exposed for backend parity tests)."""
    return eval_family_c(fid, &params[0], x)


cdef inline void _gk15_fam(int fid, const double* p, double a, double b,
                           double* out_val, double* out_err) nogil:
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = eval_family_c(fid, p, c)
    cdef double sk = WGK_CENTER * fc
    cdef double sg = WG_CENTER * fc
    cdef double dx, s
    cdef int i
    for i in range(7):
        dx = h * XGK[i]
        s = eval_family_c(fid, p, c - dx) + eval_family_c(fid, p, c + dx)
        sk += WGK[i] * s
        if i & 1:
            sg += WG[i // 2] * s
    out_val[0] = sk * h
    out_err[0] = fabs(sk * h - sg * h)


cdef void _gk15_obj(object f, double a, double b,
                    double* out_val, double* out_err):
    cdef double c = 0.5 * (a + b)
    cdef double h = 0.5 * (b - a)
    cdef double fc = <double> f(c)
    cdef double sk = WGK_CENTER * fc
    cdef double sg = WG_CENTER * fc
    cdef double dx, s
    cdef int i
    for i in range(7):
        dx = h * XGK[i]
        s = <double> f(c - dx) + <double> f(c + dx)
        sk += WGK[i] * s
        if i & 1:
            sg += WG[i // 2] * s
    out_val[0] = sk * h
    out_err[0] = fabs(sk * h - sg * h)


cdef struct Panel:
    double negerr
    long counter
    double a
    double b
    double val
    double err


cdef inline bint _panel_lt(Panel* x, Panel* y) nogil:
    if x.negerr != y.negerr:
        return x.negerr < y.negerr
    return x.counter < y.counter


cdef void _heap_push(Panel* heap, int* size, Panel item) nogil:
    cdef int i = size[0]
    cdef int parent
    cdef Panel tmp
    heap[i] = item
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _panel_lt(&heap[i], &heap[parent]):
            tmp = heap[i]; heap[i] = heap[parent]; heap[parent] = tmp
            i = parent
        else:
            break


cdef Panel _heap_pop(Panel* heap, int* size) nogil:
    cdef Panel top = heap[0]
    cdef int n = size[0] - 1
    cdef int i = 0, child
    cdef Panel tmp
    size[0] = n
    heap[0] = heap[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and _panel_lt(&heap[child + 1], &heap[child]):
            child += 1
        if _panel_lt(&heap[child], &heap[i]):
            tmp = heap[i]; heap[i] = heap[child]; heap[child] = tmp
            i = child
        else:
            break
    return top


def adaptive(object f, int fid, params, double a, double b,
             double rel_tol, double abs_tol, int max_subdiv):
    """Globally adaptive integration; same contract as the pure backend."""
    cdef double[::1] pview
    cdef const double* pptr = NULL
    cdef int cap = 64  # grown on demand; most integrals stay tiny
    cdef int cap_limit = 2 * max_subdiv + 8
    cdef Panel* heap = NULL
    cdef Panel* stuck = NULL
    cdef Panel* grown = NULL
    cdef int heap_size = 0, n_stuck = 0, nsub = 0, n_panels = 0
    cdef long counter = 1
    cdef double v0 = 0.0, e0 = 0.0, v1 = 0.0, e1 = 0.0, v2 = 0.0, e2 = 0.0
    cdef double mid, total_val, total_err, tol
    cdef Panel item, popped
    cdef double[::1] lv, vv, ev
    cdef long[::1] ordv
    cdef int k
    cdef double value = 0.0
    cdef double err_total = 0.0

    if fid >= 0:
        pview = np.ascontiguousarray(params, dtype=np.float64)
        pptr = &pview[0]

    if cap > cap_limit:
        cap = cap_limit
    heap = <Panel*> malloc(cap * sizeof(Panel))
    stuck = <Panel*> malloc(cap * sizeof(Panel))
    if heap == NULL or stuck == NULL:
        free(heap); free(stuck)
        raise MemoryError()

    try:
        if fid >= 0:
            _gk15_fam(fid, pptr, a, b, &v0, &e0)
        else:
            _gk15_obj(f, a, b, &v0, &e0)
        item.negerr = -e0; item.counter = 0
        item.a = a; item.b = b; item.val = v0; item.err = e0
        _heap_push(heap, &heap_size, item)

        total_val = v0
        total_err = e0
        while heap_size > 0:
            tol = abs_tol
            if rel_tol * fabs(total_val) > tol:
                tol = rel_tol * fabs(total_val)
            if total_err <= tol or nsub >= max_subdiv:
                break
            if heap_size + 2 > cap or n_stuck + 1 > cap:
                cap = cap * 2 if cap * 2 < cap_limit else cap_limit
                grown = <Panel*> realloc(heap, cap * sizeof(Panel))
                if grown == NULL:
                    raise MemoryError()
                heap = grown
                grown = <Panel*> realloc(stuck, cap * sizeof(Panel))
                if grown == NULL:
                    raise MemoryError()
                stuck = grown
            popped = _heap_pop(heap, &heap_size)
            mid = 0.5 * (popped.a + popped.b)
            if not (popped.a < mid < popped.b):
                stuck[n_stuck] = popped
                n_stuck += 1
                continue
            if fid >= 0:
                _gk15_fam(fid, pptr, popped.a, mid, &v1, &e1)
                _gk15_fam(fid, pptr, mid, popped.b, &v2, &e2)
            else:
                _gk15_obj(f, popped.a, mid, &v1, &e1)
                _gk15_obj(f, mid, popped.b, &v2, &e2)
            nsub += 1
            total_val += v1 + v2 - popped.val
            total_err += e1 + e2 - popped.err
            item.negerr = -e1; item.counter = counter
            item.a = popped.a; item.b = mid; item.val = v1; item.err = e1
            _heap_push(heap, &heap_size, item)
            item.negerr = -e2; item.counter = counter + 1
            item.a = mid; item.b = popped.b; item.val = v2; item.err = e2
            _heap_push(heap, &heap_size, item)
            counter += 2

        n_panels = n_stuck + heap_size
        lefts = np.empty(n_panels, dtype=np.float64)
        vals = np.empty(n_panels, dtype=np.float64)
        errs = np.empty(n_panels, dtype=np.float64)
        lv = lefts
        vv = vals
        ev = errs
        for k in range(n_stuck):
            lv[k] = stuck[k].a; vv[k] = stuck[k].val; ev[k] = stuck[k].err
        for k in range(heap_size):
            lv[n_stuck + k] = heap[k].a
            vv[n_stuck + k] = heap[k].val
            ev[n_stuck + k] = heap[k].err
    finally:
        free(heap)
        free(stuck)

    ordv = np.argsort(lefts, kind="stable").astype(np.int64)
    for k in range(n_panels):
        value += vv[ordv[k]]
        err_total += ev[ordv[k]]
    converged = bool(isfinite(value) and
                     err_total <= max(abs_tol, rel_tol * fabs(value)))
    return value, err_total, nsub, converged


def dijkstra(int n_vertices, int[::1] indptr, int[::1] indices,
             double[::1] weights, int source):
    """Single-source shortest path distances on a CSR graph."""
    dist_arr = np.full(n_vertices, np.inf)
    done_arr = np.zeros(n_vertices, dtype=np.uint8)
    cdef double[::1] dist = dist_arr
    cdef unsigned char[::1] done = done_arr

    cdef long m = weights.shape[0] + 1
    cdef double* hkey = <double*> malloc(m * sizeof(double))
    cdef int* hnode = <int*> malloc(m * sizeof(int))
    if hkey == NULL or hnode == NULL:
        free(hkey); free(hnode)
        raise MemoryError()

    cdef long size = 0
    cdef long i, parent, child, k
    cdef int u, v
    cdef double d, nd, tkey
    cdef int tnode

    dist[source] = 0.0
    hkey[0] = 0.0
    hnode[0] = source
    size = 1
    try:
        while size > 0:
            d = hkey[0]; u = hnode[0]
            size -= 1
            hkey[0] = hkey[size]; hnode[0] = hnode[size]
            i = 0
            while True:
                child = 2 * i + 1
                if child >= size:
                    break
                if child + 1 < size and hkey[child + 1] < hkey[child]:
                    child += 1
                if hkey[child] < hkey[i]:
                    tkey = hkey[i]; hkey[i] = hkey[child]; hkey[child] = tkey
                    tnode = hnode[i]; hnode[i] = hnode[child]; hnode[child] = tnode
                    i = child
                else:
                    break
            if done[u]:
                continue
            done[u] = 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                nd = d + weights[k]
                if nd < dist[v]:
                    dist[v] = nd
                    hkey[size] = nd
                    hnode[size] = v
                    i = size
                    size += 1
                    while i > 0:
                        parent = (i - 1) >> 1
                        if hkey[i] < hkey[parent]:
                            tkey = hkey[i]; hkey[i] = hkey[parent]; hkey[parent] = tkey
                            tnode = hnode[i]; hnode[i] = hnode[parent]; hnode[parent] = tnode
                            i = parent
                        else:
                            break
    finally:
        free(hkey)
        free(hnode)
    return dist_arr
