# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled event loops; same algorithms and draw order as ``_purepy``."""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport INFINITY, cos, log, pow, sin, tan
from numpy.random cimport bitgen_t

cnp.import_array()

cdef enum:
    EXPONENTIAL = 0
    PARETO = 2
    CAP_EXCEEDED = -1


cdef struct Law:
    int kind
    double scale
    double inv_beta
    double bp
    double sin_bp
    double cos_bp
    double pareto_exp


cdef inline double uniform(bitgen_t *bg) nogil:
    return bg.next_double(bg.state)


cdef Law make_law(tuple law):
    cdef Law out
    kind, scale, beta, delta = law
    out.kind = kind
    out.scale = scale
    out.inv_beta = 1.0 / beta if beta else 1.0
    out.bp = beta * 3.141592653589793
    out.sin_bp = sin(out.bp)
    out.cos_bp = cos(out.bp)
    out.pareto_exp = -1.0 / (delta - 1.0) if delta else 0.0
    return out


cdef inline double gap(bitgen_t *bg, Law *law) nogil:
    cdef double t, e, v, w
    while True:
        if law.kind == PARETO:
            t = pow(1.0 - uniform(bg), law.pareto_exp) - 1.0
        else:
            e = -log(1.0 - uniform(bg))
            if law.kind == EXPONENTIAL or law.inv_beta == 1.0:
                t = law.scale * e
            else:
                v = 1.0 - uniform(bg)
                w = law.sin_bp / tan(law.bp * v) - law.cos_bp
                if w > 0:
                    t = law.scale * e * pow(w, law.inv_beta)
                else:
                    t = 0.0
        if 0.0 < t < INFINITY:
            return t


cdef bitgen_t *get_bitgen(rng) except NULL:
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef inline long toggle(bitgen_t *bg, unsigned char[::1] state, double alpha, long links) nogil:
    cdef Py_ssize_t m = state.shape[0]
    cdef Py_ssize_t k
    if alpha > 0.0 and uniform(bg) < alpha:
        return links
    k = <Py_ssize_t>(uniform(bg) * m)
    if state[k]:
        state[k] = 0
        return links - 1
    state[k] = 1
    return links + 1


def rlad_record(rng, unsigned char[::1] state, double alpha, tuple law, double[::1] record_times, long cap):
    cdef bitgen_t *bg = get_bitgen(rng)
    cdef Law lw = make_law(law)
    cdef Py_ssize_t n_rec = record_times.shape[0], idx
    cdef long links = 0, events = 0
    cdef Py_ssize_t k
    for k in range(state.shape[0]):
        links += state[k]
    out = np.empty(n_rec, dtype=np.int64)
    cdef long long[::1] o = out
    cdef double nxt, r
    with rng.bit_generator.lock:
        with nogil:
            nxt = gap(bg, &lw)
            for idx in range(n_rec):
                r = record_times[idx]
                while nxt <= r:
                    links = toggle(bg, state, alpha, links)
                    events += 1
                    if events > cap:
                        break
                    nxt += gap(bg, &lw)
                if events > cap:
                    break
                o[idx] = links
    if events > cap:
        return out, CAP_EXCEEDED
    return out, events


def rlad_trace(rng, unsigned char[::1] state, double alpha, tuple law, double horizon, long cap):
    cdef bitgen_t *bg = get_bitgen(rng)
    cdef Law lw = make_law(law)
    cdef long links = 0, n = 0
    cdef Py_ssize_t k
    for k in range(state.shape[0]):
        links += state[k]
    times = [0.0]
    counts = [links]
    cdef double nxt
    with rng.bit_generator.lock:
        nxt = gap(bg, &lw)
        while nxt <= horizon:
            links = toggle(bg, state, alpha, links)
            times.append(nxt)
            counts.append(links)
            n += 1
            if n > cap:
                return np.array(times), np.array(counts, dtype=np.int64), CAP_EXCEEDED
            nxt += gap(bg, &lw)
    return np.array(times), np.array(counts, dtype=np.int64), n


cdef struct Sis:
    int n
    long links
    long n_inf
    long si


cdef inline void sis_toggle(bitgen_t *bg, Sis *s, unsigned char[::1] state, int[::1] pu, int[::1] pv,
                            unsigned char[:, ::1] adj, unsigned char[::1] inf, long[::1] c, double alpha) nogil:
    cdef Py_ssize_t k
    cdef int u, v, d
    cdef unsigned char iu, iv
    if alpha > 0.0 and uniform(bg) < alpha:
        return
    k = <Py_ssize_t>(uniform(bg) * state.shape[0])
    u = pu[k]
    v = pv[k]
    if state[k]:
        state[k] = 0
        adj[u, v] = 0
        adj[v, u] = 0
        d = -1
    else:
        state[k] = 1
        adj[u, v] = 1
        adj[v, u] = 1
        d = 1
    s.links += d
    iu = inf[u]
    iv = inf[v]
    if iu:
        c[v] += d
    if iv:
        c[u] += d
    if iu != iv:
        s.si += d


cdef inline void sis_infect(bitgen_t *bg, Sis *s, unsigned char[:, ::1] adj, unsigned char[::1] inf, long[::1] c) nogil:
    cdef long target = <long>(uniform(bg) * s.si)
    cdef long acc = 0
    cdef int v, w, x = s.n - 1
    for v in range(s.n):
        if not inf[v]:
            acc += c[v]
            if acc > target:
                x = v
                break
    s.si -= c[x]
    inf[x] = 1
    s.n_inf += 1
    for w in range(s.n):
        if adj[x, w]:
            c[w] += 1
            if not inf[w]:
                s.si += 1


cdef inline void sis_recover(bitgen_t *bg, Sis *s, unsigned char[:, ::1] adj, unsigned char[::1] inf, long[::1] c) nogil:
    cdef long target = <long>(uniform(bg) * s.n_inf)
    cdef long seen = 0
    cdef int v, w, r = s.n - 1
    for v in range(s.n):
        if inf[v]:
            if seen == target:
                r = v
                break
            seen += 1
    for w in range(s.n):
        if adj[r, w]:
            c[w] -= 1
            if not inf[w]:
                s.si -= 1
    inf[r] = 0
    s.n_inf -= 1
    s.si += c[r]


def sis_run(rng, unsigned char[::1] state, int[::1] pair_u, int[::1] pair_v, int n, infected, double alpha,
            tuple law, double rate_inf, double rate_rec, double[::1] record_times, long cap, bint trace):
    cdef bitgen_t *bg = get_bitgen(rng)
    cdef Law lw = make_law(law)
    cdef Sis s
    cdef Py_ssize_t k, n_rec = record_times.shape[0], idx = 0
    cdef int v, w
    adj_arr = np.zeros((n, n), dtype=np.uint8)
    inf_arr = np.array(infected, dtype=np.uint8)
    c_arr = np.zeros(n, dtype=np.int_)
    cdef unsigned char[:, ::1] adj = adj_arr
    cdef unsigned char[::1] inf = inf_arr
    cdef long[::1] c = c_arr
    s.n = n
    s.links = 0
    for k in range(state.shape[0]):
        if state[k]:
            adj[pair_u[k], pair_v[k]] = 1
            adj[pair_v[k], pair_u[k]] = 1
            s.links += 1
    s.n_inf = 0
    s.si = 0
    for v in range(n):
        s.n_inf += inf[v]
        for w in range(n):
            if adj[v, w] and inf[w]:
                c[v] += 1
    for v in range(n):
        if not inf[v]:
            s.si += c[v]
    links_arr = np.empty(n_rec, dtype=np.int64)
    infat_arr = np.empty(n_rec, dtype=np.int64)
    cdef long long[::1] links_at = links_arr
    cdef long long[::1] inf_at = infat_arr
    cdef double horizon = record_times[n_rec - 1] if n_rec else 0.0
    cdef double t = 0.0, t_epi, t_next, nxt, rate
    cdef long events = 0
    rows = [(0.0, s.links, s.n_inf)] if trace else None
    with rng.bit_generator.lock:
        nxt = gap(bg, &lw)
        while True:
            rate = s.si * rate_inf + s.n_inf * rate_rec
            if rate > 0.0:
                t_epi = t - log(1.0 - uniform(bg)) / rate
            else:
                t_epi = INFINITY
            t_next = t_epi if t_epi < nxt else nxt
            while idx < n_rec and record_times[idx] < t_next:
                links_at[idx] = s.links
                inf_at[idx] = s.n_inf
                idx += 1
            if t_next > horizon:
                break
            if t_epi < nxt:
                t = t_epi
                if uniform(bg) * rate < s.si * rate_inf:
                    sis_infect(bg, &s, adj, inf, c)
                else:
                    sis_recover(bg, &s, adj, inf, c)
            else:
                t = nxt
                sis_toggle(bg, &s, state, pair_u, pair_v, adj, inf, c, alpha)
                nxt += gap(bg, &lw)
            events += 1
            if trace:
                rows.append((t, s.links, s.n_inf))
            if events > cap:
                return links_arr, infat_arr, CAP_EXCEEDED, rows
    return links_arr, infat_arr, events, rows
