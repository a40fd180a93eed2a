# cython: language_level=3, boundscheck=False, wraparound=False
"""Scaled-integer slot loop for the built-in policies.

Every quantity is pre-multiplied by the denominator of the speed, so
rates, residual capacities, and remaining sizes are all int64. The
caller guarantees the magnitudes fit; exactness is preserved because
the grid is closed under the loop's min/subtract arithmetic.
"""

from libc.stdlib cimport free, malloc


def run_slots(long long[::1] src, long long[::1] dst,
              long long[::1] size_scaled, long long[::1] release,
              long long[::1] order, long long[::1] by_release,
              long long[::1] cap_scaled, long long horizon):
    """Run the saturating loop; returns (slots, completions).

    `order` is the static priority permutation; `by_release` the job ids
    sorted by release. Slots come back as (t, [(job, scaled rate), ...])
    with empty slots skipped.
    """
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t n_nodes = cap_scaled.shape[0]
    cdef long long *rem = NULL
    cdef long long *res = NULL
    cdef long long *comp = NULL
    cdef Py_ssize_t i, k, j, done = 0, ptr = 0, live = 0
    cdef long long t = 0, rate
    slots = []
    if n == 0:
        return slots, []
    rem = <long long *> malloc(n * sizeof(long long))
    res = <long long *> malloc(n_nodes * sizeof(long long))
    comp = <long long *> malloc(n * sizeof(long long))
    if rem == NULL or res == NULL or comp == NULL:
        free(rem); free(res); free(comp)
        raise MemoryError()
    try:
        for i in range(n):
            rem[i] = size_scaled[i]
            comp[i] = 0
        while done < n:
            while ptr < n and release[<Py_ssize_t> by_release[ptr]] <= t:
                live += 1
                ptr += 1
            if live == 0:
                # nothing alive; jump to the next release
                t = release[<Py_ssize_t> by_release[ptr]]
                continue
            for k in range(n_nodes):
                res[k] = cap_scaled[k]
            entries = None
            for k in range(n):
                j = <Py_ssize_t> order[k]
                if release[j] > t or rem[j] == 0:
                    continue
                rate = res[<Py_ssize_t> src[j]]
                if res[<Py_ssize_t> dst[j]] < rate:
                    rate = res[<Py_ssize_t> dst[j]]
                if rem[j] < rate:
                    rate = rem[j]
                if rate > 0:
                    if entries is None:
                        entries = []
                    entries.append((j, rate))
                    res[<Py_ssize_t> src[j]] -= rate
                    res[<Py_ssize_t> dst[j]] -= rate
                    rem[j] -= rate
                    if rem[j] == 0:
                        comp[j] = t + 1
                        done += 1
                        live -= 1
            if entries is not None:
                slots.append((t, entries))
            t += 1
            if t > horizon:
                raise RuntimeError("slot loop exceeded its horizon bound")
        return slots, [comp[i] for i in range(n)]
    finally:
        free(rem)
        free(res)
        free(comp)
