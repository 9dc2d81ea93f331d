# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled gate kernels operating in place on a complex128 state vector.

The complex array is addressed as interleaved doubles so the inner loops
compile to plain real arithmetic.  Pair updates touch disjoint indices, so
results are bitwise identical for any thread count.
"""

from cython.parallel cimport prange

# Below this size the OpenMP region costs more than the work.
DEF PAR_MIN = 1 << 15


def two_sparse(double complex[::1] amps, int q,
               double complex m00, double complex m01,
               double complex m10, double complex m11, int nthreads):
    """Apply a dense 2x2 matrix to amplitude pairs differing in bit q."""
    cdef double* v = <double*> &amps[0]
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t> 1) << q
    cdef Py_ssize_t nblocks = (size >> 1) >> q
    cdef double ar = m00.real, ai = m00.imag, br = m01.real, bi = m01.imag
    cdef double cr = m10.real, ci = m10.imag, dr = m11.real, di = m11.imag
    cdef Py_ssize_t blk, base, k, i2, j2
    cdef double r0, i0, r1, i1
    if nthreads > 1 and size >= PAR_MIN:
        for blk in prange(nblocks, nogil=True, num_threads=nthreads, schedule='static'):
            base = blk << (q + 1)
            for k in range(base, base + stride):
                i2 = 2 * k
                j2 = i2 + 2 * stride
                r0 = v[i2]; i0 = v[i2 + 1]
                r1 = v[j2]; i1 = v[j2 + 1]
                v[i2]     = ar * r0 - ai * i0 + br * r1 - bi * i1
                v[i2 + 1] = ar * i0 + ai * r0 + br * i1 + bi * r1
                v[j2]     = cr * r0 - ci * i0 + dr * r1 - di * i1
                v[j2 + 1] = cr * i0 + ci * r0 + dr * i1 + di * r1
    else:
        with nogil:
            for blk in range(nblocks):
                base = blk << (q + 1)
                for k in range(base, base + stride):
                    i2 = 2 * k
                    j2 = i2 + 2 * stride
                    r0 = v[i2]; i0 = v[i2 + 1]
                    r1 = v[j2]; i1 = v[j2 + 1]
                    v[i2]     = ar * r0 - ai * i0 + br * r1 - bi * i1
                    v[i2 + 1] = ar * i0 + ai * r0 + br * i1 + bi * r1
                    v[j2]     = cr * r0 - ci * i0 + dr * r1 - di * i1
                    v[j2 + 1] = cr * i0 + ci * r0 + dr * i1 + di * r1


def diag_unit(double complex[::1] amps, int q, double complex d1, int nthreads):
    """Diagonal gate with unit upper-left entry: only set-bit amplitudes move."""
    cdef double* v = <double*> &amps[0]
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t> 1) << q
    cdef Py_ssize_t nblocks = (size >> 1) >> q
    cdef double dr = d1.real, di = d1.imag
    cdef Py_ssize_t blk, base, k, j2
    cdef double r1, i1
    if nthreads > 1 and size >= PAR_MIN:
        for blk in prange(nblocks, nogil=True, num_threads=nthreads, schedule='static'):
            base = (blk << (q + 1)) + stride
            for k in range(base, base + stride):
                j2 = 2 * k
                r1 = v[j2]; i1 = v[j2 + 1]
                v[j2]     = dr * r1 - di * i1
                v[j2 + 1] = dr * i1 + di * r1
    else:
        with nogil:
            for blk in range(nblocks):
                base = (blk << (q + 1)) + stride
                for k in range(base, base + stride):
                    j2 = 2 * k
                    r1 = v[j2]; i1 = v[j2 + 1]
                    v[j2]     = dr * r1 - di * i1
                    v[j2 + 1] = dr * i1 + di * r1


def diag(double complex[::1] amps, int q,
         double complex d0, double complex d1, int nthreads):
    """General single-qubit diagonal gate."""
    cdef double* v = <double*> &amps[0]
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t stride = (<Py_ssize_t> 1) << q
    cdef Py_ssize_t nblocks = (size >> 1) >> q
    cdef double ar = d0.real, ai = d0.imag, dr = d1.real, di = d1.imag
    cdef Py_ssize_t blk, base, k, i2, j2
    cdef double r0, i0, r1, i1
    if nthreads > 1 and size >= PAR_MIN:
        for blk in prange(nblocks, nogil=True, num_threads=nthreads, schedule='static'):
            base = blk << (q + 1)
            for k in range(base, base + stride):
                i2 = 2 * k
                j2 = i2 + 2 * stride
                r0 = v[i2]; i0 = v[i2 + 1]
                r1 = v[j2]; i1 = v[j2 + 1]
                v[i2]     = ar * r0 - ai * i0
                v[i2 + 1] = ar * i0 + ai * r0
                v[j2]     = dr * r1 - di * i1
                v[j2 + 1] = dr * i1 + di * r1
    else:
        with nogil:
            for blk in range(nblocks):
                base = blk << (q + 1)
                for k in range(base, base + stride):
                    i2 = 2 * k
                    j2 = i2 + 2 * stride
                    r0 = v[i2]; i0 = v[i2 + 1]
                    r1 = v[j2]; i1 = v[j2 + 1]
                    v[i2]     = ar * r0 - ai * i0
                    v[i2 + 1] = ar * i0 + ai * r0
                    v[j2]     = dr * r1 - di * i1
                    v[j2 + 1] = dr * i1 + di * r1


def cz(double complex[::1] amps, int q_lo, int q_hi, int nthreads):
    """Negate amplitudes whose bits q_lo and q_hi are both set."""
    cdef double* v = <double*> &amps[0]
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t lo = q_lo, hi = q_hi
    cdef Py_ssize_t quarter = size >> 2
    cdef Py_ssize_t lo_mask = ((<Py_ssize_t> 1) << lo) - 1
    cdef Py_ssize_t mid_mask = ((<Py_ssize_t> 1) << (hi - 1)) - 1
    cdef Py_ssize_t g, idx, i2
    if nthreads > 1 and size >= PAR_MIN:
        for g in prange(quarter, nogil=True, num_threads=nthreads, schedule='static'):
            idx = ((g >> (hi - 1)) << (hi + 1)) | ((<Py_ssize_t> 1) << hi) \
                | (((g & mid_mask) >> lo) << (lo + 1)) | ((<Py_ssize_t> 1) << lo) \
                | (g & lo_mask)
            i2 = 2 * idx
            v[i2] = -v[i2]
            v[i2 + 1] = -v[i2 + 1]
    else:
        with nogil:
            for g in range(quarter):
                idx = ((g >> (hi - 1)) << (hi + 1)) | ((<Py_ssize_t> 1) << hi) \
                    | (((g & mid_mask) >> lo) << (lo + 1)) | ((<Py_ssize_t> 1) << lo) \
                    | (g & lo_mask)
                i2 = 2 * idx
                v[i2] = -v[i2]
                v[i2 + 1] = -v[i2 + 1]
