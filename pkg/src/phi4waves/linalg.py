"""Dense symmetric eigensolver: Householder tridiagonalisation + implicit QL.

The QL sweep follows the classic EISPACK ``tql2`` / Numerical Recipes
``tqli`` recurrence with Wilkinson-type shifts.  Eigenvectors are stored as
rows while rotating so that each Givens rotation touches two contiguous rows.
"""
import math

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = ["tridiagonalize", "tql_implicit", "eigh_symmetric"]

EPS = np.finfo(float).eps
QL_MAXITER = 30


def tridiagonalize(a):
    """Reduce a symmetric matrix to tridiagonal form, ``a = Q T Q^T``.

    Returns
    -------
    d : ndarray, shape (n,)
        Diagonal of T.
    e : ndarray, shape (n-1,)
        Sub-diagonal of T.
    q : ndarray, shape (n, n)
        Orthogonal transformation.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DomainError("tridiagonalize needs a square matrix")
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        xnorm = math.sqrt(float(x @ x))
        if xnorm == 0.0:
            continue
        alpha = -math.copysign(xnorm, x[0])
        v = x.copy()
        v[0] -= alpha
        vv = float(v @ v)
        if vv == 0.0:
            continue
        beta = 2.0 / vv
        sub = a[k + 1:, k + 1:]
        p = beta * (sub @ v)
        w = p - (0.5 * beta * float(v @ p)) * v
        sub -= np.outer(v, w) + np.outer(w, v)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
        qs = q[:, k + 1:]
        qs -= np.outer(beta * (qs @ v), v)
    return np.diag(a).copy(), np.diag(a, -1).copy(), q


def tql_implicit(d, e, zt=None, maxiter=QL_MAXITER):
    """Eigenvalues (and optionally vectors) of a symmetric tridiagonal matrix.

    Parameters
    ----------
    d, e : array_like
        Diagonal (n) and sub-diagonal (n-1).
    zt : ndarray, shape (n, n), optional
        Rows are rotated in place.  Pass ``Q^T`` from :func:`tridiagonalize`
        to obtain eigenvectors of the original matrix as rows.
    maxiter : int
        Iteration cap per eigenvalue.

    Returns
    -------
    ndarray
        Unsorted eigenvalues; row ``i`` of ``zt`` belongs to entry ``i``.
    """
    d = [float(v) for v in d]
    n = len(d)
    e = [float(v) for v in e] + [0.0]
    rot = np.empty((2, 2))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if it == maxiter:
                raise ConvergenceError(f"QL iteration did not converge for eigenvalue {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    rot[0, 0] = c
                    rot[0, 1] = -s
                    rot[1, 0] = s
                    rot[1, 1] = c
                    zt[i:i + 2] = rot @ zt[i:i + 2]
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.array(d)


def eigh_symmetric(a, vectors=True):
    """All eigenpairs of a real symmetric matrix, ascending.

    Returns ``w`` or ``(w, v)`` with eigenvectors in the columns of ``v``,
    mirroring :func:`numpy.linalg.eigh`.
    """
    d, e, q = tridiagonalize(a)
    zt = q.T.copy() if vectors else None
    w = tql_implicit(d, e, zt)
    order = np.argsort(w, kind="stable")
    w = w[order]
    if not vectors:
        return w
    return w, zt[order].T
