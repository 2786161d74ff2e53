import numpy as np


def nnls(A, b, maxiter=None, tol=None):
    """
    Solve ``min ||A x - b||`` subject to ``x >= 0`` with the Lawson-Hanson
    active-set method.

    Parameters
    ----------
    A : array_like, shape (m, n)
    b : array_like, shape (m,)
    maxiter : int, optional
        Cap on outer iterations (default ``3 * n``).
    tol : float, optional
        Dual-feasibility threshold: a variable is freed only if its entry of
        ``w = A^T (b - A x)`` exceeds ``tol`` (default
        ``10 * eps * max(m, n) * max(1, max|A|) * max(1, max|b|)``).

    Returns
    -------
    x : ndarray, shape (n,)
        Solution; variables outside the passive set are exactly zero.
    rnorm : float
        ``||A x - b||``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"b has shape {b.shape}, expected ({m},)")
    if maxiter is None:
        maxiter = 3 * n
    if tol is None:
        eps = np.finfo(float).eps
        tol = 10 * eps * max(m, n) * max(1.0, np.abs(A).max(initial=0.0)) * max(1.0, np.abs(b).max(initial=0.0))

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    blocked = np.zeros(n, dtype=bool)
    w = A.T @ b

    for _ in range(maxiter):
        cand = np.where(passive | blocked, -np.inf, w)
        j = int(np.argmax(cand))
        if cand[j] <= tol:
            break
        passive[j] = True

        idx = np.flatnonzero(passive)
        z = np.zeros(n)
        z[idx] = np.linalg.lstsq(A[:, idx], b, rcond=None)[0]
        if z[j] <= 0:
            # freeing j cannot help at working precision
            passive[j] = False
            blocked[j] = True
            continue

        while np.any(z[idx] <= 0):
            neg = idx[z[idx] <= 0]
            ratios = x[neg] / (x[neg] - z[neg])
            k = int(np.argmin(ratios))
            x = x + ratios[k] * (z - x)
            x[neg[k]] = 0.0
            passive &= x > 0
            x[~passive] = 0.0
            idx = np.flatnonzero(passive)
            z = np.zeros(n)
            if idx.size:
                z[idx] = np.linalg.lstsq(A[:, idx], b, rcond=None)[0]
        x = z
        blocked[:] = False
        w = A.T @ (b - A @ x)

    return x, float(np.linalg.norm(A @ x - b))
