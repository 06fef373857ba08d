"""Compiled inner loops.

Everything here works on the Gram matrix G = X'X and the moment vector
b = X'y, is written with explicit loops for deterministic summation order,
and is jitted with numba.  No BLAS calls, so results are bit-reproducible
across runs on the same build.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _matvec(a, v, out):
    p = a.shape[0]
    for i in range(p):
        acc = 0.0
        for j in range(p):
            acc += a[i, j] * v[j]
        out[i] = acc


@njit(cache=True)
def univariate_bridge_min(a, lam_over_n, gamma):
    """Positive minimizer of u^2 - 2au + lam_over_n * u^gamma, a > 0.

    Only called after the zero test has ruled the origin out, so the outer
    well exists and is global.  Coarse grid localization followed by Newton
    refinement inside the convex part of the well.
    """
    if lam_over_n == 0.0:
        return a
    best_u = 0.0
    best_h = 0.0  # value at the origin
    hi = 1.2 * a
    for k in range(1, 257):
        u = hi * (k / 256.0)
        h = u * u - 2.0 * a * u + lam_over_n * u**gamma
        if h < best_h:
            best_h = h
            best_u = u
    if best_u == 0.0:
        return 0.0
    u = best_u
    for _ in range(40):
        d2 = 2.0 + lam_over_n * gamma * (gamma - 1.0) * u ** (gamma - 2.0)
        if d2 <= 0.0:
            break
        d1 = 2.0 * u - 2.0 * a + lam_over_n * gamma * u ** (gamma - 1.0)
        delta = d1 / d2
        nxt = u - delta
        if nxt <= 0.0:
            nxt = 0.5 * u
        u = nxt
        if abs(delta) <= 1e-13 * (1.0 + u):
            break
    return u


@njit(cache=True)
def bridge_descend(gram, xty, n, lam, gamma, tol, step, eta, max_iter, c_gamma):
    """Smoothed gradient descent for the bridge objective, 0 < gamma < 1.

    The direction is g1 - g2 with g1 = X'(y - X beta) and the smoothed
    penalty gradient g2_j = (lam*gamma/2) * sign(beta_j) / (|beta_j|^(1-gamma)
    + eta); the sign factor makes g2 vanish at the origin, so the descent
    starts from beta = 0 as a plain least-squares gradient step.  Near-zero
    coordinates feel a penalty pull capped at their data pull (the
    domination rule), and a step that would cross zero stops there exactly.

    A coordinate parked at exact zero by such a clip cannot come back
    through the flow (the penalty slope at 0+ is unbounded), so each
    iteration re-examines the clipped coordinates with the closed-form
    univariate zero test against their current residual correlation; when
    the test finds an interior minimizer the coordinate is re-seated at
    the exact minimizer of its one-dimensional subproblem, which is a
    stationary point of the flow and a strict descent step.  Coordinates
    that have never left zero are not touched by this test: they move with
    the raw gradient until the first time the flow kills them.

    Returns (beta, iterations, converged).  Coordinates with magnitude at
    most ``tol`` at the stopping point are snapped to exact zero.
    """
    p = gram.shape[0]
    beta = np.zeros(p)
    g = np.empty(p)
    g1 = np.empty(p)
    # 0: never nonzero, 1: nonzero, 2: clipped to zero by the flow
    state = np.zeros(p, dtype=np.int8)
    half = 0.5 * lam * gamma  # magnitude scale of the smoothed penalty gradient
    lam_over_n = lam / n
    expo = 2.0 - gamma
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        _matvec(gram, beta, g1)
        for j in range(p):
            g1[j] = xty[j] - g1[j]
        max_change = 0.0
        for j in range(p):
            if state[j] != 2:
                continue
            aj = abs(g1[j]) / n
            if aj > 0.0 and lam_over_n <= c_gamma * aj**expo:
                u = univariate_bridge_min(aj, lam_over_n, gamma)
                if u > 0.0:
                    bj = u if g1[j] > 0.0 else -u
                    beta[j] = bj
                    state[j] = 1
                    for k in range(p):
                        g1[k] -= gram[k, j] * bj
                    if u > max_change:
                        max_change = u
        gmax = 0.0
        for j in range(p):
            if state[j] == 2:
                g[j] = 0.0
                continue
            bj = beta[j]
            if bj == 0.0:
                g[j] = g1[j]
            else:
                abj = abs(bj)
                pen = half / (abj ** (1.0 - gamma) + eta)
                if abj <= tol and pen > abs(g1[j]):
                    pen = abs(g1[j])
                g[j] = g1[j] - pen if bj > 0.0 else g1[j] + pen
            ag = abs(g[j])
            if ag > gmax:
                gmax = ag
        scale = step / gmax if gmax > 1.0 else step
        for j in range(p):
            if state[j] == 2:
                continue
            old = beta[j]
            new = old + scale * g[j]
            if old * new < 0.0:
                new = 0.0  # a shrinking step stops at zero instead of crossing
            beta[j] = new
            if new != 0.0:
                state[j] = 1
            elif old != 0.0:
                state[j] = 2
            ch = abs(new - old)
            if ch > max_change:
                max_change = ch
        if max_change <= tol:
            converged = True
            break
    for j in range(p):
        if abs(beta[j]) <= tol:
            beta[j] = 0.0
    return beta, iterations, converged


@njit(cache=True)
def cd_elastic_net(gram, xty, n, lam1, lam2, fix_tol, max_iter):
    """Cyclic coordinate descent for RSS + lam1*l1 + lam2*l2^2.

    Iterates until the largest coordinate update over a full cycle is at
    most ``fix_tol`` (a fixed-point residual; the stationarity residual
    scales as 2n times this).  lam2 = 0 gives the plain l1 path.
    """
    p = gram.shape[0]
    beta = np.zeros(p)
    thr = 0.5 * lam1
    iterations = 0
    converged = False
    while iterations < max_iter:
        iterations += 1
        max_change = 0.0
        for j in range(p):
            rho = xty[j]
            for k in range(p):
                rho -= gram[j, k] * beta[k]
            rho += gram[j, j] * beta[j]
            if rho > thr:
                new = (rho - thr) / (gram[j, j] + lam2)
            elif rho < -thr:
                new = (rho + thr) / (gram[j, j] + lam2)
            else:
                new = 0.0
            ch = abs(new - beta[j])
            if ch > max_change:
                max_change = ch
            beta[j] = new
        if max_change <= fix_tol:
            converged = True
            break
    return beta, iterations, converged


@njit(cache=True)
def jacobi_eigenvalues(a, rel_tol, max_sweeps):
    """Eigenvalues of a symmetric matrix by the cyclic Jacobi method.

    Plain rotations applied in a fixed row-major order until the
    off-diagonal Frobenius norm falls below rel_tol times the matrix norm.
    Returns the eigenvalues sorted ascending.
    """
    p = a.shape[0]
    w = a.copy()
    norm = 0.0
    for i in range(p):
        for j in range(p):
            norm += w[i, j] * w[i, j]
    norm = np.sqrt(norm)
    if norm == 0.0:
        return np.zeros(p)
    stop = rel_tol * norm
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(p):
            for j in range(i + 1, p):
                off += 2.0 * w[i, j] * w[i, j]
        if np.sqrt(off) <= stop:
            break
        for i in range(p):
            for j in range(i + 1, p):
                apq = w[i, j]
                if apq == 0.0:
                    continue
                theta = (w[j, j] - w[i, i]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(p):
                    wik = w[i, k]
                    wjk = w[j, k]
                    w[i, k] = c * wik - s * wjk
                    w[j, k] = s * wik + c * wjk
                for k in range(p):
                    wki = w[k, i]
                    wkj = w[k, j]
                    w[k, i] = c * wki - s * wkj
                    w[k, j] = s * wki + c * wkj
    return np.sort(np.diag(w).copy())
