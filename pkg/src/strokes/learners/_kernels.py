"""Numba-compiled inner loops for the iterative trainers.

The subgradient SVM and full-batch logistic descent run thousands of
times inside the leave-one-out harness; compiling the loops keeps a
full cell evaluation at desk scale.  Shuffling uses the same SplitMix64
recurrence as strokes.rng so epoch order is reproducible bit-for-bit
(tested against the pure-Python stream).
"""

from __future__ import annotations

import numba
import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_FLOAT_SCALE = 1.0 / 9007199254740992.0  # 2**-53


@numba.njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def _next_float(state):
    state += _GAMMA
    return state, np.float64(_mix64(state) >> _S11) * _FLOAT_SCALE


@numba.njit(cache=True)
def _shuffle(order, state):
    for i in range(order.shape[0] - 1, 0, -1):
        state, u = _next_float(state)
        j = int(u * (i + 1))
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp
    return state


@numba.njit(cache=True)
def svm_subgradient(X, y, lam, n_epochs, seed):
    """Pegasos-style hinge-loss minimization.

    Objective: (lam/2)||w||^2 + mean_i hinge(y_i (w.x_i + b)); one pass
    per epoch over seed-shuffled rows with step 1/(lam*t); the bias is
    unregularized.  Returns the average of the second-half iterates,
    which is far less noisy than the final iterate.
    """
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    avg_w = np.zeros(d)
    avg_b = 0.0
    n_averaged = 0
    total = n_epochs * n
    radius2 = 1.0 / lam  # projection ball ||w||^2 <= 1/lam
    order = np.arange(n)
    state = np.uint64(seed)
    t = 0
    for _ in range(n_epochs):
        state = _shuffle(order, state)
        for k in range(n):
            i = order[k]
            t += 1
            eta = 1.0 / (lam * t)
            score = b
            for j in range(d):
                score += w[j] * X[i, j]
            shrink = 1.0 - 1.0 / t
            if y[i] * score < 1.0:
                step = eta * y[i]
                for j in range(d):
                    w[j] = shrink * w[j] + step * X[i, j]
                b += step
            else:
                for j in range(d):
                    w[j] = shrink * w[j]
            norm2 = 0.0
            for j in range(d):
                norm2 += w[j] * w[j]
            if norm2 > radius2:
                scale = np.sqrt(radius2 / norm2)
                for j in range(d):
                    w[j] *= scale
            if 2 * t > total:
                n_averaged += 1
                for j in range(d):
                    avg_w[j] += (w[j] - avg_w[j]) / n_averaged
                avg_b += (b - avg_b) / n_averaged
    return avg_w, avg_b


@numba.njit(cache=True)
def logreg_gradient_descent(X, y, lam, step, max_iter, tol, w0, b0):
    """Full-batch gradient descent on L2-regularized logistic loss.

    Runs until the gradient norm drops below ``tol`` or ``max_iter``
    iterations; returns (w, b, iterations).
    """
    n, d = X.shape
    w = w0.copy()
    b = b0
    grad_w = np.empty(d)
    for it in range(max_iter):
        for j in range(d):
            grad_w[j] = lam * w[j]
        grad_b = 0.0
        for i in range(n):
            z = b
            for j in range(d):
                z += w[j] * X[i, j]
            m = y[i] * z
            # -y * sigmoid(-m), computed stably
            if m > 0.0:
                e = np.exp(-m)
                g = -y[i] * (e / (1.0 + e)) / n
            else:
                g = -y[i] * (1.0 / (1.0 + np.exp(m))) / n
            for j in range(d):
                grad_w[j] += g * X[i, j]
            grad_b += g
        norm = grad_b * grad_b
        for j in range(d):
            norm += grad_w[j] * grad_w[j]
        if np.sqrt(norm) < tol:
            return w, b, it
        for j in range(d):
            w[j] -= step * grad_w[j]
        b -= step * grad_b
    return w, b, max_iter
