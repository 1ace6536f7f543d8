"""Central finite differences for checking analytic gradients."""

import numpy as np


def central_difference(f, x, step=1e-6):
    """Numerical gradient of scalar f at array x, one coordinate at a time."""
    x = np.array(x, dtype=float)
    g = np.zeros_like(x)
    flat = g.reshape(-1)
    xf = x.reshape(-1)
    for k in range(xf.size):
        saved = xf[k]
        xf[k] = saved + step
        hi = f(x)
        xf[k] = saved - step
        lo = f(x)
        xf[k] = saved
        flat[k] = (hi - lo) / (2.0 * step)
    return g


def max_relative_error(analytic, numeric, floor=1e-8):
    """Worst entrywise |a - n| / max(floor, |a|, |n|)."""
    analytic = np.asarray(analytic, dtype=float)
    numeric = np.asarray(numeric, dtype=float)
    scale = np.maximum(floor, np.maximum(np.abs(analytic), np.abs(numeric)))
    return float((np.abs(analytic - numeric) / scale).max())
