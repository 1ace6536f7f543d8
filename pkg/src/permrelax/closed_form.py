"""One-parameter analytic objectives on the 2x2 doubly stochastic line.

Every 2x2 doubly stochastic matrix is Q(q) = [[q, 1-q], [1-q, q]] for
q in [0, 1], so objectives restrict to scalar functions of q and the
claimed minimizers can be checked on a grid.  Three families live here:

  * example1_F / example2_F: penalized graph-matching objectives whose
    quadratic parts are 6q^2 - 8q + 2 and 4[q^2 + (1-q)^2].
  * example3_loss / example3_F: the ReLU teacher-student landscape
    l_m(p) for f_m(x, W) = ||phi((mI + W)x)||_1 trained with square
    loss against a fixed nonnegative teacher.

Moment convention: relu_cross_moment and every assembled term are
integrals over the square [-1,1]^2 with unit density, which is 4x the
expectation under the uniform law.  The teacher constant 8113/5184 for
the (1/3, 2/3, 1/4, 3/4) teacher pins this normalization exactly.

The scalar penalty -4*lam*sqrt(q^2 + (1-q)^2) in the F families equals
lam * penalty_value(Q(q)) minus the constant 4*lam.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError

_INPUT_LAWS = ("uniform_square", "gaussian")


def _check_unit_interval(x, name):
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")
    return x


def birkhoff_line(q):
    """The doubly stochastic matrix [[q, 1-q], [1-q, q]]."""
    q = _check_unit_interval(q, "q")
    return np.array([[q, 1.0 - q], [1.0 - q, q]])


def line_penalty(q):
    """sqrt-term shorthand: sqrt(q^2 + (1-q)^2)."""
    return math.sqrt(q * q + (1.0 - q) * (1.0 - q))


def example1_F(q, lam):
    """6q^2 - 8q + 2 - 4*lam*sqrt(q^2 + (1-q)^2) on [0, 1]."""
    q = _check_unit_interval(q, "q")
    return 6.0 * q * q - 8.0 * q + 2.0 - 4.0 * lam * line_penalty(q)


def example2_F(q, lam):
    """4[q^2 + (1-q)^2] - 4*lam*sqrt(q^2 + (1-q)^2) on [0, 1].

    F(0) = F(1) = 4 - 4*lam; interior critical points satisfy q = 1/2
    or q^2 + (1-q)^2 = lam^2/4.
    """
    q = _check_unit_interval(q, "q")
    g = q * q + (1.0 - q) * (1.0 - q)
    return 4.0 * g - 4.0 * lam * math.sqrt(g)


def relu_cross_moment(q, r, s, t):
    """Integral of phi(q*x1 + r*x2) * phi(s*x1 + t*x2) over [-1,1]^2.

    Closed form for nonnegative weights with q + r > 0 and s + t > 0.
    Uses the symmetry I(q,r,s,t) = I(s,t,q,r) to reach the region
    q*t >= r*s, then splits on (q < r), (t < s), else the middle case.
    """
    q, r, s, t = float(q), float(r), float(s), float(t)
    if min(q, r, s, t) < 0.0:
        raise DomainError(f"weights must be nonnegative, got {(q, r, s, t)}")
    if q + r <= 0.0 or s + t <= 0.0:
        raise DomainError(f"each ReLU needs a positive weight sum, got {(q, r, s, t)}")
    if q * t < r * s:
        q, r, s, t = s, t, q, r
    if q < r:
        return (
            2.0 / 3.0 * (q * s + r * t)
            + q * q * (q * t - 3.0 * r * s) / (24.0 * r * r)
            + s * s * (3.0 * q * t - r * s) / (24.0 * t * t)
        )
    if t < s:
        return (
            2.0 / 3.0 * (q * s + r * t)
            + r * r * (3.0 * q * t - r * s) / (24.0 * q * q)
            + t * t * (q * t - 3.0 * r * s) / (24.0 * s * s)
        )
    return (
        (q * s + r * t) / 3.0
        + (q * t + r * s) / 4.0
        + (r * r / (q * q) + s * s / (t * t)) * (3.0 * q * t - r * s) / 24.0
    )


@dataclass(frozen=True)
class TwoLayerTeacher:
    """Teacher weights plus the shared shortcut strength m.

    The effective first-layer rows of f_m(x, W*) are (m+a, b) and
    (c, m+d); the same m shifts the student's diagonal.
    """

    m: float = 0.0
    a: float = 1.0 / 3.0
    b: float = 2.0 / 3.0
    c: float = 1.0 / 4.0
    d: float = 3.0 / 4.0
    input_law: str = "uniform_square"

    def __post_init__(self):
        for name in ("m", "a", "b", "c", "d"):
            v = float(getattr(self, name))
            if v < 0:
                raise DomainError(f"{name} must be >= 0, got {v}")
            object.__setattr__(self, name, v)
        if self.input_law not in _INPUT_LAWS:
            raise ValueError(
                f"input_law must be one of {_INPUT_LAWS}, got {self.input_law!r}"
            )

    def effective_rows(self):
        return (self.m + self.a, self.b), (self.c, self.m + self.d)


def teacher_square_term(teacher):
    """Integral of f_m(x, W*)^2, the p-free constant of the loss.

    For m=0 and the (1/3, 2/3, 1/4, 3/4) teacher this is exactly
    8113/5184.
    """
    (ta, tb), (tc, td) = teacher.effective_rows()
    return (
        2.0 / 3.0 * (ta * ta + tb * tb + tc * tc + td * td)
        + 2.0 * relu_cross_moment(ta, tb, tc, td)
    )


def example3_loss(p, teacher):
    """l_m(p): square-loss landscape of the constrained student Q(p).

    Assembled from the closed-form moments; the Monte-Carlo oracle
    mc_example3_loss checks every piece end to end.
    """
    p = _check_unit_interval(p, "p")
    if teacher.input_law != "uniform_square":
        raise DomainError(
            f"closed form requires input_law='uniform_square', got {teacher.input_law!r}"
        )
    u = teacher.m + p
    v = 1.0 - p
    (ta, tb), (tc, td) = teacher.effective_rows()
    student_sq = 4.0 / 3.0 * (u * u + v * v)
    student_cross = 2.0 * relu_cross_moment(u, v, v, u)
    g1 = relu_cross_moment(u, v, ta, tb) + relu_cross_moment(v, u, ta, tb)
    g2 = relu_cross_moment(u, v, tc, td) + relu_cross_moment(v, u, tc, td)
    return (
        student_sq
        + student_cross
        - 2.0 * g1
        - 2.0 * g2
        + teacher_square_term(teacher)
    )


def example3_F(p, teacher, lam):
    """l_m(p) - 4*lam*sqrt(p^2 + (1-p)^2)."""
    p = _check_unit_interval(p, "p")
    return example3_loss(p, teacher) - 4.0 * lam * line_penalty(p)


def _student_rows(p, m):
    return (m + p, 1.0 - p), (1.0 - p, m + p)


def _relu_response(x, row):
    return np.maximum(x[:, 0] * row[0] + x[:, 1] * row[1], 0.0)


def _draw(rng, law, size):
    if law == "uniform_square":
        return rng.uniform(-1.0, 1.0, size=(size, 2))
    return rng.standard_normal((size, 2))


def mc_pair_moment(row1, row2, samples=1_000_000, seed=0, law="uniform_square"):
    """Monte-Carlo estimate of the phi*phi moment, with standard error.

    Under the square law the estimate is scaled by 4 to match the
    unit-density convention of relu_cross_moment; under the Gaussian
    law it is the plain expectation.
    """
    rng = np.random.default_rng(seed)
    scale = 4.0 if law == "uniform_square" else 1.0
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        size = min(1_000_000, samples - done)
        x = _draw(rng, law, size)
        vals = _relu_response(x, row1) * _relu_response(x, row2)
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += size
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return scale * mean, scale * math.sqrt(var / samples)


def mc_example3_loss(teacher, ps, samples=1_000_000, seed=0):
    """Monte-Carlo values and standard errors of l_m at each p in ps.

    Evaluates the literal loss (student response minus teacher
    response, squared) on one shared sample set, scaled like
    mc_pair_moment.
    """
    ps = [(_check_unit_interval(p, "p")) for p in ps]
    rng = np.random.default_rng(seed)
    scale = 4.0 if teacher.input_law == "uniform_square" else 1.0
    (ta, tb), (tc, td) = teacher.effective_rows()
    totals = np.zeros(len(ps))
    totals_sq = np.zeros(len(ps))
    done = 0
    while done < samples:
        size = min(1_000_000, samples - done)
        x = _draw(rng, teacher.input_law, size)
        teacher_vals = _relu_response(x, (ta, tb)) + _relu_response(x, (tc, td))
        for k, p in enumerate(ps):
            (r1, r2) = _student_rows(p, teacher.m)
            diff = _relu_response(x, r1) + _relu_response(x, r2) - teacher_vals
            sq = diff * diff
            totals[k] += float(sq.sum())
            totals_sq[k] += float((sq * sq).sum())
        done += size
    means = totals / samples
    variances = np.maximum(totals_sq / samples - means * means, 0.0)
    return scale * means, scale * np.sqrt(variances / samples)


def grid_minimize(f, lo, hi, points=2001):
    """Uniform-grid argmin refined by golden-section search to 1e-9.

    Ties on the grid go to the lowest point; the refined value must
    strictly beat the grid value to replace it, so flat stretches and
    endpoint minima return grid points exactly.
    """
    if points < 3:
        raise ValueError(f"points must be >= 3, got {points}")
    xs = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmin(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, points - 1)]
    best_x, best_v = float(xs[i]), float(vals[i])
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-9:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
        for x, v in ((c, fc), (d, fd)):
            if v < best_v:
                best_x, best_v = float(x), float(v)
    return best_x, best_v


def grid_local_minima(f, lo, hi, points=2001):
    """All grid-local minima refined as in grid_minimize.

    Returns a list of (x, value) sorted by x; adjacent refinements that
    land within 1e-7 of each other are merged keeping the lower value.
    """
    if points < 3:
        raise ValueError(f"points must be >= 3, got {points}")
    xs = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in xs])
    candidates = []
    for i in range(points):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i < points - 1 else np.inf
        if vals[i] <= left and vals[i] <= right and (vals[i] < left or vals[i] < right):
            candidates.append(i)
    if not candidates and points:
        candidates = [int(np.argmin(vals))]
    minima = []
    for i in candidates:
        a = xs[max(i - 1, 0)]
        b = xs[min(i + 1, points - 1)]
        x, v = grid_minimize(f, a, b, points=3)
        if minima and abs(x - minima[-1][0]) < 1e-7:
            if v < minima[-1][1]:
                minima[-1] = (x, v)
        else:
            minima.append((x, v))
    return minima
