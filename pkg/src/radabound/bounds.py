"""Concentration bounds used to certify answers on a reused holdout sample.

All functions here are pure and return probabilities in [0, 1].  They bound
either the error of the Monte-Carlo Rademacher-complexity estimate
(``est_error_*``) or the probability that the accumulated estimation error of
the whole query family exceeds the remaining budget (``overfit_bound_*``).

The ``slack`` argument is the remaining error budget after subtracting twice
the current complexity estimate from the user's tolerance; it is always
non-negative (the caller clamps at zero) and slack = 0 is a legal degenerate
input: exponential bounds return 1 there, the normal-approximation bound
returns 0.5.
"""

from __future__ import annotations

import math
from enum import Enum

from .errors import DomainError

_SQRT2 = math.sqrt(2.0)

# Inner-minimization controls for the two bounds defined as a minimum over a
# free split of the budget: coarse uniform grid, then golden-section
# refinement around the best grid point.
_GRID_POINTS = 1024
_REFINE_REL_TOL = 1e-10


class BoundMethod(Enum):
    """Which certification bound the guard applies at each step."""

    BERNSTEIN_TWO_TERM = "bernstein_two_term"
    BERNSTEIN_SINGLE = "bernstein_single"
    MCLT = "mclt"
    MCDIARMID_COMBINED = "mcdiarmid_combined"


# ---------------------------------------------------------------------------
# Standard normal CDF (self-contained, no scipy / math.erf dependency)
# ---------------------------------------------------------------------------

# Rational approximations for erf/erfc due to W. J. Cody, "Rational Chebyshev
# approximation for the error function" (1969), as used in SPECFUN's CALERF.
# Relative accuracy is near machine precision over the whole double range.
_ERF_A = (
    3.16112374387056560e00,
    1.13864154151050156e02,
    3.77485237685302021e02,
    3.20937758913846947e03,
    1.85777706184603153e-1,
)
_ERF_B = (
    2.36012909523441209e01,
    2.44024637934444173e02,
    1.28261652607737228e03,
    2.84423683343917062e03,
)
_ERF_C = (
    5.64188496988670089e-1,
    8.88314979438837594e00,
    6.61191906371416295e01,
    2.98635138197400131e02,
    8.81952221241769090e02,
    1.71204761263407058e03,
    2.05107837782607147e03,
    1.23033935479799725e03,
    2.15311535474403846e-8,
)
_ERF_D = (
    1.57449261107098347e01,
    1.17693950891312499e02,
    5.37181101862009858e02,
    1.62138957456669019e03,
    3.29079923573345963e03,
    4.36261909014324716e03,
    3.43936767414372164e03,
    1.23033935480374942e03,
)
_ERF_P = (
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
)
_ERF_Q = (
    2.56852019228982242e00,
    1.87295284992346047e00,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
)
_ONE_OVER_SQRT_PI = 5.6418958354775628695e-1
_ERFC_XBIG = 26.543  # erfc underflows to 0 beyond this


def _erfc_nonneg(y: float) -> float:
    """erfc(y) for y >= 0 via Cody's three-region rational approximation."""
    if y <= 0.46875:
        z = y * y
        num = _ERF_A[4] * z
        den = z
        for i in range(3):
            num = (num + _ERF_A[i]) * z
            den = (den + _ERF_B[i]) * z
        return 1.0 - y * (num + _ERF_A[3]) / (den + _ERF_B[3])
    if y <= 4.0:
        num = _ERF_C[8] * y
        den = y
        for i in range(7):
            num = (num + _ERF_C[i]) * y
            den = (den + _ERF_D[i]) * y
        result = (num + _ERF_C[7]) / (den + _ERF_D[7])
    else:
        if y >= _ERFC_XBIG:
            return 0.0
        z = 1.0 / (y * y)
        num = _ERF_P[5] * z
        den = z
        for i in range(4):
            num = (num + _ERF_P[i]) * z
            den = (den + _ERF_Q[i]) * z
        result = z * (num + _ERF_P[4]) / (den + _ERF_Q[4])
        result = (_ONE_OVER_SQRT_PI - result) / y
    # Split exp(-y^2) to keep full relative accuracy in the far tail.
    ysq = math.floor(y * 16.0) / 16.0
    delta = (y - ysq) * (y + ysq)
    return math.exp(-ysq * ysq) * math.exp(-delta) * result


def erfc(x: float) -> float:
    """Complementary error function, accurate to ~1e-15 relative."""
    if x >= 0.0:
        return _erfc_nonneg(x)
    return 2.0 - _erfc_nonneg(-x)


def normal_cdf(x: float) -> float:
    """Standard normal CDF.

    Raises DomainError on non-finite input.  Satisfies
    normal_cdf(x) + normal_cdf(-x) == 1 exactly in floating point.
    """
    if not math.isfinite(x):
        raise DomainError(f"normal_cdf requires a finite argument, got {x!r}")
    return 0.5 * erfc(-x / _SQRT2)


def normal_sf(x: float) -> float:
    """Upper tail 1 - normal_cdf(x), computed without cancellation."""
    if not math.isfinite(x):
        raise DomainError(f"normal_sf requires a finite argument, got {x!r}")
    return 0.5 * erfc(x / _SQRT2)


# ---------------------------------------------------------------------------
# Estimate-error bounds (complexity estimate vs its expectation)
# ---------------------------------------------------------------------------


def _check_counts(m: int, n_vectors: int | None = None) -> None:
    if m < 1:
        raise DomainError(f"sample size must be >= 1, got {m}")
    if n_vectors is not None and n_vectors < 1:
        raise DomainError(f"sign-vector count must be >= 1, got {n_vectors}")


def _check_eps(eps: float) -> None:
    if not eps > 0.0:
        raise DomainError(f"estimate-error tolerance must be > 0, got {eps}")


def _check_slack(slack: float) -> None:
    if not slack >= 0.0:
        raise DomainError(f"slack must be >= 0, got {slack}")


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def est_error_bernstein(m: int, n_vectors: int, eps: float) -> float:
    """Martingale-Bernstein bound on the complexity-estimate error.

    exp(-6 m l eps^2 / (15 + 8 l eps)) with l = n_vectors, clamped to [0, 1].
    """
    _check_counts(m, n_vectors)
    _check_eps(eps)
    return _clamp(
        math.exp(-6.0 * m * n_vectors * eps * eps / (15.0 + 8.0 * n_vectors * eps))
    )


def est_error_mcdiarmid(m: int, n_vectors: int, eps: float) -> float:
    """McDiarmid bound on the complexity-estimate error: exp(-2 m l eps^2 / (l + 4))."""
    _check_counts(m, n_vectors)
    _check_eps(eps)
    return _clamp(math.exp(-2.0 * m * n_vectors * eps * eps / (n_vectors + 4.0)))


def est_error_mcdiarmid_single(m: int, eps: float) -> float:
    """McDiarmid bound for a single sign vector: exp(-m eps^2 / 2)."""
    _check_counts(m)
    _check_eps(eps)
    return _clamp(math.exp(-m * eps * eps / 2.0))


def est_error_mclt(m: int, n_vectors: int, slack: float) -> float:
    """Normal-limit bound on the complexity-estimate error.

    Tail probability of exceeding ``slack`` once the standardized estimate
    error is treated as N(0, 5/(4 l m)).  Analysis/comparison use only.
    """
    _check_counts(m, n_vectors)
    _check_slack(slack)
    return normal_sf(2.0 * slack * math.sqrt(n_vectors * m / 5.0))


def gen_error_mclt(m: int, slack: float) -> float:
    """Normal-limit bound on the deviation of the worst-case estimation error
    from its mean: tail of N(0, 1/(4m)) at ``slack``.  Analysis use only."""
    _check_counts(m)
    _check_slack(slack)
    return normal_sf(2.0 * slack * math.sqrt(m))


# ---------------------------------------------------------------------------
# Overfit-probability bounds (guard hot path)
# ---------------------------------------------------------------------------


def _minimize_split(objective, upper: float) -> float:
    """Minimize a smooth scalar function over the open interval (0, upper).

    Coarse uniform grid (_GRID_POINTS interior points) followed by
    golden-section refinement around the best grid point.  The grid guards
    against stray local minima; golden section then converges to relative
    tolerance _REFINE_REL_TOL on the argument.
    """
    h = upper / (_GRID_POINTS + 1)
    best_i = 1
    best_v = math.inf
    for i in range(1, _GRID_POINTS + 1):
        v = objective(i * h)
        if v < best_v:
            best_v = v
            best_i = i
    lo = max(best_i - 1, 0) * h
    hi = min(best_i + 1, _GRID_POINTS + 1) * h

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while (b - a) > _REFINE_REL_TOL * upper:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    mid = 0.5 * (a + b)
    return min(best_v, fc, fd, objective(mid))


def overfit_bound_two_term(m: int, n_vectors: int, slack: float) -> float:
    """Two-term Bernstein bound, minimized over the split of the budget.

    min over a in (0, slack) of exp(-2m (slack-a)^2) + exp(-3 m l a^2 / (30 + 8 l a)).
    Returns 1 for slack = 0.
    """
    _check_counts(m, n_vectors)
    _check_slack(slack)
    if slack == 0.0:
        return 1.0

    def objective(a: float) -> float:
        t1 = math.exp(-2.0 * m * (slack - a) ** 2)
        t2 = math.exp(-3.0 * m * n_vectors * a * a / (30.0 + 8.0 * n_vectors * a))
        return t1 + t2

    return _clamp(_minimize_split(objective, slack))


def overfit_bound_bernstein_single(m: int, n_vectors: int, slack: float) -> float:
    """Single-application Bernstein bound.

    exp(-slack^2 / ((l + 4 sqrt(l) + 20)/(2 m l) + 4 slack/(3 m))).
    Returns 1 for slack = 0.
    """
    _check_counts(m, n_vectors)
    _check_slack(slack)
    if slack == 0.0:
        return 1.0
    denom = (n_vectors + 4.0 * math.sqrt(n_vectors) + 20.0) / (
        2.0 * m * n_vectors
    ) + 4.0 * slack / (3.0 * m)
    return _clamp(math.exp(-slack * slack / denom))


def overfit_bound_mclt(m: int, n_vectors: int, slack: float) -> float:
    """Normal-limit bound: upper tail of the standardized slack.

    1 - Phi(slack * sqrt(4 l m / (l + 4 sqrt(l) + 20))).  Returns 0.5 for
    slack = 0 (the exact limit value).
    """
    _check_counts(m, n_vectors)
    _check_slack(slack)
    scale = math.sqrt(
        4.0 * n_vectors * m / (n_vectors + 4.0 * math.sqrt(n_vectors) + 20.0)
    )
    return normal_sf(slack * scale)


def overfit_bound_mcdiarmid_combined(m: int, n_vectors: int, slack: float) -> float:
    """McDiarmid analogue of the two-term bound, minimized over the split
    slack = e1 + 2 e2 of exp(-2 m e1^2) + exp(-2 m l e2^2 / (l + 4)).
    Returns 1 for slack = 0."""
    _check_counts(m, n_vectors)
    _check_slack(slack)
    if slack == 0.0:
        return 1.0

    def objective(e1: float) -> float:
        e2 = (slack - e1) / 2.0
        t1 = math.exp(-2.0 * m * e1 * e1)
        t2 = math.exp(-2.0 * m * n_vectors * e2 * e2 / (n_vectors + 4.0))
        return t1 + t2

    return _clamp(_minimize_split(objective, slack))


_METHOD_DISPATCH = {
    BoundMethod.BERNSTEIN_TWO_TERM: overfit_bound_two_term,
    BoundMethod.BERNSTEIN_SINGLE: overfit_bound_bernstein_single,
    BoundMethod.MCLT: overfit_bound_mclt,
    BoundMethod.MCDIARMID_COMBINED: overfit_bound_mcdiarmid_combined,
}


def overfit_bound(method: BoundMethod, m: int, n_vectors: int, slack: float) -> float:
    """Dispatch to the overfit-probability bound selected by ``method``."""
    return _METHOD_DISPATCH[method](m, n_vectors, slack)


# ---------------------------------------------------------------------------
# Bound comparison table
# ---------------------------------------------------------------------------

COMPARE_TABLE_HEADER = ("l", "mcdiarmid", "bernstein", "mclt")


def compare_bounds_table(m: int, eps: float, l_values) -> list[tuple[int, float, float, float]]:
    """One row per sign-vector count: McDiarmid, Bernstein and normal-limit
    estimate-error bounds evaluated at the same (m, eps)."""
    _check_counts(m)
    _check_eps(eps)
    rows = []
    for l in l_values:
        if l < 1:
            raise DomainError(f"sign-vector count must be >= 1, got {l}")
        rows.append(
            (
                int(l),
                est_error_mcdiarmid(m, l, eps),
                est_error_bernstein(m, l, eps),
                est_error_mclt(m, l, eps),
            )
        )
    return rows


def compare_bounds_csv(rows) -> str:
    """Render comparison rows as CSV with 10 significant digits."""
    lines = [",".join(COMPARE_TABLE_HEADER)]
    for l, mcd, bern, mclt in rows:
        lines.append(f"{l},{mcd:.10g},{bern:.10g},{mclt:.10g}")
    return "\n".join(lines) + "\n"
