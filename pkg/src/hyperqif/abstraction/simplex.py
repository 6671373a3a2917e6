"""Dense phase-1 simplex for small feasibility problems.

Finds x >= 0 with A x = b by minimizing the sum of artificial variables on a full tableau.
Bland's rule (lowest entering index, lowest leaving basis index) prevents cycling.
The tableau is rebuilt from the original system every REFACTOR_EVERY pivots and once more
at the end, so the reported solution never carries accumulated pivoting error.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np
import structlog

log = structlog.get_logger()

PIVOT_TOL = 1e-11
REFACTOR_EVERY = 25

Status = Literal["feasible", "infeasible", "iteration_limit"]


class FeasibilityResult(NamedTuple):
    """Outcome of a phase-1 solve."""

    x: np.ndarray
    # Sum of artificial variables at the final basis; 0 when feasible
    infeasibility: float
    iterations: int
    status: Status
    # max |A x - b| for the returned x, clipped at 0
    residual: float


def _refactor(system: np.ndarray, costs: np.ndarray, basis: np.ndarray) -> np.ndarray | None:
    """Tableau for basis computed from the original [A | I | b] rather than by pivoting."""
    m = system.shape[0]
    try:
        body = np.linalg.solve(system[:, basis], system)
    except np.linalg.LinAlgError:
        return None
    tableau = np.empty((m + 1, system.shape[1]))
    tableau[:m] = body
    tableau[m] = np.append(costs, 0.0) - costs[basis] @ body
    return tableau


def solve_feasibility(
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    *,
    tol: float = 1e-9,
    max_iter: int | None = None,
) -> FeasibilityResult:
    """Search for x >= 0 with a_eq @ x = b_eq.

    Args:
        a_eq: (m, n) constraint matrix
        b_eq: (m,) right-hand side
        tol: Max-norm residual below which x is accepted as feasible
        max_iter: Pivot limit (default 50 * (m + n))

    Returns:
        FeasibilityResult with the basic solution reached. status is "feasible" whenever
        the returned x meets tol, even if the pivot limit was hit first.
    """
    a = np.array(a_eq, dtype=np.float64)
    b = np.array(b_eq, dtype=np.float64)
    m, n = a.shape

    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0

    # Rows 0..m-1: [A | I | b]; last row: reduced costs of the phase-1 objective
    system = np.hstack([a, np.eye(m), b[:, None]])
    costs = np.concatenate([np.zeros(n), np.ones(m)])
    basis = np.arange(n, n + m)
    tableau = _refactor(system, costs, basis)
    assert tableau is not None

    limit = max_iter if max_iter is not None else 50 * (m + n)
    iterations = 0
    optimal = False
    while iterations < limit:
        # Objective -tableau[m, -1] is 0: the current basis is already feasible
        if -tableau[m, -1] <= PIVOT_TOL:
            optimal = True
            break
        entering = np.flatnonzero(tableau[m, :-1] < -PIVOT_TOL)
        if entering.size == 0:
            optimal = True
            break
        col = int(entering[0])
        column = tableau[:m, col]
        candidates = np.flatnonzero(column > PIVOT_TOL)
        if candidates.size == 0:
            # Phase-1 objective is bounded below by 0; a column with no positive entry
            # cannot improve it further.
            optimal = True
            break
        ratios = tableau[candidates, -1] / column[candidates]
        ties = candidates[ratios <= ratios.min() + PIVOT_TOL]
        row = int(ties[np.argmin(basis[ties])])

        tableau[row] /= tableau[row, col]
        factors = tableau[:, col].copy()
        factors[row] = 0.0
        tableau -= np.outer(factors, tableau[row])
        basis[row] = col
        iterations += 1
        if iterations % REFACTOR_EVERY == 0:
            rebuilt = _refactor(system, costs, basis)
            if rebuilt is not None:
                tableau = rebuilt

    rebuilt = _refactor(system, costs, basis)
    if rebuilt is not None:
        tableau = rebuilt
    full = np.zeros(n + m)
    full[basis] = tableau[:m, -1]
    x = np.clip(full[:n], 0.0, None)
    infeasibility = float(np.clip(full[n:], 0.0, None).sum())
    residual = float(np.max(np.abs(a @ x - b))) if m else 0.0

    status: Status
    if residual <= tol:
        status = "feasible"
    elif optimal:
        status = "infeasible"
    else:
        status = "iteration_limit"

    log.debug(
        "Phase-1 simplex finished",
        status=status,
        iterations=iterations,
        infeasibility=infeasibility,
        residual=residual,
        shape=(m, n),
    )
    return FeasibilityResult(x, infeasibility, iterations, status, residual)
