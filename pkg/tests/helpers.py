"""Shared test utilities: seeded game generators and independent
brute-force oracles that the solver results are checked against."""

from fractions import Fraction
from itertools import combinations

from tusolve import TuGame, game_from_unanimity
from tusolve.coalitions import contains, grand_coalition
from tusolve.linalg import Matrix, rref, solve_linear

BASE_POINT = (Fraction(44, 9), Fraction(4), Fraction(32, 9), Fraction(32, 9))

TWO_PLAYER = TuGame(2, (Fraction(0), Fraction(0), Fraction(2)))


def random_game(n, rng, span=12):
    values = [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range((1 << n) - 1)]
    values[-1] = Fraction(rng.randint(1, 2 * span), rng.randint(1, 2))
    return TuGame(n, tuple(values))


def random_convex_game(n, rng):
    """Strictly convex game: positive weight on every pair unanimity game.

    Coordinates use a spread of denominators; coarse integer data tends to
    produce coincidental excess ties at the solution point, which land it
    on a selection-class boundary.
    """
    coords = [Fraction(0)] * ((1 << n) - 1)
    for mask in range(1, 1 << n):
        k = mask.bit_count()
        if k == 1:
            coords[mask - 1] = Fraction(rng.randint(-60, 60), rng.randint(7, 17))
        elif k == 2:
            coords[mask - 1] = Fraction(rng.randint(1, 90), rng.randint(7, 17))
        else:
            coords[mask - 1] = Fraction(rng.randint(0, 70), rng.randint(7, 17))
    return game_from_unanimity(coords)


def random_efficient_payoff(v, rng, span=8):
    x = [Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(v.n - 1)]
    x.append(v.value(v.grand) - sum(x))
    return tuple(x)


def random_payoff(n, rng, span=8):
    return tuple(Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(n))


def brute_force_lp(c, maximize, a_rows, b, box):
    """Optimal value of max/min c.x over {Ax <= b, 0 <= x <= box} by
    enumerating all candidate vertices (square subsystems of active
    constraints); None when no feasible vertex exists (region is a
    polytope, so None means infeasible)."""
    n = len(c)
    rows = [list(r) for r in a_rows]
    rows += [[Fraction(-int(i == j)) for j in range(n)] for i in range(n)]
    rows += [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    rhs = list(b) + [Fraction(0)] * n + [Fraction(box)] * n
    best = None
    for subset in combinations(range(len(rows)), n):
        mat = Matrix.from_rows([rows[i] for i in subset])
        if rref(mat)[1] < n:
            continue
        sol = solve_linear(mat, [rhs[i] for i in subset])
        if sol is None:
            continue
        if all(
            sum((r[j] * sol[j] for j in range(n)), Fraction(0)) <= bb
            for r, bb in zip(rows, rhs)
        ):
            val = sum((ci * si for ci, si in zip(c, sol)), Fraction(0))
            if best is None or (val > best if maximize else val < best):
                best = val
    return best


def brute_force_balanced(masks, n):
    """Balancedness by vertex enumeration of {w >= 0 : sum w_S 1_S = 1_N}.

    Vertices come from exactly solving square subsystems of independent
    indicator columns; the centroid of all vertices has maximal support,
    so the collection is balanced iff the centroid is strictly positive.
    """
    full = grand_coalition(n)
    union = 0
    for m in masks:
        union |= m
    if union != full:
        return False
    cols = [[Fraction(int(contains(m, p))) for p in range(1, n + 1)] for m in masks]
    target = [Fraction(1)] * n
    k = len(masks)
    vertices = []
    for size in range(1, min(n, k) + 1):
        for subset in combinations(range(k), size):
            mat = Matrix.from_columns([cols[i] for i in subset])
            if rref(mat)[1] < size:
                continue
            sol = solve_linear(mat, target)
            if sol is None or any(s < 0 for s in sol):
                continue
            w = [Fraction(0)] * k
            for idx, i in enumerate(subset):
                w[i] = sol[idx]
            vertices.append(w)
    if not vertices:
        return False
    centroid = [sum(v[i] for v in vertices) / len(vertices) for i in range(k)]
    return all(c > 0 for c in centroid)
