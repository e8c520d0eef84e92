"""
Graph constructors of the extremal families and spectral radius computation.

Two routes to the spectral radius are provided: shifted power iteration on the adjacency matrix with a
Collatz-Wielandt certificate, and exact roots of equitable quotient matrices found by bisection on rationals.
"""
import logging
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._data_structures import (Graph, SpectralValue, SpectralMethod, QuotientMatrix, ClosedFormRho,
                               GraphDescriptor, Family)
from ._errors import ParameterRangeError, SpectralConvergenceError

DEFAULT_TOLERANCE = 1e-10
MAX_ITERATIONS = 10 ** 6
QUOTIENT_TOLERANCE = 1e-12


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def matching_graph(n: int, p: int) -> Graph:
    """ pK2 ∪ (n-2p)K1 with the matched pairs on (0, 1), (2, 3), ... """
    if not 0 <= p <= n // 2:
        raise ParameterRangeError(f"Matching size p={p} must satisfy 0 <= p <= n/2 = {n // 2}.")
    return Graph.from_edges(n, ((2 * i, 2 * i + 1) for i in range(p)))


def join(g1: Graph, g2: Graph) -> Graph:
    """
    Join of two graphs: their disjoint union plus every edge between them.

    :param g1: First graph, keeps the labels 0..n1-1.
    :param g2: Second graph, relabeled to n1..n1+n2-1.
    :return: The join g1 ∇ g2.
    """
    cross = ((u, g1.n + v) for u in range(g1.n) for v in range(g2.n))
    return Graph(g1.n + g2.n, g1.disjoint_union(g2).edges | frozenset(cross))


def _check_S(n: int, k: int, p: int) -> None:
    if not k > 0:
        raise ParameterRangeError(f"Clique order k={k} must be positive.")
    if not n > k:
        raise ParameterRangeError(f"Vertex count n={n} must exceed k={k}.")
    if not 0 <= p <= (n - k) // 2:
        raise ParameterRangeError(f"Matching size p={p} must satisfy 0 <= p <= (n-k)/2 = {(n - k) // 2}.")


def construct_S(n: int, k: int, p: int) -> Graph:
    """
    Build S_{n,k}^p: the clique K_k joined to n-k independent vertices, with p independent edges added on
    the pairs (k, k+1), (k+2, k+3), ...

    :param n: Number of vertices.
    :param k: Order of the dominating clique, 0 < k < n.
    :param p: Number of extra edges, at most (n-k)/2.
    :return: The graph S_{n,k}^p.
    :raises ParameterRangeError: If a parameter is out of range.
    """
    _check_S(n, k, p)
    return join(complete_graph(k), matching_graph(n - k, p))


def construct_K_ab_p(a: int, b: int, p: int) -> Graph:
    """
    Build K_{a,b}^p: the complete bipartite graph with p independent edges inside the b-side.

    :param a: Size of the first side, vertices 0..a-1.
    :param b: Size of the second side, vertices a..a+b-1.
    :param p: Number of extra edges, at most b/2.
    :return: The graph K_{a,b}^p.
    :raises ParameterRangeError: If a parameter is out of range.
    """
    if a < 1 or b < 1:
        raise ParameterRangeError(f"Both sides must be non-empty, got a={a}, b={b}.")
    if not 0 <= p <= b // 2:
        raise ParameterRangeError(f"Matching size p={p} must satisfy 0 <= p <= b/2 = {b // 2}.")
    return join(empty_graph(a), matching_graph(b, p))


def construct_G_nl(n: int, l: int) -> Graph:
    """ G_{n,l}: S_{n,(l-2)/2}^0 for even l and S_{n,(l-3)/2}^1 for odd l. """
    if l < 4:
        raise ParameterRangeError(f"Tree order l={l} must be at least 4.")
    if n < l:
        raise ParameterRangeError(f"Vertex count n={n} must be at least l={l}.")
    return construct_S(n, *G_nl_parameters(l))


def G_nl_parameters(l: int) -> tuple[int, int]:
    return ((l - 2) // 2, 0) if l % 2 == 0 else ((l - 3) // 2, 1)


def _collatz_wielandt(matrix: np.ndarray, tol: float, max_iterations: int) -> tuple[float, float]:
    x = np.ones(matrix.shape[0])
    low, high = 0.0, math.inf
    for _ in range(max_iterations):
        y = matrix @ x
        ratios = y / x
        low, high = float(ratios.min()), float(ratios.max())
        if high - low <= tol:
            return low, high
        x = y / y.max()
    raise SpectralConvergenceError(f"Power iteration did not converge in {max_iterations} iterations",
                                   (low - 1.0, high - 1.0))


def spectral_radius(graph: Graph, tol: float = DEFAULT_TOLERANCE,
                    max_iterations: int = MAX_ITERATIONS) -> SpectralValue:
    """
    Largest adjacency eigenvalue by power iteration on A + I, started from the all-ones vector.

    Each connected component is iterated separately and the largest result is reported. The iteration stops once
    the Collatz-Wielandt bracket min/max of (Bx)_i / x_i is narrower than ``tol``; the true value lies inside it.

    :param graph: Graph with at least one vertex.
    :param tol: Width of the certifying interval.
    :param max_iterations: Iteration cap per component.
    :return: The spectral radius with its bracket.
    :raises SpectralConvergenceError: If the bracket does not close within the cap.
    """
    if tol <= 0:
        raise ParameterRangeError(f"Tolerance must be positive, got {tol}.")
    if graph.n < 1:
        raise ParameterRangeError("Spectral radius needs at least one vertex.")
    best = (0.0, 0.0)
    for component in graph.components():
        if len(component) == 1:
            continue
        sub = graph.induced_subgraph(component)
        low, high = _collatz_wielandt(sub.adjacency_matrix() + np.eye(sub.n), tol, max_iterations)
        if high - 1.0 > best[1]:
            best = (low - 1.0, high - 1.0)
    low, high = max(best[0], 0.0), max(best[1], 0.0)
    return SpectralValue((low + high) / 2, SpectralMethod.POWER_ITERATION, tol, (low, high))


def _minors_positive(entries: Sequence[Sequence[Fraction]], x: Fraction) -> bool:
    """ True iff every leading principal minor of xI - M is positive, i.e. x exceeds the Perron root of M. """
    size = len(entries)
    rows = [[(x if i == j else 0) - entries[i][j] for j in range(size)] for i in range(size)]
    for pivot in range(size):
        if rows[pivot][pivot] <= 0:
            return False
        for i in range(pivot + 1, size):
            factor = rows[i][pivot] / rows[pivot][pivot]
            if factor:
                for j in range(pivot, size):
                    rows[i][j] -= factor * rows[pivot][j]
    return True


def _perron_root(entries: Sequence[Sequence[Fraction]], tol: float = QUOTIENT_TOLERANCE) -> float:
    size = len(entries)
    if size == 1:
        return float(entries[0][0])
    if size == 2:
        (a, b), (c, d) = entries
        return float(a + d) / 2 + math.sqrt(float((a - d) ** 2 + 4 * b * c)) / 2
    low, high = Fraction(0), max(sum(row) for row in entries)
    while high - low > tol:
        middle = (low + high) / 2
        if _minors_positive(entries, middle):
            high = middle
        else:
            low = middle
    return float((low + high) / 2)


def quotient_spectral_radius(matrix: QuotientMatrix) -> SpectralValue:
    """
    Perron root of a small quotient matrix: closed form for order 2, bisection on exact rationals otherwise.

    :param matrix: Non-negative quotient matrix.
    :return: The largest real eigenvalue, method quotient-exact.
    """
    return SpectralValue(_perron_root(matrix.entries), SpectralMethod.QUOTIENT_EXACT, QUOTIENT_TOLERANCE)


def _drop_empty(rows: list[list[int]], sizes: list[int]) -> QuotientMatrix:
    keep = [i for i, size in enumerate(sizes) if size > 0]
    return QuotientMatrix(tuple(tuple(rows[i][j] for j in keep) for i in keep), tuple(sizes[i] for i in keep))


def quotient_S(n: int, k: int, p: int) -> QuotientMatrix:
    """ Equitable quotient of S_{n,k}^p over the classes (clique, matched, isolated); empty classes are dropped. """
    _check_S(n, k, p)
    isolated = n - k - 2 * p
    rows = [[k - 1, 2 * p, isolated], [k, 1, 0], [k, 0, 0]]
    return _drop_empty(rows, [k, 2 * p, isolated])


def quotient_K_ab_p(a: int, b: int, p: int) -> QuotientMatrix:
    if a < 1 or b < 1 or not 0 <= p <= b // 2:
        raise ParameterRangeError(f"Invalid K_ab_p parameters a={a}, b={b}, p={p}.")
    isolated = b - 2 * p
    rows = [[0, 2 * p, isolated], [a, 1, 0], [a, 0, 0]]
    return _drop_empty(rows, [a, 2 * p, isolated])


def join_quotient(core: Graph, r: int, p: int = 0) -> QuotientMatrix:
    """ Equitable quotient of core ∇ (pK2 ∪ (r-2p)K1): every core vertex is its own class, followed by the matched
    and the isolated class. """
    if not 0 <= p <= r // 2:
        raise ParameterRangeError(f"Matching size p={p} must satisfy 0 <= p <= r/2 = {r // 2}.")
    q, isolated = core.n, r - 2 * p
    rows = [[1 if core.has_edge(i, j) else 0 for j in range(q)] + [2 * p, isolated] for i in range(q)]
    rows.append([1] * q + [1, 0])
    rows.append([1] * q + [0, 0])
    return _drop_empty(rows, [1] * q + [2 * p, isolated])


def join_quotient_radius(core: Graph, r: int, p: int = 0) -> SpectralValue:
    return quotient_spectral_radius(join_quotient(core, r, p))


def join_bound(d: float, d_prime: float, n0: int, n: int) -> SpectralValue:
    """
    Upper bound for a join H1 ∇ H2 with |H1| = n0, |H1 ∇ H2| = n and maximum degrees d, d' inside H1, H2:
    the Perron root of [[d, n - n0], [n0, d']].

    :param d: Maximum degree inside the first part.
    :param d_prime: Maximum degree inside the second part.
    :param n0: Order of the first part.
    :param n: Total order.
    :return: The bound as a quotient-exact value.
    """
    if not 0 <= n0 <= n:
        raise ParameterRangeError(f"Part order n0={n0} must lie in [0, n={n}].")
    if d < 0 or d_prime < 0:
        raise ParameterRangeError(f"Degrees must be non-negative, got d={d}, d'={d_prime}.")
    entries = [[Fraction(d), Fraction(n - n0)], [Fraction(n0), Fraction(d_prime)]]
    return SpectralValue(_perron_root(entries), SpectralMethod.QUOTIENT_EXACT, QUOTIENT_TOLERANCE)


def closed_form_rho_S0(n: int, q: int) -> ClosedFormRho:
    """
    Closed forms for rho(S_{n,q}^0). The commonly quoted radicand qn - (3q^2+2q+1)/4 gives sqrt(n - 1.5) for the
    star; the quotient gives qn - (3q^2+2q-1)/4. Both are returned, ``exact`` is the one to use.

    :param n: Number of vertices.
    :param q: Clique order, 1 <= q < n.
    """
    if not n > q >= 1:
        raise ParameterRangeError(f"Need n > q >= 1, got n={n}, q={q}.")
    nominal = (q - 1) / 2 + math.sqrt(q * n - (3 * q * q + 2 * q + 1) / 4)
    exact = (q - 1) / 2 + math.sqrt(q * n - (3 * q * q + 2 * q - 1) / 4)
    logging.info(f"rho(S_{{{n},{q}}}^0): nominal closed form {nominal:.12f}, quotient-exact {exact:.12f}")
    return ClosedFormRho(SpectralValue(nominal, SpectralMethod.CLOSED_FORM),
                         SpectralValue(exact, SpectralMethod.CLOSED_FORM))


def descriptor_spectral_radius(descriptor: GraphDescriptor) -> SpectralValue:
    match descriptor.family:
        case Family.S:
            return quotient_spectral_radius(quotient_S(descriptor.n, descriptor.k, descriptor.p))
        case Family.K:
            return quotient_spectral_radius(quotient_K_ab_p(descriptor.k, descriptor.n - descriptor.k, descriptor.p))
        case _:
            return join_quotient_radius(descriptor.core, descriptor.n - descriptor.k)
