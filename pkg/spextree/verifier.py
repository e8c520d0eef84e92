"""Independent checks of classifier predictions: embedding search, freeness tests and spectral extremal oracles."""
import logging
import time
from abc import ABCMeta, abstractmethod
from typing import Literal, Iterable

from ._canonical import generate_graphs, are_isomorphic, dedupe_isomorphic
from ._codecs import to_graph6
from ._data_structures import (Graph, EmbeddingWitness, OracleLevel, OracleResult, Outcome, NResult,
                               VerificationReport, Prediction, PredictionKind, SpectralValue, SpectralMethod,
                               EmbeddingStatus)
from ._embedding import find_embedding, is_free, is_family_free, is_valid_embedding
from ._errors import BudgetExceededError, ClassificationDomainError, InconclusiveSearchError, ParameterRangeError
from .extremal import classify, confidence_threshold
from .graphs import spectral_radius, join, matching_graph, join_quotient_radius
from .trees import profile

__all__ = ["contains_tree", "find_embedding", "is_family_free", "is_valid_embedding", "spex_exhaustive",
           "spex_joinform", "select_oracle", "verify_prediction", "ExhaustiveOracle", "JoinformExhaustiveOracle",
           "JoinformMatchingOracle", "RHO_TOLERANCE", "EXHAUSTIVE_MAX_N", "JOINFORM_MAX_Q"]

RHO_TOLERANCE = 1e-8
EXHAUSTIVE_MAX_N = 8
JOINFORM_MAX_Q = 6

OracleChoice = Literal["auto", "exhaustive", "joinform", "joinform-exhaustive"]


def contains_tree(host: Graph, tree: Graph, budget: int | None = None) -> EmbeddingWitness:
    """
    Decide whether the tree F occurs as a subgraph of the host.

    :param host: The host graph.
    :param tree: The tree F.
    :param budget: Optional cap on search nodes.
    :return: A witness mapping, an absent result, or an inconclusive result when the budget ran out.
    """
    return find_embedding(host, tree, budget)


def _maximizers(candidates: list[tuple[float, Graph]], tol: float) -> tuple[float, list[Graph]]:
    best = max(value for value, _ in candidates)
    kept = dedupe_isomorphic([graph for value, graph in candidates if value >= best - tol])
    if len(kept) > 1:
        logging.info(f"{len(kept)} non-isomorphic maximizers at rho = {best:.10f}")
    return best, kept


def spex_exhaustive(n: int, tree: Graph, tol: float = RHO_TOLERANCE, budget: int | None = None,
                    max_n: int = EXHAUSTIVE_MAX_N) -> OracleResult:
    """
    Maximum spectral radius over all F-free graphs on n vertices, by isomorph-free generation.

    :param n: Number of vertices, at most ``max_n``.
    :param tree: The forbidden tree F.
    :param tol: Values within ``tol`` of the maximum count as maximizers.
    :param budget: Optional node cap per embedding search.
    :param max_n: Budget cap on n.
    :return: The optimum with every maximizer up to isomorphism.
    :raises BudgetExceededError: If n exceeds the cap.
    :raises InconclusiveSearchError: If an embedding search runs out of budget.
    """
    if n > max_n:
        raise BudgetExceededError("n", max_n, n)
    if n < 1:
        raise ParameterRangeError(f"Vertex count must be positive, got {n}.")
    free_graphs = generate_graphs(n, keep=lambda g: is_free(g, tree, budget))
    logging.info(f"exhaustive oracle: {len(free_graphs)} F-free graphs on {n} vertices")
    best, maximizers = _maximizers([(spectral_radius(g).value, g) for g in free_graphs], tol)
    return OracleResult(SpectralValue(best, SpectralMethod.POWER_ITERATION, tol), tuple(maximizers),
                        OracleLevel.EXHAUSTIVE, len(free_graphs))


def _largest_free_matching(core: Graph, r: int, tree: Graph, budget: int | None) -> int | None:
    """ Largest p with core ∇ (pK2 ∪ (r-2p)K1) F-free, or None if even p = 0 fails. Freeness is inherited by
    subgraphs, so the admissible p form an interval starting at 0. """
    if not is_free(join(core, matching_graph(r, 0)), tree, budget):
        return None
    low, high = 0, r // 2
    while low < high:
        middle = (low + high + 1) // 2
        if is_free(join(core, matching_graph(r, middle)), tree, budget):
            low = middle
        else:
            high = middle - 1
    return low


def spex_joinform(n: int, tree: Graph, exhaustive_r: bool = False, tol: float = RHO_TOLERANCE,
                  budget: int | None = None, max_q: int = JOINFORM_MAX_Q,
                  max_r: int = EXHAUSTIVE_MAX_N) -> OracleResult:
    """
    Maximum spectral radius over F-free joins Q ∇ R with |Q| = q for every graph Q on q vertices, and R a matching
    plus isolated vertices (or, with ``exhaustive_r``, any graph on n - q vertices).

    :param n: Number of vertices.
    :param tree: The forbidden tree F with q >= 1.
    :param exhaustive_r: Search every R instead of matchings only; needs n - q <= ``max_r``.
    :param tol: Values within ``tol`` of the maximum count as maximizers.
    :param budget: Optional node cap per embedding search.
    :param max_q: Budget cap on q.
    :param max_r: Budget cap on n - q for ``exhaustive_r``.
    :return: The optimum over the join family; labeled restricted unless ``exhaustive_r``.
    """
    q = profile(tree).q
    if q == 0:
        raise ClassificationDomainError("Stars (q = 0) have no join-form extremal graphs.")
    if q > max_q:
        raise BudgetExceededError("q", max_q, q)
    if n <= q:
        raise ParameterRangeError(f"Vertex count n={n} must exceed q={q}.")
    r = n - q
    if exhaustive_r and r > max_r:
        raise BudgetExceededError("n - q", max_r, r)
    cores = generate_graphs(q)
    candidates: list[tuple[float, Graph]] = []
    for core in cores:
        if exhaustive_r:
            sides = generate_graphs(r, keep=lambda side: is_free(join(core, side), tree, budget))
            for side in sides:
                graph = join(core, side)
                candidates.append((spectral_radius(graph).value, graph))
        else:
            p = _largest_free_matching(core, r, tree, budget)
            if p is not None:
                candidates.append((join_quotient_radius(core, r, p).value, join(core, matching_graph(r, p))))
    if not candidates:
        raise ParameterRangeError(f"No F-free join with a core of order {q} on {n} vertices.")
    level = OracleLevel.JOINFORM_EXHAUSTIVE_R if exhaustive_r else OracleLevel.JOINFORM_MATCHING_R
    logging.info(f"{level.value} oracle: {len(candidates)} F-free candidates over {len(cores)} cores at n={n}")
    best, maximizers = _maximizers(candidates, tol)
    method = SpectralMethod.POWER_ITERATION if exhaustive_r else SpectralMethod.QUOTIENT_EXACT
    return OracleResult(SpectralValue(best, method, tol), tuple(maximizers), level, len(candidates))


class _Oracle(metaclass=ABCMeta):
    """ Base class of the oracle hierarchy; subclasses fix the search family and its budget. """
    _level: OracleLevel

    def __init__(self, tol: float = RHO_TOLERANCE, budget: int | None = None):
        self.tol = tol
        self.budget = budget

    def __repr__(self):
        return f"{self.__class__.__name__}(level={self._level.value})"

    @property
    def level(self) -> OracleLevel:
        return self._level

    @abstractmethod
    def affordable(self, n: int, q: int) -> bool:
        raise NotImplementedError

    @abstractmethod
    def solve(self, n: int, tree: Graph) -> OracleResult:
        raise NotImplementedError


class ExhaustiveOracle(_Oracle):
    _level = OracleLevel.EXHAUSTIVE

    def affordable(self, n: int, q: int) -> bool:
        return n <= EXHAUSTIVE_MAX_N

    def solve(self, n: int, tree: Graph) -> OracleResult:
        return spex_exhaustive(n, tree, self.tol, self.budget)


class JoinformExhaustiveOracle(_Oracle):
    _level = OracleLevel.JOINFORM_EXHAUSTIVE_R

    def affordable(self, n: int, q: int) -> bool:
        return q <= JOINFORM_MAX_Q and n - q <= EXHAUSTIVE_MAX_N

    def solve(self, n: int, tree: Graph) -> OracleResult:
        return spex_joinform(n, tree, exhaustive_r=True, tol=self.tol, budget=self.budget)


class JoinformMatchingOracle(_Oracle):
    _level = OracleLevel.JOINFORM_MATCHING_R

    def affordable(self, n: int, q: int) -> bool:
        return q <= JOINFORM_MAX_Q

    def solve(self, n: int, tree: Graph) -> OracleResult:
        return spex_joinform(n, tree, exhaustive_r=False, tol=self.tol, budget=self.budget)


_HIERARCHY: tuple[type[_Oracle], ...] = (ExhaustiveOracle, JoinformExhaustiveOracle, JoinformMatchingOracle)


def select_oracle(n: int, q: int, choice: OracleChoice = "auto", tol: float = RHO_TOLERANCE,
                  budget: int | None = None) -> _Oracle:
    """
    Pick the strongest affordable oracle, or the requested one.

    :raises BudgetExceededError: If the requested (or every) oracle is out of budget for (n, q).
    """
    match choice:
        case "auto":
            candidates = _HIERARCHY
        case "exhaustive":
            candidates = (ExhaustiveOracle,)
        case "joinform":
            candidates = (JoinformMatchingOracle,)
        case "joinform-exhaustive":
            candidates = (JoinformExhaustiveOracle,)
        case _:
            raise ParameterRangeError(f"Unknown oracle {choice!r}.")
    for oracle_class in candidates:
        oracle = oracle_class(tol, budget)
        if oracle.affordable(n, q):
            logging.info(f"n={n}, q={q}: using the {oracle.level.value} oracle")
            return oracle
    if candidates == (ExhaustiveOracle,):
        raise BudgetExceededError("n", EXHAUSTIVE_MAX_N, n)
    if q > JOINFORM_MAX_Q:
        raise BudgetExceededError("q", JOINFORM_MAX_Q, q)
    raise BudgetExceededError("n - q", EXHAUSTIVE_MAX_N, n - q)


def _free_checks(prediction: Prediction, tree: Graph, budget: int | None) -> dict[str, bool | None]:
    checks = {}
    for descriptor in prediction.graphs:
        witness = contains_tree(descriptor.instantiate(), tree, budget)
        checks[descriptor.label()] = None if witness.status is EmbeddingStatus.INCONCLUSIVE else not witness.found
    return checks


def _compare(prediction: Prediction, oracle: OracleResult, tol: float) -> tuple[Outcome, list[str]]:
    notes = []
    value = oracle.value.value
    match prediction.kind:
        case PredictionKind.BOUNDS_ONLY:
            inside = prediction.lower.exact.value - tol <= value <= prediction.upper.value + tol
            return (Outcome.AGREE if inside else Outcome.DISAGREE), notes
        case PredictionKind.FAMILY_CONTAINMENT if not prediction.graphs:
            notes.append("family reported symbolically; nothing to compare")
            return Outcome.INCONCLUSIVE, notes
    predicted = [d.instantiate() for d in prediction.graphs]
    predicted_value = max(d.spectral_radius().value for d in prediction.graphs)
    if abs(predicted_value - value) > tol:
        notes.append(f"oracle optimum {value:.10f} differs from predicted {predicted_value:.10f}")
        return Outcome.DISAGREE, notes
    covered = all(any(are_isomorphic(m, g) for g in predicted) for m in oracle.maximizers)
    if prediction.kind is PredictionKind.FAMILY_CONTAINMENT:
        return (Outcome.AGREE if covered else Outcome.DISAGREE), notes
    hit = any(are_isomorphic(m, predicted[0]) for m in oracle.maximizers)
    if hit and covered:
        return Outcome.AGREE, notes
    if hit:
        notes.append(f"tie: {len(oracle.maximizers)} maximizers at rho = {value:.10f}")
        return Outcome.TIE, notes
    notes.append("predicted graph is not among the oracle maximizers")
    return Outcome.DISAGREE, notes


def verify_n(tree: Graph, n: int, oracle: OracleChoice = "auto", tol: float = RHO_TOLERANCE,
             budget: int | None = None) -> tuple[Prediction, NResult]:
    start = time.perf_counter()
    prediction = classify(tree, n)
    if prediction.kind is PredictionKind.OUT_OF_DOMAIN:
        raise ClassificationDomainError("Stars (q = 0) are out of the classification domain.")
    q = profile(tree).q
    below = n < confidence_threshold(tree.n)
    checks = _free_checks(prediction, tree, budget)
    result = NResult(n=n, oracle=None, outcome=Outcome.INCONCLUSIVE, free_checks=checks, below_threshold=below,
                     warnings=list(prediction.warnings))
    if prediction.graphs:
        result.predicted_rho = max(d.spectral_radius().value for d in prediction.graphs)
    if any(check is False for check in checks.values()):
        result.outcome = Outcome.DISAGREE
        result.warnings.append("a predicted graph contains F")
    elif any(check is None for check in checks.values()):
        result.warnings.append("freeness check ran out of budget")
    else:
        chosen = select_oracle(n, q, oracle, tol, budget)
        result.oracle = chosen.level
        try:
            found = chosen.solve(n, tree)
        except InconclusiveSearchError as e:
            result.warnings.append(str(e))
        else:
            result.oracle_rho = found.value.value
            result.maximizers = [to_graph6(g) for g in found.maximizers]
            result.outcome, notes = _compare(prediction, found, tol)
            result.warnings += notes
            if found.level.restricted:
                result.warnings.append(f"oracle value is a {found.label}")
    for warning in result.warnings[len(prediction.warnings):]:
        logging.warning(f"n={n}: {warning}")
    if result.outcome is Outcome.DISAGREE and below:
        logging.warning(f"n={n}: disagreement below the confidence threshold, recorded only")
    result.runtime = time.perf_counter() - start
    return prediction, result


def verify_prediction(tree: Graph, n_values: Iterable[int], oracle: OracleChoice = "auto",
                      tol: float = RHO_TOLERANCE, budget: int | None = None, name: str = "F") -> VerificationReport:
    """
    Check the classifier against the strongest affordable oracle for every n.

    :param tree: The tree F.
    :param n_values: Orders to check.
    :param oracle: ``"auto"`` for the hierarchy exhaustive, join form with exhaustive R, join form with matchings;
        or a specific oracle.
    :param tol: Tolerance for comparing spectral radii.
    :param budget: Optional node cap per embedding search.
    :param name: Label of F in the report.
    :return: The report with one result per n.
    :raises BudgetExceededError: If an n is beyond every allowed oracle.
    """
    n_values = sorted(set(n_values))
    if not n_values:
        raise ParameterRangeError("At least one n is required.")
    report = VerificationReport(tree=name, n_values=n_values)
    for n in n_values:
        prediction, result = verify_n(tree, n, oracle, tol, budget)
        report.predictions[n] = prediction
        report.results.append(result)
    report.log_summary()
    return report
