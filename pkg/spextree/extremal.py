"""
Classification of a tree F: which graphs maximise the spectral radius among n-vertex F-free graphs, or, where
that is not known, the interval containing the maximum.

The cascade runs: stars are trivial; spiders are read off their leg profile; trees at the covering threshold give
G_{n,l}; trees with a leaf in the smaller colour class (delta = 1) give a join of an extremal core with an
independent set; everything else gets the two-sided bound.
"""
import logging
import math
from dataclasses import dataclass

from ._canonical import generate_graphs
from ._data_structures import (Graph, TreeProfile, SpiderProfile, CoveringFamily, ExtremalSet, GraphDescriptor,
                               Prediction, PredictionKind, LowerBound, BoundsResult)
from ._embedding import is_family_free
from ._errors import (ParameterRangeError, BudgetExceededError, ClassificationDomainError,
                      ClassificationConsistencyError)
from .graphs import (quotient_S, quotient_spectral_radius, join_bound, closed_form_rho_S0, G_nl_parameters)
from .trees import profile, covering_family, diameter_spider

EX_BRUTE_MAX_Q = 7


def confidence_threshold(l: int) -> int:
    """ Smallest n for which exact predictions are treated as confirmed. """
    return max(l * l, 20)


def ex_brute(q: int, family: CoveringFamily, max_q: int = EX_BRUTE_MAX_Q) -> ExtremalSet:
    """
    Maximum-edge graphs on q vertices containing no member of ``family``, up to isomorphism.

    :param q: Number of vertices, 1 <= q <= max_q.
    :param family: Forbidden patterns.
    :param max_q: Budget cap on q.
    :return: The extremal number and all extremal graphs.
    :raises BudgetExceededError: If q exceeds the cap.
    """
    if q < 1:
        raise ParameterRangeError(f"Order q={q} must be positive.")
    if q > max_q:
        raise BudgetExceededError("q", max_q, q)
    free_graphs = generate_graphs(q, keep=lambda g: is_family_free(g, family))
    max_edges = max(g.number_of_edges for g in free_graphs)
    witnesses = tuple(g for g in free_graphs if g.number_of_edges == max_edges)
    logging.info(f"ex({q}, {family.summary()}) = {max_edges} with {len(witnesses)} extremal graph(s)")
    return ExtremalSet(q, family, max_edges, witnesses)


def spider_case(spider: SpiderProfile, l: int, n: int) -> tuple[str, int, int]:
    """ Case tag and the parameters (k, p) of the extremal S_{n,k}^p for a spider with q >= 1. """
    r, s = spider.r, spider.s
    if s >= 1 and r >= 1:
        return "odd-and-even-legs", (l - r - 1) // 2, 0
    if s >= 1:
        return "even-legs-only", (l - 3) // 2, 1
    if spider.r1 >= 1:
        return "long-odd-leg", (l - r - 1) // 2, 1
    if spider.r2 >= 1 and spider.r3 <= 1:
        return "short-odd-legs-few-pendants", (l - r - 1) // 2, r - 1
    if spider.r2 >= 1:
        return "short-odd-legs-many-pendants", (l - r - 1) // 2, (2 * n - l + r + 1) // 4
    raise ClassificationDomainError(f"Spider with legs {spider.legs} is a star.")


def spider_forcing_order(tree: Graph, tree_profile: TreeProfile | None = None) -> int | None:
    """
    The k for which every graph of large order n with rho >= rho(S_{n,k}^0) contains the spider.

    Applies to spiders of order 2k + 3, k >= 2, with r >= 3 odd legs and s pendant legs where 2s - r >= 2. For
    these q <= k - 1, so spex(n, F) stays strictly below rho(S_{n,k}^0).

    :return: k, or ``None`` when the tree is not such a spider.
    """
    tree_profile = tree_profile or profile(tree)
    spider, l = tree_profile.spider, tree_profile.l
    if spider is None or tree_profile.q == 0 or l % 2 == 0 or l < 7:
        return None
    if spider.r < 3 or 2 * spider.r3 - spider.r < 2:
        return None
    return (l - 3) // 2


def cover_threshold(tree_profile: TreeProfile) -> tuple[str, int, int] | None:
    """ Case tag and (k, p) of G_{n,l} when the covering number sits at the threshold that makes G_{n,l} the unique
    extremal graph, otherwise ``None``. """
    l, beta = tree_profile.l, tree_profile.beta
    if l % 2 == 0 and 2 * beta == l:
        return ("even-order", *G_nl_parameters(l))
    if l % 2 == 1 and 2 * beta == l - 1 and tree_profile.delta >= 2:
        return ("odd-order", *G_nl_parameters(l))
    return None


def _rank_by_rho(descriptors: list[GraphDescriptor]) -> tuple[GraphDescriptor, ...]:
    return tuple(sorted(descriptors, key=lambda d: -d.spectral_radius().value))


def _pendant_core(tree: Graph, tree_profile: TreeProfile, n: int, max_q: int) -> tuple[PredictionKind, str, tuple]:
    q = tree_profile.q
    family = covering_family(tree, tree_profile)
    if family.complete:
        return PredictionKind.EXACT_UNIQUE, "complete-core", (GraphDescriptor.S(n, q, 0),)
    if any(pattern.number_of_edges == 1 for pattern in family.patterns):
        return PredictionKind.EXACT_UNIQUE, "independent-core", (GraphDescriptor.K(q, n - q),)
    if q > max_q:
        logging.warning(f"Extremal cores on {q} vertices exceed the cap of {max_q}; family reported symbolically.")
        return PredictionKind.FAMILY_CONTAINMENT, "symbolic", ()
    extremal = ex_brute(q, family, max_q)
    members = [GraphDescriptor.H(n, core) for core in extremal.witnesses]
    if len(members) == 1:
        return PredictionKind.EXACT_UNIQUE, "unique-core", tuple(members)
    return PredictionKind.FAMILY_CONTAINMENT, "core-family", _rank_by_rho(members)


def bounds(tree: Graph, n: int, tree_profile: TreeProfile | None = None) -> BoundsResult:
    """
    Two-sided bound on the maximum spectral radius of n-vertex F-free graphs for trees with delta >= 2.

    The lower bound is rho(S_{n,q}^1), which is F-free for these trees, and the upper bound is the Perron root of
    J = [[q-1, n-q], [q, delta-1]]. The nominal closed form of rho(S_{n,q}^0) is carried alongside the lower bound.

    :param tree: The tree F.
    :param n: Number of vertices.
    :param tree_profile: Profile of F, recomputed when omitted.
    :return: Lower bound (nominal and exact), upper bound and the anchor sqrt(q n).
    :raises ClassificationDomainError: For stars and for trees with delta = 1.
    """
    tree_profile = tree_profile or profile(tree)
    q, delta = tree_profile.q, tree_profile.delta
    if q == 0:
        raise ClassificationDomainError("Stars (q = 0) have no spectral bound problem.")
    if delta == 1:
        raise ClassificationDomainError("delta = 1: the extremal graphs are joins with an independent set, "
                                        "use classify instead of bounds.")
    if n < tree_profile.l:
        raise ParameterRangeError(f"Vertex count n={n} must be at least l={tree_profile.l}.")
    closed_form = closed_form_rho_S0(n, q)
    lower = LowerBound(nominal=closed_form.nominal, exact=quotient_spectral_radius(quotient_S(n, q, 1)))
    upper = join_bound(q - 1, delta - 1, q, n)
    logging.info(f"bounds for n={n}: nominal lower {lower.nominal.value:.10f}, exact lower {lower.exact.value:.10f}, "
                 f"upper {upper.value:.10f}")
    return BoundsResult(lower, upper, math.sqrt(q * n))


def classify(tree: Graph, n: int, max_q: int = EX_BRUTE_MAX_Q, cross_check: bool = True) -> Prediction:
    """
    Predict the spectral extremal graphs of order n for the tree F.

    :param tree: The tree F.
    :param n: Number of vertices, at least the order of F.
    :param max_q: Largest core order for which extremal cores are enumerated.
    :param cross_check: Compare the spider table against the covering threshold where both apply.
    :return: The prediction with its provenance and, below the confidence threshold, a warning.
    :raises ParameterRangeError: If n is smaller than the order of F.
    :raises ClassificationConsistencyError: If two applicable characterisations disagree.
    """
    tree_profile = profile(tree)
    l = tree_profile.l
    if n < l:
        raise ParameterRangeError(f"Vertex count n={n} must be at least l={l}.")
    if tree_profile.q == 0:
        return Prediction(PredictionKind.OUT_OF_DOMAIN, n, "trivial-star", "star")
    warnings, below = [], n < confidence_threshold(l)
    if below:
        message = (f"n={n} is below the confidence threshold {confidence_threshold(l)} for l={l}; "
                   f"exactness is unconfirmed at this order.")
        logging.warning(message)
        warnings.append(message)
    threshold = cover_threshold(tree_profile)
    if tree_profile.spider is not None:
        case, k, p = spider_case(tree_profile.spider, l, n)
        if cross_check:
            _check_agreement(tree_profile, (k, p), threshold)
        kind, theorem, graphs = PredictionKind.EXACT_UNIQUE, "spider-table", (GraphDescriptor.S(n, k, p),)
    elif threshold is not None:
        case, k, p = threshold
        kind, theorem, graphs = PredictionKind.EXACT_UNIQUE, "cover-threshold", (GraphDescriptor.S(n, k, p),)
    elif tree_profile.delta == 1:
        theorem = "pendant-core"
        kind, case, graphs = _pendant_core(tree, tree_profile, n, max_q)
    else:
        result = bounds(tree, n, tree_profile)
        return Prediction(PredictionKind.BOUNDS_ONLY, n, "degree-bounds", "sandwich",
                          graphs=(GraphDescriptor.S(n, tree_profile.q, 1),), lower=result.lower,
                          upper=result.upper, anchor=result.anchor, warnings=tuple(warnings), below_threshold=below)
    return Prediction(kind, n, theorem, case, graphs=graphs, anchor=math.sqrt(tree_profile.q * n),
                      warnings=tuple(warnings), below_threshold=below)


def _check_agreement(tree_profile: TreeProfile, spider_parameters: tuple[int, int],
                     threshold: tuple[str, int, int] | None) -> None:
    l = tree_profile.l
    spider_gives_g_nl = spider_parameters == G_nl_parameters(l)
    if spider_gives_g_nl != (threshold is not None):
        raise ClassificationConsistencyError(
            f"Spider table gives S(n,{spider_parameters[0]},{spider_parameters[1]}) but the covering threshold "
            f"{'holds' if threshold else 'fails'} (l={l}, beta={tree_profile.beta}, delta={tree_profile.delta}).")


@dataclass(frozen=True)
class DiameterResult:
    tree: Graph
    prediction: Prediction
    universal: GraphDescriptor | None  # S_{n,(l-3)/2}^0 when l and d are both odd


def diameter_classification(l: int, d: int, n: int) -> DiameterResult:
    """
    Extremal behaviour of trees of order l and diameter d. When l or d is even the spider built by
    :func:`diameter_spider` has G_{n,l} as its unique extremal graph. When both are odd, any graph with spectral
    radius at least rho(S_{n,(l-3)/2}^0) other than that graph contains every such tree; the returned ``universal``
    descriptor names it.
    """
    tree = diameter_spider(l, d)
    prediction = classify(tree, n)
    universal = GraphDescriptor.S(n, (l - 3) // 2, 0) if l % 2 == 1 and d % 2 == 1 else None
    return DiameterResult(tree, prediction, universal)


def predicted_graphs(prediction: Prediction) -> list[Graph]:
    return [descriptor.instantiate() for descriptor in prediction.graphs]
