import itertools
import math
from math import isclose

import pytest

from spextree._canonical import are_isomorphic, dedupe_isomorphic
from spextree._data_structures import Graph, GraphDescriptor, PredictionKind, CoveringFamily, Family
from spextree._errors import BudgetExceededError, ClassificationDomainError, ParameterRangeError
from spextree.extremal import (classify, bounds, ex_brute, spider_case, cover_threshold, diameter_classification,
                               confidence_threshold, predicted_graphs, spider_forcing_order)
from spextree.graphs import (complete_graph, construct_K_ab_p, construct_S, spectral_radius, quotient_S,
                             quotient_spectral_radius, G_nl_parameters)
from spextree.trees import profile, path_tree, star_tree, catalog_trees, covering_family
from spextree.verifier import contains_tree, spex_joinform
from .conftest import brute_embeds, random_tree, scaled, tree
from .test_trees import CATERPILLAR_222, spiders_up_to

# two branch vertices in B, every vertex of A has degree 2, perfect matching of A
ODD_THRESHOLD = Graph.from_edges(11, [(0, 2), (0, 3), (0, 4), (1, 4), (1, 5), (1, 6), (2, 7), (3, 8), (5, 9),
                                      (6, 10)])
EVEN_THRESHOLD = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5), (2, 6), (6, 7)])
COMPLETE_CORE = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (3, 7)])
# two centres of degree 3 at distance 2; A = the centres, delta = 3
BOUNDS_ONLY = Graph.from_edges(7, [(0, 1), (1, 2), (0, 3), (0, 4), (2, 5), (2, 6)])


def labeled_ex(q, family):
    pairs = list(itertools.combinations(range(q), 2))
    best, witnesses = -1, []
    for mask in range(1 << len(pairs)):
        edges = [pair for i, pair in enumerate(pairs) if mask >> i & 1]
        if len(edges) < best:
            continue
        graph = Graph.from_edges(q, edges)
        if any(brute_embeds(graph, pattern) for pattern in family.patterns):
            continue
        if len(edges) > best:
            best, witnesses = len(edges), []
        witnesses.append(graph)
    return best, dedupe_isomorphic(witnesses)


def delta_two_trees(count=20):
    """ The first catalog trees of order at most 9 whose smaller side has minimum degree at least 2. """
    trees = [entry.tree for entry in catalog_trees(9)]
    trees = [t for t in trees if not profile(t).is_star and profile(t).delta >= 2][:count]
    assert len(trees) == count
    return trees


class TestExBrute:
    def test_single_edge_forbidden(self):
        k2 = CoveringFamily(1, (complete_graph(2),), ((),), complete=True)
        assert ex_brute(1, k2).max_edges == 0
        extremal = ex_brute(2, CoveringFamily(2, (complete_graph(2),), ((0, 1),)))
        assert extremal.max_edges == 0
        assert extremal.witnesses == (Graph(2),)

    def test_triangle_forbidden(self):
        k3 = CoveringFamily(2, (complete_graph(3),), ((),), complete=True)
        assert ex_brute(2, k3).max_edges == 1
        four = ex_brute(4, CoveringFamily(4, (complete_graph(3),), ((0, 1, 2),)))
        assert four.max_edges == 4
        assert len(four.witnesses) == 1
        assert are_isomorphic(four.witnesses[0], construct_K_ab_p(2, 2, 0))

    def test_path_forbidden(self):
        p3 = CoveringFamily(3, (Graph.from_edges(3, [(0, 1), (1, 2)]),), ((0, 1, 2),))
        extremal = ex_brute(3, p3)
        assert extremal.max_edges == 1
        assert len(extremal.witnesses) == 1
        assert are_isomorphic(extremal.witnesses[0], Graph.from_edges(3, [(0, 1)]))

    def test_matches_labeled_scan(self, rng):
        families = [covering_family(t) for t in (tree("spider(3,3,1)"), CATERPILLAR_222, ODD_THRESHOLD)]
        for _ in range(scaled(10, 40)):
            t = random_tree(rng, rng.randint(6, 10))
            if 2 <= profile(t).q <= 4:
                families.append(covering_family(t))
        for family in families:
            extremal = ex_brute(family.q, family)
            max_edges, witnesses = labeled_ex(family.q, family)
            assert extremal.max_edges == max_edges
            assert len(extremal.witnesses) == len(witnesses)
            assert all(any(are_isomorphic(w, v) for v in witnesses) for w in extremal.witnesses)

    def test_cap(self):
        with pytest.raises(BudgetExceededError):
            ex_brute(8, CoveringFamily(8, (complete_graph(2),)), max_q=7)


class TestSpiderTable:
    @pytest.mark.parametrize("name,case,k,p", [
        ("path(6)", "odd-and-even-legs", 2, 0),
        ("spider(2,2)", "even-legs-only", 1, 1),
        ("spider(5,1,1)", "long-odd-leg", 2, 1),
        ("spider(3,3,1)", "short-odd-legs-few-pendants", 2, 2),
        ("spider(3,3,1,1)", "short-odd-legs-many-pendants", 2, 14),
    ])
    def test_examples(self, name, case, k, p):
        prediction = classify(tree(name), 30)
        assert prediction.kind is PredictionKind.EXACT_UNIQUE
        assert prediction.theorem == "spider-table"
        assert prediction.case == case
        assert prediction.graphs == (GraphDescriptor.S(30, k, p),)

    @pytest.mark.parametrize("n,p", [(20, 9), (21, 9), (30, 14), (41, 19)])
    def test_many_pendants_matching_grows_with_n(self, n, p):
        assert classify(tree("spider(3,3,1,1)"), n).graphs == (GraphDescriptor.S(n, 2, p),)

    def test_doublestar_12_is_a_star_graph(self):
        prediction = classify(tree("doublestar(1,2)"), 30)
        assert are_isomorphic(prediction.graphs[0].instantiate(), construct_K_ab_p(1, 29, 0))

    @pytest.mark.parametrize("l", range(4, 13))
    def test_paths_give_g_nl(self, l):
        n = confidence_threshold(l)
        assert classify(path_tree(l), n).graphs == (GraphDescriptor.S(n, *G_nl_parameters(l)),)

    def test_exactly_one_case_applies(self):
        for spider in spiders_up_to(scaled(10, 12)):
            tree_profile = profile(spider)
            if tree_profile.is_star:
                continue
            legs = tree_profile.spider
            applicable = [
                legs.s >= 1 and legs.r >= 1,
                legs.s >= 1 and legs.r == 0,
                legs.s == 0 and legs.r1 >= 1,
                legs.s == 0 and legs.r1 == 0 and legs.r2 >= 1 and legs.r3 <= 1,
                legs.s == 0 and legs.r1 == 0 and legs.r2 >= 1 and legs.r3 >= 2,
            ]
            assert sum(applicable) == 1, legs
            _, k, p = spider_case(legs, tree_profile.l, 100)
            assert k >= 1
            assert 0 <= p <= (100 - k) // 2
            # the covering-threshold cross-check runs inside classify
            classify(spider, 100)


class TestSpiderForcing:
    @pytest.mark.parametrize("name,k", [("spider(3,1,1,1)", 2), ("spider(2,1,1,1,1,1,1)", 3), ("spider(5,1,1,1)", 3),
                                        ("spider(3,3,1,1,1,1)", 4), ("spider(3,3,1)", None), ("spider(3,3,1,1)", None),
                                        ("path(7)", None), ("star(7)", None), ("doublestar(2,2)", None)])
    def test_examples(self, name, k):
        assert spider_forcing_order(tree(name)) == k

    def test_strictly_below_forcing_graph(self):
        forcing = 0
        for spider in spiders_up_to(scaled(11, 13)):
            k = spider_forcing_order(spider)
            if k is None:
                continue
            forcing += 1
            assert profile(spider).l == 2 * k + 3
            assert profile(spider).q <= k - 1
            for n in (100, 400):
                ceiling = quotient_spectral_radius(quotient_S(n, k, 0)).value
                predicted = max(d.spectral_radius().value for d in classify(spider, n).graphs)
                assert predicted < ceiling, (spider, n)
        assert forcing >= 3


class TestCoverThreshold:
    def test_even_order(self):
        assert cover_threshold(profile(path_tree(6))) == ("even-order", 2, 0)
        prediction = classify(EVEN_THRESHOLD, 64)
        assert prediction.theorem == "cover-threshold"
        assert prediction.case == "even-order"
        assert prediction.graphs == (GraphDescriptor.S(64, 3, 0),)

    def test_odd_order(self):
        tree_profile = profile(ODD_THRESHOLD)
        assert (tree_profile.q, tree_profile.delta, tree_profile.beta) == (4, 2, 5)
        assert tree_profile.spider is None
        prediction = classify(ODD_THRESHOLD, 121)
        assert prediction.case == "odd-order"
        assert prediction.graphs == (GraphDescriptor.S(121, 4, 1),)
        assert not prediction.warnings

    def test_below(self):
        assert cover_threshold(profile(tree("spider(3,3,1)"))) is None


class TestPendantCore:
    def test_complete_core(self):
        prediction = classify(COMPLETE_CORE, 64)
        assert (prediction.theorem, prediction.case) == ("pendant-core", "complete-core")
        assert prediction.graphs == (GraphDescriptor.S(64, 2, 0),)

    def test_independent_core(self):
        prediction = classify(tree("doublestar(2,2)"), 40)
        assert prediction.case == "independent-core"
        assert prediction.graphs == (GraphDescriptor.K(2, 38),)

    def test_unique_core(self):
        prediction = classify(CATERPILLAR_222, 81)
        assert prediction.kind is PredictionKind.EXACT_UNIQUE
        assert prediction.case == "unique-core"
        descriptor = prediction.graphs[0]
        assert descriptor.family is Family.H
        assert are_isomorphic(descriptor.core, Graph.from_edges(3, [(0, 1)]))
        assert not contains_tree(descriptor.instantiate(), CATERPILLAR_222).found

    def test_symbolic_beyond_the_cap(self):
        prediction = classify(CATERPILLAR_222, 81, max_q=2)
        assert prediction.kind is PredictionKind.FAMILY_CONTAINMENT
        assert prediction.case == "symbolic"
        assert prediction.graphs == ()


class TestClassify:
    def test_star(self):
        prediction = classify(star_tree(6), 10)
        assert prediction.kind is PredictionKind.OUT_OF_DOMAIN
        assert prediction.theorem == "trivial-star"

    def test_n_too_small(self):
        with pytest.raises(ParameterRangeError):
            classify(path_tree(6), 5)

    def test_confidence_warning(self):
        assert classify(path_tree(6), 30).below_threshold
        assert classify(path_tree(6), 30).warnings
        assert not classify(path_tree(6), 36).warnings
        assert confidence_threshold(4) == 20

    def test_bounds_only(self):
        prediction = classify(BOUNDS_ONLY, 49)
        assert prediction.kind is PredictionKind.BOUNDS_ONLY
        assert prediction.theorem == "degree-bounds"
        assert prediction.graphs == (GraphDescriptor.S(49, 1, 1),)
        assert prediction.lower.exact.value < prediction.upper.value
        # J = [[0, n-1], [1, 2]] has Perron root 1 + sqrt(n)
        assert isclose(prediction.upper.value, 1 + math.sqrt(49), abs_tol=1e-12)

    def test_predictions_are_free(self):
        for n in scaled((20,), (20, 40)):
            for entry in catalog_trees(scaled(7, 9)):
                if profile(entry.tree).is_star:
                    continue
                prediction = classify(entry.tree, n)
                for graph in predicted_graphs(prediction):
                    assert not contains_tree(graph, entry.tree).found, (entry.name, n)


class TestBounds:
    def test_p5(self):
        result = bounds(path_tree(5), 100)
        assert isclose(result.upper.value, (1 + math.sqrt(397)) / 2, abs_tol=1e-12)
        assert isclose(result.upper.value, 10.4624, abs_tol=1e-4)
        assert isclose(result.lower.exact.value, spectral_radius(construct_S(100, 1, 1)).value, abs_tol=1e-8)
        assert isclose(result.lower.nominal.value, math.sqrt(98.5), abs_tol=1e-12)
        assert result.anchor == 10.0

    @pytest.mark.parametrize("name", ["doublestar(2,2)", "star(5)", "path(4)"])
    def test_domain(self, name):
        with pytest.raises(ClassificationDomainError):
            bounds(tree(name), 30)

    def test_n_too_small(self):
        with pytest.raises(ParameterRangeError):
            bounds(path_tree(5), 4)

    def test_gap_to_sqrt_qn(self):
        gaps = [bounds(tree("spider(3,3,3)"), n).upper.value - math.sqrt(3 * n) for n in (100, 1000, 10 ** 4)]
        assert all(b >= a - 1e-12 for a, b in zip(gaps, gaps[1:]))
        assert isclose(gaps[-1], 1.5, abs_tol=0.1)

    def test_sandwich(self):
        for t in delta_two_trees():
            q = profile(t).q
            for n in (50, 100, 1000):
                result = bounds(t, n)
                assert math.sqrt(q * (n - q)) <= result.lower.exact.value + 1e-9
                assert result.lower.exact.value < result.upper.value
                assert isclose(result.lower.exact.value, quotient_spectral_radius(quotient_S(n, q, 1)).value)

    def test_restricted_optimum_inside_bounds(self):
        for t in delta_two_trees() + [BOUNDS_ONLY, ODD_THRESHOLD]:
            for n in (50, 100, 1000):
                result = bounds(t, n)
                optimum = spex_joinform(n, t).value.value
                assert result.lower.exact.value - 1e-8 <= optimum <= result.upper.value + 1e-8


class TestDiameterClassification:
    def test_g_nl_when_order_or_diameter_even(self):
        for l in range(6, scaled(11, 13)):
            for d in range(4, l):
                result = diameter_classification(l, d, 100)
                if l % 2 == 0 or d % 2 == 0:
                    assert result.prediction.graphs == (GraphDescriptor.S(100, *G_nl_parameters(l)),)
                    assert result.universal is None
                    assert cover_threshold(profile(result.tree)) is not None
                else:
                    assert result.universal == GraphDescriptor.S(100, (l - 3) // 2, 0)
