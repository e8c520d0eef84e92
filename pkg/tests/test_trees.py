import logging

import networkx as nx
import pytest

from spextree._canonical import canonical_form, are_isomorphic
from spextree._codecs import to_graph6
from spextree._data_structures import Graph
from spextree._errors import TreeParseError, ParameterRangeError, ClassificationDomainError
from spextree.extremal import spider_case
from spextree.graphs import complete_graph, G_nl_parameters
from spextree.trees import (parse_tree, load_tree, profile, spider_profile, path_centers, covering_family,
                            diameter_spider, diameter, generate_trees, catalog_trees, min_vertex_cover_size,
                            maximum_matching, path_tree, spider_tree, star_tree)
from spextree.verifier import contains_tree
from .conftest import min_cover_brute, random_tree, scaled, tree

CATERPILLAR_222 = Graph.from_edges(9, [(0, 1), (1, 2), (0, 3), (0, 4), (1, 5), (1, 6), (2, 7), (2, 8)])


def spiders_up_to(max_order: int):
    """ Every spider with at least three legs, plus every path, of order 4..max_order. """

    def partitions(total, largest, parts):
        if total == 0:
            yield parts
            return
        for leg in range(min(total, largest), 0, -1):
            yield from partitions(total - leg, leg, parts + (leg,))

    for l in range(4, max_order + 1):
        yield path_tree(l)
        for legs in partitions(l - 1, l - 1, ()):
            if len(legs) >= 3:
                yield spider_tree(*legs)


class TestParsing:
    @pytest.mark.parametrize("name,order", [("path(5)", 5), ("star(6)", 6), ("spider(3,3,1)", 8),
                                            ("doublestar(1,2)", 5), ("broom(7,3)", 7), ("diameter-spider(8,5)", 8)])
    def test_catalog_names(self, name, order):
        parsed = parse_tree(name)
        assert parsed.n == order
        assert parsed.number_of_edges == order - 1

    def test_graph6_name(self):
        assert parse_tree("graph6:" + to_graph6(spider_tree(3, 3, 1))) == spider_tree(3, 3, 1)

    @pytest.mark.parametrize("text", ["0 1\n1 2\n2 0\n", "0 1\n2 3\n", "# n=4\n0 1\n1 2\n"])
    def test_not_a_tree(self, text):
        with pytest.raises(TreeParseError):
            parse_tree(text, format="edge-list")

    def test_malformed_line(self):
        with pytest.raises(TreeParseError) as excinfo:
            parse_tree("0 1 2\n", format="edge-list")
        assert excinfo.value.line == 1

    @pytest.mark.parametrize("name", ["blob(3)", "path(x)", "spider()", "path(0)", "doublestar(1)"])
    def test_bad_names(self, name):
        with pytest.raises(TreeParseError):
            parse_tree(name)

    def test_load_tree_from_file(self, tmp_path):
        source = tmp_path / "p4.txt"
        source.write_text("0 1\n1 2\n2 3\n")
        assert load_tree(str(source)) == path_tree(4)
        assert load_tree("path(4)") == path_tree(4)


class TestProfile:
    def test_p4(self):
        p4 = profile(path_tree(4))
        assert (p4.l, p4.q, p4.delta, p4.beta, p4.nu) == (4, 1, 1, 2, 2)
        assert p4.ambiguous_orientation

    def test_p5(self):
        p5 = profile(path_tree(5))
        assert (p5.q, p5.delta, p5.beta) == (1, 2, 2)
        assert p5.side_a == (1, 3)
        assert not p5.ambiguous_orientation

    def test_spider_331(self):
        spider = profile(tree("spider(3,3,1)"))
        assert (spider.q, spider.delta, spider.beta, spider.nu, spider.diameter) == (2, 2, 3, 3, 6)
        assert spider.spider.legs == (3, 3, 1)

    def test_doublestar(self):
        double = profile(tree("doublestar(2,2)"))
        assert (double.q, double.delta, double.beta) == (2, 1, 2)
        assert double.spider is None

    def test_star(self):
        assert profile(star_tree(6)).is_star

    def test_to_dict(self):
        data = profile(path_tree(5)).to_dict()
        assert data["A"] == [1, 3]
        assert data["spider"]["legs"] == [2, 2]

    def test_covering_number_is_matching_number(self, rng):
        for _ in range(scaled(200, 1000)):
            l = rng.randint(2, 16)
            t = random_tree(rng, l)
            beta = min_vertex_cover_size(t)
            assert beta == len(maximum_matching(t))
            assert beta == len(nx.max_weight_matching(t.to_networkx(), maxcardinality=True))
            if l <= 12:
                assert beta == min_cover_brute(t)
            if l >= 2:
                assert beta <= profile(t).q + 1

    def test_spider_parameters(self):
        for spider in spiders_up_to(scaled(10, 12)):
            tree_profile = profile(spider)
            if tree_profile.is_star:
                continue
            legs = tree_profile.spider
            if legs.r >= 1:
                assert 2 * tree_profile.beta == tree_profile.l - legs.r + 1, legs
            else:
                assert 2 * tree_profile.beta == tree_profile.l - 1, legs
            expected_delta = 1 if legs.r >= 1 and legs.s >= 1 else 2
            assert tree_profile.delta == expected_delta, legs


class TestSpiderProfile:
    def test_legs(self):
        spider = spider_profile(tree("spider(5,1,1)"))
        assert spider.legs == (5, 1, 1)
        assert (spider.r1, spider.r2, spider.r3, spider.s) == (1, 0, 2, 0)

    def test_path_default_center(self):
        spider = spider_profile(path_tree(6))
        assert spider.center == 3
        assert spider.legs == (3, 2)

    def test_not_a_spider(self):
        assert spider_profile(tree("doublestar(2,2)")) is None

    @pytest.mark.parametrize("name,center", [("spider(3,3,1)", 1), ("path(6)", 0), ("path(6)", 6)])
    def test_illegal_center(self, name, center):
        with pytest.raises(ParameterRangeError):
            spider_profile(tree(name), center=center)

    @pytest.mark.parametrize("l", range(4, 13))
    def test_any_path_center_gives_the_same_case(self, l):
        path = path_tree(l)
        for center in path_centers(path):
            _, k, p = spider_case(spider_profile(path, center=center), l, 100)
            assert (k, p) == G_nl_parameters(l)


class TestCoveringFamily:
    def test_p4_is_complete(self):
        family = covering_family(path_tree(4))
        assert family.complete
        assert family.patterns == (complete_graph(2),)

    def test_doublestar(self):
        family = covering_family(tree("doublestar(2,2)"))
        assert not family.complete
        assert family.summary() == "{K2}"
        assert family.coverings == ((0, 1),)

    def test_spider_331(self):
        family = covering_family(tree("spider(3,3,1)"))
        assert family.complete
        assert family.patterns == (complete_graph(3),)

    def test_caterpillar(self):
        family = covering_family(CATERPILLAR_222)
        assert family.coverings == ((0, 1, 2),)
        assert family.patterns == (Graph.from_edges(3, [(0, 1), (1, 2)]),)

    def test_patterns_are_subgraphs_of_the_tree(self):
        for entry in catalog_trees(scaled(7, 9)):
            tree_profile = profile(entry.tree)
            if tree_profile.is_star:
                continue
            family = covering_family(entry.tree, tree_profile)
            forms = {canonical_form(p) for p in family.patterns}
            assert len(forms) == len(family.patterns)
            if family.complete:
                continue
            for pattern in family.patterns:
                assert tree_profile.beta <= pattern.n <= tree_profile.q
                assert contains_tree(entry.tree, pattern).found

    def test_star(self):
        with pytest.raises(ClassificationDomainError):
            covering_family(star_tree(5))


class TestDiameterSpider:
    @pytest.mark.parametrize("l,d,legs", [(8, 5, (3, 2, 2)), (7, 4, (2, 2, 2)), (9, 8, (6, 2))])
    def test_examples(self, l, d, legs):
        assert diameter_spider(l, d) == spider_tree(*legs)

    def test_order_and_diameter(self):
        for l in range(6, 13):
            for d in range(4, l):
                spider = diameter_spider(l, d)
                assert spider.n == l
                assert diameter(spider) == d

    @pytest.mark.parametrize("l,d", [(5, 4), (8, 8), (8, 3)])
    def test_out_of_range(self, l, d):
        with pytest.raises(ParameterRangeError):
            diameter_spider(l, d)


class TestGeneration:
    @pytest.mark.parametrize("l,count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 3), (6, 6), (7, 11), (8, 23),
                                         (9, 47)])
    def test_tree_counts(self, l, count):
        trees = generate_trees(l)
        assert len(trees) == count
        assert len({canonical_form(t) for t in trees}) == count

    def test_catalog(self):
        entries = catalog_trees(6)
        forms = {canonical_form(e.tree) for e in entries}
        assert len(forms) == 2 + 3 + 6
        for entry in entries:
            assert are_isomorphic(parse_tree(entry.name), entry.tree)
        logging.info(f"catalog up to order 6 has {len(entries)} entries")
