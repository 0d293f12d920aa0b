import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structobs.fixtures import EXAMPLE_M, STAR_A, TRIANGLE_ADJACENCY_PRINTED, TRIANGLE_INCIDENCE, triangle_network
from structobs.patterns import (
    PatternError,
    PatternMatrix,
    Symbol,
    adjacency_and_incidence,
    degree_costs,
    graph_of,
    pattern_from_graph,
    pattern_membership,
)
from structobs.verify import RealizationSampler, sample_realization
from structobs.wdn import OperatingPoint, derive_wdn_pattern, linearize, random_params


@st.composite
def patterns(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    cells = draw(st.lists(st.integers(0, 2), min_size=r * c, max_size=r * c))
    return PatternMatrix(np.array(cells).reshape(r, c))


def test_symbol_order_and_chars():
    assert Symbol.ZERO < Symbol.STAR < Symbol.UNKNOWN
    assert [s.char for s in Symbol] == ["0", "*", "?"]
    assert len(Symbol) == 3


@given(patterns())
def test_text_round_trip(P):
    assert PatternMatrix.from_text(P.to_text()) == P


def test_csv_reading():
    P = PatternMatrix.from_csv(io.StringIO("0,*,*,*\n*,*,0,0\n*,?,*,*\n"))
    assert P == EXAMPLE_M


def test_bad_symbol_and_ragged_rows():
    with pytest.raises(PatternError, match="row 1, column 2"):
        PatternMatrix.from_rows(["0x"])
    with pytest.raises(PatternError, match="ragged"):
        PatternMatrix.from_rows(["00", "0"])


def test_immutable():
    P = PatternMatrix.diag(2)
    with pytest.raises(ValueError):
        P.data[0, 0] = 0


class TestMembership:
    def test_identity_realizes_diag_star(self):
        assert pattern_membership(np.eye(3), PatternMatrix.diag(3))

    def test_zero_does_not(self):
        assert not pattern_membership(np.zeros((3, 3)), PatternMatrix.diag(3))

    def test_nonzero_in_zero_slot(self):
        X = np.eye(3)
        X[0, 1] = 1e-3
        assert not pattern_membership(X, PatternMatrix.diag(3))

    def test_dimension_mismatch(self):
        with pytest.raises(PatternError):
            pattern_membership(np.eye(2), PatternMatrix.diag(3))

    def test_linearized_wdn_is_a_realization(self):
        net = triangle_network()
        rng = np.random.default_rng(5)
        net = net.with_params(random_params(net, rng))
        xo = OperatingPoint(rng.uniform(0.1, 5, net.m), rng.uniform(0.1, 50, net.n))
        assert pattern_membership(linearize(net, xo), derive_wdn_pattern(net))

    @settings(max_examples=60)
    @given(patterns(), st.integers(0, 2**31 - 1), st.data())
    def test_relaxing_to_unknown_keeps_membership(self, P, seed, data):
        X = sample_realization(P, RealizationSampler(seed=seed))
        assert pattern_membership(X, P)
        i = data.draw(st.integers(0, P.rows - 1))
        j = data.draw(st.integers(0, P.cols - 1))
        assert pattern_membership(X, P.replace(i, j, Symbol.UNKNOWN))


class TestGraph:
    def test_example_m(self):
        g = graph_of(EXAMPLE_M)
        assert g.n == 4
        # column j of M lists the out-neighbours of node j (0-based here)
        assert g.star_edges == ((0, 1), (0, 2), (1, 0), (1, 1), (2, 0), (2, 2), (3, 0), (3, 2))
        assert g.unknown_edges == ((1, 2),)

    def test_all_zero(self):
        g = graph_of(PatternMatrix.zeros(2, 2))
        assert g.n == 2 and g.star_edges == () and g.unknown_edges == ()

    def test_diag_star_self_loops(self):
        assert graph_of(PatternMatrix.diag(3)).star_edges == ((0, 0), (1, 1), (2, 2))

    @given(patterns())
    def test_round_trip(self, P):
        assert pattern_from_graph(graph_of(P), *P.shape) == P


class TestAdjacencyIncidence:
    def test_triangle_incidence_matches_printed(self):
        _, inc = triangle_network().adjacency_and_incidence()
        np.testing.assert_array_equal(inc, TRIANGLE_INCIDENCE)

    def test_triangle_adjacency_is_transpose_of_printed(self):
        # The printed adjacency lists each pipe head->tail; with A_adj[i, j] = 1 for
        # an edge j -> i the consistent matrix is its transpose.
        adj, _ = triangle_network().adjacency_and_incidence()
        np.testing.assert_array_equal(adj, TRIANGLE_ADJACENCY_PRINTED.T)

    def test_single_edge(self):
        adj, inc = adjacency_and_incidence(2, [(0, 1)])
        np.testing.assert_array_equal(inc[:, 0], [-1, 1])
        np.testing.assert_array_equal(adj, [[0, 0], [1, 0]])

    def test_three_cycle(self):
        adj, inc = adjacency_and_incidence(3, [(0, 1), (1, 2), (2, 0)])
        assert np.all((inc == -1).sum(axis=0) == 1) and np.all((inc == 1).sum(axis=0) == 1)
        in_degree = np.array([1, 1, 1])
        np.testing.assert_array_equal(adj.sum(axis=1), in_degree)

    def test_dangling_reference(self):
        with pytest.raises(ValueError, match="outside"):
            adjacency_and_incidence(2, [(0, 5)])

    @given(st.integers(2, 7), st.data())
    def test_adjacency_from_head_tail_indicators(self, n, data):
        pairs = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]), max_size=12, unique=True))
        adj, inc = adjacency_and_incidence(n, pairs)
        H, T = (inc == 1).astype(float), (inc == -1).astype(float)
        np.testing.assert_array_equal(np.minimum(H @ T.T, 1), adj)


class TestDegreeCosts:
    def test_diag(self):
        c_in, c_out = degree_costs(PatternMatrix.diag(4))
        np.testing.assert_array_equal(c_in, np.ones(4))
        np.testing.assert_array_equal(c_out, np.ones(4))

    def test_star_counts_by_hand(self):
        # rows of A (= columns of the printed A^T): 0000*, 0000*, 0000*, *000*, ****0
        c_in, c_out = degree_costs(STAR_A)
        np.testing.assert_array_equal(c_in, [1, 1, 1, 2, 4])
        np.testing.assert_array_equal(c_out, [2, 1, 1, 1, 4])

    def test_triangle_unknown_weighting(self):
        A = derive_wdn_pattern(triangle_network())
        # flows: self + two pipe ends; heads: node degree + the '?' self entry
        full, _ = degree_costs(A)
        np.testing.assert_array_equal(full, [3, 3, 3, 3, 4, 3, 3, 2])
        none, _ = degree_costs(A, count_unknown=False)
        np.testing.assert_array_equal(none, [3, 3, 3, 3, 3, 2, 2, 1])
        half, _ = degree_costs(A, unknown_weight=0.5)
        np.testing.assert_array_equal(half, [3, 3, 3, 3, 3.5, 2.5, 2.5, 1.5])

    def test_non_square(self):
        with pytest.raises(PatternError):
            degree_costs(PatternMatrix.zeros(2, 3))

    @given(patterns(max_rows=6, max_cols=6))
    def test_symmetric_pattern_has_equal_in_out(self, P):
        n = min(P.shape)
        S = P.data[:n, :n]
        sym = PatternMatrix(np.maximum(S, S.T))
        c_in, c_out = degree_costs(sym)
        np.testing.assert_array_equal(c_in, c_out)
