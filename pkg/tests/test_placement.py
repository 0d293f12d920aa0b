import io
from importlib.resources import files

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from structobs import placement
from structobs.colorability import check_observability, output_pattern
from structobs.fixtures import STAR_A, STAR_TABLE, TRIANGLE_TABLE, table_costs, triangle_network
from structobs.patterns import PatternError, PatternMatrix
from structobs.placement import (
    CostTable,
    brute_force_minimum,
    compute_costs,
    group_by_cost,
    normalize,
    place_sensors,
    read_costs_csv,
)
from structobs.wdn import derive_wdn_pattern

DATA = files("structobs") / "data"
WDN_A = derive_wdn_pattern(triangle_network())


def one_based(groups):
    return [[s + 1 for s in g] for g in groups]


@st.composite
def small_systems(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    cells = draw(st.lists(st.sampled_from([0, 0, 1, 1, 2]), min_size=n * n, max_size=n * n))
    costs = draw(st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0]), min_size=n, max_size=n))
    return PatternMatrix(np.array(cells).reshape(n, n)), np.array(costs)


class TestNormalize:
    def test_range(self):
        np.testing.assert_allclose(normalize([2, 4, 3]), [0, 1, 0.5])

    def test_constant_maps_to_zero(self):
        assert np.array_equal(normalize([7.0, 7.0]), [0.0, 0.0])

    def test_empty(self):
        with pytest.raises(ValueError):
            normalize([])


class TestGrouping:
    def test_star_table(self):
        assert one_based(group_by_cost(STAR_TABLE["c_n"])) == [[2, 3], [1], [4], [5]]

    def test_triangle_table(self):
        assert one_based(group_by_cost(TRIANGLE_TABLE["c_n"])) == [[8], [6, 7], [1], [4], [5], [2, 3]]

    def test_eps_merges_near_ties(self):
        assert group_by_cost([0.0, 5e-10, 1.0]) == [[0, 1], [2]]
        assert group_by_cost([0.0, 5e-10, 1.0], eps=0.0) == [[0], [1], [2]]

    def test_anchor_prevents_chaining(self):
        # 0.0, 0.6, 1.2 with eps 1: 1.2 is more than eps above the anchor 0.0
        assert group_by_cost([0.0, 0.6, 1.2], eps=1.0) == [[0, 1], [2]]

    def test_negative_eps(self):
        with pytest.raises(ValueError):
            group_by_cost([1.0], eps=-1)


class TestCostTable:
    def test_aggregate_is_quarter_average(self):
        t = CostTable([0, 1], [0, 2], [1, 3], [5, 5])
        np.testing.assert_allclose(t.c_n, [0.0, 0.75])  # constant c_ind normalizes to zero

    def test_supplied_aggregate_wins(self):
        assert np.array_equal(table_costs(STAR_TABLE).c_n, STAR_TABLE["c_n"])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="inconsistent"):
            CostTable([0, 1], [0], [0, 1], [0, 1])

    def test_csv_round_trip(self):
        t = compute_costs(WDN_A, c_ind=TRIANGLE_TABLE["c_ind"])
        back = read_costs_csv(io.StringIO(t.to_csv()))
        np.testing.assert_allclose(back.c_n, t.c_n, atol=1e-9)


class TestReadCsv:
    def test_rows_in_any_order(self):
        t = read_costs_csv(str(DATA / "star_costs.csv"))
        np.testing.assert_allclose(t.c_n, STAR_TABLE["c_n"])
        np.testing.assert_allclose(t.c_pr, STAR_TABLE["c_pr"])

    @pytest.mark.parametrize(
        "text, match",
        [
            ("state,c_out,c_in,c_pr\n1,0,0,0\n", "missing columns"),
            ("state,c_out,c_in,c_pr,c_ind\n1,0,0,x,0\n", "line 2"),
            ("state,c_out,c_in,c_pr,c_ind\n1,0,0,0,0\n1,0,0,0,0\n", "duplicate state"),
            ("state,c_out,c_in,c_pr,c_ind\n1,0,0,0,0\n3,0,0,0,0\n", "exactly 1..2"),
        ],
        ids=["missing-column", "bad-number", "duplicate", "gap"],
    )
    def test_malformed(self, text, match):
        with pytest.raises(ValueError, match=match):
            read_costs_csv(io.StringIO(text))


class TestComputedCosts:
    def test_star_group_ordering(self):
        c = compute_costs(STAR_A, c_ind=STAR_TABLE["c_ind"])
        assert one_based(group_by_cost(c.c_n)) == [[2, 3], [1], [4], [5]]

    def test_triangle_group_ordering(self):
        c = compute_costs(WDN_A, c_ind=TRIANGLE_TABLE["c_ind"])
        assert one_based(group_by_cost(c.c_n)) == [[8], [6, 7], [1], [4], [5], [2, 3]]

    def test_triangle_degree_columns_match_table(self):
        c = compute_costs(WDN_A, c_ind=TRIANGLE_TABLE["c_ind"])
        np.testing.assert_allclose(c.normalized("c_out"), TRIANGLE_TABLE["c_out"])
        np.testing.assert_allclose(c.normalized("c_in"), TRIANGLE_TABLE["c_in"])

    def test_star_degree_columns_are_swapped_in_table(self):
        c = compute_costs(STAR_A)
        np.testing.assert_allclose(c.normalized("c_in"), STAR_TABLE["c_out"], atol=1e-3)
        np.testing.assert_allclose(c.normalized("c_out"), STAR_TABLE["c_in"], atol=1e-3)

    def test_provenance(self):
        assert compute_costs(STAR_A).provenance["c_ind"] == "default"
        assert compute_costs(STAR_A, c_ind=np.ones(5)).provenance["c_ind"] == "supplied"


class TestPlaceSensors:
    def test_star_golden(self):
        res = place_sensors(STAR_A, table_costs(STAR_TABLE))
        assert res.to_dict()["accepted"] == [[1, 2, 3]]
        assert (res.group_index, res.k, res.fallback) == (2, 3, False)

    def test_wdn_golden(self):
        res = place_sensors(WDN_A, table_costs(TRIANGLE_TABLE))
        assert res.to_dict()["accepted"] == [[4, 6], [4, 7]]
        assert (res.group_index, res.k) == (4, 2)

    def test_computed_costs_give_same_answer(self):
        assert place_sensors(STAR_A, compute_costs(STAR_A, c_ind=STAR_TABLE["c_ind"])).to_dict()["accepted"] == [[1, 2, 3]]
        res = place_sensors(WDN_A, compute_costs(WDN_A, c_ind=TRIANGLE_TABLE["c_ind"]))
        assert res.to_dict()["accepted"] == [[4, 6], [4, 7]]

    def test_deterministic(self):
        a = place_sensors(WDN_A, table_costs(TRIANGLE_TABLE)).to_dict()
        b = place_sensors(WDN_A, table_costs(TRIANGLE_TABLE)).to_dict()
        assert a == b

    def test_affine_cost_change_is_harmless(self):
        c = np.asarray(TRIANGLE_TABLE["c_n"])
        ref = place_sensors(WDN_A, c).accepted
        assert place_sensors(WDN_A, 3.0 * c + 2.0).accepted == ref

    def test_constant_costs_match_brute_force(self):
        for A in (STAR_A, WDN_A):
            res = place_sensors(A, np.zeros(A.rows))
            min_k, sets = brute_force_minimum(A)
            assert res.k == min_k
            assert list(res.accepted) == sets

    def test_memo_changes_nothing(self):
        a = place_sensors(WDN_A, table_costs(TRIANGLE_TABLE))
        b = place_sensors(WDN_A, table_costs(TRIANGLE_TABLE), memo=True)
        assert a.accepted == b.accepted and a.combinations_evaluated == b.combinations_evaluated

    def test_fallback_places_everywhere(self, monkeypatch):
        class Never:
            observable = False

        monkeypatch.setattr(placement, "check_observability", lambda *a, **k: Never())
        res = place_sensors(STAR_A, np.arange(5.0))
        assert res.fallback and res.accepted == ((0, 1, 2, 3, 4),)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="entries"):
            place_sensors(STAR_A, np.zeros(4))

    def test_non_square(self):
        with pytest.raises(PatternError):
            place_sensors(PatternMatrix.zeros(2, 3), np.zeros(2))

    @settings(max_examples=80, deadline=None)
    @given(small_systems())
    def test_accepted_sets_are_valid_and_not_below_minimum(self, sys_):
        A, costs = sys_
        res = place_sensors(A, costs)
        min_k, _ = brute_force_minimum(A)
        assert res.k >= min_k
        pool = {s for g in res.groups[: res.group_index] for s in g}
        for sensors in res.accepted:
            assert len(sensors) == res.k
            assert set(sensors) <= pool
            assert set(sensors) & set(res.groups[res.group_index - 1])
            assert check_observability(A, output_pattern(A.rows, sensors)).observable


class TestBruteForce:
    def test_star(self):
        assert brute_force_minimum(STAR_A) == (3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])

    def test_wdn(self):
        assert brute_force_minimum(WDN_A) == (2, [(1, 7), (2, 7), (3, 5), (3, 6)])

    def test_diag_star_needs_all(self):
        assert brute_force_minimum(PatternMatrix.diag(3)) == (3, [(0, 1, 2)])

    def test_limit(self):
        with pytest.raises(ValueError, match="limited"):
            brute_force_minimum(PatternMatrix.diag(5), limit=4)
