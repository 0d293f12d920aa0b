"""Worked examples: small colorability patterns, the five-node star, the triangular network.

Sensor locations and table rows use 1-based state labels, as printed.
"""
from __future__ import annotations

import numpy as np

from .patterns import PatternMatrix
from .placement import CostTable
from .wdn import NetworkModel, Node, Pipe

# Three-state colorability example: A^T, C^T and the combined matrices.
EXAMPLE_AT = PatternMatrix.from_rows(["0**", "**0", "*?*"])
EXAMPLE_ABAR_T = PatternMatrix.from_rows(["***", "*?0", "*??"])
EXAMPLE_CT = PatternMatrix.from_rows(["*", "0", "*"])
EXAMPLE_M = PatternMatrix.from_rows(["0***", "**00", "*?**"])
EXAMPLE_MBAR = PatternMatrix.from_rows(["****", "*?00", "*??*"])
EXAMPLE_CT_ADJUSTED = PatternMatrix.from_rows(["*0", "00", "**"])
EXAMPLE_M_ADJUSTED = PatternMatrix.from_rows(["0***0", "**000", "*?***"])

# Star network with one extra 1-4 link closing a cycle through the hub.
STAR_AT = PatternMatrix.from_rows(["000**", "0000*", "0000*", "0000*", "****0"])
STAR_A = STAR_AT.T
STAR_SENSORS = (1, 2, 3)

# Published star cost columns, in state order 1..5.
STAR_TABLE = {
    "c_out": [0.0, 0.0, 0.0, 0.333, 1.0],
    "c_in": [0.333, 0.0, 0.0, 0.0, 1.0],
    "c_pr": [0.83503, 1.0, 1.0, 1.0, 0.0],
    "c_ind": [1.0, 1.0, 1.0, 1.0, 1.0],
    "c_n": [0.000486, 0.0, 0.0, 0.381, 1.0],
}

# Triangular network: three junctions and a tank, four pipes (tail -> head).
TRIANGLE_INCIDENCE = np.array(
    [
        [-1, 1, 1, 0],
        [0, 0, -1, 1],
        [0, -1, 0, -1],
        [1, 0, 0, 0],
    ],
    dtype=float,
)
TRIANGLE_ADJACENCY_PRINTED = np.array(
    [
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [1, 1, 0, 0],
        [0, 0, 0, 0],
    ],
    dtype=float,
)
TRIANGLE_SENSORS = ((4, 6), (4, 7))

# Published triangle-network cost columns, in state order 1..8 (flows 1-4, heads 5-8).
TRIANGLE_TABLE = {
    "c_out": [0.75, 0.75, 0.75, 0.75, 1.0, 0.5, 0.5, 0.0],
    "c_in": [0.75, 0.75, 0.75, 0.75, 1.0, 0.5, 0.5, 0.0],
    "c_pr": [0.0, 0.16967, 0.16967, 0.14578, 0.14991, 0.61626, 0.61626, 1.0],
    "c_ind": [0.4995, 1.0, 1.0, 0.4995, 0.0, 0.0, 0.0, 0.0],
    "c_n": [0.76509, 1.0, 1.0, 0.78086, 0.78423, 0.39658, 0.39658, 0.0],
}


def triangle_network() -> NetworkModel:
    nodes = [Node("1"), Node("2"), Node("3"), Node("4", "tank")]
    pipes = [Pipe("1", "1", "4"), Pipe("2", "3", "1"), Pipe("3", "2", "1"), Pipe("4", "3", "2")]
    return NetworkModel(nodes, pipes)


def table_costs(table: dict, with_aggregate: bool = True) -> CostTable:
    return CostTable(
        table["c_out"], table["c_in"], table["c_pr"], table["c_ind"],
        c_n_supplied=table["c_n"] if with_aggregate else None,
        provenance={k: "supplied" for k in table},
    )
