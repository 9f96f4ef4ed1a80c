"""Tour of the hybrid-graph data model.

Builds one small graph that mixes simple edges, hyperedges, and a parent
hierarchy, then shows validation, classification, and the three lossy
views (simple / hypergraph / two-level hierarchy).
"""

import argparse

import numpy as np

from hygraph import (
    HybridGraph,
    Task,
    classify,
    compute_stats,
    to_hypergraph,
    to_simple,
    to_two_level_hierarchy,
    validate,
)


def show(tag, g):
    stats = compute_stats(g)
    print(f"{tag:<22} kind={classify(g).name:<15} "
          f"nodes={stats.num_nodes:<3} edges={stats.num_edges:<3} "
          f"hyperedges={stats.num_hyperedges:<3} "
          f"avg_deg={stats.avg_node_degree:.2f}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    # Six nodes: a triangle (0,1,2), a pendant node 3, two group members
    # 4 and 5.  One 3-member hyperedge, one 2-member hyperedge, and node 5
    # parented under node 2.
    g = HybridGraph(
        node_features=rng.normal(size=(6, 4)),
        simple_edges=np.array([[0, 1], [1, 2], [0, 2], [2, 3]], dtype=np.int64),
        hyperedges=((0, 1, 4), (4, 5)),
        hyperedge_weights=np.array([1.0, 2.0]),
        parent=np.array([0, 1, 2, 3, 4, 2], dtype=np.int64),
        labels=np.array([0, 0, 1, 1, 0, 1], dtype=np.int64),
        task=Task("classification", num_classes=2),
    )
    print("violations:", validate(g) or "none")
    show("original", g)

    show("to_simple", to_simple(g))
    show("to_hypergraph", to_hypergraph(g))

    two = to_two_level_hierarchy(g)
    show("to_two_level", two)
    print("\ntwo-level view: each hyperedge became a virtual parent node")
    for v in range(g.num_nodes, two.num_nodes):
        children = [u for u in range(two.num_nodes) if int(two.parent[u]) == v and u != v]
        print(f"  virtual node {v}: children {children}, "
              f"label {int(two.labels[v])}")

    # Deliberately broken graph: self-loop and an empty hyperedge.
    bad = HybridGraph(
        node_features=np.zeros((2, 1)),
        simple_edges=np.array([[0, 0]], dtype=np.int64),
        hyperedges=((),),
    )
    print("\nbroken graph reports:", "; ".join(validate(bad)))


if __name__ == "__main__":
    main()
