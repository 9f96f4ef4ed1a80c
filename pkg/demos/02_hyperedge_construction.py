"""The three hyperedge-construction pipelines.

Cliques for social-style graphs, genomic-style windowed intervals, and
embedding balls for co-purchase-style data, each run on small synthetic
inputs so the output can be read in full.
"""

import argparse

import numpy as np

from hygraph.construct import (
    ball_hyperedges,
    cliques_to_hyperedges,
    interval_hyperedges,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)

    # 1. Maximal cliques (size >= 3) of a small random graph.
    n = 12
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = rng.random(len(pairs)) < 0.35
    edges = np.array([p for p, k in zip(pairs, keep) if k], dtype=np.int64)
    cliques = cliques_to_hyperedges(n, edges, min_size=3)
    print(f"clique pipeline: {len(edges)} edges -> {len(cliques)} hyperedges")
    for members in cliques:
        print("  ", members)

    # 2. Windowed intervals: loci on two chromosomes, one hyperedge per
    # anchor locus covering everything within the window, duplicates merged.
    positions = [
        ("chr1", 0), ("chr1", 120_000), ("chr1", 180_000),
        ("chr1", 900_000), ("chr2", 50_000), ("chr2", 140_000),
    ]
    intervals = interval_hyperedges(positions, window=200_000)
    print(f"\ninterval pipeline (window 200k): {len(intervals)} hyperedges")
    for members in intervals:
        print("  ", members, "->", [positions[v] for v in members])

    # 3. Epsilon balls around each embedding; duplicates are kept, so the
    # count always equals the number of nodes.
    centers = rng.normal(size=(3, 2)) * 6.0
    embeddings = np.vstack([
        centers[rng.integers(0, 3)] + rng.normal(size=2) for _ in range(9)
    ])
    for metric, tau in (("euclidean", 3.0), ("cosine", 0.05)):
        balls = ball_hyperedges(embeddings, tau, metric)
        sizes = sorted(len(b) for b in balls)
        print(f"\nball pipeline ({metric}, tau={tau}): "
              f"{len(balls)} hyperedges, sizes {sizes}")


if __name__ == "__main__":
    main()
