"""Write the synthetic datasets used by the bundled suite manifest.

Creates ``data/synthetic_classification.json`` and
``data/synthetic_regression.json`` relative to the current directory; run
from the repository root before ``hygraph suite
manifests/synthetic_suite.json``.
"""

import argparse
import os

from hygraph.io import save
from hygraph.synthetic import make_classification_graph, make_regression_graph


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="data")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    os.makedirs(args.out_dir, exist_ok=True)
    class_path = os.path.join(args.out_dir, "synthetic_classification.json")
    reg_path = os.path.join(args.out_dir, "synthetic_regression.json")
    save(make_classification_graph(num_nodes=300, num_hyperedges=60,
                                   seed=args.seed),
         class_path, name="synthetic_classification")
    save(make_regression_graph(num_nodes=200, seed=args.seed),
         reg_path, name="synthetic_regression")
    print(f"wrote {class_path}")
    print(f"wrote {reg_path}")


if __name__ == "__main__":
    main()
