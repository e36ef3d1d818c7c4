#!/usr/bin/env python3
"""Convert raw Cora into the edge-list and attribute files read by `guide`.

Two source layouts are understood:

  linqs      cora.content ("<paper> <1433 binary words> <class>") and
             cora.cites ("<cited> <citing>"), as in the LINQS tarball
  planetoid  the ind.cora.{x,tx,allx,graph,test.index} pickles

Both give 2708 nodes and 5278 undirected edges. Output:

  OUT/edges.txt        "# nodes N" header, then "u v" per edge (u < v)
  OUT/attributes.txt   "# shape N D" header, then sparse "node feature value"
  OUT/classes.txt      one class label per node (not used by the detector)

Usage: cora_to_guide.py {linqs|planetoid} SRC_DIR OUT_DIR
"""

import argparse
import pathlib
import pickle
import sys


def read_linqs(src):
    ids, rows, classes = {}, [], []
    with open(src / "cora.content") as f:
        for line in f:
            fields = line.split()
            if not fields:
                continue
            ids[fields[0]] = len(ids)
            rows.append([j for j, v in enumerate(fields[1:-1]) if v != "0"])
            classes.append(fields[-1])
    dim = len(line.split()) - 2
    edges = set()
    with open(src / "cora.cites") as f:
        for line in f:
            fields = line.split()
            if len(fields) != 2 or fields[0] not in ids or fields[1] not in ids:
                continue
            u, v = ids[fields[0]], ids[fields[1]]
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return rows, dim, edges, classes


def read_planetoid(src):
    import numpy as np
    import scipy.sparse as sp

    def load(name):
        with open(src / f"ind.cora.{name}", "rb") as f:
            return pickle.load(f, encoding="latin1")

    x_all, tx, graph = load("allx"), load("tx"), load("graph")
    ally, ty = load("ally"), load("ty")
    test_idx = [int(line) for line in open(src / "ind.cora.test.index")]
    features = sp.vstack((x_all, tx)).tolil()
    labels = np.vstack((ally, ty))
    order = sorted(test_idx)
    features[test_idx, :] = features[order, :]
    labels[test_idx, :] = labels[order, :]
    features = features.tocsr()
    rows = [list(features[i].indices) for i in range(features.shape[0])]
    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u != v:
                edges.add((min(u, v), max(u, v)))
    classes = [str(int(c)) for c in labels.argmax(axis=1)]
    return rows, features.shape[1], edges, classes


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("layout", choices=["linqs", "planetoid"])
    ap.add_argument("src", type=pathlib.Path)
    ap.add_argument("out", type=pathlib.Path)
    args = ap.parse_args()

    reader = read_linqs if args.layout == "linqs" else read_planetoid
    rows, dim, edges, classes = reader(args.src)
    n = len(rows)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "edges.txt", "w") as f:
        f.write(f"# nodes {n}\n")
        for u, v in sorted(edges):
            f.write(f"{u} {v}\n")
    with open(args.out / "attributes.txt", "w") as f:
        f.write(f"# shape {n} {dim}\n")
        for i, cols in enumerate(rows):
            for j in sorted(cols):
                f.write(f"{i} {j} 1\n")
    with open(args.out / "classes.txt", "w") as f:
        f.write("\n".join(classes) + "\n")
    print(f"{n} nodes, {len(edges)} edges, {dim} attributes -> {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
