#!/usr/bin/env python3
"""Fetch the SRBCT gene-expression dataset and convert it to the CSV layout
the acceptance suite and CLI expect (feature columns + a 'class' label
column). Needs network access to GitHub, or pass a local SRBCT.mat.

Usage:
    python3 tools/fetch_srbct.py [path/to/SRBCT.mat] [-o data/srbct.csv]
"""
import argparse
import io
import sys
import urllib.request

URL = "https://github.com/jundongl/scikit-feature/raw/master/skfeature/data/SRBCT.mat"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("mat", nargs="?", help="local SRBCT.mat (downloaded when omitted)")
    parser.add_argument("-o", "--output", default="data/srbct.csv")
    args = parser.parse_args()

    from scipy.io import loadmat  # deferred so --help works without scipy

    if args.mat:
        mat = loadmat(args.mat)
    else:
        print(f"downloading {URL} ...")
        with urllib.request.urlopen(URL) as response:
            mat = loadmat(io.BytesIO(response.read()))

    x = mat["X"]
    y = mat["Y"].ravel()
    n, m = x.shape
    print(f"SRBCT: {n} instances, {m} features, {len(set(y.tolist()))} classes")

    import os

    os.makedirs(os.path.dirname(args.output) or ".", exist_ok=True)
    with open(args.output, "w") as out:
        out.write(",".join(f"g{j}" for j in range(m)) + ",class\n")
        for i in range(n):
            row = ",".join(repr(float(v)) for v in x[i])
            out.write(f"{row},{int(y[i])}\n")
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
