#!/usr/bin/env python3
"""Rebuild the three benchmark datasets in their canonical file formats.

The raw files are extracted from PyPI wheels that bundle them, so only a
package index is needed:

  data/breast-cancer-wisconsin.data  <- rdatasets (MASS::biopsy, 699 rows)
  data/pima-indians-diabetes.data    <- keel-ds (KEEL pima, 768 rows)
  data/u.data                        <- pytorch-widedeep (Movielens 100k)

Usage: python3 scripts/fetch_datasets.py [--out data] [--wheels DIR]
"""
import argparse
import glob
import io
import lzma
import os
import pickle
import subprocess
import sys
import zipfile

WHEELS = {
    "rdatasets": "rdatasets",
    "keel-ds": "keel_ds",
    "pytorch-widedeep": "pytorch_widedeep",
}


def wheel(wheel_dir, project):
    prefix = WHEELS[project]
    found = glob.glob(os.path.join(wheel_dir, f"{prefix}-*.whl"))
    if not found:
        subprocess.check_call(
            [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
             "--timeout", "120", "--retries", "8", "-d", wheel_dir, project]
        )
        found = glob.glob(os.path.join(wheel_dir, f"{prefix}-*.whl"))
    return zipfile.ZipFile(sorted(found)[-1])


def write_atomic(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w", newline="\n") as f:
        f.write(text)
    os.replace(tmp, path)


def breast_cancer(wheel_dir, out):
    z = wheel(wheel_dir, "rdatasets")
    df = pickle.loads(lzma.decompress(z.read("rdatasets/_data/MASS/biopsy.pkl.compress")))
    lines = []
    for row in df.itertuples(index=False):
        feats = []
        for v in (row.V1, row.V2, row.V3, row.V4, row.V5, row.V6, row.V7, row.V8, row.V9):
            feats.append("?" if v != v else str(int(v)))
        cls = {"benign": "2", "malignant": "4"}[str(row._11)]
        lines.append(",".join([str(int(row.ID))] + feats + [cls]))
    write_atomic(os.path.join(out, "breast-cancer-wisconsin.data"), "\n".join(lines) + "\n")
    return len(lines)


def pima(wheel_dir, out):
    z = wheel(wheel_dir, "keel-ds")
    raw = z.read("keel_ds/data/balanced/raw/pima.dat").decode().splitlines()
    lines = []
    for line in raw:
        line = line.strip()
        if not line or line.startswith("@"):
            continue
        *feats, cls = [f.strip() for f in line.split(",")]
        label = {"tested_positive": "1", "tested_negative": "0"}[cls]
        lines.append(",".join(feats + [label]))
    write_atomic(os.path.join(out, "pima-indians-diabetes.data"), "\n".join(lines) + "\n")
    return len(lines)


def movielens(wheel_dir, out):
    import pandas as pd

    z = wheel(wheel_dir, "pytorch-widedeep")
    df = pd.read_parquet(
        io.BytesIO(z.read("pytorch_widedeep/datasets/data/MovieLens100k_data.parquet.brotli"))
    )
    lines = [
        f"{u}\t{i}\t{r}\t{t}"
        for u, i, r, t in zip(df["user_id"], df["movie_id"], df["rating"], df["timestamp"])
    ]
    write_atomic(os.path.join(out, "u.data"), "\n".join(lines) + "\n")
    return len(lines)


def main():
    ap = argparse.ArgumentParser()
    here = os.path.dirname(os.path.abspath(__file__))
    ap.add_argument("--out", default=os.path.join(here, "..", "data"))
    ap.add_argument("--wheels", default=os.path.join(here, "..", "target", "dataset-wheels"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    os.makedirs(args.wheels, exist_ok=True)
    print("breast cancer rows:", breast_cancer(args.wheels, args.out))
    print("pima rows:", pima(args.wheels, args.out))
    print("movielens ratings:", movielens(args.wheels, args.out))


if __name__ == "__main__":
    main()
