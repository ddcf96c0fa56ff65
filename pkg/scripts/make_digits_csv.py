"""Write the handwritten-digits benchmark as a CSV for ``neumaps run``.

Uses the 8x8 UCI digits copy bundled with scikit-learn (no download), keeps
classes 0-5 (1083 images) and appends the class as the last column::

    python scripts/make_digits_csv.py data/digits.csv
    neumaps run --input data/digits.csv --label-col -1 --c 0.5 --basis right --fraction 0.25
"""
import argparse
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("output", help="CSV path to write")
    ap.add_argument("--n-class", type=int, default=6, help="keep digits 0..n_class-1 (default 6: 1083 images)")
    args = ap.parse_args(argv)
    X, y = load_digits(n_class=args.n_class, return_X_y=True)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(out, np.column_stack([X, y]), delimiter=",", fmt="%.17g")
    print(f"wrote {len(y)} rows x {X.shape[1]} features (+ label) to {out}")


if __name__ == "__main__":
    main()
