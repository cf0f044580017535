"""Write data/cleveland.csv from the copy of the UCI Cleveland heart-disease
data that ships inside the Orange3 wheel.

    pip download --no-deps orange3 -d /tmp/orange
    python scripts/extract_cleveland_from_orange.py /tmp/orange/orange3-*.whl
"""

import csv
import sys
import zipfile
from pathlib import Path

MEMBER = "Orange/datasets/heart_disease.tab"
COLUMNS = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
           "exang", "oldpeak", "slope", "ca", "thal", "num"]


def main(wheel: str, out: str = "data/cleveland.csv") -> None:
    lines = zipfile.ZipFile(wheel).read(MEMBER).decode().splitlines()
    # Orange .tab files carry three header rows: names, types, flags
    rows = [line.split("\t") for line in lines[3:] if line.strip()]
    with Path(out).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        w.writerows([c.strip() or "?" for c in row] for row in rows)
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main(*sys.argv[1:])
