#!/usr/bin/env python3
"""Materialize the two external benchmark datasets as plain CSV files.

daily-min-temperatures.csv  Date,Temp  (Melbourne daily minimum, 1981-1990)
wine.data                   UCI layout: class label (1..3) then 13 features

Sources, in order of preference:
  * the canonical public mirrors (needs network access)
  * the copies bundled with the `greykite` and `scikit-learn` Python wheels
"""
import argparse
import csv
import importlib.util
import io
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

TEMP_URL = ("https://raw.githubusercontent.com/jbrownlee/Datasets/master/"
            "daily-min-temperatures.csv")
WINE_URL = "https://archive.ics.uci.edu/ml/machine-learning-databases/wine/wine.data"


def try_download(url):
    try:
        with urllib.request.urlopen(url, timeout=10) as r:
            return r.read().decode()
    except Exception:
        return None


def temperatures_from_greykite():
    with tempfile.TemporaryDirectory() as d:
        subprocess.run([sys.executable, "-m", "pip", "download", "--no-deps",
                        "-q", "-d", d, "greykite==1.1.0"], check=True)
        wheel = next(pathlib.Path(d).glob("greykite-*.whl"))
        raw = zipfile.ZipFile(wheel).read(
            "greykite/data/daily/daily_temperature_australia.csv").decode()
    rows = list(csv.DictReader(io.StringIO(raw)))
    out = io.StringIO()
    out.write("Date,Temp\n")
    for r in rows:
        out.write(f"{r['Date']},{r['Min_Temp']}\n")
    return out.getvalue()


def wine_from_sklearn():
    found = importlib.util.find_spec("sklearn")
    path = pathlib.Path(found.origin).parent / "datasets" / "data" / "wine_data.csv"
    lines = path.read_text().splitlines()[1:]
    out = io.StringIO()
    for line in lines:
        fields = line.split(",")
        out.write(",".join([str(int(fields[-1]) + 1)] + fields[:-1]) + "\n")
    return out.getvalue()


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="data")
    args = ap.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    temp = try_download(TEMP_URL)
    if temp is None or not temp.startswith('"Date"') and not temp.startswith("Date"):
        temp = temperatures_from_greykite()
    (out / "daily-min-temperatures.csv").write_text(temp.replace('"', ""))

    wine = try_download(WINE_URL) or wine_from_sklearn()
    (out / "wine.data").write_text(wine)
    print(f"wrote {out}/daily-min-temperatures.csv and {out}/wine.data")


if __name__ == "__main__":
    main()
