#!/usr/bin/env python3
"""Build the dataset files used by the dataset-gated experiments.

deaths.csv
    Monthly accidental deaths in the USA, 1973-1979 (78 values). The 1973-1978
    part is R's ``datasets::USAccDeaths``, read from the copy bundled with the
    ``pydataset`` package (downloaded with pip into a temporary directory if it
    is not installed). The six 1979 values are the held-out observations used
    for the forecasting comparison and are appended from
    ``hankelcomp.experiments.data.DEATHS_1979``.

wine.csv
    Monthly Australian fortified wine sales, Jan 1980 - Dec 1989 (120 values),
    column ``Fortified`` of the ``AustralianWine`` data in the R package Rssa.
    No pip-installable copy is known, so this file is not fetched; export it
    from R with::

        library(Rssa); data(AustralianWine)
        write.csv(data.frame(value = window(AustralianWine[, "Fortified"],
                  end = c(1989, 12))), "wine.csv", row.names = FALSE)

Usage: ``python scripts/fetch_datasets.py [--dest data]``
"""

import argparse
import csv
import pathlib
import subprocess
import sys
import tarfile
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from hankelcomp.experiments.data import DEATHS_1979  # noqa: E402

RESOURCE = "resources/rdata/csv/datasets/USAccDeaths.csv"


def _installed_resource():
    # pydataset unpacks its resources into ~/.pydataset on first import
    path = pathlib.Path.home() / ".pydataset" / RESOURCE
    return path if path.exists() else None


def _downloaded_resource(tmp):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--no-binary", ":all:",
         "pydataset==0.2.0", "-d", tmp],
        check=True,
    )
    archive = next(pathlib.Path(tmp).glob("pydataset-*.tar.gz"))
    inner = f"{archive.name[:-len('.tar.gz')]}/pydataset/resources.tar.gz"
    member = "resources/rdata/csv/datasets/USAccDeaths.csv"
    # the sdist ships its data as a nested archive
    with tarfile.open(archive) as outer:
        with tarfile.open(fileobj=outer.extractfile(inner)) as tf:
            data = tf.extractfile(member).read()
    out = pathlib.Path(tmp) / "USAccDeaths.csv"
    out.write_bytes(data)
    return out


def read_usaccdeaths(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    values = [int(float(r["USAccDeaths"])) for r in rows]
    if len(values) != 72:
        raise SystemExit(f"expected 72 monthly values in {path}, found {len(values)}")
    return values


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dest", default=str(ROOT / "data"))
    args = parser.parse_args(argv)
    dest = pathlib.Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        src = _installed_resource() or _downloaded_resource(tmp)
        values = read_usaccdeaths(src) + list(DEATHS_1979)
    out = dest / "deaths.csv"
    with open(out, "w", newline="") as fh:
        fh.write("deaths\n")
        fh.writelines(f"{v}\n" for v in values)
    print(f"wrote {out} ({len(values)} values)")
    if not (dest / "wine.csv").exists():
        print("wine.csv not fetched automatically; see the module docstring for how to export it")
    return 0


if __name__ == "__main__":
    sys.exit(main())
