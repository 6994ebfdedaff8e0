#!/usr/bin/env python3
# Copyright 2026 The dprl Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Fetches Adult, Compas and German Credit and writes them as raw CSVs.

The three files ship inside the `responsibly` wheel on PyPI, which is the
only source that needs nothing beyond pip. Output:

  data/raw/adult.csv   48842 rows (train + test files concatenated)
  data/raw/compas.csv  6172 rows (ProPublica two-year filter)
  data/raw/german.csv  1000 rows

Usage: scripts/fetch_datasets.py [--out data/raw] [--wheel path/to/wheel]
"""

import argparse
import csv
import io
import pathlib
import subprocess
import sys
import tempfile
import zipfile

WHEEL_SPEC = "responsibly==0.1.2"
PREFIX = "responsibly/dataset/"

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num", "marital_status",
    "occupation", "relationship", "race", "sex", "capital_gain", "capital_loss",
    "hours_per_week", "native_country", "income",
]

GERMAN_COLUMNS = [
    "checking_status", "duration", "credit_history", "purpose", "credit_amount",
    "savings_status", "employment", "installment_commitment", "personal_status",
    "other_parties", "residence_since", "property_magnitude", "age",
    "other_payment_plans", "housing", "existing_credits", "job", "num_dependents",
    "own_telephone", "foreign_worker", "credit",
]

COMPAS_COLUMNS = [
    "sex", "age", "race", "juv_fel_count", "juv_misd_count", "juv_other_count",
    "priors_count", "c_charge_degree", "two_year_recid",
]


def download_wheel(dest):
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "--only-binary=:all:",
         "-d", str(dest), WHEEL_SPEC],
        check=True)
    wheels = sorted(pathlib.Path(dest).glob("responsibly-*.whl"))
    if not wheels:
        raise SystemExit("pip did not produce a responsibly wheel")
    return wheels[0]


def read_member(wheel, name):
    with zipfile.ZipFile(wheel) as z:
        return z.read(PREFIX + name).decode("utf-8")


def write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"{path}: {len(rows)} rows")


def adult(wheel):
    rows = []
    for name in ("adult/adult.data", "adult/adult.test"):
        for line in read_member(wheel, name).splitlines():
            cells = [c.strip() for c in line.split(",")]
            if len(cells) != len(ADULT_COLUMNS):
                continue  # blank lines and the "|1x3 Cross validator" banner
            cells[-1] = cells[-1].rstrip(".")
            rows.append(cells)
    return rows


def german(wheel):
    rows = [line.split() for line in read_member(wheel, "german/german.data").splitlines()
            if line.strip()]
    for r in rows:
        r[-1] = "good" if r[-1] == "1" else "bad"
    return rows


def compas(wheel):
    reader = csv.DictReader(io.StringIO(read_member(wheel, "compas/compas-scores-two-years.csv")))
    rows = []
    for r in reader:
        days = r["days_b_screening_arrest"]
        if days == "" or not -30 <= int(float(days)) <= 30:
            continue
        if r["is_recid"] == "-1" or r["c_charge_degree"] == "O" or r["score_text"] == "N/A":
            continue
        rows.append([r[c] for c in COMPAS_COLUMNS])
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/raw")
    parser.add_argument("--wheel", help="use an already downloaded responsibly wheel")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    with tempfile.TemporaryDirectory() as tmp:
        wheel = pathlib.Path(args.wheel) if args.wheel else download_wheel(tmp)
        write_csv(out / "adult.csv", ADULT_COLUMNS, adult(wheel))
        write_csv(out / "compas.csv", COMPAS_COLUMNS, compas(wheel))
        write_csv(out / "german.csv", GERMAN_COLUMNS, german(wheel))


if __name__ == "__main__":
    main()
