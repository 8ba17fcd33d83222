#!/usr/bin/env python3
"""Download the 24 benchmark datasets from OpenML as ARFF files.

The tuner never touches the network; run this once and point configs at
data/openml/<name>.arff. Needs only the standard library.

    python3 tools/fetch_openml.py [--out data/openml] [--only wdbc,phoneme]
"""

import argparse
import json
import pathlib
import sys
import urllib.request

DATASETS = {
    "bank-marketing": 1461,
    "blood-transfusion": 1464,
    "climate-simulation": 1467,
    "credit-g": 31,
    "diabetes": 37,
    "tic-tac-toe": 50,
    "electricity": 151,
    "gina_agnostic": 1038,
    "hill-valley": 1479,
    "ilpd": 1480,
    "kr-vs-kp": 3,
    "madelon": 1485,
    "monks-problems-1": 333,
    "monks-problems-2": 334,
    "monks-problems-3": 335,
    "mozilla4": 1046,
    "musk": 1116,
    "nomao": 1486,
    "ozone-level-8hr": 1487,
    "phoneme": 1489,
    "qsar-biodeg": 1494,
    "scene": 312,
    "steel-plates-fault": 1504,
    "wdbc": 1510,
}

API = "https://www.openml.org/api/v1/json/data/{id}"


def fetch(url):
    with urllib.request.urlopen(url, timeout=60) as response:
        return response.read()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/openml")
    parser.add_argument("--only", default="", help="comma-separated subset of dataset names")
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wanted = [n for n in args.only.split(",") if n] or list(DATASETS)
    targets = {}
    failures = 0
    for name in wanted:
        if name not in DATASETS:
            print(f"unknown dataset {name}", file=sys.stderr)
            failures += 1
            continue
        try:
            meta = json.loads(fetch(API.format(id=DATASETS[name])))["data_set_description"]
            arff = fetch(meta["url"])
            (out / f"{name}.arff").write_bytes(arff)
            targets[name] = meta.get("default_target_attribute", "")
            print(f"{name}: {len(arff)} bytes, target {targets[name]}")
        except Exception as exc:  # report and keep going
            print(f"{name}: {exc}", file=sys.stderr)
            failures += 1
    (out / "targets.json").write_text(json.dumps(targets, indent=2, sort_keys=True) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
