#!/usr/bin/env python3
# Copyright 2026 The OI Lab Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Runs every oilab subcommand on the test fixtures and validates the reports."""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def run(cli, args, out):
    proc = subprocess.run([cli, *args, "--out", str(out)], capture_output=True, text=True)
    if proc.returncode not in (0, 1):
        raise RuntimeError(f"{' '.join(args)} exited {proc.returncode}: {proc.stderr}")
    return json.loads(out.read_text())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schemas", required=True, type=pathlib.Path)
    ap.add_argument("--data", required=True, type=pathlib.Path)
    opts = ap.parse_args()
    d = opts.data
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text())
               for p in opts.schemas.glob("*.schema.json")}

    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        trace = tmp / "trace.json"
        predictor = tmp / "predictor.json"
        cases = [
            ("predictor", ["construct", "--nature", d / "k4_nature.json",
                           "--family", d / "k4_family.json", "--epsilon", "0.05",
                           "--trace", trace], predictor),
            ("audit", ["audit", "--nature", d / "k4_nature.json",
                       "--predictor", d / "k4_predictor.json",
                       "--subpops", d / "k4_subpops.json", "--alpha", "0.05",
                       "--grid", "10", "--family", d / "k4_family.json",
                       "--epsilon", "0.1"], tmp / "audit.json"),
            ("pi_check", ["pi-check", "--nature", d / "pi_nature.json",
                          "--predictor", d / "pi_predictor.json", "--tau", "0.05",
                          "--epsilon", "0.1"], tmp / "pi.json"),
            ("hardness_demo", ["hardness-demo", "--n", "8", "--samples", "500",
                               "--fuzz", "2"], tmp / "hard.json"),
            ("reduce", ["reduce", "--direction", "mc-to-oi", "--subpops",
                        d / "k4_subpops.json", "--dimension", "6", "--grid", "4"],
             tmp / "r1.json"),
            ("reduce", ["reduce", "--direction", "oi-to-ma", "--family",
                        d / "k4_family_noaccess.json", "--dimension", "6"],
             tmp / "r2.json"),
            ("ingest", ["ingest", "--csv", d / "samples.csv"], tmp / "ingest.json"),
        ]
        reports = {}
        for name, args, out in cases:
            report = run(opts.cli, [str(a) for a in args], out)
            reports.setdefault(name, report)
            try:
                jsonschema.validate(report, schemas[name])
                print(f"ok    {name} ({args[0]})")
            except jsonschema.ValidationError as e:
                failures += 1
                print(f"FAIL  {name} ({args[0]}): {e.message}")
            if report.get("config", {}).get("subcommand") != args[0]:
                failures += 1
                print(f"FAIL  {name}: config header missing")
        try:
            jsonschema.validate(json.loads(trace.read_text()), schemas["trace"])
            print("ok    trace")
        except jsonschema.ValidationError as e:
            failures += 1
            print(f"FAIL  trace: {e.message}")

        # Every (S, v) cell of the K4 audit appears exactly once.
        subpops = json.loads((d / "k4_subpops.json").read_text())
        subpops = subpops.get("subpopulations", subpops) if isinstance(subpops, dict) else subpops
        cells = [(c["subpopulation"], c["bin"]) for c in reports["audit"]["mc"]]
        expected = {(s["id"], b) for s in subpops for b in range(10)}
        if len(cells) != len(set(cells)) or set(cells) != expected:
            failures += 1
            print("FAIL  audit cells are not one per (S, v)")
        else:
            print(f"ok    audit lists {len(cells)} cells once each")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
