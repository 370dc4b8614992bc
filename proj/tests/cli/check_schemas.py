#!/usr/bin/env python3
"""Runs every subcommand and validates its JSON result and manifest against schemas/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

exe, root = sys.argv[1], Path(sys.argv[2])
schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in (root / "schemas").glob("*.schema.json")}
failures = []


def check(kind, doc, where):
    try:
        jsonschema.validate(doc, schemas[kind])
    except jsonschema.ValidationError as e:
        failures.append(f"{where}: {e.message}")


def run(kind, args, out, manifest=None):
    proc = subprocess.run([exe, *args, "--json", str(out)], capture_output=True, text=True)
    if proc.returncode != 0:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
        return None
    doc = json.loads(out.read_text())
    check(kind, doc, " ".join(args))
    check("manifest", json.loads(Path(manifest or f"{out}.manifest.json").read_text()), f"manifest of {' '.join(args)}")
    return doc


for cfg in sorted((root / "configs").glob("*.json")):
    check("config", json.loads(cfg.read_text()), cfg.name)

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    ds = tmp / "ds"
    run("generate", ["generate", "--config", str(root / "configs" / "shock_demo.json"), "--out", str(ds)],
        tmp / "gen.json", manifest=ds / "manifest.json")
    run("validate", ["validate", str(ds)], tmp / "validate.json")
    for metric in ["components", "reach", "growth", "connectivity", "bypass"]:
        run("analyze", ["analyze", str(ds), "--metric", metric, "--samples", "3", "--members"], tmp / f"{metric}.json")
    shock = run("analyze", ["analyze", str(ds), "--metric", "shock", "--category", "Antisemitic",
                            "--event-t", "1696649400", "--bin", "60"], tmp / "shock.json")
    if shock and shock["verdict"] != "Huge":
        failures.append(f"shock demo verdict {shock['verdict']}")
    run("pathways", ["pathways", str(ds), "--horizon-days", "180"], tmp / "pathways.json")
    run("attrition", ["attrition", "--law", "ambush", "--m", "1", "--h", "1", "--H0", "49", "--M0", "10"],
        tmp / "attrition.json")
    run("attrition", ["attrition", "--sweep", "--law", "square", "--ratio-min", "1", "--ratio-max", "20",
                      "--ratio-points", "5", "--force-min", "1", "--force-max", "4", "--force-points", "3"],
        tmp / "sweep.json")
    run("simulate", ["simulate", str(ds), "--policy", "majors", "--budget", "5", "--ticks", "10"], tmp / "sim.json")
    run("simulate", ["simulate", str(ds), "--policy", "adaptive", "--budget", "5", "--ticks", "10",
                     "--compare-seeds", "10"], tmp / "cmp.json")
    run("export", ["export-gexf", str(ds), "--out", str(tmp / "g.gexf")], tmp / "export.json",
        manifest=f"{tmp / 'g.gexf'}.manifest.json")

for f in failures:
    print("FAIL", f)
print(f"{'FAIL' if failures else 'PASS'}: schema checks ({len(failures)} problems)")
sys.exit(1 if failures else 0)
