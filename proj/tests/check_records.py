"""Every emitted record must validate against tools/schema/records.schema.json."""
import json
import pathlib
import subprocess
import sys

import jsonschema

hecke, root = sys.argv[1], pathlib.Path(sys.argv[2])
schema = json.loads((root / "tools/schema/records.schema.json").read_text())
config_schema = json.loads((root / "tools/schema/jobconfig.schema.json").read_text())
jsonschema.Draft7Validator.check_schema(schema)
jsonschema.Draft7Validator.check_schema(config_schema)
validator = jsonschema.Draft7Validator(schema)

runs = [
    (["decompose", "--level", "1", "--p", "2"], 0),
    (["decompose", "--level", "4", "--p", "2"], 3),
    (["decompose", "--p", "3", "--n", "3", "--m", "2"], 0),
    (["hecke-matrix", "--level", "1", "--module", "sym:10:0:Q", "--p", "2"], 0),
    (["hecke-matrix", "--level", "5", "--group", "gamma1", "--module", "sym:2:0:F5", "--p", "2", "--path", "direct"], 0),
    (["eigensystems", "--level", "1", "--module", "sym:0"], 0),
    (["eigensystems", "--level", "1", "--module", "sym:22", "--labels", "2"], 0),
    (["eigensystems", "--level", "11"], 0),
    (["degree-check"], 0),
    (["series-check"], 0),
    (["rep-check"], 0),
    (["reduce", "--ell", "5", "--source-level", "5", "--module", "sym:10:0:F5", "--labels", "2,3,7"], 0),
    (["reduce", "--ell", "3", "--source-level", "3", "--module", "sym:2:0:F3", "--target", "diagonal"], 0),
    (["hecke-matrix", "--p", "2", "--module", "nonsense"], 2),
]

count = 0
for args, expected in runs:
    outs = [subprocess.run([hecke, *args], capture_output=True, text=True) for _ in range(2)]
    if outs[0].returncode != expected:
        sys.exit(f"{args}: exit {outs[0].returncode}, expected {expected}\n{outs[0].stdout}{outs[0].stderr}")
    if outs[0].stdout != outs[1].stdout:
        sys.exit(f"{args}: output differs between identical runs")
    for line in outs[0].stdout.splitlines():
        rec = json.loads(line)
        errors = list(validator.iter_errors(rec))
        if errors:
            sys.exit(f"{args}: record does not match the schema: {errors[0].message}\n{line[:300]}")
        count += 1

for cfg in [{"command": "decompose", "p": 2}, {"command": "reduce", "ell": 5, "labels": ["T2"], "jobs": 2}]:
    jsonschema.validate(cfg, config_schema)
print(f"{count} records validated")
