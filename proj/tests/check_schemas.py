"""Cross-checks the JSON Schemas and the golden reports with the reference
jsonschema implementation (independent of the C++ test validator)."""

import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

root = pathlib.Path(sys.argv[1])
schema_dir = root / "schemas"
golden = root / "tests" / "golden"

resources = {}
for path in sorted(schema_dir.glob("*.schema.json")):
    schema = json.loads(path.read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    resources[path.name] = schema
registry = Registry().with_resources(
    (name, Resource.from_contents(s)) for name, s in resources.items()
)


def validate(schema_name, doc, label):
    validator = jsonschema.Draft202012Validator(resources[schema_name], registry=registry)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for e in errors:
        print(f"{label}: {'/'.join(map(str, e.path))}: {e.message}")
    return not errors


ok = validate("quality_report.schema.json", json.loads((golden / "report_review.json").read_text()), "report_review")
ok &= validate("quality_report.schema.json", json.loads((golden / "cli_analyze_review.json").read_text()), "cli_analyze")
reports = [json.loads(line) for line in (golden / "audit_corpus.jsonl").read_text().splitlines() if line]
ok &= validate("batch_response.schema.json", reports, "audit_corpus")
ok &= validate("review_input.schema.json", json.loads((root / "tests" / "fixtures" / "review.json").read_text()), "review")
broken = json.loads((golden / "report_review.json").read_text())
del broken["structured"]
if not list(jsonschema.Draft202012Validator(resources["quality_report.schema.json"], registry=registry).iter_errors(broken)):
    print("a report without 'structured' was accepted")
    ok = False
print(f"{len(resources)} schemas well-formed; goldens {'valid' if ok else 'INVALID'}")
sys.exit(0 if ok else 1)
