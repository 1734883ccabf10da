"""Validates every JSON report in a directory against report.schema.json."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    schema_path, report_dir = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    validator = jsonschema.Draft202012Validator(schema)
    reports = sorted(report_dir.glob("*.json"))
    if not reports:
        print(f"no reports in {report_dir}")
        return 1
    bad = 0
    for path in reports:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for err in errors:
            print(f"{path.name}: {err.json_path}: {err.message}")
        bad += bool(errors)
    print(f"{len(reports) - bad}/{len(reports)} reports valid")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
