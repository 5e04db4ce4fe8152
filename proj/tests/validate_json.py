#!/usr/bin/env python3
"""Runs every subcommand with --json over a corpus and validates the output."""
import json
import pathlib
import shlex
import subprocess
import sys

import jsonschema

STATUS = {0: "ok", 1: "negative", 2: "error"}


def invocations(corpus):
    files = sorted(corpus.glob("*.rlam"))
    for f in files:
        for cmd in ("typecheck", "ad", "poly", "check", "probe"):
            yield [cmd, str(f)]
        yield ["--strict-equiv", "check", str(f)]
    yield ["check", "--all", str(corpus)]
    for line in (corpus / "golden.txt").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        args = shlex.split(line)[2:]
        args = [str(corpus) + a[6:] if a == "corpus" or a.startswith("corpus/") else a for a in args]
        yield args
    yield ["eval", str(corpus / "mul.rlam"), "--args", "1"]
    yield ["nonsense"]


def main():
    rlam, corpus, schema_path = sys.argv[1], pathlib.Path(sys.argv[2]), sys.argv[3]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    count = 0
    for args in invocations(corpus):
        count += 1
        proc = subprocess.run([rlam, "--json", *args], capture_output=True, text=True)
        where = " ".join(args)
        try:
            doc = json.loads(proc.stdout)
        except json.JSONDecodeError as e:
            print(f"FAIL {where}: not JSON ({e})")
            failures += 1
            continue
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors:
            print(f"FAIL {where}: {list(e.path)}: {e.message}")
        failures += bool(errors)
        if STATUS.get(proc.returncode) != doc.get("status"):
            print(f"FAIL {where}: exit {proc.returncode} but status {doc.get('status')!r}")
            failures += 1
    print(f"{count} invocations, {failures} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
