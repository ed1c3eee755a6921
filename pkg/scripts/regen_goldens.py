"""Regenerate the CLI golden files for the fixture corpus.

Run once after a deliberate output change, then review the diff by hand
against tests/test_golden.py before committing. The golden tests never
call this script.
"""
import argparse
import contextlib
import io
import json
import sys
from pathlib import Path

from collabnet.cli import main

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"
GOLDEN = ROOT / "tests" / "golden"
CORPUS_ARGS = [
    "--input", str(DATA / "fixture.jsonl"),
    "--aliases", str(DATA / "aliases.csv"),
    "--countries", str(DATA / "countries.csv"),
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv + CORPUS_ARGS)
    if code != 0:
        raise SystemExit(f"{' '.join(argv)} exited {code}: {err.getvalue()}")
    return out.getvalue()


def main_():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true", help="compare instead of writing")
    args = ap.parse_args()
    manifest = json.loads((GOLDEN / "manifest.json").read_text())
    stale = []
    for name, argv in manifest.items():
        text = run(argv)
        path = GOLDEN / name
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(name)
        else:
            path.write_text(text, encoding="utf-8")
            print(f"wrote {path.relative_to(ROOT)}")
    if stale:
        print("stale:", ", ".join(stale))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main_())
