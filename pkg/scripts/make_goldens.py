"""Regenerate the CLI golden files under tests/golden/.

Run from the repository root after an intentional output change:

    python scripts/make_goldens.py
"""

import contextlib
import io
import json
import shutil
import sys
import tempfile
from pathlib import Path

from tgeom.cli import main

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"


def run(argv, out_path):
    argv = [a.replace("{out}", str(out_path)) for a in argv]
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def regenerate():
    cases = json.loads((GOLDEN / "cases.json").read_text())
    with tempfile.TemporaryDirectory() as tmp:
        for case in cases:
            out_path = Path(tmp) / f"{case['name']}.csv"
            code, stdout = run(case["argv"], out_path)
            if code != 0:
                sys.exit(f"{case['name']}: exit {code}")
            (GOLDEN / f"{case['name']}.json").write_text(stdout)
            if case.get("csv"):
                shutil.copy(out_path, GOLDEN / f"{case['name']}.csv")
            print(f"wrote {case['name']}")


if __name__ == "__main__":
    import os

    os.chdir(ROOT)
    regenerate()
