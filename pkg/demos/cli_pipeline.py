"""Drive the command line tool end to end: solve, verify, then tamper and re-verify.

Everything runs in a temporary directory through the installed ``quadzeros``
console script, so this is also a smoke test of the CLI.
"""

import json
import subprocess
import tempfile
from pathlib import Path

from quadzeros.oracle import minimal_zero, tamper

problem = {
    "field": {"kind": "Q"},
    "N": 3,
    "F": [["0", "1", "0"], ["1", "0", "0"], ["0", "0", "-2"]],
    "S": [[[[[0, 0, 1], "1"]]]],  # avoid x3 = 0
}


def sh(*args: str) -> subprocess.CompletedProcess:
    proc = subprocess.run(["quadzeros", *args], capture_output=True, text=True)
    print(f"$ quadzeros {' '.join(args)}  -> exit {proc.returncode}")
    return proc


with tempfile.TemporaryDirectory() as tmp:
    d = Path(tmp)
    (d / "p.json").write_text(json.dumps(problem))
    sh("solve", str(d / "p.json"), "--out", str(d / "cert.json"))
    doc = json.loads((d / "cert.json").read_text())
    print("  z =", doc["certificate"]["outputs"]["z"])
    # the construction guarantees a bound, not minimality
    print("  smallest avoiding zero by enumeration:", minimal_zero(problem, 2.0))
    proc = sh("oracle-verify", str(d / "cert.json"))
    print("  verdict:", json.loads(proc.stdout)["pass"])

    for what in ("point", "height", "bound"):
        bad = d / f"bad_{what}.json"
        bad.write_text(json.dumps(tamper(doc, what)))
        proc = sh("oracle-verify", str(bad))
        failed = [c["name"] for c in json.loads(proc.stdout)["checks"] if not c["pass"]]
        print(f"  {what} tamper caught by: {failed[:3]}")

    sh("constants", "--L", "4", "--j", "3")
    sh("solve", str(d / "missing.json"))
