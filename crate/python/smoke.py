"""Smoke test for the pybialg extension.

Builds the extension with cargo when it is not importable, then runs a few
calls against the fixtures.
"""

import importlib
import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "bialg" / "fixtures"


def load():
    try:
        return importlib.import_module("pybialg")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "bialg-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libpybialg.so"
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "pybialg.so")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("pybialg")


def main():
    pb = load()
    sl2 = (FIXTURES / "sl2.json").read_text()
    assert pb.check_lie(sl2)
    assert not pb.check_lie((FIXTURES / "sl2_mutated.json").read_text())

    phi = json.loads(pb.casimir_phi(sl2, (FIXTURES / "killing.json").read_text()))
    assert phi["signature"] == "wedge3"
    assert phi["entries"] == [{"idx": ["e", "f", "h"], "coef": "-1/4"}], phi

    ledger = json.loads(pb.ledger())
    assert ledger["cybe_lambda_factor"] == -4

    code, out, _ = pb.run(["cybe", str(FIXTURES / "sl2.json"), "--r", str(FIXTURES / "standard_r.json"), "--json"])
    report = json.loads(out)
    assert code == 0 and report["status"] == "pass", report["status"]

    code, _, err = pb.run(["check-lie", str(FIXTURES / "sl2.json"), "--nope"])
    assert code == 2 and err

    try:
        pb.check_lie("{}")
    except ValueError as e:
        print("malformed input rejected:", e)
    else:
        raise AssertionError("malformed input accepted")
    print("pybialg smoke test passed")


if __name__ == "__main__":
    main()
