"""Smoke test for the `twa` Python extension.

Imports `twa` if it is already installed; otherwise builds the extension
with cargo and loads it from a temporary directory.

    python3 python/smoke_test.py
"""

import importlib
import json
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_twa():
    try:
        return importlib.import_module("twa")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "-p", "twa-py", "--release", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release"
    lib = next(p for p in (built / "libtwa_py.so", built / "libtwa_py.dylib", built / "twa_py.dll") if p.exists())
    dest = Path(tempfile.mkdtemp()) / ("twa" + sysconfig.get_config_var("EXT_SUFFIX"))
    shutil.copy(lib, dest)
    sys.path.insert(0, str(dest.parent))
    return importlib.import_module("twa")


def main():
    twa = load_twa()

    assert twa.encode_quaternary("10") == "0100"
    assert twa.decode_quaternary("0100") == "10"
    assert twa.bin_fixed(4, 5) == "1101"
    assert twa.bin_fixed(3, 1) == "011"

    g = twa.Graph(2, [(0, 1), (1, 1)])
    assert g.encode_prime() == "0110#1101"
    assert twa.graph_binary_to_prime(g.encode()) == "0110#1101"
    assert twa.Graph.decode(g.encode()).edges() == [(0, 1), (1, 1)]
    assert g.encode_unary() == "2*5"
    assert g.reachable()

    solver = twa.build("solver", 3)
    assert solver.is_simple and solver.branching_bound <= 3
    path = twa.Graph(3, [(0, 1), (1, 2)])
    cut = twa.Graph(3, [(1, 2), (2, 0)])
    assert solver.accepts(path.encode()) is True
    assert solver.accepts(cut.encode()) is False
    again = twa.Automaton.from_json(solver.to_json())
    assert again.state_count == solver.state_count

    unary = twa.build("unary-solver", 2)
    h, s, t = twa.nfa_to_graph(unary, "11")
    assert h.reachable(s, t)
    assert twa.unary_solve("2*5", 2) and not twa.unary_solve("3", 2)
    tail, cycle, end = twa.rho_decomposition(unary, 0)
    assert end in ("cycle", "halted", "died")

    afa = twa.dtm_to_narrow_afa("parity", 2)
    assert afa.has_universal_states
    for x in ["00", "01", "10", "11"]:
        verdict, width = afa.evaluate_leveled(x)
        assert verdict == afa.accepts(x) == (x.count("1") % 2 == 0)

    spec = {"seed": 1, "trials": 10, "source": {"kind": "random-graph", "n_min": 1, "n_max": 5},
            "stages": ["encode", "build-solver", "evaluate", "oracle-check"]}
    manifest = json.loads(twa.run_pipeline(json.dumps(spec)))
    assert manifest["outcome"]["trials"] == 10

    csv = twa.report_state_complexity_csv("solver", 2, 4)
    assert csv.splitlines()[0] == "n,states,branching,narrowness"

    try:
        twa.Graph.decode("0101#")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed encoding accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
