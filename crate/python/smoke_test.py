"""Smoke test for the glsf Python bindings.

Build and install first:
    cd crates/py && maturin build --release -o dist && pip install dist/glsf-*.whl
"""

import math
import os
import tempfile

import glsf

CONFIG = """
nx = 16
dt = 1e-3
T = 0.05
record_every = 10
snapshot_every = 25
seed = 3
"""


def main():
    canonical = glsf.parse_config(CONFIG)
    assert glsf.parse_config(canonical) == canonical

    try:
        glsf.parse_config("nx = 2\n")
    except ValueError as e:
        assert "line" in str(e)
    else:
        raise AssertionError("invalid config accepted")

    assert glsf.q_min_eigenvalue(1.0, 1.0, 1.0, 1.0, 1.0) > 0.0

    records = glsf.simulate(CONFIG)
    assert records[0]["t"] == 0.0
    assert math.isclose(records[-1]["t"], 0.05, rel_tol=1e-9)
    assert all(b["L"] <= a["L"] for a, b in zip(records, records[1:]))

    with tempfile.TemporaryDirectory() as out:
        passed, report = glsf.run("simulate", CONFIG, out)
        assert passed, report
        snap = glsf.read_snapshot(os.path.join(out, "state_50.fld"))
        assert (snap["nx"], snap["ny"]) == (16, 16)
        assert len(snap["u"]) == 17 * 17

    print("glsf", glsf.__version__, "smoke test ok:", len(records), "records")


if __name__ == "__main__":
    main()
