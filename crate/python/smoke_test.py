"""Smoke test for the memmod extension: python python/smoke_test.py"""

import json
import pathlib
import sys

import memmod

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "corpus"

MP = """
litmus "mp"
shared x = 0, flag = 0
thread t0 {
    x = 1;
    flag = 1;
}
thread t1 {
    local f = 0, r = 0;
    f = flag;
    r = x;
}
allowed (f == 1 && r == 0)
"""


def main():
    lit = memmod.parse(MP)
    assert lit.name == "mp"
    assert lit.expectations == [("allowed", "f == 1 && r == 0")]
    assert memmod.parse(lit.source()).source() == lit.source()

    rep = lit.run()
    assert rep.passed and rep.exit_code == 0, rep.text()
    assert rep.expectations[0].trace
    assert lit.run(model="sc").outcome == "fail"
    assert json.loads(rep.to_json())["schema_version"] == 1

    rfub = memmod.load(CORPUS / "rfub.lit")
    assert rfub.run().passed
    bad = rfub.run(sfp=True)
    assert bad.outcome == "fail"
    assert bad.expectations[0].trace[0].startswith("t0:x := 42")

    assert len(lit.traces()) > 1
    assert memmod.load(CORPUS / "lock.lit").run(max_configs=5).outcome == "inconclusive"

    try:
        memmod.parse("litmus \"bad\"\nthread t0 {\n    x = ;\n}\n")
    except ValueError as e:
        assert "3:" in str(e)
    else:
        raise AssertionError("syntax error not reported")

    rows = memmod.laws()
    assert rows and all(ok for _, _, ok, _ in rows), [r for r in rows if not r[2]]

    for path in sorted(CORPUS.glob("*.lit")):
        assert memmod.load(path).run().passed, path.name

    print("smoke test ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
