"""Smoke test for the levelone Python module.

Build and install first:
    pip install --no-build-isolation -e crates/levelone-py
"""

import sys

import levelone


def main():
    assert levelone.dim("E7+", weight=[0, 0, 0]) == 1
    assert levelone.dim("G2", hodge=[4, 2]) == 1
    ok, report = levelone.verify("E7+")
    assert ok, report

    tables = levelone.Tables(so7=27, so9=27, so8=27, g2=0)
    at23 = [w for w, v in tables.table("S").items() if len(w) == 3 and w[0] == 23 and v]
    assert len(at23) == 7, at23
    assert len(tables.borcherds()) == 121
    found = tables.search28()
    assert len(found) == 1
    print("rank 28:", found[0])
    for name, m in tables.partition("SO7", [23, 13, 5]):
        print(f"  {name}  x{m}")
    print("ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
