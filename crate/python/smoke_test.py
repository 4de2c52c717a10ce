"""Smoke test for the Python extension.

Build first:

    cargo build -p relator-forge-py --features extension-module

then run `python3 python/smoke_test.py` from the repository root. The built
library is copied to a temporary directory as `relator_forge.so` and imported
from there.
"""

import importlib
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    for profile in ("release", "debug"):
        for name in ("librelator_forge_py.so", "librelator_forge_py.dylib"):
            path = os.path.join(ROOT, "target", profile, name)
            if os.path.exists(path):
                tmp = tempfile.mkdtemp()
                shutil.copy(path, os.path.join(tmp, "relator_forge.so"))
                sys.path.insert(0, tmp)
                return importlib.import_module("relator_forge")
    sys.exit("extension not built; run cargo build -p relator-forge-py --features extension-module")


def main():
    rf = load()
    a, b = rf.Word("a"), rf.Word("b")

    assert str(a.commutator(b)) == "a^-1 b^-1 a b"
    assert (a * a.inverse()).is_identity()
    assert len(b.pow(3)) == 3

    g = rf.Presentation.family(a, b.pow(2), 1, 2)
    assert g == rf.Presentation("<a,b | (a^1)^(a^(b^2)) = a^2>")
    assert rf.z_kernel(g) == ["a_2^-1 a_0 a_2 a_0^-2"]
    assert rf.split_mod(g, 2) == [["a_1^-1 a_0 a_1 a_0^-2"]] * 2

    cert = rf.certify(g)
    assert cert is not None and cert.startswith("R_EXT_BY_AMENABLE")
    text, ok = rf.certify_family("C", 2, 2, 3)
    assert ok and "R_LOCALLY_SOFIC" in text

    open_case = rf.Presentation("<a,b | (a^1)^(a^(b^-1 a b^2)) = a^2>")
    assert rf.certify(open_case) is None

    rf_verdict, rs_verdict, order = rf.obstruct(a, b, 1, 2)
    assert rf_verdict.startswith("PROVED") and rs_verdict.startswith("PROVED")
    assert order == "1 (trivial)"

    baumslag = rf.Presentation("<a,b | a = [a, a^b]>")
    assert len(rf.quotients(baumslag, 3)) == 6
    assert rf.element_always_trivial(baumslag, a, 4)
    family_form = rf.Presentation.family(a, b, 1, 2).relators[0]
    assert rf.cyclic_equivalent(baumslag.relators[0], family_form)
    assert not rf.cyclic_equivalent(baumslag.relators[0], g.relators[0])

    try:
        rf.Presentation("<a,b | a^b = b^a")
    except ValueError as e:
        assert "column 17" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
