"""Smoke test for the compiled `cusco` extension.

Build first with `cargo build -p cusco-py --features extension-module`, then
run `python3 python/smoke_test.py [path/to/libcusco.so]`.
"""

import importlib.machinery
import importlib.util
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(path):
    loader = importlib.machinery.ExtensionFileLoader("cusco", str(path))
    spec = importlib.util.spec_from_file_location("cusco", str(path), loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    default = ROOT / "target" / "debug" / "libcusco.so"
    cusco = load(pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else default)

    jump = cusco.Function(["-2", "0", "2"], ["affine 0 -1", "affine 0 1"], ["-1", "0", "1"])
    assert jump("1/2") == "1"
    assert jump.is_hyperplane_minimal()
    qc = jump.is_quasicontinuous()
    assert not qc and qc.witnesses[0][0] == "0", qc

    try:
        jump.minimal_cusco()
    except ValueError as e:
        assert "rejected" in str(e)
    else:
        raise AssertionError("construction should be rejected")

    blowup = cusco.Function(["0", "1"], ["recip 0 1 0"], ["0", "1"])
    assert blowup.cluster_set("0") == "[0, +inf)"
    assert not blowup.is_subcontinuous()

    step = cusco.Function(["-2", "0", "2"], ["affine 0 -1", "affine 0 1"], ["-1", "1", "1"])
    hull = step.minimal_cusco()
    assert hull.value_at("0") == [("-1", "1")]
    assert hull.is_minimal_cusco() and hull.is_minimal_usco().holds is False

    g = cusco.ConvexFunction(["-1", "0", "1"], ["-1", "1"], "1")
    assert g("0") == "0" and g.kinks() == ["0"]
    d = g.subdifferential()
    assert d.value_at("0") == [("-1", "1")] and d.is_minimal_cusco()

    entities = dict(cusco.parse_spec(jump.to_spec("f") + g.to_spec("g")))
    assert entities["f"] == jump

    code, out = cusco.run("sample", g.to_spec("g"), "g", step="1/2")
    assert code == 0 and out.splitlines()[0] == "x,y", out
    code, _ = cusco.run("check-qc", jump.to_spec("f"), "f")
    assert code == 1

    print("smoke test passed")


if __name__ == "__main__":
    main()
