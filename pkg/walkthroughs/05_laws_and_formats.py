"""
Law suites, text and JSON round trips, and the command line
===========================================================
"""
import subprocess
import sys

from multiindex import decode_json, delta_primal, encode_json, parse, render, z
from multiindex.oracles import LAWS, run_law_suite

# every law is an exhaustive or seeded sweep with exact comparisons
for name in ("ode-adjointness", "ode-duality", "spde-noncommutation", "forest-coassociativity"):
    print(run_law_suite(name).to_text())
print("available:", ", ".join(sorted(LAWS)))

# text and JSON both parse back to the same combination
delta = delta_primal(z(2, 1, 1))
text = render(delta)
print()
print(text)
print("text round trip:", parse(text) == delta)
print("json round trip:", decode_json(encode_json(delta)) == delta)
print(encode_json(delta)[:120], "...")

# the same operations from the command line
for argv in (
    ["delta", "z0^2 z1 z2", "--format", "latex"],
    ["delta", "z[l; b0; -]^2 z[l; -; (1,0)] z[l; b1; (0,1)^2]", "--mode", "spde", "--max-grade", "1"],
    ["delta", "z[l; b0; -]", "--mode", "spde"],
    ["laws", "ode-adjointness", "--max-norm", "5"],
):
    proc = subprocess.run([sys.executable, "-m", "multiindex", *argv], capture_output=True, text=True)
    print()
    print("$ multiindex", " ".join(repr(a) if " " in a else a for a in argv), f"  (exit {proc.returncode})")
    print((proc.stdout or proc.stderr).strip())
