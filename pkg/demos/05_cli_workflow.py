# %% [markdown]
# # Command-line workflow
#
# The same pipeline from the shell writes CSV and JSON files.  Here the
# commands run in-process into a temporary directory.

# %%
import json
import tempfile
from pathlib import Path

from multspec.cli import main

out = Path(tempfile.mkdtemp())
runs = [
    ["section", "--phi", "x", "--weight", "cheb1", "--n", "8"],
    ["spectrum", "--symbol", "pi*cos", "--n", "16", "--approx", "optimal"],
    ["reconstruct", "--phi", "x", "--weight", "cheb1", "--n", "128", "--algorithm", "2"],
    ["reconstruct", "--phi", "[[1, 0], [0, x]]", "--block", "2,2", "--n", "32"],
    ["disttest", "--symbol", "2-2cos", "--n", "64", "--F", "t"],
    ["rangetest", "--phi", "x", "--n", "128", "--point", "10,0", "--eps", "0.1"],
]
for k, argv in enumerate(runs):
    target = out / f"{k}_{argv[0]}"
    code = main(argv + ["--out", str(target)])
    print("exit", code, "->", sorted(p.name for p in target.iterdir()))

# %%
print((out / "0_section" / "section.csv").read_text().splitlines()[0])
print(json.loads((out / "5_rangetest" / "rangetest.json").read_text())["verdict"])

# %% [markdown]
# A bad expression is a configuration error (exit 2) with its position.

# %%
print("exit", main(["section", "--phi", "x + y", "--n", "4", "--out", str(out / "bad")]))
