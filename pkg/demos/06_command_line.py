"""
Driving the command-line tool from Python
=========================================

Same code path as ``cavity-radiance`` on the shell.
"""

# %%
import tempfile
from pathlib import Path

from cavity_radiance.cli import main
from cavity_radiance.export import read_table

tmp = Path(tempfile.mkdtemp())
main(["exitance", "--preset", "inset", "--out", str(tmp / "inset.csv")])
schema, cols, rows = read_table(tmp / "inset.csv")
print(schema, cols[:4], rows[10][:3])

# %%
main(["oracle-compare", "--r0", "0.01", "--numin", "3e11", "--numax", "5e11", "--points", "200",
      "--resolution", "1e-2", "--out", str(tmp / "cmp.json"), "--format", "json"])
print((tmp / "cmp.json.meta.json").read_text()[:400])
