# %% [markdown]
# # The h2plus command line
#
# Everything above is also reachable from the shell. Each run is
# deterministic; output files start with `#` metadata lines.

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

from h2plus.gaussian import REFERENCE_BASIS_FILE


def h2plus(*args):
    cmd = [sys.executable, "-m", "h2plus", *map(str, args)]
    print("$ h2plus", " ".join(map(str, args)))
    done = subprocess.run(cmd, capture_output=True, text=True)
    print(done.stdout + done.stderr, f"[exit {done.returncode}]\n")


h2plus("solve", "--R", 0.010)
h2plus("solve", "--R", 2.0, "--solver", "variational", "--basis", REFERENCE_BASIS_FILE)
h2plus("solve", "--R", 2.0, "--solver", "oracle")
h2plus("scan", "--rmin", 0.008, "--rmax", 0.019, "--steps", 4)
h2plus("topology", "--rmin", 1.9, "--rmax", 2.1, "--steps", 8)

# %%
with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "rho.csv"
    h2plus("density", "--R", 0.019, "--nx", 201, "--nz", 201, "--out", out)
    print(out.read_text().splitlines()[:6])
    print(sorted(p.name for p in Path(tmp).iterdir()))

# %%
h2plus("solve", "--R", 2.0, "--solver", "variational")  # usage error: exit 1
