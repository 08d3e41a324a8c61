import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize(
    "name, args, expect",
    [
        ("triangle_inequality.py", ["--triples", "2000", "--seed", "1"], "violations:"),
        ("synthetic_recovery.py", ["--seeds", "0", "--m-catalog", "100"], "topology recovered"),
        ("radial_variance_star.py", ["--leaves", "5", "--points", "3", "--replicates", "1"], "R^2"),
    ],
)
def test_script_runs(name, args, expect):
    done = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, check=True)
    assert expect in done.stdout
