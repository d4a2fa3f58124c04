import shutil
import subprocess

import pytest

COMPARE_CFG = """
case = aligned-oblique-shock
mode = steady
limiting = everywhere, restricted:0.05
nx = 60
ny = 24
max_iterations = 80
"""


@pytest.fixture(scope="session")
def cli_artifacts(tmp_path_factory):
    """Artifacts from a real (small) solver comparison via the CLI."""
    if shutil.which("fvshock") is None:
        pytest.skip("fvshock CLI not on PATH; install the solver package first")
    tmp = tmp_path_factory.mktemp("artifacts")
    cfg = tmp / "compare.cfg"
    cfg.write_text(COMPARE_CFG)
    out = tmp / "out"
    proc = subprocess.run(
        ["fvshock", "compare", "--config", str(cfg), "--out", str(out)],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0, proc.stderr
    return out
