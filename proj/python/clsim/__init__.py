"""Classical and linear wave solvers on periodic grids.

Everything lives in the compiled module; this package just re-exports it
and adds a keyword-friendly wrapper around the scenario runner.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_scenario as _run_scenario  # noqa: F401


def run(name, out_dir="out", **overrides):
    """Run a named scenario. Keyword overrides use '_' for '.', e.g.
    grid_n=1024 sets grid.n. Returns the metrics dict."""
    config = {k.replace("_", ".", 1): str(v) for k, v in overrides.items()}
    return _run_scenario(name, config, str(out_dir))
