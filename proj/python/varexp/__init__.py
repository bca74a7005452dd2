import json

from ._core import (
    Cube,
    ExponentField,
    Grid,
    GridFunction,
    VarexpError,
    __version__,
    apply_commutator,
    apply_Ialpha,
    bmo_norm,
    check_log_holder,
    claim_check,
    duality_witness,
    frac_maximal,
    generalized_holder_check,
    holder_constant,
    holder_pair_check,
    kernel,
    luxemburg_norm,
    make_atom,
    make_b_atom,
    modular,
)
from . import _core


def run_scenario(scenario, threads=1):
    """Run a scenario dict and return the report as a dict."""
    return json.loads(_core.run_scenario_json(json.dumps(scenario), threads))


def builtin_suite():
    return json.loads(_core.builtin_suite_json())


def sample(grid, fn):
    """GridFunction with fn evaluated at every cell midpoint."""
    return GridFunction(grid, [fn(*grid.midpoint(i)) for i in range(grid.size)])
