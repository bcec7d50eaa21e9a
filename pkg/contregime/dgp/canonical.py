"""Canonical desk instances and config loading."""
from dataclasses import replace

from contregime.dgp.base_dgp import OutcomeFunctional
from contregime.dgp.discrete_chain import DiscreteChainDgp
from contregime.dgp.euler_diffusion import EulerDiffusionDgp
from contregime.dgp.hazards import DiscreteHazard
from contregime.errors import InvalidArgumentError
from contregime.timegrid.partition import make_partition


def bin3():
    """tau = 3, decisions at 0, 1, 2, nu = L(3), no censoring"""
    return DiscreteChainDgp(fine_grid=make_partition(3.0, 3))


def cens3():
    """BIN3 with a constant per-step censoring hazard of 0.1"""
    return replace(bin3(), censoring=DiscreteHazard(0.1))


def ou1(fine_steps=256):
    """tau = 1 diffusion on a 256-step grid, nu = L(1)"""
    return EulerDiffusionDgp(fine_grid=make_partition(1.0, fine_steps))


INSTANCES = {"BIN3": bin3, "CENS3": cens3, "OU1": ou1}
KINDS = {DiscreteChainDgp.kind: DiscreteChainDgp,
         EulerDiffusionDgp.kind: EulerDiffusionDgp}
_KEYS = {"instance", "kind", "params", "horizon", "fine_steps", "censoring",
         "terminal", "outcome"}


def dgp_from_config(block):
    """Builds a DgpSpec from a config block

    Either ``instance = "BIN3"`` (optionally overridden by the other keys) or
    ``kind`` with ``params``, ``horizon`` and ``fine_steps``.

    :param block: mapping read from TOML or JSON
    :return DgpSpec
    """
    unknown = set(block) - _KEYS
    if unknown:
        raise InvalidArgumentError("unknown dgp keys %s" % sorted(unknown))
    if "instance" in block:
        name = block["instance"]
        if name not in INSTANCES:
            raise InvalidArgumentError("unknown dgp instance %r (known: %s)"
                                       % (name, ", ".join(sorted(INSTANCES))))
        if name == "OU1" and "fine_steps" in block:
            spec = ou1(int(block["fine_steps"]))
        else:
            spec = INSTANCES[name]()
    elif "kind" in block:
        if block["kind"] not in KINDS:
            raise InvalidArgumentError("unknown dgp kind %r" % (block["kind"],))
        if "horizon" not in block or "fine_steps" not in block:
            raise InvalidArgumentError("a dgp kind needs horizon and "
                                       "fine_steps")
        grid = make_partition(float(block["horizon"]),
                              int(block["fine_steps"]))
        spec = KINDS[block["kind"]](fine_grid=grid)
    else:
        raise InvalidArgumentError("dgp block needs 'instance' or 'kind'")
    changes = {}
    if "params" in block:
        params = dict(spec.params)
        params.update(block["params"])
        changes["params"] = params
    for name in ("censoring", "terminal"):
        if name in block:
            changes[name] = (DiscreteHazard.from_config(block[name])
                             if block[name] else None)
    if "outcome" in block:
        changes["outcome_functional"] = OutcomeFunctional(**block["outcome"])
    return replace(spec, **changes) if changes else spec
