"""Normal forms of foliation-preserving planar maps.

The heavy lifting happens in the C++ extension; this wrapper turns JSON
artifacts into dictionaries and provides keyword-friendly entry points.
"""

import json as _json

from _circlenf import RunConfig, eval_map, omega_value, rotation_number_arnold

__all__ = [
    "RunConfig",
    "eval_map",
    "omega_value",
    "rotation_number_arnold",
    "run",
    "normalize",
    "transform",
    "neumann",
    "sternberg",
    "tongues",
    "diagnose",
]


def run(command, **kwargs):
    """Execute one command, return the parsed JSON artifact."""
    import _circlenf

    cfg = RunConfig()
    cfg.command = command
    for key, value in kwargs.items():
        if not hasattr(cfg, key):
            raise TypeError(f"unknown option {key!r}")
        setattr(cfg, key, value)
    return _json.loads(_circlenf.run_json(cfg))


def normalize(**kwargs):
    return run("normalize", **kwargs)


def transform(**kwargs):
    return run("transform", **kwargs)


def neumann(**kwargs):
    return run("neumann", **kwargs)


def sternberg(**kwargs):
    return run("sternberg", **kwargs)


def tongues(**kwargs):
    return run("tongues", **kwargs)


def diagnose(**kwargs):
    return run("diagnose", **kwargs)
