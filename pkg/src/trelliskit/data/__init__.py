"""Bundled example trellises (unit lambda-labels, bipolar c-labels)."""

from importlib.resources import files

from ..trellis import Trellis, loads_trellis

BUNDLED = ("spc4", "conv75_k2")


def bundled_trellis(name: str) -> Trellis:
    """Load a bundled trellis: "spc4" (single parity check, n=4) or
    "conv75_k2" (terminated octal-[7,5] convolutional code, 2 info bits)."""
    if name not in BUNDLED:
        raise KeyError(f"unknown bundled trellis {name!r}; have {BUNDLED}")
    return loads_trellis(
        files(__package__).joinpath(f"{name}.trellis").read_text("ascii")
    )
