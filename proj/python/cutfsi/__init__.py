"""Python access to the cutfsi solver core."""

from ._cutfsi import (
    CSV_HEADER,
    Config,
    Simulation,
    clip_triangle,
    cut_geometry,
    read_csv,
    stokes_verify,
    write_csv,
)

CSV_COLUMNS = tuple(CSV_HEADER.split(","))

__all__ = [
    "CSV_COLUMNS",
    "CSV_HEADER",
    "Config",
    "Simulation",
    "clip_triangle",
    "cut_geometry",
    "read_csv",
    "stokes_verify",
    "write_csv",
]
