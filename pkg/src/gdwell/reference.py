"""Built-in reference energy tables used for regression diffing.

Each entry is the published sequence E_0..E_5 (4 decimal places) for one
parameter set and boundary condition; the `table` command recomputes every
cell and reports the differences.

The (g=1, a=1.8) row is retained exactly as published even though it is not
reproducible: recomputing it with this package, with an independent
finite-difference eigensolver, and with adaptive quadrature of the first
iteration all agree on a converged energy of 0.9453, a constant ~2.2e-3
above the published row (the published row appears to correspond to a
slightly different shape parameter).  See the table command's diff output.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["TableRow", "TABLE1", "TABLE2", "TABLE3", "TABLES", "KNOWN_DISCREPANT_ROWS"]


@dataclass(frozen=True)
class TableRow:
    label: str
    g: float
    a: float
    bc: str
    energies: tuple[float, ...]   # E_0 .. E_5
    origin: str


TABLE1 = (
    TableRow("I", 1.0, 2.0, "I", (1.7321, 1.0163, 1.0031, 1.0005, 1.0001, 1.0000), "table-1"),
    TableRow("II", 1.0, 2.0, "II", (1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000), "table-1"),
)

TABLE2 = (
    TableRow("a=1.8", 1.0, 1.8, "II", (1.6733, 0.9558, 0.9418, 0.9432, 0.9431, 0.9431), "table-2"),
    TableRow("a=2", 1.0, 2.0, "II", (1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000), "table-2"),
    TableRow("a=3", 1.0, 3.0, "II", (2.0000, 1.2974, 1.2602, 1.2659, 1.2651, 1.2652), "table-2"),
)

TABLE3 = (
    TableRow("g=0.88", 0.88, 2.0, "II", (1.5242, 0.8633, 0.8517, 0.8528, 0.8527, 0.8527), "table-3"),
    TableRow("g=1", 1.0, 2.0, "II", (1.7321, 1.0163, 0.9981, 1.0002, 1.0000, 1.0000), "table-3"),
    TableRow("g=2", 2.0, 2.0, "II", (3.4641, 2.6934, 2.6375, 2.6465, 2.6455, 2.6456), "table-3"),
    TableRow("g=3", 3.0, 2.0, "II", (5.1962, 4.5786, 4.5562, 4.5591, 4.5589, 4.5589), "table-3"),
)

TABLES = {1: TABLE1, 2: TABLE2, 3: TABLE3}

# rows whose published values cannot be reproduced from the stated (g, a);
# kept for transparency, excluded from hard regression gates
KNOWN_DISCREPANT_ROWS = {("table-2", "a=1.8")}
