"""Bundled small-molecule integral files for oracle validation and demos.

Each entry is a minimal-basis FCIDUMP produced by a self-contained
restricted Hartree-Fock calculation over s-type Gaussian orbitals (see
tools/make_test_integrals.py in the source tree). The files are frozen
inputs: tests pin energies and overlaps computed from them.
"""

from __future__ import annotations

import importlib.resources

from .hamiltonian import IntegralTable, parse_fcidump

__all__ = ["MOLECULES", "bundled_molecules", "load_molecule"]

# name -> (filename, equilibrium geometry?, one-line description)
MOLECULES = {
    "h2_sto3g": (
        "h2_sto3g.fcidump",
        True,
        "H2 at the equilibrium bond length, minimal basis (2 orbitals)",
    ),
    "h2_stretched": (
        "h2_stretched.fcidump",
        False,
        "H2 stretched to 4x the equilibrium bond length (2 orbitals)",
    ),
    "heh_plus": (
        "heh_plus.fcidump",
        True,
        "HeH+ at the equilibrium bond length, minimal basis (2 orbitals)",
    ),
    "h3_plus": (
        "h3_plus.fcidump",
        True,
        "Equilateral H3+ at equilibrium, minimal basis (3 orbitals)",
    ),
    "h4_chain": (
        "h4_chain.fcidump",
        True,
        "Linear H4 chain, minimal basis (4 orbitals)",
    ),
}


def bundled_molecules():
    """Names of the bundled molecules, smallest register first."""
    return list(MOLECULES)


def load_molecule(name) -> IntegralTable:
    """Parse a bundled molecule into an IntegralTable.

    Args:
        name: key from bundled_molecules().

    Raises:
        KeyError: unknown molecule name.
    """
    try:
        filename, _, _ = MOLECULES[name]
    except KeyError:
        raise KeyError(
            f"unknown molecule {name!r}; available: {', '.join(MOLECULES)}"
        ) from None
    resource = importlib.resources.files("qsimcost.data").joinpath(filename)
    with resource.open("r") as handle:
        table = parse_fcidump(handle)
    return table
