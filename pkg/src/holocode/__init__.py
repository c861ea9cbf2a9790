"""Holographic pentagon codes: tilings, stabilizer codes, dense tensors and Majorana dimers."""

from __future__ import annotations

__version__ = "0.1.0"

from holocode.dimer import (
    DimerState,
    MajoranaMonomial,
    ZeroContractionError,
    contract_dimers,
    dimer_entropy,
    five_qubit_basis_dimers,
    jordan_wigner,
    total_parity,
    two_point,
    wick_four_point,
)
from holocode.errors import (
    CodeSpaceError,
    GeometryError,
    HolocodeError,
    ResourceLimitError,
    SchemaError,
    SearchLimitError,
)
from holocode.holocode import (
    HolographicCode,
    WedgeResult,
    boundary_state,
    central_charge_fit,
    correlation_histogram,
    greedy_wedge,
    mutual_information_boundary,
    operator_pushing_check,
    rt_entropy,
)
from holocode.stabilizer import PauliString, StabilizerCode, code_distance, five_qubit_code, three_qutrit_code
from holocode.tiling import Inflation, TilingGraph, TilingSpec, generate, validate_schlafli

__all__ = [
    "CodeSpaceError",
    "DimerState",
    "GeometryError",
    "HolocodeError",
    "HolographicCode",
    "Inflation",
    "MajoranaMonomial",
    "PauliString",
    "ResourceLimitError",
    "SchemaError",
    "SearchLimitError",
    "StabilizerCode",
    "TilingGraph",
    "TilingSpec",
    "WedgeResult",
    "ZeroContractionError",
    "boundary_state",
    "central_charge_fit",
    "code_distance",
    "contract_dimers",
    "correlation_histogram",
    "dimer_entropy",
    "five_qubit_basis_dimers",
    "five_qubit_code",
    "generate",
    "greedy_wedge",
    "jordan_wigner",
    "mutual_information_boundary",
    "operator_pushing_check",
    "rt_entropy",
    "three_qutrit_code",
    "total_parity",
    "two_point",
    "validate_schlafli",
    "wick_four_point",
]
