"""Exact osp(1|2)-equivariant symbol and quantization maps for n-ary operators on S^{1|1}."""

from .contact import ContactField, WeightedDensity, contact_apply, contact_bracket, lie_density, osp_generators
from .equivariant import (
    CoefficientTable,
    ResonantDelta,
    gamma,
    gamma_table,
    invert_gamma,
    quantize,
    solve_varpi,
    symbol_map,
    table_from_json,
    table_to_json,
)
from .nary import NaryOperator, apply, lie_operator_closed, lie_operator_oracle
from .superfield import Parity, SuperFunction, apply_D, apply_Dbar
from .symbols import Symbol, lie_symbol

__all__ = [
    "CoefficientTable", "ContactField", "NaryOperator", "Parity", "ResonantDelta", "SuperFunction",
    "Symbol", "WeightedDensity", "apply", "apply_D", "apply_Dbar", "contact_apply", "contact_bracket",
    "gamma", "gamma_table", "invert_gamma", "lie_density", "lie_operator_closed", "lie_operator_oracle",
    "lie_symbol", "osp_generators", "quantize", "solve_varpi", "symbol_map", "table_from_json",
    "table_to_json",
]
