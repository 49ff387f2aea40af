"""Registry of the shipped line codes and their energy accounting.

Each entry fixes the block geometry, the chip modulation, and the dB
ledger: ``on_chips_per_data_bit`` is the average number of ON chip slots
spent per data bit, which converts Eb/N0 into a per-sample noise level.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from .channel import OOK, VPPM50, ModulationMap
from .codebook import Codebook, builtin_4b6b, builtin_5b10b, builtin_manchester

__all__ = ["CODE_NAMES", "LineCode", "get_code"]


@dataclasses.dataclass(frozen=True)
class LineCode:
    """A named line code with its geometry and analysis hooks.

    ``bound_spectrum_step_energy`` scales the squared chip distance that one
    unit of the distance spectrum contributes to the pairwise error bound:
    1.0 for OOK (spectrum index r means chip distance 2r, energy gap r) and
    2.0 for 50% VPPM (each differing coded bit moves the pulse, doubling the
    sample-domain gap). None disables the single-block bound (stateful
    codes whose block distance understates the sequence distance).
    """

    name: str
    data_bits_per_symbol: int
    chips_per_symbol: int
    modulation: ModulationMap
    on_chips_per_data_bit: Fraction
    codebook: Codebook | None
    bound_spectrum_step_energy: float | None

    @property
    def samples_per_symbol(self) -> int:
        return self.chips_per_symbol * self.modulation.chips_per_coded_bit

    @property
    def rate(self) -> Fraction:
        return Fraction(self.data_bits_per_symbol, self.chips_per_symbol)


def _registry() -> dict[str, LineCode]:
    return {
        "manchester": LineCode(
            name="manchester", data_bits_per_symbol=1, chips_per_symbol=2,
            modulation=OOK, on_chips_per_data_bit=Fraction(1),
            codebook=builtin_manchester(), bound_spectrum_step_energy=1.0),
        "4b6b": LineCode(
            name="4b6b", data_bits_per_symbol=4, chips_per_symbol=6,
            modulation=VPPM50, on_chips_per_data_bit=Fraction(3, 2),
            codebook=builtin_4b6b(), bound_spectrum_step_energy=2.0),
        "8b10b": LineCode(
            name="8b10b", data_bits_per_symbol=8, chips_per_symbol=10,
            modulation=OOK, on_chips_per_data_bit=Fraction(5, 8),
            codebook=None, bound_spectrum_step_energy=None),
        "5b10b": LineCode(
            name="5b10b", data_bits_per_symbol=5, chips_per_symbol=10,
            modulation=OOK, on_chips_per_data_bit=Fraction(1),
            codebook=builtin_5b10b(), bound_spectrum_step_energy=1.0),
    }


CODE_NAMES: tuple[str, ...] = ("manchester", "4b6b", "8b10b", "5b10b")


def get_code(name: str) -> LineCode:
    reg = _registry()
    if name not in reg:
        raise ValueError(f"unknown code {name!r}; choose from {', '.join(CODE_NAMES)}")
    return reg[name]
