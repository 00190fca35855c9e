"""Dataset file formats."""

from .pll_format import PLLFormatError, load_dataset, save_dataset

__all__ = ["PLLFormatError", "load_dataset", "save_dataset"]
