"""Figure scripts for the solver's CSV artifacts (consumed by path, never by import)."""

from .density_line import plot_density_line
from .mask_map import plot_mask
from .residual import plot_residual_history

__version__ = "0.1.0"
