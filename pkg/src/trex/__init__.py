"""Tree-extraction compression of unlabelled graphs with succinct navigation."""
from .errors import TrexError

__version__ = "0.1.0"

__all__ = ["TrexError", "__version__"]
