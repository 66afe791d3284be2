"""Self-hostable promotional-post design studio backend."""

from .colors import KERNEL_BACKEND

__version__ = "0.1.0"
__all__ = ["KERNEL_BACKEND", "__version__"]
