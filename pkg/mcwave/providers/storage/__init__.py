from .base import StorageProvider
from .local_file import LocalFileStorageProvider

__all__ = [
    "StorageProvider",
    "LocalFileStorageProvider",
]
