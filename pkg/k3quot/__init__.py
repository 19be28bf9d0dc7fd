"""k3-quotients - branch divisors of abelian K3 covers of Hirzebruch surfaces."""

import importlib.metadata

try:
    __version__ = importlib.metadata.version("k3-quotients")
except importlib.metadata.PackageNotFoundError:
    # Fallback for development/testing when package isn't installed
    __version__ = "0.1.0-dev"
