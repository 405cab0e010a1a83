"""Certificate search and verification for invariable generation of A_n."""

__version__ = "0.1.0"
ENGINE_VERSION = __version__
