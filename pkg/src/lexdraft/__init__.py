"""Local legal-draft pipeline: corpus prep, character LMs, decoding, format checks."""

__version__ = "0.1.0"
