"""pd7kit: algebraic Painleve-III (D7) solutions and their large-n Weierstrass limit."""

__version__ = "0.1.0"
