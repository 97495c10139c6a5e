"""Dynamical Lie algebras of Pauli-string generator sets."""
from .pauli import (PauliError, PauliString, SignedPauli, commutator_string,
                    commutes, cyclic_shift, embed, parse, parse_list, product,
                    site_letter_map, transpose_sign)
from .dla import CapExceeded, DlaBasis, close, is_member

__version__ = "0.1.0"
