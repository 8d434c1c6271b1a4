"""Computations in BS(2,3) = <a, b | b a^2 = a^3 b>: word problem, the epimorphism
a -> a^2, its Bass-Serre tree picture and a free basis of its kernel."""

from .britton import BS23, GroupParams, britton_reduce, is_trivial, normal_form, words_equal
from .endo import KERNEL_GENERATOR, PHI, PHI_PRIME, apply_endo, in_kernel
from .kernel import BasisElement, Decomposition, NonKernel, decompose
from .words import Word, parse_word

__all__ = [
    "BS23",
    "GroupParams",
    "britton_reduce",
    "is_trivial",
    "normal_form",
    "words_equal",
    "KERNEL_GENERATOR",
    "PHI",
    "PHI_PRIME",
    "apply_endo",
    "in_kernel",
    "BasisElement",
    "Decomposition",
    "NonKernel",
    "decompose",
    "Word",
    "parse_word",
]
