"""Succinct building blocks: rank/select bitvectors, wavelet trees and LOUDS."""
from ._backend import BACKEND
from .bitvec import BitVec, CompressedBitVec
from .louds import LoudsTree
from .wavelet import WaveletTree

__all__ = ["BACKEND", "BitVec", "CompressedBitVec", "LoudsTree", "WaveletTree"]
