"""Stateless seed derivation.

Sub-seeds are derived by hashing the textual join of their identifying parts,
so any (master seed, labels...) combination always yields the same 64-bit
seed, independent of what else was derived before it.
"""
from __future__ import annotations

import hashlib


def derive_seed(*parts: object) -> int:
    data = "|".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "big")
