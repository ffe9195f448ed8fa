"""Monomial order descriptors.

An order is a tiny immutable struct handed to the packed kernels: a kind
code, an int64 block mask over the exponent columns, and a module flag.
Kind 0 is degree reverse lexicographic, kind 1 is lexicographic, kind 2
is a two-block elimination order (block 0 variables are eliminated,
grevlex inside each block, block 0 dominates).  Module orders compare the
component position first: smaller component index means greater term.
"""

from dataclasses import dataclass, field

import numpy as np

GREVLEX = 0
LEX = 1
BLOCK = 2


@dataclass(frozen=True)
class Order:
    kind: int = GREVLEX
    blk: tuple = ()
    mod: bool = False

    def blk_array(self, nvars: int) -> np.ndarray:
        if self.kind != BLOCK:
            return np.zeros(nvars, np.int64)
        if len(self.blk) != nvars:
            raise ValueError("block mask length does not match variable count")
        return np.asarray(self.blk, np.int64)

    def module(self) -> "Order":
        return Order(self.kind, self.blk, True)


def elimination(nvars: int, nelim: int) -> Order:
    """Order eliminating the first nelim of nvars variables."""
    return Order(BLOCK, tuple(0 if i < nelim else 1 for i in range(nvars)))
