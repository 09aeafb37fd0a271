#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
乱数系列の派生を行います．

全ての乱数は 1 つのマスターシードから SHA-256 ベースの 64bit ミックスで派生させます．
文 ID ごとに独立した系列を使うので，処理順や並列度に依らず同じ結果になります．
"""

import hashlib

import numpy as np

SEED_MAX = 2**64 - 1
LABEL_SEPARATOR = "\x1f"


def check_seed(seed):
    if (type(seed) is not int) or (seed < 0) or (seed > SEED_MAX):
        raise ValueError("seed must be a 64-bit unsigned integer: {seed}".format(seed=seed))
    return seed


def derive_seed(master_seed, *labels):
    check_seed(master_seed)

    digest = hashlib.sha256(
        master_seed.to_bytes(8, "little") + LABEL_SEPARATOR.join(str(label) for label in labels).encode("utf-8")
    ).digest()

    return int.from_bytes(digest[:8], "little")


def generator(seed):
    return np.random.Generator(np.random.PCG64(check_seed(seed)))


def substream(master_seed, *labels):
    return generator(derive_seed(master_seed, *labels))
