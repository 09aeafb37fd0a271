#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
文単位の処理を複数プロセスで実行します．出力の順序は常に入力の順序と一致します．
"""

import concurrent.futures

CHUNK_SIZE = 500

_shared = None


def _init_worker(shared):
    global _shared
    _shared = shared


def _run_chunk(chunk):
    func, args = _shared
    return [func(item, *args) for item in chunk]


def split_chunk(item_list, chunk_size):
    return [item_list[i : i + chunk_size] for i in range(0, len(item_list), chunk_size)]


def map_ordered(func, item_list, args=(), jobs=1, progress=None, chunk_size=CHUNK_SIZE):
    """
    func(item, *args) を item_list の各要素に適用します．

    func と args は pickle 可能である必要があります．args はワーカの起動時に 1 度だけ渡します．
    progress が与えられれば，処理した件数を引数にして呼び出します．
    """
    item_list = list(item_list)
    result = []

    if jobs <= 1:
        for chunk in split_chunk(item_list, chunk_size):
            result.extend(func(item, *args) for item in chunk)
            if progress is not None:
                progress(len(chunk))
        return result

    with concurrent.futures.ProcessPoolExecutor(
        max_workers=jobs, initializer=_init_worker, initargs=((func, args),)
    ) as executor:
        for chunk_result in executor.map(_run_chunk, split_chunk(item_list, chunk_size)):
            result.extend(chunk_result)
            if progress is not None:
                progress(len(chunk_result))

    return result
